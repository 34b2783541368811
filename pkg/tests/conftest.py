"""
Pytest configuration and shared fixtures for the tcb-foliation test suite.
"""

import logging
import os
import random
import sys
import tempfile
from pathlib import Path

import pytest

# Add src to path for imports during testing
sys.path.insert(0, str(Path(__file__).parent.parent / "src"))
sys.path.insert(0, str(Path(__file__).parent))

# Disable logging during tests to reduce noise
logging.getLogger("tcb_foliation").setLevel(logging.CRITICAL)

from factories import (  # noqa: E402
    golden_torus,
    second_torus,
    small_obstacle_torus,
    swapped_golden_torus,
    wide_obstacle_torus,
)
from tcb_foliation.core.genus2_glue import glue  # noqa: E402


@pytest.fixture
def g1():
    return golden_torus()


@pytest.fixture
def t2():
    return second_torus()


@pytest.fixture
def s2():
    return small_obstacle_torus()


@pytest.fixture
def r_torus():
    return wide_obstacle_torus()


@pytest.fixture
def g1_swapped():
    return swapped_golden_torus()


@pytest.fixture
def glued(g1, t2):
    """Type I surface glued from the golden and second tori."""
    return glue(g1, t2)


@pytest.fixture
def rng():
    """Seeded random generator for property sweeps."""
    return random.Random(20240611)


@pytest.fixture
def temp_dir():
    """Create a temporary directory for test files."""
    with tempfile.TemporaryDirectory() as temp_dir:
        yield temp_dir


@pytest.fixture
def clean_environment():
    """Ensure clean environment variables for testing."""
    original_env = os.environ.copy()

    for var in ("TCB_SEED", "TCB_WINDOW_CAP", "TCB_MAX_DEPTH", "TCB_LOG_LEVEL"):
        if var in os.environ:
            del os.environ[var]

    yield

    os.environ.clear()
    os.environ.update(original_env)


@pytest.fixture
def capture_logs():
    """Capture log messages during testing."""
    from io import StringIO

    log_capture = StringIO()
    handler = logging.StreamHandler(log_capture)
    handler.setLevel(logging.DEBUG)

    logger = logging.getLogger("tcb_foliation")
    previous = logger.level
    logger.addHandler(handler)
    logger.setLevel(logging.DEBUG)

    yield log_capture

    logger.removeHandler(handler)
    logger.setLevel(previous)


# Pytest configuration
def pytest_configure(config):
    """Configure pytest with custom markers."""
    config.addinivalue_line(
        "markers", "slow: marks tests as slow (deselect with '-m \"not slow\"')"
    )
    config.addinivalue_line("markers", "integration: marks tests as integration tests")
    config.addinivalue_line("markers", "unit: marks tests as unit tests")


def pytest_collection_modifyitems(config, items):
    """Modify test collection to add markers automatically."""
    for item in items:
        if "cli" in item.fspath.basename or "oracle" in item.fspath.basename:
            item.add_marker(pytest.mark.integration)
        else:
            item.add_marker(pytest.mark.unit)


