"""Display manager for rich terminal output."""

from typing import Any, Dict, List, Optional, Union

from rich.console import Console
from rich.panel import Panel
from rich.table import Table
from rich.text import Text
from rich.tree import Tree

from ..core.building_data import BuildingReport, Classification
from ..core.genus2_glue import FivePartition
from ..core.torus_flow import StreetSet
from ..utils.config import config_manager


class DisplayManager:
    """Manages rich terminal display and formatting."""

    def __init__(self, console: Optional[Console] = None):
        color = "auto" if config_manager.config.color_output else None
        self.console = console or Console(color_system=color)
        self.err_console = Console(stderr=True, color_system=color)

    def print(self, *args, **kwargs) -> None:
        """Print with rich formatting."""
        self.console.print(*args, **kwargs)

    def print_panel(
        self,
        content: Union[str, Text],
        title: Optional[str] = None,
        style: str = "blue",
        border_style: str = "blue",
        stderr: bool = False,
    ) -> None:
        """Print content in a panel."""
        panel = Panel(
            content, title=title, style=style, border_style=border_style, padding=(1, 2)
        )
        (self.err_console if stderr else self.console).print(panel)

    def print_header(self, text: str, style: str = "bold blue") -> None:
        """Print a header."""
        self.console.print(f"\n{text}", style=style)
        self.console.print("─" * len(text), style=style)

    def _message(self, kind: str, color: str, message: str, details: Optional[str]) -> Text:
        text = Text(f"{kind.upper()}: ", style=f"bold {color}")
        text.append(message, style=color)
        if details:
            text = Text.assemble(text, "\n\n", details)
        return text

    def print_error(self, message: str, details: Optional[str] = None) -> None:
        """Print an error message to stderr."""
        self.print_panel(
            self._message("error", "red", message, details),
            title="Error",
            style="red",
            border_style="red",
            stderr=True,
        )

    def print_warning(self, message: str, details: Optional[str] = None) -> None:
        self.print_panel(
            self._message("warning", "yellow", message, details),
            title="Warning",
            style="yellow",
            border_style="yellow",
            stderr=True,
        )

    def print_success(self, message: str, details: Optional[str] = None) -> None:
        self.print_panel(
            self._message("success", "green", message, details),
            title="Success",
            style="green",
            border_style="green",
        )

    def print_info(self, message: str, details: Optional[str] = None) -> None:
        self.print_panel(
            self._message("info", "cyan", message, details),
            title="Information",
            style="cyan",
            border_style="cyan",
        )

    def print_table(
        self,
        data: List[Dict[str, Any]],
        title: Optional[str] = None,
        show_header: bool = True,
    ) -> None:
        """Print data in a table format."""
        if not data:
            self.print("No data to display", style="dim")
            return

        table = Table(title=title, show_header=show_header)
        for key in data[0].keys():
            table.add_column(str(key), style="cyan")
        for row in data:
            table.add_row(*[str(value) for value in row.values()])
        self.console.print(table)

    def print_tree(self, root_data: Dict[str, Any], title: Optional[str] = None) -> None:
        """Print nested data as a tree."""
        tree = Tree(title or "Result")
        self._add_tree_nodes(tree, root_data)
        self.console.print(tree)

    def _add_tree_nodes(self, parent, data: Any) -> None:
        if isinstance(data, dict):
            if set(data) == {"exact", "approx"}:
                parent.add(f"{data['exact']}  [dim]≈ {data['approx']:.6g}[/dim]")
                return
            for key, value in data.items():
                if isinstance(value, dict) and set(value) == {"exact", "approx"}:
                    parent.add(f"{key}: {value['exact']}  [dim]≈ {value['approx']:.6g}[/dim]")
                elif isinstance(value, (dict, list)):
                    branch = parent.add(f"[bold]{key}[/bold]")
                    self._add_tree_nodes(branch, value)
                else:
                    parent.add(f"{key}: {value}")
        elif isinstance(data, list):
            for i, item in enumerate(data):
                if isinstance(item, (dict, list)):
                    branch = parent.add(f"[bold][{i}][/bold]")
                    self._add_tree_nodes(branch, item)
                else:
                    parent.add(f"[{i}]: {item}")
        else:
            parent.add(str(data))

    def print_street_set(self, ss: StreetSet) -> None:
        """Three streets with widths, translates and classes."""
        table = Table(title=f"Streets (m = {ss.m})")
        table.add_column("Street", style="cyan")
        table.add_column("Width")
        table.add_column("≈", style="dim")
        table.add_column("Translate", style="green")
        table.add_column("Class", style="magenta")
        for k in (0, 1, 2):
            width = ss.widths[k]
            table.add_row(
                str(k),
                width.format(),
                f"{float(width):.6f}",
                str(ss.translates[k]),
                str(ss.classes[k]),
            )
        self.console.print(table)
        self.print(f"|a*| = {ss.a_star}   |b*| = {ss.b_star}", style="dim")

    def print_partition(self, fp: FivePartition) -> None:
        """Five sub-segments in domain order."""
        table = Table(title=f"Type {fp.type_id.value}, sigma = {fp.sigma_text}")
        table.add_column("q", style="cyan")
        table.add_column("Label", style="green")
        table.add_column("tau_q")
        table.add_column("≈", style="dim")
        table.add_column("Shift")
        for q, (label, width, shift) in enumerate(
            zip(fp.label_text, fp.tau, fp.shifts), start=1
        ):
            table.add_row(f"R{q}", label, width.format(), f"{float(width):.6f}", shift.format())
        self.console.print(table)
        for name, change in fp.metadata.get("corrections", {}).items():
            self.print_warning(
                f"published {name} corrected",
                f"published {change['published']}, derived {change['derived']}",
            )

    def print_report(self, report: BuildingReport) -> None:
        """Building-data validation report."""
        if report.valid:
            self.print_success(
                "building data valid",
                f"{report.leaves} leaves, {report.inner_vertices} inner vertices",
            )
            return
        self.print_table(
            [
                {"Invariant": v.invariant, "Subject": v.subject or "", "Message": v.message}
                for v in report.violations
            ],
            title=f"{len(report.violations)} violations",
        )

    def print_classification(self, c: Classification) -> None:
        self.print_tree(c.model_dump(mode="json"), title=f"Genus {c.genus} foliation")


# Global display instance
display = DisplayManager()
