from typing import List, Optional, Sequence

import numpy as np
from rich.console import Console, Group
from rich.panel import Panel
from rich.table import Table

from .models import (
    BlockRealizationReport,
    GCirculant,
    MatchReport,
    RealizationReport,
    Spectrum,
    VerificationReport,
)
from .numtheory import GeneratorCertificate

console = Console()
err_console = Console(stderr=True)


def _num(value: float) -> str:
    return "0" if abs(value) < 1e-12 else f"{value:.6g}"


def _complex(value: complex) -> str:
    if abs(value.imag) < 1e-12:
        return _num(value.real)
    sign = "-" if value.imag < 0 else "+"
    return f"{_num(value.real)} {sign} {_num(abs(value.imag))}i"


def format_spectrum_table(spectrum: Spectrum, title: str = "Spectrum") -> Table:
    """Eigenvalues with their moduli, in the order given."""
    table = Table(title=title)

    table.add_column("#", justify="right", style="dim")
    table.add_column("Real", style="cyan", justify="right")
    table.add_column("Imag", style="green", justify="right")
    table.add_column("Modulus", style="yellow", justify="right")

    for i, value in enumerate(spectrum.values):
        table.add_row(str(i), _num(value.real), _num(value.imag), _num(abs(value)))

    return table


def format_match_panel(match: MatchReport) -> Panel:
    colour = "green" if match.matched else "red"
    verdict = "match" if match.matched else "MISMATCH"
    return Panel(
        f"[{colour}]{verdict}[/{colour}]  max residual {match.max_residual:.3g}"
        f" (tol {match.tol:.3g})",
        title="Oracle comparison",
        border_style=colour,
    )


def format_certificate_table(certificate: GeneratorCertificate) -> Table:
    """Divisor table of a cyclic-generator test."""
    verdict = "generator" if certificate.is_generator else "not a generator"
    table = Table(title=f"g = {certificate.g} mod {certificate.p}: {verdict}")

    table.add_column("d | p-1", style="cyan", justify="right")
    table.add_column("g^d mod p", style="magenta", justify="right")

    for d, residue in certificate.checked_divisors:
        shown = f"[red]{residue}[/red]" if residue == 1 else str(residue)
        table.add_row(str(d), shown)

    return table


def format_generators_panel(
    p: int, generators: List[int], certificates: Sequence[GeneratorCertificate]
) -> Group:
    summary = Panel(
        ", ".join(str(g) for g in generators) or "none",
        title=f"Cyclic generators of U(Z/{p}Z)",
        border_style="cyan",
    )
    return Group(summary, *(format_certificate_table(c) for c in certificates))


def format_matrix_table(matrix: np.ndarray, title: Optional[str] = None) -> Table:
    """Dense matrix, real entries shown without imaginary parts."""
    table = Table(title=title, show_header=False, box=None, pad_edge=False)
    for _ in range(matrix.shape[1]):
        table.add_column(justify="right")
    for row in matrix:
        table.add_row(*(_complex(complex(z)) for z in row))
    return table


def format_gcirculant_panel(a: GCirculant, title: str = "g-circulant") -> Panel:
    content = [
        f"[cyan]Order:[/cyan] {a.n}",
        f"[green]Shift:[/green] {a.g}",
        f"[yellow]First row:[/yellow] ({', '.join(_complex(z) for z in a.row)})",
    ]
    return Panel("\n".join(content), title=title, border_style="cyan")


def format_realization_panel(report: RealizationReport, matrix: np.ndarray) -> Panel:
    t = report.target
    colour = "green" if report.nonnegative else "red"
    content = [
        f"[cyan]Target:[/cyan] beta1={t.beta1:g}, beta2={t.beta2:g}, p={t.p}, g={t.g}",
        f"[{colour}]Nonnegative:[/{colour}] {report.nonnegative}"
        f"  (min entry {report.min_entry:.6g})",
    ]
    if report.spectrum_residual is not None:
        content.append(
            f"[yellow]Oracle residual:[/yellow] {report.spectrum_residual:.3g}"
        )
    if report.witness:
        w = report.witness
        content.append(f"[red]Witness:[/red] entry ({w.row}, {w.col}) = {w.value:.6g}")
    body = Group("\n".join(content), format_matrix_table(matrix))
    return Panel(body, title="Realization", border_style=colour)


def format_block_report(report: BlockRealizationReport) -> Panel:
    t = report.targets
    colour = "green" if report.nonnegative else "red"
    content = [
        f"[cyan]Grid:[/cyan] p={t.p}, g={t.g}, block order n={t.n}",
        f"[{colour}]L_k nonnegative:[/{colour}] {report.nonnegative}"
        f"  (min {report.min_entry:.6g})",
        f"[magenta]G-matrix condition:[/magenta] {report.g_condition}",
    ]
    if report.witness:
        w = report.witness
        content.append(
            f"[red]Witness:[/red] L_{w.k}[{w.u}, {w.v}] = {w.value:.6g}"
        )
    if report.spectrum_residual is not None:
        content.append(
            f"[yellow]Oracle residual:[/yellow] {report.spectrum_residual:.3g}"
        )
    tables = [
        format_matrix_table(np.array(l_k), title=f"L_{k}")
        for k, l_k in enumerate(report.l_matrices)
    ]
    return Panel(
        Group("\n".join(content), *tables),
        title="Block realization",
        border_style=colour,
    )


def format_verification_table(report: VerificationReport) -> Table:
    table = Table(title=f"{report.suite} suite (seed {report.seed}): {report.summary}")

    table.add_column("Check", style="cyan")
    table.add_column("Result", justify="center")
    table.add_column("Max residual", justify="right", style="yellow")
    table.add_column("Detail", style="dim")

    for check in report.checks:
        result = "[green]pass[/green]" if check.passed else "[red]FAIL[/red]"
        residual = "-" if check.max_residual is None else f"{check.max_residual:.3g}"
        table.add_row(check.name, result, residual, check.detail)

    return table
