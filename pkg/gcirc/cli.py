import logging
import sys
from pathlib import Path
from typing import Any, Dict, List, Optional, Tuple

import numpy as np
import typer
from pydantic import BaseModel, ValidationError
from rich.console import Group, RenderableType
from rich.logging import RichHandler
from rich.markup import escape
from rich.panel import Panel

from .blockcirc import assemble, block_spectrum, block_target_spectrum, realize_block
from .config import ConfigManager, resolve_tolerance
from .errors import DomainError, MalformedInput, OracleFailure, VerificationFailure
from .formatters import (
    console,
    err_console,
    format_block_report,
    format_gcirculant_panel,
    format_generators_panel,
    format_match_panel,
    format_realization_panel,
    format_spectrum_table,
    format_verification_table,
)
from .matcore import to_dense
from .models import (
    AppConfig,
    BlockGCirculant,
    BlockTargets,
    CommandResult,
    DiagonalVector,
    GCirculant,
    Spectrum,
    TargetList,
)
from .niep import realize, target_spectrum
from .numtheory import is_cyclic_generator, is_prime, list_generators
from .reconstruct import complete_with_perron, diagonal_of, first_row_from_diagonal
from .spectra import (
    circulant_eigenvalues,
    dense_eigen_oracle,
    g_circulant_spectrum,
    pd_form,
    pd_spectrum,
    spectra_match,
)
from .utils import (
    dumps,
    load_json_file,
    matrix_to_json,
    parse_optional_values,
    parse_values,
)
from .verify import run_golden, run_property

app = typer.Typer(
    help="gcirc - spectra, reconstruction and nonnegative realizations of "
    "g-circulant matrices",
    no_args_is_help=True,
)

EXIT_DOMAIN = 2
EXIT_VERIFICATION = 3
EXIT_MALFORMED = 4
OUTPUT_FORMATS = ("json", "table")


class RunState(BaseModel):
    """Settings resolved once per invocation from flags, env and config file."""

    config: AppConfig
    config_path: Optional[Path] = None
    tol: float
    seed: int
    output_format: str = "json"
    json_out: Optional[Path] = None

    @property
    def digits(self) -> int:
        return self.config.significant_digits


def _default_state() -> RunState:
    config = AppConfig()
    return RunState(config=config, tol=config.tol, seed=config.seed)


def describe(error: BaseException) -> str:
    if isinstance(error, ValidationError):
        messages = [err["msg"].removeprefix("Value error, ") for err in error.errors()]
        return "; ".join(messages)
    return str(error)


def exit_code(error: BaseException) -> int:
    """Map an exception onto the documented exit codes."""
    if isinstance(error, ValidationError):
        causes = [err.get("ctx", {}).get("error") for err in error.errors()]
        if any(isinstance(cause, DomainError) for cause in causes):
            return EXIT_DOMAIN
        return EXIT_MALFORMED
    if isinstance(error, DomainError):
        return EXIT_DOMAIN
    if isinstance(error, (VerificationFailure, OracleFailure)):
        return EXIT_VERIFICATION
    if isinstance(error, ValueError):
        return EXIT_MALFORMED
    return 1


def emit(
    state: RunState,
    payload: Dict[str, Any],
    renderable: Optional[RenderableType] = None,
    status: str = "ok",
    diagnostics: Optional[List[str]] = None,
) -> None:
    """Print a CommandResult as JSON (or a rich view) and mirror it to --json-out."""
    result = CommandResult(
        status=status, payload=payload, diagnostics=diagnostics or []
    )
    text = dumps(result.model_dump(), state.digits)
    if state.json_out:
        state.json_out.write_text(text + "\n", encoding="utf-8")
    if state.output_format == "table" and renderable is not None:
        console.print(renderable)
    else:
        typer.echo(text)


def fail(state: Optional[RunState], error: BaseException) -> None:
    state = state or _default_state()
    message = describe(error)
    err_console.print(f"[red]Error:[/red] {escape(message)}")
    if state.output_format == "json":
        result = CommandResult(
            status="error",
            payload={"error": type(error).__name__},
            diagnostics=[message],
        )
        typer.echo(dumps(result.model_dump(), state.digits))
    sys.exit(exit_code(error))


def setup_logging(verbose: bool) -> None:
    logging.basicConfig(
        level=logging.DEBUG if verbose else logging.WARNING,
        format="%(message)s",
        handlers=[RichHandler(console=err_console, show_time=False, show_path=False)],
        force=True,
    )


@app.callback()
def main_callback(
    ctx: typer.Context,
    tol: Optional[float] = typer.Option(
        None, "--tol", help="Spectrum matching tolerance (default 1e-6)"
    ),
    json_out: Optional[Path] = typer.Option(
        None, "--json-out", help="Also write the JSON result to this file"
    ),
    seed: Optional[int] = typer.Option(None, "--seed", help="Seed for random suites"),
    output_format: Optional[str] = typer.Option(
        None, "--format", help="Output format: json, table"
    ),
    verbose: bool = typer.Option(False, "--verbose", "-v", help="Debug logging"),
    config_file: Optional[Path] = typer.Option(
        None, "--config-file", envvar="GCIRC_CONFIG", help="Configuration file path"
    ),
) -> None:
    """Resolve global settings before any command runs."""
    setup_logging(verbose)
    try:
        config = ConfigManager(config_file).load_config()
        chosen_format = output_format or config.output_format
        if chosen_format not in OUTPUT_FORMATS:
            raise MalformedInput(f"Unknown output format: {chosen_format}")
        if tol is not None and tol <= 0:
            raise MalformedInput(f"--tol must be positive, got {tol}")
        ctx.obj = RunState(
            config=config,
            config_path=config_file,
            tol=resolve_tolerance(config, tol),
            seed=config.seed if seed is None else seed,
            output_format=chosen_format,
            json_out=json_out,
        )
    except Exception as e:
        fail(None, e)


@app.command()
def generators(
    ctx: typer.Context,
    p: int = typer.Argument(..., help="Prime modulus"),
    show_all: bool = typer.Option(
        False, "--all", "-a", help="Certify every residue, not only the generators"
    ),
) -> None:
    """List the cyclic generators of U(Z/pZ) with their divisor certificates."""
    state: RunState = ctx.obj
    try:
        found = list_generators(p)
        candidates = range(2, p) if show_all else found
        certificates = [is_cyclic_generator(g, p) for g in candidates]
        payload = {
            "p": p,
            "generators": found,
            "certificates": [c.model_dump(mode="json") for c in certificates],
        }
        emit(state, payload, format_generators_panel(p, found, certificates))
    except Exception as e:
        fail(state, e)


def gcirculant_spectrum_of(a: GCirculant, tol: float) -> Tuple[Spectrum, str]:
    """Closed-form spectrum of a g-circulant, choosing the applicable route."""
    row = a.row_array()
    if (
        is_prime(a.n)
        and np.all(row.imag == 0)
        and is_cyclic_generator(a.g, a.n).is_generator
    ):
        spectrum = g_circulant_spectrum(circulant_eigenvalues(row), a.n, a.g, tol)
        return spectrum, "generator"
    return pd_spectrum(pd_form(a), tol), "pd-form"


@app.command()
def eig(
    ctx: typer.Context,
    circ: bool = typer.Option(False, "--circ", help="Treat --row as a circulant"),
    gcirc: bool = typer.Option(False, "--gcirc", help="Treat --row as a g-circulant"),
    block: Optional[Path] = typer.Option(
        None, "--block", help="Block g-circulant JSON file"
    ),
    row: Optional[str] = typer.Option(None, "--row", help="First row, e.g. 1,2,3"),
    g: Optional[int] = typer.Option(None, "--g", help="Shift of the g-circulant"),
    oracle: bool = typer.Option(
        False, "--oracle", help="Compare against the dense eigenvalue oracle"
    ),
) -> None:
    """Closed-form eigenvalues of a circulant, g-circulant or block matrix."""
    state: RunState = ctx.obj
    try:
        if circ + gcirc + (block is not None) != 1:
            raise MalformedInput("Choose exactly one of --circ, --gcirc and --block")

        if block is not None:
            b = BlockGCirculant.model_validate(load_json_file(block))
            spectrum, method = block_spectrum(b, tol=state.tol), "block"
            dense = assemble(b)
            described = b.model_dump(mode="json")
        else:
            if row is None:
                raise MalformedInput("--row is required with --circ and --gcirc")
            if gcirc and g is None:
                raise MalformedInput("--g is required with --gcirc")
            a = GCirculant.from_row(parse_values(row), g=1 if circ else g or 0)
            if circ:
                values = circulant_eigenvalues(a.row)
                spectrum, method = Spectrum(values=list(values), tol=state.tol), "dft"
            else:
                spectrum, method = gcirculant_spectrum_of(a, state.tol)
            dense = to_dense(a)
            described = a.model_dump(mode="json")

        payload: Dict[str, Any] = {
            "matrix": described,
            "method": method,
            "spectrum": spectrum.model_dump(mode="json"),
        }
        views: List[RenderableType] = [format_spectrum_table(spectrum)]
        if oracle:
            reference = dense_eigen_oracle(dense, tol=state.tol)
            match = spectra_match(spectrum, reference, state.tol)
            payload["oracle"] = {
                "spectrum": reference.model_dump(mode="json"),
                "matched": match.matched,
                "max_residual": match.max_residual,
            }
            views.append(format_match_panel(match))
            if not match.matched:
                diagnostic = (
                    f"Closed form and oracle differ by {match.max_residual:.3g} "
                    f"(tol {state.tol:.3g})"
                )
                err_console.print(f"[red]Error:[/red] {diagnostic}")
                emit(state, payload, Group(*views), "error", [diagnostic])
                sys.exit(EXIT_VERIFICATION)
        emit(state, payload, Group(*views))
    except Exception as e:
        fail(state, e)


@app.command("realize")
def realize_command(
    ctx: typer.Context,
    beta1: float = typer.Argument(..., help="Perron value beta1"),
    beta2: float = typer.Argument(..., help="Common modulus beta2 >= 0"),
    p: int = typer.Argument(..., help="Odd prime order"),
    g: int = typer.Argument(..., help="Cyclic generator of U(Z/pZ)"),
) -> None:
    """Realize (beta1, beta2, beta2*phi, ...) as a real g-circulant."""
    state: RunState = ctx.obj
    try:
        target = TargetList(beta1=beta1, beta2=beta2, p=p, g=g)
        report = realize(target, tol=state.tol)
        dense = to_dense(report.matrix).real
        payload = report.model_dump(mode="json")
        payload["dense"] = matrix_to_json(dense)
        payload["target_spectrum"] = target_spectrum(target).values
        emit(state, payload, format_realization_panel(report, dense))
    except Exception as e:
        fail(state, e)


@app.command("reconstruct")
def reconstruct_command(
    ctx: typer.Context,
    file: Optional[Path] = typer.Argument(
        None, help='JSON file {"n", "g", "diagonal", "beta1"}'
    ),
    n: Optional[int] = typer.Option(None, "--n", help="Prime order"),
    g: Optional[int] = typer.Option(None, "--g", help="Cyclic generator"),
    diagonal: Optional[str] = typer.Option(
        None, "--diagonal", help="Diagonal entries, '?' marks the unknown one"
    ),
    beta1: Optional[float] = typer.Option(
        None, "--beta1", help="Perron root, used to fill an unknown entry"
    ),
) -> None:
    """Recover a g-circulant from its diagonal."""
    state: RunState = ctx.obj
    try:
        values: Any
        if file is not None:
            data = load_json_file(file)
            if not isinstance(data, dict):
                raise MalformedInput(f"{file} must hold a JSON object")
            n, g, values = data.get("n"), data.get("g"), data.get("diagonal")
            if data.get("beta1") is not None:
                try:
                    beta1 = float(data["beta1"])
                except (TypeError, ValueError):
                    raise MalformedInput(
                        f"beta1 must be a real number, got {data['beta1']!r}"
                    ) from None
        elif n is None or g is None or diagonal is None:
            raise MalformedInput("Give a JSON file or all of --n, --g and --diagonal")
        else:
            values = parse_optional_values(diagonal)

        d = DiagonalVector(n=n, g=g, values=values)
        if d.unknown_index is None:
            a = first_row_from_diagonal(d)
        elif beta1 is None:
            raise DomainError("One diagonal entry is unknown and no beta1 was given")
        else:
            a = complete_with_perron(d, beta1)

        payload = {
            "matrix": a.model_dump(mode="json"),
            "diagonal": diagonal_of(a),
            "completed_index": d.unknown_index,
        }
        emit(state, payload, format_gcirculant_panel(a, title="Reconstructed"))
    except Exception as e:
        fail(state, e)


@app.command("block-realize")
def block_realize_command(
    ctx: typer.Context,
    file: Path = typer.Argument(..., help='JSON file {"p", "g", "beta1", "beta2"}'),
) -> None:
    """Realize per-k targets as a nonnegative block g-circulant."""
    state: RunState = ctx.obj
    try:
        targets = BlockTargets.model_validate(load_json_file(file))
        report = realize_block(targets, tol=state.tol)
        payload = report.model_dump(mode="json")
        payload["target_spectrum"] = block_target_spectrum(targets).values
        emit(state, payload, format_block_report(report))
    except Exception as e:
        fail(state, e)


@app.command()
def verify(
    ctx: typer.Context,
    suite: str = typer.Option("golden", "--suite", help="Suite: golden, property"),
    seed: Optional[int] = typer.Option(None, "--seed", help="Seed (property suite)"),
    golden_file: Optional[Path] = typer.Option(
        None, "--golden-file", help="Replay this golden file instead of the bundled one"
    ),
    trials: int = typer.Option(20, "--trials", help="Random cases per property"),
    block_trials: int = typer.Option(
        50, "--block-trials", help="Random block targets per grid"
    ),
) -> None:
    """Replay the golden examples or the randomized property suite."""
    state: RunState = ctx.obj
    try:
        if suite == "golden":
            report = run_golden(golden_file or state.config.golden_file)
        elif suite == "property":
            chosen_seed = state.seed if seed is None else seed
            report = run_property(chosen_seed, trials, block_trials)
        else:
            raise MalformedInput(f"Unknown suite: {suite}")

        payload = report.model_dump(mode="json")
        view = format_verification_table(report)
        if not report.passed:
            failed = [f"{c.name}: {c.detail}" for c in report.checks if not c.passed]
            err_console.print(f"[red]Error:[/red] {report.summary}")
            emit(state, payload, view, "error", failed)
            sys.exit(EXIT_VERIFICATION)
        emit(state, payload, view)
    except Exception as e:
        fail(state, e)


@app.command()
def config(
    ctx: typer.Context,
    action: str = typer.Argument(..., help="Action to perform: get, set, show"),
    key: Optional[str] = typer.Argument(None, help="Config key to get/set"),
    value: Optional[str] = typer.Argument(None, help="Value to set"),
) -> None:
    """Manage gcirc configuration."""
    state: RunState = ctx.obj
    try:
        if action not in ["get", "set", "show"]:
            raise MalformedInput("Invalid action. Use 'get', 'set', or 'show'")

        config_manager = ConfigManager(state.config_path)
        current = config_manager.load_config()

        if action == "show" or (action == "get" and not key):
            data = current.model_dump(mode="json")
            emit(state, data, Panel("\n".join(f"{k}: {v}" for k, v in data.items())))
            return

        if not key or key not in AppConfig.model_fields:
            raise MalformedInput(
                f"Unknown config key: {key}. Available keys: "
                f"{', '.join(AppConfig.model_fields)}"
            )

        if action == "get":
            shown = current.model_dump(mode="json")[key]
            emit(state, {key: shown}, f"{key}: {shown}")
            return

        if value is None:
            raise MalformedInput("Both key and value are required for 'set'")
        config_manager.set_setting(key, value)
        updated = config_manager.load_config().model_dump(mode="json")[key]
        emit(
            state,
            {key: updated},
            f"[green]Successfully updated {key}[/green]",
        )
    except Exception as e:
        fail(state, e)


def main() -> None:
    """Entry point for the CLI."""
    app()


if __name__ == "__main__":
    main()
