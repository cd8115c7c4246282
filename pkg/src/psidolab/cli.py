"""Command line runner: ``psidolab run | list | quantize | multiplier``.

Exit codes are 0 when every non-advisory threshold passes, 1 on a threshold
failure (a failure manifest is written next to the summary) and 2 on usage or
configuration errors.
"""

from __future__ import annotations

import json
import math
import sys
from dataclasses import dataclass, field
from pathlib import Path

import click

from . import __version__
from .grid import GridSpec
from .multiplier import dyadic_decompose, mixed_bessel_symbol, pieces_to_csv
from .quantize import kernel_from_symbol
from .suites import SUITES, catalog, run_suite
from .symclass import symbol_from_manifest

__all__ = ["ConfigError", "ExperimentConfig", "run", "list_suites", "main"]

SUITE_ORDER = [name for name in SUITES if name != "all"]

# top-level config shortcuts and the suite parameters they set
_SHORTCUTS = {
    "taus": ["taus"],
    "ps": ["ps", "continuity_ps"],
    "seeds": ["seeds"],
    "refinement": ["refinement"],
}


class ConfigError(ValueError):
    """Malformed configuration; the message names the offending key."""


def _num(v):
    if isinstance(v, str) and v.lower() in ("inf", "infinity"):
        return math.inf
    if isinstance(v, bool) or not isinstance(v, (int, float)):
        raise TypeError(v)
    return v


def _num_list(key: str, v) -> list:
    if not isinstance(v, list):
        raise ConfigError(f"{key}: expected a list, got {type(v).__name__}")
    try:
        return [_num(x) for x in v]
    except TypeError as exc:
        raise ConfigError(f"{key}: non-numeric entry {exc.args[0]!r}") from None


def _encode(v):
    if isinstance(v, float) and math.isinf(v):
        return "inf" if v > 0 else "-inf"
    if isinstance(v, list):
        return [_encode(x) for x in v]
    if isinstance(v, dict):
        return {k: _encode(x) for k, x in v.items()}
    return v


@dataclass
class ExperimentConfig:
    """Parsed experiment configuration.

    Attributes
    ----------
    suite : list of str
        Suite names; ``"all"`` expands to every suite. Empty runs nothing.
    grid : dict
        ``N`` and/or ``L`` for the suites that take a single grid.
    taus, ps, seeds, refinement : list, optional
        Shortcuts applied to every suite that has the matching parameter.
    params : dict
        Per-suite parameter and threshold overrides, ``{suite: {key: value}}``.
    output_dir : str
        Directory for the summary, the CSV tables and the failure manifest.
    """

    suite: list = field(default_factory=list)
    grid: dict = field(default_factory=dict)
    taus: list | None = None
    ps: list | None = None
    seeds: list | None = None
    refinement: list | None = None
    params: dict = field(default_factory=dict)
    output_dir: str = "psidolab-out"

    @classmethod
    def from_dict(cls, d: dict) -> "ExperimentConfig":
        if not isinstance(d, dict):
            raise ConfigError("config: expected a JSON object")
        allowed = {"suite", "grid", "taus", "ps", "seeds", "refinement", "params", "output_dir"}
        for key in d:
            if key not in allowed:
                raise ConfigError(f"{key}: unknown config key (allowed: {sorted(allowed)})")
        suite = d.get("suite", [])
        if isinstance(suite, str):
            suite = [suite]
        if not isinstance(suite, list) or not all(isinstance(s, str) for s in suite):
            raise ConfigError("suite: expected a suite name or a list of names")
        for s in suite:
            if s not in SUITES:
                raise ConfigError(f"suite: unknown suite {s!r} (choose from {list(SUITES)})")
        grid = d.get("grid", {})
        if not isinstance(grid, dict):
            raise ConfigError("grid: expected an object")
        for k, v in grid.items():
            if k not in ("N", "L"):
                raise ConfigError(f"grid.{k}: unknown grid key (allowed: N, L)")
            if isinstance(v, bool) or not isinstance(v, (int, float)) or v <= 0:
                raise ConfigError(f"grid.{k}: expected a positive number, got {v!r}")
        if "N" in grid and (not isinstance(grid["N"], int) or grid["N"] < 4 or grid["N"] % 2):
            raise ConfigError(f"grid.N: expected an even integer >= 4, got {grid['N']!r}")
        lists = {}
        for key in ("taus", "ps", "seeds", "refinement"):
            if d.get(key) is not None:
                lists[key] = _num_list(key, d[key])
        if "seeds" in lists and not all(isinstance(s, int) and s >= 0 for s in lists["seeds"]):
            raise ConfigError("seeds: expected nonnegative integers")
        if "ps" in lists and not all(p >= 1 for p in lists["ps"]):
            raise ConfigError("ps: every p must be >= 1")
        params = d.get("params", {})
        if not isinstance(params, dict):
            raise ConfigError("params: expected an object keyed by suite")
        for s, over in params.items():
            if s not in SUITES or s == "all":
                raise ConfigError(f"params.{s}: unknown suite")
            if not isinstance(over, dict):
                raise ConfigError(f"params.{s}: expected an object")
            for k, v in over.items():
                if k not in SUITES[s].defaults:
                    raise ConfigError(f"params.{s}.{k}: unknown parameter")
                ref = SUITES[s].defaults[k]
                if isinstance(ref, list):
                    over[k] = _num_list(f"params.{s}.{k}", v)
                elif isinstance(ref, (int, float)):
                    try:
                        over[k] = _num(v)
                    except TypeError:
                        raise ConfigError(f"params.{s}.{k}: expected a number, got {v!r}") from None
        out = d.get("output_dir", "psidolab-out")
        if not isinstance(out, str) or not out:
            raise ConfigError("output_dir: expected a non-empty path string")
        return cls(list(suite), dict(grid), lists.get("taus"), lists.get("ps"), lists.get("seeds"),
                   lists.get("refinement"), params, out)

    def to_dict(self) -> dict:
        d = {"suite": list(self.suite), "grid": dict(self.grid), "params": self.params, "output_dir": self.output_dir}
        for key in ("taus", "ps", "seeds", "refinement"):
            if getattr(self, key) is not None:
                d[key] = getattr(self, key)
        return _encode(d)

    def suites(self) -> list[str]:
        if "all" in self.suite:
            return list(SUITE_ORDER)
        return [s for s in SUITE_ORDER if s in self.suite]

    def overrides(self, name: str) -> dict:
        defaults = SUITES[name].defaults
        over = {}
        for k in ("N", "L"):
            if k in self.grid and k in defaults:
                over[k] = self.grid[k]
        for key, targets in _SHORTCUTS.items():
            v = getattr(self, key)
            if v is None:
                continue
            for t in targets:
                if t in defaults:
                    over[t] = list(v)
        over.update(self.params.get(name, {}))
        return over

    def tag(self) -> str:
        """Filename fragment encoding the grid and seed."""
        g = "grid-default"
        if self.grid:
            g = "grid-" + "-".join(f"{k}{self.grid[k]:g}" for k in sorted(self.grid))
        seed = f"seed{self.seeds[0]}" if self.seeds else "seed-default"
        return f"{g}_{seed}"


def _dump(obj) -> str:
    return json.dumps(obj, sort_keys=True, indent=2) + "\n"


def run(config: ExperimentConfig) -> int:
    """Run the configured suites and write the reports; returns the exit status."""
    out = Path(config.output_dir)
    out.mkdir(parents=True, exist_ok=True)
    names = config.suites()
    results, failures = {}, []
    for name in names:
        checks = run_suite(name, config.overrides(name))
        results[name] = [c.to_dict() for c in checks]
        failures.extend({"suite": name, **c.to_dict()} for c in checks if not c.passed and not c.advisory)
        rows = ["version,suite,check,value,threshold,passed,advisory"]
        for c in checks:
            d = c.to_dict()
            rows.append(",".join([__version__, name, d["name"], json.dumps(d["value"]).replace(",", ";"),
                                  json.dumps(d["threshold"]).replace(",", ";"), str(d["passed"]),
                                  str(d["advisory"])]))
        (out / f"{name}_{config.tag()}.csv").write_text("\n".join(rows) + "\n")
    stem = "-".join(names) if names else "empty"
    summary = {"version": __version__, "config": config.to_dict(), "suites": results, "passed": not failures}
    (out / f"summary_{stem}_{config.tag()}.json").write_text(_dump(summary))
    if failures:
        (out / f"failures_{stem}_{config.tag()}.json").write_text(_dump({"version": __version__, "failures": failures}))
        return 1
    return 0


def list_suites() -> list[dict]:
    return catalog()


@click.group()
@click.version_option(__version__, prog_name="psidolab")
def main():
    """Numerical checks for tau-quantized pseudo-differential operators."""


@main.command("run")
@click.option("--config", "config_path", required=True, type=click.Path(dir_okay=False),
              help="JSON experiment configuration.")
def run_cmd(config_path):
    """Run the suites named in a JSON config."""
    try:
        raw = json.loads(Path(config_path).read_text())
        cfg = ExperimentConfig.from_dict(raw)
    except (OSError, json.JSONDecodeError, ConfigError) as exc:
        click.echo(f"config error: {exc}", err=True)
        sys.exit(2)
    status = run(cfg)
    click.echo(f"{'PASS' if status == 0 else 'FAIL'}: {', '.join(cfg.suites()) or 'no suites'} -> {cfg.output_dir}")
    sys.exit(status)


@main.command("list")
def list_cmd():
    """Print the suite catalog with default thresholds as JSON."""
    click.echo(_dump(list_suites()), nl=False)


@main.command("quantize")
@click.option("--symbol", "symbol_path", required=True, type=click.Path(dir_okay=False),
              help="JSON random-symbol manifest.")
@click.option("--tau", type=float, required=True)
@click.option("--out", "out_path", required=True, type=click.Path(dir_okay=False))
def quantize_cmd(symbol_path, tau, out_path):
    """Write the kernel of Op_tau(a) for a symbol manifest as CSV."""
    try:
        a = symbol_from_manifest(json.loads(Path(symbol_path).read_text()))
    except (OSError, ValueError, KeyError, TypeError) as exc:
        click.echo(f"symbol error: {exc}", err=True)
        sys.exit(2)
    K = kernel_from_symbol(a, tau)
    Path(out_path).write_text(f"# psidolab {__version__}\n" + K.to_csv())


@main.command("multiplier")
@click.option("--s1", type=float, default=1.0, show_default=True)
@click.option("--s2", type=float, default=1.0, show_default=True)
@click.option("--eps", type=float, default=0.5, show_default=True)
@click.option("--nodes", type=int, default=64, show_default=True, help="t-nodes per axis.")
@click.option("--N", "N", type=int, default=64, show_default=True, help="Samples per axis of the X grid.")
@click.option("--L", "L", type=float, default=8.0, show_default=True, help="Half-width of the X grid.")
@click.option("--tol", type=float, default=1e-3, show_default=True)
@click.option("--out", "out_path", required=True, type=click.Path(dir_okay=False))
def multiplier_cmd(s1, s2, eps, nodes, N, L, tol, out_path):
    """Dyadic decomposition of a mixed Bessel symbol, one CSV row per piece."""
    try:
        spec = mixed_bessel_symbol(s1, s2, eps)
        res = dyadic_decompose(spec, nodes, GridSpec(2, N, L).dual(), tol=tol)
    except ValueError as exc:
        click.echo(f"usage error: {exc}", err=True)
        sys.exit(2)
    Path(out_path).write_text(f"# psidolab {__version__}\n" + pieces_to_csv(res))
    click.echo(f"reconstruction defect {res.reconstruction_defect:.3e}")
    if res.advisory:
        click.echo(f"advisory: {res.advisory}")
