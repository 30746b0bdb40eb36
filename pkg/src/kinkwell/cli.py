"""Command-line surface: spectra, figure datasets, moment and tail reports.

Thin adapter over the library; no numerics live here. Outputs are CSV for
grids and JSON for scalars/verdicts, written with LF newlines and
shortest-roundtrip float formatting so identical configs rerun to
identical bytes.

Exit codes: 0 success, 2 usage/config error, 3 numerical failure.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass, field
from pathlib import Path

from . import __version__, momentum, spectral
from .errors import AccuracyError, DomainError, NoRootError, ResolutionError
from .oracle import numerov_solve
from .wells import Parity, WellKind, WellSpec, admissible_range, solve_spectrum

_DEFAULT_V0 = {"triangular": 5.0, "convexp": 15.0, "divexp": 5.0}


@dataclass
class RunConfig:
    well: str = "triangular"
    v0: float | None = None          # None -> per-well benchmark default
    a: float = 1.0
    max_states: int = 2
    state: int = 0
    j: int = 3
    pmax: float = momentum.DEFAULT_P_MAX
    points: int = momentum.DEFAULT_POINTS
    cutoffs: list = field(default_factory=lambda: list(momentum.DEFAULT_CUTOFFS))
    out: str | None = None
    format: str = "csv"
    threads: int = 1
    emax: float | None = None
    oracle_h: float = 1e-3

    def well_spec(self) -> WellSpec:
        kind = WellKind(self.well)
        v0 = self.v0 if self.v0 is not None else _DEFAULT_V0[self.well]
        return WellSpec(kind, v0, self.a)

    def validate(self) -> None:
        if self.well not in _DEFAULT_V0:
            raise DomainError(f"unknown well kind {self.well!r}")
        if self.max_states < 1:
            raise DomainError("--max-states must be >= 1")
        if self.state < 0:
            raise DomainError("--state must be >= 0")
        if self.j not in (0, 1, 2, 3):
            raise DomainError("--j must be one of 0, 1, 2, 3")
        if self.pmax <= 0 or self.points < 2:
            raise DomainError("--pmax must be > 0 and --points >= 2")
        if self.format not in ("csv", "json"):
            raise DomainError("--format must be csv or json")
        if self.threads < 1:
            raise DomainError("--threads must be >= 1")
        self.well_spec()  # validates v0/a positivity


def _fmt(x: float) -> str:
    return repr(float(x))


def _write_text(path: Path, text: str) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(text)


def _json_text(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True) + "\n"


def _solved_states(cfg: RunConfig):
    well = cfg.well_spec()
    states = solve_spectrum(well, cfg.max_states, e_max_scan=cfg.emax)
    return well, states


def _normalized_state(cfg: RunConfig):
    well, states = _solved_states(cfg)
    if cfg.state >= len(states):
        raise DomainError(
            f"--state {cfg.state}: only {len(states)} bound state(s) found")
    return well, states, spectral.normalize(states[cfg.state])


def _oracle_bracket(well, states, i) -> tuple[float, float]:
    lo, hi = admissible_range(well)
    e = states[i].energy
    gap_lo = e - states[i - 1].energy if i > 0 else e - lo
    gap_hi = states[i + 1].energy - e if i + 1 < len(states) else hi - e
    half = 0.45 * min(gap_lo, gap_hi, 1.0)
    return e - half, e + half


def cmd_solve(cfg: RunConfig) -> int:
    well, states = _solved_states(cfg)
    rows = []
    for i, s in enumerate(states):
        ns = spectral.normalize(s)
        grid = numerov_solve(well, s.parity, _oracle_bracket(well, states, i),
                             h=cfg.oracle_h * well.a)
        rows.append({
            "n": s.n, "parity": s.parity.value, "energy": s.energy,
            "norm_const": ns.state.norm_const,
            "oracle_energy": grid.energy,
            "abs_delta_e": abs(grid.energy - s.energy),
        })
    header = ["n", "parity", "E", "C", "E_oracle", "|dE|"]
    print("  ".join(f"{h:>12s}" for h in header))
    for r in rows:
        print(f"{r['n']:>12d}  {r['parity']:>12s}  {r['energy']:>12.6f}  "
              f"{r['norm_const']:>12.6f}  {r['oracle_energy']:>12.6f}  "
              f"{r['abs_delta_e']:>12.2e}")
    if cfg.out:
        if cfg.format == "json":
            _write_text(Path(cfg.out), _json_text(
                {"well": cfg.well, "v0": well.v0, "a": well.a,
                 "states": rows}))
        else:
            lines = ["n,parity,E,C,E_oracle,dE_abs"]
            for r in rows:
                lines.append(
                    f"{r['n']},{r['parity']},{_fmt(r['energy'])},"
                    f"{_fmt(r['norm_const'])},{_fmt(r['oracle_energy'])},"
                    f"{_fmt(r['abs_delta_e'])}")
            _write_text(Path(cfg.out), "\n".join(lines) + "\n")
    return 0


def cmd_figure(cfg: RunConfig) -> int:
    well, states = _solved_states(cfg)
    out_dir = Path(cfg.out or ".")
    sidecar = {"well": cfg.well, "v0": well.v0, "a": well.a,
               "pmax": cfg.pmax, "points": cfg.points,
               "version": __version__, "states": []}
    for s in states:
        ns = spectral.normalize(s)
        dist = momentum.distribution(ns, p_max=cfg.pmax, n_points=cfg.points)
        lines = ["p,I,p2I,p4I,p6I"]
        for p, i_val in zip(dist.p_grid, dist.I):
            lines.append(",".join(_fmt(v) for v in
                                  (p, i_val, p**2 * i_val, p**4 * i_val,
                                   p**6 * i_val)))
        csv_path = out_dir / f"{cfg.well}_n{s.n}.csv"
        _write_text(csv_path, "\n".join(lines) + "\n")

        # tail fit gets its own dense grid; the figure grid may be coarse
        fit_dist = momentum.distribution(ns, p_max=max(cfg.pmax, 52.0),
                                         n_points=300, p_min=15.0)
        fit = momentum.tail_fit(fit_dist)
        verdicts = {}
        for j in (1, 2, 3):
            rep = momentum.moment(ns, j, cfg.cutoffs)
            verdicts[str(j)] = {"verdict": rep.verdict, "value": rep.value,
                                "position_value": rep.position_value}
        sidecar["states"].append({
            "n": s.n, "parity": s.parity.value, "energy": s.energy,
            "norm_const": ns.state.norm_const, "csv": csv_path.name,
            "tail_fit": None if fit is None else {
                "exponent": fit.exponent, "stability": fit.stability,
                "r_squared": fit.r_squared,
                "windows": [list(w) for w in fit.windows]},
            "moments": verdicts,
        })
        print(f"wrote {csv_path}")
    json_path = out_dir / f"{cfg.well}_figure.json"
    _write_text(json_path, _json_text(sidecar))
    print(f"wrote {json_path}")
    return 0


def cmd_moments(cfg: RunConfig) -> int:
    well, states, ns = _normalized_state(cfg)
    j = cfg.j if cfg.j in (1, 2, 3) else 3
    rep = momentum.moment(ns, j, cfg.cutoffs)
    payload = {
        "well": cfg.well, "v0": well.v0, "a": well.a,
        "state": cfg.state, "parity": ns.state.parity.value,
        "energy": ns.state.energy, "j": rep.j,
        "verdict": rep.verdict, "value": rep.value,
        "position_value": rep.position_value,
        "position_converged": rep.position_converged,
        "cutoffs": [list(cv) for cv in rep.cutoff_values],
        "verdict_rule": "increments per decade < 0.5 -> converged; "
                        "non-decreasing -> diverging; otherwise marginal",
    }
    text = _json_text(payload)
    print(text, end="")
    if cfg.out:
        _write_text(Path(cfg.out), text)
    return 0


def cmd_tails(cfg: RunConfig) -> int:
    well, states, ns = _normalized_state(cfg)
    dist = momentum.distribution(ns, p_max=max(cfg.pmax, 50.0),
                                 n_points=max(cfg.points, 200))
    fit = momentum.tail_fit(dist)
    payload = {
        "well": cfg.well, "v0": well.v0, "a": well.a,
        "state": cfg.state, "parity": ns.state.parity.value,
        "energy": ns.state.energy,
        "exponent": fit.exponent, "stability": fit.stability,
        "r_squared": fit.r_squared,
        "windows": [list(w) for w in fit.windows],
    }
    text = _json_text(payload)
    print(text, end="")
    if cfg.out:
        _write_text(Path(cfg.out), text)
    return 0


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="kinkwell",
        description="Bound states and momentum-space moments of symmetric "
                    "wells with a kink at the origin.")
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)
    for name, helptext in [
            ("solve", "solve the bound-state spectrum (with oracle check)"),
            ("figure", "emit figure-ready CSV datasets plus a JSON sidecar"),
            ("moments", "cutoff study of <p^(2j)> for one state"),
            ("tails", "fit the tail exponent of I_n(p) for one state")]:
        p = sub.add_parser(name, help=helptext)
        p.add_argument("--config", type=str, default=None,
                       help="JSON config file; flags override it")
        p.add_argument("--well", choices=sorted(_DEFAULT_V0), default=None)
        p.add_argument("--v0", type=float, default=None)
        p.add_argument("--a", type=float, default=None)
        p.add_argument("--max-states", type=int, default=None)
        p.add_argument("--state", type=int, default=None)
        p.add_argument("--j", type=int, default=None)
        p.add_argument("--pmax", type=float, default=None)
        p.add_argument("--points", type=int, default=None)
        p.add_argument("--cutoffs", type=str, default=None,
                       help="comma-separated increasing cutoff list")
        p.add_argument("--emax", type=float, default=None,
                       help="upper end of the energy scan (default 40*v0)")
        p.add_argument("--out", type=str, default=None)
        p.add_argument("--format", choices=["csv", "json"], default=None)
        p.add_argument("--threads", type=int, default=None)
    return parser


def _merge_config(args: argparse.Namespace) -> RunConfig:
    cfg = RunConfig()
    if args.config:
        try:
            loaded = json.loads(Path(args.config).read_text(encoding="utf-8"))
        except (OSError, json.JSONDecodeError) as exc:
            raise DomainError(f"cannot read config {args.config}: {exc}")
        if not isinstance(loaded, dict):
            raise DomainError("config file must hold a JSON object")
        for key, val in loaded.items():
            if not hasattr(cfg, key):
                raise DomainError(f"unknown config key {key!r}")
            setattr(cfg, key, val)
    for key in ("well", "v0", "a", "max_states", "state", "j", "pmax",
                "points", "emax", "out", "format", "threads"):
        val = getattr(args, key, None)
        if val is not None:
            setattr(cfg, key, val)
    if args.cutoffs is not None:
        try:
            cfg.cutoffs = [float(t) for t in args.cutoffs.split(",")]
        except ValueError:
            raise DomainError(f"bad --cutoffs value {args.cutoffs!r}")
    cfg.validate()
    return cfg


def main(argv=None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = _merge_config(args)
    except DomainError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    handler = {"solve": cmd_solve, "figure": cmd_figure,
               "moments": cmd_moments, "tails": cmd_tails}[args.command]
    try:
        return handler(cfg)
    except DomainError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    except (AccuracyError, NoRootError, ResolutionError) as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    raise SystemExit(main())
