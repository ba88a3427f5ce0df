"""Command-line entry point.

Exit codes: 0 when every expectation holds, 1 on an expectation mismatch,
2 on usage, schema or I/O errors.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from pathlib import Path

import numpy as np

from . import hilbert, scenarios
from .field import WaveField, born_quantity
from .partitioning import Ensemble, equiamplitude_partition, equivolume_partition
from .rules import RuleVariant, consistency_check, default_variant, tally
from .scenarios import RunConfig
from .space import Region

EXIT_OK, EXIT_MISMATCH, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


def _common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--eps-amp", type=float, default=RunConfig.eps_amp,
                   help="amplitude-zero threshold relative to total weight")
    p.add_argument("--n-max", type=int, default=RunConfig.n_max, help="largest ensemble size")
    p.add_argument("--tol", type=float, default=RunConfig.tol_contain,
                   help="containment tolerance")
    p.add_argument("--seed", type=int, default=RunConfig.seed)
    p.add_argument("--format", choices=("json", "csv"), default="json")
    p.add_argument("--out", type=Path, help="write the report here instead of stdout")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="branchcount", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    sc = sub.add_parser("scenario", help="named worked examples and campaigns")
    sc_sub = sc.add_subparsers(dest="action", required=True)
    sc_sub.add_parser("list", help="list registered scenarios")
    run = sc_sub.add_parser("run", help="run one scenario")
    run.add_argument("name")
    run.add_argument("--trials", type=int, help="override the campaign trial count")
    _common(run)

    part = sub.add_parser("partition", help="build an ensemble for a field file")
    part.add_argument("field", type=Path)
    part.add_argument("--mode", choices=("equiamp", "equivol"), required=True)
    part.add_argument("--n", type=int, required=True)
    part.add_argument("--axis", type=int, default=0, help="first split axis (2D)")
    part.add_argument("--layout", default="slabs",
                      help="equivolume layout in 2D: slabs, bisect or NXxNY")
    _common(part)

    chk = sub.add_parser("check", help="interval probabilities and consistency verdict")
    chk.add_argument("field", type=Path)
    chk.add_argument("ensembles", type=Path, nargs="+")
    chk.add_argument("--beta", required=True,
                     help="region literal (JSON list of boxes) or a path to one")
    chk.add_argument("--variant", action="append", choices=[v.value for v in RuleVariant],
                     help="counting rule, once for all ensembles or once per ensemble")
    chk.add_argument("--expect", choices=("consistent", "inconsistent"),
                     help="exit 1 unless the verdict matches")
    _common(chk)

    hb = sub.add_parser("hilbert", help="finite-dimensional decomposition checks")
    hb_sub = hb.add_subparsers(dest="action", required=True)
    hc = hb_sub.add_parser("check", help="verify interval containment of the Rayleigh quotient")
    hc.add_argument("--input", type=Path,
                    help="JSON with psi, projector, n and optional basis; random if omitted")
    hc.add_argument("--dim", type=int, default=8)
    hc.add_argument("--n", type=int)
    hc.add_argument("--rank", type=int)
    _common(hc)
    return parser


def _config(args) -> RunConfig:
    try:
        return RunConfig(eps_amp=args.eps_amp, n_max=args.n_max, tol_contain=args.tol,
                         seed=args.seed, trials=getattr(args, "trials", None),
                         format=args.format)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc


def _csv(rows: list[dict]) -> str:
    buf = io.StringIO()
    if rows:
        fields = list(dict.fromkeys(k for r in rows for k in r))
        w = csv.DictWriter(buf, fieldnames=fields, lineterminator="\n")
        w.writeheader()
        w.writerows(rows)
    return buf.getvalue()


def _emit(args, payload: dict, rows: list[dict]) -> None:
    text = _csv(rows) if args.format == "csv" else json.dumps(payload, indent=2) + "\n"
    if args.out:
        args.out.write_text(text)
    else:
        sys.stdout.write(text)


def _read_json(path: Path):
    try:
        return json.loads(Path(path).read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise UsageError(f"cannot read {path}: {exc}") from exc


def _load_field(path: Path) -> WaveField:
    try:
        return WaveField.from_dict(_read_json(path))
    except (KeyError, TypeError, ValueError) as exc:
        raise UsageError(f"invalid field file {path}: {exc}") from exc


def cmd_scenario(args) -> int:
    if args.action == "list":
        sys.stdout.write("\n".join(scenarios.names()) + "\n")
        return EXIT_OK
    config = _config(args)
    try:
        report = scenarios.run(args.name, config)
    except KeyError as exc:
        raise UsageError(exc.args[0]) from exc
    rows = report.rows or [
        {"check": c.name, "expected": json.dumps(d["expected"]),
         "actual": json.dumps(d["actual"]), "ok": c.ok}
        for c, d in ((c, c.to_dict()) for c in report.checks)
    ]
    _emit(args, report.to_dict(), rows)
    if not report.passed:
        for c in report.checks:
            if not c.ok:
                print(f"mismatch in {report.name}: {c.name}: expected {c.expected}, got {c.actual}",
                      file=sys.stderr)
        return EXIT_MISMATCH
    return EXIT_OK


def _parse_layout(text: str):
    if text in ("slabs", "bisect"):
        return text
    try:
        nx, ny = (int(v) for v in text.lower().split("x"))
    except ValueError as exc:
        raise UsageError(f"bad layout {text!r}") from exc
    return (nx, ny)


def cmd_partition(args) -> int:
    config = _config(args)
    f = _load_field(args.field)
    try:
        if args.mode == "equiamp":
            e = equiamplitude_partition(f, args.n, args.axis, n_max=config.n_max)
        else:
            e = equivolume_partition(f.space, args.n, _parse_layout(args.layout),
                                     axis=args.axis, field=f, n_max=config.n_max)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    payload = e.to_dict()
    rows = [{"cell": k, "box": json.dumps(c["box"]), "measure": c["measure"],
             "weight": c.get("weight")} for k, c in enumerate(payload["cells"])]
    _emit(args, payload, rows)
    return EXIT_OK


def _parse_region(text: str, dim: int) -> Region:
    path = Path(text)
    raw = _read_json(path) if path.exists() else None
    if raw is None:
        try:
            raw = json.loads(text)
        except json.JSONDecodeError as exc:
            raise UsageError(f"--beta is neither a file nor a JSON literal: {exc}") from exc
    try:
        return Region(dim, tuple(raw)) if raw else Region.empty(dim)
    except (TypeError, ValueError) as exc:
        raise UsageError(f"invalid region literal: {exc}") from exc


def cmd_check(args) -> int:
    config = _config(args)
    f = _load_field(args.field)
    family = []
    for path in args.ensembles:
        try:
            family.append(Ensemble.from_dict(_read_json(path), f))
        except (KeyError, TypeError, ValueError) as exc:
            raise UsageError(f"invalid ensemble file {path}: {exc}") from exc
    beta = _parse_region(args.beta, f.space.dimension)
    variants = args.variant or [None]
    if len(variants) == 1:
        variants = variants * len(family)
    if len(variants) != len(family):
        raise UsageError("give --variant once, or once per ensemble")
    try:
        res = consistency_check(f, family, beta, variants, config.eps_amp)
        tallies = [tally(f, e, beta, v, config.eps_amp) for e, v in zip(family, variants)]
        born = born_quantity(f, beta)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    entries = []
    for path, e, v, t, iv in zip(args.ensembles, family, variants, tallies, res.intervals):
        entries.append({
            "file": str(path),
            "rule": e.rule,
            "variant": (RuleVariant(v) if v else default_variant(e)).value,
            "n": e.n,
            "interval": iv.to_dict(),
            "text": str(iv),
            "out_of_range": iv.out_of_range,
            "tally": t.to_dict(),
        })
    payload = {
        "verdict": res.verdict,
        "beta": beta.to_literal(),
        "born": born,
        "ensembles": entries,
        "intersection": None if res.intersection is None else res.intersection.to_dict(),
        "witnesses": None if res.witnesses is None else list(res.witnesses),
    }
    rows = [{"file": x["file"], "variant": x["variant"], "n": x["n"], "interval": x["text"],
             **x["tally"]} for x in entries]
    _emit(args, payload, rows)
    if args.expect and args.expect != res.verdict:
        print(f"expected {args.expect}, got {res.verdict}", file=sys.stderr)
        return EXIT_MISMATCH
    return EXIT_OK


def _complex_array(raw) -> np.ndarray:
    a = np.asarray(raw, dtype=float)
    if a.shape[-1] != 2:
        raise ValueError("complex entries must be [re, im] pairs")
    return a[..., 0] + 1j * a[..., 1]


def cmd_hilbert(args) -> int:
    config = _config(args)
    try:
        if args.input:
            raw = _read_json(args.input)
            psi = _complex_array(raw["psi"])
            P = hilbert.Projector(_complex_array(raw["projector"]))
            n = int(raw.get("n", args.n or psi.size))
            basis = _complex_array(raw["basis"]) if raw.get("basis") is not None else None
        else:
            rng = np.random.default_rng(config.seed)
            d = args.dim
            psi = rng.standard_normal(d) + 1j * rng.standard_normal(d)
            basis = hilbert.random_unitary(d, rng)
            n = args.n or d
            rank = args.rank if args.rank is not None else int(rng.integers(1, d)) if d > 1 else 1
            P = hilbert.Projector.onto(hilbert.random_unitary(d, rng)[:, :rank])
        rep = hilbert.appendix_theorem_check(P, psi, n, basis)
    except (KeyError, TypeError, ValueError) as exc:
        raise UsageError(str(exc)) from exc
    payload = rep.to_dict()
    _emit(args, payload, [{k: v for k, v in payload.items() if not isinstance(v, dict)}])
    return EXIT_OK if rep.passed else EXIT_MISMATCH


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    handler = {"scenario": cmd_scenario, "partition": cmd_partition,
               "check": cmd_check, "hilbert": cmd_hilbert}[args.command]
    try:
        return handler(args)
    except UsageError as exc:
        print(f"branchcount: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
