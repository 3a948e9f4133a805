"""Unified command-line entry point.

Subcommands: janson, copies, hardcover, certify-cover, containers,
extend-containers, ramsey (arrows / event / mc).  Structured results go to
stdout as JSON (CSV for trial streams); ``--out DIR`` additionally persists a
run record with input digests and the artifacts.  Exit codes: 0 success,
1 property/theorem violation detected, 2 invalid input, 3 budget exceeded,
4 an undecided verdict.

Stdout is deterministic for a fixed seed and config: rationals are printed
as ``a/b`` strings, keys are sorted, and timestamps live only in the run
record, never in the payload.
"""

from __future__ import annotations

import argparse
import datetime
import hashlib
import json
import os
import re
import sys
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path

from . import __version__, fileio
from .containers import (
    cover_certificate,
    extension_containers,
    hardcover_family,
    non_janson_containers,
)
from .copies import extension_hypergraph, induced_copy_hypergraph
from .errors import BudgetError, CertificateViolation, InputError, UndecidedError
from .hypercore import Graph, bits_of
from .janson import is_janson
from .ramsey import (
    ExperimentConfig,
    arrows_induced,
    check_event_bad,
    check_event_bad_prime,
    check_event_inductive,
    chernoff_experiment,
    extension_experiment,
)

EXIT_OK = 0
EXIT_VIOLATION = 1
EXIT_INPUT = 2
EXIT_BUDGET = 3
EXIT_UNDECIDED = 4

_NAMED_GRAPH = re.compile(r"^([KPCE])(\d+)$")


def load_graph(spec: str) -> Graph:
    """A named graph (K5, P4, C6, E3) or a graph file path."""
    m = _NAMED_GRAPH.match(spec)
    if m:
        kind, num = m.group(1), int(m.group(2))
        if kind == "K":
            return Graph.complete(num)
        if kind == "P":
            return Graph.path(num)
        if kind == "C":
            return Graph.cycle(num)
        return Graph.empty(num)
    return fileio.parse_graph(Path(spec).read_text())


def load_hypergraph(spec: str):
    return fileio.parse_hypergraph(Path(spec).read_text())


def _jsonable(value):
    if isinstance(value, Fraction):
        return f"{value.numerator}/{value.denominator}"
    if isinstance(value, float):
        if value == float("inf"):
            return "inf"
        return value
    if isinstance(value, dict):
        return {str(k): _jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_jsonable(v) for v in value]
    return value


def emit(payload: dict) -> str:
    return json.dumps(_jsonable(payload), sort_keys=True, indent=2) + "\n"


def _mask_list(mask: int):
    return sorted(bits_of(mask))


@dataclass
class RunRecord:
    command: list
    config: dict
    version: str
    input_digests: dict
    started: str
    finished: str = ""
    exit_status: int = 0
    artifacts: dict = field(default_factory=dict)


def _digest(path: str) -> str:
    return hashlib.sha256(Path(path).read_bytes()).hexdigest()


def persist(outdir: str, record: RunRecord, payload_text: str, extra_files: dict):
    out = Path(outdir)
    out.mkdir(parents=True, exist_ok=True)
    (out / "out.json").write_text(payload_text)
    record.artifacts["out.json"] = hashlib.sha256(payload_text.encode()).hexdigest()
    for name, text in extra_files.items():
        (out / name).write_text(text)
        record.artifacts[name] = hashlib.sha256(text.encode()).hexdigest()
    record.finished = datetime.datetime.now(datetime.timezone.utc).isoformat()
    (out / "record.json").write_text(emit(record.__dict__))


CONFIG_KEYS = {
    "r": int,
    "k": int,
    "n": int,
    "m": int,
    "seed": int,
    "trials": int,
    "budget_colorings": int,
    "budget_subsets": int,
    "C": int,
    "delta": float,
    "p": Fraction,
    "usize": int,
    "ssize": int,
    "F": str,
    "w": int,
    "kind": str,
    "colorings": int,
    "Rprime": Fraction,
}

STRUCT_KEYS = {"usize", "ssize", "F", "w", "kind", "colorings", "Rprime"}


def load_config(path: str) -> ExperimentConfig:
    """Parse ``key = value`` lines into an experiment configuration.

    Derived constants follow the canonical formulas unless a key overrides
    them, which flips the scaled flag.  Unknown keys and malformed lines
    are rejected with their line number."""
    raw = {}
    for lineno, line in enumerate(Path(path).read_text().splitlines(), start=1):
        stripped = line.strip()
        if not stripped or stripped.startswith("#"):
            continue
        if "=" not in stripped:
            raise InputError(f"line {lineno}: expected 'key = value'")
        key, _, value = stripped.partition("=")
        key, value = key.strip(), value.strip()
        if key not in CONFIG_KEYS:
            raise InputError(f"line {lineno}: unknown key {key!r}")
        caster = CONFIG_KEYS[key]
        try:
            if caster is Fraction:
                raw[key] = fileio.parse_number(value, exact=True)
            else:
                raw[key] = caster(value)
        except ValueError as exc:
            raise InputError(f"line {lineno}: bad value for {key}: {exc}") from exc
    extras = {k: raw.pop(k) for k in list(raw) if k in STRUCT_KEYS}
    if "C" in raw:
        raw["big_c"] = raw.pop("C")
    cfg = ExperimentConfig(**raw)
    cfg.extras = extras
    return cfg


def _parse_rational(text: str) -> Fraction:
    return Fraction(fileio.parse_number(text, exact=True))


# ---------------------------------------------------------------------------
# subcommand handlers (each returns (exit_code, payload_text, extra_files))


def cmd_janson(args):
    h = load_hypergraph(args.hypergraph)
    p = _parse_rational(args.p)
    r = _parse_rational(args.R)
    verdict = is_janson(h, p, r, args.tol)
    payload = {
        "answer": verdict.answer,
        "r_star": verdict.r_star,
        "gap": verdict.gap,
        "exact": verdict.exact,
    }
    if verdict.witness is not None:
        payload["witness"] = {
            str(i): w for i, w in enumerate(verdict.witness.weights) if w > 0
        }
    if verdict.dual_bound is not None:
        payload["dual_bound"] = verdict.dual_bound
    code = EXIT_UNDECIDED if verdict.answer == "UNDECIDED" else EXIT_OK
    return code, emit(payload), {}


def cmd_copies(args):
    f = load_graph(args.F)
    gp = load_graph(args.Gprime)
    g = load_graph(args.G)
    copies = induced_copy_hypergraph(f, gp, g)
    hg_text = fileio.write_hypergraph(copies.hyper)
    prov_lines = []
    for e in copies.hyper.edges:
        phi = copies.witnesses[e]
        prov_lines.append(
            " ".join(str(v) for v in _mask_list(e))
            + " -> "
            + " ".join(str(x) for x in phi)
        )
    prov_text = "\n".join(prov_lines) + ("\n" if prov_lines else "")
    payload = {
        "n": copies.hyper.n,
        "edge_count": len(copies.hyper.edges),
        "edges": [_mask_list(e) for e in copies.hyper.edges],
    }
    return EXIT_OK, emit(payload), {"copies.hg": hg_text, "copies.prov": prov_text}


def cmd_hardcover(args):
    h = load_hypergraph(args.hypergraph)
    family = hardcover_family(
        h,
        _parse_rational(args.q),
        _parse_rational(args.alpha),
        paper_literal=args.paper_literal,
        verify=args.verify,
    )
    payload = {
        "fingerprints": [_mask_list(t) for t in family.fingerprints],
        "cover_sizes": {str(t): len(family.covers[t]) for t in family.fingerprints},
        "independent_sets": len(family.phi),
        "violations": family.violations,
        "strict_checked": family.strict_checked,
        "paper_literal": family.paper_literal,
    }
    code = EXIT_VIOLATION if family.violations else EXIT_OK
    return code, emit(payload), {}


def cmd_certify_cover(args):
    target = load_hypergraph(args.target)
    cover = load_hypergraph(args.cover)
    p = _parse_rational(args.p)
    cert = cover_certificate(target, cover, p)
    payload = {
        "p": p,
        "weight": cert.weight,
        "threshold_bound": cert.threshold_bound,
        "cover_edges": len(cover.edges),
        "target_edges": len(target.edges),
    }
    return EXIT_OK, emit(payload), {}


def cmd_containers(args):
    h = load_hypergraph(args.hypergraph)
    family = non_janson_containers(
        h,
        _parse_rational(args.p),
        _parse_rational(args.q),
        _parse_rational(args.R),
        eta=_parse_rational(args.eta) if args.eta else None,
        strict=not args.no_strict,
    )
    payload = {
        "containers": [_mask_list(x) for x in family.containers],
        "certified_minimal_sets": [_mask_list(m) for m in family.certified_minimals],
        "violations": family.violations,
        "incomplete": family.incomplete,
        "size_bound_ok": family.size_bound_ok,
        "params": family.params,
    }
    code = EXIT_VIOLATION if family.violations else EXIT_OK
    return code, emit(payload), {}


def cmd_extend_containers(args):
    f = load_graph(args.F)
    gp = load_graph(args.Gprime)
    g = load_graph(args.G)
    ext = extension_hypergraph(f, args.w, gp, g)
    base = induced_copy_hypergraph(f, gp, g).hyper
    family = extension_containers(
        ext,
        base,
        ext.m,
        _parse_rational(args.p),
        _parse_rational(args.q),
        _parse_rational(args.R),
        _parse_rational(args.Rprime),
        eta=_parse_rational(args.eta) if args.eta else None,
        r_colours=args.r,
        strict=not args.no_strict,
    )
    payload = {
        "containers": [_mask_list(x) for x in family.containers],
        "trimmed": {str(x): _mask_list(y) for x, y in family.shrunk.items()},
        "violations": family.violations,
        "incomplete": family.incomplete,
        "size_bound_ok": family.size_bound_ok,
        "params": family.params,
    }
    code = EXIT_VIOLATION if family.violations else EXIT_OK
    return code, emit(payload), {}


def _seed_from(args, cfg=None) -> int:
    if getattr(args, "seed", None) is not None:
        return args.seed
    if cfg is not None and cfg.seed:
        return cfg.seed
    env = os.environ.get("JC_SEED")
    return int(env) if env else 0


def cmd_ramsey(args):
    if args.ramsey_cmd == "arrows":
        g = load_graph(args.G)
        h = load_graph(args.H)
        result = arrows_induced(g, h, args.r, budget=args.budget)
        return EXIT_OK, emit({"arrows": result, "r": args.r}), {}

    if args.ramsey_cmd == "event":
        cfg = load_config(args.config) if args.config else ExperimentConfig()
        g = load_graph(args.G)
        targets = [load_graph(spec) for spec in args.H.split(",")]
        p = cfg.p
        if args.kind == "B":
            report = check_event_bad(
                g, targets, p, budget_colorings=cfg.budget_colorings
            )
        elif args.kind == "Bprime":
            report = check_event_bad_prime(
                g, targets, p, cfg.delta,
                budget_colorings=cfg.budget_colorings,
                budget_subsets=cfg.budget_subsets,
            )
        elif args.kind == "E":
            sizes = [t.n for t in targets]
            report = check_event_inductive(
                g, sizes, p, cfg.delta, seed=_seed_from(args, cfg)
            )
        else:
            raise InputError(f"unknown event kind {args.kind!r}")
        payload = {
            "event": report.name,
            "holds": report.holds,
            "exhaustive": report.exhaustive,
            "witness": report.witness,
            "notes": report.notes,
            "scaled": cfg.scaled,
        }
        code = EXIT_UNDECIDED if report.holds is None else EXIT_OK
        return code, emit(payload), {}

    if args.ramsey_cmd == "mc":
        cfg = load_config(args.config) if args.config else ExperimentConfig()
        seed = _seed_from(args, cfg)
        if args.experiment == "chernoff":
            n = cfg.n or 64
            report = chernoff_experiment(
                n, cfg.extras.get("usize", 8), cfg.extras.get("ssize", 32),
                cfg.trials, seed,
            )
        elif args.experiment == "extension":
            f = load_graph(cfg.extras.get("F", "P3"))
            report = extension_experiment(
                f,
                cfg.extras.get("w", 0),
                cfg.m or 8,
                cfg.r,
                cfg.trials,
                seed,
                kind=cfg.extras.get("kind", "gamma"),
                p=cfg.p,
                r_prime=cfg.extras.get("Rprime", Fraction(0)),
                colorings_per_trial=cfg.extras.get("colorings", 8),
            )
        else:
            raise InputError(f"unknown experiment {args.experiment!r}")
        lines = ["trial,seed,outcome,statistic"]
        lines += [f"{t},{s},{o},{st}" for t, s, o, st in report.rows]
        comment = (
            f"# frequency={report.frequency} bound={report.theory_bound}"
            + (f" exact={report.exact_reference}" if report.exact_reference is not None else "")
        )
        return EXIT_OK, "\n".join(lines + [comment]) + "\n", {}

    raise InputError(f"unknown ramsey subcommand {args.ramsey_cmd!r}")


# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    top = argparse.ArgumentParser(prog="jc", description=__doc__)
    top.add_argument("--out", help="directory for the run record and artifacts")
    top.add_argument(
        "--jobs", type=int, default=1,
        help="parallelism hint for batch drivers (current drivers are serial)",
    )
    sub = top.add_subparsers(dest="command", required=True)

    pj = sub.add_parser("janson", help="decide the (p, R) property with certificates")
    pj.add_argument("--hypergraph", required=True)
    pj.add_argument("--p", required=True)
    pj.add_argument("--R", required=True)
    pj.add_argument("--tol", type=float, default=1e-9)
    pj.set_defaults(handler=cmd_janson)

    pc = sub.add_parser("copies", help="build the induced-copy hypergraph")
    pc.add_argument("--F", required=True)
    pc.add_argument("--Gprime", required=True)
    pc.add_argument("--G", required=True)
    pc.set_defaults(handler=cmd_copies)

    ph = sub.add_parser("hardcover", help="exact fingerprint/cover family")
    ph.add_argument("--hypergraph", required=True)
    ph.add_argument("--q", required=True)
    ph.add_argument("--alpha", required=True)
    ph.add_argument("--verify", action="store_true", default=True)
    ph.add_argument("--no-verify", dest="verify", action="store_false")
    ph.add_argument("--paper-literal", action="store_true")
    ph.set_defaults(handler=cmd_hardcover)

    pcc = sub.add_parser("certify-cover", help="p-weight certificate for a cover")
    pcc.add_argument("--target", required=True)
    pcc.add_argument("--cover", required=True)
    pcc.add_argument("--p", required=True)
    pcc.set_defaults(handler=cmd_certify_cover)

    pn = sub.add_parser("containers", help="containers for uncertified vertex sets")
    pn.add_argument("--hypergraph", required=True)
    pn.add_argument("--p", required=True)
    pn.add_argument("--q", required=True)
    pn.add_argument("--R", required=True)
    pn.add_argument("--eta")
    pn.add_argument("--no-strict", action="store_true")
    pn.set_defaults(handler=cmd_containers)

    pe = sub.add_parser("extend-containers", help="two-layer extension containers")
    pe.add_argument("--F", required=True)
    pe.add_argument("--w", type=int, required=True)
    pe.add_argument("--Gprime", required=True)
    pe.add_argument("--G", required=True)
    pe.add_argument("--p", required=True)
    pe.add_argument("--q", required=True)
    pe.add_argument("--R", required=True)
    pe.add_argument("--Rprime", required=True)
    pe.add_argument("--eta")
    pe.add_argument("--r", type=int, default=2)
    pe.add_argument("--no-strict", action="store_true")
    pe.set_defaults(handler=cmd_extend_containers)

    pr = sub.add_parser("ramsey", help="experimental harness")
    rsub = pr.add_subparsers(dest="ramsey_cmd", required=True)
    pa = rsub.add_parser("arrows")
    pa.add_argument("--G", required=True)
    pa.add_argument("--H", required=True)
    pa.add_argument("--r", type=int, required=True)
    pa.add_argument("--budget", type=int)
    pev = rsub.add_parser("event")
    pev.add_argument("--kind", required=True, choices=["B", "Bprime", "E"])
    pev.add_argument("--G", required=True)
    pev.add_argument("--H", required=True, help="comma-separated targets")
    pev.add_argument("--config")
    pev.add_argument("--seed", type=int)
    pmc = rsub.add_parser("mc")
    pmc.add_argument("--experiment", required=True, choices=["chernoff", "extension"])
    pmc.add_argument("--config")
    pmc.add_argument("--seed", type=int)
    pr.set_defaults(handler=cmd_ramsey)

    return top


def dispatch(argv) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_INPUT if exc.code else EXIT_OK
    started = datetime.datetime.now(datetime.timezone.utc).isoformat()
    try:
        code, payload_text, extra_files = args.handler(args)
    except InputError as exc:
        sys.stderr.write(f"input error: {exc}\n")
        return EXIT_INPUT
    except CertificateViolation as exc:
        sys.stderr.write(f"certificate violation: {exc}\n")
        return EXIT_VIOLATION
    except BudgetError as exc:
        sys.stderr.write(f"budget exceeded: {exc}\n")
        return EXIT_BUDGET
    except UndecidedError as exc:
        sys.stderr.write(f"undecided: {exc}\n")
        return EXIT_UNDECIDED
    except FileNotFoundError as exc:
        sys.stderr.write(f"input error: {exc}\n")
        return EXIT_INPUT
    sys.stdout.write(payload_text)
    if args.out:
        digests = {}
        for key in ("hypergraph", "target", "cover", "G", "Gprime", "F", "H", "config"):
            value = getattr(args, key, None)
            if value and Path(str(value)).exists():
                digests[key] = _digest(str(value))
        record = RunRecord(
            command=list(argv),
            config={k: _jsonable(v) for k, v in vars(args).items() if k != "handler"},
            version=__version__,
            input_digests=digests,
            started=started,
            exit_status=code,
        )
        persist(args.out, record, payload_text, extra_files)
    return code


def main():
    sys.exit(dispatch(sys.argv[1:]))


if __name__ == "__main__":
    main()
