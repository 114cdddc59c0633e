"""Command-line front end: ``kronsplit simulate | analyze | reconstruct | generate``."""
import argparse
from dataclasses import dataclass
from pathlib import Path
import sys
import warnings

from .circular import CircularOrder, is_circular_planar
from .errors import KronSplitError, ParseError, PipelineError
from .kalmanson import (
    count_consistent_orders,
    find_circular_order,
    format_split_system,
    is_kalmanson,
    split_decomposition,
    split_metric,
)
from .matkernel import Arith, format_matrix, read_matrix
from .network import (
    format_network,
    random_circular_planar,
    read_network,
    resistance_matrix,
    response_matrix,
)
from .reconstruct import (
    PipelineConfig,
    _choose_order,
    format_plan,
    network_dot,
    reconstruct_from,
    reconstruct_pipeline,
    verify_bridge,
)
from .response import m_from_w, validate_resistance, validate_response, w_from_m
from .splitsys import decompose, one_nested_obstruction, render_dot, split_table

GATE_BASE = 10


@dataclass(frozen=True)
class RunConfig:
    """Options shared by the subcommands; exact mode ignores ``tol``."""

    mode: str = "exact"
    tol: float = 1e-6
    order: object = "search"
    max_n: int = 10
    emit: str = "all"
    seed: int = 0

    @property
    def exact(self):
        return self.mode == "exact"

    @property
    def arith(self):
        return Arith(True) if self.exact else Arith(False, self.tol)

    def pipeline(self):
        order = None if self.order == "search" else tuple(self.order)
        return PipelineConfig(arith=self.arith, order=order, max_n=self.max_n)


def _parse_order(text):
    if text == "search":
        return text
    try:
        seq = [int(t) for t in text.replace(",", " ").split()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"order must be 'search' or a permutation, got {text!r}")
    if len(set(seq)) != len(seq) or not seq:
        raise argparse.ArgumentTypeError(f"order {text!r} is not a permutation")
    return tuple(seq)


def _config(args):
    return RunConfig(
        mode=args.mode,
        tol=args.tol,
        order=getattr(args, "order", "search"),
        max_n=getattr(args, "max_n", 10),
        emit=getattr(args, "emit", "all"),
        seed=getattr(args, "seed", 0),
    )


def _load(path, cfg, kind):
    m = read_matrix(path, exact=cfg.exact)
    if m.n < 2:
        raise ParseError("matrices need n >= 2")
    return m


def _write(out, name, text):
    if out is None:
        sys.stdout.write(f"== {name}\n{text}")
    else:
        Path(out).mkdir(parents=True, exist_ok=True)
        (Path(out) / name).write_text(text)


# -- subcommands ---------------------------------------------------------------
def cmd_simulate(args):
    cfg = _config(args)
    net = read_network(args.network)
    m = response_matrix(net, exact=cfg.exact)
    r = resistance_matrix(net, exact=cfg.exact)
    w = r.restrict(net.boundary)
    order = CircularOrder(net.boundary)
    system = split_decomposition(w, order, cfg.arith)
    _write(args.out, "M.txt", format_matrix(m))
    _write(args.out, "W.txt", format_matrix(w))
    _write(args.out, "R.txt", format_matrix(r))
    if cfg.emit in ("table", "all"):
        _write(args.out, "splits.txt", format_split_system(system))
    if cfg.emit in ("dot", "all"):
        _write(args.out, "splits.dot", render_dot(system))
    if args.self_check:
        back = split_metric(system, w.labels)
        if not back.equals(w, None if cfg.exact else cfg.tol):
            print("self-check failed: split metric differs from W", file=sys.stderr)
            return 1
        print("self-check: split metric reproduces W", file=sys.stderr)
    return 0


def _report_lines(m, w, cfg):
    """Steps 1-3 as report lines; returns (lines, failed step or None)."""
    arith = cfg.arith
    lines = []
    rep = validate_response(m, arith)
    lines.append("validation: ok" if rep.valid else "validation: fails " + ", ".join(rep.reasons))
    if rep.cut_points:
        cuts = "; ".join(f"{v} separates {sorted(map(sorted, comps))}" for v, comps in rep.cut_points.items())
        lines.append("cut points: " + cuts)
    if not rep.valid and (w is None or not rep.connected or not rep.sign_pattern):
        return lines, 1
    if w is None:
        w = w_from_m(m, arith)
    if cfg.order == "search":
        found = find_circular_order(w, arith, cfg.max_n)
        if found.status != "found":
            lines.append(f"order: {found.status}")
            kv = is_kalmanson(w, CircularOrder(sorted(w.labels)), arith)
            lines.append(f"Kalmanson: no (witness {kv.witness})")
            return lines, 2
        order = found.order
        if w.n <= cfg.max_n:
            lines.append(f"consistent orders: {count_consistent_orders(w, arith)}")
    else:
        order = CircularOrder(cfg.order)
    kv = is_kalmanson(w, order, arith)
    lines.append("order: " + " ".join(map(str, order.seq)))
    lines.append("Kalmanson: yes" if kv else f"Kalmanson: no (witness {kv.witness})")
    if not kv:
        return lines, 2
    verdict = is_circular_planar(m, order, arith)
    failed = None
    if verdict.planar:
        lines.append("planar: yes")
    else:
        try:
            other = _choose_order(m, w, cfg.pipeline(), None if cfg.order == "search" else order)
            lines.append(f"planar: yes for order {' '.join(map(str, other.seq))}")
            order = other
        except PipelineError:
            lines.append(f"planar: no, witness {verdict.witness} (minor {verdict.value})")
            failed = 2
    system = split_decomposition(w, order, arith)
    lines.append(f"splits: {len(system)}")
    lines.extend("  " + row for row in split_table(system).splitlines())
    dec = decompose(system)
    for s in dec.bridge_candidates:
        chk = verify_bridge(m, order, s, dec, arith)
        status = "verified" if chk.verified else f"unverified, blocked {chk.blocked}"
        lines.append(f"bridge candidate {s.label(order)} weight {s.weight}: {status}")
    lines.append(f"blobs: {len(dec.blobs)}")
    obs = one_nested_obstruction(system, arith)
    lines.append("obstruction: no obstruction of this form" if obs is None else str(obs))
    return lines, failed


def cmd_analyze(args):
    cfg = _config(args)
    mat = _load(args.matrix, cfg, args.kind)
    w = read_matrix(args.resistance, exact=cfg.exact) if args.resistance else None
    if args.kind == "W":
        reasons = validate_resistance(mat, cfg.arith)
        if reasons:
            print("validation: resistance matrix fails " + ", ".join(reasons))
            return GATE_BASE + 1
        w, mat = mat, m_from_w(mat, cfg.arith, check=False)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        lines, failed = _report_lines(mat, w, cfg)
    print("\n".join(lines))
    return 0 if failed is None else GATE_BASE + failed


def cmd_reconstruct(args):
    cfg = _config(args)
    mat = _load(args.matrix, cfg, args.kind)
    w = read_matrix(args.resistance, exact=cfg.exact) if args.resistance else None
    if args.kind == "W":
        w, mat = mat, m_from_w(mat, cfg.arith, check=False)
    try:
        with warnings.catch_warnings():
            warnings.simplefilter("ignore")
            if w is None:
                plan = reconstruct_pipeline(mat, cfg.pipeline())
            else:
                plan = reconstruct_from(mat, w, cfg.pipeline())
    except PipelineError as exc:
        print(f"step {exc.step} failed: {exc.reason}", file=sys.stderr)
        if exc.witness is not None:
            print(f"witness: {exc.witness}", file=sys.stderr)
        return GATE_BASE + exc.step
    if cfg.emit in ("table", "all"):
        _write(args.out, "plan.txt", format_plan(plan))
    if cfg.emit in ("dot", "all"):
        _write(args.out, "network.dot", network_dot(plan.network))
    return 0


def cmd_generate(args):
    net = random_circular_planar(args.n, interior=args.interior, seed=args.seed, density=args.density)
    text = format_network(net)
    if args.out:
        Path(args.out).write_text(text)
    else:
        sys.stdout.write(text)
    return 0


# -- parser ----------------------------------------------------------------------
def _common(p):
    p.add_argument("--mode", choices=("exact", "float"), default="exact")
    p.add_argument("--tol", type=float, default=1e-6, help="relative zero tolerance (float mode)")


def _pipeline_flags(p):
    p.add_argument("--order", type=_parse_order, default="search", help="'search' or a permutation like 1,3,2,4")
    p.add_argument("--max-n", type=int, default=10, help="largest n for exhaustive order search")
    p.add_argument("--kind", choices=("M", "W"), default="M", help="matrix kind of the input file")
    p.add_argument("--resistance", help="paired resistance matrix measured with M")


def build_parser():
    parser = argparse.ArgumentParser(prog="kronsplit", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("simulate", help="response, resistance and split system of a network file")
    p.add_argument("network")
    p.add_argument("--out", help="output directory (default: stdout)")
    p.add_argument("--emit", choices=("dot", "table", "all"), default="all")
    p.add_argument("--self-check", action="store_true", help="verify the split metric round trip")
    _common(p)
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("analyze", help="validation, order, Kalmanson, planarity and splits")
    p.add_argument("matrix")
    _common(p)
    _pipeline_flags(p)
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("reconstruct", help="recover the network graph from a response matrix")
    p.add_argument("matrix")
    p.add_argument("--out", help="output directory (default: stdout)")
    p.add_argument("--emit", choices=("dot", "table", "all"), default="all")
    _common(p)
    _pipeline_flags(p)
    p.set_defaults(func=cmd_reconstruct)

    p = sub.add_parser("generate", help="random circular planar network file")
    p.add_argument("--n", type=int, default=5)
    p.add_argument("--interior", type=int, default=2)
    p.add_argument("--density", type=float, default=0.5)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out")
    p.set_defaults(func=cmd_generate)
    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ParseError as exc:
        print(f"parse error: {exc}", file=sys.stderr)
        return 2
    except (KronSplitError, OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
