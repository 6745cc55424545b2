"""Batch command line.

Exit codes: 0 success, 1 embedding certification failed, 2 bad input.
Matrices are printed as CSV blocks, each preceded by ``# NAME (rows x cols)``
and followed by a blank line.
"""

import argparse
import sys

from .discretization import lifted_matrices
from .embedding import build_embedding, certify_embedding
from .io import ScenarioError, fmt, load_scenario, write_trace
from .linearization import build_linear_model
from .simulator import Scenario, run_scenario

EXIT_OK, EXIT_FAIL, EXIT_INPUT = 0, 1, 2


def format_matrix(name, m):
    rows, cols = m.shape
    lines = [f"# {name} ({rows}x{cols})"]
    if cols:
        lines += [",".join(fmt(v) for v in row) for row in m]
    return "\n".join(lines) + "\n\n"


def format_values(name, values):
    return f"# {name}\n" + ",".join(fmt(v) for v in values) + "\n\n"


def parse_blocks(text):
    """Inverse of the stdout format: ``{name: list of float rows}``."""
    blocks = {}
    current = None
    for line in text.splitlines():
        if line.startswith("# "):
            current = line[2:].split(" (")[0]
            blocks[current] = []
        elif line and current is not None:
            blocks[current].append([float(c) for c in line.split(",")])
    return blocks


def _linearize(sc, args, out):
    m = build_linear_model(sc.segment, sc.geometry)
    out.write(format_matrix("A", m.A) + format_matrix("B", m.B) + format_matrix("B_D", m.B_D))
    return EXIT_OK


def _discretize(sc, args, out):
    sys_ = sc.lifted_system()
    try:
        a_t, b_t, b_td = lifted_matrices(sys_, args.h)
    except ValueError as exc:
        raise ScenarioError(str(exc)) from exc
    out.write(format_values("h", [args.h]))
    out.write(format_matrix("A_tilde", a_t) + format_matrix("B_tilde", b_t))
    out.write(format_matrix("B_tilde_D", b_td))
    return EXIT_OK


def _embed(sc, args, out):
    nb = build_embedding(sc.lifted_system(), sc.margin)
    for name in ("A_nom", "B_nom", "B_D", "B_p", "C_q", "D_q"):
        out.write(format_matrix(name, getattr(nb, name)))
    out.write(format_values("h_nom", [nb.h_nom]))
    out.write(format_values("radii", nb.radii))
    out.write(format_values("margin", [nb.margin]))
    return EXIT_OK


def _validate(sc, args, out):
    if args.grid < 2:
        raise ScenarioError("--grid must be at least 2")
    sys_ = sc.lifted_system()
    nb = build_embedding(sys_, sc.margin)
    rep = certify_embedding(nb, sys_, args.grid)
    out.write("PASS\n" if rep.passed else "FAIL\n")
    out.write(f"residual,{fmt(rep.residual)}\n")
    out.write(f"max_delta_norm,{fmt(rep.max_delta_norm)}\n")
    out.write(f"grid_points,{rep.grid_points}\n")
    out.write(f"channels,{rep.n_channels}\n")
    return EXIT_OK if rep.passed else EXIT_FAIL


def _simulate(sc, args, out):
    trace = run_scenario(sc)
    write_trace(trace, args.out)
    out.write(f"wrote {len(trace.t)} rows to {args.out}\n")
    return EXIT_OK


def build_parser():
    p = argparse.ArgumentParser(
        prog="skidslip-ncs",
        description="Models of a slipping tracked robot controlled over a delayed network.",
    )
    p.add_argument("--scenario", help="scenario JSON file (built-in default if omitted)")
    sub = p.add_subparsers(dest="command", required=True)
    sub.add_parser("linearize", help="print A, B, B_D").set_defaults(run=_linearize)
    d = sub.add_parser("discretize", help="print the lifted matrices for one hold interval")
    d.add_argument("--h", type=float, required=True, help="hold interval Ts - tau [s]")
    d.set_defaults(run=_discretize)
    sub.add_parser("embed", help="print the norm-bounded model").set_defaults(run=_embed)
    v = sub.add_parser("validate-embedding", help="certify the norm-bounded model")
    v.add_argument("--grid", type=int, default=1000, help="number of hold intervals checked")
    v.set_defaults(run=_validate)
    s = sub.add_parser("simulate", help="co-simulate and write a CSV trace")
    s.add_argument("--out", required=True, help="output CSV path")
    s.set_defaults(run=_simulate)
    return p


def main(argv=None, out=None):
    out = out or sys.stdout
    args = build_parser().parse_args(argv)
    try:
        sc = load_scenario(args.scenario) if args.scenario else Scenario()
        return args.run(sc, args, out)
    except ScenarioError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
