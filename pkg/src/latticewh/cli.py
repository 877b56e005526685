"""Command line entry point ``latticewh``.

Subcommands: ``dispersion``, ``kernel``, ``analogy-check``,
``greens-check``, ``solve``, ``oracle``, ``fem-check``. Each prints a JSON
report (``"schema": "v1"``) on standard output; ``--out DIR`` also writes
the report and any CSV tables to ``DIR``. Exit codes: 0 success, 1 invalid
input, 2 numerical failure.
"""

from __future__ import annotations

import argparse
import csv
import json
import os
import re
import sys

import numpy as np

from . import direct_oracle, fem_appendix, lattice_core, wh_catalog, wh_solver
from .dispersion import LatticeDispersion, branch_points, q_physical, unit_circle, upsilon
from .errors import InvalidInput, NotApplicable, NumericalFailure

SCHEMA = "v1"

_COMPLEX = re.compile(r"^\s*[-+0-9.eEij]+\s*$")


def parse_complex(text: str) -> complex:
    """Parse ``'1+0.2i'``, ``'0.3i'``, ``'2'`` (``j`` accepted too)."""
    t = str(text).strip().replace(" ", "")
    if not t or not _COMPLEX.match(t):
        raise argparse.ArgumentTypeError(f"not a complex literal: {text!r}")
    t = t.replace("i", "j")
    if t.endswith("j") and (t[:-1] == "" or t[:-1] in "+-"):
        t = t[:-1] + "1j"
    try:
        return complex(t)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a complex literal: {text!r}") from None


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise InvalidInput(message)


def _cfmt(z):
    return [repr(float(np.real(z))), repr(float(np.imag(z)))]


def _cjson(z):
    return {"re": float(np.real(z)), "im": float(np.imag(z))}


def _write_csv(path, header, rows):
    with open(path, "w", newline="") as fh:
        wr = csv.writer(fh, lineterminator="\n")
        wr.writerow(header)
        wr.writerows(rows)


def _emit(args, report, name):
    text = json.dumps(report, indent=2, sort_keys=True)
    print(text)
    if args.out:
        with open(os.path.join(args.out, name), "w") as fh:
            fh.write(text + "\n")


def _outdir(args):
    if args.out:
        os.makedirs(args.out, exist_ok=True)
    return args.out


# --- problem construction -------------------------------------------------

def _add_problem_args(p, problem=True):
    if problem:
        p.add_argument("--problem", required=True, choices=wh_catalog.PROBLEMS)
    p.add_argument("--side", choices=wh_catalog.SIDES, default="discrete")
    p.add_argument("--ktilde", type=parse_complex, help="lattice wavenumber (discrete side)")
    p.add_argument("--k", type=parse_complex, help="wavenumber (continuous side)")
    p.add_argument("--sin", type=parse_complex, help="incident s (discrete)")
    p.add_argument("--sin2", type=parse_complex, help="second incident s (quarter plane)")
    p.add_argument("--theta", type=float, help="incidence angle (continuous)")
    p.add_argument("--phi", type=float, help="azimuth (continuous quarter plane)")
    p.add_argument("--mode", type=int, help="guided mode index (strip in waveguide)")
    p.add_argument("--M", type=int)
    p.add_argument("--N", type=int)
    p.add_argument("--L", type=int)
    p.add_argument("--a", type=float)
    p.add_argument("--b", type=float)
    p.add_argument("--samples", type=int, default=256)


def _geometry(args, names):
    return {g: getattr(args, g) for g in names if getattr(args, g) is not None}


def _build(args):
    if args.side == "discrete":
        if args.ktilde is None:
            raise InvalidInput("--ktilde is required on the discrete side")
        geo = _geometry(args, ("M", "N", "L"))
        if args.problem != "strip-in-waveguide" and args.sin is None:
            raise InvalidInput("--sin is required")
        return wh_catalog.discrete_problem(
            args.problem, args.ktilde, args.sin, q_mode=args.mode, s2_in=args.sin2, **geo
        )
    if args.k is None:
        raise InvalidInput("--k is required on the continuous side")
    geo = _geometry(args, ("a", "b"))
    if args.problem != "strip-in-waveguide" and args.theta is None:
        raise InvalidInput("--theta is required")
    if args.problem == "quarter-plane" and args.phi is None:
        raise InvalidInput("--phi is required for the quarter plane")
    return wh_catalog.continuous_problem(
        args.problem, args.k, args.theta, mode=args.mode, phi=args.phi, **geo
    )


def _sample_points(spec, n):
    """Unit circle (lattice) or a real segment (continuous); tori in 2 variables."""
    if n <= 0:
        raise InvalidInput("--samples must be positive")
    if spec.side == "discrete":
        base = lambda m: unit_circle(m) * np.exp(1j * np.pi / m)  # noqa: E731
    else:
        span = 3 * max(1.0, abs(spec.dispersion.k))
        base = lambda m: np.linspace(-span, span, m) + 0j  # noqa: E731
    if spec.name == "quarter-plane":
        m = max(2, int(round(np.sqrt(n))))
        z1, z2 = np.meshgrid(base(m), base(m), indexing="ij")
        return (z1.ravel(), z2.ravel())
    return base(n)


# --- subcommands ----------------------------------------------------------

def cmd_dispersion(args):
    disp = LatticeDispersion(args.ktilde)
    s = unit_circle(args.samples) * np.exp(1j * np.pi / args.samples)
    q = q_physical(s, disp)
    ups = upsilon(s, disp)
    out = _outdir(args)
    if out:
        rows = [_cfmt(a) + _cfmt(b) + _cfmt(c) for a, b, c in zip(s, q, ups)]
        _write_csv(os.path.join(out, "dispersion.csv"),
                   ["re_s", "im_s", "re_q", "im_q", "re_upsilon", "im_upsilon"], rows)
    bp = branch_points(disp)
    report = {
        "schema": SCHEMA,
        "ktilde": _cjson(disp.ktilde),
        "samples": int(args.samples),
        "branch_points": {k: _cjson(v) for k, v in bp.items()},
        "max_abs_q": float(np.abs(q).max()),
    }
    _emit(args, report, "dispersion.json")
    return 0


def cmd_kernel(args):
    spec = _build(args)
    z = _sample_points(spec, args.samples)
    K = wh_catalog.kernel(spec, z)
    F = wh_catalog.forcing(spec, z)
    k = K.shape[-1]
    zs = z if isinstance(z, tuple) else (z,)
    zname = ("s" if spec.side == "discrete" else "xi")
    head = []
    for i in range(len(zs)):
        nm = zname + (str(i + 1) if len(zs) > 1 else "")
        head += [f"re_{nm}", f"im_{nm}"]
    head += [f"{p}_K{i}{j}" for i in range(k) for j in range(k) for p in ("re", "im")]
    head += [f"{p}_F{i}" for i in range(k) for p in ("re", "im")]
    rows = []
    for idx in range(len(zs[0])):
        r = []
        for zz in zs:
            r += _cfmt(zz[idx])
        for i in range(k):
            for j in range(k):
                r += _cfmt(K[idx, i, j])
        for i in range(k):
            r += _cfmt(F[idx, i])
        rows.append(r)
    out = _outdir(args)
    if out:
        _write_csv(os.path.join(out, "kernel.csv"), head, rows)
    report = {"schema": SCHEMA, "problem": spec.name, "side": spec.side,
              "samples": len(rows), "size": int(k), "columns": head}
    _emit(args, report, "kernel.json")
    return 0


def cmd_analogy(args):
    spec = _build(args)
    z = _sample_points(spec, args.samples)
    try:
        rk = wh_catalog.analogy_residual(spec, z, "kernel")
    except NotApplicable:
        rk = None
    try:
        rf = wh_catalog.analogy_residual(spec, z, "forcing")
    except NotApplicable:
        rf = None
    report = {
        "schema": SCHEMA,
        "problem": spec.name,
        "side": spec.side,
        "samples": int(len(z[0]) if isinstance(z, tuple) else len(z)),
        "kernel_residual": rk,
        "forcing_residual": rf,
        "max_residual": max(rk or 0.0, rf or 0.0),
        "applicable": rk is not None,
    }
    _emit(args, report, "analogy.json")
    return 0


def _domain(args):
    if args.domain:
        with open(args.domain) as fh:
            return lattice_core.LatticeDomain.from_json(json.load(fh))
    if args.rect:
        return lattice_core.LatticeDomain([tuple(r) for r in args.rect])
    if args.box:
        return lattice_core.LatticeDomain([tuple(args.box)])
    raise InvalidInput("give --domain, --rect or --box")


def cmd_greens(args):
    dom = _domain(args)
    k2 = args.ktilde ** 2
    A, _ = lattice_core.operator_matrix(dom, k2)
    rng = np.random.default_rng(args.seed)
    rel = []
    for _ in range(args.pairs):
        u = lattice_core.Field.random(dom, rng)
        w = lattice_core.Field.random(dom, rng)
        rel.append(lattice_core.greens_residual(u, w, k2, A).relative)
    report = {"schema": SCHEMA, "domain": dom.to_json(), "pairs": int(args.pairs),
              "seed": int(args.seed), "max_relative": float(max(rel))}
    _emit(args, report, "greens.json")
    return 0


def cmd_solve(args):
    name = args.problem
    if name not in ("half-plane-dirichlet", "half-plane-neumann"):
        raise InvalidInput("solve supports half-plane-dirichlet and half-plane-neumann")
    if args.ktilde is None or args.sin is None:
        raise InvalidInput("--ktilde and --sin are required")
    if args.window < 0:
        raise InvalidInput("--window must be non-negative")
    spec = wh_catalog.discrete_problem(name, args.ktilde, args.sin)
    bc = name.split("-")[-1]
    sol = wh_solver.solve_half_plane(spec.dispersion, spec.incidence, bc, args.modes)
    t = sol.contour.samples
    res = wh_catalog.wh_residual(spec, sol.psi_minus.values[:, None],
                                 sol.psi_plus.values[:, None], t)
    half = args.window // 2
    ms = np.arange(-half, half + 1)
    ns = np.arange(0, args.window + 1)
    Mg, Ng = np.meshgrid(ms, ns, indexing="ij")
    field = wh_solver.reconstruct_field(sol, Mg, Ng)
    diag = {
        "schema": SCHEMA,
        "problem": name,
        "ktilde": _cjson(spec.dispersion.ktilde),
        "s_in": _cjson(spec.incidence.s_in),
        "modes": int(args.modes),
        "index": int(sol.factorization.index),
        "factorization_error": sol.factorization.reconstruction_error,
        "wh_residual": float(np.abs(res).max()),
        "decay": {str(k): v for k, v in wh_solver.decay_profile(sol).items()},
        "window": {"m": [int(ms[0]), int(ms[-1])], "n": [int(ns[0]), int(ns[-1])]},
    }
    if args.verify:
        tp = direct_oracle.TruncatedProblem(spec, args.R)
        osol = direct_oracle.solve(tp)
        samples = unit_circle(64) * np.exp(1j * np.pi / 64)
        ospec = direct_oracle.extract_spectra(osol, samples)
        dm = np.abs(sol.psi_minus(samples) - ospec.minus[:, 0]).max() / np.abs(ospec.minus).max()
        dp = np.abs(sol.psi_plus(samples) - ospec.plus[:, 0]).max() / np.abs(ospec.plus).max()
        ofield = np.array([[osol.value(int(m), int(n)) for n in ns] for m in ms])
        df = np.abs(field - ofield).max() / np.abs(ofield).max()
        diag["verify"] = {"R": int(args.R), "minus_relative": float(dm),
                          "plus_relative": float(dp), "field_relative": float(df),
                          "oracle_tail_bound": ospec.tail_bound}
    out = _outdir(args)
    if out:
        rows = [_cfmt(a) + _cfmt(b) + _cfmt(c)
                for a, b, c in zip(t, sol.psi_minus.values, sol.psi_plus.values)]
        _write_csv(os.path.join(out, "spectra.csv"),
                   ["re_s", "im_s", "re_minus", "im_minus", "re_plus", "im_plus"], rows)
        rows = [[int(m), int(n)] + _cfmt(v)
                for m, n, v in zip(Mg.ravel(), Ng.ravel(), field.ravel())]
        _write_csv(os.path.join(out, "field.csv"), ["m", "n", "re", "im"], rows)
    _emit(args, diag, "diagnostics.json")
    return 0


def cmd_oracle(args):
    spec = _build(args)
    tp = direct_oracle.TruncatedProblem(spec, args.R, args.Lz)
    if spec.name == "quarter-plane":
        sol = direct_oracle.solve_3d(tp)
        m = max(2, int(round(np.sqrt(args.samples))))
        c = unit_circle(m) * np.exp(1j * np.pi / m)
        z1, z2 = np.meshgrid(c, c, indexing="ij")
        z = (z1.ravel(), z2.ravel())
        sp = direct_oracle.extract_spectra_3d(sol, *z)
    else:
        sol = direct_oracle.solve(tp)
        z = unit_circle(args.samples) * np.exp(1j * np.pi / args.samples)
        sp = direct_oracle.extract_spectra(sol, z)
    res = wh_catalog.wh_residual(spec, sp.minus, sp.plus, z)
    report = {
        "schema": SCHEMA, "problem": spec.name, "R": int(args.R),
        "samples": int(len(sp.minus)), "solve_residual": sol.residual,
        "wh_residual": float(np.abs(res).max()), "tail_bound": sp.tail_bound,
    }
    out = _outdir(args)
    if out:
        k = sp.minus.shape[-1]
        zs = z if isinstance(z, tuple) else (z,)
        head = []
        for i in range(len(zs)):
            nm = "s" + (str(i + 1) if len(zs) > 1 else "")
            head += [f"re_{nm}", f"im_{nm}"]
        head += [f"{p}_{w}{i}" for w in ("minus", "plus") for i in range(k) for p in ("re", "im")]
        rows = []
        for idx in range(len(sp.minus)):
            r = []
            for zz in zs:
                r += _cfmt(zz[idx])
            for arr in (sp.minus, sp.plus):
                for i in range(k):
                    r += _cfmt(arr[idx, i])
            rows.append(r)
        _write_csv(os.path.join(out, "oracle_spectra.csv"), head, rows)
    _emit(args, report, "oracle.json")
    return 0


def cmd_fem(args):
    Ke, Me = fem_appendix.element_matrices()
    Ks1, Ms1 = fem_appendix.assemble_square("s1")
    Ks2, Ms2 = fem_appendix.assemble_square("s2")
    Ks, Ms, Ml = fem_appendix.average_and_lump((Ks1, Ms1), (Ks2, Ms2))
    L = fem_appendix.matrix_to_lists
    if args.rect:
        domains = [lattice_core.LatticeDomain([tuple(r) for r in args.rect])]
    else:
        domains = [lattice_core.LatticeDomain.rectangle(0, 10, 0, 10),
                   lattice_core.LatticeDomain([(0, 8, 0, 4), (0, 4, 0, 8)])]
    reports = []
    for d in domains:
        r = fem_appendix.equivalence_report(d)
        reports.append({"domain": d.to_json(), "nodes": r.nodes, "matched": r.matched,
                        "factor": None if r.factor is None else str(r.factor),
                        "by_kind": dict(sorted(r.by_kind.items())),
                        "mismatches": [list(m) for m in r.mismatches]})
    report = {
        "schema": SCHEMA,
        "element": {"K": L(Ke), "M": L(Me)},
        "square": {"K_s1": L(Ks1), "K_s2": L(Ks2), "M_s1": L(Ms1), "M_s2": L(Ms2),
                   "K": L(Ks), "M": L(Ms), "M_lumped": L(Ml)},
        "equivalence": reports,
    }
    _emit(args, report, "fem.json")
    return 0


def build_parser():
    p = _Parser(prog="latticewh", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    d = sub.add_parser("dispersion", help="q, upsilon on the unit circle and branch points")
    d.add_argument("--ktilde", type=parse_complex, required=True)
    d.add_argument("--samples", type=int, default=256)
    d.set_defaults(func=cmd_dispersion)

    k = sub.add_parser("kernel", help="sample kernel and forcing")
    _add_problem_args(k)
    k.set_defaults(func=cmd_kernel)

    a = sub.add_parser("analogy-check", help="direct vs generated kernel/forcing")
    _add_problem_args(a)
    a.set_defaults(func=cmd_analogy)

    g = sub.add_parser("greens-check", help="discrete Green's identity on random fields")
    g.add_argument("--ktilde", type=parse_complex, required=True)
    g.add_argument("--domain", help="domain JSON file")
    g.add_argument("--rect", type=int, nargs=4, action="append",
                   metavar=("M0", "M1", "N0", "N1"))
    g.add_argument("--box", type=int, nargs=6, metavar=("M0", "M1", "N0", "N1", "L0", "L1"))
    g.add_argument("--pairs", type=int, default=10)
    g.add_argument("--seed", type=int, default=0)
    g.set_defaults(func=cmd_greens)

    s = sub.add_parser("solve", help="Wiener-Hopf solution of a lattice half plane")
    s.add_argument("--problem", required=True)
    s.add_argument("--ktilde", type=parse_complex)
    s.add_argument("--sin", type=parse_complex)
    s.add_argument("--window", type=int, default=20)
    s.add_argument("--modes", type=int, default=1024)
    s.add_argument("--verify", action="store_true", help="compare with the direct oracle")
    s.add_argument("--R", type=int, default=60)
    s.set_defaults(func=cmd_solve)

    o = sub.add_parser("oracle", help="brute-force truncated lattice solve")
    _add_problem_args(o)
    o.add_argument("--R", type=int, default=50)
    o.add_argument("--Lz", type=int)
    o.set_defaults(func=cmd_oracle, side="discrete")

    f = sub.add_parser("fem-check", help="finite-element matrices and stencil equivalence")
    f.add_argument("--rect", type=int, nargs=4, action="append",
                   metavar=("M0", "M1", "N0", "N1"))
    f.set_defaults(func=cmd_fem)

    for sp_ in (d, k, a, g, s, o, f):
        sp_.add_argument("--out", help="directory for JSON/CSV artifacts")
    return p


def run(argv=None) -> int:
    """Run the CLI; returns the exit code."""
    try:
        args = build_parser().parse_args(argv)
        if getattr(args, "samples", 1) is not None and getattr(args, "samples", 1) <= 0:
            raise InvalidInput("--samples must be positive")
        return args.func(args)
    except NumericalFailure as exc:
        print(f"latticewh: numerical failure: {exc}", file=sys.stderr)
        return 2
    except (InvalidInput, ValueError, argparse.ArgumentTypeError) as exc:
        print(f"latticewh: invalid input: {exc}", file=sys.stderr)
        return 1


def main():  # pragma: no cover
    sys.exit(run())
