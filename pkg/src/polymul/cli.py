"""Command-line front end.

Every subcommand writes one artifact (JSON unless ``--format`` says otherwise)
to stdout or ``--out``. Exit codes: 0 success, 1 domain error (one line on
stderr), 2 usage error.
"""

from __future__ import annotations

import argparse
import os
import sys
from fractions import Fraction

import numpy as np

from . import bernstein, dgmul, galerkin, lagrange, oracle
from ._scalars import PolyMulError, as_array, is_exact
from .bases import BUILTIN_NAMES, DgPolynomial, basis_from_json, builtin_basis
from .formats import (
    decode_vector,
    dumps,
    encode_matrix,
    encode_vector,
    load_json_arg,
    matrix_coo,
    matrix_csv,
)
from .opmatrix import OpMatrixCache, cache_get, opmatrix_json, pad_to_Htilde

__all__ = ["main", "run", "build_parser"]

CACHE_ENV = "POLYMUL_CACHE_DIR"
VERIFY_TOL = 1e-9


class UsageError(Exception):
    pass


# -- input helpers -------------------------------------------------------------


def _cache() -> OpMatrixCache | None:
    path = os.environ.get(CACHE_ENV)
    return OpMatrixCache(path) if path else None


def _resolve_basis(args):
    name = args.basis
    nodes = None
    if getattr(args, "nodes", None):
        nodes = decode_vector(load_json_arg(args.nodes))
    if name in BUILTIN_NAMES:
        basis = builtin_basis(name, nodes=nodes.tolist() if nodes is not None else None)
    else:
        if nodes is not None:
            raise UsageError("--nodes applies to the newton basis only")
        basis = basis_from_json(load_json_arg(name))
    if getattr(args, "exact", False) and not basis.exact:
        raise UsageError(f"basis {basis.name!r} is float-only; --exact is not available")
    return basis


def _coeff_list(data, key):
    if isinstance(data, dict):
        if key not in data:
            raise PolyMulError(f"polynomial JSON lacks {key!r}")
        return data[key]
    return data


def _exact_flag(args) -> bool | None:
    """Force rationals with --exact, otherwise infer from the JSON values."""
    if getattr(args, "exact", False):
        return True
    return None


def _dg_poly(text, basis, args) -> DgPolynomial:
    data = load_json_arg(text)
    if isinstance(data, dict) and "basis" in data and data["basis"] != basis.name:
        raise PolyMulError(f"polynomial is in basis {data['basis']!r}, not {basis.name!r}")
    coeffs = decode_vector(_coeff_list(data, "coeffs"), _exact_flag(args))
    return DgPolynomial(basis, coeffs)


def _interval(data, args):
    given = None
    if isinstance(data, dict) and "interval" in data:
        iv = data["interval"]
        if not isinstance(iv, list) or len(iv) != 2:
            raise PolyMulError("interval must be a two-element list")
        given = tuple(decode_vector(iv, _exact_flag(args)).tolist())
    if args.interval is not None:
        cli = tuple(decode_vector(list(args.interval), _exact_flag(args)).tolist())
        if given is not None and given != cli:
            raise PolyMulError(f"polynomial interval {list(given)} differs from --interval")
        return cli
    return given if given is not None else (Fraction(0), Fraction(1))


def _bern_poly(text, args) -> bernstein.BernsteinPolynomial:
    data = load_json_arg(text)
    coeffs = decode_vector(_coeff_list(data, "coeffs"), _exact_flag(args))
    a, b = _interval(data, args)
    return bernstein.BernsteinPolynomial(a, b, coeffs)


def _lag_poly(text, args) -> lagrange.LagrangePolynomial:
    data = load_json_arg(text)
    if not isinstance(data, dict):
        raise PolyMulError('Lagrange polynomial JSON must be {"nodes": [...], "values": [...]}')
    ex = _exact_flag(args)
    nodes = decode_vector(_coeff_list(data, "nodes"), ex)
    values = decode_vector(_coeff_list(data, "values"), ex)
    return lagrange.LagrangePolynomial(nodes, values)


def _extra_nodes(args):
    if not args.extra_nodes:
        return None
    data = load_json_arg(args.extra_nodes)
    if isinstance(data, dict):
        data = _coeff_list(data, "nodes")
    return decode_vector(data, _exact_flag(args))


def _int_list(text: str) -> list[int]:
    try:
        return [int(t) for t in text.split(",") if t.strip()]
    except ValueError as exc:
        raise UsageError(f"expected comma-separated integers, got {text!r}") from exc


# -- output helpers ------------------------------------------------------------


def _dg_json(p: DgPolynomial) -> dict:
    return {"basis": p.basis.name, "coeffs": encode_vector(p.coeffs)}


def _bern_json(p: bernstein.BernsteinPolynomial) -> dict:
    return {"interval": encode_vector([p.a, p.b]), "coeffs": encode_vector(p.coeffs)}


def _lag_json(p: lagrange.LagrangePolynomial) -> dict:
    return {"nodes": encode_vector(p.nodes), "values": encode_vector(p.values)}


def _matrix_out(mat, fmt: str, header: str, meta: dict) -> str:
    if fmt == "csv":
        return matrix_csv(mat, header)
    if fmt == "coo":
        return dumps({**meta, "shape": list(mat.shape), "entries": matrix_coo(mat)}) + "\n"
    return dumps({**meta, "rows": encode_matrix(mat)}) + "\n"


# -- subcommands ---------------------------------------------------------------


def cmd_basis_list(args) -> str:
    lines = []
    for name in BUILTIN_NAMES:
        if name == "newton":
            lines.append(f"{name}\texact-rational\tneeds --nodes")
            continue
        b = builtin_basis(name)
        extra = f"\torthonormal ({b.measure})" if b.orthonormal else ""
        lines.append(f"{name}\t{b.scalar_mode}{extra}")
    return "\n".join(lines) + "\n"


def cmd_opmatrix(args) -> str:
    basis = _resolve_basis(args)
    if not args.exact:
        basis = basis.as_float()
    H = cache_get(basis, args.n, args.k, _cache())
    E = H.entries if args.pad is None else pad_to_Htilde(H, args.pad)
    if args.format == "csv":
        return matrix_csv(E, f"H basis={basis.name} n={args.n} k={args.k}")
    return dumps(opmatrix_json(H, E)) + "\n"


def cmd_mul(args) -> str:
    basis = _resolve_basis(args)
    a, b = _dg_poly(args.a, basis, args), _dg_poly(args.b, basis, args)
    return dumps(_dg_json(dgmul.multiply(a, b, _cache()))) + "\n"


def cmd_pow(args) -> str:
    basis = _resolve_basis(args)
    a = _dg_poly(args.a, basis, args)
    return dumps(_dg_json(dgmul.power(a, args.p, _cache()))) + "\n"


def cmd_bmul(args) -> str:
    P, Q = _bern_poly(args.a, args), _bern_poly(args.b, args)
    return dumps(_bern_json(bernstein.multiply(P, Q))) + "\n"


def cmd_bpow(args) -> str:
    return dumps(_bern_json(bernstein.power(_bern_poly(args.a, args), args.p))) + "\n"


def cmd_blift(args) -> str:
    if args.a is not None:
        P = _bern_poly(args.a, args)
        if P.degree != args.n:
            raise PolyMulError(f"polynomial has degree {P.degree}, not -n {args.n}")
        return dumps(_bern_json(bernstein.lift(P, args.m))) + "\n"
    T = bernstein.lift_matrix(args.n, args.m, exact=True).matrix
    return _matrix_out(T, args.format, f"T n={args.n} m={args.m}", {"n": args.n, "m": args.m})


def cmd_lmul(args) -> str:
    P, Q = _lag_poly(args.a, args), _lag_poly(args.b, args)
    return dumps(_lag_json(lagrange.multiply(P, Q, _extra_nodes(args)))) + "\n"


def cmd_lpow(args) -> str:
    P = _lag_poly(args.a, args)
    return dumps(_lag_json(lagrange.power(P, args.p, _extra_nodes(args)))) + "\n"


def cmd_llift(args) -> str:
    P = _lag_poly(args.a, args)
    extra = _extra_nodes(args)
    if extra is None:
        raise UsageError("llift needs --extra-nodes")
    if args.matrix:
        R = lagrange.lift_matrix(P.nodes, extra).matrix
        return _matrix_out(R, args.format, "R", {"degree": P.degree, "extra": len(extra)})
    return dumps(_lag_json(lagrange.lift(P, extra))) + "\n"


def cmd_galerkin(args) -> str:
    basis = _resolve_basis(args)
    U = galerkin.univariate_U(basis, args.k, args.p, _cache()).matrix
    meta = {"basis": basis.name, "k": args.k, "p": args.p}
    return _matrix_out(U, args.format, f"U basis={basis.name} k={args.k} p={args.p}", meta)


def cmd_galerkin_g(args) -> str:
    alpha, orders = _int_list(args.alpha), _int_list(args.orders)
    names = args.basis.split(",")
    if len(names) == 1:
        names = names * len(alpha)
    bases = [_resolve_basis(argparse.Namespace(basis=nm)) for nm in names]
    G = galerkin.assemble_G(alpha, orders, bases, _cache())
    meta = {"alpha": alpha, "orders": orders, "bases": names}
    header = f"G alpha={args.alpha} orders={args.orders}"
    return _matrix_out(G, args.format, header, meta)


def _random_coeffs(rng: np.random.Generator, n: int, exact: bool):
    if exact:
        num = rng.integers(-9, 10, size=n + 1)
        den = rng.integers(1, 10, size=n + 1)
        return as_array([Fraction(int(p), int(q)) for p, q in zip(num, den)], True)
    return rng.uniform(-1.0, 1.0, size=n + 1)


def verify_report(names, degree_max: int, trials: int, seed: int) -> tuple[str, bool]:
    """Seeded multiply-vs-oracle comparison; returns (report text, all passed)."""
    rng = np.random.default_rng(seed)
    lines = [f"verify seed={seed} trials={trials} degree_max={degree_max}"]
    ok = True
    for name in names:
        if name == "newton":
            count = 2 * degree_max + 1
            nodes = [Fraction(2 * j - count + 1, count) for j in range(count)]
            basis = builtin_basis(name, nodes=nodes)
        else:
            basis = builtin_basis(name)
        worst = 0.0
        for _ in range(trials):
            n, m = (int(v) for v in rng.integers(0, degree_max + 1, size=2))
            xi = DgPolynomial(basis, _random_coeffs(rng, n, basis.exact))
            psi = DgPolynomial(basis, _random_coeffs(rng, m, basis.exact))
            got = dgmul.multiply(xi, psi)
            want = oracle.mul_via_monomial(xi, psi)
            if is_exact(got.coeffs) and is_exact(want.coeffs):
                dev = 0.0 if list(got.coeffs) == list(want.coeffs) else float("inf")
            else:
                dev = oracle.relative_linf(got.coeffs, want.coeffs)
            worst = max(worst, dev)
        passed = worst <= VERIFY_TOL
        ok &= passed
        lines.append(
            f"{name}: mode={basis.scalar_mode} max_rel_dev={worst:.3e} "
            f"tol={VERIFY_TOL:.0e} {'PASS' if passed else 'FAIL'}"
        )
    lines.append(f"overall: {'PASS' if ok else 'FAIL'}")
    return "\n".join(lines) + "\n", ok


def cmd_verify(args) -> str:
    if args.basis is not None and args.basis not in BUILTIN_NAMES:
        raise PolyMulError(f"unknown basis {args.basis!r}; choose from {', '.join(BUILTIN_NAMES)}")
    if args.degree_max < 0 or args.trials < 1:
        raise UsageError("--degree-max must be >= 0 and --trials >= 1")
    names = BUILTIN_NAMES if args.basis is None else (args.basis,)
    text, ok = verify_report(names, args.degree_max, args.trials, args.seed)
    args._failed = not ok
    return text


# -- parser --------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="polymul", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    def add(name, fn, help_):
        sp = sub.add_parser(name, help=help_)
        sp.set_defaults(func=fn)
        sp.add_argument("--out", help="write the artifact here instead of stdout")
        return sp

    def basis_opts(sp, exact=True):
        sp.add_argument("--basis", required=True, help="registry name or custom basis JSON")
        sp.add_argument("--nodes", help="node list (JSON or file) for the newton basis")
        if exact:
            sp.add_argument("--exact", action="store_true", help="exact rational arithmetic")

    add("basis-list", cmd_basis_list, "list registered bases")

    sp = add("opmatrix", cmd_opmatrix, "operational matrix H_{n,k}")
    basis_opts(sp)
    sp.add_argument("-n", type=int, required=True)
    sp.add_argument("-k", type=int, required=True)
    sp.add_argument("--pad", type=int, help="zero-pad to n+M+1 columns")
    sp.add_argument("--format", choices=("json", "csv"), default="json")

    sp = add("mul", cmd_mul, "product in a degree-graded basis")
    basis_opts(sp)
    sp.add_argument("--a", required=True)
    sp.add_argument("--b", required=True)

    sp = add("pow", cmd_pow, "power in a degree-graded basis")
    basis_opts(sp)
    sp.add_argument("--a", required=True)
    sp.add_argument("-p", type=int, required=True)

    for name, fn, two in (("bmul", cmd_bmul, True), ("bpow", cmd_bpow, False)):
        sp = add(name, fn, "Bernstein " + ("product" if two else "power"))
        sp.add_argument("--interval", nargs=2, metavar=("A", "B"))
        sp.add_argument("--a", required=True)
        if two:
            sp.add_argument("--b", required=True)
        else:
            sp.add_argument("-p", type=int, required=True)
        sp.add_argument("--exact", action="store_true")

    sp = add("blift", cmd_blift, "Bernstein degree elevation matrix or lifted polynomial")
    sp.add_argument("-n", type=int, required=True)
    sp.add_argument("-m", type=int, required=True)
    sp.add_argument("--a", help="polynomial to lift (otherwise print T_{n,m})")
    sp.add_argument("--interval", nargs=2, metavar=("A", "B"))
    sp.add_argument("--format", choices=("json", "csv", "coo"), default="json")
    sp.add_argument("--exact", action="store_true")

    for name, fn, help_ in (
        ("lmul", cmd_lmul, "Lagrange product"),
        ("lpow", cmd_lpow, "Lagrange power"),
        ("llift", cmd_llift, "Lagrange lift onto extra nodes"),
    ):
        sp = add(name, fn, help_)
        sp.add_argument("--a", required=True)
        if name == "lmul":
            sp.add_argument("--b", required=True)
        if name == "lpow":
            sp.add_argument("-p", type=int, required=True)
        if name == "llift":
            sp.add_argument("--matrix", action="store_true", help="print R = [I | K] instead")
            sp.add_argument("--format", choices=("json", "csv", "coo"), default="json")
        sp.add_argument("--extra-nodes", help="JSON list or file of nodes to append")
        sp.add_argument("--exact", action="store_true")

    sp = add("galerkin", cmd_galerkin, "stochastic Galerkin block U_{k,p}")
    basis_opts(sp, exact=False)
    sp.add_argument("-k", type=int, required=True)
    sp.add_argument("-p", type=int, required=True)
    sp.add_argument("--format", choices=("json", "csv", "coo"), default="json")

    sp = add("galerkin-g", cmd_galerkin_g, "multivariate block G_alpha")
    sp.add_argument("--alpha", required=True, help="multi-index, e.g. 1,2")
    sp.add_argument("--orders", required=True, help="per-dimension orders, e.g. 2,2")
    sp.add_argument("--basis", required=True, help="one basis, or one per dimension")
    sp.add_argument("--format", choices=("json", "csv", "coo"), default="json")

    sp = add("verify", cmd_verify, "seeded comparison against the monomial oracle")
    sp.add_argument("--basis")
    sp.add_argument("--degree-max", type=int, default=10)
    sp.add_argument("--trials", type=int, default=50)
    sp.add_argument("--seed", type=int, default=0)
    return p


def run(argv=None, stdout=None, stderr=None) -> int:
    stdout = sys.stdout if stdout is None else stdout
    stderr = sys.stderr if stderr is None else stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        text = args.func(args)
    except UsageError as exc:
        print(f"polymul {args.command}: usage error: {exc}", file=stderr)
        return 2
    except (PolyMulError, OSError, ZeroDivisionError) as exc:
        msg = " ".join(str(exc).split())
        print(f"polymul {args.command}: error: {msg}", file=stderr)
        return 1
    if args.out:
        try:
            with open(args.out, "w") as fh:
                fh.write(text)
        except OSError as exc:
            print(f"polymul {args.command}: error: cannot write {args.out}: {exc.strerror}", file=stderr)
            return 1
    else:
        stdout.write(text)
    return 1 if getattr(args, "_failed", False) else 0


def main(argv=None) -> None:
    sys.exit(run(argv))
