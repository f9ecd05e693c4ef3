"""Command-line front end.

Exit codes: 0 when every check passes, 1 on a mathematical failure, 2 on a
usage or configuration error.  Structured output is JSON (sorted keys) or
CSV; exact values are written as strings.
"""

from __future__ import annotations

import argparse
import csv
import io
import itertools
import json
import random
import sys
from fractions import Fraction

import mpmath

from .errors import QDahaError

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


def _num(x, digits=20) -> str:
    x = mpmath.mpmathify(x)
    if isinstance(x, mpmath.mpc) and x.imag == 0:
        x = x.real
    return mpmath.nstr(x, digits)


def _record(rid, params, lhs, rhs, residual, ok) -> dict:
    return {"id": rid, "parameters": params, "lhs": lhs, "rhs": rhs, "residual": residual, "pass": bool(ok)}


def _rel(lhs, rhs):
    lhs, rhs = mpmath.mpmathify(lhs), mpmath.mpmathify(rhs)
    return abs(lhs - rhs) / max(abs(rhs), mpmath.mpf(10) ** -300)


def _parse_k(text):
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError):
        try:
            return complex(text.replace("i", "j"))
        except ValueError:
            raise UsageError(f"cannot read k={text!r}") from None


# ---------------------------------------------------------------------------
# identities


def _identities_a(a, k, digits):
    from . import qanalysis as qa
    from .qseries import QContext

    ctx = QContext.exp_inv_a(a, digits=digits)
    kf = complex(k) if not isinstance(k, Fraction) else float(k)
    out = []
    params = {"a": str(a), "k": str(k)}
    if complex(kf).real > 0:
        lhs, rhs = qa.q_gauss_delta(kf, ctx)
        r = _rel(lhs.value, rhs)
        out.append(_record("eq5", params, _num(lhs.value), _num(rhs), _num(r, 5), r < 1e-8))
    if complex(kf).real > -0.5:
        lhs, rhs = qa.q_gauss_mu(kf, ctx)
        r = _rel(lhs.value, rhs)
        out.append(_record("eq6", params, _num(lhs.value), _num(rhs), _num(r, 5), r < 1e-8))
    out.extend(_jackson_records(kf, ctx, params, digits, with_integral=complex(kf).real > 0))
    return out


def _jackson_records(k, ctx, params, digits, with_integral=False):
    from . import qanalysis as qa

    out = []
    J = qa.jackson_gauss(k, ctx, with_integral=with_integral)
    r = _rel(J.sum_form, J.product_form)
    out.append(_record("eq9", params, _num(J.sum_form, digits), _num(J.product_form, digits), _num(r, 5),
                       r < mpmath.mpf(10) ** (-(digits - 5))))
    if with_integral:
        r = _rel(J.integral_form.value, J.integral_target) if J.integral_target != 0 else abs(J.integral_form.value)
        out.append(_record("eq9-contour", params, _num(J.integral_form.value), _num(J.integral_target), _num(r, 5), r < 1e-6))
    return out


def _identities_q(q, k, digits, rtype, rank, seed):
    from . import qanalysis as qa
    from .coefficients import NumericDomain
    from .daha import JacksonContext, gamma_at, jackson_master, jackson_pairing, master_formula, mu_circ_at, theta_at
    from .qseries import QContext
    from .rootdata import MultiplicityFunction, build_root_system, rho_parts

    out = []
    params = {"q": str(q), "k": str(k)}
    kf = float(k) if isinstance(k, Fraction) else complex(k)
    ctx = QContext.generic(mpmath.mpf(q) if isinstance(q, Fraction) else q, digits=digits)
    out.extend(_jackson_records(kf, ctx, params, digits))
    R = build_root_system(rtype, rank)
    D = NumericDomain.from_q(R, float(q), MultiplicityFunction.uniform(R, kf), dps=max(digits, 20))
    P = dict(params, type=f"{rtype}{rank}")
    lhs, rhs = master_formula((0,) * rank, (0,) * rank, D)
    r = _rel(lhs, rhs)
    out.append(_record("eq23", dict(P, b="0", c="0"), _num(lhs, 15), _num(rhs, 15), _num(r, 5), r < 1e-8))
    if rank == 1:
        xi = tuple(-x for x in rho_parts(R).evaluate(MultiplicityFunction.uniform(R, kf)))
        jctx = JacksonContext(D, xi)
        lhs, rhs = jackson_master((0,), (0,), jctx)
        r = _rel(lhs, rhs)
        out.append(_record("eq24", dict(P, xi="-rho_k", b="0", c="0"), _num(lhs, 15), _num(rhs, 15), _num(r, 5), r < 1e-10))
        with mpmath.workdps(D.dps + 10):
            scale = mu_circ_at(xi, D) / len(R.weyl_group)
            g = qa.jackson_gauss(kf, ctx).sum_form
            r = _rel(lhs / scale, g)
        out.append(_record("eq24-vs-eq9", dict(P, xi="-rho_k"), _num(lhs / scale, 15), _num(g, 15), _num(r, 5), r < 1e-10))
        rng = random.Random(seed)
        for _ in range(3):
            xi = (mpmath.mpc(round(rng.uniform(-1, 1), 6), round(rng.uniform(-0.5, 0.5), 6)),)
            with mpmath.workdps(D.dps + 10):
                lhs = jackson_pairing(lambda z: gamma_at(z, D), JacksonContext(D, xi))
                rhs = theta_at(xi, D) * gamma_at(xi, D)
                r = _rel(lhs, rhs)
            out.append(_record("eq24-gamma", dict(P, xi=_num(xi[0], 7), seed=seed), _num(lhs, 15), _num(rhs, 15),
                               _num(r, 5), r < 1e-20))
    return out


def _identities_root(N, m, k, digits):
    from . import qanalysis as qa
    from . import rootsofunity as ru

    if isinstance(k, complex) or Fraction(k).denominator != 1:
        raise UsageError("--k must be an integer with --rootN")
    k = int(k)
    if m != 1:
        raise UsageError("only --m 1 (q = exp(2 pi i/N)) is implemented")
    if not 1 <= k <= N // 2:
        raise UsageError(f"--k must satisfy 1 <= k <= N/2 = {N / 2}, got {k}")
    out = []
    params = {"N": N, "k": k}
    gs = ru.gauss_selberg(N, k)
    out.append(_record("eq11", params, "[" + ",".join(gs.lhs.as_strings()) + "]", "[" + ",".join(gs.rhs.as_strings()) + "]",
                       "0" if gs.equal else _num(gs.residual(), 5), gs.equal))
    with mpmath.workdps(digits + 10):
        s = qa.classical_gauss_sum(N, digits)
        target = mpmath.mpc(1, 1) * mpmath.sqrt(N)
        r = abs(s - target)
    out.append(_record("eq3", {"N": N}, _num(s, digits), _num(target, digits), _num(r, 5), r < mpmath.mpf(10) ** (-(digits - 5))))
    if 2 * k < N:
        for b, c in [(0, 0), (1, 0), (1, -1)]:
            lhs, rhs = ru.discrete_master(b, c, N, k)
            out.append(_record("eq24-N", dict(params, b=b, c=c), "[" + ",".join(lhs.as_strings()) + "]",
                               "[" + ",".join(rhs.as_strings()) + "]", "0" if lhs == rhs else "nonzero", lhs == rhs))
    return out


def cmd_identities(args) -> tuple:
    k = _parse_k(args.k)
    modes = [x is not None for x in (args.a, args.q, args.rootN)]
    if sum(modes) != 1:
        raise UsageError("give exactly one of --a, --q, --rootN")
    if args.rootN is not None:
        recs = _identities_root(args.rootN, args.m, k, args.digits)
    elif args.a is not None:
        if not args.a > 0:
            raise UsageError("--a must be positive")
        recs = _identities_a(args.a, k, args.digits)
    else:
        if not 0 < args.q < 1:
            raise UsageError("--q must lie in (0, 1)")
        recs = _identities_q(args.q, k, args.digits, args.type, args.rank, args.seed)
    text = json.dumps({"records": recs}, indent=2, sort_keys=True)
    return text, all(r["pass"] for r in recs)


# ---------------------------------------------------------------------------
# tables


def cmd_macdonald(args) -> tuple:
    from .coefficients import ExactDomain, NumericDomain
    from .daha import macdonald_table
    from .rootdata import MultiplicityFunction, build_root_system

    R = build_root_system(args.type, args.rank)
    rng = range(-args.range, args.range + 1)
    weights = [b for b in itertools.product(rng, repeat=R.rank)]
    if args.q is not None:
        if args.k is None:
            raise UsageError("numeric mode needs --k")
        k = _parse_k(args.k)
        D = NumericDomain.from_q(R, args.q, MultiplicityFunction.uniform(R, k if isinstance(k, complex) else k),
                                 dps=max(args.digits, 30))
    else:
        k = None if args.k is None else _parse_k(args.k)
        if isinstance(k, complex):
            raise UsageError("exact mode needs a rational --k")
        D = ExactDomain(R, None if k is None else MultiplicityFunction.uniform(R, k))
    table = macdonald_table(R, weights, D)
    dual = table["duality"]
    ok = all(all(row) for row in dual)
    if args.q is not None:
        ok = ok and all(float(r["eigen_residual"]) < 1e-20 for r in table["records"])
    elif args.order is not None:
        table["orthogonality"] = _orthogonality(weights, D, args.order)
        ok = ok and all(all(row) for row in table["orthogonality"])
    return json.dumps(table, indent=2, sort_keys=True), ok


def _orthogonality(weights, D, order):
    """[b][c]: <mu e_b e_c*> has no terms below the order to which it is exact (True on the diagonal)."""
    from .daha import constant_term_pairing, macdonald_e

    es = [macdonald_e(b, D).e for b in weights]
    out = []
    for i, f in enumerate(es):
        row = []
        for j, g in enumerate(es):
            if i == j:
                row.append(True)
                continue
            s = constant_term_pairing(f, g, order, D)
            row.append(not s.exponents())
        out.append(row)
    return out


def cmd_verlinde(args) -> tuple:
    from . import rootsofunity as ru

    if args.rootN is None or args.k is None:
        raise UsageError("verlinde needs --rootN and --k")
    k = _parse_k(args.k)
    if isinstance(k, complex) or k.denominator != 1 or not 1 <= k <= args.rootN / 2:
        raise UsageError(f"--k must be an integer with 1 <= k <= N/2 = {args.rootN / 2}")
    if 2 * k == args.rootN:
        raise UsageError("2k = N gives an empty module")
    V = ru.verlinde_algebra(args.rootN, int(k))
    return V.to_json(), True


def cmd_gauss_selberg(args) -> tuple:
    from . import rootsofunity as ru

    Ns = [args.rootN] if args.rootN is not None else range(2, args.max_N + 1)
    cases = [(N, k) for N in Ns for k in range(1, N // 2 + 1)]
    if not cases:
        raise UsageError("no admissible (N, k)")
    text = ru.gauss_selberg_csv(cases)
    ok = all(row.split(",")[2] == "true" for row in text.strip().splitlines()[1:])
    return text, ok


def _fixed(x: float, places: int) -> str:
    text = f"{x:.{places}f}"
    return text[1:] if text.startswith("-") and float(text) == 0 else text


def cmd_zeros(args) -> tuple:
    from . import qanalysis as qa
    from .qseries import QContext

    try:
        re_lo, re_hi = (float(x) for x in args.re.split(","))
        im_lo, im_hi = (float(x) for x in args.im.split(","))
    except ValueError:
        raise UsageError("--re and --im take two comma-separated numbers") from None
    if re_lo <= -0.5 or re_lo >= re_hi or im_lo >= im_hi:
        raise UsageError("the region must be a nonempty rectangle inside Re k > -1/2")
    region = (re_lo, re_hi, im_lo, im_hi)
    if args.mode == "classical":
        f, a, tol = qa.zero_function("classical_Z", digits=args.digits), None, 1e-12
    else:
        if args.a is None:
            raise UsageError(f"{args.mode} mode needs --a")
        name = "q_zeta" if args.mode == "q" else "jackson_zeta"
        f, a, tol = qa.zero_function(name, QContext.exp_inv_a(args.a, digits=args.digits)), args.a, 1e-9
    partners = qa.classical_zeros(im_lo - 2, im_hi + 2)
    zeros = qa.find_zeros(f, region, a=a, tol=tol, spacing=args.spacing, residual_tol=1e-6, partners=partners)
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["k_re", "k_im", "a", "residual", "partner_re", "partner_im", "distance"])
    for z in zeros:
        p = z.classical_partner
        w.writerow([_fixed(z.location.real, 10), _fixed(z.location.imag, 10), "" if a is None else a, f"{z.residual:.3e}",
                    "" if p is None else _fixed(p.real, 10), "" if p is None else _fixed(p.imag, 10),
                    "" if z.distance is None else f"{z.distance:.6f}"])
    expected = [p for p in partners if re_lo <= p.real <= re_hi and im_lo <= p.imag <= im_hi]
    return buf.getvalue(), bool(zeros) or not expected


NATIVE_FORMAT = {"identities": "json", "macdonald": "json", "verlinde": "json", "zeros": "csv", "gauss-selberg": "csv"}

COMMANDS = {
    "identities": cmd_identities,
    "macdonald": cmd_macdonald,
    "verlinde": cmd_verlinde,
    "zeros": cmd_zeros,
    "gauss-selberg": cmd_gauss_selberg,
}


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="qdaha", description="DAHA, q-Gaussian and root-of-unity computations")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp):
        sp.add_argument("--digits", type=int, default=30)
        sp.add_argument("--out", help="write the report here instead of stdout")
        sp.add_argument("--format", choices=["json", "csv"], default=None)

    sp = sub.add_parser("identities", help="check the Gaussian, Jackson and root-of-unity identities")
    common(sp)
    sp.add_argument("--a", type=float)
    sp.add_argument("--q", type=float)
    sp.add_argument("--rootN", type=int)
    sp.add_argument("--m", type=int, default=1, help="q = exp(2 pi i m/N); only m = 1 is implemented")
    sp.add_argument("--k", required=True)
    sp.add_argument("--type", default="A")
    sp.add_argument("--rank", type=int, default=1)
    sp.add_argument("--seed", type=int, default=0, help="seed for the random Jackson points")

    sp = sub.add_parser("macdonald", help="table of nonsymmetric Macdonald polynomials")
    common(sp)
    sp.add_argument("--type", default="A")
    sp.add_argument("--rank", type=int, default=1)
    sp.add_argument("--range", type=int, default=2, help="weights with coordinates in [-range, range]")
    sp.add_argument("--q", type=float)
    sp.add_argument("--k")
    sp.add_argument("--order", type=int, help="exact mode: also check orthogonality to this q-order")

    sp = sub.add_parser("verlinde", help="structure constants of the Verlinde algebra")
    common(sp)
    sp.add_argument("--rootN", type=int)
    sp.add_argument("--k")

    sp = sub.add_parser("zeros", help="zeros of Z, its q-deformation or the Jackson variant")
    common(sp)
    sp.add_argument("--mode", choices=["classical", "q", "jackson"], default="classical")
    sp.add_argument("--a", type=float)
    sp.add_argument("--re", default="-0.4,0.4")
    sp.add_argument("--im", default="0,20")
    sp.add_argument("--spacing", type=float, default=0.25)

    sp = sub.add_parser("gauss-selberg", help="exact check of the Gauss-Selberg sums")
    common(sp)
    sp.add_argument("--rootN", type=int)
    sp.add_argument("--max-N", dest="max_N", type=int, default=12)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    if args.digits < 15:
        print("error: --digits must be at least 15", file=sys.stderr)
        return EXIT_USAGE
    if args.format and args.format != NATIVE_FORMAT[args.command]:
        print(f"error: {args.command} writes {NATIVE_FORMAT[args.command]} only", file=sys.stderr)
        return EXIT_USAGE
    try:
        text, ok = COMMANDS[args.command](args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except QDahaError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_USAGE if isinstance(exc, ValueError) else EXIT_FAIL
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text if text.endswith("\n") else text + "\n")
    else:
        sys.stdout.write(text if text.endswith("\n") else text + "\n")
    return EXIT_OK if ok else EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())
