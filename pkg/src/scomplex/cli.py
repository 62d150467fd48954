"""Command-line surface: generate | laplacian | spectrum | curvature |
decompose | criteria | check | verify.

Exit codes: 0 success, 1 verification failure, 2 usage / malformed input.
All randomized commands take --seed and are reproducible; SC_ZERO_EPS
overrides the relative kernel threshold.
"""

from __future__ import annotations

import argparse
import json
import os
import random
import sys

import numpy as np

from . import criteria as crit
from . import generators as gen
from . import io as sio
from . import spectral
from .core import EMPTY, GradedFunction, build_complex, inner, norm
from .io import Document, DocumentError, canonical_json
from .laplacian import (LaplacianSpec, Truncation, assemble, dn_form_gap,
                        gauss_bonnet_square_check, symmetrize_to_euclidean,
                        truncate_by_distance, up_laplacian, down_laplacian,
                        hodge_laplacian)
from .operators import (OrientationAssignment, apply_boundary, apply_coboundary,
                        random_graded_function, verify_dd_zero, verify_stokes)
from .bridge import (AlternatingForm, OrientedSimplex, bridge_residual,
                     from_function, oriented_sign, to_function)
from .schrodinger import (direct_energy, operator_matrix, quadratic_form_via_boc,
                          schrodinger_data)

FLAVOR_ALIASES = {"gb": "gauss_bonnet"}


def _zero_eps() -> float | None:
    raw = os.environ.get("SC_ZERO_EPS")
    return float(raw) if raw else None


def _emit(text: str, out: str | None) -> None:
    if out:
        with open(out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _read_document(args) -> Document:
    path = getattr(args, "complex", None)
    if path and path != "-":
        with open(path) as fh:
            raw = fh.read()
    elif path == "-" or not sys.stdin.isatty():
        raw = sys.stdin.read()
    else:
        raise DocumentError("no complex document: pass --complex FILE or pipe one in")
    try:
        doc = json.loads(raw)
    except json.JSONDecodeError as exc:
        raise DocumentError(f"not valid JSON: {exc}")
    return sio.load_document(doc)


def _doc_setup(args):
    doc = _read_document(args)
    orient = OrientationAssignment()
    return doc.complex, doc.weights, orient


def _add_input_opts(p, with_fan=True):
    p.add_argument("--complex", help="complex document file ('-' for stdin)")
    if with_fan:
        p.add_argument("--fan", type=int, metavar="N",
                       help="use the built-in triangle-fan truncation instead of a document")
    p.add_argument("--out", help="write output here instead of stdout")
    p.add_argument("--seed", type=int, default=0)


def _target_for_spec(args, spec: LaplacianSpec):
    """Resolve (target, weights, orientation) for laplacian/spectrum commands."""
    needs_trunc = spec.bc in ("dirichlet", "neumann") or spec.flavor in ("sigma", "sigma_prime")
    if getattr(args, "fan", None):
        if needs_trunc:
            return gen.fan_truncation(args.fan), None, None
        fam = gen.fan(args.fan)
        return fam.complex, fam.weights, fam.orientation
    complex_, weights, orient = _doc_setup(args)
    if needs_trunc:
        if args.root is None or args.radius is None:
            raise DocumentError("dirichlet/neumann/sigma assemblies need --root and "
                                "--radius (or --fan N)")
        return truncate_by_distance(complex_, weights, orient, args.root, args.radius), None, None
    return complex_, weights, orient


def cmd_generate(args) -> int:
    kind = args.kind
    if kind == "fan":
        fam = gen.fan(args.n)
        doc = Document(fam.complex, fam.weights, "exclude", 1.0)
    elif kind == "clique":
        if args.edges:
            edges = json.loads(args.edges)
        elif args.edges_file:
            with open(args.edges_file) as fh:
                edges = [tuple(int(x) for x in line.split()) for line in fh
                         if line.strip()]
        else:
            raise DocumentError("clique needs --edges or --edges-file")
        c = gen.clique_complex([tuple(e) for e in edges], args.max_dim,
                               include_empty=args.include_empty)
        doc = _combinatorial_doc(c, args.include_empty)
    elif kind == "random":
        c = gen.random_complex(args.n, args.p, args.max_dim, args.seed,
                               include_empty=args.include_empty)
        doc = _combinatorial_doc(c, args.include_empty)
    elif kind == "simplex":
        c = gen.full_simplex(args.n, include_empty=args.include_empty)
        doc = _combinatorial_doc(c, args.include_empty)
    elif kind == "cycle":
        c = gen.cycle_complex(args.n, include_empty=args.include_empty)
        doc = _combinatorial_doc(c, args.include_empty)
    else:
        raise DocumentError(f"unknown generator {kind!r}")
    _emit(canonical_json(sio.save_document(doc)) + "\n", args.out)
    return 0


def _combinatorial_doc(c, include_empty: bool) -> Document:
    policy = "include" if include_empty else "exclude"
    maximal = [list(s.vertices) for s in c.maximal_simplices()]
    complex_, weights = build_complex(maximal, "combinatorial", empty_policy=policy)
    return Document(complex_, weights, policy, 1.0)


def cmd_laplacian(args) -> int:
    flavor = FLAVOR_ALIASES.get(args.flavor, args.flavor)
    spec = LaplacianSpec(flavor, args.bc, args.dim)
    target, weights, orient = _target_for_spec(args, spec)
    op = assemble(target, spec, weights, orient)
    _emit(sio.operator_to_triplets(op), args.out)
    return 0


def cmd_spectrum(args) -> int:
    flavor = FLAVOR_ALIASES.get(args.flavor, args.flavor)
    spec = LaplacianSpec(flavor, args.bc, args.dim)
    target, weights, orient = _target_for_spec(args, spec)
    s = spectral.level_spectrum(target, spec, weights, orient, zero_eps=_zero_eps())
    payload = {"flavor": flavor, "k": args.dim, "bc": args.bc,
               "eigenvalues": [float(v) for v in s.eigenvalues],
               "zero_dim": s.zero_dim()}
    _emit(canonical_json(payload) + "\n", args.out)
    if args.plot:
        from .plotting import save_spectrum_plot
        save_spectrum_plot({f"{flavor}[k={args.dim}]": s.eigenvalues}, args.plot)
    return 0


def cmd_curvature(args) -> int:
    if getattr(args, "fan", None):
        fam = gen.fan(args.fan)
        complex_, weights, orient = fam.complex, fam.weights, fam.orientation
    else:
        complex_, weights, orient = _doc_setup(args)
    rows = sio.curvature_rows(complex_, weights, orient)
    _emit(sio.curvature_csv(rows), args.out)
    if args.plot:
        from .plotting import save_curvature_plot
        save_curvature_plot(rows, args.plot)
    return 0


def cmd_decompose(args) -> int:
    complex_, weights, orient = _doc_setup(args)
    k = args.dim
    if args.omega:
        with open(args.omega) as fh:
            raw = json.load(fh)
        omega = GradedFunction({sio.parse_simplex_key(key): float(v)
                                for key, v in raw.items()})
    else:
        rng = random.Random(args.seed)
        omega = GradedFunction({s: rng.uniform(-1, 1) for s in complex_.level(k)})
    split = spectral.hodge_decompose(complex_, weights, orient, omega, k,
                                     zero_eps=_zero_eps())
    payload = {
        "k": k,
        "norm": norm(weights, omega),
        "harmonic_norm": norm(weights, split.harmonic),
        "exact_norm": norm(weights, split.exact),
        "coexact_norm": norm(weights, split.coexact),
        "residual": split.residual,
        "max_cross_inner": split.max_cross_inner,
    }
    _emit(canonical_json(payload) + "\n", args.out)
    return 0


def cmd_criteria(args) -> int:
    if getattr(args, "fan", None):
        fam = gen.fan(args.fan)
        complex_, weights, orient = fam.complex, fam.weights, fam.orientation
    else:
        complex_, weights, orient = _doc_setup(args)
    payload: dict = {}
    if args.boundedness:
        rep = crit.boundedness_report(complex_, weights, orient)
        payload["boundedness"] = {
            "sup_gamma_over_m": rep.sup_gamma_over_m,
            "sup_dim_weighted": rep.sup_dim_weighted,
            "derived_norm_bound": rep.derived_norm_bound,
            "lambda_max_up": rep.lambda_max_up,
            "verdict": rep.verdict,
        }
    if args.curvature:
        rep = crit.curvature_criterion(complex_, weights, orient)
        payload["curvature"] = {"inf_forman": rep.inf_forman,
                                "inf_weight": rep.inf_weight,
                                "verdict": rep.verdict}
    metric_tables = {}
    if args.metric:
        for flavor in args.metric:
            mw = crit.metric_weights(complex_, weights, orient, flavor)
            check = crit.intrinsic_check(complex_, weights, orient, flavor)
            metric_tables[flavor] = mw.edge_weights
            payload.setdefault("metric", {})[flavor] = {
                "edge_weights": {f"{a},{b}": w for (a, b), w in
                                 sorted(mw.edge_weights.items())},
                "max_row_ratio": check.max_row_ratio,
            }
    if args.ball_root is not None:
        flavor = args.metric[0] if args.metric else "up"
        mw = crit.metric_weights(complex_, weights, orient, flavor)
        probe = crit.ball_probe(crit.skeleton_neighbors(mw), args.ball_root,
                                args.ball_radius, args.budget)
        payload["ball"] = {"root": args.ball_root, "radius": args.ball_radius,
                           "count": probe.count, "expansions": probe.expansions,
                           "budget_exceeded": probe.budget_exceeded}
    if not payload:
        raise DocumentError("criteria: nothing requested "
                            "(--boundedness / --curvature / --metric / --ball-root)")
    _emit(canonical_json(payload) + "\n", args.out)
    if args.plot and metric_tables:
        from .plotting import save_metric_plot
        save_metric_plot(metric_tables, args.plot)
    return 0


def _check_suites(complex_, weights, orient, seed: int) -> list[tuple[str, bool, str]]:
    results = []
    rng = random.Random(seed)

    dd = verify_dd_zero(complex_, weights, orient)
    results.append(("dd_zero", dd["dd_residual"] == 0.0, f"residual {dd['dd_residual']:.2e}"))
    results.append(("boundary_squared_zero", dd["pp_residual"] <= 1e-12,
                    f"residual {dd['pp_residual']:.2e}"))

    st = verify_stokes(complex_, weights, orient, trials=10, seed=seed)
    ok = all(v <= 1e-12 for v in st.values())
    results.append(("stokes_green", ok, ", ".join(f"{k}={v:.2e}" for k, v in st.items())))

    worst = 0.0
    for flavor, fn in (("up", up_laplacian), ("down", down_laplacian),
                       ("hodge", hodge_laplacian)):
        data = schrodinger_data(complex_, weights, orient, flavor)
        for k in sorted(complex_.levels):
            keys = complex_.level(k)
            if not keys:
                continue
            composed = fn(complex_, weights, orient, k).to_dense()
            boc = operator_matrix(data, weights, keys)
            worst = max(worst, float(np.abs(composed - boc).max()))
    results.append(("signed_operator_match", worst <= 1e-12, f"max dev {worst:.2e}"))

    worst_energy = 0.0
    for flavor in ("up", "down", "hodge"):
        data = schrodinger_data(complex_, weights, orient, flavor)
        for _ in range(5):
            omega = random_graded_function(complex_, rng)
            a = quadratic_form_via_boc(data, weights, omega)
            b = direct_energy(complex_, weights, orient, omega, flavor)
            scale = max(abs(a), abs(b), 1.0)
            worst_energy = max(worst_energy, abs(a - b) / scale)
    results.append(("energy_form_match", worst_energy <= 1e-10,
                    f"max rel dev {worst_energy:.2e}"))

    gb = gauss_bonnet_square_check(complex_, weights, orient)
    ok = max(gb.values()) <= 1e-12
    results.append(("first_order_square", ok,
                    ", ".join(f"{k}={v:.2e}" for k, v in gb.items())))

    worst_fact = 0.0
    worst_psd = 0.0
    lambdas = [-1.0, 0.5, 2.0] + [rng.uniform(0.0, 10.0) or 1.0 for _ in range(3)]
    for k in sorted(complex_.levels):
        keys = complex_.level(k)
        if not keys:
            continue
        up = up_laplacian(complex_, weights, orient, k).to_dense()
        down = down_laplacian(complex_, weights, orient, k).to_dense()
        worst_fact = max(worst_fact, float(np.abs(up @ down).max()),
                         float(np.abs(down @ up).max()))
        eye = np.eye(len(keys))
        for lam in lambdas:
            if lam == 0.0:
                continue
            lhs = up + down - lam * eye
            rhs = -(up - lam * eye) @ (down - lam * eye) / lam
            worst_fact = max(worst_fact, float(np.abs(lhs - rhs).max()))
        for mat in (up, down):
            sym_vals = np.linalg.eigvalsh(symmetrize_to_euclidean(
                _as_level_op(mat, keys, k), weights))
            if sym_vals.size:
                worst_psd = max(worst_psd, max(0.0, -float(sym_vals[0])))
    results.append(("factorization", worst_fact <= 1e-10, f"max dev {worst_fact:.2e}"))
    results.append(("positive_semidefinite", worst_psd <= 1e-10,
                    f"worst negative {worst_psd:.2e}"))

    worst_bridge = 0.0
    for _ in range(5):
        values = {s: rng.uniform(-1, 1) for s in complex_.simplices() if s.dim >= 0}
        form = AlternatingForm(values)
        for s in complex_.simplices():
            if s.dim >= 1:
                seq = list(s.vertices)
                rng.shuffle(seq)
                worst_bridge = max(worst_bridge,
                                   bridge_residual(complex_, orient, form, tuple(seq)))
    results.append(("orientation_bridge", worst_bridge <= 1e-12,
                    f"max dev {worst_bridge:.2e}"))
    return results


def _as_level_op(dense, keys, k):
    from .operators import _operator_from_dense
    return _operator_from_dense(dense, keys, keys, k, k)


def cmd_check(args) -> int:
    if getattr(args, "fan", None):
        fam = gen.fan(args.fan)
        complex_, weights, orient = fam.complex, fam.weights, fam.orientation
    else:
        complex_, weights, orient = _doc_setup(args)
    results = _check_suites(complex_, weights, orient, args.seed)
    lines = []
    failed = 0
    for name, ok, detail in results:
        lines.append(f"{'PASS' if ok else 'FAIL'} {name}: {detail}")
        failed += 0 if ok else 1
    lines.append(f"{len(results) - failed}/{len(results)} suites passed")
    _emit("\n".join(lines) + "\n", args.out)
    return 0 if failed == 0 else 1


def cmd_verify(args) -> int:
    lines = []
    ok_all = True
    zero_eps = _zero_eps()
    if args.counterexample:
        from .core import simplex
        fam = gen.fan(args.fan or 5)
        dd0 = apply_boundary(fam.complex, fam.weights, fam.orientation, fam.d_omega0)
        v0 = dd0(simplex(0))
        pairing = inner(fam.weights,
                        apply_coboundary(fam.complex, fam.orientation, fam.omega0),
                        fam.d_omega0)
        ok1 = abs(v0 - 1.0) <= 1e-12
        ok2 = abs(pairing - 1.0) <= 1e-12
        ok_all &= ok1 and ok2
        lines.append(f"{'PASS' if ok1 else 'FAIL'} boundary-squared value at hub: {v0!r}")
        lines.append(f"{'PASS' if ok2 else 'FAIL'} raised/lowered pairing: {pairing!r}")
    if args.spectral:
        if args.fan:
            trunc = gen.fan_truncation(args.fan)
            reports = spectral.verify_truncation_pairings(trunc, zero_eps=zero_eps)
            for rep in reports:
                for name in ("dirichlet_up_vs_neumann_down", "neumann_up_vs_dirichlet_down"):
                    m = rep[name]
                    ok_all &= m.matched
                    lines.append(f"{'PASS' if m.matched else 'FAIL'} k={rep['k']} {name}: "
                                 f"max gap {m.max_pair_gap:.2e}")
                lines.append(f"note: {rep['note']}")
        else:
            complex_, weights, orient = _doc_setup(args)
            for rep in spectral.verify_spectrum_identities(complex_, weights, orient,
                                                           zero_eps=zero_eps):
                ok_all &= rep.passed
                lines.append(
                    f"{'PASS' if rep.passed else 'FAIL'} k={rep.k} "
                    f"up-vs-down-above gap {rep.up_vs_down_above.max_pair_gap:.2e}, "
                    f"hodge-vs-union gap {rep.hodge_vs_union.max_pair_gap:.2e}, "
                    f"zero propagates: {rep.zero_propagates}")
    if args.normalizing:
        complex_, _, orient = _doc_setup(args)
        from .core import normalizing_weights
        w_norm = normalizing_weights(complex_)
        for rep in spectral.normalizing_bound_check(complex_, w_norm, orient):
            ok = rep.bound_ok and rep.action_dev <= 1e-10
            ok_all &= ok
            extra = f", {rep.note}" if rep.note else ""
            lines.append(f"{'PASS' if ok else 'FAIL'} {rep.flavor}[k={rep.k}] in "
                         f"[{rep.min_eig:.2e}, {rep.max_eig:.6f}] <= {rep.bound}{extra}")
    if args.dn_gap:
        trunc = gen.fan_truncation(args.fan or 3)
        for flavor in ("up", "hodge", "down"):
            k = 1
            gap = dn_form_gap(trunc, flavor, k)
            ok = gap >= -1e-10
            ok_all &= ok
            lines.append(f"{'PASS' if ok else 'FAIL'} dirichlet-minus-neumann min eig "
                         f"({flavor}, k={k}): {gap:.3e}")
    if not lines:
        raise DocumentError("verify: nothing requested "
                            "(--spectral / --counterexample / --normalizing / --dn-gap)")
    lines.append("VERIFY " + ("PASS" if ok_all else "FAIL"))
    _emit("\n".join(lines) + "\n", args.out)
    return 0 if ok_all else 1


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="sc",
                                description="spectral toolkit for weighted simplicial complexes")
    sub = p.add_subparsers(dest="command", required=True)

    g = sub.add_parser("generate", help="emit a complex document")
    g.add_argument("kind", choices=["fan", "clique", "random", "simplex", "cycle"])
    g.add_argument("--n", type=int, default=3)
    g.add_argument("--p", type=float, default=0.5)
    g.add_argument("--max-dim", type=int, default=2)
    g.add_argument("--edges", help="JSON list of vertex pairs")
    g.add_argument("--edges-file", help="whitespace-separated vertex pairs, one per line")
    g.add_argument("--include-empty", action="store_true")
    g.add_argument("--seed", type=int, default=0)
    g.add_argument("--out")
    g.set_defaults(fn=cmd_generate)

    l = sub.add_parser("laplacian", help="assemble an operator as triplet text")
    _add_input_opts(l)
    l.add_argument("--flavor", required=True,
                   choices=["up", "down", "hodge", "gb", "sigma", "sigma_prime"])
    l.add_argument("--dim", type=int)
    l.add_argument("--bc", default="intrinsic",
                   choices=["intrinsic", "dirichlet", "neumann"])
    l.add_argument("--root", type=int)
    l.add_argument("--radius", type=int)
    l.set_defaults(fn=cmd_laplacian)

    s = sub.add_parser("spectrum", help="eigenvalues of an assembled operator")
    _add_input_opts(s)
    s.add_argument("--flavor", required=True,
                   choices=["up", "down", "hodge", "gb", "sigma", "sigma_prime"])
    s.add_argument("--dim", type=int)
    s.add_argument("--bc", default="intrinsic",
                   choices=["intrinsic", "dirichlet", "neumann"])
    s.add_argument("--root", type=int)
    s.add_argument("--radius", type=int)
    s.add_argument("--plot", help="write an eigenvalue figure here")
    s.set_defaults(fn=cmd_spectrum)

    c = sub.add_parser("curvature", help="per-simplex coefficient table as CSV")
    _add_input_opts(c)
    c.add_argument("--plot", help="write a curvature figure here")
    c.set_defaults(fn=cmd_curvature)

    d = sub.add_parser("decompose", help="orthogonal split of a level function")
    _add_input_opts(d, with_fan=False)
    d.add_argument("--dim", type=int, required=True)
    d.add_argument("--omega", help="JSON file of simplex-key to value")
    d.set_defaults(fn=cmd_decompose)

    r = sub.add_parser("criteria", help="boundedness/curvature/metric diagnostics as JSON")
    _add_input_opts(r)
    r.add_argument("--boundedness", action="store_true")
    r.add_argument("--curvature", action="store_true")
    r.add_argument("--metric", action="append", choices=["up", "down", "hodge"])
    r.add_argument("--ball-root", type=int)
    r.add_argument("--ball-radius", type=float, default=2.0)
    r.add_argument("--budget", type=int, default=10 ** 6)
    r.add_argument("--plot")
    r.set_defaults(fn=cmd_criteria)

    k = sub.add_parser("check", help="run the exact-identity invariant suites")
    _add_input_opts(k)
    k.add_argument("--all", action="store_true", help="run every suite (default)")
    k.set_defaults(fn=cmd_check)

    v = sub.add_parser("verify", help="spectral identities and named values")
    _add_input_opts(v)
    v.add_argument("--spectral", action="store_true")
    v.add_argument("--counterexample", action="store_true")
    v.add_argument("--normalizing", action="store_true")
    v.add_argument("--dn-gap", action="store_true")
    v.add_argument("--bc", default="neumann", choices=["dirichlet", "neumann"])
    v.set_defaults(fn=cmd_verify)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.fn(args)
    except DocumentError as exc:
        key = f" (key: {exc.key!r})" if getattr(exc, "key", "") else ""
        print(f"sc: error: {exc}{key}", file=sys.stderr)
        return 2
    except (ValueError, KeyError, OSError) as exc:
        print(f"sc: error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
