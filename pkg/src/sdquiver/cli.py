"""Command-line front end.

Exit codes: 0 success, 1 contract or precondition error, 2 parse error,
3 internal invariant violation.
"""

from __future__ import annotations

import argparse
import sys
from fractions import Fraction

from sdquiver import docfmt, drezet, dualitylab, quiver, sheafbridge
from sdquiver.errors import ContractError, InvariantViolation, ParseError
from sdquiver.exactla import det, format_rational, rank, to_rational

EXIT_OK, EXIT_CONTRACT, EXIT_PARSE, EXIT_INVARIANT = 0, 1, 2, 3


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise ParseError(message)


def _rational(text: str) -> Fraction:
    return to_rational(text)


def _int(text: str) -> int:
    try:
        return int(text)
    except ValueError:
        raise ParseError(f"not an integer: {text!r}") from None


def _weight(text: str) -> quiver.Weight:
    parts = text.split(",")
    if len(parts) != 2:
        raise ParseError("weight must be given as w1,w2")
    return quiver.Weight(_int(parts[0]), _int(parts[1]))


def _load_rep(path: str) -> quiver.Rep:
    return docfmt.rep_from_document(docfmt.load(path))


def _fmt(v) -> str:
    return format_rational(v)


class Output:
    """Collects the text lines and the document a command produces."""

    def __init__(self, text: str, doc: dict):
        self.text = text
        self.doc = doc


# commands


def cmd_pair(args) -> Output:
    v, w = _load_rep(args.first), _load_rep(args.second)
    val = quiver.c_pair(v, w)
    lines = [_fmt(val)]
    payload = {"c_pair": _fmt(val)}
    if v.q == 3 and v.dim.a2 == 2 * v.dim.a1 and w.dim.a1 == w.dim.a2 and v.dim.a1 and w.dim.a1:
        try:
            big, compact = quiver.c_pair_kron(v, w)
        except quiver.NotReflectableError:
            pass
        else:
            lines.append(f"big={_fmt(big)} compact={_fmt(compact)}")
            payload.update(big=_fmt(big), compact=_fmt(compact))
            if sheafbridge.in_chart(w):
                h0, h1 = sheafbridge.h0_tensor(v, w)
                lines.append(f"h0={h0} h1={h1}")
                payload.update(h0=h0, h1=h1)
    return Output("\n".join(lines), docfmt.make("report", {"command": "pair", "result": payload}))


def _rep_output(rep: quiver.Rep, kind: str = "rep") -> Output:
    doc = docfmt.rep_document(rep, kind)
    return Output(docfmt.dumps(doc).rstrip("\n"), doc)


def cmd_reflect(args) -> Output:
    return _rep_output(quiver.reflect(_load_rep(args.rep)))


def cmd_unreflect(args) -> Output:
    return _rep_output(quiver.reflect_inverse(_load_rep(args.rep)))


def _witness_json(w) -> dict | None:
    if isinstance(w, quiver.ProbeWitness):
        return {"type": "probe", "side": w.side, "probe": w.probe.to_json(), "value": _fmt(w.value)}
    if isinstance(w, quiver.Destabilizer):
        return {"type": "subrep", "u1": w.u1.to_json(), "u2": w.u2.to_json(),
                "dim": [w.dim.a1, w.dim.a2], "weight": w.weight}
    return None


def cmd_stable(args) -> Output:
    v = _load_rep(args.rep)
    sigma = args.weight or quiver.canonical_weight(v.dim)
    verdict = quiver.semistable_certificate(v, sigma, trials=args.trials, probe_sizes=args.probes,
                                            seed=args.seed, bound=args.bound)
    wit = _witness_json(verdict.witness)
    lines = [verdict.status]
    if wit and wit["type"] == "probe":
        lines.append(f"witness probe dim {wit['probe']['dim']} ({wit['side']}) value {wit['value']}")
    elif wit:
        lines.append(f"witness subrep dim {wit['dim']} weight {wit['weight']}")
    doc = docfmt.make("report", {"command": "stable", "weight": [sigma.w1, sigma.w2], "status": verdict.status,
                                 "witness": wit, "seed": args.seed})
    return Output("\n".join(lines), doc)


def _poly_text(p: sheafbridge.HomogPoly) -> str:
    terms = []
    for (i, j, k), c in p.terms():
        mono = "*".join(f"{v}^{e}" if e > 1 else v for v, e in (("x", i), ("y", j), ("z", k)) if e)
        terms.append(f"({_fmt(c)})*{mono}" if mono else f"({_fmt(c)})")
    return " + ".join(terms) if terms else "0"


def cmd_curve(args) -> Output:
    p = sheafbridge.support_curve(_load_rep(args.rep))
    return Output(_poly_text(p), docfmt.make("poly", p.to_json()))


def cmd_ddual(args) -> Output:
    return _rep_output(sheafbridge.ddual(_load_rep(args.rep)).rep, "pencil")


def cmd_strata(args) -> Output:
    if args.census is not None:
        if args.seed is None:
            raise ContractError("--census needs an explicit --seed")
        rep = dualitylab.strata_census(args.census, args.samples, seed=args.seed, bound=args.bound)
        counts = ", ".join(f"i={k}: {v}" for k, v in sorted(rep.counts.items()))
        text = f"{counts}\nresidual failures {rep.residual_failures}"
        return Output(text, docfmt.make("report", {"command": "strata", "census": rep.to_json()}))
    if args.rep is None:
        raise ContractError("strata needs a bundle file or --census N")
    v = sheafbridge.BundleRep.of(_load_rep(args.rep))
    idx = sheafbridge.strata_index(v)
    hom = sheafbridge.hom_to_O(v)
    rk = rank(quiver.C_matrix(v.rep, sheafbridge.lambda3().rep))
    if hom + rk != 3 * v.n:
        raise InvariantViolation(f"hom_to_O {hom} + rank {rk} != {3 * v.n}")
    text = f"index {idx}\nhom_to_O {hom}\nrank {rk}"
    return Output(text, docfmt.make("report", {"command": "strata", "index": idx, "hom_to_O": hom, "rank": rk}))


def cmd_coh(args) -> Output:
    v = _load_rep(args.rep)
    if args.tensor:
        h0, h1 = sheafbridge.h0_tensor(v, _load_rep(args.tensor))
        return Output(f"h0={h0} h1={h1}", docfmt.make("report", {"command": "coh", "h0": h0, "h1": h1}))
    prof = sheafbridge.coh_twist(v, args.twist)
    text = f"h0={prof.h0} h1={prof.h1} h2={prof.h2}"
    return Output(text, docfmt.make("report", {"command": "coh", "twist": args.twist, "h0": prof.h0,
                                               "h1": prof.h1, "h2": prof.h2}))


def cmd_eps(args) -> Output:
    e = drezet.eps(args.x)
    text = f"slope {_fmt(e.slope)}\nrank {e.rank}\ndelta {_fmt(e.discriminant)}"
    return Output(text, docfmt.make("report", {"command": "eps", "dyadic": str(drezet.Dyadic.of(args.x)),
                                               "slope": _fmt(e.slope), "rank": e.rank,
                                               "discriminant": _fmt(e.discriminant)}))


def cmd_delta(args) -> Output:
    val = drezet.delta(args.mu, args.depth)
    a = drezet.assoc_exceptional(args.mu, args.depth)
    return Output(_fmt(val), docfmt.make("report", {"command": "delta", "mu": _fmt(args.mu), "delta": _fmt(val),
                                                    "assoc_slope": _fmt(a.slope), "assoc_rank": a.rank}))


def cmd_height(args) -> Output:
    h = drezet.height(args.r, args.c1, args.c2, args.depth)
    check = drezet.height_chi_crosscheck(args.r, args.c1, args.c2, args.depth)
    if check != h:
        raise InvariantViolation(f"height {h} disagrees with chi form {check}")
    return Output(_fmt(h), docfmt.make("report", {"command": "height", "r": args.r, "c1": args.c1, "c2": args.c2,
                                                  "height": _fmt(h)}))


def cmd_posdim(args) -> Output:
    val = drezet.positive_dim(args.r, args.c1, args.c2, args.depth)
    text = "true" if val else "false"
    return Output(text, docfmt.make("report", {"command": "posdim", "r": args.r, "c1": args.c1, "c2": args.c2,
                                               "positive_dim": val}))


def cmd_experiment(args) -> Output:
    doc = docfmt.load(args.config)
    if doc["kind"] != "config":
        raise ParseError(f"expected a config document, got {doc['kind']!r}")
    cfg = dualitylab.ExperimentConfig.from_json(doc)
    kind = doc.get("experiment", args.kind)
    if kind == "pairing":
        _m, rep = dualitylab.pairing_matrix(cfg, workers=args.workers)
        payload = rep.to_json()
        text = (f"rank {rep.matrix_rank}\nsaturation {rep.saturation}\nzero cells {rep.zero_cells}\n"
                f"oracle disagreements {rep.oracle_disagreements}")
    elif kind == "vanishing":
        rep = dualitylab.vanishing_oracle_experiment(cfg)
        payload = rep.to_json()
        text = (f"pairs {rep.pairs}\nvanishing {rep.zero_cells}\noracle disagreements {rep.oracle_disagreements}\n"
                f"h0 != h1 {rep.h_mismatches}")
    elif kind == "census":
        rep = dualitylab.strata_census(cfg.n, cfg.samples_V, seed=cfg.seed, bound=cfg.entry_bound)
        payload = rep.to_json()
        text = ", ".join(f"i={k}: {v}" for k, v in sorted(rep.counts.items()))
    elif kind == "span":
        sched = list(cfg.schedule) or [sheafbridge.h0_line(cfg.d) * 2]
        curve = dualitylab.coeff_span_curve(cfg.d, sched, seed=cfg.seed, bound=cfg.entry_bound)
        payload = {"config": cfg.to_json(), "saturation": curve}
        text = f"saturation {curve}"
    else:
        raise ContractError(f"unknown experiment kind {kind!r}")
    return Output(text, docfmt.make("report", {"command": "experiment", "experiment": kind, "report": payload}))


def cmd_selftest(args) -> Output:
    from sdquiver.acceptance import run_all

    results = run_all(args.only or None, emit=lambda line: print(line, flush=True))
    failed = [r.number for r in results if not r.passed]
    text = f"{len(results) - len(failed)}/{len(results)} criteria passed"
    out = Output(text, docfmt.make("report", {"command": "selftest", "failed": failed,
                                              "passed": [r.number for r in results if r.passed]}))
    if failed:
        print(text)
        raise _SelftestFailed()
    return out


class _SelftestFailed(Exception):
    pass


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--out", help="also write the result document to this file")
    common.add_argument("--json", action="store_true", help="print the result document instead of text")

    seeded = _Parser(add_help=False)
    seeded.add_argument("--seed", type=_int, required=True)
    seeded.add_argument("--bound", type=_int, default=3)

    depth = _Parser(add_help=False)
    depth.add_argument("--depth", type=_int, default=drezet.DEFAULT_DEPTH)

    p = _Parser(prog="sdquiver", description="Kronecker-quiver pairings, reflections and exceptional slopes.")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("pair", parents=[common], help="pairing of two representations")
    s.add_argument("first")
    s.add_argument("second")
    s.set_defaults(func=cmd_pair)

    s = sub.add_parser("reflect", parents=[common], help="cokernel reflection")
    s.add_argument("rep")
    s.set_defaults(func=cmd_reflect)

    s = sub.add_parser("unreflect", parents=[common], help="kernel reflection")
    s.add_argument("rep")
    s.set_defaults(func=cmd_unreflect)

    s = sub.add_parser("stable", parents=[common, seeded], help="stability certificate")
    s.add_argument("rep")
    s.add_argument("--weight", type=_weight, default=None, help="w1,w2 (default: canonical)")
    s.add_argument("--trials", type=_int, default=8)
    s.add_argument("--probes", type=_int, default=3, help="largest probe size")
    s.set_defaults(func=cmd_stable)

    s = sub.add_parser("curve", parents=[common], help="support curve of a pencil")
    s.add_argument("rep")
    s.set_defaults(func=cmd_curve)

    s = sub.add_parser("ddual", parents=[common], help="transpose a pencil")
    s.add_argument("rep")
    s.set_defaults(func=cmd_ddual)

    s = sub.add_parser("strata", parents=[common], help="strata index or census")
    s.add_argument("rep", nargs="?")
    s.add_argument("--census", type=_int, default=None, metavar="N")
    s.add_argument("--samples", type=_int, default=20)
    s.add_argument("--seed", type=_int, default=None)
    s.add_argument("--bound", type=_int, default=3)
    s.set_defaults(func=cmd_strata)

    s = sub.add_parser("coh", parents=[common], help="cohomology of twists or of a tensor product")
    s.add_argument("rep")
    g = s.add_mutually_exclusive_group(required=True)
    g.add_argument("--twist", type=_int)
    g.add_argument("--tensor", metavar="PENCIL")
    s.set_defaults(func=cmd_coh)

    s = sub.add_parser("eps", parents=[common], help="exceptional slope of a dyadic")
    s.add_argument("x", type=_rational)
    s.set_defaults(func=cmd_eps)

    s = sub.add_parser("delta", parents=[common, depth], help="the delta function")
    s.add_argument("mu", type=_rational)
    s.set_defaults(func=cmd_delta)

    for name, fn, hlp in (("height", cmd_height, "height of M(r, c1, c2)"),
                          ("posdim", cmd_posdim, "positive-dimension criterion")):
        s = sub.add_parser(name, parents=[common, depth], help=hlp)
        s.add_argument("r", type=_int)
        s.add_argument("c1", type=_int)
        s.add_argument("c2", type=_int)
        s.set_defaults(func=fn)

    s = sub.add_parser("experiment", parents=[common], help="run a configured experiment")
    s.add_argument("config")
    s.add_argument("--kind", choices=["pairing", "vanishing", "census", "span"], default="pairing")
    s.add_argument("--workers", type=_int, default=1)
    s.set_defaults(func=cmd_experiment)

    s = sub.add_parser("selftest", parents=[common], help="run the acceptance suite")
    s.add_argument("--only", type=_int, nargs="*", default=None)
    s.set_defaults(func=cmd_selftest)
    return p


def run(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        out = args.func(args)
        if args.out:
            docfmt.save(out.doc, args.out)
        print(docfmt.dumps(out.doc).rstrip("\n") if args.json else out.text)
        return EXIT_OK
    except _SelftestFailed:
        return EXIT_CONTRACT
    except ParseError as exc:
        print(f"parse error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except InvariantViolation as exc:
        print(f"invariant violation: {exc}", file=sys.stderr)
        return EXIT_INVARIANT
    except (ContractError, ZeroDivisionError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONTRACT


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
