"""Command-line front end.

Examples::

    graphprod --spec path.gp nf "a*c*a*c*a*c"
    graphprod --spec path.gp --json classify a c
    graphprod --spec path.gp pint "c:a" "1:a,b"
    graphprod selftest --suite nf_minimality --trials 200
"""

from __future__ import annotations

import argparse
import json
import sys
from collections.abc import Sequence

from graphprod.bassserre import Hyperbolic, SplittingError, alternating_form, classify_action, split_at
from graphprod.classify import (
    ContainsNonabelianFree,
    FiniteCyclic,
    FreeAbelian,
    InfiniteDihedral,
    Unknown,
    Verdict,
    classify,
    ClassifyOptions,
)
from graphprod.frontend import (
    ParseError,
    format_set,
    format_spec,
    format_word,
    parse_parabolic,
    parse_spec,
    parse_vertex_set,
    parse_word,
)
from graphprod.kernel import KernelError, census_text, compress, kernel_presentation, psi
from graphprod.parabolic import (
    ParabolicError,
    ParabolicSubgroup,
    canonicalize,
    closure,
    element_in_parabolic,
    intersect,
    normalizer,
    retraction,
)
from graphprod.words import (
    NormalForm,
    Presentation,
    WordError,
    first_vertices,
    invert,
    last_vertices,
    multiply,
    order,
    reduce,
    support,
)


class UsageError(Exception):
    pass


def _labels(p: Presentation, vertices) -> list[str]:
    return [p.labels[v] for v in sorted(vertices)]


def _parabolic_json(p: Presentation, P: ParabolicSubgroup) -> dict:
    return {"conjugator": format_word(p, P.conjugator), "base": _labels(p, P.base)}


def _parabolic_text(p: Presentation, P: ParabolicSubgroup) -> str:
    return f"{format_word(p, P.conjugator)}:{format_set(p, P.base)}"


def verdict_json(p: Presentation, v: Verdict) -> dict:
    out: dict = {"verdict": v.name}
    if isinstance(v, FiniteCyclic):
        out["order"] = v.order
    elif isinstance(v, FreeAbelian):
        out["rank"] = v.rank
        if v.bound_limited:
            out["bounds"] = {"bound_limited": True}
    elif isinstance(v, InfiniteDihedral):
        out["witness"] = [format_word(p, x) for x in v.involutions]
    elif isinstance(v, ContainsNonabelianFree):
        out["witness"] = [format_word(p, x) for x in v.witness]
        out["certified"] = v.free_certified
    elif isinstance(v, Unknown):
        out["reason"] = v.reason
        out["bounds"] = dict(v.bounds)
    return out


def verdict_text(p: Presentation, v: Verdict) -> str:
    if isinstance(v, FiniteCyclic):
        return f"FiniteCyclic order={v.order}"
    if isinstance(v, FreeAbelian):
        note = " (exponent bound still moving)" if v.bound_limited else ""
        return f"FreeAbelian rank={v.rank}{note}"
    if isinstance(v, InfiniteDihedral):
        a, b = (format_word(p, x) for x in v.involutions)
        return f"InfiniteDihedral involutions={a}, {b}"
    if isinstance(v, ContainsNonabelianFree):
        a, b = (format_word(p, x) for x in v.witness)
        return f"ContainsNonabelianFree witness={a}, {b} " + ("certified" if v.free_certified else "uncertified")
    if isinstance(v, Unknown):
        bounds = ", ".join(f"{k}={val}" for k, val in v.bounds.items())
        return f"Unknown: {v.reason}" + (f" [{bounds}]" if bounds else "")
    return v.name


class Session:
    def __init__(self, args: argparse.Namespace):
        self.args = args
        self._p: Presentation | None = None

    @property
    def p(self) -> Presentation:
        if self._p is None:
            path = getattr(self.args, "spec", None)
            if not path:
                raise UsageError("this subcommand needs --spec FILE")
            try:
                with open(path, encoding="utf-8") as fh:
                    text = fh.read()
            except OSError as err:
                raise UsageError(f"cannot read {path}: {err.strerror}") from None
            try:
                self._p = parse_spec(text)
            except ParseError as err:
                raise UsageError(f"{path}:{err}") from None
        return self._p

    def word(self, text: str) -> NormalForm:
        try:
            return reduce(self.p, parse_word(self.p, text))
        except ParseError as err:
            raise UsageError(f"word {text!r}: {err}") from None

    def words(self, texts: Sequence[str]) -> list[NormalForm]:
        return [self.word(t) for t in texts]

    def vertex_set(self, text: str) -> frozenset[int]:
        try:
            return parse_vertex_set(self.p, text)
        except ParseError as err:
            raise UsageError(f"vertex set {text!r}: {err}") from None

    def vertex(self, label: str) -> int:
        if label not in self.p.labels:
            raise UsageError(f"unknown vertex {label!r}")
        return self.p.labels.index(label)

    def parabolic(self, text: str) -> ParabolicSubgroup:
        try:
            g, base = parse_parabolic(self.p, text)
        except ParseError as err:
            raise UsageError(f"parabolic {text!r}: {err}") from None
        return canonicalize(self.p, reduce(self.p, g), base)

    @property
    def budget(self) -> int | None:
        return getattr(self.args, "budget", None)


def _emit(args: argparse.Namespace, human: str, data: dict) -> None:
    if getattr(args, "json", False):
        print(json.dumps(data, ensure_ascii=False))
    else:
        print(human)


def cmd_nf(s: Session) -> int:
    x = s.word(s.args.word)
    _emit(s.args, format_word(s.p, x), {"nf": format_word(s.p, x), "length": len(x)})
    return 0


def cmd_mul(s: Session) -> int:
    x = multiply(s.p, *s.words(s.args.words))
    _emit(s.args, format_word(s.p, x), {"product": format_word(s.p, x), "length": len(x)})
    return 0


def cmd_inv(s: Session) -> int:
    x = invert(s.p, s.word(s.args.word))
    _emit(s.args, format_word(s.p, x), {"inverse": format_word(s.p, x)})
    return 0


def cmd_eq(s: Session) -> int:
    same = s.word(s.args.left) == s.word(s.args.right)
    _emit(s.args, "true" if same else "false", {"equal": same})
    return 0


def cmd_order(s: Session) -> int:
    n = order(s.p, s.word(s.args.word))
    _emit(s.args, "infinite" if n is None else str(n), {"order": n})
    return 0


def _vertex_cmd(fn, key):
    def run(s: Session) -> int:
        x = s.word(s.args.word)
        vs = fn(s.p, x) if fn is not support else support(x)
        _emit(s.args, format_set(s.p, vs), {key: _labels(s.p, vs)})
        return 0

    return run


def cmd_retract(s: Session) -> int:
    vs = s.vertex_set(s.args.set)
    x = retraction(s.p, vs, s.word(s.args.word))
    _emit(s.args, format_word(s.p, x), {"retraction": format_word(s.p, x)})
    return 0


def cmd_pc(s: Session) -> int:
    cl = closure(s.p, s.words(s.args.words), s.budget)
    note = "" if cl.exact else " (inexact: search budget reached)"
    _emit(
        s.args,
        _parabolic_text(s.p, cl.parabolic) + note,
        {"parabolic": _parabolic_json(s.p, cl.parabolic), "exact": cl.exact},
    )
    return 0


def cmd_esupp(s: Session) -> int:
    cl = closure(s.p, s.words(s.args.words), s.budget)
    note = "" if cl.exact else " (inexact: search budget reached)"
    base = cl.parabolic.base
    _emit(s.args, format_set(s.p, base) + note, {"esupp": _labels(s.p, base), "exact": cl.exact})
    return 0


def cmd_pint(s: Session) -> int:
    P = intersect(s.p, s.parabolic(s.args.first), s.parabolic(s.args.second))
    _emit(s.args, _parabolic_text(s.p, P), {"parabolic": _parabolic_json(s.p, P)})
    return 0


def cmd_pnorm(s: Session) -> int:
    P = normalizer(s.p, s.parabolic(s.args.parabolic))
    _emit(s.args, _parabolic_text(s.p, P), {"parabolic": _parabolic_json(s.p, P)})
    return 0


def cmd_pmember(s: Session) -> int:
    inside = element_in_parabolic(s.p, s.word(s.args.word), s.parabolic(s.args.parabolic))
    _emit(s.args, "true" if inside else "false", {"member": inside})
    return 0


def cmd_kernel(s: Session) -> int:
    p = s.p
    a = s.vertex(s.args.vertex)
    k = kernel_presentation(p, a)
    ws = s.words(s.args.words)
    images = [psi(k, w) for w in ws]
    q = k.presentation()
    vs, es = k.census()
    edges = [(q.labels[u], q.labels[v]) for u, v in q.graph.edges()]
    lines = [f"kernel of the retraction onto {p.labels[a]}"]
    if k.finite:
        lines.append(f"Δ: {census_text(vs, es)}")
    else:
        lines.append(f"Δ: infinite; realized {census_text(vs, es)}")
    lines.append("vertices: " + ", ".join(q.labels))
    lines.append("edges: " + ", ".join(f"{u}-{v}" for u, v in edges))
    for text, w, d in zip(s.args.words, ws, images):
        lines.append(f"psi({format_word(p, w)}) = {format_word(q, d)}")
    data = {
        "vertex": p.labels[a],
        "finite": k.finite,
        "census": {"vertices": vs, "edges": es},
        "vertices": list(q.labels),
        "edges": [list(e) for e in edges],
        "images": [
            {"word": format_word(p, w), "psi": format_word(q, d), "length": len(d)} for w, d in zip(ws, images)
        ],
    }
    _emit(s.args, "\n".join(lines), data)
    return 0


def cmd_compress(s: Session) -> int:
    comp = compress(s.p, s.words(s.args.words), s.budget)
    q = comp.presentation
    imgs = [format_word(q, y) for y in comp.images]
    lines = comp.log() or ["no change"]
    lines.append("presentation:")
    lines.extend("  " + line for line in format_spec(q).splitlines())
    lines.append("images: " + ", ".join(imgs))
    if not comp.exact:
        lines.append("inexact: closure search budget reached")
    data = {"steps": comp.log(), "presentation": format_spec(q), "images": imgs, "exact": comp.exact}
    _emit(s.args, "\n".join(lines), data)
    return 0


def cmd_tree(s: Session) -> int:
    p = s.p
    sp = split_at(p, s.vertex(s.args.vertex))
    head = f"split at {p.labels[sp.v]}: A={format_set(p, sp.A)} B={format_set(p, sp.B)} C={format_set(p, sp.C)}"
    if sp.degenerate:
        raise SplittingError(f"degenerate splitting: {p.labels[sp.v]} is adjacent to every other vertex")
    lines = [head]
    elements = []
    for w in s.words(s.args.words):
        act = classify_action(sp, w)
        form = alternating_form(sp, w)
        factors = [(side, format_word(p, f)) for side, f in form.factors]
        # the prefix lies in the edge group G_C
        shown = ([f"C:{format_word(p, form.prefix)}"] if form.prefix else []) + [f"{side}:{f}" for side, f in factors]
        lines.append(f"{format_word(p, w)}: {act} [{', '.join(shown)}]")
        elements.append(
            {
                "word": format_word(p, w),
                "action": "hyperbolic" if isinstance(act, Hyperbolic) else "elliptic",
                "translation_length": act.translation_length if isinstance(act, Hyperbolic) else 0,
                "prefix": format_word(p, form.prefix),
                "factors": [list(f) for f in factors],
            }
        )
    data = {
        "vertex": p.labels[sp.v],
        "A": _labels(p, sp.A),
        "B": _labels(p, sp.B),
        "C": _labels(p, sp.C),
        "elements": elements,
    }
    _emit(s.args, "\n".join(lines), data)
    return 0


def cmd_classify(s: Session) -> int:
    v = classify(s.p, s.words(s.args.words), ClassifyOptions(budget=s.budget))
    _emit(s.args, verdict_text(s.p, v), verdict_json(s.p, v))
    return 0


def cmd_selftest(s: Session) -> int:
    from graphprod.oracle import SUITES, check_suite

    names = [s.args.suite] if s.args.suite else list(SUITES)
    for name in names:
        if name not in SUITES:
            raise UsageError(f"unknown suite {name!r}; known: {', '.join(SUITES)}")
    seed = getattr(s.args, "seed", None) or 0
    reports = [check_suite(name, seed, s.args.trials) for name in names]
    if getattr(s.args, "json", False):
        print(
            json.dumps(
                {
                    "suites": [
                        {
                            "suite": r.suite,
                            "seed": r.seed,
                            "trials": r.trials,
                            "e_max": r.e_max,
                            "passed": r.passed,
                            "ok": r.ok,
                            "observations": r.observations,
                            "failures": [
                                {"trial": f.trial, "message": f.message, "instance": f.instance.describe()}
                                for f in r.failures
                            ],
                        }
                        for r in reports
                    ]
                }
            )
        )
    else:
        for r in reports:
            print(r.text())
    return 0 if all(r.ok for r in reports) else 1


def _common() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--spec", metavar="FILE", default=argparse.SUPPRESS, help="presentation file")
    common.add_argument("--json", action="store_true", default=argparse.SUPPRESS, help="machine-readable output")
    common.add_argument("--seed", type=int, default=argparse.SUPPRESS, help="seed for selftest")
    common.add_argument("--budget", type=int, default=argparse.SUPPRESS, help="closure search budget")
    return common


def build_parser() -> argparse.ArgumentParser:
    common = _common()
    parser = argparse.ArgumentParser(prog="graphprod", description=__doc__.splitlines()[0], parents=[common])
    sub = parser.add_subparsers(dest="command", required=True, metavar="COMMAND")

    def add(name: str, fn, help_: str, *args: tuple[str, dict]):
        sp = sub.add_parser(name, help=help_, parents=[common])
        for arg, kw in args:
            sp.add_argument(arg, **kw)
        sp.set_defaults(func=fn)
        return sp

    one = ("word", {"help": "word expression"})
    many = ("words", {"nargs": "+", "help": "word expressions"})
    some = ("words", {"nargs": "*", "help": "word expressions"})
    add("nf", cmd_nf, "normal form", one)
    add("mul", cmd_mul, "product of words", many)
    add("inv", cmd_inv, "inverse", one)
    add("eq", cmd_eq, "equality test", ("left", {}), ("right", {}))
    add("order", cmd_order, "element order", one)
    add("supp", _vertex_cmd(support, "supp"), "support", one)
    add("fv", _vertex_cmd(first_vertices, "fv"), "first vertices", one)
    add("lv", _vertex_cmd(last_vertices, "lv"), "last vertices", one)
    add("retract", cmd_retract, "retraction onto a vertex set", ("set", {"help": "e.g. a,b"}), one)
    add("pc", cmd_pc, "parabolic closure", many)
    add("esupp", cmd_esupp, "essential support", many)
    add("pint", cmd_pint, "intersection of parabolics CONJ:SET", ("first", {}), ("second", {}))
    add("pnorm", cmd_pnorm, "normalizer of a parabolic CONJ:SET", ("parabolic", {}))
    add("pmember", cmd_pmember, "membership in a parabolic", one, ("parabolic", {}))
    add("kernel", cmd_kernel, "kernel of a vertex retraction", ("vertex", {}), some)
    add("compress", cmd_compress, "compress a generating set", many)
    add("tree", cmd_tree, "action on the Bass-Serre tree of the splitting at a vertex", ("vertex", {}), many)
    add("classify", cmd_classify, "Tits-alternative verdict", many)
    st = add("selftest", cmd_selftest, "run oracle suites")
    st.add_argument("--suite", help="run a single suite")
    st.add_argument("--trials", type=int, default=None, help="trials per suite")
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    session = Session(args)
    try:
        return args.func(session)
    except (UsageError, WordError, ParabolicError, KernelError, SplittingError) as err:
        print(f"graphprod {args.command}: error: {err}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
