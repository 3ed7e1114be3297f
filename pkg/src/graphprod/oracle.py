"""Brute-force ground truth and the registered self-test suites.

Everything here is deliberately naive: balls are enumerated layer by layer,
normal forms are recomputed by exhaustive rewriting, Bass–Serre distances
come from an explicit coset graph.  The suites compare the library's fast
answers against these, on instances drawn from a seeded generator.
"""

from __future__ import annotations

import random
from collections import deque
from collections.abc import Callable, Iterable, Sequence
from dataclasses import dataclass, field
from itertools import combinations

from graphprod.bassserre import Hyperbolic, alternating_form, classify_action, split_at
from graphprod.classify import (
    ContainsNonabelianFree,
    FreeAbelian,
    classify,
    find_relation,
)
from graphprod.graph import SimplicialGraph, from_mask, full_subgraph, is_irreducible, to_mask
from graphprod.kernel import CVertex, KernelStep, ProjectStep, compress, kernel_presentation, phi, psi
from graphprod.parabolic import (
    ParabolicSubgroup,
    canonicalize,
    closure,
    element_in_parabolic,
    intersect,
    normalizer,
    parabolic_contains,
    retract_mask,
)
from graphprod.words import (
    IDENTITY,
    NormalForm,
    Presentation,
    commute,
    conjugate,
    drop_back,
    invert,
    multiply,
    order,
    power,
    reduce,
    support_mask,
    word_text,
)

BALL_LIMIT = 10**6


class BallTooLarge(RuntimeError):
    pass


# ---------------------------------------------------------------------------
# balls


@dataclass(frozen=True)
class Ball:
    presentation: Presentation
    radius: int
    e_max: int
    elements: tuple[NormalForm, ...]

    def __len__(self) -> int:
        return len(self.elements)

    def __iter__(self):
        return iter(self.elements)

    def __contains__(self, x: object) -> bool:
        return x in self._set

    @property
    def _set(self) -> frozenset[NormalForm]:
        cached = self.__dict__.get("_members")
        if cached is None:
            cached = frozenset(self.elements)
            object.__setattr__(self, "_members", cached)
        return cached


def alphabet(p: Presentation, e_max: int) -> list[tuple[int, int]]:
    """Every single-syllable element with ``|e| <= e_max`` on infinite vertices."""
    out = []
    for v, n in enumerate(p.orders):
        if n is None:
            out.extend((v, e) for e in range(-e_max, e_max + 1) if e)
        else:
            out.extend((v, e) for e in range(1, n))
    return out


def enumerate_ball(p: Presentation, r: int, e_max: int = 2, limit: int = BALL_LIMIT) -> Ball:
    """All elements of syllable length ≤ ``r`` whose exponents stay within the bound.

    Layer ``k`` is obtained from layer ``k-1`` by right-multiplying one
    syllable and keeping results of length exactly ``k``; a length-``k``
    element always arises this way from dropping one of its last syllables.
    """
    letters = [NormalForm((s,)) for s in alphabet(p, e_max)]
    elements = [IDENTITY]
    layer = [IDENTITY]
    for k in range(1, r + 1):
        found: set[NormalForm] = set()
        for x in layer:
            for s in letters:
                y = multiply(p, x, s)
                if len(y) == k:
                    found.add(y)
        layer = sorted(found, key=lambda y: y.syllables)
        elements.extend(layer)
        if len(elements) > limit:
            raise BallTooLarge(f"ball of radius {r} exceeds {limit} elements")
        if not layer:
            break
    return Ball(p, r, e_max, tuple(elements))


# ---------------------------------------------------------------------------
# normal forms by exhaustive rewriting


def rewrite_closure(p: Presentation, word: Iterable[tuple[int, int]]) -> set[tuple[tuple[int, int], ...]]:
    """Every word reachable by deleting trivial syllables, merging equal neighbours, swapping commuting ones."""

    def norm(v: int, e: int) -> tuple[int, int]:
        n = p.orders[v]
        return (v, e % n if n else e)

    start = tuple(norm(v, e) for v, e in word)
    seen = {start}
    queue = deque([start])
    adj = p.graph.adjacency
    while queue:
        w = queue.popleft()
        succ = []
        for i, (v, e) in enumerate(w):
            if e == 0:
                succ.append(w[:i] + w[i + 1 :])
        for i in range(len(w) - 1):
            (v1, e1), (v2, e2) = w[i], w[i + 1]
            if v1 == v2:
                succ.append(w[:i] + (norm(v1, e1 + e2),) + w[i + 2 :])
            elif adj[v1] >> v2 & 1:
                succ.append(w[:i] + (w[i + 1], w[i]) + w[i + 2 :])
        for s in succ:
            if s not in seen:
                seen.add(s)
                queue.append(s)
    return seen


def oracle_normal_form(p: Presentation, word: Iterable[tuple[int, int]]) -> tuple[tuple[int, int], ...]:
    """Shortest reachable word, lexicographically least among the shortest."""
    reachable = rewrite_closure(p, word)
    return min(reachable, key=lambda w: (len(w), w))


# ---------------------------------------------------------------------------
# Bass–Serre tree of the splitting at a vertex, built from cosets


def trace_prefixes(p: Presentation, x: NormalForm, cache: dict | None = None) -> list[NormalForm]:
    """All ``y`` with ``x = y * z`` and ``|y| + |z| = |x|`` (downsets of the syllable order).

    ``cache`` memoizes the reduction of subwords across calls.
    """
    syl = x.syllables
    n = len(syl)
    adj = p.graph.adjacency
    below = [0] * n
    for j in range(n):
        for i in range(j):
            vi, vj = syl[i][0], syl[j][0]
            if vi == vj or not adj[vi] >> vj & 1:
                below[j] |= 1 << i
    seen = {0}
    queue = deque([0])
    while queue:
        m = queue.popleft()
        for j in range(n):
            if not m >> j & 1 and below[j] & ~m == 0:
                m2 = m | 1 << j
                if m2 not in seen:
                    seen.add(m2)
                    queue.append(m2)
    if cache is None:
        cache = {}
    out = []
    for m in sorted(seen):
        sub = tuple(syl[i] for i in range(n) if m >> i & 1)
        y = cache.get(sub)
        if y is None:
            y = cache[sub] = reduce(p, sub)
        out.append(y)
    return out


class CosetTree:
    """Vertices ``g G_A`` and ``g G_B``; edges ``(g G_A, g G_B)``; built on demand from prefixes."""

    def __init__(self, p: Presentation, v: int):
        self.p = p
        c = p.graph.adjacency[v]
        self.masks = {"A": p.graph.full_mask & ~(1 << v), "B": c | 1 << v}
        self._cosets: dict[tuple[str, NormalForm], tuple[str, NormalForm]] = {}
        self._subwords: dict[tuple, NormalForm] = {}

    def vertex(self, side: str, g: NormalForm) -> tuple[str, NormalForm]:
        key = (side, g)
        got = self._cosets.get(key)
        if got is None:
            got = self._cosets[key] = (side, drop_back(self.p, g, self.masks[side])[0])
        return got

    def distance_from_root(self, g: NormalForm, side: str = "A") -> int:
        """``d(G_A, g G_side)``, by BFS in the subtree spanned by the prefixes of ``g``.

        The prefix cosets form a connected subgraph containing both ends, and
        in a tree that subgraph contains the geodesic.
        """
        graph: dict[tuple[str, NormalForm], set] = {}
        for y in trace_prefixes(self.p, g, self._subwords):
            a, b = self.vertex("A", y), self.vertex("B", y)
            graph.setdefault(a, set()).add(b)
            graph.setdefault(b, set()).add(a)
        root = self.vertex("A", IDENTITY)
        target = self.vertex(side, g)
        dist = {root: 0}
        queue = deque([root])
        while queue:
            u = queue.popleft()
            if u == target:
                return dist[u]
            for w in graph.get(u, ()):
                if w not in dist:
                    dist[w] = dist[u] + 1
                    queue.append(w)
        raise AssertionError("prefix coset graph is disconnected")

    def translation_length(self, x: NormalForm) -> int:
        """Translation length of a tree isometry: ``max(0, d(o, x²o) - d(o, xo))``."""
        d1 = self.distance_from_root(x)
        d2 = self.distance_from_root(multiply(self.p, x, x))
        return max(0, d2 - d1)


# ---------------------------------------------------------------------------
# instance generation


class InstanceGenerator:
    """Seeded source of random presentations, words and vertex sets."""

    def __init__(self, seed: int, max_vertices: int = 5, orders: Sequence[int | None] = (2, 3, None), max_length: int = 8):
        self.seed = seed
        self.rng = random.Random(seed)
        self.max_vertices = max_vertices
        self.orders = tuple(orders)
        self.max_length = max_length

    def presentation(
        self,
        n: int | None = None,
        *,
        min_vertices: int = 1,
        max_vertices: int | None = None,
        orders: Sequence[int | None] | None = None,
        edge_probability: float = 0.5,
    ) -> Presentation:
        rng = self.rng
        if n is None:
            n = rng.randint(min_vertices, max_vertices or self.max_vertices)
        pool = tuple(orders) if orders is not None else self.orders
        edges = [(i, j) for i in range(n) for j in range(i + 1, n) if rng.random() < edge_probability]
        return Presentation(SimplicialGraph.from_edges(n, edges), tuple(rng.choice(pool) for _ in range(n)))

    def raw_syllable(self, p: Presentation, e_max: int = 2, vertices: Sequence[int] | None = None) -> tuple[int, int]:
        v = self.rng.choice(vertices if vertices is not None else range(p.vertex_count))
        n = p.orders[v]
        if n is None:
            return v, self.rng.choice([e for e in range(-e_max, e_max + 1) if e])
        return v, self.rng.randint(1, n)

    def raw_word(self, p: Presentation, length: int, e_max: int = 2, vertices: Sequence[int] | None = None) -> list[tuple[int, int]]:
        return [self.raw_syllable(p, e_max, vertices) for _ in range(length)]

    def element(
        self,
        p: Presentation,
        max_length: int | None = None,
        *,
        min_length: int = 0,
        e_max: int = 2,
        vertices: Sequence[int] | None = None,
    ) -> NormalForm:
        hi = self.max_length if max_length is None else max_length
        if vertices is not None and not vertices:
            return IDENTITY
        x = IDENTITY
        for _ in range(50):
            x = reduce(p, self.raw_word(p, self.rng.randint(min_length, hi), e_max, vertices))
            if len(x) >= min_length:
                return x
        return x

    def subset(self, p: Presentation, *, nonempty: bool = False) -> frozenset[int]:
        while True:
            s = frozenset(v for v in range(p.vertex_count) if self.rng.random() < 0.5)
            if s or not nonempty:
                return s


# ---------------------------------------------------------------------------
# suites


@dataclass(frozen=True)
class Instance:
    presentation: Presentation
    words: tuple[tuple[tuple[int, int], ...], ...] = ()
    data: tuple = ()

    def elements(self) -> list[NormalForm]:
        return [reduce(self.presentation, w) for w in self.words]

    def describe(self) -> str:
        p = self.presentation
        spec = "; ".join(
            f"{lab}:{'Z' if n is None else f'Z/{n}'}" for lab, n in zip(p.labels, p.orders)
        )
        edges = ",".join(f"{p.labels[u]}-{p.labels[v]}" for u, v in p.graph.edges())
        words = ", ".join(word_text(p, w) for w in self.words)
        extra = f" data={self.data!r}" if self.data else ""
        return f"vertices [{spec}] edges [{edges}] words [{words}]{extra}"


@dataclass
class Context:
    e_max: int
    cache: dict = field(default_factory=dict)

    def ball(self, p: Presentation, r: int, e_max: int | None = None) -> Ball:
        e = self.e_max if e_max is None else e_max
        key = ("ball", p, r, e)
        if key not in self.cache:
            self.cache[key] = enumerate_ball(p, r, e)
        return self.cache[key]


@dataclass
class Check:
    failure: str | None = None
    observations: dict[str, int] = field(default_factory=dict)


Generator = Callable[[InstanceGenerator, int, Context], Instance]
Checker = Callable[[Instance, Context], Check]


@dataclass(frozen=True)
class Suite:
    name: str
    checks: str
    generate: Generator
    check: Checker
    default_trials: int
    e_max: int = 2
    shrinkable: bool = True


SUITES: dict[str, Suite] = {}


def register(name: str, checks: str, default_trials: int, *, e_max: int = 2, shrinkable: bool = True):
    def deco(pair: tuple[Generator, Checker]):
        gen, chk = pair
        SUITES[name] = Suite(name, checks, gen, chk, default_trials, e_max, shrinkable)
        return pair

    return deco


@dataclass
class Failure:
    trial: int
    message: str
    instance: Instance

    def text(self) -> str:
        return f"  trial {self.trial}: {self.message}\n    {self.instance.describe()}"


@dataclass
class Report:
    suite: str
    seed: int
    trials: int
    e_max: int
    passed: int
    failures: list[Failure]
    observations: dict[str, int]

    @property
    def ok(self) -> bool:
        return not self.failures

    def text(self) -> str:
        status = "PASS" if self.ok else "FAIL"
        lines = [f"{self.suite} seed={self.seed} trials={self.trials} e_max={self.e_max}: {status} ({self.passed}/{self.trials})"]
        for key in sorted(self.observations):
            lines.append(f"  {key} = {self.observations[key]}")
        lines.extend(f.text() for f in self.failures)
        return "\n".join(lines)


def _run_check(suite: Suite, inst: Instance, ctx: Context) -> Check:
    try:
        return suite.check(inst, ctx)
    except Exception as err:  # a crash is a failure, not an abort
        return Check(f"{type(err).__name__}: {err}")


def _shrink_candidates(inst: Instance) -> Iterable[Instance]:
    words = inst.words
    if len(words) > 1:
        for i in range(len(words)):
            yield Instance(inst.presentation, words[:i] + words[i + 1 :], inst.data)
    for i, w in enumerate(words):
        for j in range(len(w)):
            shorter = w[:j] + w[j + 1 :]
            yield Instance(inst.presentation, words[:i] + (shorter,) + words[i + 1 :], inst.data)


def shrink(suite: Suite, inst: Instance, ctx: Context, max_steps: int = 200) -> tuple[Instance, str]:
    """Greedily delete generators and syllables while the check keeps failing."""
    msg = _run_check(suite, inst, ctx).failure
    assert msg is not None
    if not suite.shrinkable:
        return inst, msg
    for _ in range(max_steps):
        for cand in _shrink_candidates(inst):
            got = _run_check(suite, cand, ctx).failure
            if got is not None:
                inst, msg = cand, got
                break
        else:
            break
    return inst, msg


def check_suite(name: str, seed: int = 0, trials: int | None = None, e_max: int | None = None) -> Report:
    suite = SUITES[name]
    n = suite.default_trials if trials is None else trials
    ctx = Context(suite.e_max if e_max is None else e_max)
    gen = InstanceGenerator(seed)
    failures = []
    observations: dict[str, int] = {}
    passed = 0
    for i in range(n):
        inst = suite.generate(gen, i, ctx)
        got = _run_check(suite, inst, ctx)
        for key, value in got.observations.items():
            observations[key] = max(observations.get(key, value), value)
        if got.failure is None:
            passed += 1
        else:
            small, msg = shrink(suite, inst, ctx)
            failures.append(Failure(i, msg, small))
    return Report(name, seed, n, ctx.e_max, passed, failures, observations)


def _words(*xs: NormalForm) -> tuple[tuple[tuple[int, int], ...], ...]:
    return tuple(x.syllables for x in xs)


# --- normal forms -----------------------------------------------------------


def _gen_nf(g: InstanceGenerator, i: int, ctx: Context) -> Instance:
    p = g.presentation(min_vertices=1, max_vertices=4, edge_probability=g.rng.choice((0.3, 0.6, 0.9)))
    return Instance(p, (tuple(g.raw_word(p, g.rng.randint(0, 6), ctx.e_max)),))


def _check_nf(inst: Instance, ctx: Context) -> Check:
    p, (w,) = inst.presentation, inst.words
    got = reduce(p, w)
    want = oracle_normal_form(p, w)
    if got.syllables != want:
        return Check(f"reduce gave {word_text(p, got)}, rewriting oracle gave {word_text(p, want)}")
    if reduce(p, got.syllables) != got:
        return Check("reduce is not idempotent")
    return Check(observations={"max_length": len(want)})


register("nf_minimality", "reduce() agrees with exhaustive delete, merge and shuffle rewriting (element and minimal length)", 500)(
    (_gen_nf, _check_nf)
)


def _gen_words(g: InstanceGenerator, i: int, ctx: Context) -> Instance:
    p = g.presentation(max_vertices=5)
    return Instance(p, _words(*(g.element(p, 6, e_max=ctx.e_max) for _ in range(3))))


def _check_words(inst: Instance, ctx: Context) -> Check:
    p = inst.presentation
    xs = inst.elements()
    while len(xs) < 3:
        xs.append(IDENTITY)
    x, y, z = xs
    if multiply(p, multiply(p, x, y), z) != multiply(p, x, multiply(p, y, z)):
        return Check("multiplication is not associative")
    if reduce(p, x.syllables + y.syllables) != multiply(p, x, y):
        return Check("reduce is not a congruence")
    if multiply(p, x, invert(p, x)) != IDENTITY:
        return Check("x * x^-1 is not the identity")
    n = order(p, x)
    if n is not None:
        if power(p, x, n) != IDENTITY or any(power(p, x, k) == IDENTITY for k in range(1, n)):
            return Check(f"order {n} is wrong")
    elif any(power(p, x, k) == IDENTITY for k in range(1, 13)):
        return Check("reported infinite order but a small power is trivial")
    if order(p, conjugate(p, x, y)) != n:
        return Check("order is not a conjugacy invariant")
    return Check()


register("words", "group axioms, congruence, and element orders on random elements", 300)((_gen_words, _check_words))


# --- parabolic subgroups ----------------------------------------------------


def _pooled_presentation(g: InstanceGenerator, i: int, ctx: Context, key: str, pool_size: int, **kw) -> Presentation:
    pool = ctx.cache.setdefault(("pool", key, g.seed), [])
    while len(pool) < pool_size:
        pool.append(g.presentation(**kw))
    return pool[i % pool_size]


def _gen_parabolic_pair(g: InstanceGenerator, i: int, ctx: Context) -> Instance:
    p = _pooled_presentation(g, i, ctx, "pairs", 8, min_vertices=2, max_vertices=4)
    g1 = g.element(p, 2, e_max=ctx.e_max)
    g2 = g.element(p, 2, e_max=ctx.e_max)
    return Instance(p, _words(g1, g2), (g.subset(p), g.subset(p)))


def _members(p: Presentation, ball: Ball, P: ParabolicSubgroup, masks: dict) -> frozenset[NormalForm]:
    """Ball elements in ``P``; an element outside ``base ∪ supp(conjugator)`` can never qualify."""
    allowed = P.base_mask | support_mask(P.conjugator)
    return frozenset(
        x for x in ball if masks[x] & ~allowed == 0 and element_in_parabolic(p, x, P)
    )


def _ball_masks(ctx: Context, ball: Ball) -> dict:
    key = ("masks", ball.presentation, ball.radius, ball.e_max)
    if key not in ctx.cache:
        ctx.cache[key] = {x: support_mask(x) for x in ball}
    return ctx.cache[key]


def _check_intersection(inst: Instance, ctx: Context) -> Check:
    p = inst.presentation
    g1, g2 = inst.elements()
    S, T = inst.data
    P1, P2 = canonicalize(p, g1, S), canonicalize(p, g2, T)
    I = intersect(p, P1, P2)
    ball = ctx.ball(p, 4)
    masks = _ball_masks(ctx, ball)
    want = _members(p, ball, P1, masks) & _members(p, ball, P2, masks)
    got = _members(p, ball, I, masks)
    if got != want:
        extra = sorted(got ^ want, key=lambda x: (len(x), x.syllables))[0]
        return Check(f"intersection disagrees on {word_text(p, extra.syllables)} (in computed: {extra in got})")
    if not (parabolic_contains(p, P1, I) and parabolic_contains(p, P2, I)):
        return Check("intersection is not contained in both inputs")
    return Check(observations={"max_ball_members": len(want)})


register("intersection", "intersect(P1, P2) has the same radius-4 ball elements as P1 ∩ P2", 200)(
    (_gen_parabolic_pair, _check_intersection)
)


def _gen_parabolic(g: InstanceGenerator, i: int, ctx: Context) -> Instance:
    p = _pooled_presentation(g, i, ctx, "single", 8, min_vertices=2, max_vertices=4)
    return Instance(p, _words(g.element(p, 2, e_max=ctx.e_max)), (g.subset(p, nonempty=True),))


def _normalizes_base(p: Presentation, y: NormalForm, base: frozenset[int], mask: int) -> bool:
    yinv = invert(p, y)
    for s in sorted(base):
        gen = NormalForm(((s, 1),))
        for z in (multiply(p, yinv, gen, y), multiply(p, y, gen, yinv)):
            if support_mask(z) & ~mask:
                return False
    return True


def _check_normalizer(inst: Instance, ctx: Context) -> Check:
    p = inst.presentation
    (g,) = inst.elements()
    (S,) = inst.data
    P = canonicalize(p, g, S)
    N = normalizer(p, P)
    ball = ctx.ball(p, 4)
    mask = P.base_mask
    ginv = invert(p, P.conjugator)
    count = 0
    for x in ball:
        # x normalizes g G_S g^-1  iff  g^-1 x g normalizes G_S
        y = multiply(p, ginv, x, P.conjugator)
        want = _normalizes_base(p, y, S, mask)
        got = element_in_parabolic(p, x, N)
        if want != got:
            return Check(f"{word_text(p, x.syllables)}: normalizes={want}, in computed normalizer={got}")
        count += want
    return Check(observations={"max_ball_members": count})


register("normalizer", "normalizer(g G_S g^-1) = g G_{S ∪ link S} g^-1 on radius-4 balls", 200)(
    (_gen_parabolic, _check_normalizer)
)


def _gen_closure(g: InstanceGenerator, i: int, ctx: Context) -> Instance:
    p = _pooled_presentation(g, i, ctx, "closure", 8, min_vertices=2, max_vertices=4)
    k = g.rng.randint(1, 3)
    if g.rng.random() < 0.25:
        xs = [g.element(p, 4, min_length=1, e_max=ctx.e_max) for _ in range(k)]
    else:
        conj = g.element(p, 2, e_max=1)
        S = sorted(g.subset(p, nonempty=True))
        xs = [conjugate(p, g.element(p, 3, min_length=1, e_max=ctx.e_max, vertices=S), invert(p, conj)) for _ in range(k)]
    return Instance(p, _words(*xs))


def _check_closure(inst: Instance, ctx: Context) -> Check:
    p = inst.presentation
    xs = [x for x in inst.elements() if x]
    if not xs:
        return Check()
    cl = closure(p, xs)
    P = cl.parabolic
    if not all(element_in_parabolic(p, x, P) for x in xs):
        return Check("closure does not contain the generators")
    best = None
    for h in ctx.ball(p, 3, 1):
        sup = 0
        for x in xs:
            sup |= support_mask(conjugate(p, x, h))
        size = bin(sup).count("1")
        if best is None or size < best[0]:
            best = (size, [(h, sup)])
        elif size == best[0]:
            best[1].append((h, sup))
    size, witnesses = best
    if size < len(P.base):
        return Check(f"brute force found support of size {size} < {len(P.base)}")
    if size == len(P.base):
        for h, sup in witnesses:
            if canonicalize(p, h, from_mask(sup)) != P:
                return Check("two minimal conjugates give different parabolic subgroups")
    return Check(observations={"max_base": len(P.base), "inexact": int(not cl.exact)})


register("closure", "parabolic closure is the minimal-support conjugate found by brute force", 150)(
    (_gen_closure, _check_closure)
)


# --- kernels ---------------------------------------------------------------

KERNEL_FIXTURES = (("path-z3", "v1"), ("square-racg", "a"), ("path-raag", "a"))


def _gen_kernel_fixture(names: Sequence[tuple[str, str]]) -> Generator:
    def gen(g: InstanceGenerator, i: int, ctx: Context) -> Instance:
        from graphprod.fixtures import fixture

        name, vertex = names[i % len(names)]
        p = fixture(name)
        return Instance(p, (), (name, p.vertex(vertex)))

    return gen


def _check_kernel(inst: Instance, ctx: Context) -> Check:
    p = inst.presentation
    _, a = inst.data
    k = kernel_presentation(p, a)
    obs = {}
    if k.finite:
        vs, es = k.census()
        obs = {"delta_vertices": vs, "delta_edges": es}
        if vs != k.expected_size():
            return Check(f"Δ has {vs} vertices, expected {k.expected_size()}")
    bound_a = 1 << a
    checked = 0
    for w in ctx.ball(p, 6):
        if retract_mask(p, bound_a, w):
            continue
        d = psi(k, w)
        checked += 1
        if phi(k, d) != w:
            return Check(f"phi(psi(w)) != w for w = {word_text(p, w.syllables)}")
        if support_mask(w) & bound_a:
            if len(d) > len(w) - 2:
                return Check(f"|psi(w)| = {len(d)} > |w| - 2 for w = {word_text(p, w.syllables)}")
        elif len(d) != len(w):
            return Check(f"|psi(w)| = {len(d)} != |w| for w = {word_text(p, w.syllables)} avoiding a")
    if not k.finite:
        # realize a window of copies so the Δ side has something to enumerate
        for t in range(-1, 2):
            for u in sorted(from_mask(k.rest)):
                k.vertex_id(CVertex(t, u))
    q = k.presentation()
    for d in ctx.ball(q, 6 if q.vertex_count <= 4 else 4, 1):
        w = phi(k, d)
        if retract_mask(p, bound_a, w):
            return Check("phi leaves the kernel")
        if psi(k, w) != d:
            return Check(f"psi(phi(d)) != d for d = {word_text(q, d.syllables)}")
    obs["kernel_elements"] = checked
    return Check(observations=obs)


register(
    "kernel_maps",
    "psi and phi are inverse on kernel elements of length ≤ 6 and |psi(g)| obeys the length bounds",
    3,
    shrinkable=False,
)((_gen_kernel_fixture(KERNEL_FIXTURES), _check_kernel))

register(
    "kernel_roundtrip",
    "round trip and Δ census (4 vertices, 3 edges) for the path with a Z/3 end",
    1,
    shrinkable=False,
)((_gen_kernel_fixture(KERNEL_FIXTURES[:1]), _check_kernel))


def _gen_compress(g: InstanceGenerator, i: int, ctx: Context) -> Instance:
    p = g.presentation(min_vertices=2, max_vertices=4)
    k = g.rng.randint(1, 3)
    xs = []
    if g.rng.random() < 0.5:
        a = g.rng.randrange(p.vertex_count)
        others = [v for v in range(p.vertex_count) if v != a]
        for _ in range(k):
            y = g.element(p, 2, min_length=1, e_max=ctx.e_max, vertices=others)
            t = NormalForm(((a, 1),))
            xs.append(multiply(p, t, y, invert(p, t), g.element(p, 2, e_max=ctx.e_max, vertices=others)))
    else:
        xs = [g.element(p, 4, min_length=1, e_max=ctx.e_max) for _ in range(k)]
    return Instance(p, _words(*xs))


def _esupp_irreducible(pres: Presentation, xs: Sequence[NormalForm]) -> bool:
    base = closure(pres, xs).parabolic.base
    sub, _ = full_subgraph(pres.graph, base)
    return len(base) >= 2 and is_irreducible(sub)


def _check_compress(inst: Instance, ctx: Context) -> Check:
    p = inst.presentation
    xs = [x for x in inst.elements() if x]
    if not xs:
        return Check()
    comp = compress(p, xs)
    q, ys = comp.presentation, comp.images
    if sum(map(len, ys)) > sum(map(len, xs)):
        return Check("total length increased")
    if ys != [comp.apply(x) for x in xs]:
        return Check("recorded images differ from replaying the steps")
    # injectivity on the radius-3 ball of <X>
    letters = []
    for x in xs:
        letters.extend([x, invert(p, x)])
    seen: dict[NormalForm, NormalForm] = {}
    layer = [IDENTITY]
    elements = {IDENTITY}
    for _ in range(3):
        layer = [multiply(p, u, s) for u in layer for s in letters]
        elements.update(layer)
    for z in sorted(elements, key=lambda t: (len(t), t.syllables)):
        img = comp.apply(z)
        if img in seen and seen[img] != z:
            return Check(f"not injective: {word_text(p, z.syllables)} and {word_text(p, seen[img].syllables)}")
        seen[img] = z
    if closure(q, ys).parabolic.base != frozenset(range(q.vertex_count)):
        return Check("essential support of the output is not every vertex")
    for t in range(q.vertex_count):
        if all(not retract_mask(q, 1 << t, y) for y in ys):
            return Check(f"vertex {q.labels[t]} has trivial projection")
    if not set(q.orders) <= set(p.orders):
        return Check("output vertex group not isomorphic to an input vertex group")
    if _esupp_irreducible(p, xs):
        cur = xs
        for step in comp.steps:
            cur = [step.apply(x) for x in cur]
            if not _esupp_irreducible(step.target, [x for x in cur if x]):
                return Check("intermediate essential support became reducible or too small")
    kernels = sum(isinstance(s, KernelStep) for s in comp.steps)
    return Check(observations={"max_kernel_steps": kernels, "max_output_vertices": q.vertex_count})


register("compress", "compress shortens, stays injective, has full essential support and keeps irreducibility", 100)(
    (_gen_compress, _check_compress)
)


# --- classifier contracts ---------------------------------------------------


def _relations_by_collision(p: Presentation, u: NormalForm, v: NormalForm, half: int = 3) -> list[tuple[int, ...]]:
    """Every pair of distinct reduced ``{u,v}``-words of length ≤ ``half`` with equal values."""
    gens = (u, invert(p, u), v, invert(p, v))
    values: dict[NormalForm, list[tuple[int, ...]]] = {}
    stack = [((), IDENTITY)]
    while stack:
        word, value = stack.pop()
        values.setdefault(value, []).append(word)
        if len(word) < half:
            for c in range(4):
                if not word or word[-1] != c ^ 1:
                    stack.append((word + (c,), multiply(p, value, gens[c])))
    return [a + b for ws in values.values() for a, b in combinations(sorted(ws), 2)]


def _gen_pair(g: InstanceGenerator, i: int, ctx: Context) -> Instance:
    while True:
        p = g.presentation(min_vertices=2, max_vertices=4, orders=(None,))
        u = g.element(p, 4, min_length=1, e_max=ctx.e_max)
        v = g.element(p, 4, min_length=1, e_max=ctx.e_max)
        if not commute(p, u, v):
            return Instance(p, _words(u, v))


def _check_pair(inst: Instance, ctx: Context) -> Check:
    p = inst.presentation
    xs = inst.elements()
    if len(xs) != 2 or commute(p, *xs):
        return Check()
    u, v = xs
    if _relations_by_collision(p, u, v):
        return Check("a reduced word of length ≤ 6 in the pair is trivial")
    if find_relation(p, u, v, 6) is not None:
        return Check("find_relation reports a relation the exhaustive search does not see")
    return Check()


register("free_pairs", "non-commuting pairs in RAAGs satisfy no relation of length ≤ 6", 300)((_gen_pair, _check_pair))


def _gen_raag_subgroup(g: InstanceGenerator, i: int, ctx: Context) -> Instance:
    p = g.presentation(min_vertices=1, max_vertices=4, orders=(None,))
    k = g.rng.randint(1, 4)
    return Instance(p, _words(*(g.element(p, 4, min_length=1, e_max=ctx.e_max) for _ in range(k))))


def _check_dichotomy(inst: Instance, ctx: Context) -> Check:
    p = inst.presentation
    xs = [x for x in inst.elements() if x]
    if not xs:
        return Check()
    verdict = classify(p, xs)
    if isinstance(verdict, FreeAbelian):
        if not 1 <= verdict.rank <= p.vertex_count:
            return Check(f"free abelian rank {verdict.rank} outside 1..{p.vertex_count}")
        if any(not commute(p, x, y) for x, y in combinations(xs, 2)):
            return Check("FreeAbelian verdict for non-commuting generators")
        return Check(observations={"max_rank": verdict.rank})
    if isinstance(verdict, ContainsNonabelianFree) and verdict.free_certified:
        if commute(p, *verdict.witness):
            return Check("witness pair commutes")
        if _relations_by_collision(p, *verdict.witness):
            return Check("certified witness pair satisfies a relation of length ≤ 6")
        return Check()
    return Check(f"verdict {verdict.name} for a subgroup of a RAAG")


register("dichotomy", "subgroups of RAAGs are free abelian of rank ≤ |V| or contain a certified free pair", 300)(
    (_gen_raag_subgroup, _check_dichotomy)
)


def _gen_abelian(g: InstanceGenerator, i: int, ctx: Context) -> Instance:
    p = g.presentation(min_vertices=1, max_vertices=5, orders=(None,))
    adj = p.graph.adjacency
    order_ = list(range(p.vertex_count))
    g.rng.shuffle(order_)
    clique: list[int] = []
    for v in order_:
        if all(adj[v] >> u & 1 for u in clique):
            clique.append(v)
    conj = g.element(p, 2, e_max=ctx.e_max)
    k = g.rng.randint(1, 4)
    xs = []
    for _ in range(k):
        y = reduce(p, [(v, g.rng.randint(-2, 2)) for v in clique if g.rng.random() < 0.7])
        xs.append(conjugate(p, y, invert(p, conj)))
    return Instance(p, _words(*xs), (conj.syllables, tuple(sorted(clique))))


def _check_rank(inst: Instance, ctx: Context) -> Check:
    import numpy as np

    p = inst.presentation
    conj_syl, clique = inst.data
    conj = reduce(p, conj_syl)
    xs = [x for x in inst.elements() if x]
    if not xs:
        return Check()
    rows = []
    for x in xs:
        y = conjugate(p, x, conj)
        if support_mask(y) & ~to_mask(clique):
            return Check()  # shrinking left the abelian family
        counts = dict.fromkeys(clique, 0)
        for v, e in y.syllables:
            counts[v] += e
        rows.append([counts[v] for v in clique])
    want = int(np.linalg.matrix_rank(np.array(rows, dtype=float)))
    verdict = classify(p, xs)
    if not isinstance(verdict, FreeAbelian):
        return Check(f"verdict {verdict.name} for a free abelian subgroup")
    if verdict.rank != want:
        return Check(f"rank {verdict.rank}, exponent matrix has rank {want}")
    if verdict.rank > p.vertex_count:
        return Check("rank exceeds the number of vertices")
    return Check(observations={"max_rank": verdict.rank})


register("rank_bound", "abelian subgroups of RAAGs have the exponent-matrix rank, never above |V|", 200)(
    (_gen_abelian, _check_rank)
)


def _gen_two_generator(g: InstanceGenerator, i: int, ctx: Context) -> Instance:
    from graphprod.fixtures import fixture
    from graphprod.frontend import parse_word

    p = fixture("two-generator")
    return Instance(p, (tuple(parse_word(p, "a*c")), tuple(parse_word(p, "b*c"))))


def _check_two_generator(inst: Instance, ctx: Context) -> Check:
    p = inst.presentation
    x, y = inst.elements()
    c3 = NormalForm(((p.vertex("c"), 3),))
    if not (power(p, x, 3) == power(p, y, 3) == c3):
        return Check("(ac)^3, (bc)^3, c^3 are not all equal")
    if not (commute(p, c3, x) and commute(p, c3, y)):
        return Check("c^3 is not central in <ac, bc>")
    verdict = classify(p, [x, y])
    if isinstance(verdict, ContainsNonabelianFree) and verdict.free_certified:
        return Check("the pair was certified free despite x^3 = y^3")
    rel = find_relation(p, x, y, 6)
    if rel is None:
        return Check("relation search at length 6 found nothing")
    cube = (0, 0, 0, 3, 3, 3)
    gens = (x, invert(p, x), y, invert(p, y))
    if multiply(p, *(gens[c] for c in cube)) != IDENTITY:
        return Check("x^3 y^-3 is not trivial")
    return Check(observations={"relation_length": len(rel)})


register("two_generator", "<ac, bc> in the Z/3 - Z - Z/3 path: (ac)^3 = (bc)^3 = c^3 and no free certificate", 1, shrinkable=False)(
    (_gen_two_generator, _check_two_generator)
)


def _gen_splitting(g: InstanceGenerator, i: int, ctx: Context) -> Instance:
    from graphprod.fixtures import fixture

    if i == 0:
        p = fixture("dihedral")
        return Instance(p, (), (0,))
    while True:
        p = g.presentation(min_vertices=2, max_vertices=3)
        good = [v for v in range(p.vertex_count) if p.graph.adjacency[v] != p.graph.full_mask & ~(1 << v)]
        if good:
            return Instance(p, (), (g.rng.choice(good),))


def _check_splitting(inst: Instance, ctx: Context) -> Check:
    p = inst.presentation
    (v,) = inst.data
    s = split_at(p, v)
    tree = CosetTree(p, v)
    hyperbolic = 0
    for x in ctx.ball(p, 6):
        got = classify_action(s, x)
        want = tree.translation_length(x)
        have = got.translation_length if isinstance(got, Hyperbolic) else 0
        if have != want:
            return Check(f"{word_text(p, x.syllables)}: computed {got}, tree gives {want}")
        form = alternating_form(s, x)
        if multiply(p, form.prefix, *(f for _, f in form.factors)) != x:
            return Check(f"alternating form of {word_text(p, x.syllables)} does not multiply back")
        if have and len(x) <= 2:
            hyperbolic += 1
            for k in (2, 3):
                xk = power(p, x, k)
                if tree.translation_length(xk) != k * have or classify_action(s, xk) != Hyperbolic(k * have):
                    return Check(f"translation length of {word_text(p, x.syllables)}^{k} is not {k * have}")
    if p.vertex_count == 2 and p.orders == (2, 2) and not p.graph.edges():
        uw = NormalForm(((0, 1), (1, 1)))
        if classify_action(s, uw) != Hyperbolic(2) or tree.translation_length(uw) != 2:
            return Check("uw in Z/2 * Z/2 does not translate by 2")
    return Check(observations={"hyperbolic_short": hyperbolic})


register(
    "bass_serre",
    "elliptic/hyperbolic and translation length agree with the coset tree on all elements of length ≤ 6",
    10,
    shrinkable=False,
)((_gen_splitting, _check_splitting))


def _gen_meta(g: InstanceGenerator, i: int, ctx: Context) -> Instance:
    names = ("intersection", "normalizer", "closure")
    return Instance(Presentation(SimplicialGraph.edgeless(0), ()), (), (names[i % len(names)], g.seed + i))


def _check_meta(inst: Instance, ctx: Context) -> Check:
    name, seed = inst.data
    suite = SUITES[name]
    base = check_suite(name, seed, 4, suite.e_max)
    doubled = check_suite(name, seed, 4, 2 * suite.e_max)
    if base.ok != doubled.ok:
        return Check(f"{name}: outcome changed when e_max doubled ({base.ok} -> {doubled.ok})")
    if not base.ok:
        return Check(f"{name} failed at e_max={suite.e_max}")
    return Check()


register("e_max_doubling", "doubling the exponent bound does not change any ball-based suite outcome", 3, shrinkable=False)(
    (_gen_meta, _check_meta)
)


def run_all(seed: int = 0, trials: int | None = None) -> list[Report]:
    return [check_suite(name, seed, trials) for name in SUITES]
