"""Exponent bounds for group cohomology as executable checks.

Every check returns a :class:`Verdict`.  Statements about "infinitely
many" or "all but finitely many" degrees can only be probed on a finite
window of degrees, so verdicts are three-valued on top of plain failure:
``pass`` (the window supports the claim), ``partial`` (the window is
inconclusive, e.g. the witness degree lies beyond it), ``vacuous`` (the
hypothesis never fired in the window) and ``fail`` (a concrete
counter-witness was found).  ``unsupported`` marks inputs outside the
regime a check handles.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Iterable, Sequence

from .cohomology import INTEGRAL, cohomology, generator_restricting_classes
from .errors import InvariantViolation, UnsupportedError
from .groups import (
    DEFAULT_DEPTH,
    FamilyParams,
    FiniteGroup,
    Subgroup,
    MAX_ORDER,
    _small_generating_set,
    build_family_group,
    centralizer,
    cyclic_generator,
    family_product,
    generated_subgroup,
    intersection,
    is_cyclic_subgroup,
    is_elementary_abelian,
    minimal_splitting_subgroup,
    normal_core,
    prime_power_decomposition,
    subgroup_as_group,
    subgroups_of_index_at_most,
    whole,
    wreath_sylow,
)
from .intlinalg import exponent_of

CLAIMS = ("prop1", "prop2", "cor1", "cor4", "lemma1", "transfer")
STATUSES = ("pass", "fail", "vacuous", "partial", "unsupported")


@dataclass
class Verdict:
    claim: str
    status: str
    reason: str = ""
    evidence: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.claim not in CLAIMS:
            raise ValueError(f"unknown claim id {self.claim!r}")
        if self.status not in STATUSES:
            raise ValueError(f"unknown status {self.status!r}")

    @property
    def failed(self) -> bool:
        return self.status == "fail"

    def to_json(self) -> dict:
        return {"claim": self.claim, "status": self.status, "reason": self.reason,
                "evidence": self.evidence}


@dataclass
class ExponentSummary:
    params: FamilyParams
    epsilon: int
    m: int
    n: int
    lemma1_n: int | None
    exponents: dict[int, int] = field(default_factory=dict)
    first_epsilon_degree: int | None = None
    skipped: str | None = None

    @property
    def mn(self) -> int:
        return self.m * self.n

    def to_json(self) -> dict:
        p = self.params
        return {
            "params": {"p": p.p, "alpha": p.alpha, "beta": p.beta, "gamma": p.gamma,
                       "delta": p.delta},
            "descriptor": p.descriptor,
            "epsilon": self.epsilon,
            "m": self.m,
            "n": self.n,
            "mn": self.mn,
            "lemma1_n": self.lemma1_n,
            "exponents": {str(k): v for k, v in sorted(self.exponents.items())},
            "first_epsilon_degree": self.first_epsilon_degree,
            "skipped": self.skipped,
        }


# ------------------------------------------------------------ arithmetic

def _require_normalized(params: FamilyParams) -> None:
    if not params.is_normalized:
        raise ValueError(f"parameters {tuple(params)} are not normalized")


def epsilon(params: FamilyParams) -> int:
    _require_normalized(params)
    return max(params.alpha, params.beta, 2 * params.gamma - params.delta)


def extension_class_order(params: FamilyParams, G: FiniteGroup | None = None,
                          cross_check: bool = True) -> int:
    """Order p^(gamma-delta) of the extension class of C=<c> by G/C.

    With ``cross_check`` the formula is compared against the structural
    minimal splitting subgroup of the built group.
    """
    _require_normalized(params)
    m = params.p ** (params.gamma - params.delta)
    if cross_check:
        if G is None:
            G = build_family_group(params)
        _, d = minimal_splitting_subgroup(G, generated_subgroup(G, [G.generator("c")]))
        if d != m:
            raise InvariantViolation(
                f"{params.descriptor}: formula gives m={m}, splitting subgroup has order {d}")
    return m


# ------------------------------------------------------- index bounds

def _p_of(G: FiniteGroup) -> tuple[int, int]:
    pk = prime_power_decomposition(G.order)
    if pk is None:
        raise UnsupportedError(f"{G.descriptor} is not a nontrivial p-group")
    return pk


def core_intersections(G: FiniteGroup, max_n: int = DEFAULT_DEPTH) -> list[Subgroup]:
    """``K_0, K_1, ...``: intersection of the normal cores of all subgroups of
    index at most p^k (stops early once trivial)."""
    if G.order == 1:
        return [whole(G)]
    p, _ = _p_of(G)
    out = []
    for k in range(max_n + 1):
        subs = subgroups_of_index_at_most(G, p ** k, depth=max_n)
        out.append(intersection(*(normal_core(G, H) for H in subs)))
        if out[-1].order == 1:
            break
    return out


def lemma1_bound(G: FiniteGroup, max_n: int = DEFAULT_DEPTH) -> int | None:
    """Least n such that the subgroups of index <= p^n have trivial
    core intersection; None if no n <= max_n works."""
    chain = core_intersections(G, max_n)
    return len(chain) - 1 if chain[-1].order == 1 else None


@dataclass
class WitnessSubgroups:
    # Subgroup objects, or frozensets of normal-form triples above the table limit
    subgroups: tuple
    indices: tuple[int, int, int]
    intersection_trivial: bool

    @property
    def index_multiset(self) -> list[int]:
        return sorted(self.indices)


def prop2_witness_subgroups(params: FamilyParams, G: FiniteGroup | None = None) -> WitnessSubgroups:
    """The subgroups <a,c>, <b,c>, <a, b^(p^(gamma-delta))> and their indices."""
    _require_normalized(params)
    if G is None and params.order > MAX_ORDER:
        return _witnesses_on_normal_forms(params)
    if G is None:
        G = build_family_group(params)
    a, b, c = G.generator("a"), G.generator("b"), G.generator("c")
    q = params.p ** (params.gamma - params.delta)
    subs = (generated_subgroup(G, [a, c]), generated_subgroup(G, [b, c]),
            generated_subgroup(G, [a, G.power(b, q)]))
    meet = intersection(*subs)
    if meet.order != 1:
        raise InvariantViolation(f"{params.descriptor}: witness subgroups meet in {meet.order} elements")
    return WitnessSubgroups(subs, tuple(G.order // H.order for H in subs), True)


def _witnesses_on_normal_forms(params: FamilyParams) -> WitnessSubgroups:
    mul = family_product(params)
    q = params.p ** (params.gamma - params.delta)
    a, b, c = (1, 0, 0), (0, 1, 0), (0, 0, 1)
    bq = (0, q % params.p ** params.beta, 0)
    subs = tuple(_closure(mul, gens) for gens in ([a, c], [b, c], [a, bq]))
    meet = subs[0] & subs[1] & subs[2]
    if len(meet) != 1:
        raise InvariantViolation(f"{params.descriptor}: witness subgroups meet in {len(meet)} elements")
    return WitnessSubgroups(subs, tuple(params.order // len(H) for H in subs), True)


def _closure(mul, gens) -> frozenset:
    seen = {(0, 0, 0)}
    stack = [(0, 0, 0)]
    while stack:
        x = stack.pop()
        for g in gens:
            y = mul(x, g)
            if y not in seen:
                seen.add(y)
                stack.append(y)
    return frozenset(seen)


# ------------------------------------------------------------- checks

def _even_degrees(degrees: Iterable[int]) -> list[int]:
    return sorted(d for d in set(degrees) if d > 0 and d % 2 == 0)


def _exponents(G: FiniteGroup, degrees: Iterable[int]) -> dict[int, int]:
    out = {}
    for d in sorted(set(degrees)):
        if d <= 0:
            continue
        e, free = exponent_of(cohomology(G, INTEGRAL, d))
        if free:
            raise InvariantViolation(f"H^{d}({G.descriptor}) has a free part")
        if G.order % e:
            raise InvariantViolation(f"exponent {e} of H^{d}({G.descriptor}) does not divide |G|")
        out[d] = e
    return out


def check_prop1(G: FiniteGroup, C: Subgroup, degrees: Iterable[int]) -> Verdict:
    """Classes restricting to a generator of H^(2i)(C) have order divisible by mn."""
    n = C.order
    try:
        _, m = minimal_splitting_subgroup(G, C)
    except UnsupportedError as exc:
        return Verdict("prop1", "unsupported", str(exc))
    per_degree = {}
    failures = []
    partial = False
    for d in _even_degrees(degrees):
        found = generator_restricting_classes(G, C, d)
        orders = sorted({o for _, o in found.classes})
        bad = [(cls.coords, o) for cls, o in found.classes if o % (m * n)]
        if bad:
            status = "fail"
            failures.append({"degree": d, "class": list(bad[0][0]), "order": bad[0][1]})
        elif found.partial:
            status = "partial"
            partial = True
        elif found.classes:
            status = "pass"
        else:
            status = "vacuous"
        per_degree[str(d)] = {"status": status, "count": len(found.classes),
                              "orders": orders, "enumerated": found.enumerated}
    evidence = {"m": m, "n": n, "mn": m * n, "degrees": per_degree}
    if failures:
        evidence["counter_witness"] = failures[0]
        return Verdict("prop1", "fail", "class restricting to a generator with order not divisible by mn",
                       evidence)
    statuses = {v["status"] for v in per_degree.values()}
    if partial:
        return Verdict("prop1", "partial", "enumeration capped in some degree", evidence)
    if "pass" in statuses:
        return Verdict("prop1", "pass", "all generator-restricting classes have order divisible by mn",
                       evidence)
    return Verdict("prop1", "vacuous", "no generator-restricting class in the computed degrees",
                   evidence)


def check_cor4(G: FiniteGroup, max_degree: int) -> Verdict:
    p, _ = _p_of(G)
    exps = _exponents(G, range(1, max_degree + 1))
    evidence = {"p": p, "elementary_abelian": is_elementary_abelian(G),
                "exponents": {str(k): v for k, v in exps.items()}}
    if evidence["elementary_abelian"]:
        bad = [d for d, e in exps.items() if e > p]
        if bad:
            evidence["counter_witness"] = {"degree": bad[0], "exponent": exps[bad[0]]}
            return Verdict("cor4", "fail", "elementary abelian group with exponent above p", evidence)
        return Verdict("cor4", "pass", "all positive-degree exponents are at most p", evidence)
    hits = [d for d, e in exps.items() if e % (p * p) == 0]
    if hits:
        evidence["first_degree"] = hits[0]
        return Verdict("cor4", "pass", f"order p^2 class at degree {hits[0]}", evidence)
    return Verdict("cor4", "partial", "no order p^2 class within the computed degrees", evidence)


def check_transfer_bound(p: int, n: int, degrees: Iterable[int]) -> Verdict:
    G = wreath_sylow(p, n)
    exps = _exponents(G, degrees)
    evidence = {"group": G.descriptor, "bound": p ** n,
                "exponents": {str(k): v for k, v in exps.items()}}
    bad = [d for d, e in exps.items() if (p ** n) % e]
    if bad:
        evidence["counter_witness"] = {"degree": bad[0], "exponent": exps[bad[0]]}
        return Verdict("transfer", "fail", f"exponent does not divide {p ** n}", evidence)
    return Verdict("transfer", "pass", f"every exponent divides {p ** n}", evidence)


def check_lemma1(G: FiniteGroup, degrees: Iterable[int], max_n: int = DEFAULT_DEPTH) -> Verdict:
    """Exponents in the window against the index bound (eventual claim, so
    an excess is reported as partial, never as failure)."""
    bound = lemma1_bound(G, max_n)
    if bound is None:
        return Verdict("lemma1", "vacuous", f"no index bound p^n with n <= {max_n}")
    p, _ = _p_of(G)
    exps = _exponents(G, degrees)
    evidence = {"lemma1_n": bound, "exponents": {str(k): v for k, v in exps.items()}}
    above = [d for d, e in exps.items() if (p ** bound) % e]
    if above:
        evidence["above_bound"] = above
        return Verdict("lemma1", "partial", "exponent above p^n in finitely many computed degrees",
                       evidence)
    return Verdict("lemma1", "pass", f"all exponents divide p^{bound}", evidence)


def check_prop2(params: FamilyParams, degrees: Iterable[int],
                G: FiniteGroup | None = None) -> tuple[ExponentSummary, Verdict]:
    _require_normalized(params)
    if G is None:
        G = build_family_group(params)
    p = params.p
    eps = epsilon(params)
    m = extension_class_order(params, G)
    wit = prop2_witness_subgroups(params, G)
    l1 = lemma1_bound(G, max(DEFAULT_DEPTH, eps))
    exps = _exponents(G, degrees)
    first = next((d for d, e in sorted(exps.items()) if e == p ** eps), None)
    summary = ExponentSummary(params, eps, m, p ** params.gamma, l1, exps, first)
    evidence = {"epsilon": eps, "lemma1_n": l1, "witness_indices": list(wit.indices),
                "exponents": {str(k): v for k, v in exps.items()},
                "first_epsilon_degree": first}
    if l1 is None or l1 > eps or max(wit.indices) > p ** eps:
        return summary, Verdict("prop2", "fail", "index bound exceeds epsilon", evidence)
    low = p ** max(params.alpha, params.beta)
    missing = [d for d in _even_degrees(exps) if exps[d] < low]
    if missing:
        evidence["counter_witness"] = {"degree": missing[0], "exponent": exps[missing[0]]}
        return summary, Verdict("prop2", "fail", "even degree without classes of order p^alpha, p^beta",
                                evidence)
    above = [d for d, e in exps.items() if e > p ** eps]
    if above:
        evidence["above_epsilon"] = above
        return summary, Verdict("prop2", "partial",
                                "exponent above p^epsilon in the window (allowed only finitely often)",
                                evidence)
    if first is None:
        return summary, Verdict("prop2", "partial", "exponent p^epsilon not reached in the window",
                                evidence)
    return summary, Verdict("prop2", "pass", f"exponent p^epsilon first seen at degree {first}",
                            evidence)


def retraction_exists(G: FiniteGroup, C: Subgroup, Z: Subgroup) -> bool:
    """Is the central cyclic C a direct factor of Z?  Equivalent to a
    homomorphism Z -> C that is the identity on C; searched over images
    of a small generating set of Z."""
    n = C.order
    if n == 1:
        return True
    g = cyclic_generator(G, C)
    log = {G.power(g, k): k for k in range(n)}
    Zg, emb = subgroup_as_group(G, Z)
    back = {x: i for i, x in enumerate(emb)}
    gens = _small_generating_set(Zg)
    target = back[g]
    for images in itertools.product(range(n), repeat=len(gens)):
        phi = _extend_to_cyclic(Zg, gens, images, n)
        if phi is not None and phi[target] == 1:
            # phi is Z -> Z/n; composed with k -> g^k it is the identity on C
            if all(phi[back[x]] == log[x] for x in C.members):
                return True
    return False


def _extend_to_cyclic(G: FiniteGroup, gens: Sequence[int], images: Sequence[int], n: int):
    phi = [None] * G.order
    phi[0] = 0
    stack = [0]
    while stack:
        x = stack.pop()
        for s, v in zip(gens, images):
            y = G.mul[x][s]
            w = (phi[x] + v) % n
            if phi[y] is None:
                phi[y] = w
                stack.append(y)
            elif phi[y] != w:
                return None
    return phi


def check_cor1(G: FiniteGroup, C: Subgroup, degrees: Iterable[int]) -> Verdict:
    """An order-n class restricting to a generator forces C to be a direct
    factor of its centraliser."""
    if not is_cyclic_subgroup(G, C):
        raise ValueError("C is not cyclic")
    n = C.order
    Z = centralizer(G, C.members)
    split = retraction_exists(G, C, Z)
    per_degree = {}
    partial = False
    witness = None
    for d in _even_degrees(degrees):
        found = generator_restricting_classes(G, C, d)
        exact = [cls for cls, o in found.classes if o == n]
        partial |= found.partial
        per_degree[str(d)] = {"restricting": len(found.classes), "order_n": len(exact)}
        if exact and witness is None:
            witness = {"degree": d, "class": list(exact[0].coords)}
    evidence = {"n": n, "centralizer_order": Z.order, "direct_factor": split,
                "degrees": per_degree}
    if witness and not split:
        evidence["counter_witness"] = witness
        return Verdict("cor1", "fail", "order-n generator-restricting class but C is not a direct factor",
                       evidence)
    if witness:
        evidence["witness"] = witness
        return Verdict("cor1", "pass", "order-n class found and C is a direct factor", evidence)
    if partial:
        return Verdict("cor1", "partial", "enumeration capped in some degree", evidence)
    if split:
        return Verdict("cor1", "vacuous", "no order-n generator-restricting class in the window",
                       evidence)
    return Verdict("cor1", "pass", "C is not a direct factor and no order-n class restricts to a generator",
                   evidence)
