import itertools

import pytest

from cohomex.errors import InvariantViolation
from cohomex.exponents import (
    Verdict,
    check_cor1,
    check_cor4,
    check_lemma1,
    check_prop1,
    check_prop2,
    check_transfer_bound,
    core_intersections,
    epsilon,
    extension_class_order,
    lemma1_bound,
    prop2_witness_subgroups,
    retraction_exists,
)
from cohomex.groups import (
    build_family_group,
    center,
    centralizer,
    cyclic_group,
    direct_product,
    elementary_abelian,
    family_group,
    generated_subgroup,
    minimal_splitting_subgroup,
    normalize_params,
    parse_descriptor,
    whole,
)


def D8():
    return family_group(2, 1, 1, 1, 0)


def C_of(G):
    return generated_subgroup(G, [G.generator("c")])


def grid(primes=(2, 3), bound=2):
    seen = set()
    for p in primes:
        for a, b, g in itertools.product(range(1, bound + 1), repeat=3):
            for d in range(g + 1):
                P = normalize_params(p, a, b, g, d)
                if P not in seen:
                    seen.add(P)
                    yield P


def test_epsilon_examples():
    assert epsilon(normalize_params(2, 1, 1, 1, 0)) == 2
    assert epsilon(normalize_params(2, 1, 1, 2, 1)) == 3
    assert epsilon(normalize_params(2, 3, 1, 1, 1)) == 3


@pytest.mark.parametrize("raw, m", [((2, 1, 1, 1, 1), 1), ((2, 1, 1, 1, 0), 2), ((2, 1, 1, 2, 1), 2)])
def test_extension_class_order_examples(raw, m):
    assert extension_class_order(normalize_params(*raw)) == m


def test_extension_class_order_grid():
    for P in grid(bound=2):
        if P.order > 256:
            continue
        G = build_family_group(P)
        _, d = minimal_splitting_subgroup(G, C_of(G))
        assert extension_class_order(P, G) == d == P.p ** (P.gamma - P.delta)


def test_lemma1_examples():
    for p, k in [(2, 2), (2, 3), (3, 2)]:
        assert lemma1_bound(elementary_abelian(p, k)) == 1
    for k in (1, 2, 3):
        assert lemma1_bound(cyclic_group(2 ** k)) == k
    assert lemma1_bound(D8()) == 2
    assert lemma1_bound(family_group(2, 1, 1, 2, 1)) == 3
    assert lemma1_bound(cyclic_group(16), max_n=3) is None


@pytest.mark.parametrize("G", [D8(), family_group(2, 1, 1, 2, 1), cyclic_group(8),
                               direct_product(cyclic_group(2), cyclic_group(4))],
                         ids=lambda G: G.descriptor)
def test_core_intersections_decrease(G):
    chain = core_intersections(G, 3)
    for big, small in zip(chain, chain[1:]):
        assert small.member_set <= big.member_set


def test_witness_subgroups_grid():
    for P in grid(bound=2):
        if P.order > 256:
            continue
        G = build_family_group(P)
        w = prop2_witness_subgroups(P, G)
        assert w.intersection_trivial
        p = P.p
        assert w.index_multiset == sorted([p ** P.alpha, p ** P.beta, p ** (2 * P.gamma - P.delta)])
        assert lemma1_bound(G, max(3, epsilon(P))) <= epsilon(P)


def test_witnesses_without_table_agree():
    from cohomex.exponents import _witnesses_on_normal_forms
    for P in grid(bound=2):
        if P.order <= 256:
            G = build_family_group(P)
            assert _witnesses_on_normal_forms(P).indices == prop2_witness_subgroups(P, G).indices


def test_witness_examples():
    assert prop2_witness_subgroups(normalize_params(2, 1, 1, 1, 0)).index_multiset == [2, 2, 4]
    assert prop2_witness_subgroups(normalize_params(2, 1, 1, 2, 1)).index_multiset == [2, 2, 8]
    assert prop2_witness_subgroups(normalize_params(2, 1, 1, 1, 1)).index_multiset == [2, 2, 2]


def test_verdict_validation():
    with pytest.raises(ValueError):
        Verdict("prop9", "pass")
    with pytest.raises(ValueError):
        Verdict("prop1", "maybe")


def test_prop1_examples():
    Z4 = cyclic_group(4)
    v = check_prop1(Z4, whole(Z4), [2])
    assert v.status == "pass" and v.evidence["degrees"]["2"]["orders"] == [4]
    v = check_prop1(D8(), C_of(D8()), [2])
    assert v.status == "vacuous"
    v = check_prop1(D8(), C_of(D8()), [4])
    assert v.status == "pass" and v.evidence["degrees"]["4"]["orders"] == [4]


@pytest.mark.parametrize("desc", ["family:p=2,a=1,b=1,g=1,d=0", "family:p=2,a=1,b=1,g=2,d=1",
                                  "family:p=2,a=2,b=1,g=1,d=0", "family:p=3,a=1,b=1,g=1,d=0",
                                  "product:(cyclic:2)x(cyclic:4)", "cyclic:8"])
def test_prop1_never_fails(desc):
    G = parse_descriptor(desc)
    C = C_of(G) if desc.startswith("family") else generated_subgroup(G, [G.generators[-1][1]])
    assert check_prop1(G, C, range(0, 5)).status != "fail"


def test_cor4_examples():
    v = check_cor4(elementary_abelian(2, 3), 5)
    assert v.status == "pass" and set(v.evidence["exponents"].values()) == {1, 2}
    v = check_cor4(cyclic_group(4), 2)
    assert v.status == "pass" and v.evidence["first_degree"] == 2
    v = check_cor4(D8(), 6)
    assert v.status == "pass" and v.evidence["first_degree"] <= 6
    assert check_cor4(D8(), 3).status == "partial"


def test_transfer_examples():
    assert check_transfer_bound(2, 1, range(1, 7)).status == "pass"
    v = check_transfer_bound(2, 2, range(1, 7))
    assert v.status == "pass" and max(v.evidence["exponents"].values()) == 4
    assert check_transfer_bound(3, 1, range(1, 7)).status == "pass"


def test_prop2_examples():
    s, v = check_prop2(normalize_params(2, 1, 1, 1, 0), range(7))
    assert s.epsilon == 2 and v.status == "pass"
    assert max(s.exponents.values()) == 4 and s.mn == 4
    s, v = check_prop2(normalize_params(2, 1, 1, 1, 1), range(6))
    assert s.epsilon == 1 and set(s.exponents.values()) - {1} == {2}
    s, v = check_prop2(normalize_params(2, 2, 1, 1, 1), range(5))
    assert all(s.exponents[d] % 4 == 0 for d in (2, 4))
    assert v.status == "pass"


def test_lemma1_check():
    assert check_lemma1(D8(), range(1, 7)).status == "pass"
    assert check_lemma1(cyclic_group(16), range(1, 3), max_n=2).status == "vacuous"


def test_cor1_examples():
    V = elementary_abelian(2, 2)
    C = generated_subgroup(V, [V.generators[0][1]])
    v = check_cor1(V, C, [2])
    assert v.status == "pass" and v.evidence["direct_factor"] and "witness" in v.evidence
    Z4 = cyclic_group(4)
    v = check_cor1(Z4, generated_subgroup(Z4, [2]), [2, 4])
    assert v.status == "pass" and not v.evidence["direct_factor"]
    assert v.evidence["degrees"]["2"]["restricting"] > 0
    assert v.evidence["degrees"]["2"]["order_n"] == 0
    v = check_cor1(D8(), center(D8()), range(7))
    assert v.status == "pass" and not v.evidence["direct_factor"]


def test_direct_factor_decision():
    G = direct_product(cyclic_group(2), cyclic_group(4))
    a, b = (g for _, g in G.generators)
    Z = whole(G)
    assert retraction_exists(G, generated_subgroup(G, [a]), Z)
    assert retraction_exists(G, generated_subgroup(G, [b]), Z)
    assert not retraction_exists(G, generated_subgroup(G, [G.power(b, 2)]), Z)
    # the diagonal of order 2 inside Z/2 x Z/4 is a direct factor
    assert retraction_exists(G, generated_subgroup(G, [G.mul[a][G.power(b, 2)]]), Z)
    D = D8()
    assert not retraction_exists(D, center(D), centralizer(D, center(D).members))
