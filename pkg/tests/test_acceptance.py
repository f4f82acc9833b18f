"""Acceptance suite, one test per criterion.

Each test is named ``test_criterion_NN_<topic>``; conftest prints a
PASS/FAIL line per criterion at the end of the run.
"""

import json
import random

import pytest

from cohomex.cache import ResultCache
from cohomex.cli import census_grid, main, run_census
from cohomex.cohomology import (
    INTEGRAL,
    bockstein,
    cohomology,
    cyclic_oracle,
    kunneth_oracle,
    modular,
    span_of,
)
from cohomex.exponents import (
    check_cor4,
    check_prop1,
    check_prop2,
    check_transfer_bound,
    epsilon,
    extension_class_order,
    lemma1_bound,
    prop2_witness_subgroups,
)
from cohomex.groups import (
    build_family_group,
    cyclic_group,
    elementary_abelian,
    family_group,
    generated_subgroup,
    minimal_splitting_subgroup,
    normalize_params,
    parse_descriptor,
)
from cohomex.intlinalg import AbelianGroupInvariants as Inv
from cohomex.intlinalg import SparseIntMatrix, p_part, smith_normal_form, snf_local
from cohomex.report import CohomologyReport, canonical_json
from oracles import dense_snf

CRITERION_GRID = census_grid([2, 3], 2)


def _family_grid():
    # the p=3, alpha=beta=gamma=2 cells have order 729, above the default table limit
    for P in CRITERION_GRID:
        yield P, build_family_group(P, max_order=P.order)


def test_criterion_01_cyclic_closed_form():
    for n in (2, 3, 4, 5, 6, 8):
        G = cyclic_group(n)
        for d in range(7):
            want = Inv(1, ()) if d == 0 else (Inv(0, (n,)) if d % 2 == 0 else Inv())
            assert cohomology(G, INTEGRAL, d) == want
            assert cohomology(G, modular(n), d) == Inv(0, (n,))
            assert want == cyclic_oracle(n, INTEGRAL, d)


@pytest.mark.parametrize("orders", [(2, 2), (2, 2, 2), (2, 4), (3, 3)])
def test_criterion_02_kunneth(orders):
    G = parse_descriptor("product:" + "x".join(f"(cyclic:{n})" for n in orders))
    for d in range(6):
        assert cohomology(G, INTEGRAL, d) == kunneth_oracle(list(orders), d)


def test_criterion_03_bockstein():
    for n in (2, 3, 4):
        G = cyclic_group(n)
        for i in range(3):
            beta = bockstein(G, n, 2 * i + 1)
            assert beta.source.orders == (n,) and beta.target.orders == (n,)
            (img,) = beta.image_generators()
            assert beta.target.class_order(img) == n
    for G in (cyclic_group(4), family_group(2, 1, 1, 1, 0)):
        for d in range(6):
            beta = bockstein(G, 2, d)
            image = span_of(beta.image_generators(), beta.target.orders)
            torsion = {c for c in beta.target.classes() if 2 % beta.target.class_order(c) == 0}
            assert image == torsion


def test_criterion_04_prop1_divisibility():
    for raw, degrees, mn in (((2, 1, 1, 1, 0), range(0, 7), 4), ((2, 1, 1, 2, 1), range(0, 5), 8)):
        G = family_group(*raw)
        C = generated_subgroup(G, [G.generator("c")])
        v = check_prop1(G, C, degrees)
        assert v.evidence["mn"] == mn
        assert v.status in ("pass", "vacuous")
        for d, entry in v.evidence["degrees"].items():
            assert entry["status"] in ("pass", "vacuous")
            assert all(o % mn == 0 for o in entry["orders"])
        assert v.status == "pass"


def test_criterion_05_prop2_epsilon_two():
    P = normalize_params(2, 1, 1, 1, 0)
    summary, v = check_prop2(P, range(0, 7))
    assert summary.epsilon == 2 and summary.lemma1_n == 2
    assert any(e == 4 for e in summary.exponents.values())
    assert max(summary.exponents.values()) <= 4
    assert v.status == "pass"


def test_criterion_06_lemma1_and_witnesses():
    for p, k in ((2, 2), (2, 3), (3, 2)):
        assert lemma1_bound(elementary_abelian(p, k)) == 1
    for p in (2, 3):
        for k in (1, 2, 3):
            assert lemma1_bound(cyclic_group(p ** k)) == k
    assert lemma1_bound(family_group(2, 1, 1, 1, 0)) == 2
    G = family_group(2, 1, 1, 2, 1)
    assert lemma1_bound(G) == 3 == epsilon(normalize_params(2, 1, 1, 2, 1))
    for P, G in _family_grid():
        want = sorted([P.p ** P.alpha, P.p ** P.beta, P.p ** (2 * P.gamma - P.delta)])
        for w in (prop2_witness_subgroups(P, G), prop2_witness_subgroups(P)):
            assert w.index_multiset == want
            assert w.intersection_trivial


def test_criterion_07_extension_class_order():
    for P, G in _family_grid():
        _, d = minimal_splitting_subgroup(G, generated_subgroup(G, [G.generator("c")]))
        assert P.p ** (P.gamma - P.delta) == d == extension_class_order(P, G)


def test_criterion_08_cor4_forward():
    for G, top in ((elementary_abelian(2, 2), 5), (elementary_abelian(2, 3), 5), (elementary_abelian(3, 2), 4)):
        v = check_cor4(G, top)
        assert v.status == "pass"
        p = v.evidence["p"]
        exps = {int(d): e for d, e in v.evidence["exponents"].items()}
        # H^1(G; Z) = Hom(G, Z) vanishes for every finite group
        assert exps[1] == 1 and cohomology(G, INTEGRAL, 1) == Inv()
        assert all(exps[d] == p for d in range(2, top + 1))


def test_criterion_09_transfer_bound():
    v = check_transfer_bound(2, 2, range(1, 7))
    assert v.status == "pass"
    assert all(4 % e == 0 for e in v.evidence["exponents"].values())


def _unimodular(res, n, m):
    return (res.U @ res.U_inv) == SparseIntMatrix.identity(n) and (res.V @ res.V_inv) == SparseIntMatrix.identity(m)


def test_criterion_10_snf_suite():
    rng = random.Random(1000)
    for _ in range(1000):
        rows, cols = rng.randint(1, 50), rng.randint(1, 50)
        density = rng.choice([0.05, 0.1, 0.2, 0.4])
        dense = [[rng.randint(-5, 5) if rng.random() < density else 0 for _ in range(cols)]
                 for _ in range(rows)]
        A = SparseIntMatrix.from_dense(dense)
        res = smith_normal_form(A, want_transforms=True)
        f = list(res.factors)
        assert all(b % a == 0 for a, b in zip(f, f[1:]))
        assert (res.U @ A @ res.V) == res.diagonal_matrix()
        assert _unimodular(res, rows, cols)
        pr = rng.sample(range(rows), rows)
        pc = rng.sample(range(cols), cols)
        shuffled = SparseIntMatrix.from_dense([[dense[i][j] for j in pc] for i in pr])
        assert list(smith_normal_form(shuffled).factors) == f
        assert dense_snf(dense) == f
        p = rng.choice([2, 3, 5])
        assert snf_local(A, p, 60, rank=len(f)) == tuple(sorted(p_part(d, p) for d in f))


def _cli_json(capsys, argv):
    assert main(argv) == 0
    return json.loads(capsys.readouterr().out)


def test_criterion_11_determinism_and_cache(tmp_path, capsys):
    cache_dir = tmp_path / "cache"
    for n in (2, 3, 4, 5, 6, 8):
        for coeffs in ("int", f"mod:{n}"):
            argv = ["cohomology", f"cyclic:{n}", "--degrees", "0..6", "--coeffs", coeffs,
                    "--cache-dir", str(cache_dir)]
            cold = _cli_json(capsys, argv)
            warm = _cli_json(capsys, argv)
            assert warm["timing"]["cache_hits"] == 7
            assert canonical_json(CohomologyReport.from_json(cold)) == \
                canonical_json(CohomologyReport.from_json(warm))

    census_dir = tmp_path / "census"
    par = run_census([2, 3], 2, range(0, 4), 2 * 10 ** 7, census_dir, workers=4)
    again = run_census([2, 3], 2, range(0, 4), 2 * 10 ** 7, census_dir, workers=4)
    fresh = run_census([2, 3], 2, range(0, 4), 2 * 10 ** 7, None, workers=1)
    assert canonical_json(par) == canonical_json(again) == canonical_json(fresh)
    cache = ResultCache(census_dir)
    entries = list(census_dir.glob("*.json"))
    assert entries and not list(census_dir.glob(".tmp-*"))
    for path in entries:
        key = json.loads(path.read_text())["key"]
        assert cache.get(key["descriptor"], key["coefficients"], key["degree"]) is not None
    assert cache.misses == 0
