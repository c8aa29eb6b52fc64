# Copyright 2026 Canonical Ltd.
# See LICENSE file for licensing details.

import json

import pytest

import qstruct
import rea
import ring
from rea import Generator, NCPoly
from tests.unit.helpers import assert_passed

L11, L12, L21, L22 = (NCPoly.generator(g) for g in rea.generators(2))


@pytest.fixture(scope="module")
def system2():
    relations = rea.derive_relations(qstruct.build_rhat(2))
    return rea.build_rewrite_system(relations, 2)


def test_generators():
    """
    arrange: none.
    act: list the generators for N=2 and parse their names.
    assert: they are row-major and names round-trip.
    """
    assert [str(g) for g in rea.generators(2)] == ["l_1_1", "l_1_2", "l_2_1", "l_2_2"]
    assert Generator.parse("l_2_1") == Generator(2, 1)
    with pytest.raises(ValueError):
        Generator.parse("m_1_1")


def test_ncpoly_is_noncommutative():
    """
    arrange: two generators.
    act: multiply in both orders.
    assert: the products differ while scalars commute.
    """
    assert L11 * L12 != L12 * L11
    assert ring.Q * L11 == L11 * ring.Q
    assert (L11 * L12).degree == 2
    assert L11 - L11 == 0
    assert 2 + NCPoly() == 2


def test_ncpoly_text_form():
    """
    arrange: a polynomial with a rational coefficient and a constant term.
    act: render and parse.
    assert: terms appear in degree-lex order and parsing inverts rendering.
    """
    p = L12 * L11 * ring.RatFunc(1, ring.Q + 1) + 3
    text = str(p)
    assert text == "[3*q^0] + [(1*q^0)/(1*q^0 + 1*q^1)]*l_1_2*l_1_1"
    assert NCPoly.parse(text) == p
    assert str(NCPoly()) == "0"
    with pytest.raises(ValueError):
        NCPoly.parse("l_1_1")


def test_generator_matrix():
    """
    arrange: none.
    act: build L and L² without normal form.
    assert: word order follows matrix multiplication.
    """
    l = rea.generator_matrix(2)
    square = rea.nc_mat_pow(l, 2)
    assert square.entry((1,), (1,)) == L11 * L11 + L12 * L21
    assert rea.nc_mat_pow(l, 0).entry((2,), (2,)) == 1


def test_relations_rank(system2):
    """
    arrange: derive the relations for N=2.
    act: compute their rank and the rewrite system.
    assert: rank N²(N²-1)/2 with one rule per inversion.
    """
    relations = rea.derive_relations(qstruct.build_rhat(2))
    assert rea.relation_rank(relations) == 6
    assert system2.rule_count == 6
    assert all(a > b for a, b in system2.rules)


def test_rule_tails_are_sorted_quadratics(system2):
    """
    arrange: the rewrite system for N=2.
    act: inspect every tail.
    assert: tails are homogeneous of degree 2 and contain only sorted words.
    """
    for tail in system2.rules.values():
        assert all(len(w) == 2 and rea.is_sorted(w) for w in tail.terms)


def test_relations_collapse_to_commutators_at_q_one(system2):
    """
    arrange: the rewrite system for N=2.
    act: evaluate every rule at q = 1 where it is regular.
    assert: each rule reduces to g_a g_b -> g_b g_a.
    """
    for (a, b), tail in system2.rules.items():
        values = {w: ring.eval_at(c, 1) for w, c in tail.terms.items()}
        assert {w: v for w, v in values.items() if v} == {(b, a): 1}


def test_n1_has_no_relations():
    """
    arrange: build R̂ for N=1.
    act: derive the relations and the rewrite system.
    assert: the algebra is the free commutative algebra on one generator.
    """
    relations = rea.derive_relations(qstruct.build_rhat(1))
    system = rea.build_rewrite_system(relations, 1)
    assert relations == []
    assert system.rule_count == 0
    l = NCPoly.generator(Generator(1, 1))
    assert system.normal_form(l * l) == l * l


def test_normal_form(system2):
    """
    arrange: the rewrite system for N=2.
    act: reduce an inversion and a sorted word.
    assert: the inversion becomes its rule tail; sorted words are untouched.
    """
    assert system2.normal_form(L22 * L11) == system2.rules[(Generator(2, 2), Generator(1, 1))]
    assert system2.normal_form(L11 * L22) == L11 * L22
    assert system2.normal_form(ring.Q) == ring.Q


def test_normal_form_is_idempotent(system2):
    """
    arrange: the rewrite system for N=2 and polynomials with unsorted words.
    act: reduce each polynomial twice.
    assert: the second reduction changes nothing.
    """
    for p in (L22 * L11, L21 * L12 * L11, ring.Q * L22 * L21 + L12 * L11 * L22 + 3):
        once = system2.normal_form(p)
        assert system2.normal_form(once) == once


def test_relations_reduce_to_zero(system2):
    """
    arrange: the relations for N=2 and the rewrite system built from them.
    act: reduce each relation, alone and multiplied by a generator on either side.
    assert: every normal form vanishes.
    """
    relations = rea.derive_relations(qstruct.build_rhat(2))
    factors = [NCPoly.one(), L11, L12, L21, L22]
    for r in relations:
        for left in factors:
            for right in factors:
                assert not system2.normal_form(left * r * right), f"{left} * ({r}) * {right}"


def test_normal_form_strategies_agree(system2):
    """
    arrange: the rewrite system for N=2.
    act: reduce a cubic word with both strategies.
    assert: the results match.
    """
    word = L22 * L21 * L11
    assert system2.normal_form(word) == system2.normal_form(word, rightmost=True)


def test_check_confluence(system2):
    """
    arrange: the rewrite system for N=2.
    act: check confluence exhaustively on cubic words.
    assert: the certificate passes and records an exhaustive word set.
    """
    cert = rea.check_confluence(system2)
    assert_passed(cert)
    assert cert.claim == "confluence-d3-n2"
    assert cert.parameters["exhaustive"] is True
    assert cert.parameters["words"] == 64
    with pytest.raises(ValueError):
        rea.check_confluence(system2, degree=2)


def test_confluence_words_sampling():
    """
    arrange: none.
    act: request degree-4 words for N=2 and N=3.
    assert: small sets are exhaustive; large sets are seeded samples.
    """
    words, exhaustive = rea.confluence_words(2, 4)
    assert exhaustive
    assert len(words) == 256
    sample, exhaustive = rea.confluence_words(3, 4, seed=7)
    assert not exhaustive
    assert len(sample) == 512
    assert sample == rea.confluence_words(3, 4, seed=7)[0]


def test_is_central(system2):
    """
    arrange: the rewrite system for N=2.
    act: test a scalar and a product that fails to commute.
    assert: scalars are central; the report names a generator otherwise.
    """
    assert rea.is_central(NCPoly.scalar(ring.Q), system2)
    report = rea.is_central(L12, system2)
    assert not report
    assert report.generator is not None


def test_rules_dump(system2):
    """
    arrange: the rewrite system for N=2.
    act: dump the rules as JSON.
    assert: one entry per inversion, each with a two-letter left-hand side.
    """
    rules = json.loads(system2.dump_json())
    assert len(rules) == 6
    assert all(len(rule["lhs"]) == 2 for rule in rules)
    assert rules[0]["lhs"] == ["l_1_2", "l_1_1"]
