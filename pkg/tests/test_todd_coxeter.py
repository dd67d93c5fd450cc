import random

import pytest

from vhcert.fpgroups import Presentation, presentation_from_complex
from vhcert.permgroups import Permutation
from vhcert.todd_coxeter import (
    CosetTable,
    EnumerationExhausted,
    enumerate_cosets,
    normal_closure_index,
    normal_closure_table,
    parity_kernel_table,
    quotient_structure,
)


def pres(gen_names, *relator_strings):
    stub = Presentation.build(tuple(gen_names), [])
    return Presentation.build(
        tuple(gen_names), [stub.parse_word(s) for s in relator_strings]
    )


def brute_order(perm_strings, degree):
    """Order of the generated permutation group by plain closure (no BSGS)."""
    perms = [Permutation.parse(s, degree).images for s in perm_strings]
    ident = tuple(range(degree))
    seen = {ident}
    frontier = [ident]
    while frontier:
        fresh = []
        for p in frontier:
            for s in perms:
                q = tuple(s[i] for i in p)
                if q not in seen:
                    seen.add(q)
                    fresh.append(q)
        frontier = fresh
    return len(seen)


def assert_realizes(p: Presentation, perm_strings, degree):
    """The permutations must satisfy every relator of the presentation."""
    perms = [Permutation.parse(s, degree) for s in perm_strings]
    ident = Permutation(range(degree))
    for rel in p.relators:
        value = ident
        for g, e in rel:
            value = value * (perms[g] if e > 0 else perms[g].inverse())
        assert value == ident, f"relator {p.word_to_string(rel)} not satisfied"


# name, generators, relators, permutation realization, degree
GROUP_CORPUS = [
    ("C2", ["x"], ["x^2"], ["(1,2)"], 2),
    ("C6", ["x"], ["x^6"], ["(1,2,3,4,5,6)"], 6),
    ("V4", ["x", "y"], ["x^2", "y^2", "x*y*x*y"], ["(1,2)", "(3,4)"], 4),
    ("S3", ["x", "y"], ["x^3", "y^2", "x*y*x*y"], ["(1,2,3)", "(1,2)"], 3),
    ("D4", ["x", "y"], ["x^4", "y^2", "x*y*x*y"], ["(1,2,3,4)", "(2,4)"], 4),
    ("D5", ["x", "y"], ["x^5", "y^2", "x*y*x*y"], ["(1,2,3,4,5)", "(2,5)(3,4)"], 5),
    ("D6", ["x", "y"], ["x^6", "y^2", "x*y*x*y"],
     ["(1,2,3,4,5,6)", "(2,6)(3,5)"], 6),
    ("C3xC3", ["x", "y"], ["x^3", "y^3", "x*y*x^-1*y^-1"],
     ["(1,2,3)", "(4,5,6)"], 6),
    ("C2xC4", ["x", "y"], ["x^2", "y^4", "x*y*x^-1*y^-1"],
     ["(1,2)", "(3,4,5,6)"], 6),
    ("Q8", ["x", "y"], ["x^4", "x^2*y^-2", "y^-1*x*y*x"],
     ["(1,3,2,4)(5,8,6,7)", "(1,5,2,6)(3,7,4,8)"], 8),
    ("A4", ["x", "y"], ["x^3", "y^3", "x*y*x*y"], ["(1,2,3)", "(2,3,4)"], 4),
    ("S4", ["x", "y"], ["x^4", "y^2", "x*y*x*y*x*y"], ["(1,2,3,4)", "(1,2)"], 4),
]


@pytest.mark.parametrize("name,gens,rels,perms,degree",
                         GROUP_CORPUS, ids=[g[0] for g in GROUP_CORPUS])
def test_index_matches_brute_order(name, gens, rels, perms, degree):
    p = pres(gens, *rels)
    assert_realizes(p, perms, degree)
    expected = brute_order(perms, degree)
    assert expected <= 24
    for strategy in ("hlt", "felsch"):
        assert enumerate_cosets(p, strategy=strategy).index == expected


def test_index_two():
    assert enumerate_cosets(pres(["x"], "x^2")).index == 2


def test_klein_four():
    table = enumerate_cosets(pres(["x", "y"], "x^2", "y^2", "x*y*x*y"))
    assert table.index == 4
    q = quotient_structure(table)
    assert q.abelian
    assert q.invariants.torsion == (2, 2)


def test_closed_table_invariants(sigma):
    p = presentation_from_complex(sigma)
    table = parity_kernel_table(p)
    table.verify_closed()  # columns permute, relators trace, subgens fix 0
    live = table.live_cosets()
    assert live == [0, 1, 2, 3]


def test_subgroup_generators_restrict_enumeration():
    # index of <x> in S3 via explicit subgroup generators
    p = pres(["x", "y"], "x^3", "y^2", "x*y*x*y")
    table = enumerate_cosets(p, subgens=[p.parse_word("x")])
    assert table.index == 2


def test_normal_closure_sigma_word(sigma):
    p = presentation_from_complex(sigma)
    w = p.parse_word("a2*a1^-1*a3*a4^-1")
    table = normal_closure_table(p, w)
    assert table.index == 4
    q = quotient_structure(table)
    assert q.abelian
    assert q.invariants.torsion == (2, 2)


def test_normal_closure_of_empty_word_is_trivial_subgroup():
    assert normal_closure_index(pres(["x"], "x^3"), ()) == 3


def test_free_group_closure_exhausts():
    free2 = Presentation.build(("x", "y"), [])
    with pytest.raises(EnumerationExhausted):
        normal_closure_index(free2, ((0, 1),), cap=1000)


def test_exhaustion_is_resource_not_mathematical(sigma):
    # the same enumeration closes at a workable cap
    p = presentation_from_complex(sigma)
    w = p.parse_word("a2*a1^-1*a3*a4^-1")
    with pytest.raises(EnumerationExhausted):
        normal_closure_table(p, w, cap=50)
    assert normal_closure_table(p, w, cap=10**6).index == 4


def test_standardized_table_is_canonical():
    rng = random.Random(3)
    p = pres(["x", "y"], "x^3", "y^2", "x*y*x*y")
    reference = enumerate_cosets(p).table
    for _ in range(5):
        relators = list(p.relators)
        rng.shuffle(relators)
        shuffled = Presentation.build(p.generators, relators)
        assert enumerate_cosets(shuffled).table == reference


def test_hlt_and_felsch_agree(sigma):
    p = presentation_from_complex(sigma)
    w = p.parse_word("a2*a1^-1*a3*a4^-1")
    hlt = normal_closure_table(p, w, strategy="hlt")
    felsch = normal_closure_table(p, w, strategy="felsch")
    assert hlt.table == felsch.table


def test_quotient_cyclic_six():
    q = quotient_structure(enumerate_cosets(pres(["x"], "x^6")))
    assert q.order == 6
    assert q.abelian
    assert q.invariants.torsion == (6,)


def test_quotient_s3_nonabelian():
    q = quotient_structure(enumerate_cosets(pres(["x", "y"], "x^3", "y^2", "x*y*x*y")))
    assert q.order == 6
    assert not q.abelian
    assert q.invariants is None


def test_quotient_invariants_c2xc4():
    q = quotient_structure(
        enumerate_cosets(pres(["x", "y"], "x^2", "y^4", "x*y*x^-1*y^-1"))
    )
    assert q.abelian
    assert q.invariants.torsion == (2, 4)


def test_closure_index_equals_quotient_order(sigma):
    p = presentation_from_complex(sigma)
    w = p.parse_word("a2*a1^-1*a3*a4^-1")
    table = normal_closure_table(p, w)
    assert quotient_structure(table).order == table.index == 4


def test_parity_kernel_table_matches_enumerated_closure(sigma):
    p = presentation_from_complex(sigma)
    w = p.parse_word("a2*a1^-1*a3*a4^-1")
    assert parity_kernel_table(p).table == normal_closure_table(p, w).table


def test_table_dump_formats(sigma):
    p = presentation_from_complex(sigma)
    table = parity_kernel_table(p)
    tsv = table.to_tsv()
    lines = tsv.strip().split("\n")
    assert lines[0].split("\t")[1:3] == ["a1", "a1^-1"]
    assert len(lines) == 5  # header + 4 cosets
    summary = table.summary()
    assert summary["index"] == 4
    assert set(summary) == {"index", "strategy", "max_live", "total_defined"}


def test_cap_must_be_positive(sigma):
    p = presentation_from_complex(sigma)
    with pytest.raises(ValueError):
        CosetTable(p, cap=0)
