import random

import pytest

from ppm import modmat
from ppm.errors import CapExceeded
from ppm.oracle import enumerate_group, full_gl_generators, is_subgroup, \
    lagrange_consistent, power_surjective, unit_group_generators, validate_f1
from ppm.qpcore import PContext
from ppm.steinitz import general_linear_order

CTX2, CTX3, CTX5 = PContext(2), PContext(3), PContext(5)

SWAP = ((0, 1), (1, 0))
SHEAR = ((1, 1), (0, 1))


def test_enumerate_gl2_f2():
    table = enumerate_group([SWAP, SHEAR], CTX2, 1)
    assert table.order == 6
    assert table.order == general_linear_order(2, 2)


def test_enumerate_trivial():
    table = enumerate_group([modmat.identity_mat(2)], CTX5, 1)
    assert table.order == 1


def test_enumerate_cyclic_units_mod_9():
    table = enumerate_group([((2,),)], CTX3, 2)
    assert table.order == 6
    assert {m[0][0] for m in table.elements} == {1, 2, 4, 8, 7, 5}


def test_enumeration_cap():
    with pytest.raises(CapExceeded):
        enumerate_group(full_gl_generators(2, 3, 2), CTX3, 2, cap=100)


def test_power_surjective_examples():
    table = enumerate_group([SWAP, SHEAR], CTX2, 1)
    assert power_surjective(table, 5).surjective
    img = power_surjective(table, 3)
    assert not img.surjective and img.image_size == 4  # cubes kill the 3-cycles
    assert power_surjective(table, 1).surjective


def test_validate_f1_examples():
    units9 = enumerate_group([((2,),)], CTX3, 2)
    ok5 = validate_f1(units9, 5)
    assert ok5.agree and ok5.surjective
    ok2 = validate_f1(units9, 2)
    assert ok2.agree and not ok2.surjective
    trivial = enumerate_group([((1,),)], CTX3, 1)
    assert validate_f1(trivial, 12).agree


def test_validate_f1_on_random_small_groups():
    rng = random.Random(99)
    for p, ctx in ((2, CTX2), (3, CTX3), (5, CTX5)):
        for _ in range(6):
            n = rng.choice([1, 2])
            m = rng.choice([1, 2])
            mod = p ** m
            gens = []
            while len(gens) < 2:
                cand = tuple(tuple(rng.randrange(mod) for _ in range(n)) for _ in range(n))
                if modmat.invertible_mod(cand, p):
                    gens.append(cand)
            try:
                table = enumerate_group(gens, ctx, m, cap=10 ** 5)
            except CapExceeded:
                continue  # GL(2, Z/25) itself is past the cap; the law needs a table
            for k in (2, 3, 5, 7, 12):
                assert validate_f1(table, k).agree


def test_full_gl_generators_hit_the_whole_group():
    assert enumerate_group(full_gl_generators(2, 2, 2), CTX2, 2).order == 96
    assert enumerate_group(full_gl_generators(2, 3, 1), CTX3, 1).order == 48
    assert enumerate_group(full_gl_generators(2, 3, 2), CTX3, 2).order == 3888
    assert enumerate_group(unit_group_generators(5, 3), CTX5, 3).order == 100
    assert enumerate_group(unit_group_generators(2, 3), CTX2, 3).order == 4


def test_lagrange_law_on_enumerated_pair():
    big = enumerate_group(full_gl_generators(2, 3, 2), CTX3, 2)
    # principal congruence subgroup 1 + 3M inside GL(2, Z/9)
    congr_gens = []
    for i in range(2):
        for j in range(2):
            g = [[1 if a == b else 0 for b in range(2)] for a in range(2)]
            g[i][j] += 3
            congr_gens.append(tuple(tuple(r) for r in g))
    small = enumerate_group(congr_gens, CTX3, 2)
    assert small.order == 81
    assert is_subgroup(small, big)
    assert lagrange_consistent(big, small)
    assert big.order == (big.order // small.order) * small.order


def test_surjectivity_passes_to_enumerated_subgroups():
    big = enumerate_group(full_gl_generators(2, 3, 1), CTX3, 1)
    sub_gens = [((2, 0), (0, 1)), ((1, 1), (0, 1))]
    small = enumerate_group(sub_gens, CTX3, 1)
    assert is_subgroup(small, big)
    for k in range(1, 20):
        if power_surjective(big, k).surjective:
            assert power_surjective(small, k).surjective


def test_reduction_compatibility():
    table2 = enumerate_group(full_gl_generators(2, 2, 2), CTX2, 2)
    table1 = enumerate_group(full_gl_generators(2, 2, 1), CTX2, 1)
    reduced = {tuple(tuple(x % 2 for x in row) for row in m) for m in table2.elements}
    assert reduced == set(table1.elements)


def test_table_membership():
    table = enumerate_group([((2,),)], CTX3, 2)
    assert ((4,),) in table
    assert ((13,),) in table  # reduced mod 9 first
    assert ((3,),) not in table
