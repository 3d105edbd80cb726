import itertools

import pytest

from pierce_lab.dinterval import DIntervalFamily, dinterval_nu, dinterval_tau, kaiser_check, triangle_2interval
from pierce_lab.errors import InvalidParameters
from pierce_lab.generators import gen_dinterval
from pierce_lab.serialize import dinterval_from_dict, dinterval_to_dict
from pierce_lab.solver import oracle_max_packing, oracle_min_hitting_set


def test_single_member():
    fam = DIntervalFamily(2, (3, 3), (((0, 2), None),))
    assert dinterval_tau(fam).value == 1


def test_two_members_sharing_a_point():
    fam = DIntervalFamily(2, (3, 3), (((0, 1), None), ((1, 2), (0, 0))))
    assert dinterval_tau(fam).value == 1


def test_triangle_family():
    fam = triangle_2interval()
    ss = fam.set_system()
    # pairwise intersecting, no common element
    assert all(ss.sets[i] & ss.sets[j] for i, j in itertools.combinations(range(3), 2))
    assert not frozenset.intersection(*ss.sets)
    assert dinterval_tau(fam).value == oracle_min_hitting_set(ss).value == 2
    assert dinterval_nu(fam).value == 1


def test_packing_extremes():
    disjoint = DIntervalFamily(2, (4, 4), (((0, 0), None), ((1, 2), None), (None, (3, 3))))
    assert dinterval_nu(disjoint).value == 3
    shared = DIntervalFamily(3, (2, 2, 2), (((0, 1), None, None), ((1, 1), (0, 0), None), ((0, 1), None, (1, 1))))
    assert dinterval_nu(shared).value == 1


@pytest.mark.parametrize("seed", range(40))
def test_random_family_against_exhaustive_packing(seed):
    fam = gen_dinterval(seed, 2 + seed % 3, 1 + seed % 15, 6)
    ss = fam.set_system()
    assert dinterval_nu(fam).value == oracle_max_packing(ss).value
    if ss.universe_size <= 20:
        assert dinterval_tau(fam).value == oracle_min_hitting_set(ss).value


def test_transversal_bound_single_member_d4():
    fam = DIntervalFamily(4, (1, 1, 1, 1), (((0, 0), None, None, None),))
    rep = kaiser_check(fam)
    assert (rep.tau, rep.nu, rep.bound, rep.passed) == (1, 1, 12, True)


def test_transversal_bound_triangle_is_tight():
    rep = kaiser_check(triangle_2interval())
    assert (rep.tau, rep.nu, rep.bound, rep.passed) == (2, 1, 2, True)


def test_transversal_bound_requires_d_at_least_two():
    with pytest.raises(InvalidParameters):
        kaiser_check(DIntervalFamily(1, (2,), (((0, 1),),)))


@pytest.mark.parametrize(
    "d, sizes, members",
    [
        (2, (2,), ()),
        (2, (2, 2), (((0, 0),),)),
        (2, (2, 2), ((None, None),)),
        (2, (2, 2), (((0, 2), None),)),
        (2, (2, 2), (((1, 0), None),)),
    ],
)
def test_validation(d, sizes, members):
    with pytest.raises(InvalidParameters):
        DIntervalFamily(d, sizes, members)


def test_locate_inverts_element():
    fam = gen_dinterval(5, 3, 4, 7)
    for line, n in enumerate(fam.line_sizes):
        for k in range(n):
            assert fam.locate(fam.element(line, k)) == (line, k)


def test_round_trip():
    fam = gen_dinterval(9, 4, 6, 9)
    assert dinterval_from_dict(dinterval_to_dict(fam)) == fam
