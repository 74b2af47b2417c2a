"""Tests for the brute-force map enumeration oracle."""
from fractions import Fraction

import pytest

from isingmaps.errors import EnumerationBound
from isingmaps.exactalg import ParamPoly
from isingmaps.mapcount import (
    DartMap,
    all_pairings,
    bruteforce_Z,
    canonical_sigma,
    genus_check,
    survey,
)
from isingmaps.series import IsingParams, solve_Z


class TestDartMap:
    def test_sigma_cycle_structure(self):
        sigma = canonical_sigma(2)
        assert sigma[1:5] == [2, 3, 4, 1]
        assert sigma[5:9] == [6, 7, 8, 5]

    def test_one_vertex_hand_cases(self):
        # pairing (1 2)(3 4): two nested loops, sphere
        m = DartMap(n=1, alpha=(0, 2, 1, 4, 3))
        assert m.face_count() == 3
        assert genus_check(m)
        # pairing (1 3)(2 4): crossing loops, torus
        m = DartMap(n=1, alpha=(0, 3, 4, 1, 2))
        assert m.face_count() == 1
        assert m.genus() == 1
        assert not genus_check(m)
        # pairing (1 4)(2 3)
        m = DartMap(n=1, alpha=(0, 4, 3, 2, 1))
        assert m.face_count() == 3
        assert genus_check(m)

    def test_rejects_bad_involutions(self):
        with pytest.raises(ValueError):
            DartMap(n=1, alpha=(0, 1, 2, 4, 3))  # fixed point at 1
        with pytest.raises(ValueError):
            DartMap(n=1, alpha=(0, 2, 3, 1, 4))  # not an involution

    def test_disconnected_detected(self):
        # two vertices, each pairing its own darts: 2-component map
        m = DartMap(n=2, alpha=(0, 2, 1, 4, 3, 6, 5, 8, 7))
        assert not m.is_connected()
        assert not genus_check(m)


class TestEnumeration:
    def test_survey_one_vertex(self):
        s = survey(1)
        assert s.total_matchings == 3
        assert s.connected_matchings == 3
        assert s.planar_matchings == 2
        assert s.rooted_map_count == 2
        nu, c = ParamPoly.nu(), ParamPoly.c()
        assert s.partition_polynomial == 2 * nu ** 2 * c

    def test_rooted_map_counts(self):
        assert survey(2).rooted_map_count == 9
        assert survey(3).rooted_map_count == 54

    def test_total_matchings_double_factorial(self):
        assert survey(2).total_matchings == 7 * 5 * 3 * 1
        assert survey(3).total_matchings == 11 * 9 * 7 * 5 * 3 * 1

    def test_connected_matchings_two_vertices(self):
        # disconnected pairings keep each vertex's four darts internal: 3 x 3
        assert survey(2).connected_matchings == 105 - 9

    @pytest.mark.parametrize("n", [1, 2, 3])
    def test_oracle_equals_series(self, n):
        z_series = solve_Z(IsingParams(nu=2, c=1), 3)
        assert bruteforce_Z(n) == z_series.coefficient(n)

    @pytest.mark.parametrize("n", [1, 2, 3])
    def test_spinless_specialization(self, n):
        s = survey(n)
        value = s.partition_polynomial.evaluate(Fraction(1), Fraction(1))
        assert value == 2 ** (n - 1) * s.rooted_map_count

    def test_enumeration_bound(self):
        with pytest.raises(EnumerationBound):
            bruteforce_Z(5)
        with pytest.raises(EnumerationBound):
            bruteforce_Z(0)


class TestStructuralInvariants:
    def test_edge_count_and_genus_range(self):
        for m in all_pairings(2):
            assert len(m.edges()) == 4
            if m.is_connected():
                g = m.genus()
                assert 0 <= g <= 1
                chi = m.n - 2 * m.n + m.face_count()
                assert chi % 2 == 0

    def test_face_parity_one_vertex(self):
        for m in all_pairings(1):
            assert len(m.edges()) == 2
            assert (m.face_count() - m.n) % 2 == 0


@pytest.mark.slow
class TestExtendedEnumeration:
    def test_four_vertices_matches_series(self):
        s = survey(4)
        assert s.rooted_map_count == 378
        z_series = solve_Z(IsingParams(nu=2, c=1), 4)
        assert s.partition_polynomial == z_series.coefficient(4)
