import numpy as np
import pytest

from kinkwell import spectral
from kinkwell.oracle import numerov_solve
from kinkwell.wells import (Parity, decay_cutoff, eigenfunction,
                            eigenfunction_derivative, potential,
                            potential_derivative)

from conftest import BENCHMARKS


def _trapezoid_norm(ns, n=200001):
    s = ns.state
    x = np.linspace(0.0, decay_cutoff(s), n)
    return 2.0 * np.trapezoid(eigenfunction(s, x) ** 2, x)


class TestNormalize:
    @pytest.mark.parametrize("name", sorted(BENCHMARKS))
    def test_unit_norm_against_trapezoid(self, name, benchmark):
        for ns in benchmark[name]["normalized"]:
            assert _trapezoid_norm(ns) == pytest.approx(1.0, abs=1e-8)

    @pytest.mark.parametrize("name", sorted(BENCHMARKS))
    def test_idempotent(self, name, benchmark):
        for ns in benchmark[name]["normalized"]:
            again = spectral.normalize(ns.state)
            assert again.state.norm_const == pytest.approx(
                ns.state.norm_const, rel=1e-12)

    @pytest.mark.parametrize("name", sorted(BENCHMARKS))
    def test_accuracy_field(self, name, benchmark):
        for ns in benchmark[name]["normalized"]:
            assert 0.0 <= ns.accuracy < 1e-6

    @pytest.mark.parametrize("name", sorted(BENCHMARKS))
    def test_matches_grid_normalized_oracle(self, name, benchmark):
        # normalize the Numerov grid solution by trapezoid and compare
        # pointwise with the normalized closed form
        for ns in benchmark[name]["normalized"]:
            s = ns.state
            sol = numerov_solve(s.well, s.parity,
                                (s.energy - 0.4, s.energy + 0.4))
            norm = 2.0 * np.trapezoid(sol.psi ** 2, sol.x_grid)
            grid_psi = sol.psi / np.sqrt(norm)
            exact = eigenfunction(s, sol.x_grid)
            if grid_psi[np.argmax(np.abs(grid_psi))] * \
                    exact[np.argmax(np.abs(exact))] < 0.0:
                grid_psi = -grid_psi
            assert np.max(np.abs(grid_psi - exact)) < 1e-3


class TestPositionMoments:
    @pytest.mark.parametrize("name", sorted(BENCHMARKS))
    def test_p2_equals_energy_minus_mean_potential(self, name, benchmark):
        # <p^2> = E - <V>, with <V> from an independent trapezoid
        for ns in benchmark[name]["normalized"]:
            s = ns.state
            x = np.linspace(0.0, decay_cutoff(s), 200001)
            psi2 = eigenfunction(s, x) ** 2
            mean_v = 2.0 * np.trapezoid(psi2 * potential(s.well, x), x)
            m1 = spectral.position_moment(ns, 1)
            assert m1.value == pytest.approx(s.energy - mean_v, abs=1e-7)
            assert m1.value > 0.0
            assert m1.converged

    @pytest.mark.parametrize("name", sorted(BENCHMARKS))
    def test_p4_against_trapezoid(self, name, benchmark):
        # <p^4> = int ((V-E) psi)^2
        for ns in benchmark[name]["normalized"]:
            s = ns.state
            x = np.linspace(0.0, decay_cutoff(s), 200001)
            psi = eigenfunction(s, x)
            want = 2.0 * np.trapezoid(
                ((potential(s.well, x) - s.energy) * psi) ** 2, x)
            m2 = spectral.position_moment(ns, 2)
            assert m2.value == pytest.approx(want, rel=1e-7)

    @pytest.mark.parametrize("name", sorted(BENCHMARKS))
    def test_moment_inequalities(self, name, benchmark):
        # Cauchy-Schwarz: <p^4> >= <p^2>^2 and <p^6> >= <p^2><p^4>
        for ns in benchmark[name]["normalized"]:
            m = spectral.position_moments(ns)
            assert m.p4 >= m.p2 ** 2
            assert m.p6_quadratic_form >= m.p2 * m.p4

    @pytest.mark.parametrize("name", sorted(BENCHMARKS))
    def test_p6_cutoff_study_plateaus(self, name, benchmark):
        for ns in benchmark[name]["normalized"]:
            m3 = spectral.position_moment(ns, 3)
            assert m3.converged
            study = dict(m3.cutoff_study)
            # the excluded sliver scales like eps (psi''' is bounded at the
            # kink), so successive increments shrink ~10x per decade
            vals = [study[eps] for eps in (1e-4, 1e-5, 1e-6)]
            inc = [abs(vals[i + 1] - vals[i]) for i in range(2)]
            assert inc[1] < 0.2 * inc[0]
            assert study[1e-6] == pytest.approx(study[1e-5], rel=1e-4)
            assert m3.value == study[1e-6]

    @pytest.mark.parametrize("name", sorted(BENCHMARKS))
    def test_ev_term_orderings(self, name, benchmark):
        # <(E-V)^j> exists for all three wells and matches <p^2> at j=1
        for ns in benchmark[name]["normalized"]:
            m1 = spectral.position_moment(ns, 1)
            assert m1.ev_term == m1.value

    def test_rejects_bad_j(self, benchmark):
        ns = benchmark["triangular"]["normalized"][0]
        with pytest.raises(ValueError):
            spectral.position_moment(ns, 4)
        with pytest.raises(ValueError):
            spectral.position_moment(ns, 0)


class TestKinkMatching:
    @pytest.mark.parametrize("name", sorted(BENCHMARKS))
    def test_psi_and_second_derivative_continuous(self, name, benchmark):
        # psi'' = (V - E) psi holds on both sides of the kink, so psi''
        # (unlike psi''') stays continuous; check the identity pointwise
        for ns in benchmark[name]["normalized"]:
            s = ns.state
            h = 1e-4
            for x0 in (0.02, -0.02):
                second = (eigenfunction_derivative(s, x0 + h)
                          - eigenfunction_derivative(s, x0 - h)) / (2.0 * h)
                want = (potential(s.well, x0) - s.energy) \
                    * eigenfunction(s, x0)
                assert second == pytest.approx(want, rel=1e-5, abs=1e-6)

    @pytest.mark.parametrize("name", sorted(BENCHMARKS))
    def test_even_state_third_derivative_jump(self, name, benchmark):
        # for even states psi''' jumps by 2 V'(0+) psi(0) across the kink;
        # measure psi''' one-sidedly by extrapolating second differences
        # of the analytic psi' toward the origin
        ns = benchmark[name]["normalized"][0]
        s = ns.state
        h, x0 = 1e-3, 0.01

        def third(side):
            xs = side * x0 * np.arange(1.0, 5.0)
            vals = [(eigenfunction_derivative(s, x - h)
                     - 2.0 * eigenfunction_derivative(s, x)
                     + eigenfunction_derivative(s, x + h)) / h ** 2
                    for x in xs]
            return np.polyval(np.polyfit(np.abs(xs), vals, 3), 0.0)

        jump = third(+1.0) - third(-1.0)
        want = 2.0 * potential_derivative(s.well, 1e-12) * eigenfunction(s, 0.0)
        assert jump == pytest.approx(want, rel=1e-4)

    @pytest.mark.parametrize("name", sorted(BENCHMARKS))
    def test_odd_state_third_derivative_continuous(self, name, benchmark):
        # psi(0) = 0 for odd states, so the psi''' jump vanishes; the
        # discontinuity moves up to the fourth derivative
        ns = benchmark[name]["normalized"][1]
        s = ns.state
        h, x0 = 1e-3, 0.01

        def third(side):
            xs = side * x0 * np.arange(1.0, 5.0)
            vals = [(eigenfunction_derivative(s, x - h)
                     - 2.0 * eigenfunction_derivative(s, x)
                     + eigenfunction_derivative(s, x + h)) / h ** 2
                    for x in xs]
            return np.polyval(np.polyfit(np.abs(xs), vals, 3), 0.0)

        scale = 2.0 * potential_derivative(s.well, 1e-12) * \
            abs(eigenfunction(s, 0.3))
        assert abs(third(+1.0) - third(-1.0)) < 1e-3 * abs(scale)
