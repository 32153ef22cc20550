import numpy as np
import pytest

from quadlin.colehopf import (BurgersFamily, HietarintaParams, cole_hopf_map,
                              evolve_linear_burgers, hietarinta_transform,
                              inverse_hietarinta_transform, rosa_residual,
                              solve_canonical, solve_g23, solve_rosa,
                              verify_burgers, verify_canonical_form,
                              verify_potential_compatibility)
from quadlin.errors import DegenerateParams, ZeroDivisionCell
from quadlin.lattice import Grid, make_staircase


def ch_grid(p, n=20, m=20, seed=0):
    psi0 = make_staircase(n, m + 1, seed=seed, interval=(0.5, 2.0), log_uniform=True)
    psi = evolve_linear_burgers(p, psi0)
    return cole_hopf_map(psi)


def random_grid(shape, seed, lo=0.5, hi=2.0):
    rng = np.random.default_rng(seed)
    return Grid(rng.uniform(lo, hi, shape))


class TestLinearBurgers:
    def test_p_zero_is_diagonal_shift(self):
        g = evolve_linear_burgers(0.0, make_staircase(4, 4, seed=1))
        for n in range(1, 5):
            for m in range(1, 5):
                assert g.values[n, m] == g.values[n - 1, m - 1]

    def test_all_ones_corner(self):
        g = evolve_linear_burgers(1.0, make_staircase(1, 1, row=[1, 1], col=[1, 1]))
        assert g.values[1, 1] == 0.0

    def test_superposition(self):
        a = make_staircase(20, 20, seed=3)
        b = make_staircase(20, 20, seed=4)
        ab = make_staircase(20, 20, row=a.values[:, 0] + b.values[:, 0],
                            col=a.values[0, :] + b.values[0, :])
        ga = evolve_linear_burgers(1.0, a).values
        gb = evolve_linear_burgers(1.0, b).values
        gab = evolve_linear_burgers(1.0, ab).values
        assert np.abs(gab - ga - gb).max() <= 1e-12 * max(1.0, np.abs(gab).max())


class TestColeHopfMap:
    def test_constant_field(self):
        u = cole_hopf_map(Grid(np.ones((4, 5))))
        assert (u.values == 1.0).all()
        assert u.shape == (4, 4)

    def test_geometric_field(self):
        vals = np.tile(2.0 ** np.arange(6), (4, 1))
        u = cole_hopf_map(Grid(vals))
        assert (u.values == 2.0).all()

    def test_zero_guard(self):
        vals = np.ones((3, 3))
        vals[1, 1] = 0.0
        with pytest.raises(ZeroDivisionCell) as err:
            cole_hopf_map(Grid(vals))
        assert err.value.cell == (1, 1)

    def test_gauge_covariance(self):
        psi0 = make_staircase(10, 11, seed=9, interval=(0.5, 2.0), log_uniform=True)
        psi = evolve_linear_burgers(0.5, psi0)
        u1 = cole_hopf_map(psi).values
        u2 = cole_hopf_map(Grid(3.7 * psi.values)).values
        assert np.abs(u2 / u1 - 1.0).max() <= 4 * np.finfo(float).eps


class TestBurgersResiduals:
    @pytest.mark.parametrize("p", [1.0, 0.5, -2.0])
    def test_cole_hopf_data_satisfies_family(self, p):
        u = ch_grid(p, seed=int(10 * p) + 21)
        assert verify_burgers(u, BurgersFamily.classical(p)) <= 1e-10

    def test_constant_grid_trivially_solves(self):
        u = Grid(np.full((6, 6), 1.3))
        fam = BurgersFamily(kappa0=2.0, kappa1=1.0, kappa2=0.5)
        assert verify_burgers(u, fam) == 0.0

    def test_random_grid_fails(self):
        u = random_grid((21, 21), seed=5)
        assert verify_burgers(u, BurgersFamily.classical(1.0)) > 1e-2

    def test_solved_g23_grid_verifies(self):
        fam = BurgersFamily(kappa0=1.5, kappa1=1.0, kappa2=-0.5)
        u = solve_g23(fam, make_staircase(12, 12, seed=8, interval=(0.5, 2.0)))
        assert verify_burgers(u, fam) <= 1e-12

    def test_family_gauge_validation(self):
        with pytest.raises(DegenerateParams):
            BurgersFamily(kappa0=0.0, kappa1=0.0, kappa2=0.0)
        with pytest.raises(DegenerateParams):
            BurgersFamily(kappa0=1.0, kappa1=0.5, kappa2=0.0)


class TestCanonicalForm:
    def test_constant_one(self):
        assert verify_canonical_form(Grid(np.ones((5, 5)))) == 0.0

    def test_ratio_ansatz_solution(self):
        # w[n+1, m] = w[n, m] + w[n, m+1]; u = w[n, m+1]/w[n, m]
        rng = np.random.default_rng(17)
        n = m = 10
        w = [rng.uniform(0.5, 2.0, n + m + 2)]
        for _ in range(n + 1):
            prev = w[-1]
            w.append(prev[:-1] + prev[1:])
        u = np.empty((n + 1, m + 1))
        for i in range(n + 1):
            col = w[i]
            u[i, :] = col[1: m + 2] / col[: m + 1]
        assert verify_canonical_form(Grid(u)) <= 1e-10

    def test_solver_agrees_with_relation(self):
        rng = np.random.default_rng(23)
        u = solve_canonical(rng.uniform(0.5, 2.0, 21), 10, 10)
        assert verify_canonical_form(u) <= 1e-12

    def test_random_grid_fails(self):
        assert verify_canonical_form(random_grid((10, 10), seed=3)) > 1e-2


class TestPotential:
    def test_cole_hopf_data_path_independent(self):
        u = ch_grid(1.0, seed=2)
        fam = BurgersFamily.classical(1.0)
        assert verify_potential_compatibility(u, fam, v0=1.0) <= 1e-10

    def test_constant_grid(self):
        fam = BurgersFamily(kappa0=2.0, kappa1=1.0, kappa2=0.3)
        assert verify_potential_compatibility(Grid(np.full((5, 5), 0.8)), fam) == 0.0

    def test_random_grid_mismatch(self):
        fam = BurgersFamily.classical(1.0)
        assert verify_potential_compatibility(random_grid((15, 15), seed=6), fam) > 1e-2

    def test_equivalence_with_relation(self):
        # the two residuals vanish together and fail together
        fam = BurgersFamily(kappa0=1.2, kappa1=1.0, kappa2=-0.4)
        for seed in range(25):
            good = solve_g23(fam, make_staircase(6, 6, seed=seed, interval=(0.5, 2.0)))
            assert verify_burgers(good, fam) <= 1e-10
            assert verify_potential_compatibility(good, fam) <= 1e-10
        for seed in range(25):
            bad = random_grid((7, 7), seed=100 + seed)
            assert verify_burgers(bad, fam) > 1e-2
            assert verify_potential_compatibility(bad, fam) > 1e-2

    def test_zero_v0_rejected(self):
        fam = BurgersFamily.classical(1.0)
        with pytest.raises(ZeroDivisionCell):
            verify_potential_compatibility(ch_grid(1.0), fam, v0=0.0)


class TestHietarinta:
    def test_cross_ratio_value(self):
        params = HietarintaParams(2.0, 0.0, 3.0, 1.0)
        assert params.cross_ratio == 0.75

    def test_degenerate_params(self):
        with pytest.raises(DegenerateParams):
            HietarintaParams(2.0, 2.0, 3.0, 1.0)
        with pytest.raises(DegenerateParams):
            HietarintaParams(2.0, 0.0, 1.0, 1.0)

    def test_constraint_exact(self):
        params = HietarintaParams(2.0, 0.0, 3.0, 1.0)
        for kappa0 in (1.0, -0.5, 2.5):
            _, fam = hietarinta_transform(params, Grid(np.full((3, 3), 0.7)),
                                          kappa0=kappa0)
            assert fam.kappa2 * fam.kappa0 == -params.cross_ratio

    def test_constant_solves_both(self):
        params = HietarintaParams(2.0, 0.0, 3.0, 1.0)
        c = Grid(np.full((5, 5), 0.9))
        assert rosa_residual(c, params) == 0.0
        img, fam = hietarinta_transform(params, c, kappa0=1.0)
        assert (img.values == img.values[0, 0]).all()
        assert verify_burgers(img, fam) <= 1e-16

    def test_rosa_solution_maps_to_family(self):
        params = HietarintaParams(2.0, 0.0, 3.0, 1.0)
        ut = solve_rosa(params, make_staircase(10, 10, seed=11, interval=(0.3, 1.5)))
        assert rosa_residual(ut, params) <= 1e-9
        img, fam = hietarinta_transform(params, ut, kappa0=1.0)
        assert verify_burgers(img, fam) <= 1e-8

    def test_family_solution_maps_back(self):
        params = HietarintaParams(2.0, 0.0, 3.0, 1.0)
        fam = BurgersFamily(kappa0=1.0, kappa1=1.0, kappa2=-params.cross_ratio)
        u = solve_g23(fam, make_staircase(10, 10, seed=13, interval=(0.5, 2.0)))
        back = inverse_hietarinta_transform(params, u, kappa0=1.0)
        assert rosa_residual(back, params) <= 1e-8

    def test_inverse_roundtrip(self):
        params = HietarintaParams(2.0, 0.0, 3.0, 1.0)
        grid = random_grid((6, 6), seed=1, lo=0.3, hi=1.5)
        img, _ = hietarinta_transform(params, grid, kappa0=0.8)
        back = inverse_hietarinta_transform(params, img, kappa0=0.8)
        assert np.abs(back.values - grid.values).max() <= 1e-12
