import math

import pytest

import dekreg

X = [0.0, 0.1, 0.2, 0.35, 0.5, 0.6, 0.75, 0.9, 1.0]
Y = [1.02, 1.1, 1.25, 1.41, 1.63, 1.84, 2.1, 2.44, 2.73]


def test_gaussian_moments():
    m = dekreg.kernel_moments(dekreg.Kernel.gaussian())
    assert m.mu[2] == pytest.approx(1.0, abs=1e-9)
    assert m.mu[4] == pytest.approx(3.0, abs=1e-9)
    assert m.rk == pytest.approx(1.0 / (2.0 * math.sqrt(math.pi)), abs=1e-9)


def test_de1_lambda_zero_is_nw():
    g = dekreg.Kernel.gaussian()
    for k in range(1, 6):
        assert dekreg.de1k_fit(X, Y, k, 0.0, 0.2, g, 0.4) == dekreg.local_poly_fit(
            X, Y, 0, 0.2, g, 0.4
        )


def test_de1_matches_weighted_least_squares():
    # One-parameter weighted least squares: g = sum(w y s) / sum(w s^2).
    h, x0, lam = 0.25, 0.55, 1.0
    num = den = 0.0
    for x, y in zip(X, Y):
        u = x - x0
        w = math.exp(-0.5 * (u / h) ** 2)
        s = 1.0 + lam * u
        num += w * y * s
        den += w * s * s
    fit = dekreg.de1k_fit(X, Y, 1, lam, h, dekreg.Kernel.gaussian(), x0)
    assert fit == pytest.approx(num / den, rel=1e-12)


def test_fit_curve_and_selection():
    g = dekreg.Kernel.gaussian()
    sel = dekreg.loocv_select(X, Y, dekreg.Method.de1(1, 1.0), g)
    assert len(sel.scores) == 25
    assert sel.score == min(sel.scores)
    values, defined = dekreg.fit_curve(X, Y, dekreg.Method.ll(), sel.h, g, [0.0, 0.5, 1.0])
    assert all(defined)
    assert values[1] == pytest.approx(1.65, abs=0.1)


def test_rot_bandwidth():
    assert dekreg.rot_bandwidth([21, 25, 28, 42, 45]) == 1.75


def test_error_translation():
    with pytest.raises(dekreg.InputError):
        dekreg.local_poly_fit([0.0, 1.0], [1.0], 1, 0.2, dekreg.Kernel.gaussian(), 0.5)
    with pytest.raises(dekreg.UndefinedAtPoint):
        dekreg.local_poly_fit([0.0, 0.01], [1.0, 1.0], 0, 0.001, dekreg.Kernel.epanechnikov(), 0.5)
    assert issubclass(dekreg.DomainError, dekreg.Error)


def test_nls_exact_model():
    xs = [0.1 * i for i in range(11)]
    ys = [2.0 * math.exp(0.7 * x) for x in xs]
    fit = dekreg.fit_nls_exponential(xs, ys)
    assert fit.c == pytest.approx(2.0, rel=1e-8)
    assert fit.lambda_ == pytest.approx(0.7, rel=1e-8)


def test_variance_ratio_and_studies_are_deterministic():
    r = dekreg.variance_ratio_study(10, 1.0, 1, None, dekreg.Kernel.gaussian(), 3)
    assert len(r.ratios) == 10
    a = dekreg.simulate(1, 10, replicates=3, seed=5)
    b = dekreg.simulate(1, 10, replicates=3, seed=5)
    assert a == b
    assert list(a) == ["NW", "LL", "LQ", "LC", "DE1-1", "DE1-2", "DE1-3", "DE1-4", "DE1-5", "NLS"]
    t = dekreg.tumor_pipeline(replicates=5, seed=2)
    assert t["residual_sd"] == pytest.approx(0.089, abs=0.005)
    assert set(t["rows"]) == {"NW", "LL", "LQ", "DE1-1", "DE1-2", "NLS"}
