"""Shared assertions for comparing analytic values with simulation estimates."""


def within_se(analytic: float, est, k: float = 3.0) -> bool:
    se = max(est.std_err, 1.0 / est.trials)
    return abs(analytic - est.p_hat) <= k * se


def assert_within_se(analytic: float, est, k: float = 3.0, label: str = "") -> None:
    se = max(est.std_err, 1.0 / est.trials)
    assert within_se(analytic, est, k), (
        f"{label}: analytic {analytic:.6g} vs mc {est.p_hat:.6g} +- {se:.2g} "
        f"({abs(analytic - est.p_hat) / se:.2f} SE)")
