"""Event-evaluation kernels for the Monte Carlo oracle.

Both kernels take the same pre-drawn gains and return identical failure
flags. ``evaluate_cluster`` dispatches to the numba loop when JIT is on.

Arguments shared by both kernels::

    g_l    (T,)    CHU->CMU power gain
    g_h    (T,)    harvesting gain
    g_n    (M, T)  CMU->device power gains
    alpha, phi     (M,) power allocation and SINR targets
    p_t, iota, k_l, sigma2_l          first hop
    k_n, sigma2_n                     second hop
    eh_gain        slot_factor * eta * rho (ignored when fixed_power > 0)
    p_th           saturation threshold
    fixed_power    > 0 selects a fixed relay power, <= 0 the EH relay

Outputs: ``hop1`` (T,) bool, ``sat`` (T,) bool, ``hop2`` (M, T) bool.
"""
import numpy as np

from ._jit import USE_NUMBA, njit


def evaluate_cluster_numpy(g_l, g_h, g_n, alpha, phi, p_t, iota, k_l, sigma2_l,
                           k_n, sigma2_n, eh_gain, p_th, fixed_power):
    M = alpha.shape[0]
    T = g_l.shape[0]
    tail = np.zeros(M)
    for j in range(M - 2, -1, -1):
        tail[j] = tail[j + 1] + alpha[j + 1]

    s1 = iota * p_t * g_l
    hop1 = np.zeros(T, dtype=np.bool_)
    for j in range(M):
        sinr = s1 * alpha[j] / (s1 * tail[j] + iota * k_l * k_l * p_t * g_l + sigma2_l)
        hop1 |= sinr < phi[j]

    received = p_t * g_h
    sat = received > p_th
    if fixed_power > 0:
        power = np.full(T, fixed_power)
    else:
        power = eh_gain * np.where(sat, p_th, received)

    hop2 = np.zeros((M, T), dtype=np.bool_)
    for n in range(M):
        s2 = power * g_n[n]
        fail = np.zeros(T, dtype=np.bool_)
        for j in range(n + 1):
            sinr = s2 * alpha[j] / (s2 * tail[j] + k_n * k_n * s2 + sigma2_n)
            fail |= sinr < phi[j]
        hop2[n] = fail
    return hop1, sat, hop2


@njit(nogil=True)
def evaluate_cluster_loop(g_l, g_h, g_n, alpha, phi, p_t, iota, k_l, sigma2_l,
                          k_n, sigma2_n, eh_gain, p_th, fixed_power):
    M = alpha.shape[0]
    T = g_l.shape[0]
    tail = np.zeros(M)
    for j in range(M - 2, -1, -1):
        tail[j] = tail[j + 1] + alpha[j + 1]

    hop1 = np.zeros(T, dtype=np.bool_)
    sat = np.zeros(T, dtype=np.bool_)
    hop2 = np.zeros((M, T), dtype=np.bool_)
    for t in range(T):
        s1 = iota * p_t * g_l[t]
        hwi = iota * k_l * k_l * p_t * g_l[t]
        for j in range(M):
            if s1 * alpha[j] / (s1 * tail[j] + hwi + sigma2_l) < phi[j]:
                hop1[t] = True
                break

        received = p_t * g_h[t]
        if received > p_th:
            sat[t] = True
        if fixed_power > 0:
            power = fixed_power
        elif sat[t]:
            power = eh_gain * p_th
        else:
            power = eh_gain * received

        for n in range(M):
            s2 = power * g_n[n, t]
            for j in range(n + 1):
                if s2 * alpha[j] / (s2 * tail[j] + k_n * k_n * s2 + sigma2_n) < phi[j]:
                    hop2[n, t] = True
                    break
    return hop1, sat, hop2


evaluate_cluster = evaluate_cluster_loop if USE_NUMBA else evaluate_cluster_numpy
