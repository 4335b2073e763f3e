"""Reference values for the unit tests, computed without the C++ library.

Run: python3 tests/oracles/generate.py > tests/oracle_values.hpp
"""
from fractions import Fraction as Q
import math

import mpmath as mp
import numpy as np
from scipy import integrate

rng = np.random.default_rng(20240611)
N = 1_000_000


def mc(x):
    x = np.asarray(x, dtype=float)
    return float(x.mean()), float(x.std(ddof=1) / math.sqrt(len(x)))


def geometric_marks_total(counts, a):
    # Sum of `counts` Geometric(a) marks on {1, 2, ...}.
    out = counts.astype(np.int64).copy()
    pos = counts > 0
    out[pos] += rng.negative_binomial(counts[pos], a)
    return out


def simulate(lam, a, mu, M, n, initial_mu=None):
    """tau_pre, tau_cross, A_pre, A_cross, nu for Geometric(a) marks and Exp(mu) gaps."""
    A = np.zeros(n, dtype=np.int64)
    tau = np.zeros(n) if initial_mu is None else rng.exponential(1 / initial_mu, n)
    A += geometric_marks_total(rng.poisson(lam * tau), a)
    tau_pre = np.zeros(n)
    a_pre = np.zeros(n, dtype=np.int64)
    nu = np.zeros(n, dtype=np.int64)
    alive = A <= M
    while alive.any():
        idx = np.nonzero(alive)[0]
        tau_pre[idx] = tau[idx]
        a_pre[idx] = A[idx]
        gap = rng.exponential(1 / mu, len(idx))
        tau[idx] += gap
        A[idx] += geometric_marks_total(rng.poisson(lam * gap), a)
        nu[idx] += 1
        alive[idx] = A[idx] <= M
    return tau_pre, tau.copy(), a_pre, A.copy(), nu


out = {}
stats = {}

# Mark PGF and observation LST.
marks = rng.geometric(0.5, N)
stats["geometric_pgf_half"] = mc(0.5 ** marks)
stats["exp_lst_rate2_at2"] = mc(np.exp(-2 * rng.exponential(0.5, N)))

# phi: E[z^{A(s)}] with lam=2, a=0.5, z=0.5, s=0.5.
stats["phi_mc"] = mc(0.5 ** geometric_marks_total(rng.poisson(2 * 0.5, N), 0.5))
out["phi_exact"] = math.exp(2 * 0.5 * (1 / 3 - 1))

# gamma: E[z^{X_1}] with X_1 the marks in Delta_1 ~ Exp(2), lam=1, z=0.5.
stats["gamma_mc"] = mc(0.5 ** geometric_marks_total(rng.poisson(rng.exponential(0.5, N)), 0.5))


# psi: int_0^delta e^{-theta t} phi(b,t) phi(c,delta-t) dt.
def g(z, a=0.5):
    return a * z / (1 - (1 - a) * z)


lam, th, delta = 1.0, 0.2, 1.0
psi_val, _ = integrate.quad(
    lambda t: math.exp(-th * t) * math.exp(lam * t * (g(0.4) - 1)) * math.exp(lam * (delta - t) * (g(0.6) - 1)),
    0, delta, epsabs=1e-14, epsrel=1e-13)
out["psi_quad"] = psi_val

# Regularized lower gamma P(1, 1) by quadrature of the gamma density.
out["reg_gamma_p_1_1"] = integrate.quad(lambda s: math.exp(-s), 0, 1, epsabs=1e-15)[0]


# Blocks at rational points, exact arithmetic.
def blocks(lam, a, mu, mu0, args, s):
    b = 1 - a
    th, u, v, w, x, y = args
    gq = lambda z: a * z / (1 - b * z)
    L = lambda q: mu / (mu + q)
    L0 = (lambda q: Q(1)) if mu0 is None else (lambda q: mu0 / (mu0 + q))
    gam = lambda z, q: L(q + lam - lam * gq(z))
    gam0 = lambda z, q: L0(q + lam - lam * gq(z))
    B1 = (gam(v, x) - gam(v * s, x)) / (th + lam * gq(u * v * s) - lam * gq(u * v * y * s))
    B2 = gam0(u * v * s, w) / (1 - gam(u * v * s, w))
    B3 = gam0(u * v * y * s, th + w) / (1 - gam(u * v * y * s, th + w))

    def bracket(G, z1, z2):
        return (G(z1, x) - G(z2, th + x)) / (th + lam * gq(z1) - lam * gq(z2))

    G0 = bracket(gam0, v, v * y) - bracket(gam0, v * s, v * y * s)
    G = bracket(gam, v, v * y) - bracket(gam, v * s, v * y * s)
    return [B1, B2, B3, G0, G]


sp_args = (Q(3, 10), Q(1), Q(1, 2), Q(0), Q(0), Q(1))
out["blocks_special"] = [float(q) for q in blocks(Q(1), Q(1, 2), Q(1), None, sp_args, Q(7, 10))[:3]]
gen_args = (Q(3, 10), Q(9, 10), Q(1, 2), Q(1, 5), Q(2, 5), Q(4, 5))
out["blocks_general"] = [float(q) for q in blocks(Q(3, 2), Q(2, 5), Q(2), Q(3), gen_args, Q(7, 10))]

# H_2(1) and G_0(t) by numerical inversion of their transforms in 40-digit arithmetic.
mp.mp.dps = 40
lam_, mu_, b_ = mp.mpf(1), mp.mpf(1), mp.mpf("0.5")
H = lambda j: (lambda s: (b_ * s + b_ * mu_ + lam_) / (s * (s + lam_)) * ((b_ * s + lam_) / (s + lam_)) ** j)
G = lambda j: (lambda s: (mu_ + s + lam_) / (s * (s + lam_)) * ((b_ * s + lam_) / (s + lam_)) ** j)
out["h2_t1"] = float(mp.invertlaplace(H(2), 1, method="talbot"))
out["g1_t1"] = float(mp.invertlaplace(G(1), 1, method="talbot"))
out["g0_t30"] = float(mp.invertlaplace(G(0), 30, method="talbot"))

# Coefficient of v^{j+2} in (1 - b v)/(1 - c v) v^j at b=0.5, c=0.75.
b, c = Q(1, 2), Q(3, 4)
quotient = [Q(1)]
remainder = [Q(1), -b]
for k in range(1, 4):
    nxt = (remainder[k] if k < len(remainder) else Q(0)) + c * quotient[-1]
    quotient.append(nxt)
out["r_coeff_j_plus_2"] = float(quotient[2])

# Two-epoch functionals with T, Delta ~ Exp(1): direct simulation with exact t-integration.
def lemma_mc(args, lam=1.0, a=0.5):
    th, u, v, w, x, y = args
    T = rng.exponential(1.0, N)
    D = rng.exponential(1.0, N)
    # Jump epochs within [0, T + D] are simulated per path at level granularity.
    f1 = np.zeros(N)
    f2 = np.zeros(N)
    A_T = np.zeros(N, dtype=np.int64)
    A_end = np.zeros(N, dtype=np.int64)
    for i in range(N):
        t_end = T[i] + D[i]
        t, level, i1, i2 = 0.0, 0, 0.0, 0.0
        a_T = None
        while True:
            nxt = t + rng.exponential(1 / lam)
            seg_end = min(nxt, t_end)
            for lo, hi, which in ((t, min(seg_end, T[i]), 1), (max(t, T[i]), seg_end, 2)):
                if hi > lo:
                    val = y ** level * (math.exp(-th * lo) - math.exp(-th * hi)) / th
                    if which == 1:
                        i1 += val
                    else:
                        i2 += val
            if a_T is None and nxt > T[i]:
                a_T = level
            if nxt > t_end:
                break
            level += int(rng.geometric(a))
            t = nxt
        weight = u ** a_T * v ** level * math.exp(-w * T[i] - x * D[i])
        f1[i] = weight * i1
        f2[i] = weight * i2
    return mc(f1), mc(f2)


N_LEMMA = 200_000
N_saved = N
N = N_LEMMA
stats["lemma_f1"], stats["lemma_f2"] = lemma_mc((0.6, 0.7, 0.8, 0.3, 0.4, 0.9))
N = N_saved

# Path functionals for (lam=1, a=0.5, mu=1), tau_0 = 0.
tp, tc, ap, ac, nu = simulate(1.0, 0.5, 1.0, 3, N)
stats["special_nu_at_least_two"] = mc(nu >= 2)
stats["special_joint_r4_t1"] = mc((ac == 4) & (tp > 1.0))
stats["special_lst_cross_theta1"] = mc(np.exp(-tc))
stats["special_lst_pre_theta2"] = mc(np.exp(-2 * tp))
stats["special_mean_tau_cross"] = mc(tc)

tp, tc, ap, ac, nu = simulate(1.0, 0.5, 1.0, 1, N)
stats["m1_g1_theta1_v08"] = mc(0.8 ** ac * (1 - np.exp(-tp)))

tp, tc, ap, ac, nu = simulate(1.0, 0.5, 1.0, 2, N)
stats["m2_g2_theta1"] = mc(np.exp(-tp) - np.exp(-tc))

tp, tc, ap, ac, nu = simulate(1.5, 0.4, 2.0, 2, N, initial_mu=3.0)
stats["delayed_lst_cross_theta07"] = mc(np.exp(-0.7 * tc))
stats["delayed_exit_level_3"] = mc(ac == 3)

print("#pragma once")
print()
print("// Generated by tests/oracles/generate.py. Do not edit by hand.")
print()
print("namespace oracle {")
print()
print("struct Stat {\n    double mean;\n    double se;\n};")
print()
for k, v in out.items():
    if isinstance(v, list):
        print(f"inline constexpr double {k}[] = {{{', '.join(repr(x) for x in v)}}};")
    else:
        print(f"inline constexpr double {k} = {v!r};")
print()
for k, (m, s) in stats.items():
    print(f"inline constexpr Stat {k}{{{m!r}, {s!r}}};")
print()
print("}  // namespace oracle")
