#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "crossing/execution.hpp"
#include "crossing/model.hpp"

namespace crossing {

/// Geometric(a) marks, Exponential(μ) gaps and τ₀ = 0, with threshold M.
///
/// The closed forms are written for the level N = M + 1, the index at which
/// the generating inverse recovers ν = inf{n : A_n > M}.
class SpecialModel {
public:
    SpecialModel(double lambda, double a, double mu, int threshold);

    /// Throws ConfigError unless the model has geometric marks, exponential gaps and τ₀ = 0.
    static SpecialModel from(const ProcessModel& model);

    [[nodiscard]] double lambda() const noexcept { return lambda_; }
    [[nodiscard]] double a() const noexcept { return a_; }
    [[nodiscard]] double b() const noexcept { return b_; }
    [[nodiscard]] double mu() const noexcept { return mu_; }
    [[nodiscard]] int threshold() const noexcept { return threshold_; }
    [[nodiscard]] int level() const noexcept { return threshold_ + 1; }
    /// c = F(μ, 1) = (bμ + λ)/(μ + λ), unless overridden.
    [[nodiscard]] double c() const noexcept { return c_; }

    /// Copy with c shifted by delta (used to check that validation notices a wrong c).
    [[nodiscard]] SpecialModel with_perturbed_c(double delta) const;
    [[nodiscard]] ProcessModel to_process_model() const;

private:
    double lambda_;
    double a_;
    double b_;
    double mu_;
    int threshold_;
    double c_;
};

/// F(x, v) = (bx + λ) v / (x + λ).
template <class S>
S f_of(S x, S v, const SpecialModel& m) {
    const S lam(m.lambda());
    return (S(m.b()) * x + lam) * v / (x + lam);
}

namespace detail {

template <class S>
S ipow(S x, long n) {
    S out(1.0);
    while (n > 0) {
        if (n & 1) out *= x;
        x *= x;
        n >>= 1;
    }
    return out;
}

// Σ_{j<n} x^j
template <class S>
S geo_sum(const S& x, long n) {
    S acc(0.0);
    S p(1.0);
    for (long j = 0; j < n; ++j) {
        acc += p;
        p *= x;
    }
    return acc;
}

// Σ_{j<n} X^j Σ_{i<n-j} Y^i
template <class S>
S double_sum(const S& X, const S& Y, long n) {
    if (n <= 0) return S(0.0);
    std::vector<S> partial(static_cast<std::size_t>(n) + 1, S(0.0));
    S p(1.0);
    for (long m = 1; m <= n; ++m) {
        partial[static_cast<std::size_t>(m)] = partial[static_cast<std::size_t>(m - 1)] + p;
        p *= Y;
    }
    S acc(0.0);
    S xp(1.0);
    for (long j = 0; j < n; ++j) {
        acc += xp * partial[static_cast<std::size_t>(n - j)];
        xp *= X;
    }
    return acc;
}

}  // namespace detail

/// ∫ e^{-θt} E[v^{A_ν} 1{t < τ_{ν-1}}] dt in closed form.
/// S may be std::complex<double> or a real multiprecision type.
template <class S>
S g1_star_special(const SpecialModel& m, S theta, S v) {
    using detail::double_sum;
    using detail::geo_sum;
    using detail::ipow;
    const long N = m.level();
    const S lam(m.lambda());
    const S mu(m.mu());
    const S a(m.a());
    const S b(m.b());
    const S one(1.0);

    const S gv = a * v / (one - b * v);
    const S gamma_v = mu / (mu + lam - lam * gv);
    const S f_mu = f_of(mu, v, m);
    const S f_th = f_of(theta, v, m);
    const S f_muth = f_of(mu + theta, v, m);
    const S bv = b * v;
    const S damp = (mu + theta + lam) / (theta + lam);

    const S t1 = gamma_v * (mu + lam) / lam * (ipow(v, N - 1) + (one - f_mu) * geo_sum(v, N - 1));
    const S t2 = gamma_v * damp * (ipow(f_th, N - 1) + (one - f_muth) * geo_sum(f_th, N - 1));
    const S t3 = mu / lam *
                 (double_sum(v, f_mu, N) - (f_mu + bv) * double_sum(v, f_mu, N - 1) +
                  bv * f_mu * double_sum(v, f_mu, N - 2));
    const S t4 = mu / (mu + lam) * damp *
                 (double_sum(f_th, f_mu, N) - (f_muth + bv) * double_sum(f_th, f_mu, N - 1) +
                  bv * f_muth * double_sum(f_th, f_mu, N - 2));
    return (t1 - t2 - t3 + t4) / theta;
}

/// Lower regularized gamma P(k, x) for integer k; P(0, x) = 1 for every x ≥ 0.
[[nodiscard]] double reg_gamma_p(int k, double x);

/// P(k, x) for k = 0..k_max in one pass.
[[nodiscard]] std::vector<double> reg_gamma_p_table(int k_max, double x);

[[nodiscard]] double coeff_g(int j, double t, const SpecialModel& m);
[[nodiscard]] double coeff_h(int j, double t, const SpecialModel& m);

/// G_j(t) and H_j(t) for j = 0..count-1.
struct CoefficientTable {
    std::vector<double> g;
    std::vector<double> h;
};
[[nodiscard]] CoefficientTable coefficient_table(int count, double t, const SpecialModel& m);

/// E[v^{A_ν} 1{t < τ_{ν-1}}].
[[nodiscard]] cplx ev_v_anu_before(const SpecialModel& m, cplx v, double t);

/// 0 for r < j, 1 for r = j, (c-b)c^{r-j-1} for r > j.
[[nodiscard]] double r_coeff(int j, int r, const SpecialModel& m);

/// P{A_ν = r, τ_{ν-1} > t}.
[[nodiscard]] double joint_dist(const SpecialModel& m, int r, double t);

/// P{A_ν = r, τ_{ν-1} > t} for r = 0..r_max at one t.
[[nodiscard]] std::vector<double> joint_dist_row(const SpecialModel& m, int r_max, double t);

/// P{A_ν = r, τ_{ν-1} > t} over a grid, row-major in t.
struct JointDistTable {
    std::vector<double> t_grid;
    int r_max = 0;
    std::vector<double> values;

    [[nodiscard]] double at(std::size_t ti, int r) const {
        return values[ti * static_cast<std::size_t>(r_max + 1) + static_cast<std::size_t>(r)];
    }
    double& at(std::size_t ti, int r) {
        return values[ti * static_cast<std::size_t>(r_max + 1) + static_cast<std::size_t>(r)];
    }
};

/// Cells that break the table invariants, formatted "t=...,r=...: reason".
[[nodiscard]] std::vector<std::string> table_violations(const JointDistTable& table, int threshold);

/// Tabulates joint_dist and throws ValidationError listing any broken cells.
[[nodiscard]] JointDistTable dist_table(const SpecialModel& m, const std::vector<double>& t_grid, int r_max,
                                        Execution exec = Execution::Parallel);

/// CSV with header `t,r,probability`.
void write_csv(const JointDistTable& table, std::ostream& out);

}  // namespace crossing
