#include "crossing/closedform.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>

#include "crossing/errors.hpp"

namespace crossing {

namespace {

constexpr double kSlack = 1e-9;
constexpr int kLogSpaceFrom = 50;

double poisson_term(int m, double x) {
    if (x == 0.0) return m == 0 ? 1.0 : 0.0;
    return std::exp(-x + m * std::log(x) - std::lgamma(m + 1.0));
}

// Binomial(j, a) weights C(j,k) a^k b^{j-k}, k = 0..j.
std::vector<double> binomial_weights(int j, double a, double b) {
    std::vector<double> w(static_cast<std::size_t>(j) + 1, 0.0);
    if (b == 0.0) {
        w.back() = 1.0;
        return w;
    }
    if (j <= kLogSpaceFrom) {
        double choose = 1.0;
        for (int k = 0; k <= j; ++k) {
            w[static_cast<std::size_t>(k)] = choose * std::pow(a, k) * std::pow(b, j - k);
            choose = choose * (j - k) / (k + 1);
        }
        return w;
    }
    const double la = std::log(a);
    const double lb = std::log(b);
    const double lj = std::lgamma(j + 1.0);
    for (int k = 0; k <= j; ++k)
        w[static_cast<std::size_t>(k)] =
            std::exp(lj - std::lgamma(k + 1.0) - std::lgamma(j - k + 1.0) + k * la + (j - k) * lb);
    return w;
}

}  // namespace

//==============================================================================
// SpecialModel
//==============================================================================

SpecialModel::SpecialModel(double lambda, double a, double mu, int threshold)
    : lambda_(lambda), a_(a), b_(1.0 - a), mu_(mu), threshold_(threshold) {
    if (!(lambda > 0.0)) throw ConfigError("lambda must be positive");
    if (!(a > 0.0 && a <= 1.0)) throw ConfigError("geometric parameter a must lie in (0,1]");
    if (!(mu > 0.0)) throw ConfigError("observation rate mu must be positive");
    if (threshold < 1 || threshold > kMaxThreshold) throw ConfigError("threshold M must lie in [1, 10000]");
    c_ = (b_ * mu_ + lambda_) / (mu_ + lambda_);
}

SpecialModel SpecialModel::from(const ProcessModel& model) {
    if (!model.is_special_case())
        throw ConfigError(
            "closed forms need geometric marks, exponential observation gaps and a zero initial delay; "
            "use the `functional` or `survival` commands for general models");
    return SpecialModel(model.lambda(), model.marks().a(), model.observations().recurring().rate(),
                        model.threshold());
}

SpecialModel SpecialModel::with_perturbed_c(double delta) const {
    SpecialModel out = *this;
    out.c_ += delta;
    return out;
}

ProcessModel SpecialModel::to_process_model() const {
    return ProcessModel(lambda_, MarkLaw::geometric(a_), ObservationLaw(TimeLaw::zero(), TimeLaw::exponential(mu_)),
                        threshold_);
}

//==============================================================================
// P(k, x), G_j, H_j
//==============================================================================

std::vector<double> reg_gamma_p_table(int k_max, double x) {
    if (k_max < 0) throw ArgumentError("reg_gamma_p: k must be nonnegative");
    if (!(x >= 0.0)) throw ArgumentError("reg_gamma_p: x must be nonnegative");
    // P(k, x) = P{Poisson(x) >= k}; accumulate the tail from the top so every step adds a positive term.
    std::vector<double> tail(static_cast<std::size_t>(k_max) + 2, 0.0);
    const int top = k_max + 1;
    double t = 0.0;
    if (x > 0.0) {
        if (top <= x) {
            double head = 0.0;
            for (int m = 0; m < top; ++m) head += poisson_term(m, x);
            t = std::max(0.0, 1.0 - head);
        } else {
            for (int m = top;; ++m) {
                const double p = poisson_term(m, x);
                t += p;
                if (p < 1e-300 || p < 1e-18 * t) break;
            }
        }
    }
    tail[static_cast<std::size_t>(top)] = t;
    for (int k = top - 1; k >= 0; --k)
        tail[static_cast<std::size_t>(k)] = tail[static_cast<std::size_t>(k + 1)] + poisson_term(k, x);
    tail.pop_back();
    for (auto& p : tail) p = std::min(p, 1.0);
    tail[0] = 1.0;
    return tail;
}

double reg_gamma_p(int k, double x) { return reg_gamma_p_table(k, x)[static_cast<std::size_t>(k)]; }

CoefficientTable coefficient_table(int count, double t, const SpecialModel& m) {
    if (count < 0) throw ArgumentError("coefficient count must be nonnegative");
    if (!(t >= 0.0)) throw ArgumentError("time must be nonnegative");
    const double a = m.a();
    const double b = m.b();
    const double ratio = m.mu() / m.lambda();
    const std::vector<double> P = reg_gamma_p_table(count + 1, m.lambda() * t);
    CoefficientTable out;
    out.g.resize(static_cast<std::size_t>(count));
    out.h.resize(static_cast<std::size_t>(count));
    for (int j = 0; j < count; ++j) {
        // H_j's weight a^k b^{j+1-k} is b times G_j's; the a/b term becomes a^{k+1} b^{j-k}.
        const auto w = binomial_weights(j, a, b);
        double g = 0.0;
        double h = 0.0;
        for (int k = 0; k <= j; ++k) {
            const double wk = w[static_cast<std::size_t>(k)];
            const double pk = P[static_cast<std::size_t>(k)];
            const double pk1 = P[static_cast<std::size_t>(k + 1)];
            g += wk * (pk + ratio * pk1);
            h += wk * (b * pk + b * ratio * pk1 + a * pk1);
        }
        out.g[static_cast<std::size_t>(j)] = g;
        out.h[static_cast<std::size_t>(j)] = h;
    }
    return out;
}

double coeff_g(int j, double t, const SpecialModel& m) {
    if (j < 0) throw ArgumentError("coeff_g: j must be nonnegative");
    return coefficient_table(j + 1, t, m).g.back();
}

double coeff_h(int j, double t, const SpecialModel& m) {
    if (j < 0) throw ArgumentError("coeff_h: j must be nonnegative");
    return coefficient_table(j + 1, t, m).h.back();
}

//==============================================================================
// Time-domain PGF and joint distribution
//==============================================================================

cplx ev_v_anu_before(const SpecialModel& m, cplx v, double t) {
    if (!(std::abs(v) <= 1.0 + kDomainSlack)) throw ArgumentError("ev_v_anu_before: |v| > 1");
    using detail::double_sum;
    using detail::geo_sum;
    using detail::ipow;
    const long N = m.level();
    const double lam = m.lambda();
    const double mu = m.mu();
    const double b = m.b();
    const auto co = coefficient_table(static_cast<int>(N), t, m);
    const auto& G = co.g;
    const auto& H = co.h;

    const cplx gv = m.a() * v / (1.0 - b * v);
    const cplx gamma_v = mu / (mu + lam - lam * gv);
    const cplx fm = f_of(cplx{mu}, v, m);
    const cplx bv = b * v;

    std::vector<cplx> si(static_cast<std::size_t>(N) + 1, 0.0);
    {
        cplx p = 1.0;
        for (long n = 1; n <= N; ++n) {
            si[static_cast<std::size_t>(n)] = si[static_cast<std::size_t>(n - 1)] + p;
            p *= fm;
        }
    }

    cplx out = gamma_v * (mu + lam) / lam * (ipow(v, N - 1) + (1.0 - fm) * geo_sum(v, N - 1));

    cplx bracket = ipow(v, N - 1) * G[static_cast<std::size_t>(N - 1)];
    cplx vp = 1.0;
    for (long j = 0; j < N - 1; ++j) {
        bracket += vp * G[static_cast<std::size_t>(j)] - vp * v * H[static_cast<std::size_t>(j)];
        vp *= v;
    }
    out -= gamma_v * bracket;

    out -= mu / lam *
           (double_sum(v, fm, N) - (fm + bv) * double_sum(v, fm, N - 1) + bv * fm * double_sum(v, fm, N - 2));

    cplx tail = 0.0;
    vp = 1.0;
    for (long j = 0; j < N; ++j) {
        const auto ju = static_cast<std::size_t>(j);
        tail += vp * G[ju] * si[static_cast<std::size_t>(N - j)];
        if (j < N - 1) tail -= vp * v * (b * G[ju] + H[ju]) * si[static_cast<std::size_t>(N - 1 - j)];
        if (j < N - 2) tail += b * vp * v * v * H[ju] * si[static_cast<std::size_t>(N - 2 - j)];
        vp *= v;
    }
    out += mu / (mu + lam) * tail;
    return out;
}

double r_coeff(int j, int r, const SpecialModel& m) {
    if (r < j) return 0.0;
    if (r == j) return 1.0;
    return (m.c() - m.b()) * std::pow(m.c(), r - j - 1);
}

namespace {

// Σ_{j<n} Σ_{i<n-j} 1{r = i+j+off} c^i w_j
double indicator_sum(const SpecialModel& m, int r, int n, int off, const std::vector<double>* w) {
    const int q = r - off;
    if (q < 0 || q >= n) return 0.0;
    double acc = 0.0;
    double cp = 1.0;
    // j = q - i runs down as i runs up
    for (int i = 0; i <= q; ++i) {
        const int j = q - i;
        acc += cp * (w ? (*w)[static_cast<std::size_t>(j)] : 1.0);
        cp *= m.c();
    }
    return acc;
}

double joint_from_coefficients(const SpecialModel& m, int r, const CoefficientTable& co) {
    const int N = m.level();
    const double lam = m.lambda();
    const double mu = m.mu();
    const double b = m.b();
    const double c = m.c();
    const auto& G = co.g;
    const auto& H = co.h;

    double sum_r = 0.0;
    double sum_gh = G[0] * r_coeff(0, r, m);
    for (int j = 1; j < N; ++j) {
        const double rc = r_coeff(j, r, m);
        if (rc == 0.0) continue;
        sum_r += rc;
        sum_gh += (G[static_cast<std::size_t>(j)] - H[static_cast<std::size_t>(j - 1)]) * rc;
    }
    double out = mu / lam * r_coeff(0, r, m) + mu / lam * (m.a() * mu / (mu + lam)) * sum_r;
    out -= mu / (mu + lam) * sum_gh;
    out -= mu / lam *
           (indicator_sum(m, r, N, 0, nullptr) - (b + c) * indicator_sum(m, r, N - 1, 1, nullptr) +
            b * c * indicator_sum(m, r, N - 2, 2, nullptr));

    std::vector<double> mix(G.size());
    for (std::size_t j = 0; j < G.size(); ++j) mix[j] = b * G[j] + H[j];
    out += mu / (mu + lam) *
           (indicator_sum(m, r, N, 0, &G) - indicator_sum(m, r, N - 1, 1, &mix) + b * indicator_sum(m, r, N - 2, 2, &H));

    if (out < 0.0 && out >= -kSlack) out = 0.0;
    return out;
}

}  // namespace

double joint_dist(const SpecialModel& m, int r, double t) {
    if (r < 0) throw ArgumentError("joint_dist: r must be nonnegative");
    return joint_from_coefficients(m, r, coefficient_table(m.level(), t, m));
}

std::vector<double> joint_dist_row(const SpecialModel& m, int r_max, double t) {
    if (r_max < 0) throw ArgumentError("joint_dist_row: r_max must be nonnegative");
    const auto co = coefficient_table(m.level(), t, m);
    std::vector<double> row(static_cast<std::size_t>(r_max) + 1);
    for (int r = 0; r <= r_max; ++r) row[static_cast<std::size_t>(r)] = joint_from_coefficients(m, r, co);
    return row;
}

std::vector<std::string> table_violations(const JointDistTable& table, int threshold) {
    std::vector<std::string> bad;
    char buf[160];
    for (std::size_t ti = 0; ti < table.t_grid.size(); ++ti) {
        for (int r = 0; r <= table.r_max; ++r) {
            const double p = table.at(ti, r);
            const double t = table.t_grid[ti];
            if (!std::isfinite(p) || p < -kSlack || p > 1.0 + kSlack) {
                std::snprintf(buf, sizeof buf, "t=%.12g,r=%d: value %.12g outside [0,1]", t, r, p);
                bad.emplace_back(buf);
            } else if (r <= threshold && std::abs(p) > kSlack) {
                std::snprintf(buf, sizeof buf, "t=%.12g,r=%d: value %.12g nonzero at r <= M", t, r, p);
                bad.emplace_back(buf);
            }
            if (ti > 0 && p > table.at(ti - 1, r) + kSlack) {
                std::snprintf(buf, sizeof buf, "t=%.12g,r=%d: value %.12g increases from %.12g", t, r, p,
                              table.at(ti - 1, r));
                bad.emplace_back(buf);
            }
        }
    }
    return bad;
}

JointDistTable dist_table(const SpecialModel& m, const std::vector<double>& t_grid, int r_max, Execution exec) {
    if (r_max < 0) throw ArgumentError("dist_table: r_max must be nonnegative");
    for (std::size_t i = 0; i < t_grid.size(); ++i) {
        if (!(t_grid[i] >= 0.0)) throw ArgumentError("dist_table: times must be nonnegative");
        if (i > 0 && t_grid[i] < t_grid[i - 1]) throw ArgumentError("dist_table: time grid must be sorted");
    }
    JointDistTable table;
    table.t_grid = t_grid;
    table.r_max = r_max;
    table.values.assign(t_grid.size() * static_cast<std::size_t>(r_max + 1), 0.0);
    const long nt = static_cast<long>(t_grid.size());

#pragma omp parallel for schedule(dynamic) if (exec == Execution::Parallel)
    for (long ti = 0; ti < nt; ++ti) {
        const auto row = joint_dist_row(m, r_max, t_grid[static_cast<std::size_t>(ti)]);
        std::copy(row.begin(), row.end(), table.values.begin() + ti * (r_max + 1));
    }

    auto bad = table_violations(table, m.threshold());
    if (!bad.empty()) {
        const std::string what = "joint distribution table breaks " + std::to_string(bad.size()) + " invariant(s)";
        throw ValidationError(what, std::move(bad));
    }
    return table;
}

void write_csv(const JointDistTable& table, std::ostream& out) {
    out << "t,r,probability\n";
    char buf[96];
    for (std::size_t ti = 0; ti < table.t_grid.size(); ++ti)
        for (int r = 0; r <= table.r_max; ++r) {
            std::snprintf(buf, sizeof buf, "%.12g,%d,%.12g\n", table.t_grid[ti], r, table.at(ti, r));
            out << buf;
        }
}

}  // namespace crossing
