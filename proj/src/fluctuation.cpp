#include "crossing/fluctuation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "crossing/errors.hpp"
#include "crossing/transforms.hpp"

namespace crossing {

namespace {

constexpr double kSingular = 1e-10;
constexpr double kLargeTheta = 1e12;

bool law_is_rational(const TimeLaw& law) {
    switch (law.kind()) {
        case TimeLaw::Kind::Zero:
        case TimeLaw::Kind::Exponential:
        case TimeLaw::Kind::Erlang:
            return true;
        default:
            return false;
    }
}

// Pointwise backend: every quantity is a number at a fixed s.
struct PointOps {
    using value = cplx;

    const ProcessModel& model;
    cplx s;

    [[nodiscard]] cplx exponent(cplx alpha, cplx q) const { return model.exponent(alpha * s, q); }
    [[nodiscard]] cplx lst(Epoch which, cplx e) const { return model.observations().law(which).lst_unchecked(e); }
    [[nodiscard]] cplx slope(Epoch which, cplx e1, cplx e2) const {
        return model.observations().law(which).slope(e1, e2);
    }
    [[nodiscard]] static cplx recip(cplx x) { return 1.0 / x; }
};

// Coefficient backend: every quantity is a truncated series in s.
struct SeriesOps {
    using value = TruncatedSeries;

    const ProcessModel& model;
    std::size_t order;

    [[nodiscard]] TruncatedSeries exponent(cplx alpha, cplx q) const {
        const auto g = model.marks().pgf_coefficients(alpha, order);
        TruncatedSeries out(order, q + model.lambda());
        for (std::size_t j = 0; j <= order; ++j) out[j] -= model.lambda() * g[j];
        return out;
    }

    [[nodiscard]] TruncatedSeries lst(Epoch which, const TruncatedSeries& e) const {
        const TimeLaw& law = model.observations().law(which);
        switch (law.kind()) {
            case TimeLaw::Kind::Zero:
                return TruncatedSeries(order, 1.0);
            case TimeLaw::Kind::Exponential:
            case TimeLaw::Kind::Erlang: {
                const double r = law.rate();
                const TruncatedSeries base = (e + r).reciprocal() * cplx{r};
                TruncatedSeries out = base;
                for (int i = 1; i < std::max(1, law.shape()); ++i) out *= base;
                return out;
            }
            default:
                throw UnsupportedLawError("exact series route needs a rational observation law, got " + law.name());
        }
    }

    [[nodiscard]] TruncatedSeries slope(Epoch which, const TruncatedSeries& e1, const TruncatedSeries& e2) const {
        const TimeLaw& law = model.observations().law(which);
        switch (law.kind()) {
            case TimeLaw::Kind::Zero:
                return TruncatedSeries(order, 0.0);
            case TimeLaw::Kind::Exponential:
            case TimeLaw::Kind::Erlang: {
                const double r = law.rate();
                const TruncatedSeries p1 = (e1 + r).reciprocal();
                const TruncatedSeries p2 = (e2 + r).reciprocal();
                const TruncatedSeries A = p1 * cplx{r};
                const TruncatedSeries B = p2 * cplx{r};
                const TruncatedSeries sum = horner_sum(A, B, std::max(1, law.shape()));
                return p1 * p2 * sum * cplx{r};
            }
            default:
                throw UnsupportedLawError("exact series route needs a rational observation law, got " + law.name());
        }
    }

    [[nodiscard]] static TruncatedSeries recip(const TruncatedSeries& x) { return x.reciprocal(); }

private:
    // Σ_{i=0}^{k-1} A^{k-1-i} B^i
    [[nodiscard]] TruncatedSeries horner_sum(const TruncatedSeries& A, const TruncatedSeries& B, int k) const {
        TruncatedSeries acc(order, 1.0);
        TruncatedSeries bp(order, 1.0);
        for (int i = 1; i < k; ++i) {
            bp *= B;
            acc = acc * A + bp;
        }
        return acc;
    }
};

// B₁(B₂-B₃) = [γ(v,x) - γ(vs,x)] · (h(e1) - h(e2))/(e2 - e1),  h = L₀/(1-L)
template <class Ops>
typename Ops::value first_passage_kernel(const Ops& o, const ProcessModel& m, const TransformArgs& a) {
    const cplx uv = a.u * a.v;
    const cplx gv = m.observations().recurring().lst_unchecked(m.exponent(a.v, a.x));
    const auto num = gv - o.lst(Epoch::Recurring, o.exponent(a.v, a.x));
    const auto e1 = o.exponent(uv, a.w);
    const auto e2 = o.exponent(uv * a.y, a.theta + a.w);
    const auto r1 = o.recip(1.0 - o.lst(Epoch::Recurring, e1));
    const auto r2 = o.recip(1.0 - o.lst(Epoch::Recurring, e2));
    const auto hdd = o.slope(Epoch::Initial, e1, e2) * r1 +
                     o.lst(Epoch::Initial, e2) * o.slope(Epoch::Recurring, e1, e2) * r1 * r2;
    return num * hdd;
}

// Γ₀ + Γ B₃
template <class Ops>
typename Ops::value crossing_kernel(const Ops& o, const ProcessModel& m, const TransformArgs& a) {
    const cplx uvy = a.u * a.v * a.y;
    const cplx c1 = m.exponent(a.v, a.x);
    const cplx c2 = m.exponent(a.v * a.y, a.theta + a.x);
    const auto d1 = o.exponent(a.v, a.x);
    const auto d2 = o.exponent(a.v * a.y, a.theta + a.x);
    const auto& L0 = m.observations().initial();
    const auto& L = m.observations().recurring();
    const auto gamma0 = L0.slope(c1, c2) - o.slope(Epoch::Initial, d1, d2);
    const auto gamma = L.slope(c1, c2) - o.slope(Epoch::Recurring, d1, d2);
    const auto e2 = o.exponent(uvy, a.theta + a.w);
    const auto b3 = o.lst(Epoch::Initial, e2) * o.recip(1.0 - o.lst(Epoch::Recurring, e2));
    return gamma0 + gamma * b3;
}

// γ₀(v,θ) - γ₀(vs,θ) + γ₀(vs,θ)(γ(v,θ) - γ(vs,θ))/(1 - γ(vs,θ))
template <class Ops>
typename Ops::value crossing_level_kernel(const Ops& o, const ProcessModel& m, cplx v, cplx theta) {
    const cplx ev = m.exponent(v, theta);
    const cplx g0v = m.observations().initial().lst_unchecked(ev);
    const cplx gv = m.observations().recurring().lst_unchecked(ev);
    const auto evs = o.exponent(v, theta);
    const auto g0vs = o.lst(Epoch::Initial, evs);
    const auto gvs = o.lst(Epoch::Recurring, evs);
    return (g0v - g0vs) + g0vs * (gv - gvs) * o.recip(1.0 - gvs);
}

// 1 - γ₀(s,0) + γ₀(us,θ)(1 - γ(s,0))/(1 - γ(us,θ))
template <class Ops>
typename Ops::value pre_level_kernel(const Ops& o, cplx u, cplx theta) {
    const auto es = o.exponent(1.0, 0.0);
    const auto eus = o.exponent(u, theta);
    return (1.0 - o.lst(Epoch::Initial, es)) +
           o.lst(Epoch::Initial, eus) * (1.0 - o.lst(Epoch::Recurring, es)) *
               o.recip(1.0 - o.lst(Epoch::Recurring, eus));
}

std::size_t series_order(const ProcessModel& model, const SeriesOptions& opts) {
    const std::size_t K = opts.order.value_or(static_cast<std::size_t>(model.threshold()));
    if (K < static_cast<std::size_t>(model.threshold()))
        throw InsufficientOrderError("series order below the threshold level");
    return K;
}

bool use_exact(const ProcessModel& model, const SeriesOptions& opts) {
    switch (opts.route) {
        case SeriesRoute::Exact:
            if (!exact_route_available(model))
                throw UnsupportedLawError("exact series route needs rational observation laws");
            return true;
        case SeriesRoute::Sampled:
            return false;
        case SeriesRoute::Auto:
            break;
    }
    return exact_route_available(model);
}

template <class Kernel>
TruncatedSeries build_series(const ProcessModel& model, const SeriesOptions& opts, Kernel&& kernel) {
    const std::size_t K = series_order(model, opts);
    if (use_exact(model, opts)) return kernel(SeriesOps{model, K});
    return series_from_samples([&](cplx s) { return kernel(PointOps{model, s}); }, K, ContourPlan::for_order(K),
                               opts.parallel);
}

void validate_level_args(const ProcessModel& model, cplx z, cplx theta, const SeriesOptions& opts) {
    if (!(std::abs(z) <= 1.0 + kDomainSlack)) throw ArgumentError("generating argument outside the unit disk");
    if (theta.real() >= -kDomainSlack) return;
    if (!opts.continue_left) throw ArgumentError("theta has negative real part");
    if (opts.route == SeriesRoute::Sampled || !exact_route_available(model))
        throw UnsupportedLawError("continuation to Re theta < 0 needs the exact series route");
}

}  // namespace

bool exact_route_available(const ProcessModel& model) {
    return law_is_rational(model.observations().initial()) && law_is_rational(model.observations().recurring());
}


BlockValues blocks_at(const ProcessModel& model, const TransformArgs& args, cplx s) {
    args.validate();
    if (!(std::abs(s) <= 1.0 + kDomainSlack)) throw ArgumentError("blocks_at: s outside the unit disk");
    const cplx uvs = args.u * args.v * s;
    const cplx uvys = uvs * args.y;
    require_contractive(model, uvs, args.w);
    require_contractive(model, uvys, args.theta + args.w);

    BlockValues out{};
    const double lam = model.lambda();
    const auto& marks = model.marks();
    const cplx den = args.theta + lam * marks.pgf(uvs) - lam * marks.pgf(uvys);
    const cplx num = gamma(model, Epoch::Recurring, args.v, args.x) - gamma(model, Epoch::Recurring, args.v * s, args.x);
    if (std::abs(den) < kSingular)
        out.B1 = std::abs(num) < kSingular ? cplx{0.0} : cplx{std::numeric_limits<double>::infinity()};
    else
        out.B1 = num / den;
    out.B2 = gamma(model, Epoch::Initial, uvs, args.w) / (1.0 - gamma(model, Epoch::Recurring, uvs, args.w));
    out.B3 = gamma(model, Epoch::Initial, uvys, args.theta + args.w) /
             (1.0 - gamma(model, Epoch::Recurring, uvys, args.theta + args.w));

    const PointOps ops{model, s};
    const cplx c1 = model.exponent(args.v, args.x);
    const cplx c2 = model.exponent(args.v * args.y, args.theta + args.x);
    const cplx d1 = ops.exponent(args.v, args.x);
    const cplx d2 = ops.exponent(args.v * args.y, args.theta + args.x);
    const auto& L0 = model.observations().initial();
    const auto& L = model.observations().recurring();
    out.Gamma0 = L0.slope(c1, c2) - L0.slope(d1, d2);
    out.Gamma = L.slope(c1, c2) - L.slope(d1, d2);
    out.first_passage = first_passage_kernel(ops, model, args);
    out.crossing = out.Gamma0 + out.Gamma * out.B3;
    return out;
}

TruncatedSeries first_passage_series(const ProcessModel& model, const TransformArgs& args, const SeriesOptions& opts) {
    args.validate();
    return build_series(model, opts, [&](const auto& ops) { return first_passage_kernel(ops, model, args); });
}

TruncatedSeries crossing_series(const ProcessModel& model, const TransformArgs& args, const SeriesOptions& opts) {
    args.validate();
    return build_series(model, opts, [&](const auto& ops) { return crossing_kernel(ops, model, args); });
}

cplx g1_star(const ProcessModel& model, const TransformArgs& args, const SeriesOptions& opts) {
    return d_inverse(first_passage_series(model, args, opts), model.threshold());
}

cplx g2_star(const ProcessModel& model, const TransformArgs& args, const SeriesOptions& opts) {
    return d_inverse(crossing_series(model, args, opts), model.threshold());
}

cplx g_star(const ProcessModel& model, const TransformArgs& args, const SeriesOptions& opts) {
    return g1_star(model, args, opts) + g2_star(model, args, opts);
}

FunctionalValues functionals(const ProcessModel& model, const TransformArgs& args, const SeriesOptions& opts) {
    const cplx g1 = g1_star(model, args, opts);
    const cplx g2 = g2_star(model, args, opts);
    return {g1, g2, g1 + g2};
}

cplx lst_tau_pre(const ProcessModel& model, cplx theta, const SeriesOptions& opts) {
    if (!(theta.real() > 0.0) && !opts.continue_left) throw ArgumentError("lst_tau_pre needs Re theta > 0");
    return pre_crossing_transform(model, 1.0, theta, opts);
}

cplx lst_tau_cross(const ProcessModel& model, cplx theta, const SeriesOptions& opts) {
    if (!(theta.real() > 0.0) && !opts.continue_left) throw ArgumentError("lst_tau_cross needs Re theta > 0");
    return crossing_transform(model, 1.0, theta, opts);
}

cplx crossing_transform(const ProcessModel& model, cplx v, cplx theta, const SeriesOptions& opts) {
    validate_level_args(model, v, theta, opts);
    const auto series =
        build_series(model, opts, [&](const auto& ops) { return crossing_level_kernel(ops, model, v, theta); });
    return d_inverse(series, model.threshold());
}

cplx pre_crossing_transform(const ProcessModel& model, cplx u, cplx theta, const SeriesOptions& opts) {
    validate_level_args(model, u, theta, opts);
    const auto series = build_series(model, opts, [&](const auto& ops) { return pre_level_kernel(ops, u, theta); });
    return d_inverse(series, model.threshold());
}

std::vector<double> exit_level_pmf(const ProcessModel& model, int r_max, const SeriesOptions& opts) {
    if (r_max < 0) throw ArgumentError("r_max must be nonnegative");
    std::size_t n = 1024;
    while (n < 4 * static_cast<std::size_t>(r_max + 1)) n *= 2;
    std::vector<cplx> values(n);
    SeriesOptions inner = opts;
    inner.parallel = false;
    const double step = 2.0 * std::numbers::pi / static_cast<double>(n);
    const long nn = static_cast<long>(n);
    std::exception_ptr failure;
#pragma omp parallel for schedule(static) if (opts.parallel)
    for (long m = 0; m < nn; ++m) {
        try {
            values[m] = crossing_transform(model, std::polar(1.0, step * static_cast<double>(m)), 0.0, inner);
        } catch (...) {
#pragma omp critical(crossing_pmf_failure)
            if (!failure) failure = std::current_exception();
        }
    }
    if (failure) std::rethrow_exception(failure);

    std::vector<double> pmf(static_cast<std::size_t>(r_max) + 1);
    for (int r = 0; r <= r_max; ++r) {
        cplx acc = 0.0;
        for (std::size_t m = 0; m < n; ++m)
            acc += values[m] * std::polar(1.0, -step * static_cast<double>((static_cast<std::size_t>(r) * m) % n));
        const double p = acc.real() / static_cast<double>(n);
        pmf[static_cast<std::size_t>(r)] = std::abs(p) < 1e-14 ? 0.0 : p;
    }
    return pmf;
}

double cross_mass_at_zero(const ProcessModel& model) {
    return std::clamp(crossing_transform(model, 1.0, kLargeTheta).real(), 0.0, 1.0);
}

double pre_mass_at_zero(const ProcessModel& model) {
    return std::clamp(pre_crossing_transform(model, 1.0, kLargeTheta).real(), 0.0, 1.0);
}

}  // namespace crossing
