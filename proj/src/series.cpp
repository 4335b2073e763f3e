#include "crossing/series.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <numbers>

#include "crossing/errors.hpp"

namespace crossing {

TruncatedSeries::TruncatedSeries(std::size_t order, cplx constant) : c_(order + 1, cplx{0.0}) {
    c_[0] = constant;
}

TruncatedSeries::TruncatedSeries(std::vector<cplx> coeffs) : c_(std::move(coeffs)) {
    if (c_.empty()) throw ArgumentError("a truncated series needs at least one coefficient");
}

TruncatedSeries TruncatedSeries::monomial(std::size_t order, std::size_t power, cplx coeff) {
    TruncatedSeries out(order);
    if (power <= order) out.c_[power] = coeff;
    return out;
}

cplx TruncatedSeries::operator()(cplx s) const {
    cplx acc = 0.0;
    for (auto it = c_.rbegin(); it != c_.rend(); ++it) acc = acc * s + *it;
    return acc;
}

void TruncatedSeries::require_same_order(const TruncatedSeries& o) const {
    if (o.c_.size() != c_.size()) throw ArgumentError("truncated series orders differ");
}

TruncatedSeries& TruncatedSeries::operator+=(const TruncatedSeries& o) {
    require_same_order(o);
    for (std::size_t j = 0; j < c_.size(); ++j) c_[j] += o.c_[j];
    return *this;
}

TruncatedSeries& TruncatedSeries::operator-=(const TruncatedSeries& o) {
    require_same_order(o);
    for (std::size_t j = 0; j < c_.size(); ++j) c_[j] -= o.c_[j];
    return *this;
}

TruncatedSeries& TruncatedSeries::operator*=(const TruncatedSeries& o) {
    require_same_order(o);
    const std::size_t n = c_.size();
    std::vector<cplx> out(n, cplx{0.0});
    for (std::size_t i = 0; i < n; ++i) {
        if (c_[i] == cplx{0.0}) continue;
        for (std::size_t j = 0; i + j < n; ++j) out[i + j] += c_[i] * o.c_[j];
    }
    c_ = std::move(out);
    return *this;
}

TruncatedSeries& TruncatedSeries::operator*=(cplx k) {
    for (auto& x : c_) x *= k;
    return *this;
}

TruncatedSeries& TruncatedSeries::operator+=(cplx k) {
    c_[0] += k;
    return *this;
}

TruncatedSeries TruncatedSeries::reciprocal() const {
    if (c_[0] == cplx{0.0}) throw DivergentSeriesError("series reciprocal with zero constant term");
    const std::size_t n = c_.size();
    std::vector<cplx> r(n, cplx{0.0});
    const cplx inv0 = 1.0 / c_[0];
    r[0] = inv0;
    for (std::size_t k = 1; k < n; ++k) {
        cplx acc = 0.0;
        for (std::size_t j = 1; j <= k; ++j) acc += c_[j] * r[k - j];
        r[k] = -acc * inv0;
    }
    return TruncatedSeries(std::move(r));
}

TruncatedSeries series_from_rational(const std::vector<cplx>& numer, const std::vector<cplx>& roots,
                                     std::size_t K) {
    std::vector<cplx> c(K + 1, cplx{0.0});
    for (std::size_t j = 0; j < numer.size() && j <= K; ++j) c[j] = numer[j];
    TruncatedSeries out(std::move(c));
    // Dividing by (1 - F s) is the running recurrence c_j += F c_{j-1}.
    for (const cplx F : roots)
        for (std::size_t j = 1; j <= K; ++j) out[j] += F * out[j - 1];
    return out;
}

cplx d_op_indicator(long prev, long next, cplx s) {
    if (prev < 0 || next < prev) throw ArgumentError("d_op_indicator needs 0 <= prev <= next");
    if (prev == next) return 0.0;
    return std::pow(s, static_cast<double>(prev)) - std::pow(s, static_cast<double>(next));
}

cplx d_inverse(const TruncatedSeries& series, long k) {
    if (k < 0) return 0.0;
    if (static_cast<std::size_t>(k) > series.order())
        throw InsufficientOrderError("series order " + std::to_string(series.order()) +
                                     " is below the requested level " + std::to_string(k));
    cplx acc = 0.0;
    for (long j = 0; j <= k; ++j) acc += series[static_cast<std::size_t>(j)];
    return acc;
}

cplx d_inverse_double_geometric(cplx F, cplx G, long k) {
    if (k < 0) return 0.0;
    // inner[m] = Σ_{i<=m} G^i
    std::vector<cplx> inner(static_cast<std::size_t>(k) + 1);
    cplx gp = 1.0;
    cplx run = 0.0;
    for (long m = 0; m <= k; ++m) {
        run += gp;
        inner[static_cast<std::size_t>(m)] = run;
        gp *= G;
    }
    cplx acc = 0.0;
    cplx fp = 1.0;
    for (long j = 0; j <= k; ++j) {
        acc += fp * inner[static_cast<std::size_t>(k - j)];
        fp *= F;
    }
    return acc;
}

TruncatedSeries d_transform(const std::vector<cplx>& f) {
    if (f.empty()) throw ArgumentError("d_transform needs a nonempty sequence");
    std::vector<cplx> c(f.size());
    c[0] = f[0];
    for (std::size_t p = 1; p < f.size(); ++p) c[p] = f[p] - f[p - 1];
    return TruncatedSeries(std::move(c));
}

ContourPlan ContourPlan::for_order(std::size_t K) {
    const double r = K == 0 ? 0.5 : std::min(0.5, std::pow(10.0, -3.0 / static_cast<double>(K)));
    return ContourPlan{r, std::max<std::size_t>(64, 16 * (K + 1))};
}

TruncatedSeries series_from_samples(const std::function<cplx(cplx)>& f, std::size_t K, const ContourPlan& plan,
                                    bool parallel) {
    const std::size_t n = plan.nodes;
    if (n <= K) throw ArgumentError("contour needs more nodes than the series order");
    std::vector<cplx> samples(n);
    const double step = 2.0 * std::numbers::pi / static_cast<double>(n);
    const long nn = static_cast<long>(n);

    std::exception_ptr failure;
#pragma omp parallel for schedule(static) if (parallel)
    for (long m = 0; m < nn; ++m) {
        try {
            samples[m] = f(std::polar(plan.radius, step * static_cast<double>(m)));
        } catch (...) {
#pragma omp critical(crossing_series_failure)
            if (!failure) failure = std::current_exception();
        }
    }
    if (failure) std::rethrow_exception(failure);

    std::vector<cplx> twiddle(n);
    for (std::size_t m = 0; m < n; ++m) twiddle[m] = std::polar(1.0, -step * static_cast<double>(m));

    std::vector<cplx> c(K + 1);
    double scale = 1.0 / static_cast<double>(n);
    for (std::size_t k = 0; k <= K; ++k) {
        cplx acc = 0.0;
        for (std::size_t m = 0; m < n; ++m) {
            acc += samples[m] * twiddle[(k * m) % n];
        }
        c[k] = acc * scale;
        scale /= plan.radius;
    }
    return TruncatedSeries(std::move(c));
}

}  // namespace crossing
