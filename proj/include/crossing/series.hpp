#pragma once

#include <functional>
#include <vector>

#include "crossing/model.hpp"

namespace crossing {

/// Power series in s truncated at a fixed order K (coefficients of s^0..s^K).
/// Binary operations require equal orders; nothing silently extends K.
class TruncatedSeries {
public:
    explicit TruncatedSeries(std::size_t order, cplx constant = 0.0);
    explicit TruncatedSeries(std::vector<cplx> coeffs);

    static TruncatedSeries monomial(std::size_t order, std::size_t power, cplx coeff = 1.0);

    [[nodiscard]] std::size_t order() const noexcept { return c_.size() - 1; }
    [[nodiscard]] const std::vector<cplx>& coeffs() const noexcept { return c_; }
    cplx& operator[](std::size_t j) { return c_[j]; }
    const cplx& operator[](std::size_t j) const { return c_[j]; }

    /// Evaluate the truncated polynomial at s.
    [[nodiscard]] cplx operator()(cplx s) const;

    /// 1/f; requires f[0] != 0.
    [[nodiscard]] TruncatedSeries reciprocal() const;

    TruncatedSeries& operator+=(const TruncatedSeries& o);
    TruncatedSeries& operator-=(const TruncatedSeries& o);
    TruncatedSeries& operator*=(const TruncatedSeries& o);
    TruncatedSeries& operator*=(cplx k);
    TruncatedSeries& operator+=(cplx k);

    friend TruncatedSeries operator+(TruncatedSeries a, const TruncatedSeries& b) { return a += b; }
    friend TruncatedSeries operator-(TruncatedSeries a, const TruncatedSeries& b) { return a -= b; }
    friend TruncatedSeries operator*(TruncatedSeries a, const TruncatedSeries& b) { return a *= b; }
    friend TruncatedSeries operator*(TruncatedSeries a, cplx k) { return a *= k; }
    friend TruncatedSeries operator*(cplx k, TruncatedSeries a) { return a *= k; }
    friend TruncatedSeries operator+(TruncatedSeries a, cplx k) { return a += k; }
    friend TruncatedSeries operator+(cplx k, TruncatedSeries a) { return a += k; }
    friend TruncatedSeries operator-(TruncatedSeries a, cplx k) { return a += -k; }
    friend TruncatedSeries operator-(cplx k, const TruncatedSeries& a) { return (a * cplx{-1.0}) += k; }
    friend TruncatedSeries operator-(TruncatedSeries a) { return a *= cplx{-1.0}; }

private:
    void require_same_order(const TruncatedSeries& o) const;

    std::vector<cplx> c_;
};

/// Taylor coefficients of numer(s) / Π (1 - F_i s) up to s^K.
[[nodiscard]] TruncatedSeries series_from_rational(const std::vector<cplx>& numer,
                                                   const std::vector<cplx>& roots, std::size_t K);

/// s^prev - s^next: the image of 1{ν(p) = j} when A_{j-1} = prev and A_j = next.
[[nodiscard]] cplx d_op_indicator(long prev, long next, cplx s);

/// Inverse generating transform at level k: the partial sum of coefficients 0..k.
/// Returns 0 for k < 0; throws InsufficientOrderError when order < k.
[[nodiscard]] cplx d_inverse(const TruncatedSeries& series, long k);

/// Σ_{j=0}^{k} F^j Σ_{i=0}^{k-j} G^i; 0 for k < 0.
[[nodiscard]] cplx d_inverse_double_geometric(cplx F, cplx G, long k);

/// Forward generating transform (1-s) Σ_p s^p f(p) of a sequence f(0..K).
[[nodiscard]] TruncatedSeries d_transform(const std::vector<cplx>& f);

/// Contour sampling parameters for recovering Taylor coefficients of an analytic f.
struct ContourPlan {
    double radius;
    std::size_t nodes;

    /// Radius min(0.5, 10^{-3/K}) with max(64, 16(K+1)) nodes.
    static ContourPlan for_order(std::size_t K);
};

/// Coefficients 0..K of f from samples on the circle |s| = radius (trapezoid rule / DFT).
/// The samples are taken in parallel when `parallel` is set.
[[nodiscard]] TruncatedSeries series_from_samples(const std::function<cplx(cplx)>& f, std::size_t K,
                                                  const ContourPlan& plan, bool parallel = true);

}  // namespace crossing
