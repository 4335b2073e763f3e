#pragma once

#include <complex>
#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

namespace crossing {

using cplx = std::complex<double>;

inline constexpr double kDomainSlack = 1e-12;
inline constexpr int kMaxThreshold = 10000;

//==============================================================================
// Marks
//==============================================================================

/// Law of the integer mark carried by each Poisson arrival.
///
/// Geometric(a) has support {1,2,...} with P{k} = a b^{k-1}, b = 1-a, and PGF
/// g(z) = az/(1-bz). GeneralDiscrete is a finite probability vector over
/// {0,1,...,K}.
class MarkLaw {
public:
    enum class Kind { Geometric, GeneralDiscrete };

    static MarkLaw geometric(double a);
    static MarkLaw discrete(std::vector<double> pmf);

    [[nodiscard]] Kind kind() const noexcept { return kind_; }
    [[nodiscard]] double a() const noexcept { return a_; }
    [[nodiscard]] double b() const noexcept { return b_; }
    [[nodiscard]] const std::vector<double>& pmf() const noexcept { return pmf_; }

    /// g(z) with the domain check ‖z‖ ≤ 1.
    [[nodiscard]] cplx pgf(cplx z) const;
    /// g(z) without the domain check (used on formal series and contours).
    [[nodiscard]] cplx pgf_unchecked(cplx z) const noexcept;
    /// Taylor coefficients of s ↦ g(αs) up to s^order.
    [[nodiscard]] std::vector<cplx> pgf_coefficients(cplx alpha, std::size_t order) const;

    [[nodiscard]] double mean() const noexcept;
    [[nodiscard]] double mass_at_zero() const noexcept;

    /// Inverse-CDF draw from a uniform u in (0,1).
    [[nodiscard]] long sample(double u) const noexcept;

private:
    MarkLaw() = default;

    Kind kind_ = Kind::Geometric;
    double a_ = 1.0;
    double b_ = 0.0;
    std::vector<double> pmf_;
    std::vector<double> cdf_;
};

[[nodiscard]] cplx mark_pgf(const MarkLaw& law, cplx z);

//==============================================================================
// Nonnegative time laws
//==============================================================================

/// Law of a nonnegative random time, described by its LST
/// L(z) = E[exp(-zX)] and an inverse-CDF sampler.
///
/// Zero, Exponential, Erlang and Deterministic carry exact evaluators for L, L'
/// and the slope (L(e1)-L(e2))/(e2-e1). Custom laws take user callables; their
/// slope falls back to the derivative when |e2-e1| < 1e-10.
class TimeLaw {
public:
    enum class Kind { Zero, Exponential, Erlang, Deterministic, Custom };

    using LstFn = std::function<cplx(cplx)>;
    using QuantileFn = std::function<double(double)>;

    static TimeLaw zero();
    static TimeLaw exponential(double rate);
    static TimeLaw erlang(int shape, double rate);
    static TimeLaw deterministic(double delay);
    /// derivative may be empty; a central difference is used then.
    static TimeLaw custom(std::string name, LstFn lst, LstFn derivative, QuantileFn quantile);

    [[nodiscard]] Kind kind() const noexcept { return kind_; }
    [[nodiscard]] double rate() const noexcept { return rate_; }
    [[nodiscard]] int shape() const noexcept { return shape_; }
    [[nodiscard]] double delay() const noexcept { return delay_; }
    [[nodiscard]] const std::string& name() const noexcept { return name_; }
    [[nodiscard]] bool is_rational() const noexcept {
        return kind_ == Kind::Zero || kind_ == Kind::Exponential;
    }

    /// L(z) for Re z ≥ 0.
    [[nodiscard]] cplx lst(cplx z) const;
    /// L(z) continued to wherever the closed form is defined.
    [[nodiscard]] cplx lst_unchecked(cplx z) const;
    [[nodiscard]] cplx lst_derivative(cplx z) const;
    /// (L(e1) - L(e2)) / (e2 - e1), with the limit -L'(e1) on the diagonal.
    [[nodiscard]] cplx slope(cplx e1, cplx e2) const;

    [[nodiscard]] double mean() const;
    [[nodiscard]] double sample(double u) const;

private:
    TimeLaw() = default;

    Kind kind_ = Kind::Zero;
    double rate_ = 0.0;
    int shape_ = 0;
    double delay_ = 0.0;
    std::string name_ = "zero";
    std::shared_ptr<const LstFn> custom_lst_;
    std::shared_ptr<const LstFn> custom_derivative_;
    std::shared_ptr<const QuantileFn> custom_quantile_;
};

enum class Epoch { Initial, Recurring };

/// Observation grid: τ₀ = Δ₀ drawn from `initial`, then i.i.d. gaps from `recurring`.
class ObservationLaw {
public:
    ObservationLaw(TimeLaw initial, TimeLaw recurring);

    [[nodiscard]] const TimeLaw& initial() const noexcept { return initial_; }
    [[nodiscard]] const TimeLaw& recurring() const noexcept { return recurring_; }
    [[nodiscard]] const TimeLaw& law(Epoch which) const noexcept {
        return which == Epoch::Initial ? initial_ : recurring_;
    }
    /// L₀(z) or L(z); Re z ≥ 0.
    [[nodiscard]] cplx lst(Epoch which, cplx z) const { return law(which).lst(z); }

private:
    TimeLaw initial_;
    TimeLaw recurring_;
};

[[nodiscard]] cplx obs_lst(const ObservationLaw& law, Epoch which, cplx z);

//==============================================================================
// Process model and transform arguments
//==============================================================================

/// Marked Poisson process A(t) of rate λ observed on a delayed renewal grid,
/// with exit index ν = inf{n : A(τ_n) > M}.
class ProcessModel {
public:
    ProcessModel(double lambda, MarkLaw marks, ObservationLaw observations, int threshold);

    [[nodiscard]] double lambda() const noexcept { return lambda_; }
    [[nodiscard]] const MarkLaw& marks() const noexcept { return marks_; }
    [[nodiscard]] const ObservationLaw& observations() const noexcept { return observations_; }
    [[nodiscard]] int threshold() const noexcept { return threshold_; }

    /// q + λ - λ g(z): the argument at which L turns into γ(z, q).
    [[nodiscard]] cplx exponent(cplx z, cplx q) const noexcept {
        return q + lambda_ - lambda_ * marks_.pgf_unchecked(z);
    }

    /// Geometric marks, exponential gaps and τ₀ = 0.
    [[nodiscard]] bool is_special_case() const noexcept;

private:
    double lambda_;
    MarkLaw marks_;
    ObservationLaw observations_;
    int threshold_;
};

/// Arguments (θ,u,v,w,x,y) of the joint functionals.
struct TransformArgs {
    cplx theta{0.0};
    cplx u{1.0};
    cplx v{1.0};
    cplx w{0.0};
    cplx x{0.0};
    cplx y{1.0};

    /// (θ,1,1,0,0,1): the arguments that reduce G* to time marginals.
    static TransformArgs marginal(cplx theta) { return TransformArgs{theta, 1.0, 1.0, 0.0, 0.0, 1.0}; }

    /// Re θ, Re w, Re x ≥ 0 and ‖u‖, ‖v‖, ‖y‖ ≤ 1. Throws ArgumentError.
    void validate() const;
    [[nodiscard]] bool is_real() const noexcept;
};

}  // namespace crossing
