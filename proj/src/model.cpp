#include "crossing/model.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include <boost/math/special_functions/gamma.hpp>

#include "crossing/errors.hpp"
#include "crossing/special.hpp"

namespace crossing {

namespace {

void require_unit_disk(cplx z, const char* what) {
    if (!(std::abs(z) <= 1.0 + kDomainSlack)) {
        std::ostringstream os;
        os << what << ": argument " << z << " lies outside the closed unit disk";
        throw ArgumentError(os.str());
    }
}

void require_right_half_plane(cplx z, const char* what) {
    if (!(z.real() >= -kDomainSlack)) {
        std::ostringstream os;
        os << what << ": argument " << z << " has negative real part";
        throw ArgumentError(os.str());
    }
}

}  // namespace

//==============================================================================
// MarkLaw
//==============================================================================

MarkLaw MarkLaw::geometric(double a) {
    if (!(a > 0.0 && a <= 1.0)) throw ConfigError("geometric mark parameter must lie in (0,1]");
    MarkLaw law;
    law.kind_ = Kind::Geometric;
    law.a_ = a;
    law.b_ = 1.0 - a;
    return law;
}

MarkLaw MarkLaw::discrete(std::vector<double> pmf) {
    if (pmf.empty()) throw ConfigError("mark pmf is empty");
    double total = 0.0;
    for (double p : pmf) {
        if (!(p >= 0.0) || !std::isfinite(p)) throw ConfigError("mark pmf has a negative or non-finite entry");
        total += p;
    }
    if (std::abs(total - 1.0) > 1e-12) throw ConfigError("mark pmf does not sum to 1 within 1e-12");
    if (pmf.front() >= 1.0) throw ConfigError("mark pmf puts all mass at 0; the threshold is never crossed");
    while (pmf.size() > 1 && pmf.back() == 0.0) pmf.pop_back();

    MarkLaw law;
    law.kind_ = Kind::GeneralDiscrete;
    law.pmf_ = std::move(pmf);
    law.cdf_.resize(law.pmf_.size());
    std::partial_sum(law.pmf_.begin(), law.pmf_.end(), law.cdf_.begin());
    law.cdf_.back() = 1.0;
    return law;
}

cplx MarkLaw::pgf(cplx z) const {
    require_unit_disk(z, "mark_pgf");
    return pgf_unchecked(z);
}

cplx MarkLaw::pgf_unchecked(cplx z) const noexcept {
    if (kind_ == Kind::Geometric) return a_ * z / (1.0 - b_ * z);
    // Horner from the top coefficient.
    cplx acc = 0.0;
    for (auto it = pmf_.rbegin(); it != pmf_.rend(); ++it) acc = acc * z + *it;
    return acc;
}

std::vector<cplx> MarkLaw::pgf_coefficients(cplx alpha, std::size_t order) const {
    std::vector<cplx> out(order + 1, cplx{0.0});
    if (kind_ == Kind::Geometric) {
        // a α^j b^{j-1}, j ≥ 1
        cplx term = a_ * alpha;
        for (std::size_t j = 1; j <= order; ++j) {
            out[j] = term;
            term *= b_ * alpha;
        }
        return out;
    }
    cplx power = 1.0;
    for (std::size_t j = 0; j <= order && j < pmf_.size(); ++j) {
        out[j] = pmf_[j] * power;
        power *= alpha;
    }
    return out;
}

double MarkLaw::mean() const noexcept {
    if (kind_ == Kind::Geometric) return 1.0 / a_;
    double m = 0.0;
    for (std::size_t k = 0; k < pmf_.size(); ++k) m += static_cast<double>(k) * pmf_[k];
    return m;
}

double MarkLaw::mass_at_zero() const noexcept {
    return kind_ == Kind::Geometric ? 0.0 : pmf_.front();
}

long MarkLaw::sample(double u) const noexcept {
    if (kind_ == Kind::Geometric) {
        if (b_ <= 0.0) return 1;
        // P{K > k} = b^k
        return 1 + static_cast<long>(std::floor(std::log1p(-u) / std::log(b_)));
    }
    auto it = std::lower_bound(cdf_.begin(), cdf_.end(), u);
    if (it == cdf_.end()) --it;
    return static_cast<long>(it - cdf_.begin());
}

cplx mark_pgf(const MarkLaw& law, cplx z) { return law.pgf(z); }

//==============================================================================
// TimeLaw
//==============================================================================

TimeLaw TimeLaw::zero() { return TimeLaw{}; }

TimeLaw TimeLaw::exponential(double rate) {
    if (!(rate > 0.0) || !std::isfinite(rate)) throw ConfigError("exponential rate must be positive");
    TimeLaw law;
    law.kind_ = Kind::Exponential;
    law.rate_ = rate;
    law.name_ = "exponential";
    return law;
}

TimeLaw TimeLaw::erlang(int shape, double rate) {
    if (shape < 1) throw ConfigError("erlang shape must be at least 1");
    if (!(rate > 0.0) || !std::isfinite(rate)) throw ConfigError("erlang rate must be positive");
    TimeLaw law;
    law.kind_ = Kind::Erlang;
    law.rate_ = rate;
    law.shape_ = shape;
    law.name_ = "erlang";
    return law;
}

TimeLaw TimeLaw::deterministic(double delay) {
    if (!(delay > 0.0) || !std::isfinite(delay)) throw ConfigError("deterministic delay must be positive");
    TimeLaw law;
    law.kind_ = Kind::Deterministic;
    law.delay_ = delay;
    law.name_ = "deterministic";
    return law;
}

TimeLaw TimeLaw::custom(std::string name, LstFn lst, LstFn derivative, QuantileFn quantile) {
    if (!lst) throw ConfigError("custom time law needs an LST evaluator");
    if (!quantile) throw ConfigError("custom time law needs a quantile sampler");
    TimeLaw law;
    law.kind_ = Kind::Custom;
    law.name_ = std::move(name);
    law.custom_lst_ = std::make_shared<const LstFn>(std::move(lst));
    if (derivative) law.custom_derivative_ = std::make_shared<const LstFn>(std::move(derivative));
    law.custom_quantile_ = std::make_shared<const QuantileFn>(std::move(quantile));
    return law;
}

cplx TimeLaw::lst(cplx z) const {
    require_right_half_plane(z, "obs_lst");
    return lst_unchecked(z);
}

cplx TimeLaw::lst_unchecked(cplx z) const {
    switch (kind_) {
        case Kind::Zero:
            return 1.0;
        case Kind::Exponential:
            return rate_ / (rate_ + z);
        case Kind::Erlang:
            return std::pow(rate_ / (rate_ + z), shape_);
        case Kind::Deterministic:
            return std::exp(-z * delay_);
        case Kind::Custom:
            return (*custom_lst_)(z);
    }
    return 1.0;
}

cplx TimeLaw::lst_derivative(cplx z) const {
    switch (kind_) {
        case Kind::Zero:
            return 0.0;
        case Kind::Exponential:
            return -rate_ / ((rate_ + z) * (rate_ + z));
        case Kind::Erlang: {
            const cplx base = rate_ / (rate_ + z);
            return -static_cast<double>(shape_) / (rate_ + z) * std::pow(base, shape_);
        }
        case Kind::Deterministic:
            return -delay_ * std::exp(-z * delay_);
        case Kind::Custom: {
            if (custom_derivative_) return (*custom_derivative_)(z);
            const double h = 1e-5;
            return ((*custom_lst_)(z + h) - (*custom_lst_)(z - h)) / (2.0 * h);
        }
    }
    return 0.0;
}

cplx TimeLaw::slope(cplx e1, cplx e2) const {
    const cplx d = e2 - e1;
    switch (kind_) {
        case Kind::Zero:
            return 0.0;
        case Kind::Exponential:
            return rate_ / ((rate_ + e1) * (rate_ + e2));
        case Kind::Erlang: {
            // (A^k - B^k)/(e2-e1) = r/((r+e1)(r+e2)) Σ A^{k-1-i} B^i
            const cplx A = rate_ / (rate_ + e1);
            const cplx B = rate_ / (rate_ + e2);
            cplx sum = 0.0;
            cplx a_pow = std::pow(A, shape_ - 1);
            cplx b_pow = 1.0;
            for (int i = 0; i < shape_; ++i) {
                sum += a_pow * b_pow;
                a_pow /= A;
                b_pow *= B;
            }
            return rate_ / ((rate_ + e1) * (rate_ + e2)) * sum;
        }
        case Kind::Deterministic:
            return delay_ * std::exp(-e1 * delay_) * exprel(-d * delay_);
        case Kind::Custom:
            if (std::abs(d) < 1e-10) return -lst_derivative(e1);
            return (lst_unchecked(e1) - lst_unchecked(e2)) / d;
    }
    return 0.0;
}

double TimeLaw::mean() const {
    switch (kind_) {
        case Kind::Zero:
            return 0.0;
        case Kind::Exponential:
            return 1.0 / rate_;
        case Kind::Erlang:
            return shape_ / rate_;
        case Kind::Deterministic:
            return delay_;
        case Kind::Custom:
            return -lst_derivative(0.0).real();
    }
    return 0.0;
}

double TimeLaw::sample(double u) const {
    switch (kind_) {
        case Kind::Zero:
            return 0.0;
        case Kind::Exponential:
            return -std::log(u) / rate_;
        case Kind::Erlang:
            return boost::math::gamma_p_inv(static_cast<double>(shape_), u) / rate_;
        case Kind::Deterministic:
            return delay_;
        case Kind::Custom:
            return (*custom_quantile_)(u);
    }
    return 0.0;
}

//==============================================================================
// ObservationLaw / ProcessModel / TransformArgs
//==============================================================================

ObservationLaw::ObservationLaw(TimeLaw initial, TimeLaw recurring)
    : initial_(std::move(initial)), recurring_(std::move(recurring)) {
    if (recurring_.kind() == TimeLaw::Kind::Zero)
        throw ConfigError("recurring observation gaps must not be degenerate at zero");
}

cplx obs_lst(const ObservationLaw& law, Epoch which, cplx z) { return law.lst(which, z); }

ProcessModel::ProcessModel(double lambda, MarkLaw marks, ObservationLaw observations, int threshold)
    : lambda_(lambda), marks_(std::move(marks)), observations_(std::move(observations)), threshold_(threshold) {
    if (!(lambda_ > 0.0) || !std::isfinite(lambda_)) throw ConfigError("arrival rate lambda must be positive");
    if (threshold_ < 1) throw ConfigError("threshold M must be at least 1");
    if (threshold_ > kMaxThreshold) throw ConfigError("threshold M exceeds the cap of 10000");
}

bool ProcessModel::is_special_case() const noexcept {
    return marks_.kind() == MarkLaw::Kind::Geometric &&
           observations_.recurring().kind() == TimeLaw::Kind::Exponential &&
           observations_.initial().kind() == TimeLaw::Kind::Zero;
}

void TransformArgs::validate() const {
    require_right_half_plane(theta, "theta");
    require_right_half_plane(w, "w");
    require_right_half_plane(x, "x");
    require_unit_disk(u, "u");
    require_unit_disk(v, "v");
    require_unit_disk(y, "y");
}

bool TransformArgs::is_real() const noexcept {
    return theta.imag() == 0.0 && u.imag() == 0.0 && v.imag() == 0.0 && w.imag() == 0.0 &&
           x.imag() == 0.0 && y.imag() == 0.0;
}

}  // namespace crossing
