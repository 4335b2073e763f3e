#include "crossing/laplace.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <numbers>

#include "crossing/errors.hpp"

namespace crossing {

namespace {

std::vector<HighPrecision> stehfest_weights_hp(int n) {
    using boost::multiprecision::pow;
    auto fact = [](int k) {
        HighPrecision f = 1;
        for (int i = 2; i <= k; ++i) f *= i;
        return f;
    };
    const int half = n / 2;
    std::vector<HighPrecision> V(static_cast<std::size_t>(n));
    for (int k = 1; k <= n; ++k) {
        HighPrecision s = 0;
        for (int j = (k + 1) / 2; j <= std::min(k, half); ++j)
            s += pow(HighPrecision(j), half) * fact(2 * j) /
                 (fact(half - j) * fact(j) * fact(j - 1) * fact(k - j) * fact(2 * j - k));
        V[static_cast<std::size_t>(k - 1)] = ((k + half) % 2 == 0) ? s : HighPrecision(-s);
    }
    return V;
}

const std::vector<HighPrecision>& cached_weights_hp(int n) {
    static std::mutex mu;
    static std::map<int, std::vector<HighPrecision>> cache;
    std::lock_guard<std::mutex> lock(mu);
    auto it = cache.find(n);
    if (it == cache.end()) it = cache.emplace(n, stehfest_weights_hp(n)).first;
    return it->second;
}

void require_even_terms(int n) {
    if (n < 2 || n % 2 != 0) throw ArgumentError("Gaver-Stehfest needs an even number of terms");
}

void require_time(double t) {
    if (!(t > 0.0) || !std::isfinite(t)) throw ArgumentError("inversion time must be positive and finite");
}

}  // namespace

void InversionConfig::validate() const {
    if (method == InversionMethod::GaverStehfest && (terms < 8 || terms > 18 || terms % 2 != 0))
        throw ConfigError("Gaver-Stehfest terms must be even and within [8, 18]");
    if (nodes < 4) throw ConfigError("Talbot needs at least 4 nodes");
    if (!(abscissa_scale > 0.0)) throw ConfigError("abscissa scale must be positive");
    if (t_min > t_max) throw ConfigError("inversion window is empty");
}

std::vector<double> stehfest_weights(int n) {
    require_even_terms(n);
    const auto& hp = cached_weights_hp(n);
    std::vector<double> out(hp.size());
    std::transform(hp.begin(), hp.end(), out.begin(), [](const HighPrecision& x) { return x.convert_to<double>(); });
    return out;
}

double invert_gaver_stehfest(const Transform& f, double t, int terms, double scale) {
    require_time(t);
    const auto V = stehfest_weights(terms);
    const double step = scale * std::numbers::ln2 / t;
    double acc = 0.0;
    for (int k = 1; k <= terms; ++k) acc += V[static_cast<std::size_t>(k - 1)] * f(cplx{k * step}).real();
    const double out = step * acc;
    if (!std::isfinite(out)) throw InversionError("Gaver-Stehfest produced a non-finite value");
    return out;
}

double invert_talbot(const Transform& f, double t, int nodes, double scale) {
    require_time(t);
    const double r = scale * 2.0 * nodes / (5.0 * t);
    double acc = 0.5 * (f(cplx{r}) * std::exp(r * t)).real();
    for (int k = 1; k < nodes; ++k) {
        const double th = k * std::numbers::pi / nodes;
        const double cot = std::cos(th) / std::sin(th);
        const cplx s = r * th * cplx{cot, 1.0};
        const double sigma = th + (th * cot - 1.0) * cot;
        acc += (std::exp(t * s) * f(s) * cplx{1.0, sigma}).real();
    }
    const double out = r / nodes * acc;
    if (!std::isfinite(out)) throw InversionError("Talbot inversion produced a non-finite value");
    return out;
}

double invert(const Transform& f, double t, const InversionConfig& config) {
    config.validate();
    require_time(t);
    if (config.method == InversionMethod::Talbot) return invert_talbot(f, t, config.nodes, config.abscissa_scale);

    const double main = invert_gaver_stehfest(f, t, config.terms, config.abscissa_scale);
    if (!config.allow_fallback) return main;
    const int other = config.terms + (config.terms < 18 ? 2 : -2);
    const double check = invert_gaver_stehfest(f, t, other, config.abscissa_scale);
    if (std::abs(main - check) <= config.fallback_tolerance) return main;
    try {
        return invert_talbot(f, t, config.nodes, config.abscissa_scale);
    } catch (const ArgumentError&) {
    } catch (const UnsupportedLawError&) {
    }
    return main;
}

double invert_gaver_stehfest_hp(const std::function<HighPrecision(const HighPrecision&)>& f, double t, int terms) {
    require_time(t);
    require_even_terms(terms);
    const auto& V = cached_weights_hp(terms);
    const HighPrecision step = boost::multiprecision::log(HighPrecision(2)) / HighPrecision(t);
    HighPrecision acc = 0;
    for (int k = 1; k <= terms; ++k) acc += V[static_cast<std::size_t>(k - 1)] * f(step * k);
    const double out = (step * acc).convert_to<double>();
    if (!std::isfinite(out)) throw InversionError("Gaver-Stehfest produced a non-finite value");
    return out;
}

std::vector<double> survival_from_transform(const Transform& survival_transform, const std::vector<double>& t_grid,
                                            double mass_at_zero, const InversionConfig& config) {
    std::vector<double> out(t_grid.size());
    for (std::size_t i = 0; i < t_grid.size(); ++i) {
        const double t = t_grid[i];
        if (t < 0.0) throw ArgumentError("survival times must be nonnegative");
        const double v = t == 0.0 ? 1.0 - mass_at_zero : invert(survival_transform, t, config);
        out[i] = std::clamp(v, 0.0, 1.0);
    }
    return out;
}

std::vector<double> survival_curve(const Transform& lst, const std::vector<double>& t_grid, double mass_at_zero,
                                   const InversionConfig& config) {
    const Transform tail = [&lst](cplx theta) { return (1.0 - lst(theta)) / theta; };
    return survival_from_transform(tail, t_grid, mass_at_zero, config);
}

}  // namespace crossing
