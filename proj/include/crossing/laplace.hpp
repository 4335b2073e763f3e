#pragma once

#include <functional>
#include <vector>

#include <boost/multiprecision/cpp_bin_float.hpp>

#include "crossing/model.hpp"

namespace crossing {

enum class InversionMethod { GaverStehfest, Talbot };

struct InversionConfig {
    InversionMethod method = InversionMethod::GaverStehfest;
    /// Gaver–Stehfest terms: even, within [8, 18] in double precision.
    int terms = 14;
    /// Fixed-Talbot contour nodes.
    int nodes = 32;
    double t_min = 0.0;
    double t_max = 1e300;
    /// Multiplies the abscissa spacing ln2/t (Gaver–Stehfest) or the contour scale (Talbot).
    double abscissa_scale = 1.0;
    /// Switch to Talbot when GS(terms) and GS(terms+2) differ by more than this.
    double fallback_tolerance = 1e-5;
    bool allow_fallback = true;

    void validate() const;
};

using Transform = std::function<cplx(cplx)>;

/// Gaver–Stehfest weights V_1..V_n (n even), computed exactly and rounded.
[[nodiscard]] std::vector<double> stehfest_weights(int n);

[[nodiscard]] double invert_gaver_stehfest(const Transform& f, double t, int terms, double scale = 1.0);
[[nodiscard]] double invert_talbot(const Transform& f, double t, int nodes, double scale = 1.0);

/// Inverse transform at t > 0, with Gaver–Stehfest self-consistency fallback to Talbot.
/// A transform that rejects the Talbot contour keeps the Gaver–Stehfest value.
[[nodiscard]] double invert(const Transform& f, double t, const InversionConfig& config = {});

/// Gaver–Stehfest in 50-digit arithmetic for transforms that admit it.
/// Default 32 terms; roughly 1e-11 relative accuracy on smooth originals.
using HighPrecision = boost::multiprecision::cpp_bin_float_50;
[[nodiscard]] double invert_gaver_stehfest_hp(const std::function<HighPrecision(const HighPrecision&)>& f, double t,
                                              int terms = 32);

/// P{X > t} from the LST of X by inverting (1 - lst(θ))/θ.
/// t = 0 reports 1 - mass_at_zero. Clamped to [0, 1].
[[nodiscard]] std::vector<double> survival_curve(const Transform& lst, const std::vector<double>& t_grid,
                                                 double mass_at_zero = 0.0, const InversionConfig& config = {});

/// Same, but from the Laplace transform of the survival function itself.
[[nodiscard]] std::vector<double> survival_from_transform(const Transform& survival_transform,
                                                          const std::vector<double>& t_grid, double mass_at_zero = 0.0,
                                                          const InversionConfig& config = {});

}  // namespace crossing
