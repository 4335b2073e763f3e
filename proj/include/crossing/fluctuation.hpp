#pragma once

#include <optional>
#include <vector>

#include "crossing/model.hpp"
#include "crossing/series.hpp"

namespace crossing {

/// The building blocks of the first-passage and crossing kernels at one s.
///
/// `first_passage` is B₁(B₂-B₃) and `crossing` is Γ₀+ΓB₃, both evaluated through
/// divided differences so they stay finite where the B₁ denominator vanishes
/// (B₁ itself is reported as infinite there).
struct BlockValues {
    cplx B1;
    cplx B2;
    cplx B3;
    cplx Gamma0;
    cplx Gamma;
    cplx first_passage;
    cplx crossing;
};

/// How the s-series of a kernel is obtained.
///   Exact:   coefficient arithmetic; needs rational (Zero / Exponential / Erlang) time laws.
///   Sampled: contour sampling of the pointwise kernel; any law.
///   Auto:    Exact when available, Sampled otherwise.
enum class SeriesRoute { Auto, Exact, Sampled };

struct SeriesOptions {
    SeriesRoute route = SeriesRoute::Auto;
    /// Series order; defaults to the level M at which the inverse is taken.
    std::optional<std::size_t> order;
    bool parallel = true;
    /// Lets the level transforms and LSTs take Re θ < 0 by analytic continuation.
    /// Exact route only; used by contour inversions.
    bool continue_left = false;
};

[[nodiscard]] bool exact_route_available(const ProcessModel& model);

[[nodiscard]] BlockValues blocks_at(const ProcessModel& model, const TransformArgs& args, cplx s);

/// s-series of B₁(B₂-B₃) and of Γ₀+ΓB₃.
[[nodiscard]] TruncatedSeries first_passage_series(const ProcessModel& model, const TransformArgs& args,
                                                   const SeriesOptions& opts = {});
[[nodiscard]] TruncatedSeries crossing_series(const ProcessModel& model, const TransformArgs& args,
                                              const SeriesOptions& opts = {});

/// ∫ e^{-θt} E[u^{A_{ν-1}} v^{A_ν} e^{-wτ_{ν-1}-xΔ_ν} y^{A(t)} 1{t < τ_{ν-1}}] dt
[[nodiscard]] cplx g1_star(const ProcessModel& model, const TransformArgs& args, const SeriesOptions& opts = {});
/// Same functional on the window τ_{ν-1} ≤ t < τ_ν.
[[nodiscard]] cplx g2_star(const ProcessModel& model, const TransformArgs& args, const SeriesOptions& opts = {});
[[nodiscard]] cplx g_star(const ProcessModel& model, const TransformArgs& args, const SeriesOptions& opts = {});

struct FunctionalValues {
    cplx g1;
    cplx g2;
    cplx g;
};
[[nodiscard]] FunctionalValues functionals(const ProcessModel& model, const TransformArgs& args,
                                           const SeriesOptions& opts = {});

/// E[e^{-θτ_{ν-1}}] and E[e^{-θτ_ν}] for Re θ > 0.
[[nodiscard]] cplx lst_tau_pre(const ProcessModel& model, cplx theta, const SeriesOptions& opts = {});
[[nodiscard]] cplx lst_tau_cross(const ProcessModel& model, cplx theta, const SeriesOptions& opts = {});

/// E[v^{A_ν} e^{-θτ_ν}] from the exit decomposition directly (no time integral).
[[nodiscard]] cplx crossing_transform(const ProcessModel& model, cplx v, cplx theta,
                                      const SeriesOptions& opts = {});
/// E[u^{A_{ν-1}} e^{-θτ_{ν-1}}] likewise.
[[nodiscard]] cplx pre_crossing_transform(const ProcessModel& model, cplx u, cplx theta,
                                          const SeriesOptions& opts = {});

/// P{A_ν = r} for r = 0..r_max.
[[nodiscard]] std::vector<double> exit_level_pmf(const ProcessModel& model, int r_max,
                                                 const SeriesOptions& opts = {});

/// P{τ_ν = 0} and P{τ_{ν-1} = 0}: the atoms every survival curve starts from.
[[nodiscard]] double cross_mass_at_zero(const ProcessModel& model);
[[nodiscard]] double pre_mass_at_zero(const ProcessModel& model);

}  // namespace crossing
