#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "crossing/closedform.hpp"
#include "crossing/execution.hpp"
#include "crossing/model.hpp"
#include "crossing/rng.hpp"

namespace crossing {

/// One realization up to the first observed crossing.
struct PathRecord {
    long nu = 0;
    long a_pre = 0;
    long a_cross = 0;
    double tau_pre = 0.0;
    double tau_cross = 0.0;
    std::vector<std::pair<double, long>> probes;
    /// Arrival epochs up to τ_ν and the level A just after each one.
    std::vector<double> arrival_times;
    std::vector<long> arrival_levels;

    /// A(t) from the stored arrivals; valid for t ≤ τ_ν.
    [[nodiscard]] long level_at(double t) const;
};

struct EstimateWithCI {
    double mean = 0.0;
    double std_error = 0.0;
    long n = 0;
};

/// Paths per substream. Fixed so results never depend on the thread count.
inline constexpr long kChunkPaths = 4096;
inline constexpr long kMaxEpochs = 100000000;

/// Simulates one path from the given stream. Throws RunawayError past kMaxEpochs epochs.
void simulate_into(const ProcessModel& model, Stream& rng, const std::vector<double>& probe_times, PathRecord& out);

[[nodiscard]] PathRecord simulate_path(const ProcessModel& model, const std::vector<double>& probe_times,
                                       std::uint64_t seed);

struct JointEstimate {
    JointDistTable table;
    std::vector<double> std_error;
    long n = 0;
};

/// Frequencies of {A_ν = r, τ_{ν-1} > t} with binomial standard errors.
[[nodiscard]] JointEstimate estimate_joint(const ProcessModel& model, int r_max, const std::vector<double>& t_grid,
                                           long n_paths, std::uint64_t seed, Execution exec = Execution::Parallel);

enum class Window { G1, G2, G };
enum class ExponentForm { Delta, Tau };

struct FunctionalOptions {
    ExponentForm form = ExponentForm::Delta;
    /// Optional truncation of the time integral.
    std::optional<double> t_max;
    Execution exec = Execution::Parallel;
};

struct FunctionalEstimates {
    EstimateWithCI g1;
    EstimateWithCI g2;
    EstimateWithCI g;
};

/// Estimates ∫ e^{-θt} E[u^{A_{ν-1}} v^{A_ν} e^{-wτ_{ν-1}-xΔ_ν} y^{A(t)} 1{window}] dt with every path
/// integrated exactly over its piecewise-constant trajectory. Real arguments only.
[[nodiscard]] FunctionalEstimates estimate_functionals(const ProcessModel& model, const TransformArgs& args,
                                                       long n_paths, std::uint64_t seed,
                                                       const FunctionalOptions& opts = {});
[[nodiscard]] EstimateWithCI estimate_functional(const ProcessModel& model, const TransformArgs& args, Window which,
                                                 long n_paths, std::uint64_t seed, const FunctionalOptions& opts = {});

struct LemmaEstimates {
    EstimateWithCI f1;
    EstimateWithCI f2;
    double t_max = 0.0;
    int t_steps = 0;
};

/// Two-epoch functionals with independent T and Δ: the integrand is estimated on a
/// t-grid over [0, t_max] and trapezoid-integrated against e^{-θt}. When t_max is
/// not given it is chosen so e^{-θ t_max} < 1e-6.
[[nodiscard]] LemmaEstimates estimate_lemma_functionals(const ProcessModel& model, const TimeLaw& t_law,
                                                        const TimeLaw& delta_law, const TransformArgs& args,
                                                        long n_samples, std::uint64_t seed,
                                                        std::optional<double> t_max = {}, int t_steps = 0,
                                                        Execution exec = Execution::Parallel);

struct SurvivalEstimate {
    std::vector<double> t_grid;
    std::vector<double> pre;
    std::vector<double> cross;
    long n = 0;
};

/// Empirical P{τ_{ν-1} > t} and P{τ_ν > t}.
[[nodiscard]] SurvivalEstimate estimate_survival(const ProcessModel& model, const std::vector<double>& t_grid,
                                                 long n_paths, std::uint64_t seed,
                                                 Execution exec = Execution::Parallel);

/// Path summaries used by `simulate`: P{A_ν = r}, P{ν ≥ 2}, E[τ_ν], E[e^{-θτ_ν}] and friends.
struct PathSummary {
    std::vector<EstimateWithCI> exit_level;  // P{A_ν = r}, r = 0..r_max
    EstimateWithCI nu_at_least_two;
    EstimateWithCI mean_nu;
    EstimateWithCI mean_tau_pre;
    EstimateWithCI mean_tau_cross;
    EstimateWithCI mean_overshoot;
    EstimateWithCI lst_tau_pre;
    EstimateWithCI lst_tau_cross;
    double theta = 1.0;
};
[[nodiscard]] PathSummary summarize_paths(const ProcessModel& model, int r_max, double theta, long n_paths,
                                          std::uint64_t seed, Execution exec = Execution::Parallel);

/// Writes `quantity,mean,std_error,n` rows.
void write_estimates_csv(const std::vector<std::pair<std::string, EstimateWithCI>>& rows, std::ostream& out);

}  // namespace crossing
