#include "crossing/montecarlo.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <exception>
#include <ostream>

#include "crossing/errors.hpp"
#include "crossing/special.hpp"

namespace crossing {

namespace {

struct Moments {
    double sum = 0.0;
    double sumsq = 0.0;
    long n = 0;

    void add(double x) noexcept {
        sum += x;
        sumsq += x * x;
        ++n;
    }
    void merge(const Moments& o) noexcept {
        sum += o.sum;
        sumsq += o.sumsq;
        n += o.n;
    }
    [[nodiscard]] EstimateWithCI finish() const {
        EstimateWithCI e;
        e.n = n;
        if (n == 0) return e;
        e.mean = sum / static_cast<double>(n);
        if (n > 1) {
            const double var = std::max(0.0, (sumsq - static_cast<double>(n) * e.mean * e.mean) / static_cast<double>(n - 1));
            e.std_error = std::sqrt(var / static_cast<double>(n));
        }
        return e;
    }
};

EstimateWithCI frequency(long hits, long n) {
    EstimateWithCI e;
    e.n = n;
    if (n == 0) return e;
    const double p = static_cast<double>(hits) / static_cast<double>(n);
    e.mean = p;
    e.std_error = std::sqrt(p * (1.0 - p) / static_cast<double>(n));
    return e;
}

double sample_time(const TimeLaw& law, Stream& rng) {
    switch (law.kind()) {
        case TimeLaw::Kind::Zero:
            return 0.0;
        case TimeLaw::Kind::Exponential:
            return rng.exponential(law.rate());
        case TimeLaw::Kind::Erlang: {
            double s = 0.0;
            for (int i = 0; i < law.shape(); ++i) s += rng.exponential(law.rate());
            return s;
        }
        default:
            return law.sample(rng.uniform());
    }
}

// Splits n paths into fixed chunks with their own substreams, runs them, and merges
// the per-chunk accumulators in chunk order.
template <class Acc, class PerPath>
Acc run_chunks(long n, std::uint64_t seed, Execution exec, const Acc& zero, PerPath&& per_path) {
    if (n < 1) throw ArgumentError("need at least one simulated path");
    const long chunks = (n + kChunkPaths - 1) / kChunkPaths;
    std::vector<Acc> parts(static_cast<std::size_t>(chunks), zero);
    std::exception_ptr failure;

#pragma omp parallel for schedule(dynamic) if (exec == Execution::Parallel)
    for (long c = 0; c < chunks; ++c) {
        try {
            Stream rng = Stream::substream(seed, static_cast<std::uint64_t>(c));
            const long count = std::min(kChunkPaths, n - c * kChunkPaths);
            Acc& acc = parts[static_cast<std::size_t>(c)];
            for (long i = 0; i < count; ++i) per_path(rng, acc);
        } catch (...) {
#pragma omp critical(crossing_mc_failure)
            if (!failure) failure = std::current_exception();
        }
    }
    if (failure) std::rethrow_exception(failure);

    Acc total = zero;
    for (const Acc& p : parts) total.merge(p);
    return total;
}

// ∫_lo^hi e^{-θt} y^{A(t)} dt along the stored trajectory.
double path_integral(const PathRecord& path, double lo, double hi, double theta, double y) {
    if (!(hi > lo)) return 0.0;
    const auto& times = path.arrival_times;
    auto it = std::upper_bound(times.begin(), times.end(), lo);
    long level = it == times.begin() ? 0 : path.arrival_levels[static_cast<std::size_t>(it - times.begin() - 1)];
    double acc = 0.0;
    double a = lo;
    while (true) {
        const double b = (it == times.end() || *it >= hi) ? hi : *it;
        const double d = b - a;
        if (d > 0.0) acc += std::pow(y, static_cast<double>(level)) * std::exp(-theta * a) * d * exprel(-theta * d);
        if (b >= hi) break;
        level = path.arrival_levels[static_cast<std::size_t>(it - times.begin())];
        a = b;
        ++it;
    }
    return acc;
}

void require_real(const TransformArgs& args) {
    args.validate();
    if (!args.is_real()) throw ArgumentError("Monte Carlo estimation takes real arguments only");
}

}  // namespace

long PathRecord::level_at(double t) const {
    auto it = std::upper_bound(arrival_times.begin(), arrival_times.end(), t);
    if (it == arrival_times.begin()) return 0;
    return arrival_levels[static_cast<std::size_t>(it - arrival_times.begin() - 1)];
}

void simulate_into(const ProcessModel& model, Stream& rng, const std::vector<double>& probe_times, PathRecord& out) {
    const long M = model.threshold();
    const double lam = model.lambda();
    const auto& marks = model.marks();
    const auto& obs = model.observations();

    out.arrival_times.clear();
    out.arrival_levels.clear();
    out.probes.clear();

    long level = 0;
    double next_arrival = rng.exponential(lam);
    double tau = sample_time(obs.initial(), rng);
    double tau_prev = 0.0;
    long level_prev = 0;

    auto advance_to = [&](double until) {
        while (next_arrival <= until) {
            level += marks.sample(rng.uniform());
            out.arrival_times.push_back(next_arrival);
            out.arrival_levels.push_back(level);
            next_arrival += rng.exponential(lam);
        }
    };

    advance_to(tau);
    long n = 0;
    while (level <= M) {
        if (++n > kMaxEpochs) throw RunawayError("simulation exceeded the observation-epoch cap");
        tau_prev = tau;
        level_prev = level;
        tau += sample_time(obs.recurring(), rng);
        advance_to(tau);
    }

    out.nu = n;
    out.a_pre = level_prev;
    out.a_cross = level;
    out.tau_pre = tau_prev;
    out.tau_cross = tau;
    for (double t : probe_times)
        if (t <= tau) out.probes.emplace_back(t, out.level_at(t));
}

PathRecord simulate_path(const ProcessModel& model, const std::vector<double>& probe_times, std::uint64_t seed) {
    if (!std::is_sorted(probe_times.begin(), probe_times.end())) throw ArgumentError("probe times must be sorted");
    Stream rng = Stream::substream(seed, 0);
    PathRecord rec;
    simulate_into(model, rng, probe_times, rec);
    return rec;
}

//==============================================================================
// Joint distribution
//==============================================================================

namespace {

struct CellCounts {
    std::vector<long> hits;
    void merge(const CellCounts& o) {
        for (std::size_t i = 0; i < hits.size(); ++i) hits[i] += o.hits[i];
    }
};

}  // namespace

JointEstimate estimate_joint(const ProcessModel& model, int r_max, const std::vector<double>& t_grid, long n_paths,
                             std::uint64_t seed, Execution exec) {
    if (r_max < 0) throw ArgumentError("r_max must be nonnegative");
    const std::size_t width = static_cast<std::size_t>(r_max) + 1;
    CellCounts zero{std::vector<long>(t_grid.size() * width, 0)};
    const std::vector<double> no_probes;

    const CellCounts total = run_chunks(n_paths, seed, exec, zero, [&](Stream& rng, CellCounts& acc) {
        thread_local PathRecord path;
        simulate_into(model, rng, no_probes, path);
        if (path.a_cross > r_max) return;
        for (std::size_t ti = 0; ti < t_grid.size(); ++ti)
            if (path.tau_pre > t_grid[ti]) ++acc.hits[ti * width + static_cast<std::size_t>(path.a_cross)];
    });

    JointEstimate out;
    out.n = n_paths;
    out.table.t_grid = t_grid;
    out.table.r_max = r_max;
    out.table.values.resize(total.hits.size());
    out.std_error.resize(total.hits.size());
    for (std::size_t i = 0; i < total.hits.size(); ++i) {
        const auto f = frequency(total.hits[i], n_paths);
        out.table.values[i] = f.mean;
        out.std_error[i] = f.std_error;
    }
    return out;
}

//==============================================================================
// Functionals
//==============================================================================

namespace {

struct TripleMoments {
    Moments g1, g2, g;
    void merge(const TripleMoments& o) {
        g1.merge(o.g1);
        g2.merge(o.g2);
        g.merge(o.g);
    }
};

}  // namespace

FunctionalEstimates estimate_functionals(const ProcessModel& model, const TransformArgs& args, long n_paths,
                                         std::uint64_t seed, const FunctionalOptions& opts) {
    require_real(args);
    const double theta = args.theta.real();
    const double u = args.u.real();
    const double v = args.v.real();
    const double w = args.w.real() + (opts.form == ExponentForm::Tau ? args.x.real() : 0.0);
    const double x = args.x.real();
    const double y = args.y.real();
    if (opts.t_max && !(*opts.t_max > 0.0)) throw ConfigError("t_max must be positive");
    const double cap = opts.t_max.value_or(INFINITY);
    const std::vector<double> no_probes;

    const TripleMoments total = run_chunks(n_paths, seed, opts.exec, TripleMoments{}, [&](Stream& rng, TripleMoments& acc) {
        thread_local PathRecord path;
        simulate_into(model, rng, no_probes, path);
        const double weight = std::pow(u, static_cast<double>(path.a_pre)) * std::pow(v, static_cast<double>(path.a_cross)) *
                              std::exp(-w * path.tau_pre - x * (path.tau_cross - path.tau_pre));
        const double pre = std::min(path.tau_pre, cap);
        const double cross = std::min(path.tau_cross, cap);
        const double g1 = weight * path_integral(path, 0.0, pre, theta, y);
        const double g2 = weight * path_integral(path, pre, cross, theta, y);
        acc.g1.add(g1);
        acc.g2.add(g2);
        acc.g.add(g1 + g2);
    });
    return {total.g1.finish(), total.g2.finish(), total.g.finish()};
}

EstimateWithCI estimate_functional(const ProcessModel& model, const TransformArgs& args, Window which, long n_paths,
                                   std::uint64_t seed, const FunctionalOptions& opts) {
    const auto all = estimate_functionals(model, args, n_paths, seed, opts);
    switch (which) {
        case Window::G1:
            return all.g1;
        case Window::G2:
            return all.g2;
        case Window::G:
            return all.g;
    }
    return all.g;
}

//==============================================================================
// Two-epoch functionals with independent T, Δ
//==============================================================================

namespace {

struct PairMoments {
    Moments f1, f2;
    void merge(const PairMoments& o) {
        f1.merge(o.f1);
        f2.merge(o.f2);
    }
};

}  // namespace

LemmaEstimates estimate_lemma_functionals(const ProcessModel& model, const TimeLaw& t_law, const TimeLaw& delta_law,
                                          const TransformArgs& args, long n_samples, std::uint64_t seed,
                                          std::optional<double> t_max, int t_steps, Execution exec) {
    require_real(args);
    const double theta = args.theta.real();
    if (!t_max) {
        if (!(theta > 0.0)) throw ConfigError("theta = 0 needs an explicit integration horizon");
        t_max = std::log(1e6) / theta * 1.05;
    }
    if (!(*t_max > 0.0)) throw ConfigError("t_max must be positive");
    if (t_steps <= 0) t_steps = static_cast<int>(std::ceil(*t_max / 0.005));
    const double h = *t_max / t_steps;
    const double u = args.u.real(), v = args.v.real(), w = args.w.real(), x = args.x.real(), y = args.y.real();
    const double lam = model.lambda();
    const auto& marks = model.marks();

    // Trapezoid weights times the damping factor.
    std::vector<double> kernel(static_cast<std::size_t>(t_steps) + 1);
    for (int i = 0; i <= t_steps; ++i)
        kernel[static_cast<std::size_t>(i)] = h * std::exp(-theta * i * h) * ((i == 0 || i == t_steps) ? 0.5 : 1.0);

    const PairMoments total = run_chunks(n_samples, seed, exec, PairMoments{}, [&](Stream& rng, PairMoments& acc) {
        thread_local std::vector<double> times;
        thread_local std::vector<long> levels;
        times.clear();
        levels.clear();
        const double T = sample_time(t_law, rng);
        const double D = sample_time(delta_law, rng);
        const double end = T + D;
        long level = 0;
        for (double a = rng.exponential(lam); a <= end; a += rng.exponential(lam)) {
            level += marks.sample(rng.uniform());
            times.push_back(a);
            levels.push_back(level);
        }
        auto level_at = [&](double t) -> long {
            auto it = std::upper_bound(times.begin(), times.end(), t);
            return it == times.begin() ? 0 : levels[static_cast<std::size_t>(it - times.begin() - 1)];
        };
        const double weight = std::pow(u, static_cast<double>(level_at(T))) *
                              std::pow(v, static_cast<double>(level_at(end))) * std::exp(-w * T - x * D);
        double f1 = 0.0;
        double f2 = 0.0;
        std::size_t next = 0;
        long cur = 0;
        for (int i = 0; i <= t_steps; ++i) {
            const double t = i * h;
            if (t >= end) break;
            while (next < times.size() && times[next] <= t) cur = levels[next++];
            const double val = kernel[static_cast<std::size_t>(i)] * std::pow(y, static_cast<double>(cur));
            if (t < T)
                f1 += val;
            else
                f2 += val;
        }
        acc.f1.add(weight * f1);
        acc.f2.add(weight * f2);
    });

    LemmaEstimates out;
    out.f1 = total.f1.finish();
    out.f2 = total.f2.finish();
    out.t_max = *t_max;
    out.t_steps = t_steps;
    return out;
}

//==============================================================================
// Survival and summaries
//==============================================================================

namespace {

struct SurvivalCounts {
    std::vector<long> pre, cross;
    void merge(const SurvivalCounts& o) {
        for (std::size_t i = 0; i < pre.size(); ++i) {
            pre[i] += o.pre[i];
            cross[i] += o.cross[i];
        }
    }
};

struct SummaryAcc {
    std::vector<long> levels;
    long nu2 = 0;
    Moments nu, tau_pre, tau_cross, overshoot, lst_pre, lst_cross;
    void merge(const SummaryAcc& o) {
        for (std::size_t i = 0; i < levels.size(); ++i) levels[i] += o.levels[i];
        nu2 += o.nu2;
        nu.merge(o.nu);
        tau_pre.merge(o.tau_pre);
        tau_cross.merge(o.tau_cross);
        overshoot.merge(o.overshoot);
        lst_pre.merge(o.lst_pre);
        lst_cross.merge(o.lst_cross);
    }
};

}  // namespace

SurvivalEstimate estimate_survival(const ProcessModel& model, const std::vector<double>& t_grid, long n_paths,
                                   std::uint64_t seed, Execution exec) {
    const std::size_t nt = t_grid.size();
    SurvivalCounts zero{std::vector<long>(nt, 0), std::vector<long>(nt, 0)};
    const std::vector<double> no_probes;
    const SurvivalCounts total = run_chunks(n_paths, seed, exec, zero, [&](Stream& rng, SurvivalCounts& acc) {
        thread_local PathRecord path;
        simulate_into(model, rng, no_probes, path);
        for (std::size_t i = 0; i < nt; ++i) {
            if (path.tau_pre > t_grid[i]) ++acc.pre[i];
            if (path.tau_cross > t_grid[i]) ++acc.cross[i];
        }
    });
    SurvivalEstimate out;
    out.t_grid = t_grid;
    out.n = n_paths;
    out.pre.resize(nt);
    out.cross.resize(nt);
    for (std::size_t i = 0; i < nt; ++i) {
        out.pre[i] = static_cast<double>(total.pre[i]) / static_cast<double>(n_paths);
        out.cross[i] = static_cast<double>(total.cross[i]) / static_cast<double>(n_paths);
    }
    return out;
}

PathSummary summarize_paths(const ProcessModel& model, int r_max, double theta, long n_paths, std::uint64_t seed,
                            Execution exec) {
    if (r_max < 0) throw ArgumentError("r_max must be nonnegative");
    if (!(theta >= 0.0)) throw ArgumentError("theta must be nonnegative");
    SummaryAcc zero;
    zero.levels.assign(static_cast<std::size_t>(r_max) + 1, 0);
    const std::vector<double> no_probes;
    const long M = model.threshold();
    const SummaryAcc total = run_chunks(n_paths, seed, exec, zero, [&](Stream& rng, SummaryAcc& acc) {
        thread_local PathRecord path;
        simulate_into(model, rng, no_probes, path);
        if (path.a_cross <= r_max) ++acc.levels[static_cast<std::size_t>(path.a_cross)];
        if (path.nu >= 2) ++acc.nu2;
        acc.nu.add(static_cast<double>(path.nu));
        acc.tau_pre.add(path.tau_pre);
        acc.tau_cross.add(path.tau_cross);
        acc.overshoot.add(static_cast<double>(path.a_cross - M));
        acc.lst_pre.add(std::exp(-theta * path.tau_pre));
        acc.lst_cross.add(std::exp(-theta * path.tau_cross));
    });
    PathSummary out;
    out.theta = theta;
    for (long hits : total.levels) out.exit_level.push_back(frequency(hits, n_paths));
    out.nu_at_least_two = frequency(total.nu2, n_paths);
    out.mean_nu = total.nu.finish();
    out.mean_tau_pre = total.tau_pre.finish();
    out.mean_tau_cross = total.tau_cross.finish();
    out.mean_overshoot = total.overshoot.finish();
    out.lst_tau_pre = total.lst_pre.finish();
    out.lst_tau_cross = total.lst_cross.finish();
    return out;
}

void write_estimates_csv(const std::vector<std::pair<std::string, EstimateWithCI>>& rows, std::ostream& out) {
    out << "quantity,mean,std_error,n\n";
    char buf[160];
    for (const auto& [name, e] : rows) {
        std::snprintf(buf, sizeof buf, ",%.12g,%.12g,%ld\n", e.mean, e.std_error, e.n);
        out << name << buf;
    }
}

}  // namespace crossing
