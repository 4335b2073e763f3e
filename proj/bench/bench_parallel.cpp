// Serial vs OpenMP timings for the Monte Carlo and table kernels.

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <string>

#include <omp.h>

#include "crossing/closedform.hpp"
#include "crossing/execution.hpp"
#include "crossing/fluctuation.hpp"
#include "crossing/montecarlo.hpp"
#include "crossing/series.hpp"

using namespace crossing;

namespace {

double seconds(const std::function<void()>& body) {
    const auto start = std::chrono::steady_clock::now();
    body();
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

bool mismatch = false;

void line(const char* name, double serial, double parallel, bool same) {
    std::printf("%-22s serial %8.3f s  parallel %8.3f s  speedup %5.2fx  %s\n", name, serial, parallel,
                serial / parallel, same ? "identical" : "MISMATCH");
    mismatch |= !same;
}

}  // namespace

int main(int argc, char** argv) {
    const long paths = argc > 1 ? std::atol(argv[1]) : 400000;
    apply_thread_limit_from_env();
    std::printf("threads %d, paths %ld\n", omp_get_max_threads(), paths);

    const ProcessModel model(1.0, MarkLaw::geometric(0.5), ObservationLaw(TimeLaw::zero(), TimeLaw::exponential(1.0)), 3);
    const SpecialModel sm = SpecialModel::from(model);
    const std::vector<double> grid{0.0, 0.5, 1.0, 2.0, 4.0};

    JointEstimate js, jp;
    const double t1 = seconds([&] { js = estimate_joint(model, 12, grid, paths, 1, Execution::Serial); });
    const double t2 = seconds([&] { jp = estimate_joint(model, 12, grid, paths, 1, Execution::Parallel); });
    line("estimate_joint", t1, t2, js.table.values == jp.table.values);

    const TransformArgs args{0.7, 0.8, 0.6, 0.3, 0.5, 0.9};
    FunctionalEstimates fs, fp;
    const double t3 = seconds([&] { fs = estimate_functionals(model, args, paths, 2, {ExponentForm::Delta, {}, Execution::Serial}); });
    const double t4 = seconds([&] { fp = estimate_functionals(model, args, paths, 2, {ExponentForm::Delta, {}, Execution::Parallel}); });
    line("estimate_functionals", t3, t4, fs.g.mean == fp.g.mean && fs.g.std_error == fp.g.std_error);

    std::vector<double> wide;
    for (int i = 0; i < 64; ++i) wide.push_back(0.1 * i);
    JointDistTable ds, dp;
    const double t5 = seconds([&] { ds = dist_table(sm, wide, 60, Execution::Serial); });
    const double t6 = seconds([&] { dp = dist_table(sm, wide, 60, Execution::Parallel); });
    line("dist_table", t5, t6, ds.values == dp.values);

    const auto f = [&](cplx s) { return blocks_at(model, args, s).B1; };
    TruncatedSeries ss(0), sp(0);
    const auto plan = ContourPlan::for_order(256);
    const double t7 = seconds([&] { for (int i = 0; i < 50; ++i) ss = series_from_samples(f, 256, plan, false); });
    const double t8 = seconds([&] { for (int i = 0; i < 50; ++i) sp = series_from_samples(f, 256, plan, true); });
    line("series_from_samples", t7, t8, ss.coeffs() == sp.coeffs());

    return mismatch ? 1 : 0;
}
