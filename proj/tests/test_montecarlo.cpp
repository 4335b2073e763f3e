#include <doctest.h>

#include <sstream>

#include "crossing/errors.hpp"
#include "crossing/montecarlo.hpp"
#include "support.hpp"

using namespace crossing;

namespace {

bool agree(const EstimateWithCI& e, const oracle::Stat& s, double k = 3.0) {
    return std::abs(e.mean - s.mean) <= k * std::hypot(e.std_error, s.se);
}

}  // namespace

TEST_CASE("paths are reproducible") {
    const auto m = testing::special();
    const auto a = simulate_path(m, {0.5, 1.0, 50.0}, 42);
    const auto b = simulate_path(m, {0.5, 1.0, 50.0}, 42);
    CHECK(a.nu == b.nu);
    CHECK(a.tau_cross == b.tau_cross);
    CHECK(a.arrival_times == b.arrival_times);
    CHECK(a.a_cross > 3);
    CHECK(a.a_pre <= 3);
    CHECK(a.tau_pre <= a.tau_cross);
    for (const auto& [t, level] : a.probes) {
        CHECK(t <= a.tau_cross);
        CHECK(level == a.level_at(t));
    }
    CHECK(a.level_at(a.tau_cross) == a.a_cross);
    CHECK_THROWS_AS((void)simulate_path(m, {1.0, 0.5}, 1), ArgumentError);
}

TEST_CASE("unit marks") {
    const ProcessModel m(2.0, MarkLaw::discrete({0.0, 1.0}), ObservationLaw(TimeLaw::zero(), TimeLaw::exponential(1.0)), 1);
    for (std::uint64_t seed = 0; seed < 200; ++seed) {
        const auto p = simulate_path(m, {}, seed);
        CHECK(p.a_cross >= 2);
        CHECK(p.a_pre <= 1);
        CHECK(p.a_cross == static_cast<long>(p.arrival_times.size()));
    }
}

TEST_CASE("serial and parallel runs are identical") {
    const auto m = testing::delayed();
    const std::vector<double> grid{0.0, 0.5, 1.5};
    const auto s = estimate_joint(m, 10, grid, 20000, 7, Execution::Serial);
    const auto p = estimate_joint(m, 10, grid, 20000, 7, Execution::Parallel);
    CHECK(s.table.values == p.table.values);
    const TransformArgs args{0.7, 0.8, 0.6, 0.3, 0.5, 0.9};
    const auto fs = estimate_functionals(m, args, 20000, 3, {ExponentForm::Delta, {}, Execution::Serial});
    const auto fp = estimate_functionals(m, args, 20000, 3, {ExponentForm::Delta, {}, Execution::Parallel});
    CHECK(fs.g1.mean == fp.g1.mean);
    CHECK(fs.g2.std_error == fp.g2.std_error);
}

TEST_CASE("joint frequencies") {
    const auto m = testing::special();
    const std::vector<double> grid{0.0, 1.0};
    const auto j = estimate_joint(m, 60, grid, 200000, 5);
    const auto surv = estimate_survival(m, grid, 200000, 5);
    for (std::size_t ti = 0; ti < grid.size(); ++ti) {
        double sum = 0.0;
        for (int r = 0; r <= 60; ++r) sum += j.table.at(ti, r);
        CHECK(sum == doctest::Approx(surv.pre[ti]).epsilon(1e-12));
        for (int r = 0; r <= 3; ++r) CHECK(j.table.at(ti, r) == 0.0);
    }
    EstimateWithCI cell{j.table.at(1, 4), j.std_error[1 * 61 + 4], j.n};
    CHECK(agree(cell, oracle::special_joint_r4_t1));
}

TEST_CASE("indicator integral identities") {
    const auto m = testing::special();
    const double th = 0.8;
    const auto g = estimate_functionals(m, TransformArgs::marginal(th), 50000, 9);
    const auto s = summarize_paths(m, 10, th, 50000, 9);
    CHECK(g.g.mean == doctest::Approx((1.0 - s.lst_tau_cross.mean) / th).epsilon(1e-12));
    CHECK(g.g2.mean == doctest::Approx((s.lst_tau_pre.mean - s.lst_tau_cross.mean) / th).epsilon(1e-12));
    CHECK(g.g1.mean + g.g2.mean == doctest::Approx(g.g.mean).epsilon(1e-12));
}

TEST_CASE("summaries against an independent simulator") {
    const auto s = summarize_paths(testing::special(), 12, 1.0, 400000, 17);
    CHECK(agree(s.mean_tau_cross, oracle::special_mean_tau_cross));
    CHECK(agree(s.lst_tau_cross, oracle::special_lst_cross_theta1));
    CHECK(agree(s.nu_at_least_two, oracle::special_nu_at_least_two));
    const auto d = summarize_paths(testing::delayed(), 12, 0.7, 400000, 18);
    CHECK(agree(d.lst_tau_cross, oracle::delayed_lst_cross_theta07));
    CHECK(agree(d.exit_level[3], oracle::delayed_exit_level_3));
}

TEST_CASE("two-epoch estimator") {
    const auto T = TimeLaw::exponential(1.0);
    const TransformArgs args{0.6, 0.7, 0.8, 0.3, 0.4, 0.9};
    const auto e = estimate_lemma_functionals(testing::special(), T, T, args, 200000, 4);
    CHECK(std::exp(-0.6 * e.t_max) < 1e-6);
    CHECK(agree(e.f1, oracle::lemma_f1));
    CHECK(agree(e.f2, oracle::lemma_f2));
    CHECK_THROWS_AS((void)estimate_lemma_functionals(testing::special(), T, T, TransformArgs::marginal(0.0), 10, 1),
                    ConfigError);
}

TEST_CASE("exponent forms") {
    const auto m = testing::delayed();
    const TransformArgs no_gap{0.7, 0.8, 0.6, 0.3, 0.0, 0.9};
    const auto a = estimate_functionals(m, no_gap, 20000, 2, {ExponentForm::Delta, {}, Execution::Parallel});
    const auto b = estimate_functionals(m, no_gap, 20000, 2, {ExponentForm::Tau, {}, Execution::Parallel});
    CHECK(a.g.mean == b.g.mean);
    const TransformArgs gap{0.7, 0.8, 0.6, 0.3, 0.5, 0.9};
    const auto c = estimate_functionals(m, gap, 20000, 2, {ExponentForm::Delta, {}, Execution::Parallel});
    const auto d = estimate_functionals(m, gap, 20000, 2, {ExponentForm::Tau, {}, Execution::Parallel});
    CHECK(d.g.mean < c.g.mean);
    const auto cut = estimate_functionals(m, gap, 20000, 2, {ExponentForm::Delta, 0.5, Execution::Parallel});
    CHECK(cut.g.mean < c.g.mean);
}

TEST_CASE("estimate csv") {
    std::ostringstream out;
    write_estimates_csv({{"mean_nu", {2.5, 0.01, 100}}}, out);
    CHECK(out.str() == "quantity,mean,std_error,n\nmean_nu,2.5,0.01,100\n");
    CHECK_THROWS_AS((void)estimate_joint(testing::special(), 3, {0.0}, 0, 1), ArgumentError);
}
