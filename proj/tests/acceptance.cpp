// Acceptance run: one PASS/FAIL line per criterion, nonzero exit when any fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <random>
#include <sstream>
#include <string>

#include "crossing/cli.hpp"
#include "crossing/closedform.hpp"
#include "crossing/fluctuation.hpp"
#include "crossing/laplace.hpp"
#include "crossing/montecarlo.hpp"
#include "crossing/series.hpp"
#include "crossing/transforms.hpp"

using namespace crossing;

namespace {

int failures = 0;

void report(int id, bool ok, const std::string& what) {
    std::printf("[%s] criterion %d: %s\n", ok ? "PASS" : "FAIL", id, what.c_str());
    std::fflush(stdout);
    failures += !ok;
}

void run(int id, const std::function<std::pair<bool, std::string>()>& body) {
    try {
        const auto [ok, what] = body();
        report(id, ok, what);
    } catch (const std::exception& e) {
        report(id, false, std::string("threw: ") + e.what());
    }
}

std::string fmt(const char* pattern, double a, double b = 0.0, double c = 0.0) {
    char buf[240];
    std::snprintf(buf, sizeof buf, pattern, a, b, c);
    return buf;
}

double rel(cplx a, cplx b) { return std::abs(a - b) / std::max(std::abs(b), 1e-300); }

ProcessModel base_model(int threshold = 3) {
    return ProcessModel(1.0, MarkLaw::geometric(0.5), ObservationLaw(TimeLaw::zero(), TimeLaw::exponential(1.0)),
                        threshold);
}

ProcessModel random_model(std::mt19937_64& gen) {
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    const double lambda = 0.3 + 2.7 * unit(gen);
    MarkLaw marks = MarkLaw::geometric(0.1 + 0.8 * unit(gen));
    if (unit(gen) < 0.5) {
        std::vector<double> pmf(2 + gen() % 4);
        for (auto& p : pmf) p = unit(gen);
        pmf[0] *= 0.5;
        double s = 0.0;
        for (double p : pmf) s += p;
        for (auto& p : pmf) p /= s;
        marks = MarkLaw::discrete(pmf);
    }
    const double mu = 0.5 + 2.5 * unit(gen);
    TimeLaw recurring = unit(gen) < 0.7 ? TimeLaw::exponential(mu) : TimeLaw::erlang(2, 2.0 * mu);
    TimeLaw initial = unit(gen) < 0.5 ? TimeLaw::zero() : TimeLaw::exponential(0.5 + 3.0 * unit(gen));
    return ProcessModel(lambda, marks, ObservationLaw(initial, recurring), 1 + static_cast<int>(gen() % 5));
}

}  // namespace

int main() {
    const ProcessModel model = base_model();
    const SpecialModel sm = SpecialModel::from(model);

    run(1, [&] {
        const auto start = std::chrono::steady_clock::now();
        const std::vector<double> grid{0.0, 0.5, 1.0, 2.0};
        const int r_max = 12;
        const auto table = dist_table(sm, grid, r_max);
        const auto mc = estimate_joint(model, r_max, grid, 1000000, 20240611);
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        double worst = 0.0;
        for (std::size_t i = 0; i < table.values.size(); ++i)
            worst = std::max(worst,
                             std::abs(table.values[i] - mc.table.values[i]) / std::max(3.0 * mc.std_error[i], 0.005));
        return std::pair{worst <= 1.0 && secs <= 120.0,
                         fmt("dist_table vs 1e6-path MC, worst error %.3g of tolerance, %.1f s", worst, secs)};
    });

    run(2, [&] {
        double worst = 0.0;
        for (int M : {1, 2, 3, 5}) {
            const auto m = base_model(M);
            const auto s = SpecialModel::from(m);
            for (double th : {0.1, 0.5, 1.0, 2.0, 5.0})
                for (double v : {0.1, 0.3, 0.5, 0.7, 0.9})
                    worst = std::max(worst, rel(g1_star(m, TransformArgs{th, 1.0, v, 0.0, 0.0, 1.0}),
                                                g1_star_special<cplx>(s, th, v)));
        }
        return std::pair{worst <= 1e-8, fmt("g1_star vs closed form, max relative error %.3g (tol 1e-8)", worst)};
    });

    run(3, [&] {
        double worst = 0.0;
        for (double t : {0.25, 1.0, 4.0})
            for (double v : {0.3, 0.6, 0.9}) {
                const double inv = invert_gaver_stehfest_hp(
                    [&](const HighPrecision& th) { return g1_star_special<HighPrecision>(sm, th, HighPrecision(v)); },
                    t);
                worst = std::max(worst, rel(inv, ev_v_anu_before(sm, v, t)));
            }
        return std::pair{worst <= 1e-6, fmt("inverted transform vs E[v^A 1{tau>t}], max relative error %.3g", worst)};
    });

    run(4, [&] {
        double worst = 0.0;
        for (double t : {0.0, 0.25, 1.0, 4.0}) {
            const auto row = joint_dist_row(sm, 400, t);
            for (double v : {0.1, 0.3, 0.6, 0.9}) {
                double acc = 0.0;
                for (std::size_t r = row.size(); r-- > 0;) acc = acc * v + row[r];
                worst = std::max(worst, std::abs(acc - ev_v_anu_before(sm, v, t).real()));
            }
        }
        return std::pair{worst <= 1e-8, fmt("sum_r v^r joint_dist vs ev, max error %.3g", worst)};
    });

    run(5, [&] {
        std::mt19937_64 gen(5);
        std::uniform_real_distribution<double> unit(0.0, 1.0);
        double worst = 0.0;
        double boundary = 0.0;
        for (int k = 0; k < 10; ++k) {
            const auto m = random_model(gen);
            for (int i = 0; i < 100; ++i) {
                const cplx z = std::polar(std::sqrt(unit(gen)) * (1.0 - 1e-9), 2.0 * M_PI * unit(gen));
                const cplx th{1e-9 + 10.0 * unit(gen), 20.0 * (unit(gen) - 0.5)};
                worst = std::max(worst, std::abs(gamma(m, Epoch::Recurring, z, th)));
            }
            boundary = std::max(boundary, std::abs(std::abs(gamma(m, Epoch::Recurring, 1.0, 0.0)) - 1.0));
        }
        return std::pair{worst < 1.0 && boundary <= 1e-12,
                         fmt("1000 random points, max |gamma| %.9g; boundary deviation %.3g", worst, boundary)};
    });

    run(6, [&] {
        const TimeLaw T = TimeLaw::exponential(1.0);
        const TransformArgs args{0.6, 0.7, 0.8, 0.3, 0.4, 0.9};
        const auto mc = estimate_lemma_functionals(model, T, T, args, 1000000, 6);
        const double f1 = f1_star(model, T, T, args).real();
        const double f2 = f2_star(model, T, T, args).real();
        auto ok = [](double exact, const EstimateWithCI& e) {
            return std::abs(exact - e.mean) <= 0.02 * std::abs(exact) && std::abs(exact - e.mean) <= 1.96 * e.std_error;
        };
        return std::pair{ok(f1, mc.f1) && ok(f2, mc.f2),
                         fmt("f1 %.6g vs MC %.6g, ", f1, mc.f1.mean) + fmt("f2 %.6g vs MC %.6g", f2, mc.f2.mean)};
    });

    run(7, [&] {
        std::mt19937_64 gen(7);
        double worst = 0.0;
        for (int k = 0; k < 5; ++k) {
            const auto m = random_model(gen);
            for (double th : {0.1, 1.0, 10.0}) {
                const auto fv = functionals(m, TransformArgs::marginal(th));
                worst = std::max(worst, std::abs(th * (fv.g1 + fv.g2) + lst_tau_cross(m, th) - 1.0));
            }
        }
        std::vector<double> grid;
        for (int i = 0; i <= 60; ++i) grid.push_back(0.2 * i);
        const auto mc = estimate_survival(model, grid, 1000000, 77);
        SeriesOptions contour;
        contour.continue_left = true;
        const auto cross = survival_curve([&](cplx th) { return lst_tau_cross(model, th, contour); }, grid,
                                          cross_mass_at_zero(model));
        double sup = 0.0;
        for (std::size_t i = 0; i < grid.size(); ++i) sup = std::max(sup, std::abs(cross[i] - mc.cross[i]));
        return std::pair{worst <= 1e-10 && sup <= 0.005,
                         fmt("partition max error %.3g (5 models); survival sup difference %.3g", worst, sup)};
    });

    run(8, [&] {
        std::mt19937_64 gen(8);
        std::uniform_int_distribution<int> value(-1000, 1000);
        std::uniform_int_distribution<int> length(1, 31);
        std::uniform_int_distribution<int> base(-3, 3);
        std::uniform_int_distribution<int> depth(0, 12);
        long bad = 0;
        for (int trial = 0; trial < 100; ++trial) {
            std::vector<cplx> f(static_cast<std::size_t>(length(gen)));
            for (auto& x : f) x = static_cast<double>(value(gen));
            const auto s = d_transform(f);
            for (std::size_t p = 0; p < f.size(); ++p) bad += d_inverse(s, static_cast<long>(p)) != f[p];
        }
        for (int trial = 0; trial < 200; ++trial) {
            const cplx F = static_cast<double>(base(gen));
            const cplx G = static_cast<double>(base(gen));
            const long k = depth(gen);
            const auto s = series_from_rational({1.0}, {F, G}, static_cast<std::size_t>(k));
            bad += d_inverse_double_geometric(F, G, k) != d_inverse(s, k);
        }
        return std::pair{bad == 0, fmt("D-operator round trips, %g mismatches", static_cast<double>(bad))};
    });

    run(9, [&] {
        const auto path = std::filesystem::temp_directory_path() / "crossing_acceptance_model.json";
        std::ofstream(path) << R"({"schema_version": 1, "lambda": 1.0, "marks": {"geometric": {"a": 0.5}},
            "obs": {"mu": 1.0, "initial": "zero"}, "threshold": 3})";
        std::ostringstream out, err, base_out, base_err;
        const int base = cli::run({"validate", "--config", path.string()}, base_out, base_err);
        const int code = cli::run({"validate", "--config", path.string(), "--perturb-c", "1e-3"}, out, err);
        const std::string msg = err.str();
        const std::string tag = "validate: check failed: ";
        std::string names;
        for (auto at = msg.find(tag); at != std::string::npos; at = msg.find(tag, at + 1)) {
            const auto from = at + tag.size();
            names += (names.empty() ? "" : ", ") + msg.substr(from, msg.find('\n', from) - from);
        }
        return std::pair{base == 0 && code == 1 && !names.empty(),
                         "unperturbed exit " + std::to_string(base) + ", perturbed exit " + std::to_string(code) +
                             ", failed checks: " + (names.empty() ? "none" : names)};
    });

    return failures == 0 ? 0 : 1;
}
