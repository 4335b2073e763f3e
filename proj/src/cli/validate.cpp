#include "crossing/validate.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>

#include <json.hpp>

#include "crossing/closedform.hpp"
#include "crossing/errors.hpp"
#include "crossing/fluctuation.hpp"
#include "crossing/laplace.hpp"
#include "crossing/montecarlo.hpp"
#include "crossing/series.hpp"
#include "crossing/transforms.hpp"

namespace crossing {

namespace {

std::string fmt(const char* pattern, double a, double b = 0.0, double c = 0.0) {
    char buf[200];
    std::snprintf(buf, sizeof buf, pattern, a, b, c);
    return buf;
}

Check make_check(std::string name, double error, double tolerance, std::string detail = {}) {
    Check c;
    c.name = std::move(name);
    c.error = error;
    c.tolerance = tolerance;
    c.passed = std::isfinite(error) && error <= tolerance;
    c.detail = std::move(detail);
    return c;
}

// Runs body, turning a library exception into a failed check of the same name.
Check guarded(const std::string& name, const std::function<Check()>& body) {
    try {
        return body();
    } catch (const std::exception& e) {
        Check c = make_check(name, INFINITY, 0.0, std::string("threw: ") + e.what());
        c.passed = false;
        return c;
    }
}

double rel(cplx a, cplx b) { return std::abs(a - b) / std::max(std::abs(b), 1e-300); }

constexpr double kLemmaTheta = 0.6;

// ---- closed-form suite ------------------------------------------------------

Check joint_vs_mc(const SpecialModel& sm, const ProcessModel& model, const ValidateOptions& o) {
    const std::vector<double> grid{0.0, 0.5, 1.0, 2.0};
    const int r_max = 12;
    const auto table = dist_table(sm, grid, r_max, o.exec);
    const auto mc = estimate_joint(model, r_max, grid, o.paths, o.seed, o.exec);
    double worst = 0.0;
    std::string where;
    for (std::size_t i = 0; i < table.values.size(); ++i) {
        const double tol = std::max(3.0 * mc.std_error[i], 0.005);
        const double ratio = std::abs(table.values[i] - mc.table.values[i]) / tol;
        if (ratio > worst) {
            worst = ratio;
            where = fmt("worst cell t=%g r=%g", grid[i / (r_max + 1)], static_cast<double>(i % (r_max + 1)));
        }
    }
    return make_check("joint_dist_vs_montecarlo", worst, 1.0, where + "; error in units of max(3 SE, 0.005)");
}

Check table_invariants(const SpecialModel& sm) {
    const std::vector<double> grid{0.0, 0.25, 0.5, 1.0, 2.0, 4.0};
    JointDistTable table;
    table.t_grid = grid;
    table.r_max = 20;
    for (double t : grid) {
        const auto row = joint_dist_row(sm, table.r_max, t);
        table.values.insert(table.values.end(), row.begin(), row.end());
    }
    const auto bad = table_violations(table, sm.threshold());
    return make_check("joint_dist_table_invariants", static_cast<double>(bad.size()), 0.0,
                      bad.empty() ? "" : bad.front());
}

Check fluctuation_vs_closedform(const SpecialModel& sm, const ProcessModel& model) {
    double worst = 0.0;
    for (double th : {0.1, 0.5, 1.0, 2.0, 5.0})
        for (double v : {0.1, 0.3, 0.5, 0.7, 0.9})
            worst = std::max(worst, rel(g1_star(model, TransformArgs{th, 1.0, v, 0.0, 0.0, 1.0}),
                                        g1_star_special<cplx>(sm, th, v)));
    return make_check("fluctuation_vs_closedform", worst, 1e-8, "relative error over a 5x5 (theta, v) grid");
}

Check laplace_round_trip(const SpecialModel& sm) {
    double worst = 0.0;
    for (double t : {0.25, 1.0, 4.0})
        for (double v : {0.3, 0.6, 0.9}) {
            const double inv = invert_gaver_stehfest_hp(
                [&](const HighPrecision& th) { return g1_star_special<HighPrecision>(sm, th, HighPrecision(v)); }, t);
            worst = std::max(worst, rel(inv, ev_v_anu_before(sm, v, t)));
        }
    return make_check("laplace_round_trip", worst, 1e-6, "relative error of the inverted transform");
}

Check pgf_consistency(const SpecialModel& sm) {
    double worst = 0.0;
    for (double t : {0.25, 1.0, 4.0}) {
        const auto row = joint_dist_row(sm, 400, t);
        for (double v : {0.3, 0.6, 0.9}) {
            double acc = 0.0;
            for (std::size_t r = row.size(); r-- > 0;) acc = acc * v + row[r];
            worst = std::max(worst, std::abs(acc - ev_v_anu_before(sm, v, t).real()));
        }
    }
    return make_check("joint_dist_pgf_consistency", worst, 1e-8, "absolute error of sum_r v^r P{A=r, tau>t}");
}

// ---- general suite ----------------------------------------------------------

Check gamma_contraction(const ProcessModel& model, std::uint64_t seed) {
    std::mt19937_64 gen(seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    double worst = 0.0;
    for (int i = 0; i < 1000; ++i) {
        const double rz = std::sqrt(unit(gen)) * (1.0 - 1e-6);
        const cplx z = std::polar(rz, 2.0 * M_PI * unit(gen));
        const cplx th{1e-6 + 5.0 * unit(gen), 10.0 * (unit(gen) - 0.5)};
        worst = std::max(worst, std::abs(gamma(model, Epoch::Recurring, z, th)));
    }
    const double boundary = std::abs(std::abs(gamma(model, Epoch::Recurring, 1.0, 0.0)) - 1.0);
    Check c = make_check("gamma_contraction", worst, 1.0, fmt("max |gamma| %.6g; boundary deviation %.3g", worst, boundary));
    c.passed = worst < 1.0 && boundary <= 1e-12;
    return c;
}

Check lemma_vs_mc(const ProcessModel& model, const ValidateOptions& o) {
    const TimeLaw T = TimeLaw::exponential(1.0);
    const TimeLaw D = TimeLaw::exponential(1.0);
    const TransformArgs args{kLemmaTheta, 0.7, 0.8, 0.3, 0.4, 0.9};
    const auto mc = estimate_lemma_functionals(model, T, D, args, o.paths, o.seed + 1, {}, 0, o.exec);
    const double f1 = f1_star(model, T, D, args).real();
    const double f2 = f2_star(model, T, D, args).real();
    // Worst of the relative error in units of 2% and the deviation in units of 1.96 SE.
    const double s1 = std::max(std::abs(f1 - mc.f1.mean) / (0.02 * std::abs(f1)),
                               std::abs(f1 - mc.f1.mean) / (1.96 * mc.f1.std_error));
    const double s2 = std::max(std::abs(f2 - mc.f2.mean) / (0.02 * std::abs(f2)),
                               std::abs(f2 - mc.f2.mean) / (1.96 * mc.f2.std_error));
    return make_check("lemma_functionals_vs_montecarlo", std::max(s1, s2), 1.0,
                      fmt("f1 %.6g vs %.6g; f2 %.6g", f1, mc.f1.mean, f2) + fmt(" vs %.6g", mc.f2.mean));
}

Check partition(const ProcessModel& model) {
    double worst = 0.0;
    for (double th : {0.1, 1.0, 10.0}) {
        const auto fv = functionals(model, TransformArgs::marginal(th));
        worst = std::max(worst, std::abs(th * fv.g + lst_tau_cross(model, th) - 1.0));
    }
    return make_check("partition_identity", worst, 1e-10, "|theta G + L_tau - 1| for theta in {0.1, 1, 10}");
}

Check survival_vs_mc(const ProcessModel& model, const ValidateOptions& o) {
    std::vector<double> grid;
    const double scale = 2.0 * (model.observations().initial().mean() +
                                (model.threshold() + 1.0) / (model.lambda() * model.marks().mean()) +
                                model.observations().recurring().mean());
    for (int i = 0; i <= 40; ++i) grid.push_back(scale * i / 40.0);
    const auto mc = estimate_survival(model, grid, o.paths, o.seed + 2, o.exec);
    SeriesOptions contour;
    contour.continue_left = exact_route_available(model);
    const auto pre = survival_curve([&](cplx th) { return lst_tau_pre(model, th, contour); }, grid, pre_mass_at_zero(model));
    const auto cross =
        survival_curve([&](cplx th) { return lst_tau_cross(model, th, contour); }, grid, cross_mass_at_zero(model));
    double worst = 0.0;
    for (std::size_t i = 0; i < grid.size(); ++i)
        worst = std::max({worst, std::abs(pre[i] - mc.pre[i]), std::abs(cross[i] - mc.cross[i])});
    return make_check("survival_vs_montecarlo", worst, 0.005, "sup difference of both survival curves");
}

Check functionals_vs_mc(const ProcessModel& model, const ValidateOptions& o) {
    const TransformArgs args{0.7, 0.8, 0.6, 0.3, 0.5, 0.9};
    const auto fv = functionals(model, args);
    const auto mc = estimate_functionals(model, args, o.paths, o.seed + 3, FunctionalOptions{ExponentForm::Delta, {}, o.exec});
    const double s1 = std::abs(fv.g1.real() - mc.g1.mean) / std::max(4.0 * mc.g1.std_error, 1e-9);
    const double s2 = std::abs(fv.g2.real() - mc.g2.mean) / std::max(4.0 * mc.g2.std_error, 1e-9);
    return make_check("functionals_vs_montecarlo", std::max(s1, s2), 1.0,
                      fmt("G1 %.6g vs %.6g; G2 %.6g", fv.g1.real(), mc.g1.mean, fv.g2.real()) +
                          fmt(" vs %.6g; error in units of 4 SE", mc.g2.mean));
}

Check exit_level_vs_mc(const ProcessModel& model, const ValidateOptions& o) {
    const int r_max = model.threshold() + 12;
    const auto pmf = exit_level_pmf(model, r_max);
    const auto mc = summarize_paths(model, r_max, 1.0, o.paths, o.seed + 4, o.exec);
    double worst = 0.0;
    for (int r = 0; r <= r_max; ++r) {
        const auto& e = mc.exit_level[static_cast<std::size_t>(r)];
        worst = std::max(worst, std::abs(pmf[static_cast<std::size_t>(r)] - e.mean) / std::max(3.0 * e.std_error, 0.005));
    }
    const double ct = crossing_transform(model, 1.0, 1.0).real();
    const double pt = pre_crossing_transform(model, 1.0, 1.0).real();
    worst = std::max({worst, std::abs(ct - mc.lst_tau_cross.mean) / std::max(4.0 * mc.lst_tau_cross.std_error, 1e-9),
                      std::abs(pt - mc.lst_tau_pre.mean) / std::max(4.0 * mc.lst_tau_pre.std_error, 1e-9)});
    return make_check("exit_level_vs_montecarlo", worst, 1.0, "P{A=r}, E e^{-tau}: error in units of the MC tolerance");
}

Check series_routes(const ProcessModel& model) {
    if (!exact_route_available(model)) return make_check("series_route_agreement", 0.0, 1e-9, "sampled route only");
    SeriesOptions exact;
    exact.route = SeriesRoute::Exact;
    SeriesOptions sampled;
    sampled.route = SeriesRoute::Sampled;
    double worst = 0.0;
    for (double th : {0.3, 2.0}) {
        const TransformArgs args{th, 0.9, 0.7, 0.2, 0.4, 0.8};
        const auto a = functionals(model, args, exact);
        const auto b = functionals(model, args, sampled);
        worst = std::max({worst, rel(b.g1, a.g1), rel(b.g2, a.g2)});
    }
    return make_check("series_route_agreement", worst, 1e-9, "relative difference of exact and contour series");
}

Check d_operator(std::uint64_t seed) {
    std::mt19937_64 gen(seed);
    std::uniform_int_distribution<int> value(-1000, 1000);
    std::uniform_int_distribution<int> length(1, 31);
    std::uniform_int_distribution<int> base(-3, 3);
    std::uniform_int_distribution<int> depth(0, 12);
    long mismatches = 0;
    for (int trial = 0; trial < 100; ++trial) {
        std::vector<cplx> f(static_cast<std::size_t>(length(gen)));
        for (auto& x : f) x = static_cast<double>(value(gen));
        const auto s = d_transform(f);
        for (std::size_t p = 0; p < f.size(); ++p) mismatches += d_inverse(s, static_cast<long>(p)) != f[p];
    }
    for (int trial = 0; trial < 200; ++trial) {
        const cplx F = static_cast<double>(base(gen));
        const cplx G = static_cast<double>(base(gen));
        const long k = depth(gen);
        const auto s = series_from_rational({1.0}, {F, G}, static_cast<std::size_t>(k));
        mismatches += d_inverse_double_geometric(F, G, k) != d_inverse(s, k);
    }
    return make_check("d_operator_exactness", static_cast<double>(mismatches), 0.0, "exact integer round trips");
}

}  // namespace

bool ValidationReport::passed() const {
    return std::all_of(checks.begin(), checks.end(), [](const Check& c) { return c.passed; });
}

std::vector<std::string> ValidationReport::failed_checks() const {
    std::vector<std::string> out;
    for (const auto& c : checks)
        if (!c.passed) out.push_back(c.name);
    return out;
}

std::string ValidationReport::to_json() const {
    nlohmann::ordered_json doc;
    doc["passed"] = passed();
    doc["failed"] = failed_checks();
    auto& list = doc["checks"];
    list = nlohmann::ordered_json::array();
    for (const auto& c : checks) {
        nlohmann::ordered_json item;
        item["name"] = c.name;
        item["passed"] = c.passed;
        item["error"] = std::isfinite(c.error) ? nlohmann::ordered_json(c.error) : nlohmann::ordered_json(nullptr);
        item["tolerance"] = c.tolerance;
        item["margin"] = std::isfinite(c.error) ? nlohmann::ordered_json(c.tolerance - c.error) : nlohmann::ordered_json(nullptr);
        item["detail"] = c.detail;
        list.push_back(std::move(item));
    }
    auto& cov = doc["coverage"];
    cov = nlohmann::ordered_json::object();
    for (const auto& [op, names] : coverage) cov[op] = names;
    return doc.dump(2) + "\n";
}

ValidationReport run_validation(const ProcessModel& model, const ValidateOptions& o) {
    if (o.paths < 1000) throw ArgumentError("validation needs at least 1000 Monte Carlo paths");
    ValidationReport rep;
    const bool special = model.is_special_case();
    if (special) {
        const SpecialModel sm = SpecialModel::from(model).with_perturbed_c(o.perturb_c);
        rep.checks.push_back(guarded("joint_dist_vs_montecarlo", [&] { return joint_vs_mc(sm, model, o); }));
        rep.checks.push_back(guarded("joint_dist_table_invariants", [&] { return table_invariants(sm); }));
        rep.checks.push_back(guarded("fluctuation_vs_closedform", [&] { return fluctuation_vs_closedform(sm, model); }));
        rep.checks.push_back(guarded("laplace_round_trip", [&] { return laplace_round_trip(sm); }));
        rep.checks.push_back(guarded("joint_dist_pgf_consistency", [&] { return pgf_consistency(sm); }));
    } else if (o.perturb_c != 0.0) {
        throw ArgumentError("--perturb-c needs a model with geometric marks, exponential gaps and zero initial delay");
    }
    rep.checks.push_back(guarded("gamma_contraction", [&] { return gamma_contraction(model, o.seed); }));
    rep.checks.push_back(guarded("lemma_functionals_vs_montecarlo", [&] { return lemma_vs_mc(model, o); }));
    rep.checks.push_back(guarded("partition_identity", [&] { return partition(model); }));
    rep.checks.push_back(guarded("survival_vs_montecarlo", [&] { return survival_vs_mc(model, o); }));
    rep.checks.push_back(guarded("functionals_vs_montecarlo", [&] { return functionals_vs_mc(model, o); }));
    rep.checks.push_back(guarded("exit_level_vs_montecarlo", [&] { return exit_level_vs_mc(model, o); }));
    rep.checks.push_back(guarded("series_route_agreement", [&] { return series_routes(model); }));
    rep.checks.push_back(guarded("d_operator_exactness", [&] { return d_operator(o.seed); }));

    using Names = std::vector<std::string>;
    auto when = [special](Names names) { return special ? names : Names{}; };
    rep.coverage = {
        {"mark_pgf", {"functionals_vs_montecarlo", "exit_level_vs_montecarlo"}},
        {"obs_lst", {"gamma_contraction", "lemma_functionals_vs_montecarlo"}},
        {"phi", {"lemma_functionals_vs_montecarlo"}},
        {"psi", {"lemma_functionals_vs_montecarlo"}},
        {"gamma", {"gamma_contraction"}},
        {"f1_star", {"lemma_functionals_vs_montecarlo"}},
        {"f2_star", {"lemma_functionals_vs_montecarlo"}},
        {"d_transform", {"d_operator_exactness"}},
        {"d_inverse", {"d_operator_exactness", "functionals_vs_montecarlo"}},
        {"d_inverse_double_geometric", {"d_operator_exactness"}},
        {"series_from_samples", {"series_route_agreement"}},
        {"g1_star", {"functionals_vs_montecarlo", "partition_identity"}},
        {"g2_star", {"functionals_vs_montecarlo", "partition_identity"}},
        {"lst_tau_pre", {"survival_vs_montecarlo"}},
        {"lst_tau_cross", {"partition_identity", "survival_vs_montecarlo"}},
        {"crossing_transform", {"exit_level_vs_montecarlo"}},
        {"pre_crossing_transform", {"exit_level_vs_montecarlo"}},
        {"exit_level_pmf", {"exit_level_vs_montecarlo"}},
        {"survival_curve", {"survival_vs_montecarlo"}},
        {"invert_gaver_stehfest_hp", when({"laplace_round_trip"})},
        {"g1_star_special", when({"fluctuation_vs_closedform", "laplace_round_trip"})},
        {"ev_v_anu_before", when({"laplace_round_trip", "joint_dist_pgf_consistency"})},
        {"joint_dist", when({"joint_dist_vs_montecarlo", "joint_dist_pgf_consistency"})},
        {"dist_table", when({"joint_dist_vs_montecarlo", "joint_dist_table_invariants"})},
    };
    return rep;
}

}  // namespace crossing
