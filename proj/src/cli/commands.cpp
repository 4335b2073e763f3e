#include "crossing/cli.hpp"

#include <cmath>
#include <fstream>
#include <functional>
#include <memory>
#include <optional>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "crossing/closedform.hpp"
#include "crossing/config.hpp"
#include "crossing/csv.hpp"
#include "crossing/errors.hpp"
#include "crossing/fluctuation.hpp"
#include "crossing/laplace.hpp"
#include "crossing/montecarlo.hpp"
#include "crossing/validate.hpp"

namespace crossing::cli {

namespace {

constexpr int kExitInternal = 70;

struct Common {
    std::string config;
    std::uint64_t seed = 1;
    std::string out;
    std::string t_grid;
    std::optional<int> r_max;
};

struct FunctionalFlags {
    std::string theta = "1", u = "1", v = "1", w = "0", x = "0", y = "1";
    std::string which = "G";
    long check_mc = 0;
    std::string form = "delta";
};

struct Sink {
    std::ostream& fallback;
    std::unique_ptr<std::ofstream> file;

    std::ostream& stream() { return file ? *file : fallback; }
};

Sink open_sink(const std::string& path, std::ostream& fallback) {
    Sink s{fallback, nullptr};
    if (!path.empty()) {
        s.file = std::make_unique<std::ofstream>(path, std::ios::binary);
        if (!*s.file) throw ArgumentError("cannot write " + path);
    }
    return s;
}

cplx parse_complex(const std::string& text, const char* name) {
    const auto comma = text.find(',');
    auto one = [&](const std::string& s) {
        std::size_t used = 0;
        double v = 0.0;
        try {
            v = std::stod(s, &used);
        } catch (const std::exception&) {
            used = 0;
        }
        if (s.empty() || used != s.size()) throw ArgumentError(std::string("--") + name + " expects re or re,im");
        return v;
    };
    if (comma == std::string::npos) return {one(text), 0.0};
    return {one(text.substr(0, comma)), one(text.substr(comma + 1))};
}

nlohmann::ordered_json complex_json(cplx z) {
    nlohmann::ordered_json j;
    j["re"] = z.real();
    j["im"] = z.imag();
    return j;
}

nlohmann::ordered_json estimate_json(const EstimateWithCI& e) {
    nlohmann::ordered_json j;
    j["mean"] = e.mean;
    j["std_error"] = e.std_error;
    j["ci95"] = {e.mean - 1.96 * e.std_error, e.mean + 1.96 * e.std_error};
    return j;
}

std::vector<double> grid_or(const std::string& spec, const std::string& fallback) {
    return parse_grid(spec.empty() ? fallback : spec);
}

// ---- commands -----------------------------------------------------------------

int cmd_dist(const Common& c, std::ostream& out, std::ostream& err) {
    const auto cfg = load_config(c.config);
    if (!cfg.model.is_special_case()) {
        err << "dist: closed-form tables are special-case only (geometric marks, exponential gaps, zero initial "
               "delay); use `functional` for general models\n";
        return kExitUsage;
    }
    const auto sm = SpecialModel::from(cfg.model);
    const int r_max = c.r_max.value_or(12);
    if (r_max < 0) throw ArgumentError("--r-max must be nonnegative");
    try {
        const auto table = dist_table(sm, grid_or(c.t_grid, "0:2:5"), r_max);
        auto sink = open_sink(c.out, out);
        write_csv(table, sink.stream());
    } catch (const ValidationError& e) {
        err << "dist: " << e.what() << '\n';
        for (const auto& cell : e.cells()) err << "  " << cell << '\n';
        return kExitTable;
    }
    return kExitOk;
}

struct Curves {
    std::vector<double> grid, pre, cross;
};

Curves survival_curves(const ProcessModel& m, const std::vector<double>& grid) {
    Curves c;
    c.grid = grid;
    SeriesOptions contour;
    contour.continue_left = exact_route_available(m);
    c.pre = survival_curve([&](cplx th) { return lst_tau_pre(m, th, contour); }, grid, pre_mass_at_zero(m));
    c.cross = survival_curve([&](cplx th) { return lst_tau_cross(m, th, contour); }, grid, cross_mass_at_zero(m));
    return c;
}

int cmd_survival(const Common& c, std::ostream& out) {
    const auto cfg = load_config(c.config);
    const auto curves = survival_curves(cfg.model, grid_or(c.t_grid, "0:5:51"));
    auto sink = open_sink(c.out, out);
    auto& o = sink.stream();
    o << "t,survival_pre,survival_cross\n";
    for (std::size_t i = 0; i < curves.grid.size(); ++i)
        write_row(o, {format_number(curves.grid[i]), format_number(curves.pre[i]), format_number(curves.cross[i])});
    return kExitOk;
}

int cmd_functional(const Common& c, const FunctionalFlags& f, std::ostream& out) {
    const auto cfg = load_config(c.config);
    const TransformArgs args{parse_complex(f.theta, "theta"), parse_complex(f.u, "u"), parse_complex(f.v, "v"),
                             parse_complex(f.w, "w"),         parse_complex(f.x, "x"), parse_complex(f.y, "y")};
    args.validate();
    const auto fv = functionals(cfg.model, args);

    nlohmann::ordered_json doc;
    doc["which"] = f.which;
    doc["args"] = {{"theta", complex_json(args.theta)}, {"u", complex_json(args.u)}, {"v", complex_json(args.v)},
                   {"w", complex_json(args.w)},         {"x", complex_json(args.x)}, {"y", complex_json(args.y)}};
    doc["G1"] = complex_json(fv.g1);
    doc["G2"] = complex_json(fv.g2);
    doc["G"] = complex_json(fv.g);
    doc["value"] = complex_json(f.which == "G1" ? fv.g1 : f.which == "G2" ? fv.g2 : fv.g);
    if (f.check_mc > 0) {
        FunctionalOptions opts;
        opts.form = f.form == "tau" ? ExponentForm::Tau : ExponentForm::Delta;
        const auto mc = estimate_functionals(cfg.model, args, f.check_mc, c.seed, opts);
        auto& j = doc["montecarlo"];
        j["paths"] = f.check_mc;
        j["seed"] = c.seed;
        j["exponent_form"] = f.form;
        j["G1"] = estimate_json(mc.g1);
        j["G2"] = estimate_json(mc.g2);
        j["G"] = estimate_json(mc.g);
    }
    auto sink = open_sink(c.out, out);
    sink.stream() << doc.dump(2) << '\n';
    return kExitOk;
}

int cmd_simulate(const Common& c, long paths, double theta, std::ostream& out) {
    const auto cfg = load_config(c.config);
    const int r_max = c.r_max.value_or(cfg.model.threshold() + 12);
    const auto s = summarize_paths(cfg.model, r_max, theta, paths, c.seed);
    std::vector<std::pair<std::string, EstimateWithCI>> rows;
    for (int r = 0; r <= r_max; ++r) rows.emplace_back("exit_level[" + std::to_string(r) + "]", s.exit_level[r]);
    rows.emplace_back("nu_at_least_two", s.nu_at_least_two);
    rows.emplace_back("mean_nu", s.mean_nu);
    rows.emplace_back("mean_tau_pre", s.mean_tau_pre);
    rows.emplace_back("mean_tau_cross", s.mean_tau_cross);
    rows.emplace_back("mean_overshoot", s.mean_overshoot);
    rows.emplace_back("lst_tau_pre", s.lst_tau_pre);
    rows.emplace_back("lst_tau_cross", s.lst_tau_cross);
    auto sink = open_sink(c.out, out);
    write_estimates_csv(rows, sink.stream());
    return kExitOk;
}

int cmd_validate(const Common& c, long paths, double perturb_c, std::ostream& out, std::ostream& err) {
    const auto cfg = load_config(c.config);
    ValidateOptions opts;
    opts.seed = c.seed;
    opts.paths = paths;
    opts.perturb_c = perturb_c;
    const auto report = run_validation(cfg.model, opts);
    auto sink = open_sink(c.out, out);
    sink.stream() << report.to_json();
    sink.stream().flush();
    if (report.passed()) return kExitOk;
    for (const auto& name : report.failed_checks()) err << "validate: check failed: " << name << '\n';
    return kExitValidation;
}

int cmd_predict(const Common& c, std::ostream& out) {
    const auto cfg = load_config(c.config);
    const auto& m = cfg.model;
    std::string fallback;
    if (c.t_grid.empty()) {
        if (!cfg.horizon) throw ConfigError("predict needs a horizon in the config or --t-grid");
        fallback = *cfg.horizon == 0.0 ? "0:0:1" : "0:" + format_number(*cfg.horizon) + ":51";
    }
    const auto curves = survival_curves(m, grid_or(c.t_grid, fallback));
    const int M = m.threshold();
    const int r_max = c.r_max.value_or(M + 20);
    if (r_max < 0) throw ArgumentError("--r-max must be nonnegative");
    const auto pmf = exit_level_pmf(m, std::max(r_max, M + 400));

    auto sink = open_sink(c.out, out);
    auto& o = sink.stream();
    o << "series,x,value\n";
    for (std::size_t i = 0; i < curves.grid.size(); ++i)
        write_row(o, {"crash_probability", format_number(curves.grid[i]), format_number(1.0 - curves.cross[i])});
    for (std::size_t i = 0; i < curves.grid.size(); ++i)
        write_row(o, {"pre_crash_survival", format_number(curves.grid[i]), format_number(curves.pre[i])});
    for (int r = M + 1; r <= r_max; ++r)
        write_row(o, {"overshoot", std::to_string(r - M), format_number(pmf[static_cast<std::size_t>(r)])});
    double mean = 0.0;
    for (std::size_t r = static_cast<std::size_t>(M) + 1; r < pmf.size(); ++r) mean += (static_cast<double>(r) - M) * pmf[r];
    write_row(o, {"expected_overshoot", "0", format_number(mean)});
    return kExitOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Exact and simulated laws of the first observed threshold crossing"};
    app.require_subcommand(1);

    Common common;
    FunctionalFlags fflags;
    long paths = 0;
    double theta = 1.0;
    double perturb_c = 0.0;

    auto add_common = [&](CLI::App* sub, bool grid, bool rmax) {
        sub->add_option("--config", common.config, "model config (JSON)")->required();
        sub->add_option("--seed", common.seed, "random seed");
        sub->add_option("--out", common.out, "output path (default stdout)");
        if (grid) sub->add_option("--t-grid", common.t_grid, "time grid a:b:n");
        if (rmax) sub->add_option("--r-max", common.r_max, "largest level tabulated");
    };

    auto* dist = app.add_subcommand("dist", "P{A_nu = r, tau_(nu-1) > t} table");
    add_common(dist, true, true);
    auto* surv = app.add_subcommand("survival", "survival curves of tau_(nu-1) and tau_nu");
    add_common(surv, true, false);
    auto* func = app.add_subcommand("functional", "time-integrated functionals G1, G2, G");
    add_common(func, false, false);
    for (auto [flag, target] : {std::pair{"--theta", &fflags.theta}, {"--u", &fflags.u}, {"--v", &fflags.v},
                                {"--w", &fflags.w}, {"--x", &fflags.x}, {"--y", &fflags.y}})
        func->add_option(flag, *target, "argument, re or re,im");
    func->add_option("--which", fflags.which)->check(CLI::IsMember({"G1", "G2", "G"}));
    func->add_option("--check-mc", fflags.check_mc, "Monte Carlo paths for a cross-check")->check(CLI::NonNegativeNumber);
    func->add_option("--exponent-form", fflags.form)->check(CLI::IsMember({"delta", "tau"}));
    auto* sim = app.add_subcommand("simulate", "Monte Carlo path summaries");
    add_common(sim, false, true);
    paths = 100000;
    sim->add_option("--paths", paths)->check(CLI::PositiveNumber);
    sim->add_option("--theta", theta)->check(CLI::NonNegativeNumber);
    auto* val = app.add_subcommand("validate", "oracle battery with a JSON report");
    add_common(val, false, false);
    long val_paths = 1000000;
    val->add_option("--paths", val_paths)->check(CLI::PositiveNumber);
    val->add_option("--perturb-c", perturb_c, "shift c in the closed forms");
    auto* pred = app.add_subcommand("predict", "crash probability, pre-crash window and overshoot");
    add_common(pred, true, true);

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kExitOk;
    } catch (const CLI::ParseError& e) {
        err << e.what() << '\n';
        return kExitUsage;
    }

    try {
        if (dist->parsed()) return cmd_dist(common, out, err);
        if (surv->parsed()) return cmd_survival(common, out);
        if (func->parsed()) return cmd_functional(common, fflags, out);
        if (sim->parsed()) return cmd_simulate(common, paths, theta, out);
        if (val->parsed()) return cmd_validate(common, val_paths, perturb_c, out, err);
        if (pred->parsed()) return cmd_predict(common, out);
    } catch (const InversionError& e) {
        err << "inversion failed: " << e.what() << '\n';
        return kExitInversion;
    } catch (const DivergentSeriesError& e) {
        err << "divergent series: " << e.what() << '\n';
        return kExitDivergence;
    } catch (const ConfigError& e) {
        err << "config error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const ArgumentError& e) {
        err << "argument error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kExitInternal;
    }
    return kExitUsage;
}

}  // namespace crossing::cli
