#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "crossing/cli.hpp"
#include "crossing/csv.hpp"

namespace fs = std::filesystem;

namespace {

struct Outcome {
    int code;
    std::string out;
    std::string err;
};

Outcome invoke(std::vector<std::string> args) {
    std::ostringstream out, err;
    const int code = crossing::cli::run(args, out, err);
    return {code, out.str(), err.str()};
}

std::string write_config(const std::string& name, const std::string& body) {
    const auto path = fs::temp_directory_path() / ("crossing_cli_" + name + ".json");
    std::ofstream(path) << body;
    return path.string();
}

const std::string kSpecial = R"({"schema_version": 1, "lambda": 1.0, "marks": {"geometric": {"a": 0.5}},
    "obs": {"mu": 1.0, "initial": "zero"}, "threshold": 3, "horizon": 2})";
const std::string kDelayed = R"({"schema_version": 1, "lambda": 1.5, "marks": {"pmf": [0.2, 0.5, 0.3]},
    "obs": {"mu": 2.0, "initial": "exp", "initial_mu": 3.0}, "threshold": 2})";

std::vector<std::vector<double>> numeric_rows(const std::string& csv, std::size_t skip_cols = 0) {
    std::vector<std::vector<double>> rows;
    std::istringstream in(csv);
    std::string line;
    std::getline(in, line);
    while (std::getline(in, line)) {
        std::vector<double> row;
        std::istringstream cells(line);
        std::string cell;
        for (std::size_t i = 0; std::getline(cells, cell, ','); ++i)
            if (i >= skip_cols) row.push_back(std::stod(cell));
        rows.push_back(row);
    }
    return rows;
}

}  // namespace

TEST_CASE("dist") {
    const auto cfg = write_config("special", kSpecial);
    const auto r = invoke({"dist", "--config", cfg, "--t-grid", "0:1:2", "--r-max", "10"});
    REQUIRE(r.code == 0);
    const auto rows = numeric_rows(r.out);
    CHECK(rows.size() == 22);
    CHECK(r.out.rfind("t,r,", 0) == 0);
    for (const auto& row : rows)
        if (row[1] <= 3) CHECK(std::abs(row[2]) < 1e-12);

    const auto other = write_config("delayed", kDelayed);
    const auto bad = invoke({"dist", "--config", other});
    CHECK(bad.code == crossing::cli::kExitUsage);
    CHECK(bad.err.find("functional") != std::string::npos);
}

TEST_CASE("survival") {
    const auto cfg = write_config("delayed", kDelayed);
    const auto r = invoke({"survival", "--config", cfg, "--t-grid", "0:6:25"});
    REQUIRE(r.code == 0);
    const auto rows = numeric_rows(r.out);
    REQUIRE(rows.size() == 25);
    CHECK(rows[0][2] == doctest::Approx(1.0));
    for (std::size_t i = 0; i < rows.size(); ++i) {
        CHECK(rows[i][2] >= rows[i][1] - 1e-9);
        if (i > 0) {
            CHECK(rows[i][1] <= rows[i - 1][1] + 1e-6);
            CHECK(rows[i][2] <= rows[i - 1][2] + 1e-6);
        }
    }
    CHECK(rows.back()[2] < 0.05);
}

TEST_CASE("functional") {
    const auto cfg = write_config("delayed", kDelayed);
    const auto r = invoke({"functional", "--config", cfg, "--theta", "0.7", "--u", "0.8", "--v", "0.6",
                           "--w", "0.3", "--x", "0.5", "--y", "0.9", "--check-mc", "20000"});
    REQUIRE(r.code == 0);
    const auto doc = nlohmann::json::parse(r.out);
    const double g1 = doc["G1"]["re"], g2 = doc["G2"]["re"], g = doc["G"]["re"];
    CHECK(g == doctest::Approx(g1 + g2).epsilon(1e-12));
    CHECK(doc["value"]["re"].get<double>() == g);
    const double mc = doc["montecarlo"]["G"]["mean"];
    const double se = doc["montecarlo"]["G"]["std_error"];
    CHECK(std::abs(mc - g) < 4.0 * se);

    const auto cplx = invoke({"functional", "--config", cfg, "--theta", "1,0.5", "--which", "G1"});
    REQUIRE(cplx.code == 0);
    CHECK(nlohmann::json::parse(cplx.out)["G1"]["im"].get<double>() != 0.0);

    CHECK(invoke({"functional", "--config", cfg, "--theta", "-1"}).code == crossing::cli::kExitUsage);
    CHECK(invoke({"functional", "--config", cfg, "--v", "1.5"}).code == crossing::cli::kExitUsage);
}

TEST_CASE("simulate") {
    const auto cfg = write_config("special", kSpecial);
    const auto a = invoke({"simulate", "--config", cfg, "--paths", "5000", "--seed", "3"});
    const auto b = invoke({"simulate", "--config", cfg, "--paths", "5000", "--seed", "3"});
    REQUIRE(a.code == 0);
    CHECK(a.out == b.out);
    CHECK(a.out.rfind("quantity,mean,std_error,n", 0) == 0);
    CHECK(a.out.find("lst_tau_cross") != std::string::npos);
}

TEST_CASE("predict") {
    const auto cfg = write_config("zero_horizon", R"({"schema_version": 1, "lambda": 1.0,
        "marks": {"geometric": {"a": 0.5}}, "obs": {"mu": 1.0, "initial": "zero"}, "threshold": 3, "horizon": 0})");
    const auto r = invoke({"predict", "--config", cfg});
    REQUIRE(r.code == 0);
    CHECK(r.out.find("crash_probability,0,0\n") != std::string::npos);
    CHECK(r.out.find("expected_overshoot") != std::string::npos);

    const auto none = write_config("delayed", kDelayed);
    CHECK(invoke({"predict", "--config", none}).code == crossing::cli::kExitUsage);
    CHECK(invoke({"predict", "--config", none, "--t-grid", "0:4:5"}).code == 0);
}

TEST_CASE("usage errors") {
    const auto cfg = write_config("special", kSpecial);
    CHECK(invoke({}).code == crossing::cli::kExitUsage);
    CHECK(invoke({"dist"}).code == crossing::cli::kExitUsage);
    CHECK(invoke({"dist", "--config", cfg, "--bogus"}).code == crossing::cli::kExitUsage);
    CHECK(invoke({"dist", "--config", cfg, "--t-grid", "1:0:3"}).code == crossing::cli::kExitUsage);
    CHECK(invoke({"dist", "--config", "/nonexistent.json"}).code == crossing::cli::kExitUsage);
    const auto broken = write_config("broken", R"({"schema_version": 1, "lambda": -1})");
    CHECK(invoke({"survival", "--config", broken}).code == crossing::cli::kExitUsage);
}

TEST_CASE("validate") {
    const auto cfg = write_config("special", kSpecial);
    const auto ok = invoke({"validate", "--config", cfg, "--paths", "200000"});
    CHECK(ok.code == 0);
    const auto rep = nlohmann::json::parse(ok.out);
    CHECK(rep["passed"].get<bool>());
    CHECK(rep["checks"].size() == 13);

    const auto bad = invoke({"validate", "--config", cfg, "--paths", "200000", "--perturb-c", "1e-3"});
    CHECK(bad.code == crossing::cli::kExitValidation);
    CHECK(bad.err.find("validate: check failed: joint_dist_pgf_consistency") != std::string::npos);

    const auto other = write_config("delayed", kDelayed);
    CHECK(invoke({"validate", "--config", other, "--paths", "200000", "--perturb-c", "1e-3"}).code ==
          crossing::cli::kExitUsage);
}
