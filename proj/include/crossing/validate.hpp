#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "crossing/execution.hpp"
#include "crossing/model.hpp"

namespace crossing {

/// One oracle comparison. `error` and `tolerance` share units; the check passes
/// when error ≤ tolerance, and margin = tolerance - error.
struct Check {
    std::string name;
    bool passed = false;
    double error = 0.0;
    double tolerance = 0.0;
    std::string detail;
};

struct ValidateOptions {
    std::uint64_t seed = 20240611;
    long paths = 1000000;
    /// Added to c in the closed forms; nonzero values should make the battery fail.
    double perturb_c = 0.0;
    Execution exec = Execution::Parallel;
};

struct ValidationReport {
    std::vector<Check> checks;
    /// Analytic operation -> names of the checks that exercise it.
    std::vector<std::pair<std::string, std::vector<std::string>>> coverage;

    [[nodiscard]] bool passed() const;
    [[nodiscard]] std::vector<std::string> failed_checks() const;
    [[nodiscard]] std::string to_json() const;
};

/// Runs the closed-form suite when the model admits it and the general suite always.
[[nodiscard]] ValidationReport run_validation(const ProcessModel& model, const ValidateOptions& opts = {});

}  // namespace crossing
