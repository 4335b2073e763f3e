#pragma once

#include <optional>
#include <string>

#include "crossing/model.hpp"

namespace crossing {

inline constexpr int kSchemaVersion = 1;

/// A model loaded from JSON, plus the optional scenario horizon used by `predict`.
struct ModelConfig {
    ProcessModel model;
    std::optional<double> horizon;
};

/// Parses a JSON document. Unknown keys, missing keys and bad values throw ConfigError.
///
/// {
///   "schema_version": 1,
///   "lambda": 1.0,
///   "marks": {"geometric": {"a": 0.5}}     or {"pmf": [p0, p1, ...]},
///   "obs": {"mu": 1.0, "initial": "zero"}  or "initial": "exp" with optional "initial_mu",
///   "threshold": 3,
///   "horizon": 5.0
/// }
[[nodiscard]] ModelConfig parse_config(const std::string& text);
[[nodiscard]] ModelConfig load_config(const std::string& path);

/// The JSON form of a model that parse_config reads back unchanged.
[[nodiscard]] std::string config_json(const ProcessModel& model, std::optional<double> horizon = {});

}  // namespace crossing
