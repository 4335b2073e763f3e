#include "crossing/config.hpp"

#include <fstream>
#include <initializer_list>
#include <sstream>

#include <json.hpp>

#include "crossing/errors.hpp"

namespace crossing {

namespace {

using nlohmann::json;

void only_keys(const json& obj, const std::string& where, std::initializer_list<const char*> allowed) {
    if (!obj.is_object()) throw ConfigError(where + " must be an object");
    for (const auto& item : obj.items()) {
        bool known = false;
        for (const char* k : allowed) known = known || item.key() == k;
        if (!known) throw ConfigError("unknown key '" + item.key() + "' in " + where);
    }
}

const json& required(const json& obj, const char* key, const std::string& where) {
    auto it = obj.find(key);
    if (it == obj.end()) throw ConfigError("missing key '" + std::string(key) + "' in " + where);
    return *it;
}

double number(const json& v, const std::string& what) {
    if (!v.is_number()) throw ConfigError(what + " must be a number");
    return v.get<double>();
}

MarkLaw parse_marks(const json& marks) {
    only_keys(marks, "marks", {"geometric", "pmf"});
    const bool geo = marks.contains("geometric");
    const bool pmf = marks.contains("pmf");
    if (geo == pmf) throw ConfigError("marks needs exactly one of 'geometric' or 'pmf'");
    if (geo) {
        const json& g = marks["geometric"];
        only_keys(g, "marks.geometric", {"a"});
        return MarkLaw::geometric(number(required(g, "a", "marks.geometric"), "marks.geometric.a"));
    }
    const json& p = marks["pmf"];
    if (!p.is_array() || p.empty()) throw ConfigError("marks.pmf must be a nonempty array");
    std::vector<double> probs;
    for (const auto& x : p) probs.push_back(number(x, "marks.pmf entry"));
    return MarkLaw::discrete(std::move(probs));
}

ObservationLaw parse_obs(const json& obs) {
    only_keys(obs, "obs", {"mu", "initial", "initial_mu"});
    const double mu = number(required(obs, "mu", "obs"), "obs.mu");
    const json& init = required(obs, "initial", "obs");
    if (!init.is_string()) throw ConfigError("obs.initial must be \"zero\" or \"exp\"");
    const auto kind = init.get<std::string>();
    if (kind == "zero") {
        if (obs.contains("initial_mu")) throw ConfigError("obs.initial_mu only applies to an exp initial delay");
        return ObservationLaw(TimeLaw::zero(), TimeLaw::exponential(mu));
    }
    if (kind == "exp") {
        const double mu0 = obs.contains("initial_mu") ? number(obs["initial_mu"], "obs.initial_mu") : mu;
        return ObservationLaw(TimeLaw::exponential(mu0), TimeLaw::exponential(mu));
    }
    throw ConfigError("obs.initial must be \"zero\" or \"exp\"");
}

}  // namespace

ModelConfig parse_config(const std::string& text) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ConfigError(std::string("config is not valid JSON: ") + e.what());
    }
    only_keys(doc, "config", {"schema_version", "lambda", "marks", "obs", "threshold", "horizon"});
    const json& version = required(doc, "schema_version", "config");
    if (!version.is_number_integer() || version.get<int>() != kSchemaVersion)
        throw ConfigError("unsupported schema_version (expected " + std::to_string(kSchemaVersion) + ")");
    const json& threshold = required(doc, "threshold", "config");
    if (!threshold.is_number_integer()) throw ConfigError("threshold must be an integer");
    const long m = threshold.get<long>();
    if (m < 0 || m > kMaxThreshold) throw ConfigError("threshold must lie in [0, " + std::to_string(kMaxThreshold) + "]");

    std::optional<double> horizon;
    if (doc.contains("horizon")) {
        horizon = number(doc["horizon"], "horizon");
        if (!(*horizon >= 0.0)) throw ConfigError("horizon must be nonnegative");
    }
    return ModelConfig{ProcessModel(number(required(doc, "lambda", "config"), "lambda"),
                                    parse_marks(required(doc, "marks", "config")),
                                    parse_obs(required(doc, "obs", "config")), static_cast<int>(m)),
                       horizon};
}

ModelConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_config(buf.str());
}

std::string config_json(const ProcessModel& model, std::optional<double> horizon) {
    json doc;
    doc["schema_version"] = kSchemaVersion;
    doc["lambda"] = model.lambda();
    const auto& marks = model.marks();
    if (marks.kind() == MarkLaw::Kind::Geometric)
        doc["marks"]["geometric"]["a"] = marks.a();
    else
        doc["marks"]["pmf"] = marks.pmf();
    const auto& obs = model.observations();
    if (obs.recurring().kind() != TimeLaw::Kind::Exponential)
        throw ConfigError("only exponential observation gaps have a config form");
    doc["obs"]["mu"] = obs.recurring().rate();
    switch (obs.initial().kind()) {
        case TimeLaw::Kind::Zero:
            doc["obs"]["initial"] = "zero";
            break;
        case TimeLaw::Kind::Exponential:
            doc["obs"]["initial"] = "exp";
            doc["obs"]["initial_mu"] = obs.initial().rate();
            break;
        default:
            throw ConfigError("only zero or exponential initial delays have a config form");
    }
    doc["threshold"] = model.threshold();
    if (horizon) doc["horizon"] = *horizon;
    return doc.dump(2);
}

}  // namespace crossing
