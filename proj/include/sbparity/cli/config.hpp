// config.hpp — JSON run configuration: parsing, defaults, validation
//
// Schema (all sections optional; unknown keys are rejected at every level):
//   model  {delta, omega_c, s, alpha}      also accepted as top-level shorthand
//   disc   {n_modes, lambda_disc}
//   modes  [[omega, lambda], ...]          explicit bath, replaces disc
//   trunc  {policy: auto|per-mode|total-quanta, cap}
//   solver {tol, max_iter, k_levels}
//   parity {epsilon, m_ref: [occupations]}
//   sweep  {variable: "s", from, to, steps}
//   output {format: json|csv, path}

#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"
#include "sbparity/bath.hpp"
#include "sbparity/fockspace.hpp"

namespace sbparity::cli {

using Json = nlohmann::ordered_json;

class ConfigError : public std::runtime_error {
public:
    ConfigError(std::string field, const std::string& message)
        : std::runtime_error(field.empty() ? message : field + ": " + message), field_(std::move(field)) {}
    const std::string& field() const noexcept { return field_; }

private:
    std::string field_;
};

struct RunConfig {
    struct Model {
        double delta{0.0};
        double omega_c{1.0};
        double s{1.0};
        double alpha{0.0};
    } model;
    struct Disc {
        std::size_t n_modes{30};
        double lambda_disc{2.0};
    } disc;
    std::vector<std::pair<double, double>> modes; // explicit (omega, lambda)
    struct Trunc {
        std::string policy{"auto"};
        int cap{20};
    } trunc;
    struct Solver {
        double tol{1e-10};
        int max_iter{60};
        std::size_t k_levels{4};
    } solver;
    struct Parity {
        double epsilon{0.01};
        OccupationVector m_ref; // empty: all zeros
    } parity;
    struct Sweep {
        std::string variable{"s"};
        double from{0.25};
        double to{1.0};
        std::size_t steps{16};
    } sweep;
    struct Output {
        std::string format{"json"};
        std::string path;
    } output;

    std::size_t mode_count() const noexcept { return modes.empty() ? disc.n_modes : modes.size(); }

    OccupationVector reference_occupation() const {
        return parity.m_ref.empty() ? OccupationVector(mode_count(), 0) : parity.m_ref;
    }

    SpectralLaw law() const { return SpectralLaw{model.alpha, model.s, model.omega_c}; }

    BathModel bath() const {
        return modes.empty() ? discretize_bath(law(), disc.n_modes, disc.lambda_disc)
                             : bath_from_modes(law(), modes);
    }

    // Basis truncation; "auto" resolves per mode count.
    TruncationPolicy basis_policy() const {
        if (trunc.policy == "per-mode") return TruncationPolicy::per_mode(trunc.cap);
        if (trunc.policy == "total-quanta") return TruncationPolicy::total_quanta(trunc.cap);
        return TruncationPolicy::default_for(mode_count(), trunc.cap);
    }

    // Truncation for parity sums; "auto" resolves to per-mode.
    TruncationPolicy::Kind parity_policy() const {
        return trunc.policy == "total-quanta" ? TruncationPolicy::Kind::TotalQuanta
                                              : TruncationPolicy::Kind::PerMode;
    }
};

namespace detail {

class Reader {
public:
    Reader(const Json& obj, std::string section) : obj_(obj), section_(std::move(section)) {
        if (!obj_.is_object()) throw ConfigError(section_, "must be a JSON object");
    }

    void allow(std::initializer_list<const char*> keys) const {
        std::set<std::string> allowed(keys.begin(), keys.end());
        for (const auto& [key, value] : obj_.items())
            if (!allowed.count(key)) throw ConfigError(path(key), "unknown key");
    }

    bool has(const std::string& key) const { return obj_.contains(key); }

    double number(const std::string& key, double fallback) const {
        if (!has(key)) return fallback;
        const Json& v = obj_.at(key);
        if (!v.is_number()) throw ConfigError(path(key), "must be a number");
        return v.get<double>();
    }

    long long integer(const std::string& key, long long fallback) const {
        if (!has(key)) return fallback;
        const Json& v = obj_.at(key);
        if (v.is_number_integer()) return v.get<long long>();
        if (v.is_number_float()) {
            const double d = v.get<double>();
            if (std::isfinite(d) && d == std::floor(d)) return static_cast<long long>(d);
        }
        throw ConfigError(path(key), "must be an integer");
    }

    std::string string(const std::string& key, const std::string& fallback) const {
        if (!has(key)) return fallback;
        const Json& v = obj_.at(key);
        if (!v.is_string()) throw ConfigError(path(key), "must be a string");
        return v.get<std::string>();
    }

    const Json& at(const std::string& key) const { return obj_.at(key); }
    std::string path(const std::string& key) const { return section_.empty() ? key : section_ + "." + key; }

private:
    const Json& obj_;
    std::string section_;
};

inline void require(bool ok, const std::string& field, const std::string& bound) {
    if (!ok) throw ConfigError(field, "must satisfy " + bound);
}

inline Json parse_strict(const std::string& text) {
    std::vector<std::set<std::string>> open_objects;
    std::string duplicate;
    auto callback = [&](int, Json::parse_event_t event, Json& parsed) {
        switch (event) {
        case Json::parse_event_t::object_start: open_objects.emplace_back(); break;
        case Json::parse_event_t::object_end:
            if (!open_objects.empty()) open_objects.pop_back();
            break;
        case Json::parse_event_t::key: {
            const auto key = parsed.get<std::string>();
            if (!open_objects.empty() && !open_objects.back().insert(key).second && duplicate.empty())
                duplicate = key;
            break;
        }
        default: break;
        }
        return true;
    };
    Json doc;
    try {
        doc = Json::parse(text, callback);
    } catch (const nlohmann::json::parse_error& e) {
        const std::size_t upto = std::min<std::size_t>(e.byte, text.size());
        const auto line = 1 + std::count(text.begin(), text.begin() + static_cast<long>(upto), '\n');
        throw ConfigError("", "parse error at line " + std::to_string(line) + ": " + e.what());
    }
    if (!duplicate.empty()) throw ConfigError(duplicate, "parse error: duplicate key");
    return doc;
}

} // namespace detail

inline RunConfig parse_config(const std::string& text) {
    const Json doc = detail::parse_strict(text);
    using detail::require;
    const detail::Reader top(doc, "");
    top.allow({"model", "disc", "modes", "trunc", "solver", "parity", "sweep", "output", "delta", "omega_c",
               "s", "alpha"});

    RunConfig cfg;
    auto& m = cfg.model;
    for (const char* key : {"delta", "omega_c", "s", "alpha"})
        if (top.has(key) && top.has("model") && top.at("model").is_object() && top.at("model").contains(key))
            throw ConfigError(key, "given both at top level and in model");
    m.delta = top.number("delta", m.delta);
    m.omega_c = top.number("omega_c", m.omega_c);
    m.s = top.number("s", m.s);
    m.alpha = top.number("alpha", m.alpha);
    if (top.has("model")) {
        const detail::Reader r(top.at("model"), "model");
        r.allow({"delta", "omega_c", "s", "alpha"});
        m.delta = r.number("delta", m.delta);
        m.omega_c = r.number("omega_c", m.omega_c);
        m.s = r.number("s", m.s);
        m.alpha = r.number("alpha", m.alpha);
    }
    require(m.delta >= 0.0 && std::isfinite(m.delta), "delta", "delta >= 0");
    require(m.omega_c > 0.0 && std::isfinite(m.omega_c), "omega_c", "omega_c > 0");
    require(m.s > 0.0 && std::isfinite(m.s), "s", "s > 0");
    require(m.alpha >= 0.0 && std::isfinite(m.alpha), "alpha", "alpha >= 0");

    if (top.has("disc")) {
        const detail::Reader r(top.at("disc"), "disc");
        r.allow({"n_modes", "lambda_disc"});
        const long long n = r.integer("n_modes", static_cast<long long>(cfg.disc.n_modes));
        require(n >= 1, "disc.n_modes", "n_modes >= 1");
        cfg.disc.n_modes = static_cast<std::size_t>(n);
        cfg.disc.lambda_disc = r.number("lambda_disc", cfg.disc.lambda_disc);
        require(cfg.disc.lambda_disc > 1.0, "disc.lambda_disc", "lambda_disc > 1");
    }

    if (top.has("modes")) {
        const Json& list = top.at("modes");
        if (!list.is_array() || list.empty()) throw ConfigError("modes", "must be a non-empty array");
        for (std::size_t i = 0; i < list.size(); ++i) {
            const std::string field = "modes[" + std::to_string(i) + "]";
            const Json& pair = list[i];
            if (!pair.is_array() || pair.size() != 2 || !pair[0].is_number() || !pair[1].is_number())
                throw ConfigError(field, "must be [omega, lambda]");
            const double omega = pair[0].get<double>();
            const double lambda = pair[1].get<double>();
            require(omega > 0.0 && omega <= m.omega_c, field + ".omega", "0 < omega <= omega_c");
            require(lambda >= 0.0 && std::isfinite(lambda), field + ".lambda", "lambda >= 0");
            cfg.modes.emplace_back(omega, lambda);
        }
    }

    if (top.has("trunc")) {
        const detail::Reader r(top.at("trunc"), "trunc");
        r.allow({"policy", "cap"});
        cfg.trunc.policy = r.string("policy", cfg.trunc.policy);
        require(cfg.trunc.policy == "auto" || cfg.trunc.policy == "per-mode" || cfg.trunc.policy == "total-quanta",
                "trunc.policy", "policy in {auto, per-mode, total-quanta}");
        const long long cap = r.integer("cap", cfg.trunc.cap);
        require(cap >= 0 && cap <= numeric::kFactorialGuard, "trunc.cap", "0 <= cap <= 170");
        cfg.trunc.cap = static_cast<int>(cap);
    }

    if (top.has("solver")) {
        const detail::Reader r(top.at("solver"), "solver");
        r.allow({"tol", "max_iter", "k_levels"});
        cfg.solver.tol = r.number("tol", cfg.solver.tol);
        require(cfg.solver.tol > 0.0, "solver.tol", "tol > 0");
        const long long it = r.integer("max_iter", cfg.solver.max_iter);
        require(it >= 1 && it <= 100000, "solver.max_iter", "1 <= max_iter <= 100000");
        cfg.solver.max_iter = static_cast<int>(it);
        const long long k = r.integer("k_levels", static_cast<long long>(cfg.solver.k_levels));
        require(k >= 1, "solver.k_levels", "k_levels >= 1");
        cfg.solver.k_levels = static_cast<std::size_t>(k);
    }

    if (top.has("parity")) {
        const detail::Reader r(top.at("parity"), "parity");
        r.allow({"epsilon", "m_ref"});
        cfg.parity.epsilon = r.number("epsilon", cfg.parity.epsilon);
        require(cfg.parity.epsilon > 0.0 && cfg.parity.epsilon < 1.0, "parity.epsilon", "0 < epsilon < 1");
        if (r.has("m_ref")) {
            const Json& list = r.at("m_ref");
            if (!list.is_array()) throw ConfigError("parity.m_ref", "must be an array of occupations");
            for (const Json& v : list) {
                if (!v.is_number_integer() || v.get<long long>() < 0 || v.get<long long>() > numeric::kFactorialGuard)
                    throw ConfigError("parity.m_ref", "entries must be integers in [0, 170]");
                cfg.parity.m_ref.push_back(v.get<int>());
            }
        }
    }
    if (!cfg.parity.m_ref.empty())
        require(cfg.parity.m_ref.size() == cfg.mode_count(), "parity.m_ref", "length equal to the mode count");

    if (top.has("sweep")) {
        const detail::Reader r(top.at("sweep"), "sweep");
        r.allow({"variable", "from", "to", "steps"});
        cfg.sweep.variable = r.string("variable", cfg.sweep.variable);
        require(cfg.sweep.variable == "s", "sweep.variable", "variable == \"s\"");
        cfg.sweep.from = r.number("from", cfg.sweep.from);
        cfg.sweep.to = r.number("to", cfg.sweep.to);
        const long long steps = r.integer("steps", static_cast<long long>(cfg.sweep.steps));
        require(steps >= 1, "sweep.steps", "steps >= 1");
        cfg.sweep.steps = static_cast<std::size_t>(steps);
    }
    require(cfg.sweep.from > 0.0, "sweep.from", "from > 0");
    require(cfg.sweep.to >= cfg.sweep.from, "sweep.to", "to >= from");

    if (top.has("output")) {
        const detail::Reader r(top.at("output"), "output");
        r.allow({"format", "path"});
        cfg.output.format = r.string("format", cfg.output.format);
        require(cfg.output.format == "json" || cfg.output.format == "csv", "output.format", "format in {json, csv}");
        cfg.output.path = r.string("path", cfg.output.path);
    }
    return cfg;
}

inline RunConfig load_config(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("", "cannot open config file " + path);
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return parse_config(buffer.str());
}

// Normalized echo with defaults applied.
inline Json to_json(const RunConfig& cfg) {
    Json j;
    j["model"] = {{"delta", cfg.model.delta}, {"omega_c", cfg.model.omega_c}, {"s", cfg.model.s}, {"alpha", cfg.model.alpha}};
    j["disc"] = {{"n_modes", cfg.disc.n_modes}, {"lambda_disc", cfg.disc.lambda_disc}};
    if (!cfg.modes.empty()) {
        Json modes = Json::array();
        for (const auto& [omega, lambda] : cfg.modes) modes.push_back({omega, lambda});
        j["modes"] = modes;
    }
    j["trunc"] = {{"policy", cfg.trunc.policy}, {"cap", cfg.trunc.cap}};
    j["solver"] = {{"tol", cfg.solver.tol}, {"max_iter", cfg.solver.max_iter}, {"k_levels", cfg.solver.k_levels}};
    j["parity"] = {{"epsilon", cfg.parity.epsilon}, {"m_ref", cfg.reference_occupation()}};
    j["sweep"] = {{"variable", cfg.sweep.variable}, {"from", cfg.sweep.from}, {"to", cfg.sweep.to}, {"steps", cfg.sweep.steps}};
    j["output"] = {{"format", cfg.output.format}, {"path", cfg.output.path}};
    return j;
}

} // namespace sbparity::cli
