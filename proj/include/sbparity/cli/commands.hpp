// commands.hpp — subcommand drivers shared by the CLI and the tests
//
// Each driver returns the bytes it would emit plus an exit code:
//   0 success, 1 usage/config error, 2 invariant violation, 3 solver failure, 4 search failure.

#pragma once

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstddef>
#include <cstdio>
#include <limits>
#include <map>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "json.hpp"
#include "sbparity/cli/config.hpp"
#include "sbparity/sbparity.hpp"

namespace sbparity::cli {

inline constexpr const char* kVersion = "0.1.0";

enum ExitCode : int { kExitOk = 0, kExitUsage = 1, kExitInvariant = 2, kExitSolver = 3, kExitSearch = 4 };

struct CommandOutput {
    int exit_code{kExitOk};
    std::string body;
};

inline Json module_versions() {
    Json v;
    for (const char* module : {"bath", "fockspace", "hamiltonian", "spectra", "parity", "cli"}) v[module] = kVersion;
    return v;
}

// Shortest round-trip form; NaN/inf become null.
inline std::string dump(const Json& j) { return j.dump(2) + "\n"; }

// %.17g, with NaN spelled "NaN".
inline std::string format_real(double x) {
    if (std::isnan(x)) return "NaN";
    if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

// "0" for the all-zero vector, otherwise occupations joined by ':'.
inline std::string format_occupation(const OccupationVector& m) {
    if (std::all_of(m.begin(), m.end(), [](int v) { return v == 0; })) return "0";
    std::string out;
    for (std::size_t i = 0; i < m.size(); ++i) {
        if (i) out += ':';
        out += std::to_string(m[i]);
    }
    return out;
}

// ---------------------------------------------------------------- serialization

inline Json to_json(const TheoremReport& r) {
    return Json{{"e_gs", r.e_gs},
                {"e_plus_min", r.e_plus_min},
                {"e_minus_min", r.e_minus_min},
                {"e_min_eo", r.e_min_eo},
                {"margin", r.margin},
                {"predicted_gap", r.predicted_gap},
                {"measured_gap", r.measured_gap},
                {"verdict", to_string(r.verdict)}};
}

inline Json to_json(const ParityAudit& a) {
    return Json{{"m", a.m},
                {"n_tr", a.n_tr},
                {"o_value", a.o_value},
                {"scale", a.scale},
                {"deficiency", a.deficiency},
                {"d2_diag_residuals", a.d2_diag_residuals},
                {"max_offdiag", a.max_offdiag},
                {"policy", a.policy.label()}};
}

inline Json to_json(const CriticalPoint& cp) {
    return Json{{"s", cp.s},
                {"alpha_c", cp.alpha_c},
                {"epsilon", cp.epsilon},
                {"n_tr", cp.n_tr},
                {"n_modes", cp.n_modes},
                {"lambda_disc", cp.lambda_disc},
                {"beta", cp.beta},
                {"m_ref", cp.m_ref},
                {"o_value", cp.o_value},
                {"deficiency", cp.deficiency},
                {"literal_alpha", cp.literal_alpha},
                {"policy", cp.policy.label()}};
}

inline Json to_json(const ClosureReport& c) {
    return Json{{"unknowns_discarded", c.unknowns_discarded},
                {"independent_equations", c.independent_equations},
                {"ratio", c.ratio},
                {"ratio_rational", std::to_string(c.ratio_num) + "/" + std::to_string(c.ratio_den)},
                {"conclusion", c.conclusion}};
}

inline Json bath_summary(const BathModel& bath) {
    return Json{{"n_modes", bath.size()},
                {"lambda_disc", bath.lambda_disc},
                {"sum_wq2", bath.sum_wq2},
                {"sum_q2", bath.sum_q2},
                {"beta", bath.beta},
                {"e_min_eo_continuum", e_min_eo_continuum(bath.law)}};
}

// ---------------------------------------------------------------- drivers

namespace detail {

inline Json envelope(const char* command, const RunConfig& cfg) {
    Json j;
    j["command"] = command;
    j["config"] = to_json(cfg);
    j["versions"] = module_versions();
    return j;
}

inline CommandOutput failure(const char* command, const RunConfig& cfg, int code, const std::string& kind,
                             const std::string& message) {
    Json j = envelope(command, cfg);
    j["error"] = kind;
    j["message"] = message;
    return {code, dump(j)};
}

// Runs body(); maps library exceptions onto exit codes.
template <class Body>
CommandOutput guarded(const char* command, const RunConfig& cfg, Body&& body) {
    try {
        return body();
    } catch (const SolverError& e) {
        Json j = envelope(command, cfg);
        j["error"] = "solver";
        j["message"] = e.what();
        j["best_residual"] = e.best_residual();
        return {kExitSolver, dump(j)};
    } catch (const SearchError& e) {
        return failure(command, cfg, kExitSearch, "search", e.what());
    } catch (const std::exception& e) {
        return failure(command, cfg, kExitUsage, "config", e.what());
    }
}

inline EigenOptions solver_options(const RunConfig& cfg) { return {cfg.solver.tol, cfg.solver.max_iter}; }

inline ModelParams model_params(const RunConfig& cfg) {
    BathModel bath = cfg.bath();
    BasisSet basis = enumerate_basis(bath.size(), cfg.basis_policy());
    return ModelParams(cfg.model.delta, std::move(bath), std::move(basis));
}

} // namespace detail

inline CommandOutput run_theorem(const RunConfig& cfg) {
    return detail::guarded("theorem", cfg, [&] {
        const ModelParams params = detail::model_params(cfg);
        const TheoremReport report = theorem_report(params, detail::solver_options(cfg));
        const auto violations = theorem_violations(report);

        Json j = detail::envelope("theorem", cfg);
        j["report"] = to_json(report);
        j["diagnostics"] = {{"delta", report.delta},
                            {"overlap", report.overlap},
                            {"scale", report.scale},
                            {"tol", report.tol},
                            {"gap_identity_available", report.gap_identity_available},
                            {"rayleigh_lhs", report.e_plus_min + report.e_minus_min},
                            {"rayleigh_rhs", 2.0 * report.e_min_eo},
                            {"violations", violations}};
        j["bath"] = bath_summary(params.bath);
        j["basis"] = {{"policy", params.basis.policy().label()},
                      {"cap", params.basis.policy().cap},
                      {"dim", params.basis.dim()}};
        return CommandOutput{violations.empty() ? kExitOk : kExitInvariant, dump(j)};
    });
}

inline CommandOutput run_spectrum(const RunConfig& cfg) {
    return detail::guarded("spectrum", cfg, [&] {
        const ModelParams params = detail::model_params(cfg);
        const std::size_t k = std::min(cfg.solver.k_levels, params.basis.dim());
        const auto opts = detail::solver_options(cfg);
        const auto plus = eigen_lowest(assemble_branch(params, BranchSign::Even), k, opts);
        const auto minus = eigen_lowest(assemble_branch(params, BranchSign::Odd), k, opts);
        auto ladder = degenerate_energy_set(params.basis, params.bath);
        ladder.resize(k);

        Json j = detail::envelope("spectrum", cfg);
        j["plus"] = {{"values", plus.values}, {"residual", plus.residual}};
        j["minus"] = {{"values", minus.values}, {"residual", minus.residual}};
        j["degenerate_energy_set"] = ladder;
        j["e_min_eo"] = e_min_eo(params.bath);
        j["bath"] = bath_summary(params.bath);
        j["basis"] = {{"policy", params.basis.policy().label()},
                      {"cap", params.basis.policy().cap},
                      {"dim", params.basis.dim()}};
        return CommandOutput{kExitOk, dump(j)};
    });
}

inline CommandOutput run_parity_audit(const RunConfig& cfg) {
    return detail::guarded("parity-audit", cfg, [&] {
        const BathModel bath = cfg.bath();
        const BasisSet basis = enumerate_basis(bath.size(), cfg.basis_policy());
        const ParityAudit audit = d_square_audit(basis, bath, cfg.reference_occupation());
        Json j = detail::envelope("parity-audit", cfg);
        j["audit"] = to_json(audit);
        j["bath"] = bath_summary(bath);
        return CommandOutput{kExitOk, dump(j)};
    });
}

inline CommandOutput run_alpha_c(const RunConfig& cfg) {
    return detail::guarded("alpha-c", cfg, [&] {
        if (!cfg.modes.empty()) throw ConfigError("modes", "alpha-c requires a discretized bath (disc section)");
        const CriticalPoint cp = critical_alpha(cfg.model.s, cfg.trunc.cap,
                                                Discretization{cfg.disc.n_modes, cfg.disc.lambda_disc, cfg.model.omega_c},
                                                cfg.parity.epsilon, cfg.reference_occupation(), cfg.parity_policy());
        Json j = detail::envelope("alpha-c", cfg);
        j["critical_point"] = to_json(cp);
        return CommandOutput{kExitOk, dump(j)};
    });
}

inline CommandOutput run_closure(const RunConfig& cfg) {
    return detail::guarded("closure", cfg, [&] {
        const ClosureReport c = closure_report(cfg.mode_count(), static_cast<std::size_t>(cfg.trunc.cap));
        Json j = detail::envelope("closure", cfg);
        j["closure"] = to_json(c);
        return CommandOutput{kExitOk, dump(j)};
    });
}

// ---------------------------------------------------------------- phase diagram

struct ReferenceCurve {
    std::string label;
    std::vector<std::pair<double, double>> points; // (s, alpha_c), s strictly increasing

    // Linear interpolation; NaN outside the tabulated range.
    double at(double s) const {
        if (points.empty() || s < points.front().first || s > points.back().first)
            return std::numeric_limits<double>::quiet_NaN();
        auto hi = std::lower_bound(points.begin(), points.end(), s,
                                   [](const auto& p, double x) { return p.first < x; });
        if (hi->first == s) return hi->second;
        const auto lo = hi - 1;
        const double t = (s - lo->first) / (hi->first - lo->first);
        return lo->second + t * (hi->second - lo->second);
    }
};

// Parses "s,alpha_c,label" CSV (header required); one curve per label, first-seen order.
inline std::vector<ReferenceCurve> parse_reference_curves(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    if (!std::getline(in, line)) throw ConfigError("reference", "empty reference file");
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line != "s,alpha_c,label") throw ConfigError("reference", "header must be s,alpha_c,label");

    std::vector<ReferenceCurve> curves;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        const auto c1 = line.find(',');
        const auto c2 = c1 == std::string::npos ? c1 : line.find(',', c1 + 1);
        const std::string where = "reference line " + std::to_string(line_no);
        if (c2 == std::string::npos || line.find(',', c2 + 1) != std::string::npos)
            throw ConfigError(where, "expected three columns");
        double s = 0.0, alpha = 0.0;
        try {
            std::size_t used = 0;
            s = std::stod(line.substr(0, c1), &used);
            if (used != c1) throw std::invalid_argument("s");
            const std::string a = line.substr(c1 + 1, c2 - c1 - 1);
            alpha = std::stod(a, &used);
            if (used != a.size()) throw std::invalid_argument("alpha_c");
        } catch (const std::exception&) {
            throw ConfigError(where, "s and alpha_c must be numbers");
        }
        if (!std::isfinite(s) || !std::isfinite(alpha)) throw ConfigError(where, "values must be finite");
        const std::string label = line.substr(c2 + 1);
        if (label.empty()) throw ConfigError(where, "label must be non-empty");
        auto it = std::find_if(curves.begin(), curves.end(), [&](const auto& c) { return c.label == label; });
        if (it == curves.end()) {
            curves.push_back({label, {}});
            it = curves.end() - 1;
        }
        if (!it->points.empty() && !(s > it->points.back().first))
            throw ConfigError(where, "s must be strictly increasing within label " + label);
        it->points.emplace_back(s, alpha);
    }
    return curves;
}

inline std::vector<double> sweep_points(const RunConfig::Sweep& sweep) {
    std::vector<double> s(sweep.steps);
    for (std::size_t i = 0; i < sweep.steps; ++i)
        s[i] = sweep.steps == 1 ? sweep.from
                                : sweep.from + (sweep.to - sweep.from) * static_cast<double>(i) /
                                                   static_cast<double>(sweep.steps - 1);
    return s;
}

// One CSV row per s; rows are computed on up to `jobs` threads and written in sweep order.
inline CommandOutput run_phase_diagram(const RunConfig& cfg, unsigned jobs = 1,
                                       const std::vector<ReferenceCurve>& references = {}) {
    try {
        if (!cfg.modes.empty()) throw ConfigError("modes", "phase-diagram requires a discretized bath");
        if (cfg.sweep.variable != "s") throw ConfigError("sweep.variable", "phase-diagram sweeps s");
        if (!(cfg.sweep.from > 0.0) || cfg.sweep.to > 1.2)
            throw ConfigError("sweep", "range must lie within (0, 1.2]");
    } catch (const ConfigError& e) {
        return {kExitUsage, std::string("error: ") + e.what() + "\n"};
    }

    const auto s_values = sweep_points(cfg.sweep);
    const Discretization disc{cfg.disc.n_modes, cfg.disc.lambda_disc, cfg.model.omega_c};
    const OccupationVector m_ref = cfg.reference_occupation();
    const auto kind = cfg.parity_policy();

    struct Row {
        double alpha_c{std::numeric_limits<double>::quiet_NaN()};
        double beta{std::numeric_limits<double>::quiet_NaN()};
        double o_value{std::numeric_limits<double>::quiet_NaN()};
        bool ok{false};
        bool usage_error{false};
        std::string error;
    };
    std::vector<Row> rows(s_values.size());
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t i = next++; i < s_values.size(); i = next++) {
            try {
                const auto cp = critical_alpha(s_values[i], cfg.trunc.cap, disc, cfg.parity.epsilon, m_ref, kind);
                rows[i] = {cp.alpha_c, cp.beta, cp.o_value, true, false, {}};
            } catch (const SearchError& e) {
                rows[i].error = e.what();
            } catch (const std::exception& e) {
                rows[i].error = e.what();
                rows[i].usage_error = true;
            }
        }
    };
    const unsigned n_threads = std::max(1u, std::min<unsigned>(jobs, static_cast<unsigned>(s_values.size())));
    {
        std::vector<std::jthread> pool;
        for (unsigned t = 1; t < n_threads; ++t) pool.emplace_back(worker);
        worker();
    }

    std::string csv = "s,alpha_c,epsilon,n_tr,n_modes,lambda_disc,beta,o_value,m_ref";
    for (const auto& ref : references) csv += ",ref_" + ref.label;
    csv += '\n';
    bool all_ok = true;
    for (std::size_t i = 0; i < s_values.size(); ++i) {
        const Row& row = rows[i];
        if (row.usage_error) return {kExitUsage, "error: " + row.error + "\n"};
        all_ok = all_ok && row.ok;
        csv += format_real(s_values[i]) + ',' + format_real(row.alpha_c) + ',' + format_real(cfg.parity.epsilon) +
               ',' + std::to_string(cfg.trunc.cap) + ',' + std::to_string(cfg.disc.n_modes) + ',' +
               format_real(cfg.disc.lambda_disc) + ',' + format_real(row.beta) + ',' + format_real(row.o_value) +
               ',' + format_occupation(m_ref);
        for (const auto& ref : references) csv += ',' + format_real(ref.at(s_values[i]));
        csv += '\n';
    }
    return {all_ok ? kExitOk : kExitSearch, csv};
}

} // namespace sbparity::cli
