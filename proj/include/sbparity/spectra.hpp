// spectra.hpp — branch ground states and the non-degeneracy verdicts built on them

#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include "sbparity/bath.hpp"
#include "sbparity/eigensolver.hpp"
#include "sbparity/errors.hpp"
#include "sbparity/fockspace.hpp"
#include "sbparity/hamiltonian.hpp"

namespace sbparity {

inline constexpr double kOverlapGuard = 1e-12;
// Gaps below this many machine epsilons (times the energy scale) are not resolvable.
inline constexpr double kResolutionFactor = 1e3;

enum class Verdict { StrictlyBelow, DegenerateAtDeltaZero, IndeterminateBelowResolution };

inline const char* to_string(Verdict v) noexcept {
    switch (v) {
    case Verdict::StrictlyBelow: return "strictly-below";
    case Verdict::DegenerateAtDeltaZero: return "degenerate-at-delta-zero";
    case Verdict::IndeterminateBelowResolution: return "indeterminate-below-resolution";
    }
    return "unknown";
}

struct TheoremReport {
    double e_gs{0.0};
    double e_plus_min{0.0};
    double e_minus_min{0.0};
    double e_min_eo{0.0};
    double margin{0.0};        // e_min_eo - e_gs
    double predicted_gap{0.0}; // Delta <phi+|D|phi-> / <phi+|phi->, NaN when unavailable
    double measured_gap{0.0};  // e_minus_min - e_plus_min
    Verdict verdict{Verdict::StrictlyBelow};

    // Diagnostics, not part of the serialized report.
    double delta{0.0};
    double overlap{0.0};
    double scale{1.0}; // max(|H+|_inf, |H-|_inf)
    double tol{0.0};
    bool gap_identity_available{false};
};

struct GapIdentity {
    double lhs{0.0}; // E- - E+
    double rhs{0.0}; // Delta <phi+|D|phi-> / <phi+|phi->
    double abs_err{0.0};
    double overlap{0.0};
};

// <phi+| exp(i pi sum a^+ a) |phi-> through the D table; zero iff the pair may be degenerate.
inline double degeneracy_condition_value(std::span<const double> phi_plus, std::span<const double> phi_minus,
                                         const ParityElementTable& table) {
    if (phi_plus.size() != table.dim() || phi_minus.size() != table.dim())
        throw ParameterError("vectors and D table live in different bases");
    return dot(phi_plus, table.D.multiply(phi_minus));
}

namespace detail {

struct BranchPair {
    ParityElementTable table;
    SymmetricMatrix h_plus;
    SymmetricMatrix h_minus;
};

inline BranchPair build_branches(const ModelParams& params) {
    const SymmetricMatrix h0 = assemble_h0(params.basis, params.bath);
    ParityElementTable table = d_matrix(params.basis, params.bath);
    SymmetricMatrix plus = branch_from_parts(h0, table, params.delta, BranchSign::Even);
    SymmetricMatrix minus = branch_from_parts(h0, table, params.delta, BranchSign::Odd);
    return {std::move(table), std::move(plus), std::move(minus)};
}

inline double energy_scale(const SymmetricMatrix& a, const SymmetricMatrix& b) {
    const double s = std::max(a.inf_norm(), b.inf_norm());
    return s > 0.0 ? s : 1.0;
}

} // namespace detail

inline GapIdentity gap_identity_check(const ModelParams& params, std::size_t level_plus,
                                      std::size_t level_minus, EigenOptions options = {}) {
    const auto branches = detail::build_branches(params);
    const auto plus = eigen_lowest(branches.h_plus, level_plus + 1, options);
    const auto minus = eigen_lowest(branches.h_minus, level_minus + 1, options);
    const auto& phi_p = plus.vectors[level_plus];
    const auto& phi_m = minus.vectors[level_minus];

    GapIdentity out;
    out.overlap = dot(phi_p, phi_m);
    if (std::abs(out.overlap) < kOverlapGuard)
        throw OverlapGuardError("overlap <phi+|phi-> below guard", out.overlap);
    out.lhs = minus.values[level_minus] - plus.values[level_plus];
    out.rhs = params.delta * degeneracy_condition_value(phi_p, phi_m, branches.table) / out.overlap;
    out.abs_err = std::abs(out.lhs - out.rhs);
    return out;
}

inline TheoremReport theorem_report(const ModelParams& params, EigenOptions options = {}) {
    const auto branches = detail::build_branches(params);
    const auto plus = eigen_lowest(branches.h_plus, 1, options);
    const auto minus = eigen_lowest(branches.h_minus, 1, options);

    TheoremReport r;
    r.delta = params.delta;
    r.tol = options.tol;
    r.scale = detail::energy_scale(branches.h_plus, branches.h_minus);
    r.e_plus_min = plus.values[0];
    r.e_minus_min = minus.values[0];
    r.e_gs = std::min(r.e_plus_min, r.e_minus_min);
    r.e_min_eo = e_min_eo(params.bath);
    r.margin = r.e_min_eo - r.e_gs;
    r.measured_gap = r.e_minus_min - r.e_plus_min;

    r.overlap = dot(plus.vectors[0], minus.vectors[0]);
    r.gap_identity_available = std::abs(r.overlap) >= kOverlapGuard;
    r.predicted_gap = r.gap_identity_available
                          ? params.delta *
                                degeneracy_condition_value(plus.vectors[0], minus.vectors[0], branches.table) /
                                r.overlap
                          : std::numeric_limits<double>::quiet_NaN();

    const double resolution = kResolutionFactor * std::numeric_limits<double>::epsilon() * r.scale;
    const double gap = r.gap_identity_available ? std::abs(r.predicted_gap) : std::abs(r.measured_gap);
    if (params.delta == 0.0)
        r.verdict = Verdict::DegenerateAtDeltaZero;
    else if (gap < resolution)
        r.verdict = Verdict::IndeterminateBelowResolution;
    else
        r.verdict = Verdict::StrictlyBelow;
    return r;
}

// Numerical violations of the Rayleigh bound and the ground-state theorem; empty when clean.
inline std::vector<std::string> theorem_violations(const TheoremReport& r) {
    std::vector<std::string> out;
    const double slack = 10.0 * r.tol * r.scale;
    if (r.margin < -slack) out.emplace_back("margin below -10*tol*scale");
    if (r.e_plus_min + r.e_minus_min > 2.0 * r.e_min_eo + slack)
        out.emplace_back("Rayleigh bound e_plus_min + e_minus_min <= 2 e_min_eo violated");
    if (r.verdict == Verdict::StrictlyBelow && !(r.margin > 0.0))
        out.emplace_back("Delta > 0 with resolvable gap but margin <= 0");
    if (r.verdict == Verdict::DegenerateAtDeltaZero && std::abs(r.margin) > slack)
        out.emplace_back("Delta = 0 but ground energy differs from e_min_eo");
    return out;
}

} // namespace sbparity
