// parity.hpp — truncation analysis of the squared bosonic parity factor
//
// In the complete displaced-Fock basis sum_n D_{m,n}^2 = 1. Truncating the sum at N_tr
// leaves exp(-2 alpha beta) O^{N_tr}_{m,m} < 1; the shortfall is the parity deficiency, and
// the dissipation at which it reaches a working precision epsilon is the critical alpha.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <numeric>
#include <string>
#include <vector>

#include "sbparity/bath.hpp"
#include "sbparity/errors.hpp"
#include "sbparity/fockspace.hpp"
#include "sbparity/numeric.hpp"
#include "sbparity/symmetric_matrix.hpp"

namespace sbparity {

inline constexpr double kDeficiencySlack = 1e-14;
inline constexpr double kRootTolerance = 1e-10;
inline constexpr double kDefaultAlphaCap = 1e4;

struct ParityAudit {
    OccupationVector m;
    int n_tr{0};
    TruncationPolicy policy;
    double o_value{0.0};
    double scale{1.0}; // exp(-2 alpha beta) = exp(-4 sum_k q_k^2)
    double deficiency{0.0};
    std::vector<double> d2_diag_residuals; // |(D D)_{ii} - 1| per basis row
    double max_offdiag{0.0};               // max_{i != j} |(D D)_{ij}|
};

struct Discretization {
    std::size_t n_modes{30};
    double lambda_disc{2.0};
    double omega_c{1.0};
};

struct CriticalPoint {
    double s{0.0};
    double alpha_c{0.0};
    double epsilon{0.0};
    int n_tr{0};
    std::size_t n_modes{0};
    double lambda_disc{0.0};
    double beta{0.0};
    OccupationVector m_ref;
    TruncationPolicy policy;
    double o_value{0.0};         // O^{N_tr}_{m,m} at alpha_c
    double deficiency{0.0};      // at alpha_c
    double literal_alpha{0.0};   // ln(O^{N_tr}_{m,m}(alpha_c)) / (2 beta)
};

struct ClosureReport {
    std::size_t unknowns_discarded{0};
    std::size_t independent_equations{0};
    std::size_t ratio_num{0}; // R = ratio_num / ratio_den, reduced
    std::size_t ratio_den{1};
    double ratio{0.0};
    std::string conclusion;
};

namespace detail {

inline std::vector<double> mode_row_squares(int m, double q, int n_tr) {
    std::vector<double> row(static_cast<std::size_t>(n_tr) + 1);
    for (int n = 0; n <= n_tr; ++n) {
        const double d = mode_d_element(m, n, q);
        row[static_cast<std::size_t>(n)] = d * d;
    }
    return row;
}

// log sum_{n admitted} D_{m,n}^2; per-mode caps factorize over modes, the total-quanta cap
// is a convolution over modes in the number of quanta.
inline double log_scaled_o(const OccupationVector& m, const BathModel& bath, int n_tr,
                           TruncationPolicy::Kind kind) {
    if (m.size() != bath.size())
        throw ParameterError("reference occupation length must equal the number of bath modes");
    if (n_tr < 0) throw ParameterError("n_tr must be non-negative");
    numeric::check_occupation(n_tr);

    if (kind == TruncationPolicy::Kind::PerMode) {
        double log_sum = 0.0;
        for (std::size_t k = 0; k < bath.size(); ++k) {
            numeric::CompensatedSum acc;
            for (double v : mode_row_squares(m[k], bath.modes[k].q, n_tr)) acc.add(v);
            log_sum += std::log(acc.value());
        }
        return log_sum;
    }

    std::vector<double> by_total(static_cast<std::size_t>(n_tr) + 1, 0.0);
    by_total[0] = 1.0;
    for (std::size_t k = 0; k < bath.size(); ++k) {
        const auto row = mode_row_squares(m[k], bath.modes[k].q, n_tr);
        std::vector<double> next(by_total.size(), 0.0);
        for (std::size_t t = 0; t < by_total.size(); ++t) {
            if (by_total[t] == 0.0) continue;
            for (std::size_t a = 0; t + a < by_total.size(); ++a) next[t + a] += by_total[t] * row[a];
        }
        by_total = std::move(next);
    }
    numeric::CompensatedSum acc;
    for (double v : by_total) acc.add(v);
    return std::log(acc.value());
}

inline double clamp_deficiency(double value) noexcept {
    if (value < 0.0 && value >= -kDeficiencySlack) return 0.0;
    if (value > 1.0 && value <= 1.0 + kDeficiencySlack) return 1.0;
    return value;
}

} // namespace detail

// O^{N_tr}_{m,m} = sum over the truncated index set of L_{m,n}^2.
inline double o_diagonal(const OccupationVector& m, const BathModel& bath, int n_tr,
                         TruncationPolicy::Kind kind = TruncationPolicy::Kind::PerMode) {
    return std::exp(detail::log_scaled_o(m, bath, n_tr, kind) + 4.0 * bath.sum_q2);
}

// 1 - exp(-2 alpha beta) O^{N_tr}_{m,m}
inline double parity_deficiency(const BathModel& bath, int n_tr, const OccupationVector& m,
                                TruncationPolicy::Kind kind = TruncationPolicy::Kind::PerMode) {
    return detail::clamp_deficiency(-std::expm1(detail::log_scaled_o(m, bath, n_tr, kind)));
}

// Smallest alpha at which the truncated parity deficiency reaches epsilon, by bisection on
// [0, alpha_hi] with alpha_hi doubled until bracketed. bath_at(alpha) must return the bath
// at dissipation alpha; q_k^2 is linear in alpha, so the deficiency is monotone.
template <class BathFactory>
CriticalPoint find_critical_alpha(BathFactory&& bath_at, int n_tr, double epsilon, OccupationVector m,
                                  TruncationPolicy::Kind kind = TruncationPolicy::Kind::PerMode,
                                  double alpha_cap = kDefaultAlphaCap) {
    if (!(epsilon > 0.0 && epsilon < 1.0)) throw ParameterError("epsilon must satisfy 0 < epsilon < 1");
    auto deficiency = [&](double alpha) { return parity_deficiency(bath_at(alpha), n_tr, m, kind); };

    double lo = 0.0;
    double hi = 1.0;
    while (deficiency(hi) < epsilon) {
        lo = hi;
        hi *= 2.0;
        if (hi > alpha_cap)
            throw SearchError("no alpha below " + std::to_string(alpha_cap) +
                              " reaches deficiency " + std::to_string(epsilon));
    }
    for (int iter = 0; iter < 400; ++iter) {
        const double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) break;
        if (deficiency(mid) < epsilon)
            lo = mid;
        else
            hi = mid;
    }
    const double alpha_c =
        std::abs(deficiency(lo) - epsilon) <= std::abs(deficiency(hi) - epsilon) ? lo : hi;
    const BathModel bath = bath_at(alpha_c);

    CriticalPoint cp;
    cp.s = bath.law.s;
    cp.alpha_c = alpha_c;
    cp.epsilon = epsilon;
    cp.n_tr = n_tr;
    cp.n_modes = bath.size();
    cp.lambda_disc = bath.lambda_disc;
    cp.beta = beta_of(bath);
    cp.m_ref = std::move(m);
    cp.policy = TruncationPolicy{kind, n_tr};
    cp.o_value = o_diagonal(cp.m_ref, bath, n_tr, kind);
    cp.deficiency = parity_deficiency(bath, n_tr, cp.m_ref, kind);
    cp.literal_alpha = std::log(cp.o_value) / (2.0 * cp.beta);
    if (std::abs(cp.deficiency - epsilon) > kRootTolerance)
        throw SearchError("bisection ended " + std::to_string(std::abs(cp.deficiency - epsilon)) +
                          " away from epsilon");
    return cp;
}

// Critical alpha for the logarithmically discretized power-law bath with exponent s.
inline CriticalPoint critical_alpha(double s, int n_tr, const Discretization& disc, double epsilon,
                                    OccupationVector m = {},
                                    TruncationPolicy::Kind kind = TruncationPolicy::Kind::PerMode,
                                    double alpha_cap = kDefaultAlphaCap) {
    if (!(s > 0.0)) throw ParameterError("s must satisfy s > 0");
    if (m.empty()) m.assign(disc.n_modes, 0);
    auto bath_at = [&](double alpha) {
        return discretize_bath(SpectralLaw{alpha, s, disc.omega_c}, disc.n_modes, disc.lambda_disc);
    };
    return find_critical_alpha(bath_at, n_tr, epsilon, std::move(m), kind, alpha_cap);
}

inline ParityAudit d_square_audit(const BasisSet& basis, const BathModel& bath, OccupationVector m = {},
                                  std::size_t dense_capacity = kDefaultDenseCapacity) {
    if (m.empty()) m.assign(bath.size(), 0);
    const auto row = basis.index_of(m);
    if (!row) throw ParameterError("reference occupation is not in the basis");

    const ParityElementTable table = d_matrix(basis, bath, dense_capacity);
    const std::size_t dim = table.dim();
    const std::vector<double> d = table.D.to_dense();

    ParityAudit audit;
    audit.m = m;
    audit.n_tr = basis.policy().cap;
    audit.policy = basis.policy();
    audit.scale = std::exp(-4.0 * bath.sum_q2);
    audit.o_value = o_diagonal(m, bath, audit.n_tr, basis.policy().kind);
    audit.deficiency = parity_deficiency(bath, audit.n_tr, m, basis.policy().kind);
    audit.d2_diag_residuals.resize(dim);
    for (std::size_t i = 0; i < dim; ++i) {
        for (std::size_t j = 0; j <= i; ++j) {
            numeric::CompensatedSum acc;
            for (std::size_t k = 0; k < dim; ++k) acc.add(d[i * dim + k] * d[k * dim + j]);
            if (i == j)
                audit.d2_diag_residuals[i] = std::abs(acc.value() - 1.0);
            else
                audit.max_offdiag = std::max(audit.max_offdiag, std::abs(acc.value()));
        }
    }
    return audit;
}

// Closure count for the truncated bare-Fock characteristic equation: R = M / (N_tr + 1).
inline ClosureReport closure_report(std::size_t n_modes, std::size_t n_tr) {
    if (n_modes < 1) throw ParameterError("closure report needs at least one mode");
    ClosureReport r;
    r.unknowns_discarded = n_modes;
    r.independent_equations = n_tr + 1;
    const std::size_t g = std::gcd(r.unknowns_discarded, r.independent_equations);
    r.ratio_num = r.unknowns_discarded / g;
    r.ratio_den = r.independent_equations / g;
    r.ratio = static_cast<double>(r.unknowns_discarded) / static_cast<double>(r.independent_equations);
    r.conclusion =
        "bare-Fock characteristic equation is not closed under truncation (R > 0 discards coefficients "
        "c_{m+1}, d_{m+1}); displaced-basis branch equations are closed under any truncation";
    return r;
}

} // namespace sbparity
