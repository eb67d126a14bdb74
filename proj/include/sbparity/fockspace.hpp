// fockspace.hpp — truncated multi-mode occupation basis and displaced-Fock parity elements
//
// Displaced Fock states |n>_A are number states of A_k = a_k + q_k. The bosonic parity
// exp(i pi sum_k a_k^+ a_k) has matrix elements D_{m,n} = exp(-2 sum_k q_k^2) L_{m,n} in
// that basis, with L a product over modes of a finite alternating sum. Sign convention:
// q_k = +lambda_k / (2 w_k), under which D_{0,1} = +2q exp(-2q^2) for a single mode.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "sbparity/bath.hpp"
#include "sbparity/errors.hpp"
#include "sbparity/numeric.hpp"
#include "sbparity/symmetric_matrix.hpp"

namespace sbparity {

// Per-mode occupation numbers {n_1, ..., n_M}.
using OccupationVector = std::vector<int>;

inline constexpr std::size_t kDefaultMaxStates = 200'000;
inline constexpr std::size_t kDefaultDenseCapacity = 4'096;

struct TruncationPolicy {
    enum class Kind { PerMode, TotalQuanta };
    Kind kind{Kind::PerMode};
    int cap{0};

    static TruncationPolicy per_mode(int cap) { return {Kind::PerMode, cap}; }
    static TruncationPolicy total_quanta(int cap) { return {Kind::TotalQuanta, cap}; }

    // Per-mode cap for M <= 2, total-quanta cap beyond.
    static TruncationPolicy default_for(std::size_t n_modes, int cap) {
        return n_modes <= 2 ? per_mode(cap) : total_quanta(cap);
    }

    bool admits(const OccupationVector& n) const noexcept {
        long total = 0;
        for (int v : n) {
            if (v < 0) return false;
            if (kind == Kind::PerMode && v > cap) return false;
            total += v;
        }
        return kind == Kind::PerMode || total <= cap;
    }

    std::string label() const { return kind == Kind::PerMode ? "per-mode" : "total-quanta"; }

    friend bool operator==(const TruncationPolicy&, const TruncationPolicy&) = default;
};

// Lexicographically ordered occupation vectors admitted by a truncation policy.
class BasisSet {
public:
    BasisSet(std::size_t n_modes, TruncationPolicy policy, std::vector<OccupationVector> states)
        : n_modes_(n_modes), policy_(policy), states_(std::move(states)) {}

    std::size_t dim() const noexcept { return states_.size(); }
    std::size_t modes() const noexcept { return n_modes_; }
    const TruncationPolicy& policy() const noexcept { return policy_; }
    const OccupationVector& state(std::size_t i) const { return states_.at(i); }
    const std::vector<OccupationVector>& states() const noexcept { return states_; }

    std::optional<std::size_t> index_of(const OccupationVector& n) const {
        auto it = std::lower_bound(states_.begin(), states_.end(), n);
        if (it == states_.end() || *it != n) return std::nullopt;
        return static_cast<std::size_t>(it - states_.begin());
    }

private:
    std::size_t n_modes_;
    TruncationPolicy policy_;
    std::vector<OccupationVector> states_;
};

inline double basis_dimension(std::size_t n_modes, const TruncationPolicy& policy) {
    if (policy.kind == TruncationPolicy::Kind::PerMode)
        return std::pow(static_cast<double>(policy.cap) + 1.0, static_cast<double>(n_modes));
    // C(cap + M, M)
    double dim = 1.0;
    for (std::size_t i = 1; i <= n_modes; ++i)
        dim = dim * (static_cast<double>(policy.cap) + static_cast<double>(i)) / static_cast<double>(i);
    return std::round(dim);
}

inline BasisSet enumerate_basis(std::size_t n_modes, TruncationPolicy policy,
                                std::size_t max_states = kDefaultMaxStates) {
    if (n_modes < 1) throw ParameterError("basis needs at least one mode");
    if (policy.cap < 0) throw ParameterError("truncation cap must be non-negative");
    const double dim = basis_dimension(n_modes, policy);
    if (dim > static_cast<double>(max_states))
        throw CapacityError("basis dimension " + std::to_string(dim) + " exceeds guard " +
                            std::to_string(max_states));

    std::vector<OccupationVector> states;
    states.reserve(static_cast<std::size_t>(dim));
    OccupationVector current(n_modes, 0);
    const bool per_mode = policy.kind == TruncationPolicy::Kind::PerMode;

    // Depth-first with increasing values at each position yields lexicographic order.
    auto recurse = [&](auto&& self, std::size_t pos, int budget) -> void {
        if (pos == n_modes) {
            states.push_back(current);
            return;
        }
        const int top = per_mode ? policy.cap : budget;
        for (int v = 0; v <= top; ++v) {
            current[pos] = v;
            self(self, pos + 1, per_mode ? budget : budget - v);
        }
        current[pos] = 0;
    };
    recurse(recurse, 0, policy.cap);
    return BasisSet(n_modes, policy, std::move(states));
}

namespace detail {

// (-1)^n sqrt(n!/m!) (2q)^{m-n} L_n^{(m-n)}(4q^2) exp(log_shift) for m >= n (symmetric in m, n).
// The Laguerre factor comes from its forward three-term recurrence; the explicit alternating
// sum loses ~1e-8 to cancellation once 4q^2 and n are both O(10).
inline double mode_parity_sum(int m, int n, double q, double log_shift) {
    numeric::check_occupation(m);
    numeric::check_occupation(n);
    if (m < n) std::swap(m, n);
    const int a = m - n;
    const double sign_n = n % 2 == 0 ? 1.0 : -1.0;
    if (q == 0.0) return a == 0 ? sign_n * std::exp(log_shift) : 0.0;

    const double x = 4.0 * q * q;
    double prev = 1.0; // L_0^{(a)}
    double lag = 1.0;
    if (n >= 1) {
        lag = 1.0 + a - x;
        for (int k = 1; k < n; ++k) {
            const double next = ((2.0 * k + 1.0 + a - x) * lag - (k + a) * prev) / (k + 1.0);
            prev = lag;
            lag = next;
        }
    }
    if (lag == 0.0) return 0.0;
    const double two_q = 2.0 * q;
    const double log_mag = 0.5 * (numeric::log_factorial(n) - numeric::log_factorial(m)) +
                           a * std::log(std::abs(two_q)) + log_shift + std::log(std::abs(lag));
    const bool negative = ((sign_n < 0.0) != (lag < 0.0)) != (two_q < 0.0 && a % 2 == 1);
    const double value = std::exp(log_mag);
    return negative ? -value : value;
}

} // namespace detail

// Single-mode L_{m,n}(q).
inline double mode_l_element(int m, int n, double q) { return detail::mode_parity_sum(m, n, q, 0.0); }

// Single-mode D_{m,n}(q) = exp(-2 q^2) L_{m,n}(q), scaled inside each term.
inline double mode_d_element(int m, int n, double q) {
    return detail::mode_parity_sum(m, n, q, -2.0 * q * q);
}

namespace detail {

inline void check_lengths(const OccupationVector& m, const OccupationVector& n, const BathModel& bath) {
    if (m.size() != bath.size() || n.size() != bath.size())
        throw ParameterError("occupation vector length must equal the number of bath modes");
}

} // namespace detail

inline double l_element(const OccupationVector& m, const OccupationVector& n, const BathModel& bath) {
    detail::check_lengths(m, n, bath);
    double value = 1.0;
    for (std::size_t k = 0; k < bath.size(); ++k) value *= mode_l_element(m[k], n[k], bath.modes[k].q);
    return value;
}

inline double d_element(const OccupationVector& m, const OccupationVector& n, const BathModel& bath) {
    detail::check_lengths(m, n, bath);
    double value = 1.0;
    for (std::size_t k = 0; k < bath.size(); ++k) value *= mode_d_element(m[k], n[k], bath.modes[k].q);
    return value;
}

struct ParityElementTable {
    SymmetricMatrix L;
    SymmetricMatrix D;
    double prefactor{1.0}; // exp(-2 sum_k q_k^2)

    std::size_t dim() const noexcept { return D.dim(); }
};

// Per-mode element tables up to the largest occupation present in the basis.
class ModeTables {
public:
    ModeTables(const BasisSet& basis, const BathModel& bath) {
        if (basis.modes() != bath.size())
            throw ParameterError("basis and bath mode counts differ");
        const std::size_t n_modes = bath.size();
        size_.assign(n_modes, 0);
        for (const auto& state : basis.states())
            for (std::size_t k = 0; k < n_modes; ++k)
                size_[k] = std::max<std::size_t>(size_[k], static_cast<std::size_t>(state[k]) + 1);
        l_.resize(n_modes);
        d_.resize(n_modes);
        for (std::size_t k = 0; k < n_modes; ++k) {
            const std::size_t n = size_[k];
            const double q = bath.modes[k].q;
            l_[k].assign(n * n, 0.0);
            d_[k].assign(n * n, 0.0);
            for (std::size_t a = 0; a < n; ++a)
                for (std::size_t b = 0; b <= a; ++b) {
                    const int ia = static_cast<int>(a);
                    const int ib = static_cast<int>(b);
                    l_[k][a * n + b] = l_[k][b * n + a] = mode_l_element(ia, ib, q);
                    d_[k][a * n + b] = d_[k][b * n + a] = mode_d_element(ia, ib, q);
                }
        }
    }

    double l(std::size_t mode, int a, int b) const noexcept { return l_[mode][a * size_[mode] + b]; }
    double d(std::size_t mode, int a, int b) const noexcept { return d_[mode][a * size_[mode] + b]; }

private:
    std::vector<std::size_t> size_;
    std::vector<std::vector<double>> l_;
    std::vector<std::vector<double>> d_;
};

inline ParityElementTable d_matrix(const BasisSet& basis, const BathModel& bath,
                                   std::size_t dense_capacity = kDefaultDenseCapacity) {
    if (basis.dim() > dense_capacity)
        throw CapacityError("dense table dimension " + std::to_string(basis.dim()) +
                            " exceeds guard " + std::to_string(dense_capacity));
    const ModeTables tables(basis, bath);
    const std::size_t dim = basis.dim();
    const std::size_t n_modes = bath.size();

    ParityElementTable table{SymmetricMatrix(dim), SymmetricMatrix(dim), std::exp(-2.0 * bath.sum_q2)};
    for (std::size_t i = 0; i < dim; ++i) {
        const auto& m = basis.state(i);
        for (std::size_t j = 0; j <= i; ++j) {
            const auto& n = basis.state(j);
            double l = 1.0;
            double d = 1.0;
            for (std::size_t k = 0; k < n_modes; ++k) {
                l *= tables.l(k, m[k], n[k]);
                d *= tables.d(k, m[k], n[k]);
            }
            table.L(i, j) = l;
            table.D(i, j) = d;
        }
    }
    return table;
}

// Independent route to D_{m,n}: expand each displaced state in the bare Fock basis from
// (a^+ + q)^n / sqrt(n!) exp(-q a^+ - q^2/2)|0>, weight by (-1)^{bare count}, contract.
inline double overlap_oracle(const OccupationVector& m, const OccupationVector& n,
                             const BathModel& bath, int bare_cutoff, double norm_tol = 1e-12) {
    detail::check_lengths(m, n, bath);
    if (bare_cutoff < 0) throw ParameterError("bare_cutoff must be non-negative");

    auto displaced_state = [&](int occupation, double q) {
        std::vector<double> c(static_cast<std::size_t>(bare_cutoff) + 1);
        c[0] = std::exp(-0.5 * q * q);
        for (std::size_t j = 1; j < c.size(); ++j)
            c[j] = c[j - 1] * (-q) / std::sqrt(static_cast<double>(j));
        for (int i = 1; i <= occupation; ++i) {
            std::vector<double> next(c.size() + 1, 0.0);
            for (std::size_t j = 0; j < c.size(); ++j) {
                next[j] += q * c[j];
                next[j + 1] += std::sqrt(static_cast<double>(j + 1)) * c[j];
            }
            const double norm = std::sqrt(static_cast<double>(i));
            for (double& v : next) v /= norm;
            c = std::move(next);
        }
        numeric::CompensatedSum norm2;
        for (double v : c) norm2.add(v * v);
        const double deficit = 1.0 - norm2.value();
        if (std::abs(deficit) > norm_tol)
            throw ConvergenceError("bare-Fock cutoff " + std::to_string(bare_cutoff) +
                                   " leaves norm deficit " + std::to_string(deficit),
                                   deficit);
        return c;
    };

    double value = 1.0;
    for (std::size_t k = 0; k < bath.size(); ++k) {
        const double q = bath.modes[k].q;
        const auto cm = displaced_state(m[k], q);
        const auto cn = displaced_state(n[k], q);
        numeric::CompensatedSum acc;
        const std::size_t len = std::min(cm.size(), cn.size());
        for (std::size_t j = 0; j < len; ++j) acc.add((j % 2 == 0 ? 1.0 : -1.0) * cm[j] * cn[j]);
        value *= acc.value();
    }
    return value;
}

} // namespace sbparity
