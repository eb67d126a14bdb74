// hamiltonian.hpp — H0, parity branches H+/H-, degenerate-energy set, Kronecker sum

#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <string>
#include <vector>

#include "sbparity/bath.hpp"
#include "sbparity/errors.hpp"
#include "sbparity/fockspace.hpp"
#include "sbparity/symmetric_matrix.hpp"

namespace sbparity {

// Even branch H+ = H0 - (Delta/2) D, odd branch H- = H0 + (Delta/2) D.
enum class BranchSign { Even, Odd };

inline const char* to_string(BranchSign sign) noexcept { return sign == BranchSign::Even ? "+" : "-"; }

// Delta >= 0 only; a negative Delta swaps the two branches.
struct ModelParams {
    double delta{0.0};
    BathModel bath;
    BasisSet basis;

    ModelParams(double delta_, BathModel bath_, BasisSet basis_)
        : delta(delta_), bath(std::move(bath_)), basis(std::move(basis_)) {
        if (!(delta >= 0.0) || !std::isfinite(delta))
            throw ParameterError("delta must satisfy delta >= 0");
        if (basis.modes() != bath.size())
            throw ParameterError("basis and bath mode counts differ");
    }
};

// Diagonal: sum_k w_k n_k - sum_k w_k q_k^2.
inline SymmetricMatrix assemble_h0(const BasisSet& basis, const BathModel& bath) {
    if (basis.modes() != bath.size()) throw ParameterError("basis and bath mode counts differ");
    SymmetricMatrix h0(basis.dim());
    for (std::size_t i = 0; i < basis.dim(); ++i) {
        const auto& n = basis.state(i);
        double ladder = 0.0;
        for (std::size_t k = 0; k < bath.size(); ++k) ladder += bath.modes[k].omega * n[k];
        h0(i, i) = ladder - bath.sum_wq2;
    }
    return h0;
}

// h0 -/+ (delta/2) D with no sign restriction on delta.
inline SymmetricMatrix branch_from_parts(const SymmetricMatrix& h0, const ParityElementTable& table,
                                         double delta, BranchSign sign) {
    if (h0.dim() != table.dim()) throw ParameterError("H0 and D dimensions differ");
    const double coeff = (sign == BranchSign::Even ? -0.5 : 0.5) * delta;
    SymmetricMatrix h(h0.dim());
    for (std::size_t i = 0; i < h.dim(); ++i)
        for (std::size_t j = 0; j <= i; ++j) h(i, j) = h0(i, j) + coeff * table.D(i, j);
    return h;
}

inline SymmetricMatrix assemble_branch(const ModelParams& params, BranchSign sign) {
    return branch_from_parts(assemble_h0(params.basis, params.bath), d_matrix(params.basis, params.bath),
                             params.delta, sign);
}

// Spectrum of H0 over the basis, ascending; its minimum is e_min_eo(bath).
inline std::vector<double> degenerate_energy_set(const BasisSet& basis, const BathModel& bath) {
    const SymmetricMatrix h0 = assemble_h0(basis, bath);
    std::vector<double> energies(h0.dim());
    for (std::size_t i = 0; i < h0.dim(); ++i) energies[i] = h0(i, i);
    std::sort(energies.begin(), energies.end());
    return energies;
}

// A (x) I + I (x) B, row index i * dim(B) + j.
inline SymmetricMatrix kronecker_sum(const SymmetricMatrix& a, const SymmetricMatrix& b,
                                     std::size_t capacity = kDefaultDenseCapacity) {
    const std::size_t na = a.dim();
    const std::size_t nb = b.dim();
    if (na * nb > capacity)
        throw CapacityError("Kronecker sum dimension " + std::to_string(na * nb) + " exceeds guard " +
                            std::to_string(capacity));
    SymmetricMatrix out(na * nb);
    for (std::size_t i1 = 0; i1 < na; ++i1)
        for (std::size_t j1 = 0; j1 < nb; ++j1) {
            const std::size_t row = i1 * nb + j1;
            for (std::size_t i2 = 0; i2 <= i1; ++i2)
                for (std::size_t j2 = 0; j2 < nb; ++j2) {
                    const std::size_t col = i2 * nb + j2;
                    if (col > row) break;
                    double v = 0.0;
                    if (j1 == j2) v += a(i1, i2);
                    if (i1 == i2) v += b(j1, j2);
                    out(row, col) = v;
                }
        }
    return out;
}

} // namespace sbparity
