// bath.hpp — power-law spectral law, logarithmic discretization, derived bath scalars

#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <numbers>
#include <string>
#include <utility>
#include <vector>

#include "sbparity/errors.hpp"
#include "sbparity/numeric.hpp"

namespace sbparity {

// J(w) = 2 pi alpha w_c^{1-s} w^s on (0, w_c].
struct SpectralLaw {
    double alpha{0.0};   // dimensionless dissipation strength
    double s{1.0};       // bath exponent
    double omega_c{1.0}; // cutoff frequency

    void validate() const {
        if (!(alpha >= 0.0) || !std::isfinite(alpha))
            throw ParameterError("alpha must satisfy alpha >= 0");
        if (!(s > 0.0) || !std::isfinite(s))
            throw ParameterError("s must satisfy s > 0");
        if (!(omega_c > 0.0) || !std::isfinite(omega_c))
            throw ParameterError("omega_c must satisfy omega_c > 0");
    }

    double J(double omega) const noexcept {
        if (!(omega > 0.0) || omega > omega_c) return 0.0;
        return 2.0 * std::numbers::pi * alpha * std::pow(omega_c, 1.0 - s) * std::pow(omega, s);
    }

    // (1/pi) * integral of J over [lo, hi]
    double weight(double lo, double hi) const noexcept {
        return 2.0 * alpha * std::pow(omega_c, 1.0 - s) *
               (std::pow(hi, s + 1.0) - std::pow(lo, s + 1.0)) / (s + 1.0);
    }
};

struct Mode {
    double omega{0.0};  // frequency
    double lambda{0.0}; // coupling
    double q{0.0};      // displacement lambda / (2 omega)
};

inline Mode make_mode(double omega, double lambda) {
    if (!(omega > 0.0) || !std::isfinite(omega))
        throw ParameterError("mode frequency must be positive");
    if (!(lambda >= 0.0) || !std::isfinite(lambda))
        throw ParameterError("mode coupling must be non-negative");
    return Mode{omega, lambda, lambda / (2.0 * omega)};
}

// Immutable discretized bath. lambda_disc is 0 for baths built from explicit modes.
struct BathModel {
    SpectralLaw law;
    double lambda_disc{0.0};
    std::vector<Mode> modes;
    double sum_wq2{0.0}; // sum_k w_k q_k^2
    double sum_q2{0.0};  // sum_k q_k^2
    double beta{0.0};    // 2 sum_q2 / alpha

    std::size_t size() const noexcept { return modes.size(); }
    bool discretized() const noexcept { return lambda_disc > 0.0; }
};

namespace detail {

inline void fill_derived(BathModel& bath) {
    numeric::CompensatedSum wq2;
    numeric::CompensatedSum q2;
    for (const Mode& m : bath.modes) {
        wq2.add(m.omega * m.q * m.q);
        q2.add(m.q * m.q);
    }
    bath.sum_wq2 = wq2.value();
    bath.sum_q2 = q2.value();
}

inline std::vector<Mode> log_bins(const SpectralLaw& law, std::size_t n_modes, double lambda_disc) {
    std::vector<Mode> modes;
    modes.reserve(n_modes);
    const double s = law.s;
    for (std::size_t k = 0; k < n_modes; ++k) {
        const double hi = law.omega_c * std::pow(lambda_disc, -static_cast<double>(k));
        const double lo = law.omega_c * std::pow(lambda_disc, -static_cast<double>(k + 1));
        const double lambda2 = law.weight(lo, hi);
        // J-weighted mean frequency of the bin; independent of alpha.
        const double omega = (s + 1.0) / (s + 2.0) *
                             (std::pow(hi, s + 2.0) - std::pow(lo, s + 2.0)) /
                             (std::pow(hi, s + 1.0) - std::pow(lo, s + 1.0));
        modes.push_back(make_mode(omega, std::sqrt(lambda2)));
    }
    return modes;
}

} // namespace detail

// Logarithmic bins [w_c L^{-(k+1)}, w_c L^{-k}], k = 0..n_modes-1. lambda_disc may be
// +infinity, giving a single bin over (0, w_c].
inline BathModel discretize_bath(const SpectralLaw& law, std::size_t n_modes, double lambda_disc) {
    law.validate();
    if (n_modes < 1) throw ParameterError("n_modes must satisfy n_modes >= 1");
    if (!(lambda_disc > 1.0)) throw ParameterError("lambda_disc must satisfy lambda_disc > 1");

    BathModel bath;
    bath.law = law;
    bath.lambda_disc = lambda_disc;
    bath.modes = detail::log_bins(law, n_modes, lambda_disc);
    detail::fill_derived(bath);
    if (law.alpha > 0.0) {
        bath.beta = 2.0 * bath.sum_q2 / law.alpha;
    } else {
        SpectralLaw unit = law;
        unit.alpha = 1.0;
        BathModel ref;
        ref.modes = detail::log_bins(unit, n_modes, lambda_disc);
        detail::fill_derived(ref);
        bath.beta = 2.0 * ref.sum_q2;
    }
    return bath;
}

// Bath from explicit (omega, lambda) pairs; modes are stored by decreasing frequency.
// beta uses law.alpha and is NaN when alpha == 0.
inline BathModel bath_from_modes(const SpectralLaw& law,
                                 const std::vector<std::pair<double, double>>& omega_lambda) {
    law.validate();
    if (omega_lambda.empty()) throw ParameterError("at least one mode is required");
    BathModel bath;
    bath.law = law;
    for (const auto& [omega, lambda] : omega_lambda) {
        if (omega > law.omega_c)
            throw ParameterError("mode frequency must satisfy omega <= omega_c");
        bath.modes.push_back(make_mode(omega, lambda));
    }
    std::stable_sort(bath.modes.begin(), bath.modes.end(),
                     [](const Mode& a, const Mode& b) { return a.omega > b.omega; });
    detail::fill_derived(bath);
    bath.beta = law.alpha > 0.0 ? 2.0 * bath.sum_q2 / law.alpha
                                : std::numeric_limits<double>::quiet_NaN();
    return bath;
}

// Lowest possible energy shared by both parity branches: -sum_k lambda_k^2 / (4 w_k).
inline double e_min_eo(const BathModel& bath) noexcept { return -bath.sum_wq2; }

// Continuum limit of e_min_eo: -alpha w_c / (2 s).
inline double e_min_eo_continuum(const SpectralLaw& law) {
    law.validate();
    return -law.alpha * law.omega_c / (2.0 * law.s);
}

inline double beta_of(const BathModel& bath) noexcept { return bath.beta; }

} // namespace sbparity
