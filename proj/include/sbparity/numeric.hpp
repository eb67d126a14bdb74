// numeric.hpp — small numerical helpers: compensated summation, log-factorials

#pragma once

#include <cmath>
#include <string>

#include "sbparity/errors.hpp"

namespace sbparity::numeric {

// Largest n with n! representable in double precision.
inline constexpr int kFactorialGuard = 170;

// Neumaier's variant of Kahan summation; handles terms larger than the running sum.
class CompensatedSum {
public:
    void add(double x) noexcept {
        const double t = sum_ + x;
        if (std::abs(sum_) >= std::abs(x))
            comp_ += (sum_ - t) + x;
        else
            comp_ += (x - t) + sum_;
        sum_ = t;
    }
    double value() const noexcept { return sum_ + comp_; }

private:
    double sum_{0.0};
    double comp_{0.0};
};

inline void check_occupation(int n) {
    if (n < 0)
        throw ParameterError("occupation number must be non-negative, got " + std::to_string(n));
    if (n > kFactorialGuard)
        throw CapacityError("occupation " + std::to_string(n) + " exceeds factorial guard " +
                            std::to_string(kFactorialGuard));
}

inline double log_factorial(int n) { return std::lgamma(static_cast<double>(n) + 1.0); }

} // namespace sbparity::numeric
