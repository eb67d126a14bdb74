// eigensolver.hpp — dense symmetric eigensolver: Householder tridiagonalization + implicit QL
//
// Fully deterministic: no random starts, fixed sweep order, eigenvector signs normalized so
// the largest-magnitude component (first one on ties) is positive.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <numeric>
#include <string>
#include <vector>

#include "sbparity/errors.hpp"
#include "sbparity/symmetric_matrix.hpp"

namespace sbparity {

struct EigenResult {
    std::vector<double> values;               // ascending
    std::vector<std::vector<double>> vectors; // vectors[i] pairs with values[i]
    double residual{0.0};                     // max_i |H v_i - E_i v_i|_2
};

struct EigenOptions {
    double tol{1e-10};  // residual target relative to |H|_inf
    int max_iter{60};   // QL sweeps allowed per eigenvalue
};

namespace detail {

// Reduces the row-major symmetric matrix a (n x n) to tridiagonal form Q^T a Q.
// On return diag/off hold the tridiagonal (off[i] couples i and i+1) and q holds Q.
inline void householder_tridiagonalize(std::vector<double>& a, std::size_t n, std::vector<double>& diag,
                                       std::vector<double>& off, std::vector<double>& q) {
    q.assign(n * n, 0.0);
    for (std::size_t i = 0; i < n; ++i) q[i * n + i] = 1.0;
    std::vector<double> v(n), p(n);

    for (std::size_t k = 0; k + 2 < n; ++k) {
        double norm2 = 0.0;
        for (std::size_t i = k + 1; i < n; ++i) norm2 += a[i * n + k] * a[i * n + k];
        const double tail = norm2 - a[(k + 1) * n + k] * a[(k + 1) * n + k];
        if (tail == 0.0) continue; // column already tridiagonal

        const double x0 = a[(k + 1) * n + k];
        const double alpha = x0 >= 0.0 ? -std::sqrt(norm2) : std::sqrt(norm2);
        std::fill(v.begin(), v.end(), 0.0);
        v[k + 1] = x0 - alpha;
        for (std::size_t i = k + 2; i < n; ++i) v[i] = a[i * n + k];
        const double vnorm = std::sqrt(tail + v[k + 1] * v[k + 1]);
        for (std::size_t i = k + 1; i < n; ++i) v[i] /= vnorm;

        // a <- P a P with P = I - 2 v v^T, restricted to the trailing block.
        double vp = 0.0;
        for (std::size_t i = k + 1; i < n; ++i) {
            double acc = 0.0;
            for (std::size_t j = k + 1; j < n; ++j) acc += a[i * n + j] * v[j];
            p[i] = acc;
            vp += v[i] * acc;
        }
        for (std::size_t i = k + 1; i < n; ++i) p[i] -= vp * v[i];
        for (std::size_t i = k + 1; i < n; ++i)
            for (std::size_t j = k + 1; j < n; ++j) a[i * n + j] -= 2.0 * (v[i] * p[j] + p[i] * v[j]);
        a[(k + 1) * n + k] = a[k * n + k + 1] = alpha;
        for (std::size_t i = k + 2; i < n; ++i) a[i * n + k] = a[k * n + i] = 0.0;

        // q <- q P
        for (std::size_t r = 0; r < n; ++r) {
            double acc = 0.0;
            for (std::size_t j = k + 1; j < n; ++j) acc += q[r * n + j] * v[j];
            for (std::size_t j = k + 1; j < n; ++j) q[r * n + j] -= 2.0 * acc * v[j];
        }
    }

    diag.resize(n);
    off.assign(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) diag[i] = a[i * n + i];
    for (std::size_t i = 0; i + 1 < n; ++i) off[i] = a[(i + 1) * n + i];
}

// Implicit QL with Wilkinson shifts on a symmetric tridiagonal matrix; rotations are
// accumulated into the columns of z (row-major n x n). Returns the worst remaining
// off-diagonal on failure, or -1 on success.
inline double tridiagonal_ql(std::vector<double>& diag, std::vector<double>& off, std::vector<double>& z,
                             std::size_t n, int max_iter) {
    constexpr double eps = std::numeric_limits<double>::epsilon();
    for (std::size_t l = 0; l < n; ++l) {
        int iter = 0;
        while (true) {
            std::size_t m = l;
            for (; m + 1 < n; ++m) {
                const double dd = std::abs(diag[m]) + std::abs(diag[m + 1]);
                if (std::abs(off[m]) <= eps * dd) break;
            }
            if (m == l) break;
            if (iter++ >= max_iter) return std::abs(off[l]);

            double g = (diag[l + 1] - diag[l]) / (2.0 * off[l]);
            double r = std::hypot(g, 1.0);
            g = diag[m] - diag[l] + off[l] / (g + std::copysign(r, g));
            double s = 1.0, c = 1.0, p = 0.0;
            bool deflated = false;
            for (std::size_t i = m; i-- > l;) {
                double f = s * off[i];
                const double b = c * off[i];
                r = std::hypot(f, g);
                off[i + 1] = r;
                if (r == 0.0) {
                    diag[i + 1] -= p;
                    off[m] = 0.0;
                    deflated = true;
                    break;
                }
                s = f / r;
                c = g / r;
                g = diag[i + 1] - p;
                r = (diag[i] - g) * s + 2.0 * c * b;
                p = s * r;
                diag[i + 1] = g + p;
                g = c * r - b;
                for (std::size_t k = 0; k < n; ++k) {
                    f = z[k * n + i + 1];
                    z[k * n + i + 1] = s * z[k * n + i] + c * f;
                    z[k * n + i] = c * z[k * n + i] - s * f;
                }
            }
            if (deflated) continue;
            diag[l] -= p;
            off[l] = g;
            off[m] = 0.0;
        }
    }
    return -1.0;
}

} // namespace detail

inline double residual_norm(const SymmetricMatrix& h, const std::vector<double>& v, double value) {
    auto hv = h.multiply(v);
    double acc = 0.0;
    for (std::size_t i = 0; i < v.size(); ++i) {
        const double r = hv[i] - value * v[i];
        acc += r * r;
    }
    return std::sqrt(acc);
}

// The k algebraically smallest eigenpairs of h.
inline EigenResult eigen_lowest(const SymmetricMatrix& h, std::size_t k, EigenOptions options = {}) {
    const std::size_t n = h.dim();
    if (k < 1 || k > n) throw ParameterError("eigen_lowest requires 1 <= k <= dim");
    if (!(options.tol > 0.0)) throw ParameterError("solver tolerance must be positive");

    std::vector<double> a = h.to_dense();
    std::vector<double> diag, off, z;
    detail::householder_tridiagonalize(a, n, diag, off, z);
    const double stuck = detail::tridiagonal_ql(diag, off, z, n, options.max_iter);
    if (stuck >= 0.0)
        throw SolverError("QL iteration did not converge within " + std::to_string(options.max_iter) +
                              " sweeps",
                          stuck);

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t x, std::size_t y) { return diag[x] < diag[y]; });

    EigenResult result;
    const double norm = h.inf_norm();
    const double scale = norm > 0.0 ? norm : 1.0;
    for (std::size_t idx = 0; idx < k; ++idx) {
        const std::size_t col = order[idx];
        std::vector<double> v(n);
        for (std::size_t r = 0; r < n; ++r) v[r] = z[r * n + col];
        std::size_t pivot = 0;
        for (std::size_t r = 1; r < n; ++r)
            if (std::abs(v[r]) > std::abs(v[pivot]) * (1.0 + 1e-12)) pivot = r;
        if (v[pivot] < 0.0)
            for (double& x : v) x = -x;
        result.residual = std::max(result.residual, residual_norm(h, v, diag[col]));
        result.values.push_back(diag[col]);
        result.vectors.push_back(std::move(v));
    }
    if (result.residual > options.tol * scale)
        throw SolverError("eigenpair residual above tolerance", result.residual);
    return result;
}

} // namespace sbparity
