// symmetric_matrix.hpp — dense real symmetric matrix, packed lower triangle

#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <span>
#include <utility>
#include <vector>

namespace sbparity {

// Row-major packed lower triangle; (i, j) and (j, i) share one storage cell.
class SymmetricMatrix {
public:
    SymmetricMatrix() = default;
    explicit SymmetricMatrix(std::size_t dim) : dim_(dim), data_(dim * (dim + 1) / 2, 0.0) {}

    std::size_t dim() const noexcept { return dim_; }

    double operator()(std::size_t i, std::size_t j) const noexcept { return data_[index(i, j)]; }
    double& operator()(std::size_t i, std::size_t j) noexcept { return data_[index(i, j)]; }

    std::span<const double> packed() const noexcept { return data_; }

    // Full row-major dim x dim copy.
    std::vector<double> to_dense() const {
        std::vector<double> out(dim_ * dim_);
        for (std::size_t i = 0; i < dim_; ++i)
            for (std::size_t j = 0; j <= i; ++j)
                out[i * dim_ + j] = out[j * dim_ + i] = (*this)(i, j);
        return out;
    }

    double inf_norm() const noexcept {
        double best = 0.0;
        for (std::size_t i = 0; i < dim_; ++i) {
            double row = 0.0;
            for (std::size_t j = 0; j < dim_; ++j) row += std::abs((*this)(i, j));
            best = std::max(best, row);
        }
        return best;
    }

    bool is_diagonal() const noexcept {
        for (std::size_t i = 0; i < dim_; ++i)
            for (std::size_t j = 0; j < i; ++j)
                if ((*this)(i, j) != 0.0) return false;
        return true;
    }

    std::vector<double> multiply(std::span<const double> v) const {
        std::vector<double> out(dim_, 0.0);
        for (std::size_t i = 0; i < dim_; ++i) {
            const double* row = data_.data() + i * (i + 1) / 2;
            for (std::size_t j = 0; j < i; ++j) {
                out[i] += row[j] * v[j];
                out[j] += row[j] * v[i];
            }
            out[i] += row[i] * v[i];
        }
        return out;
    }

    friend bool operator==(const SymmetricMatrix&, const SymmetricMatrix&) = default;

private:
    static std::size_t index(std::size_t i, std::size_t j) noexcept {
        if (i < j) std::swap(i, j);
        return i * (i + 1) / 2 + j;
    }

    std::size_t dim_{0};
    std::vector<double> data_;
};

inline double dot(std::span<const double> a, std::span<const double> b) noexcept {
    double acc = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) acc += a[i] * b[i];
    return acc;
}

} // namespace sbparity
