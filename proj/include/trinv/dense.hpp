#pragma once

#include <cmath>
#include <cstdint>
#include <vector>

namespace trinv {

// Minimal row-major dense matrix, just enough for oracles and materialized
// inverses.  Indices are 0-based here; the 1-based convention of the closed
// forms lives in the factor/element API only.
struct DenseMatrix {
    std::int64_t n = 0;
    std::vector<double> a; // row-major, n*n entries

    DenseMatrix() = default;
    explicit DenseMatrix(std::int64_t order)
        : n(order), a(std::size_t(order) * std::size_t(order), 0.0) {}

    double& operator()(std::int64_t i, std::int64_t j) {
        return a[std::size_t(i) * std::size_t(n) + std::size_t(j)];
    }
    double operator()(std::int64_t i, std::int64_t j) const {
        return a[std::size_t(i) * std::size_t(n) + std::size_t(j)];
    }

    double max_abs() const {
        double m = 0.0;
        for (double x : a) m = std::max(m, std::abs(x));
        return m;
    }
};

} // namespace trinv
