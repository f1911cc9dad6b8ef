#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <vector>

#include "trinv/dense.hpp"
#include "trinv/tridiag.hpp"

namespace trinv::kernels {

enum class Exec { serial, parallel };

bool openmp_enabled();

// parallel when OpenMP is compiled in and the work size makes it worthwhile.
Exec auto_exec(std::int64_t work);

// Neumaier-compensated accumulator.
struct CompensatedSum {
    double sum = 0.0;
    double comp = 0.0;
    void add(double x) {
        const double t = sum + x;
        if (std::abs(sum) >= std::abs(x))
            comp += (sum - t) + x;
        else
            comp += (x - t) + sum;
        sum = t;
    }
    double get() const { return sum + comp; }
};

// The reductions below accumulate per-index terms into fixed 4096-element
// blocks and combine the block partials in index order, so serial and
// parallel execution give bitwise identical results.

DenseMatrix materialize_inverse(const InverseFactors& f, Exec exec);

std::vector<double> row_sums_direct(const InverseFactors& f, Exec exec);

double trace_direct(const InverseFactors& f, Exec exec);

// Direct trace of Q^{-2} via prefix sums of u_i^2 (or their normalized
// counterpart when c > 2): O(n), no n x n intermediate.
double trace_sq_direct(const InverseFactors& f, Exec exec);

} // namespace trinv::kernels
