#pragma once

#include <cstdint>
#include <vector>

#include "trinv/dense.hpp"
#include "trinv/tridiag.hpp"

namespace trinv::oracle {

// Q itself, as a dense matrix.
DenseMatrix materialize(const TridiagSpec& spec);

// Gauss-Jordan inversion with partial pivoting.  Deliberately independent of
// every closed form in this library; capped at n = 2000 by policy since it is
// a testing oracle, not a production path.
DenseMatrix invert_dense(const DenseMatrix& m);

// Meurant-style inversion driven by the pivot recurrence
//   delta_1 = d, delta_i = c - 1/delta_{i-1}, delta_n = d - 1/delta_{n-1},
// with the factor vectors built from running products of the deltas.  A
// second independent route to Q^{-1}; the raw products overflow once
// n * log(r_plus) passes ~700, which the intended n <= 2000 range stays under
// for moderate c.
DenseMatrix invert_meurant(const TridiagSpec& spec);

// Banded LU with partial pivoting (one fill-in superdiagonal).  Solves
// Q x = rhs without forming anything dense; works for any invertible spec,
// including c < 2 cases where the pivot recurrence above would break down.
std::vector<double> solve_tridiagonal(const TridiagSpec& spec, const std::vector<double>& rhs);

} // namespace trinv::oracle
