#include "trinv/kernels.hpp"

#include <algorithm>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace trinv::kernels {

namespace {

using i64 = std::int64_t;

constexpr i64 block_size = 4096;

// Ordered blocked reduction over term(0..len-1).  Block partials are always
// combined sequentially in index order, whichever thread produced them.
template <class TermFn>
double blocked_sum(i64 len, Exec exec, TermFn&& term) {
    const i64 nblocks = (len + block_size - 1) / block_size;
    std::vector<double> partial(std::size_t(nblocks), 0.0);
    const bool par = exec == Exec::parallel && openmp_enabled();
    (void)par;
#ifdef _OPENMP
#pragma omp parallel for schedule(static) if (par)
#endif
    for (i64 blk = 0; blk < nblocks; ++blk) {
        CompensatedSum acc;
        const i64 lo = blk * block_size;
        const i64 hi = std::min(len, lo + block_size);
        for (i64 k = lo; k < hi; ++k) acc.add(term(k));
        partial[std::size_t(blk)] = acc.get();
    }
    CompensatedSum total;
    for (double p : partial) total.add(p);
    return total.get();
}

} // namespace

bool openmp_enabled() {
#ifdef _OPENMP
    return true;
#else
    return false;
#endif
}

Exec auto_exec(i64 work) {
    return (openmp_enabled() && work >= 32768) ? Exec::parallel : Exec::serial;
}

DenseMatrix materialize_inverse(const InverseFactors& f, Exec exec) {
    const i64 n = f.n();
    DenseMatrix m(n);
    const bool par = exec == Exec::parallel && openmp_enabled();
    (void)par;
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic, 16) if (par)
#endif
    for (i64 i = 1; i <= n; ++i) {
        for (i64 j = i; j <= n; ++j) {
            const double val = f.element(i, j);
            m(i - 1, j - 1) = val;
            m(j - 1, i - 1) = val;
        }
    }
    return m;
}

std::vector<double> row_sums_direct(const InverseFactors& f, Exec exec) {
    const i64 n = f.n();
    std::vector<double> s(std::size_t(n), 0.0);
    const bool par = exec == Exec::parallel && openmp_enabled();
    (void)par;
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic, 16) if (par)
#endif
    for (i64 i = 1; i <= n; ++i) {
        CompensatedSum acc;
        for (i64 j = 1; j <= n; ++j) acc.add(f.element(i, j));
        s[std::size_t(i - 1)] = acc.get();
    }
    return s;
}

double trace_direct(const InverseFactors& f, Exec exec) {
    return blocked_sum(f.n(), exec, [&](i64 k) { return f.element(k + 1, k + 1); });
}

double trace_sq_direct(const InverseFactors& f, Exec exec) {
    const i64 n = f.n();
    // tr(Q^{-2}) = sum_j v_j^2 (2 Z_j - u_j^2) with Z_j = sum_{i<=j} u_i^2.
    if (f.normalized()) {
        // Same sum with u, v eliminated in favor of the bounded A_k factors:
        // P_j = Z_j * kappa0^2 * r_minus^{2(j-1)} obeys P_j = P_{j-1} r_m^2 + A_j^2,
        // and the j-th term becomes A_{n-j+1}^2 (2 P_j - A_j^2) / (kappa0 K)^2.
        const auto& A = f.scaled_kappa();
        const double rm = f.rminus_pow()[1];
        const double rm2 = rm * rm;
        std::vector<double> P(std::size_t(n), 0.0);
        double p = 0.0;
        for (i64 j = 0; j < n; ++j) {
            p = p * rm2 + A[std::size_t(j)] * A[std::size_t(j)];
            P[std::size_t(j)] = p;
        }
        const double sc = f.kappa0() * f.kappa_norm();
        const double inv_sc2 = 1.0 / (sc * sc);
        return blocked_sum(n, exec, [&](i64 k) {
            const double an = A[std::size_t(n - 1 - k)];
            const double aj = A[std::size_t(k)];
            return an * an * (2.0 * P[std::size_t(k)] - aj * aj) * inv_sc2;
        });
    }
    const auto& u = f.u();
    const auto& v = f.v();
    std::vector<double> Z(std::size_t(n), 0.0);
    CompensatedSum zacc;
    for (i64 j = 0; j < n; ++j) {
        zacc.add(u[std::size_t(j)] * u[std::size_t(j)]);
        Z[std::size_t(j)] = zacc.get();
    }
    return blocked_sum(n, exec, [&](i64 k) {
        const double vj = v[std::size_t(k)];
        const double uj = u[std::size_t(k)];
        return vj * vj * (2.0 * Z[std::size_t(k)] - uj * uj);
    });
}

} // namespace trinv::kernels
