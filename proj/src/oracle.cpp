#include "trinv/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <utility>

#include "trinv/errors.hpp"

namespace trinv::oracle {

namespace {

using i64 = std::int64_t;

constexpr double pivot_rtol = 1e-13;
constexpr i64 dense_cap = 2000;

double sign_pow(int b, i64 k) { return (b == -1 && (k & 1)) ? -1.0 : 1.0; }

} // namespace

DenseMatrix materialize(const TridiagSpec& s) {
    DenseMatrix m(s.n);
    for (i64 i = 0; i < s.n; ++i) {
        m(i, i) = (i == 0 || i == s.n - 1) ? s.d : s.c;
        if (i + 1 < s.n) {
            m(i, i + 1) = -double(s.b);
            m(i + 1, i) = -double(s.b);
        }
    }
    return m;
}

DenseMatrix invert_dense(const DenseMatrix& m) {
    const i64 n = m.n;
    if (n > dense_cap) throw DomainError("dense inversion capped at n = 2000");
    if (n < 1) throw DomainError("dense inversion needs a nonempty matrix");
    const double scale = std::max(1.0, m.max_abs());
    DenseMatrix a = m;
    DenseMatrix inv(n);
    for (i64 i = 0; i < n; ++i) inv(i, i) = 1.0;
    for (i64 k = 0; k < n; ++k) {
        i64 piv = k;
        for (i64 r = k + 1; r < n; ++r)
            if (std::abs(a(r, k)) > std::abs(a(piv, k))) piv = r;
        if (std::abs(a(piv, k)) <= pivot_rtol * scale)
            throw SingularMatrix("dense inversion: pivot " + std::to_string(k + 1)
                                 + " below tolerance");
        if (piv != k) {
            for (i64 j = 0; j < n; ++j) {
                std::swap(a(k, j), a(piv, j));
                std::swap(inv(k, j), inv(piv, j));
            }
        }
        const double inv_p = 1.0 / a(k, k);
        for (i64 j = 0; j < n; ++j) {
            a(k, j) *= inv_p;
            inv(k, j) *= inv_p;
        }
        for (i64 r = 0; r < n; ++r) {
            if (r == k) continue;
            const double factor = a(r, k);
            if (factor == 0.0) continue;
            for (i64 j = 0; j < n; ++j) {
                a(r, j) -= factor * a(k, j);
                inv(r, j) -= factor * inv(k, j);
            }
        }
    }
    return inv;
}

DenseMatrix invert_meurant(const TridiagSpec& s) {
    const i64 n = s.n;
    DenseMatrix m(n);
    if (n == 1) {
        if (std::abs(s.d) <= pivot_rtol)
            throw SingularMatrix("pivot recurrence hit a zero delta");
        m(0, 0) = 1.0 / s.d;
        return m;
    }
    std::vector<double> delta(std::size_t(n) + 1, 0.0);
    delta[1] = s.d;
    for (i64 i = 2; i <= n; ++i) {
        if (std::abs(delta[std::size_t(i - 1)]) <= pivot_rtol)
            throw SingularMatrix("pivot recurrence hit a zero delta at index "
                                 + std::to_string(i - 1));
        const double head = (i == n) ? s.d : s.c;
        delta[std::size_t(i)] = head - 1.0 / delta[std::size_t(i - 1)];
    }
    if (std::abs(delta[std::size_t(n)]) <= pivot_rtol)
        throw SingularMatrix("pivot recurrence hit a zero delta at index " + std::to_string(n));

    // v_i = b^{i-1} / (delta_n * ... * delta_{n-i+1})
    std::vector<double> u(std::size_t(n), 0.0);
    std::vector<double> v(std::size_t(n), 0.0);
    double prod = 1.0;
    for (i64 i = 1; i <= n; ++i) {
        prod *= delta[std::size_t(n - i + 1)];
        v[std::size_t(i - 1)] = sign_pow(s.b, i - 1) / prod;
    }
    // u_i = b^{n-i} / (delta_i * ... * delta_n * v_n)
    double tail = v[std::size_t(n - 1)];
    for (i64 i = n; i >= 1; --i) {
        tail *= delta[std::size_t(i)];
        u[std::size_t(i - 1)] = sign_pow(s.b, n - i) / tail;
    }
    for (i64 i = 0; i < n; ++i)
        for (i64 j = i; j < n; ++j) {
            const double val = u[std::size_t(i)] * v[std::size_t(j)];
            m(i, j) = val;
            m(j, i) = val;
        }
    return m;
}

std::vector<double> solve_tridiagonal(const TridiagSpec& s, const std::vector<double>& rhs) {
    const i64 n = s.n;
    if (i64(rhs.size()) != n)
        throw DimensionMismatch("rhs length " + std::to_string(rhs.size())
                                + " does not match order " + std::to_string(n));
    const double scale = std::max({1.0, std::abs(s.c), std::abs(s.d)});
    std::vector<double> x = rhs;
    if (n == 1) {
        if (std::abs(s.d) <= pivot_rtol * scale) throw SingularMatrix("singular 1x1 system");
        x[0] /= s.d;
        return x;
    }
    const double off = -double(s.b);
    std::vector<double> dl(std::size_t(n), off);
    std::vector<double> di(std::size_t(n), 0.0);
    std::vector<double> du(std::size_t(n), off);
    std::vector<double> du2(std::size_t(n), 0.0);
    for (i64 i = 0; i < n; ++i) di[std::size_t(i)] = (i == 0 || i == n - 1) ? s.d : s.c;
    // Forward elimination with row interchange where the subdiagonal dominates.
    for (i64 k = 0; k < n - 1; ++k) {
        if (std::abs(di[std::size_t(k)]) >= std::abs(dl[std::size_t(k + 1)])) {
            if (std::abs(di[std::size_t(k)]) <= pivot_rtol * scale)
                throw SingularMatrix("tridiagonal solve: pivot below tolerance");
            const double mult = dl[std::size_t(k + 1)] / di[std::size_t(k)];
            di[std::size_t(k + 1)] -= mult * du[std::size_t(k)];
            x[std::size_t(k + 1)] -= mult * x[std::size_t(k)];
            du2[std::size_t(k)] = 0.0;
        } else {
            const double mult = di[std::size_t(k)] / dl[std::size_t(k + 1)];
            di[std::size_t(k)] = dl[std::size_t(k + 1)];
            const double tmp = di[std::size_t(k + 1)];
            di[std::size_t(k + 1)] = du[std::size_t(k)] - mult * tmp;
            du2[std::size_t(k)] = (k + 2 < n) ? du[std::size_t(k + 1)] : 0.0;
            du[std::size_t(k)] = tmp;
            if (k + 2 < n) du[std::size_t(k + 1)] = -mult * du2[std::size_t(k)];
            std::swap(x[std::size_t(k)], x[std::size_t(k + 1)]);
            x[std::size_t(k + 1)] = x[std::size_t(k + 1)] - mult * x[std::size_t(k)];
        }
    }
    if (std::abs(di[std::size_t(n - 1)]) <= pivot_rtol * scale)
        throw SingularMatrix("tridiagonal solve: pivot below tolerance");
    // Back substitution through the two stored superdiagonals.
    x[std::size_t(n - 1)] /= di[std::size_t(n - 1)];
    if (n >= 2)
        x[std::size_t(n - 2)] =
            (x[std::size_t(n - 2)] - du[std::size_t(n - 2)] * x[std::size_t(n - 1)])
            / di[std::size_t(n - 2)];
    for (i64 k = n - 3; k >= 0; --k)
        x[std::size_t(k)] = (x[std::size_t(k)] - du[std::size_t(k)] * x[std::size_t(k + 1)]
                             - du2[std::size_t(k)] * x[std::size_t(k + 2)])
                            / di[std::size_t(k)];
    return x;
}

} // namespace trinv::oracle
