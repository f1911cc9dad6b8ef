#include "trinv/tridiag.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <utility>

#include "trinv/chebyshev.hpp"
#include "trinv/kernels.hpp"

namespace trinv {

namespace {

using i64 = std::int64_t;

constexpr double singular_rtol = 1e-12;
constexpr i64 recurrence_cutoff = 64;
// Past this many e-folds of r_plus the raw denominator is not representable,
// so invertibility is decided in the normalized frame.
constexpr double raw_log_limit = 600.0;

bool odd_negates(int b, i64 k) { return b == -1 && (k & 1) != 0; }

// Closed-form beta_i, any i >= 0.  The i <= 1 initial conditions are returned
// exactly so downstream identities (u_1 = 1) hold bitwise.
double beta_closed(const TridiagSpec& s, i64 i) {
    if (i == 0) return 1.0;
    if (i == 1) return s.d;
    if (s.c > 2.0) {
        const KappaBasis kb = kappa_basis(s);
        const double L = double(i) * kb.log_rplus;
        return std::exp(L) * (kb.phi_plus - kb.phi_minus * std::exp(-2.0 * L)) / kb.kappa0;
    }
    if (s.c == 2.0) return 1.0 + (1.0 - s.lambda) * double(i);
    const auto [un, um] = chebyshev::eval_U_pair(i, s.c / 2.0);
    return un - s.lambda * um;
}

// (beta_{n-2}, beta_{n-1}) without materializing the whole sequence.
std::pair<double, double> last_two_betas(const TridiagSpec& s) {
    const i64 n = s.n;
    if (n - 1 <= recurrence_cutoff) {
        double prev = 1.0, cur = s.d; // beta_0, beta_1
        if (n == 2) return {prev, cur};
        for (i64 i = 2; i <= n - 1; ++i) {
            const double next = s.c * cur - prev;
            prev = cur;
            cur = next;
        }
        return {prev, cur};
    }
    return {beta_closed(s, n - 2), beta_closed(s, n - 1)};
}

} // namespace

TridiagSpec TridiagSpec::make(i64 n, int b, double c, double d) {
    if (n < 1) throw DomainError("matrix order must be at least 1");
    if (b != 1 && b != -1) throw DomainError("off-diagonal sign b must be +1 or -1");
    if (!std::isfinite(c) || !std::isfinite(d)) throw DomainError("c and d must be finite");
    if (c < 0.0) throw DomainError("interior diagonal c must be nonnegative");
    TridiagSpec s;
    s.n = n;
    s.b = b;
    s.c = c;
    s.d = d;
    s.lambda = c - d;
    return s;
}

TridiagSpec spline_spec(i64 n) { return TridiagSpec::make(n, -1, 4.0, 2.0); }

TridiagSpec car_spec(double rho, i64 n) {
    if (!(std::abs(rho) > 0.0 && std::abs(rho) < 1.0))
        throw DomainError("car preset requires 0 < |rho| < 1");
    const double ar = std::abs(rho);
    return TridiagSpec::make(n, rho > 0 ? 1 : -1, 2.0 / ar, 1.0 / ar);
}

TridiagSpec ar1_noise_spec(double phi, double gamma, i64 n) {
    if (!(std::abs(phi) > 0.0 && std::abs(phi) < 1.0))
        throw DomainError("ar1 preset requires 0 < |phi| < 1");
    if (!(gamma >= 0.0)) throw DomainError("noise ratio gamma must be nonnegative");
    const double ap = std::abs(phi);
    return TridiagSpec::make(n, phi > 0 ? 1 : -1,
                             (1.0 + gamma + phi * phi) / ap, (1.0 + gamma) / ap);
}

KappaBasis kappa_basis(const TridiagSpec& s) {
    if (!(s.c > 2.0)) throw DomainError("kappa basis requires c > 2");
    KappaBasis kb;
    // (c-2)(c+2) instead of c^2-4: no cancellation as c approaches 2.
    kb.kappa0 = std::sqrt((s.c - 2.0) * (s.c + 2.0));
    kb.r_plus = (s.c + kb.kappa0) / 2.0;
    kb.r_minus = 1.0 / kb.r_plus;
    kb.log_rplus = std::log1p((s.c - 2.0 + kb.kappa0) / 2.0);
    kb.phi_plus = kb.r_plus - s.lambda;
    kb.phi_minus = kb.r_minus - s.lambda;
    kb.kappa_norm = kb.phi_plus * kb.phi_plus
                  - kb.phi_minus * kb.phi_minus
                        * std::exp(-2.0 * double(s.n - 1) * kb.log_rplus);
    return kb;
}

std::vector<double> beta_sequence(const TridiagSpec& s, i64 count) {
    if (count < 0 || count > s.n) throw DomainError("beta count must lie in [0, n]");
    std::vector<double> beta(std::size_t(count), 0.0);
    if (count == 0) return beta;
    if (count <= recurrence_cutoff) {
        beta[0] = 1.0;
        if (count > 1) beta[1] = s.d;
        for (i64 i = 2; i < count; ++i)
            beta[std::size_t(i)] = s.c * beta[std::size_t(i - 1)] - beta[std::size_t(i - 2)];
        return beta;
    }
    for (i64 i = 0; i < count; ++i) beta[std::size_t(i)] = beta_closed(s, i);
    return beta;
}

double rho_product(const TridiagSpec& s) {
    return 1.0 - s.c * s.lambda + s.lambda * s.lambda;
}

InvertibilityReport is_invertible(const TridiagSpec& s) {
    if (s.n == 1) {
        const double scale = std::max(1.0, std::abs(s.d));
        return {std::abs(s.d) > singular_rtol * scale, s.d, scale};
    }
    if (s.c > 2.0) {
        const KappaBasis kb = kappa_basis(s);
        if (double(s.n - 1) * kb.log_rplus > raw_log_limit) {
            // Same tolerance test as below, with every term rescaled by
            // kappa0 / r_plus^{n-1} so the comparison stays representable.
            const double e_nm1 = std::exp(-2.0 * double(s.n - 1) * kb.log_rplus);
            const double e_nm2 = std::exp(-2.0 * double(s.n - 2) * kb.log_rplus);
            const double a_n = kb.phi_plus - kb.phi_minus * e_nm1;
            const double a_nm1 = kb.phi_plus - kb.phi_minus * e_nm2;
            const double scale = std::max({kb.kappa0 * std::exp(-double(s.n - 1) * kb.log_rplus),
                                           std::abs(s.d * a_n), kb.r_minus * std::abs(a_nm1)});
            const bool inv = std::abs(kb.kappa_norm) > singular_rtol * scale;
            const double denom = std::exp(double(s.n - 1) * kb.log_rplus) * kb.kappa_norm / kb.kappa0;
            return {inv, denom, scale};
        }
    }
    const auto [b_nm2, b_nm1] = last_two_betas(s);
    const double denom = s.d * b_nm1 - b_nm2;
    const double scale = std::max({1.0, std::abs(s.d * b_nm1), std::abs(b_nm2)});
    return {std::abs(denom) > singular_rtol * scale, denom, scale};
}

InverseFactors inverse_factors(const TridiagSpec& s) {
    const InvertibilityReport rep = is_invertible(s);
    if (!rep)
        throw SingularMatrix("matrix is singular to working precision (denominator "
                             + std::to_string(rep.denom) + ")");
    InverseFactors f;
    f.spec_ = s;
    f.denom_ = rep.denom;
    const i64 n = s.n;
    f.u_.resize(std::size_t(n));
    f.v_.resize(std::size_t(n));
    if (n == 1) {
        f.u_[0] = 1.0;
        f.v_[0] = 1.0 / s.d;
        return f;
    }
    if (s.c > 2.0) {
        const KappaBasis kb = kappa_basis(s);
        f.normalized_ = true;
        f.kappa0_ = kb.kappa0;
        f.knorm_ = kb.kappa_norm;
        f.A_.resize(std::size_t(n));
        f.rmpow_.resize(std::size_t(n));
        const double rm2 = kb.r_minus * kb.r_minus;
        double e = 1.0;
        for (i64 k = 0; k < n; ++k) {
            f.A_[std::size_t(k)] = kb.phi_plus - kb.phi_minus * e;
            e *= rm2;
        }
        double p = 1.0;
        for (i64 k = 0; k < n; ++k) {
            f.rmpow_[std::size_t(k)] = p;
            p *= kb.r_minus;
        }
        // v_i = b^{i-1} r_minus^{i-1} A_{n-i+1} / kappa_norm: always finite.
        for (i64 i = 1; i <= n; ++i) {
            double val = f.rmpow_[std::size_t(i - 1)] * f.A_[std::size_t(n - i)] / kb.kappa_norm;
            if (odd_negates(s.b, i - 1)) val = -val;
            f.v_[std::size_t(i - 1)] = val;
        }
        // u_i = b^{i-1} beta_{i-1} grows like r_plus^i; +/-inf beyond the
        // representable range is documented behavior, element() never uses it.
        const std::vector<double> beta = beta_sequence(s, n);
        for (i64 i = 1; i <= n; ++i) {
            double val = beta[std::size_t(i - 1)];
            if (odd_negates(s.b, i - 1)) val = -val;
            f.u_[std::size_t(i - 1)] = val;
        }
        return f;
    }
    // c <= 2: beta stays bounded (linear growth at c = 2, oscillatory below),
    // the raw factors are the natural representation.
    const std::vector<double> beta = beta_sequence(s, n);
    for (i64 i = 1; i <= n; ++i) {
        double uu = beta[std::size_t(i - 1)];
        double vv = beta[std::size_t(n - i)] / rep.denom;
        if (odd_negates(s.b, i - 1)) {
            uu = -uu;
            vv = -vv;
        }
        f.u_[std::size_t(i - 1)] = uu;
        f.v_[std::size_t(i - 1)] = vv;
    }
    return f;
}

double InverseFactors::element(i64 i, i64 j) const {
    const i64 n = spec_.n;
    if (i < 1 || i > n || j < 1 || j > n)
        throw IndexOutOfRange("element index (" + std::to_string(i) + ", " + std::to_string(j)
                              + ") outside 1.." + std::to_string(n));
    if (i > j) std::swap(i, j);
    if (!normalized_) return u_[std::size_t(i - 1)] * v_[std::size_t(j - 1)];
    double val = A_[std::size_t(i - 1)] * A_[std::size_t(n - j)]
               * rmpow_[std::size_t(j - i)] / (kappa0_ * knorm_);
    if (odd_negates(spec_.b, i + j)) val = -val;
    return val;
}

double inverse_element(const InverseFactors& f, i64 i, i64 j) { return f.element(i, j); }

double inverse_element_c2(const TridiagSpec& s, i64 i, i64 j) {
    if (s.c != 2.0) throw DomainError("this closed form requires c = 2");
    const i64 n = s.n;
    if (i < 1 || i > n || j < 1 || j > n)
        throw IndexOutOfRange("element index (" + std::to_string(i) + ", " + std::to_string(j)
                              + ") outside 1.." + std::to_string(n));
    if (n == 1) {
        if (std::abs(s.d) <= singular_rtol * std::max(1.0, std::abs(s.d)))
            throw SingularMatrix("1x1 matrix with zero entry");
        return 1.0 / s.d;
    }
    if (i > j) std::swap(i, j);
    const double m = 1.0 - s.lambda; // d - 1
    const double den = m * (m * double(n - 1) + 2.0);
    const double scale = std::max(1.0, std::abs(m) * (std::abs(m) * double(n - 1) + 2.0));
    if (std::abs(den) <= singular_rtol * scale)
        throw SingularMatrix("c = 2 matrix singular: lambda at 1 or (n+1)/(n-1)");
    double val = (1.0 + m * double(i - 1)) * (1.0 + m * double(n - j)) / den;
    if (odd_negates(s.b, i + j)) val = -val;
    return val;
}

DenseMatrix full_inverse(const TridiagSpec& s) {
    return kernels::materialize_inverse(inverse_factors(s), kernels::auto_exec(s.n * s.n));
}

} // namespace trinv
