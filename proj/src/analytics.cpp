#include "trinv/analytics.hpp"

#include <cmath>
#include <string>

#include "trinv/errors.hpp"
#include "trinv/kernels.hpp"

namespace trinv::analytics {

namespace {

using i64 = std::int64_t;

// Threshold on the log magnitude past which zeta reports mantissa/log form.
constexpr double zeta_log_limit = 650.0;

} // namespace

RowSumVector row_sums(const TridiagSpec& s) {
    RowSumVector out;
    out.case_tag = (s.c == 2.0 && s.b == 1) ? RowSumVector::Case::c2_b1
                                            : RowSumVector::Case::general;
    const InverseFactors f = inverse_factors(s);
    const i64 n = s.n;
    out.s.resize(std::size_t(n));
    if (n == 1) {
        out.s[0] = f.v()[0];
        return out;
    }
    const auto& u = f.u();
    const auto& v = f.v();
    if (out.case_tag == RowSumVector::Case::c2_b1) {
        for (i64 i = 1; i <= n; ++i)
            out.s[std::size_t(i - 1)] = (double(n - 1) * u[std::size_t(i - 1)] * v[std::size_t(i - 1)]
                                         + double(i) * v[std::size_t(i - 1)]
                                         + double(n - i + 1) * v[std::size_t(n - i)])
                                        / 2.0;
    } else {
        const double coeff = double(s.b) - s.lambda;
        const double den = s.c - 2.0 * double(s.b);
        for (i64 i = 1; i <= n; ++i)
            out.s[std::size_t(i - 1)] =
                (1.0 - coeff * (v[std::size_t(i - 1)] + v[std::size_t(n - i)])) / den;
    }
    return out;
}

ScaledValue zeta_scaled(const TridiagSpec& s, i64 j) {
    if (!(s.c > 2.0)) throw DomainError("zeta requires c > 2");
    if (j < 1 || j > s.n)
        throw IndexOutOfRange("zeta index " + std::to_string(j) + " outside 1.."
                              + std::to_string(s.n));
    const KappaBasis kb = kappa_basis(s);
    const double rho = rho_product(s);
    const double small = s.lambda * s.lambda - 1.0 - 2.0 * rho * double(j);
    const double L = (2.0 * double(j) - 1.0) * kb.log_rplus;
    const double big = (kb.phi_plus * kb.phi_plus
                        - kb.phi_minus * kb.phi_minus * std::exp(-2.0 * L))
                       / kb.kappa0;
    // zeta_j = small + big * e^L; report in whichever frame stays finite.
    if (L < zeta_log_limit) return {small + big * std::exp(L), 0.0};
    return {big + small * std::exp(-L), L};
}

double zeta(const TridiagSpec& s, i64 j) { return zeta_scaled(s, j).value(); }

double trace_inverse(const TridiagSpec& s) {
    const InvertibilityReport rep = is_invertible(s);
    if (!rep) throw SingularMatrix("trace of a singular matrix");
    if (s.n == 1) return 1.0 / s.d;
    const double nn = double(s.n);
    if (s.c > 2.0) {
        const KappaBasis kb = kappa_basis(s);
        const double rho = rho_product(s);
        const double e2 = std::exp(-2.0 * (nn - 1.0) * kb.log_rplus);  // r_minus^{2n-2}
        const double e2n1 = std::exp(-(2.0 * nn - 1.0) * kb.log_rplus); // r_minus^{2n-1}
        const double k = kb.kappa_norm;
        return nn * (kb.phi_plus * kb.phi_plus + kb.phi_minus * kb.phi_minus * e2)
                   / (kb.kappa0 * k)
             - 2.0 * rho * (kb.r_plus - e2n1) / (kb.kappa0 * kb.kappa0 * k);
    }
    if (s.c == 2.0) {
        const double m = 1.0 - s.lambda;
        return nn * (nn - nn * s.lambda + s.lambda + m * m * (nn - 1.0) * (nn - 2.0) / 6.0)
               / (m * (m * (nn - 1.0) + 2.0));
    }
    return kernels::trace_direct(inverse_factors(s), kernels::auto_exec(s.n));
}

double trace_inverse_squared(const TridiagSpec& s) {
    const InvertibilityReport rep = is_invertible(s);
    if (!rep) throw SingularMatrix("trace of a singular matrix");
    if (s.n == 1) return 1.0 / (s.d * s.d);
    if (s.c > 2.0) {
        const KappaBasis kb = kappa_basis(s);
        const double nn = double(s.n);
        const double rho = rho_product(s);
        const double lam2 = s.lambda * s.lambda;
        const double k0 = kb.kappa0;
        const double k02 = k0 * k0;
        const double pp2 = kb.phi_plus * kb.phi_plus;
        const double pm2 = kb.phi_minus * kb.phi_minus;
        const double e2 = std::exp(-(2.0 * nn - 2.0) * kb.log_rplus); // r_minus^{2n-2}
        const double e4 = std::exp(-(4.0 * nn - 4.0) * kb.log_rplus); // r_minus^{4n-4}
        const double e3 = std::exp(-(4.0 * nn - 3.0) * kb.log_rplus); // r_minus^{4n-3}
        // Numerator of the closed form with every term divided by r_plus^{2n-2},
        // so nothing here can overflow.
        const double shat =
            (4.0 * rho * rho * nn * nn - 8.0 * rho * nn * (lam2 - 1.0)
             + 4.0 * rho * (1.0 + lam2) + 2.0 * (lam2 - 1.0) * (lam2 - 1.0)
             + 16.0 * rho * rho / k02) * e2
            + nn * s.c * (pp2 * pp2 - pm2 * pm2 * e4) / k0
            - 4.0 * rho * s.c * (pp2 * kb.r_plus + pm2 * e3) / k02
            + 2.0 * (lam2 - 1.0) * (pp2 * kb.r_plus - pm2 * e3) / k0;
        const double k = kb.kappa_norm;
        return shat / (k02 * k * k);
    }
    return kernels::trace_sq_direct(inverse_factors(s), kernels::auto_exec(s.n));
}

double limit_normalized_trace(const TridiagSpec& s) {
    if (!(s.c > 2.0)) throw DomainError("trace limit requires c > 2");
    return 1.0 / kappa_basis(s).kappa0;
}

double limit_normalized_trace_sq(const TridiagSpec& s) {
    if (!(s.c > 2.0)) throw DomainError("trace limit requires c > 2");
    return 0.0;
}

TraceReport trace_report(const TridiagSpec& s) {
    TraceReport r;
    r.trace_inv = trace_inverse(s);
    r.trace_inv_sq = trace_inverse_squared(s);
    r.n = s.n;
    const double nn = double(s.n);
    r.normalized_trace = r.trace_inv / nn;
    r.normalized_trace_sq = r.trace_inv_sq / (nn * nn);
    if (s.c > 2.0) {
        r.limit_normalized_trace = limit_normalized_trace(s);
        r.limit_normalized_trace_sq = limit_normalized_trace_sq(s);
    }
    return r;
}

} // namespace trinv::analytics
