#pragma once

#include <cstdint>
#include <vector>

#include "trinv/dense.hpp"
#include "trinv/errors.hpp"

namespace trinv {

// Symmetric tridiagonal matrix Q with diagonal (d, c, ..., c, d) and all
// off-diagonal entries equal to -b, where b is +1 or -1.  lambda = c - d is
// the quantity that drives all closed forms; lambda = 0 is accepted even
// though some published results assume otherwise.
struct TridiagSpec {
    std::int64_t n = 0;
    int b = 1;
    double c = 0.0;
    double d = 0.0;
    double lambda = 0.0;

    static TridiagSpec make(std::int64_t n, int b, double c, double d);
};

// Named constructions.
TridiagSpec spline_spec(std::int64_t n);          // cubic-spline matrix: b = -1, c = 4, d = 2
TridiagSpec car_spec(double rho, std::int64_t n); // conditional autoregression precision shape
TridiagSpec ar1_noise_spec(double phi, double gamma, std::int64_t n); // AR(1) plus noise posterior shape

// Characteristic-root quantities for c > 2, kept overflow-safe: every stored
// field is bounded, the exponential magnitude lives only in log_rplus.
struct KappaBasis {
    double r_plus = 0.0;     // (c + sqrt(c^2-4))/2
    double r_minus = 0.0;    // 1/r_plus
    double log_rplus = 0.0;
    double phi_plus = 0.0;   // r_plus - lambda
    double phi_minus = 0.0;  // r_minus - lambda
    double kappa0 = 0.0;     // sqrt(c^2-4) = r_plus - r_minus
    double kappa_norm = 0.0; // (d*beta_{n-1} - beta_{n-2}) * kappa0 / r_plus^{n-1}
};
KappaBasis kappa_basis(const TridiagSpec& spec);

// beta_0 .. beta_{count-1} with beta_0 = 1, beta_1 = d,
// beta_i = c*beta_{i-1} - beta_{i-2}.  Short sequences (count <= 64) use the
// recurrence; longer ones use the closed form per element, which is immune to
// the recurrence's error growth for c > 2.
std::vector<double> beta_sequence(const TridiagSpec& spec, std::int64_t count);

// rho = phi_plus * phi_minus, evaluated in the cancellation-free polynomial
// form 1 - c*lambda + lambda^2.
double rho_product(const TridiagSpec& spec);

struct InvertibilityReport {
    bool invertible = false;
    double denom = 0.0; // d*beta_{n-1} - beta_{n-2}; the sole entry d when n = 1;
                        // may round to +/-inf for very large n with c > 2
    double scale = 0.0; // magnitude reference used by the relative tolerance test
    explicit operator bool() const { return invertible; }
};
InvertibilityReport is_invertible(const TridiagSpec& spec);

// Rank-structured representation of Q^{-1}: element (i, j) with i <= j equals
// u_i * v_j.  For c > 2 an equivalent normalized form (bounded A_k factors
// plus powers of r_minus) is stored as well and used for element access, so
// single entries stay finite at any order even where u_i itself overflows.
class InverseFactors {
public:
    const TridiagSpec& spec() const { return spec_; }
    std::int64_t n() const { return spec_.n; }
    double denom() const { return denom_; }
    const std::vector<double>& u() const { return u_; }
    const std::vector<double>& v() const { return v_; }

    bool normalized() const { return normalized_; }
    // A_k = phi_plus - phi_minus * r_minus^{2(k-1)}, so kappa_{k-1} = r_plus^{k-1} * A_k.
    const std::vector<double>& scaled_kappa() const { return A_; }
    // r_minus^k for k = 0 .. n-1.
    const std::vector<double>& rminus_pow() const { return rmpow_; }
    double kappa0() const { return kappa0_; }
    double kappa_norm() const { return knorm_; }

    // Q^{-1}_{ij}, 1-based, either order of (i, j).
    double element(std::int64_t i, std::int64_t j) const;

private:
    friend InverseFactors inverse_factors(const TridiagSpec&);

    TridiagSpec spec_;
    double denom_ = 0.0;
    std::vector<double> u_, v_;
    bool normalized_ = false;
    std::vector<double> A_, rmpow_;
    double kappa0_ = 0.0;
    double knorm_ = 0.0;
};

InverseFactors inverse_factors(const TridiagSpec& spec);

double inverse_element(const InverseFactors& f, std::int64_t i, std::int64_t j);

// Direct c = 2 closed form; stays meaningful where the general denominator
// formula degenerates.  Singular exactly when lambda is 1 or (n+1)/(n-1).
double inverse_element_c2(const TridiagSpec& spec, std::int64_t i, std::int64_t j);

DenseMatrix full_inverse(const TridiagSpec& spec);

} // namespace trinv
