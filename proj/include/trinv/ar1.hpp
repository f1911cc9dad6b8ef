#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "trinv/kernels.hpp"
#include "trinv/tridiag.hpp"

namespace trinv::ar1 {

// Latent AR(1) signal observed under white noise:
//   x_t = mu + phi (x_{t-1} - mu) + sigma_eta eta_t,  y_t = x_t + sigma_eps eps_t,
// with x_0 drawn from the stationary law.  gamma = sigma_eta^2 / sigma_eps^2.
// phi = 0 is rejected here because the posterior precision loses its
// tridiagonal structure; see the *_phi_zero free functions for that case.
struct AR1Config {
    double phi = 0.0;
    double gamma = 0.0;
    double sigma_eta_sq = 0.0;
    double sigma_eps_sq = 0.0;
    double mu = 0.0;
    std::int64_t n = 0;

    static AR1Config from_gamma(double phi, double gamma, double sigma_eps_sq,
                                double mu, std::int64_t n);
    static AR1Config from_variances(double phi, double sigma_eta_sq, double sigma_eps_sq,
                                    double mu, std::int64_t n);
};

// The posterior precision of the latent path is omega_scale(cfg) * Q with Q
// described by ar1_spec(cfg): b = sign(phi), c = (1+gamma+phi^2)/|phi|,
// d = (1+gamma)/|phi|.
TridiagSpec ar1_spec(const AR1Config& cfg);
double omega_scale(const AR1Config& cfg); // |phi| / sigma_eta^2

// Open interval guaranteed to contain every row sum of Q^{-1}; which pair of
// endpoints applies depends on the sign of phi (regime = +1 or -1).
struct RowSumBounds {
    double lower = 0.0;
    double upper = 0.0;
    int regime = 0;
};
RowSumBounds row_sum_bounds(const AR1Config& cfg);

// Image of the row-sum interval under w = 1 - (gamma/|phi|) s.
std::pair<double, double> w_opt_bounds(const AR1Config& cfg);

// Per-coordinate shrinkage weights when both variances are known.
std::vector<double> w_opt_known_variances(const AR1Config& cfg);

// Estimated persistence-adjustment factor from one observed series.
double a_opt_from_data(const AR1Config& cfg, const std::vector<double>& y);

// Weights when mu is known but the variances are estimated through a_opt.
std::vector<double> w_opt_known_mu(const AR1Config& cfg, const std::vector<double>& y,
                                   double a_opt);

// Exact sampling moments of a_opt under the model.
struct AOptMoments {
    double mean = 0.0;
    double variance = 0.0;
};
AOptMoments a_opt_moments(const AR1Config& cfg);

// n -> infinity limit of E(a_opt); independent of n, mu and the noise scale.
double a_opt_limit(const AR1Config& cfg);

// One series y_1..y_n.  Fixed draw order (x_0 shock, then eta_t and eps_t per
// step) from std::mt19937_64 + std::normal_distribution, so results are
// reproducible for a given seed on a given standard library.
std::vector<double> simulate(const AR1Config& cfg, std::uint64_t seed);

// Monte Carlo summary of a_opt over many simulated series.  Per-rep seeds are
// derived from (seed, rep); rep values are reduced in index order, so serial
// and parallel runs agree bitwise.
struct McSummary {
    double mean = 0.0;
    double sample_variance = 0.0;
    double std_error = 0.0;
    std::int64_t reps = 0;
};
McSummary mc_mean_a_opt(const AR1Config& cfg, std::int64_t reps, std::uint64_t seed,
                        kernels::Exec exec);

// phi = 0: the posterior precision collapses to sigma_eta^{-2} (1+gamma) I.
double a_opt_phi_zero(double gamma, double sigma_eps_sq, double mu,
                      const std::vector<double>& y);
double w_opt_phi_zero(double gamma);

} // namespace trinv::ar1
