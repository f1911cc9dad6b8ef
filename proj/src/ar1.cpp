#include "trinv/ar1.hpp"

#include <cmath>
#include <random>
#include <string>

#include "trinv/analytics.hpp"
#include "trinv/errors.hpp"
#include "trinv/oracle.hpp"

namespace trinv::ar1 {

namespace {

using i64 = std::int64_t;

void validate(const AR1Config& cfg) {
    if (cfg.phi == 0.0)
        throw DomainError("phi = 0 has a diagonal posterior precision; "
                          "use the phi-zero functions instead");
    if (!(std::abs(cfg.phi) < 1.0) || !std::isfinite(cfg.phi))
        throw DomainError("phi must satisfy 0 < |phi| < 1");
    if (!(cfg.gamma > 0.0) || !std::isfinite(cfg.gamma))
        throw DomainError("gamma must be positive");
    if (!(cfg.sigma_eta_sq > 0.0) || !(cfg.sigma_eps_sq > 0.0))
        throw DomainError("variances must be positive");
    if (!std::isfinite(cfg.mu)) throw DomainError("mu must be finite");
    if (cfg.n < 1) throw DomainError("series length must be at least 1");
    if (std::abs(cfg.gamma * cfg.sigma_eps_sq - cfg.sigma_eta_sq)
        > 1e-12 * std::max(cfg.sigma_eta_sq, 1e-300))
        throw DomainError("gamma is not consistent with the variance ratio");
}

// t' Lambda t for the stationary-AR(1) structure matrix Lambda:
// diagonal (1, 1+phi^2, ..., 1+phi^2, 1), off-diagonal -phi.
double lambda_quad_form(const AR1Config& cfg, const std::vector<double>& t) {
    const i64 n = cfg.n;
    const double interior = 1.0 + cfg.phi * cfg.phi;
    kernels::CompensatedSum acc;
    for (i64 i = 0; i < n; ++i) {
        const double diag = (i == 0 || i == n - 1) ? 1.0 : interior;
        acc.add(diag * t[std::size_t(i)] * t[std::size_t(i)]);
    }
    for (i64 i = 0; i + 1 < n; ++i)
        acc.add(-2.0 * cfg.phi * t[std::size_t(i)] * t[std::size_t(i + 1)]);
    return acc.get();
}

// Lambda * t.
std::vector<double> lambda_matvec(const AR1Config& cfg, const std::vector<double>& t) {
    const i64 n = cfg.n;
    const double interior = 1.0 + cfg.phi * cfg.phi;
    std::vector<double> out(std::size_t(n), 0.0);
    for (i64 i = 0; i < n; ++i) {
        const double diag = (i == 0 || i == n - 1) ? 1.0 : interior;
        double val = diag * t[std::size_t(i)];
        if (i > 0) val -= cfg.phi * t[std::size_t(i - 1)];
        if (i + 1 < n) val -= cfg.phi * t[std::size_t(i + 1)];
        out[std::size_t(i)] = val;
    }
    return out;
}

// Omega^{-1} z via the tridiagonal solve; Omega = omega_scale * Q.
std::vector<double> apply_omega_inverse(const AR1Config& cfg, const TridiagSpec& spec,
                                        const std::vector<double>& z) {
    std::vector<double> t = oracle::solve_tridiagonal(spec, z);
    const double sc = 1.0 / omega_scale(cfg);
    for (double& ti : t) ti *= sc;
    return t;
}

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

} // namespace

AR1Config AR1Config::from_gamma(double phi, double gamma, double sigma_eps_sq, double mu,
                                i64 n) {
    AR1Config cfg;
    cfg.phi = phi;
    cfg.gamma = gamma;
    cfg.sigma_eps_sq = sigma_eps_sq;
    cfg.sigma_eta_sq = gamma * sigma_eps_sq;
    cfg.mu = mu;
    cfg.n = n;
    validate(cfg);
    return cfg;
}

AR1Config AR1Config::from_variances(double phi, double sigma_eta_sq, double sigma_eps_sq,
                                    double mu, i64 n) {
    AR1Config cfg;
    cfg.phi = phi;
    cfg.sigma_eta_sq = sigma_eta_sq;
    cfg.sigma_eps_sq = sigma_eps_sq;
    cfg.gamma = (sigma_eps_sq > 0.0) ? sigma_eta_sq / sigma_eps_sq : 0.0;
    cfg.mu = mu;
    cfg.n = n;
    validate(cfg);
    return cfg;
}

TridiagSpec ar1_spec(const AR1Config& cfg) {
    return ar1_noise_spec(cfg.phi, cfg.gamma, cfg.n);
}

double omega_scale(const AR1Config& cfg) { return std::abs(cfg.phi) / cfg.sigma_eta_sq; }

RowSumBounds row_sum_bounds(const AR1Config& cfg) {
    const TridiagSpec s = ar1_spec(cfg);
    RowSumBounds b;
    if (cfg.phi > 0.0) {
        b.regime = 1;
        b.lower = 1.0 / (s.d - cfg.phi);
        b.upper = 1.0 / (s.c - 2.0);
    } else {
        b.regime = -1;
        b.lower = 2.0 / (s.c + 2.0) - 1.0 / (s.d + cfg.phi);
        b.upper = 1.0 / (s.d + cfg.phi);
    }
    return b;
}

std::pair<double, double> w_opt_bounds(const AR1Config& cfg) {
    const RowSumBounds sb = row_sum_bounds(cfg);
    const double q = cfg.gamma / std::abs(cfg.phi);
    // w = 1 - q s is decreasing in s, so the endpoints swap.
    return {1.0 - q * sb.upper, 1.0 - q * sb.lower};
}

std::vector<double> w_opt_known_variances(const AR1Config& cfg) {
    const analytics::RowSumVector rs = analytics::row_sums(ar1_spec(cfg));
    const double q = cfg.gamma / std::abs(cfg.phi);
    std::vector<double> w(rs.s.size());
    for (std::size_t i = 0; i < rs.s.size(); ++i) w[i] = 1.0 - q * rs.s[i];
    return w;
}

double a_opt_from_data(const AR1Config& cfg, const std::vector<double>& y) {
    if (i64(y.size()) != cfg.n)
        throw DimensionMismatch("series length " + std::to_string(y.size())
                                + " does not match configured n = " + std::to_string(cfg.n));
    const TridiagSpec spec = ar1_spec(cfg);
    std::vector<double> z(std::size_t(cfg.n));
    for (i64 i = 0; i < cfg.n; ++i)
        z[std::size_t(i)] = (y[std::size_t(i)] - cfg.mu) / cfg.sigma_eps_sq;
    const std::vector<double> t = apply_omega_inverse(cfg, spec, z);
    return 1.0 - lambda_quad_form(cfg, t) / (double(cfg.n) * cfg.sigma_eta_sq);
}

std::vector<double> w_opt_known_mu(const AR1Config& cfg, const std::vector<double>& y,
                                   double a_opt) {
    if (i64(y.size()) != cfg.n)
        throw DimensionMismatch("series length " + std::to_string(y.size())
                                + " does not match configured n = " + std::to_string(cfg.n));
    if (cfg.mu == 0.0) throw DomainError("weights for known mean need mu != 0");
    if (a_opt == 0.0) throw DomainError("weights for known mean need a_opt != 0");
    const TridiagSpec spec = ar1_spec(cfg);
    std::vector<double> z(std::size_t(cfg.n));
    for (i64 i = 0; i < cfg.n; ++i)
        z[std::size_t(i)] = (y[std::size_t(i)] - cfg.mu) / cfg.sigma_eps_sq;
    const std::vector<double> h = apply_omega_inverse(cfg, spec, z);
    const std::vector<double> lh = lambda_matvec(cfg, h);
    std::vector<double> g(std::size_t(cfg.n));
    for (i64 i = 0; i < cfg.n; ++i)
        g[std::size_t(i)] = 2.0 * lh[std::size_t(i)] / (a_opt * cfg.sigma_eta_sq)
                            - z[std::size_t(i)];
    std::vector<double> w = apply_omega_inverse(cfg, spec, g);
    for (double& wi : w) wi /= cfg.mu;
    return w;
}

AOptMoments a_opt_moments(const AR1Config& cfg) {
    const TridiagSpec spec = ar1_spec(cfg);
    const double nn = double(cfg.n);
    const double ap = std::abs(cfg.phi);
    AOptMoments m;
    m.mean = 1.0 - cfg.gamma * analytics::trace_inverse(spec) / (nn * ap);
    m.variance = 2.0 * cfg.gamma * cfg.gamma * analytics::trace_inverse_squared(spec)
                 / (nn * nn * cfg.phi * cfg.phi);
    return m;
}

double a_opt_limit(const AR1Config& cfg) {
    const double om = 1.0 - cfg.phi;
    const double op = 1.0 + cfg.phi;
    return 1.0 - cfg.gamma / std::sqrt((om * om + cfg.gamma) * (op * op + cfg.gamma));
}

std::vector<double> simulate(const AR1Config& cfg, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss(0.0, 1.0);
    const double s_eps = std::sqrt(cfg.sigma_eps_sq);
    const double s_eta = std::sqrt(cfg.sigma_eta_sq);
    const double s_x0 = std::sqrt(cfg.sigma_eta_sq / (1.0 - cfg.phi * cfg.phi));
    std::vector<double> y(std::size_t(cfg.n));
    double x = cfg.mu + s_x0 * gauss(rng);
    for (i64 t = 0; t < cfg.n; ++t) {
        x = cfg.mu + cfg.phi * (x - cfg.mu) + s_eta * gauss(rng);
        y[std::size_t(t)] = x + s_eps * gauss(rng);
    }
    return y;
}

McSummary mc_mean_a_opt(const AR1Config& cfg, i64 reps, std::uint64_t seed,
                        kernels::Exec exec) {
    if (reps < 2) throw DomainError("Monte Carlo summary needs at least 2 replications");
    std::vector<double> a(std::size_t(reps), 0.0);
    const bool par = exec == kernels::Exec::parallel && kernels::openmp_enabled();
    (void)par;
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic, 4) if (par)
#endif
    for (i64 rep = 0; rep < reps; ++rep) {
        const std::uint64_t rep_seed =
            splitmix64(seed ^ (0x9e3779b97f4a7c15ULL * std::uint64_t(rep + 1)));
        a[std::size_t(rep)] = a_opt_from_data(cfg, simulate(cfg, rep_seed));
    }
    kernels::CompensatedSum sum;
    for (double ai : a) sum.add(ai);
    McSummary out;
    out.reps = reps;
    out.mean = sum.get() / double(reps);
    kernels::CompensatedSum sq;
    for (double ai : a) sq.add((ai - out.mean) * (ai - out.mean));
    out.sample_variance = sq.get() / double(reps - 1);
    out.std_error = std::sqrt(out.sample_variance / double(reps));
    return out;
}

double a_opt_phi_zero(double gamma, double sigma_eps_sq, double mu,
                      const std::vector<double>& y) {
    if (!(gamma > 0.0)) throw DomainError("gamma must be positive");
    if (!(sigma_eps_sq > 0.0)) throw DomainError("sigma_eps_sq must be positive");
    if (y.empty()) throw DimensionMismatch("series must be nonempty");
    kernels::CompensatedSum acc;
    for (double yi : y) acc.add((yi - mu) * (yi - mu));
    const double opg = 1.0 + gamma;
    return 1.0 - gamma * acc.get() / (double(y.size()) * sigma_eps_sq * opg * opg);
}

double w_opt_phi_zero(double gamma) {
    if (!(gamma > 0.0)) throw DomainError("gamma must be positive");
    return 1.0 - gamma / (1.0 + gamma);
}

} // namespace trinv::ar1
