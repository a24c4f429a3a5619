#pragma once

#include <cstdint>
#include <utility>
#include <variant>

#include "dms/rng.hpp"

namespace dms {

// Distribution specs use the parameterizations of the instance generator:
// gamma and negative binomial by (mean, cv), beta by (mean, sd) of the
// unshifted law plus a right shift, lognormal by the log-scale parameters.

struct NegBinomial {
    double mean = 0.0;
    double cv = 0.0;  // requires cv^2 * mean > 1 (variance strictly above mean)
};

struct Gamma {
    double mean = 0.0;
    double cv = 0.0;
};

struct ShiftedBeta {
    double mean = 0.0;  // mean of the unshifted beta on [0,1]
    double sd = 0.0;    // sd of the unshifted beta
    double shift = 0.0; // value = Beta(mean, sd) + shift
};

struct LogNormal {
    double mu_log = 0.0;
    double sigma_log = 0.0;
};

struct Weibull {
    double scale = 0.0;
    double shape = 0.0;
};

struct Normal {
    double mean = 0.0;
    double sd = 0.0;
};

using DistSpec = std::variant<NegBinomial, Gamma, ShiftedBeta, LogNormal, Weibull, Normal>;

/// Throws std::invalid_argument naming the offending field.
void validate(const DistSpec& spec);

double mean(const DistSpec& spec);
double variance(const DistSpec& spec);

/// One draw. NegBinomial draws are integer-valued (returned as double).
double sample(const DistSpec& spec, RngStream& rng);

double cdf(const DistSpec& spec, double x);

/// F^{-1}(q) for q in (0,1). For NegBinomial: the smallest integer n with
/// CDF(n) >= q.
double quantile(const DistSpec& spec, double q);

/// Draws a pair with marginals fx, fy and a Gaussian copula: independent
/// standard normals Z are mapped through W = (Z1, rho Z1 + sqrt(1-rho^2) Z2)
/// and inverted through the marginal quantiles. Requires |rho| < 1.
std::pair<double, double> sample_correlated(const DistSpec& fx, const DistSpec& fy,
                                            double rho, RngStream& rng);

// --- negative binomial helpers -------------------------------------------

struct NegBinParams {
    double size;  // r = mean^2 / (var - mean)
    double prob;  // p = mean / var
};
NegBinParams negbin_params(const NegBinomial& nb);

/// Integer draw via the gamma-Poisson mixture (exact for real-valued size).
long long sample_negbin(const NegBinomial& nb, RngStream& rng);

/// Law of the sum of `periods` iid draws (same success probability,
/// size scaled by the number of periods).
NegBinomial negbin_sum(const NegBinomial& nb, int periods);

/// CDF at an integer point, P(X <= k).
double negbin_cdf(const NegBinomial& nb, long long k);

/// Smallest integer n with P(X <= n) >= q.
long long negbin_quantile(const NegBinomial& nb, double q);

// --- primitive samplers (exposed for reuse and tests) --------------------

/// (alpha, beta) of the beta law with the given mean and sd on [0,1].
std::pair<double, double> beta_ab(double mean, double sd);

double sample_unit_normal(RngStream& rng);            // inverse-CDF method
double sample_standard_gamma(double shape, RngStream& rng);  // Marsaglia-Tsang
long long sample_poisson(double mean, RngStream& rng);       // exact (inversion / PTRD)

}  // namespace dms
