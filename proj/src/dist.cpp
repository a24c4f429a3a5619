#include "dms/dist.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "dms/special.hpp"

namespace dms {

using special::betai;
using special::gammp;
using special::inv_betai;
using special::inv_gammp;
using special::norm_cdf;
using special::norm_quantile;

namespace {

[[noreturn]] void bad_param(const char* field, const char* why) {
    throw std::invalid_argument(std::string(field) + ": " + why);
}

struct GammaParams {
    double shape;
    double scale;
};

GammaParams gamma_params(const Gamma& g) { return {1.0 / (g.cv * g.cv), g.mean * g.cv * g.cv}; }

}  // namespace

std::pair<double, double> beta_ab(double m, double sd) {
    double var = sd * sd;
    double span = m * (1.0 - m);
    if (!(m > 0.0 && m < 1.0)) bad_param("ShiftedBeta.mean", "must lie in (0,1)");
    if (!(var > 0.0 && var < span)) bad_param("ShiftedBeta.sd", "sd^2 must lie in (0, mean(1-mean))");
    double k = span / var - 1.0;
    return {m * k, (1.0 - m) * k};
}

void validate(const DistSpec& spec) {
    std::visit(
        [](const auto& d) {
            using T = std::decay_t<decltype(d)>;
            if constexpr (std::is_same_v<T, NegBinomial>) {
                if (!(d.mean > 0.0)) bad_param("NegBinomial.mean", "must be > 0");
                if (!(d.cv > 0.0)) bad_param("NegBinomial.cv", "must be > 0");
                if (!(d.cv * d.cv * d.mean > 1.0))
                    bad_param("NegBinomial.cv", "cv^2 * mean must exceed 1 (variance above mean)");
            } else if constexpr (std::is_same_v<T, Gamma>) {
                if (!(d.mean > 0.0)) bad_param("Gamma.mean", "must be > 0");
                if (!(d.cv > 0.0)) bad_param("Gamma.cv", "must be > 0");
            } else if constexpr (std::is_same_v<T, ShiftedBeta>) {
                beta_ab(d.mean, d.sd);  // validates mean/sd
                if (!std::isfinite(d.shift)) bad_param("ShiftedBeta.shift", "must be finite");
            } else if constexpr (std::is_same_v<T, LogNormal>) {
                if (!std::isfinite(d.mu_log)) bad_param("LogNormal.mu_log", "must be finite");
                if (!(d.sigma_log > 0.0)) bad_param("LogNormal.sigma_log", "must be > 0");
            } else if constexpr (std::is_same_v<T, Weibull>) {
                if (!(d.scale > 0.0)) bad_param("Weibull.scale", "must be > 0");
                if (!(d.shape > 0.0)) bad_param("Weibull.shape", "must be > 0");
            } else {
                if (!std::isfinite(d.mean)) bad_param("Normal.mean", "must be finite");
                if (!(d.sd > 0.0)) bad_param("Normal.sd", "must be > 0");
            }
        },
        spec);
}

double mean(const DistSpec& spec) {
    return std::visit(
        [](const auto& d) -> double {
            using T = std::decay_t<decltype(d)>;
            if constexpr (std::is_same_v<T, NegBinomial>) return d.mean;
            else if constexpr (std::is_same_v<T, Gamma>) return d.mean;
            else if constexpr (std::is_same_v<T, ShiftedBeta>) return d.mean + d.shift;
            else if constexpr (std::is_same_v<T, LogNormal>)
                return std::exp(d.mu_log + 0.5 * d.sigma_log * d.sigma_log);
            else if constexpr (std::is_same_v<T, Weibull>)
                return d.scale * std::tgamma(1.0 + 1.0 / d.shape);
            else return d.mean;
        },
        spec);
}

double variance(const DistSpec& spec) {
    return std::visit(
        [](const auto& d) -> double {
            using T = std::decay_t<decltype(d)>;
            if constexpr (std::is_same_v<T, NegBinomial>) return d.cv * d.cv * d.mean * d.mean;
            else if constexpr (std::is_same_v<T, Gamma>) return d.cv * d.cv * d.mean * d.mean;
            else if constexpr (std::is_same_v<T, ShiftedBeta>) return d.sd * d.sd;
            else if constexpr (std::is_same_v<T, LogNormal>) {
                double s2 = d.sigma_log * d.sigma_log;
                return (std::exp(s2) - 1.0) * std::exp(2.0 * d.mu_log + s2);
            } else if constexpr (std::is_same_v<T, Weibull>) {
                double g1 = std::tgamma(1.0 + 1.0 / d.shape);
                double g2 = std::tgamma(1.0 + 2.0 / d.shape);
                return d.scale * d.scale * (g2 - g1 * g1);
            } else return d.sd * d.sd;
        },
        spec);
}

double sample_unit_normal(RngStream& rng) { return norm_quantile(rng.next_open()); }

double sample_standard_gamma(double shape, RngStream& rng) {
    if (shape < 1.0) {
        // boost: draw at shape+1 and scale by U^(1/shape)
        double u = rng.next_open();
        return sample_standard_gamma(shape + 1.0, rng) * std::pow(u, 1.0 / shape);
    }
    double d = shape - 1.0 / 3.0;
    double c = 1.0 / std::sqrt(9.0 * d);
    for (;;) {
        double x, v;
        do {
            x = sample_unit_normal(rng);
            v = 1.0 + c * x;
        } while (v <= 0.0);
        v = v * v * v;
        double u = rng.next_open();
        if (u < 1.0 - 0.0331 * x * x * x * x) return d * v;
        if (std::log(u) < 0.5 * x * x + d * (1.0 - v + std::log(v))) return d * v;
    }
}

long long sample_poisson(double lambda, RngStream& rng) {
    if (lambda < 0.0) throw std::invalid_argument("sample_poisson: mean must be >= 0");
    if (lambda == 0.0) return 0;
    if (lambda < 10.0) {
        // product-of-uniforms inversion
        double limit = std::exp(-lambda);
        double prod = rng.next_open();
        long long k = 0;
        while (prod > limit) {
            prod *= rng.next_open();
            ++k;
        }
        return k;
    }
    // PTRD transformed rejection (Hoermann), exact for lambda >= 10
    double b = 0.931 + 2.53 * std::sqrt(lambda);
    double a = -0.059 + 0.02483 * b;
    double inv_alpha = 1.1239 + 1.1328 / (b - 3.4);
    double v_r = 0.9277 - 3.6224 / (b - 2.0);
    double log_lambda = std::log(lambda);
    for (;;) {
        double u = rng.next_open() - 0.5;
        double v = rng.next_open();
        double us = 0.5 - std::fabs(u);
        double kf = std::floor((2.0 * a / us + b) * u + lambda + 0.43);
        if (us >= 0.07 && v <= v_r) return static_cast<long long>(kf);
        if (kf < 0.0 || (us < 0.013 && v > us)) continue;
        double k = kf;
        if (std::log(v * inv_alpha / (a / (us * us) + b)) <=
            k * log_lambda - lambda - std::lgamma(k + 1.0)) {
            return static_cast<long long>(kf);
        }
    }
}

NegBinParams negbin_params(const NegBinomial& nb) {
    double var = nb.cv * nb.cv * nb.mean * nb.mean;
    return {nb.mean * nb.mean / (var - nb.mean), nb.mean / var};
}

long long sample_negbin(const NegBinomial& nb, RngStream& rng) {
    auto [size, prob] = negbin_params(nb);
    double lambda = sample_standard_gamma(size, rng) * ((1.0 - prob) / prob);
    return sample_poisson(lambda, rng);
}

NegBinomial negbin_sum(const NegBinomial& nb, int periods) {
    if (periods < 1) throw std::invalid_argument("negbin_sum: periods must be >= 1");
    double n = static_cast<double>(periods);
    return NegBinomial{nb.mean * n, nb.cv / std::sqrt(n)};
}

double negbin_cdf(const NegBinomial& nb, long long k) {
    if (k < 0) return 0.0;
    auto [size, prob] = negbin_params(nb);
    return betai(size, static_cast<double>(k) + 1.0, prob);
}

long long negbin_quantile(const NegBinomial& nb, double q) {
    if (!(q > 0.0 && q < 1.0)) throw std::invalid_argument("negbin_quantile: q in (0,1) required");
    double sd = nb.cv * nb.mean;
    long long hi = static_cast<long long>(std::ceil(nb.mean + 10.0 * sd + 16.0));
    while (negbin_cdf(nb, hi) < q) hi *= 2;
    long long lo = -1;  // cdf(-1) = 0 < q
    while (hi - lo > 1) {
        long long mid = lo + (hi - lo) / 2;
        if (negbin_cdf(nb, mid) >= q)
            hi = mid;
        else
            lo = mid;
    }
    return hi;
}

double sample(const DistSpec& spec, RngStream& rng) {
    validate(spec);
    return std::visit(
        [&rng](const auto& d) -> double {
            using T = std::decay_t<decltype(d)>;
            if constexpr (std::is_same_v<T, NegBinomial>) {
                return static_cast<double>(sample_negbin(d, rng));
            } else if constexpr (std::is_same_v<T, Gamma>) {
                auto [shape, scale] = gamma_params(d);
                return sample_standard_gamma(shape, rng) * scale;
            } else if constexpr (std::is_same_v<T, ShiftedBeta>) {
                auto [a, b] = beta_ab(d.mean, d.sd);
                double g1 = sample_standard_gamma(a, rng);
                double g2 = sample_standard_gamma(b, rng);
                return d.shift + g1 / (g1 + g2);
            } else if constexpr (std::is_same_v<T, LogNormal>) {
                return std::exp(d.mu_log + d.sigma_log * sample_unit_normal(rng));
            } else if constexpr (std::is_same_v<T, Weibull>) {
                return d.scale * std::pow(-std::log1p(-rng.next_open()), 1.0 / d.shape);
            } else {
                return d.mean + d.sd * sample_unit_normal(rng);
            }
        },
        spec);
}

double cdf(const DistSpec& spec, double x) {
    validate(spec);
    return std::visit(
        [x](const auto& d) -> double {
            using T = std::decay_t<decltype(d)>;
            if constexpr (std::is_same_v<T, NegBinomial>) {
                return negbin_cdf(d, static_cast<long long>(std::floor(x)));
            } else if constexpr (std::is_same_v<T, Gamma>) {
                auto [shape, scale] = gamma_params(d);
                return x <= 0.0 ? 0.0 : gammp(shape, x / scale);
            } else if constexpr (std::is_same_v<T, ShiftedBeta>) {
                auto [a, b] = beta_ab(d.mean, d.sd);
                double t = x - d.shift;
                if (t <= 0.0) return 0.0;
                if (t >= 1.0) return 1.0;
                return betai(a, b, t);
            } else if constexpr (std::is_same_v<T, LogNormal>) {
                return x <= 0.0 ? 0.0 : norm_cdf((std::log(x) - d.mu_log) / d.sigma_log);
            } else if constexpr (std::is_same_v<T, Weibull>) {
                return x <= 0.0 ? 0.0 : -std::expm1(-std::pow(x / d.scale, d.shape));
            } else {
                return norm_cdf((x - d.mean) / d.sd);
            }
        },
        spec);
}

double quantile(const DistSpec& spec, double q) {
    validate(spec);
    if (!(q > 0.0 && q < 1.0)) throw std::invalid_argument("quantile: q in (0,1) required");
    return std::visit(
        [q](const auto& d) -> double {
            using T = std::decay_t<decltype(d)>;
            if constexpr (std::is_same_v<T, NegBinomial>) {
                return static_cast<double>(negbin_quantile(d, q));
            } else if constexpr (std::is_same_v<T, Gamma>) {
                auto [shape, scale] = gamma_params(d);
                return inv_gammp(q, shape) * scale;
            } else if constexpr (std::is_same_v<T, ShiftedBeta>) {
                auto [a, b] = beta_ab(d.mean, d.sd);
                return d.shift + inv_betai(q, a, b);
            } else if constexpr (std::is_same_v<T, LogNormal>) {
                return std::exp(d.mu_log + d.sigma_log * norm_quantile(q));
            } else if constexpr (std::is_same_v<T, Weibull>) {
                return d.scale * std::pow(-std::log1p(-q), 1.0 / d.shape);
            } else {
                return d.mean + d.sd * norm_quantile(q);
            }
        },
        spec);
}

std::pair<double, double> sample_correlated(const DistSpec& fx, const DistSpec& fy, double rho,
                                            RngStream& rng) {
    if (!(std::fabs(rho) < 1.0)) throw std::invalid_argument("rho: |rho| < 1 required");
    validate(fx);
    validate(fy);
    double z1 = sample_unit_normal(rng);
    double z2 = sample_unit_normal(rng);
    double w2 = rho * z1 + std::sqrt(1.0 - rho * rho) * z2;
    // keep the probabilities strictly inside (0,1) for the inversions
    auto clamp01 = [](double u) { return std::clamp(u, 1e-300, 1.0 - 1e-16); };
    double x = quantile(fx, clamp01(norm_cdf(z1)));
    double y = quantile(fy, clamp01(norm_cdf(w2)));
    return {x, y};
}

}  // namespace dms
