#pragma once

// Special functions backing the distribution layer: regularized incomplete
// gamma/beta with inverses, and the standard normal CDF/quantile pair.
// All routines are plain double precision and deterministic.

namespace dms::special {

/// Regularized lower incomplete gamma P(a, x).
double gammp(double a, double x);

/// Regularized upper incomplete gamma Q(a, x) = 1 - P(a, x).
double gammq(double a, double x);

/// Inverse of gammp in x: returns x with P(a, x) = p.
double inv_gammp(double p, double a);

/// Regularized incomplete beta I_x(a, b).
double betai(double a, double b, double x);

/// Inverse of betai in x: returns x with I_x(a, b) = p.
double inv_betai(double p, double a, double b);

/// Standard normal CDF.
double norm_cdf(double x);

/// Standard normal quantile (Wichura's AS 241, double precision).
double norm_quantile(double p);

}  // namespace dms::special
