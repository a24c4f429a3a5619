#pragma once

#include <functional>

#include "dms/instance.hpp"
#include "dms/simulate.hpp"

namespace dms {

enum class ShipMode { Slow, Fast };

/// Exact single-mode base-stock evaluation: lead-time-plus-one demand is the
/// negative binomial fold of the per-period law, the base-stock is its
/// critical fractile, and the cost rate is computed from the exact CDF.
struct SingleModeEval {
    ShipMode mode = ShipMode::Slow;
    long long base = 0;
    double cost_rate = 0.0;
    double emission_rate = 0.0;
};

SingleModeEval exact_single_mode(const ProductParams& product, ShipMode mode);

Policy single_mode_policy(const SingleModeEval& eval);

/// ColumnStats carrying the exact values (zero CI, replications = 0).
ColumnStats single_mode_stats(const ProductParams& product, const SingleModeEval& eval);

// Generic discrete newsvendor pieces over an arbitrary integer CDF;
// `cdf(k) = P(X <= k)` must be nondecreasing with limit 1.
using IntCdf = std::function<double(long long)>;

/// Smallest S in [lo, hi] with cdf(S) >= ratio (hi returned if none).
long long newsvendor_base(const IntCdf& cdf, double ratio, long long lo, long long hi);

/// h E[(S - X)^+] + p E[(X - S)^+] for integer S >= 0 and mean E[X].
double newsvendor_cost(const IntCdf& cdf, double mean_x, long long base, double holding,
                       double penalty);

}  // namespace dms
