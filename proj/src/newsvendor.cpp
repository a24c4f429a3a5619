#include "dms/newsvendor.hpp"

#include <cmath>
#include <stdexcept>

namespace dms {

long long newsvendor_base(const IntCdf& cdf, double ratio, long long lo, long long hi) {
    if (lo > hi) throw std::invalid_argument("newsvendor_base: empty search range");
    while (hi - lo > 0) {
        long long mid = lo + (hi - lo) / 2;
        if (cdf(mid) >= ratio)
            hi = mid;
        else
            lo = mid + 1;
    }
    return hi;
}

double newsvendor_cost(const IntCdf& cdf, double mean_x, long long base, double holding,
                       double penalty) {
    if (base < 0) throw std::invalid_argument("newsvendor_cost: base must be >= 0");
    // E[(S - X)^+] = sum_{k=0}^{S-1} F(k) for nonnegative integer X
    double under = 0.0;
    for (long long k = 0; k < base; ++k) under += cdf(k);
    double over = mean_x - static_cast<double>(base) + under;
    return holding * under + penalty * over;
}

SingleModeEval exact_single_mode(const ProductParams& product, ShipMode mode) {
    validate(product);
    int lead = mode == ShipMode::Slow ? product.lead_slow : product.lead_fast;
    double ship_cost = mode == ShipMode::Slow ? product.ship_cost_slow : product.ship_cost_fast;
    double emission = mode == ShipMode::Slow ? product.emission_slow : product.emission_fast;

    NegBinomial lead_law = negbin_sum(product.demand, lead + 1);
    IntCdf cdf = [&lead_law](long long k) { return negbin_cdf(lead_law, k); };
    double ratio = product.penalty_cost / (product.penalty_cost + product.holding_cost);

    SingleModeEval eval;
    eval.mode = mode;
    eval.base = negbin_quantile(lead_law, ratio);
    eval.cost_rate = newsvendor_cost(cdf, lead_law.mean, eval.base, product.holding_cost,
                                     product.penalty_cost) +
                     ship_cost * product.mean_demand();
    eval.emission_rate = emission * product.mean_demand();
    return eval;
}

Policy single_mode_policy(const SingleModeEval& eval) {
    if (eval.mode == ShipMode::Slow) return SlowOnly{eval.base};
    return FastOnly{eval.base};
}

ColumnStats single_mode_stats(const ProductParams& product, const SingleModeEval& eval) {
    ColumnStats s;
    s.cost_rate = eval.cost_rate;
    s.emission_rate = eval.emission_rate;
    s.eq_fast = eval.mode == ShipMode::Fast ? product.mean_demand() : 0.0;
    s.eq_slow = eval.mode == ShipMode::Slow ? product.mean_demand() : 0.0;
    s.eo = 0.0;
    s.ci_halfwidth_rel = 0.0;
    s.replications = 0;  // exact
    return s;
}

}  // namespace dms
