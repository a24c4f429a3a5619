#include "dms/subproblem.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "dms/util.hpp"

namespace dms {

PolicyKey policy_key(const Policy& p) {
    if (const auto* d = std::get_if<DualIndex>(&p)) return {0, d->base_fast, d->delta};
    if (const auto* f = std::get_if<FastOnly>(&p)) return {1, f->base, 0};
    return {2, std::get<SlowOnly>(p).base, 0};
}

long long optimal_base_fast(const ProductParams& product, std::span<const long long> lead_demand,
                            std::span<const long long> overshoot) {
    if (lead_demand.empty() || lead_demand.size() != overshoot.size())
        throw std::invalid_argument("optimal_base_fast: paired nonempty samples required");
    std::vector<long long> diff(lead_demand.size());
    for (std::size_t i = 0; i < diff.size(); ++i) diff[i] = lead_demand[i] - overshoot[i];
    std::sort(diff.begin(), diff.end());
    double ratio = product.penalty_cost / (product.penalty_cost + product.holding_cost);
    double n = static_cast<double>(diff.size());
    auto idx = static_cast<std::size_t>(std::ceil(ratio * n - 1e-9)) - 1;
    idx = std::min(idx, diff.size() - 1);
    return diff[idx];
}

namespace {

Candidate single_mode_candidate(const ProductParams& prod, const SingleModeEval& eval) {
    Candidate c;
    c.policy = single_mode_policy(eval);
    c.cost = eval.cost_rate;
    c.emission = eval.emission_rate;
    c.eq_fast = eval.mode == ShipMode::Fast ? prod.mean_demand() : 0.0;
    c.eq_slow = eval.mode == ShipMode::Slow ? prod.mean_demand() : 0.0;
    c.eo = 0.0;
    double ship = eval.mode == ShipMode::Fast ? prod.ship_cost_fast : prod.ship_cost_slow;
    c.inventory_cost = eval.cost_rate - ship * prod.mean_demand();
    return c;
}

}  // namespace

CandidateCache::CandidateCache(const Instance& inst, const SimConfig& sim,
                               const SearchLimits& limits)
    : inst_(inst), sim_(sim), limits_(limits), entries_(inst.products.size()) {
    if (inst_.products.empty()) throw std::invalid_argument("instance: products must be nonempty");
}

void CandidateCache::build_all() {
    parallel_for(static_cast<int>(entries_.size()), [this](int j) { build(j); });
}

const ProductCandidates& CandidateCache::candidates(int product_id) {
    auto idx = static_cast<std::size_t>(product_id);
    if (idx >= entries_.size()) throw std::invalid_argument("product_id: out of range");
    if (!entries_[idx].built) build(product_id);
    return entries_[idx].cands;
}

void CandidateCache::build(int product_id) {
    Entry& entry = entries_[static_cast<std::size_t>(product_id)];
    if (entry.built) return;
    const ProductParams& prod = inst_.products[static_cast<std::size_t>(product_id)];

    entry.pool = std::make_unique<DemandPool>(prod.demand, sim_.seed, prod.id);
    const long long warmup = sim_.warmup;
    const long long horizon = sim_.horizon;
    const int reps = sim_.replications;
    const int lead_fast = prod.lead_fast;
    const std::size_t path_len = static_cast<std::size_t>(warmup + horizon + lead_fast);
    for (int rep = 0; rep < reps; ++rep) entry.pool->path(rep, path_len);
    const long long max_demand = entry.pool->max_seen();

    auto& cands = entry.cands.all;
    cands.push_back(single_mode_candidate(prod, exact_single_mode(prod, ShipMode::Slow)));
    cands.push_back(single_mode_candidate(prod, exact_single_mode(prod, ShipMode::Fast)));

    const int gap = prod.lead_gap();
    if (gap >= 1) {
        const double mu = prod.mean_demand();
        const double ratio = prod.penalty_cost / (prod.penalty_cost + prod.holding_cost);
        const long long cap =
            negbin_quantile(negbin_sum(prod.demand, gap), limits_.cap_quantile);
        const double count = static_cast<double>(reps) * static_cast<double>(horizon);

        std::vector<long long> over_path(path_len);
        std::vector<std::uint32_t> hist;

        for (long long delta = 1; delta <= cap; ++delta) {
            const std::size_t span =
                static_cast<std::size_t>(delta + (lead_fast + 1) * max_demand + 1);
            hist.assign(span, 0);
            double sum_x = 0.0, sum_o = 0.0;

            for (int rep = 0; rep < reps; ++rep) {
                auto d = entry.pool->path(rep, path_len);
                OvershootProcess op(delta, gap);
                over_path[0] = 0;
                for (std::size_t t = 1; t < path_len; ++t)
                    over_path[t] = op.advance(d[t - 1]).overshoot;
                for (long long t = warmup; t < warmup + horizon; ++t) {
                    auto ut = static_cast<std::size_t>(t);
                    long long x = -over_path[ut];
                    for (int k = 0; k <= lead_fast; ++k) x += d[ut + static_cast<std::size_t>(k)];
                    ++hist[static_cast<std::size_t>(x + delta)];
                    sum_x += static_cast<double>(x);
                    sum_o += static_cast<double>(over_path[ut]);
                }
            }

            // empirical newsvendor over x = lead demand - overshoot
            const double need = ratio * count - 1e-9;
            double cum = 0.0;
            std::size_t base_bin = span - 1;
            for (std::size_t b = 0; b < span; ++b) {
                cum += hist[b];
                if (cum >= need) {
                    base_bin = b;
                    break;
                }
            }
            const long long base = static_cast<long long>(base_bin) - delta;
            double under = 0.0;  // sum (S - x)^+ over samples
            for (std::size_t b = 0; b < base_bin; ++b)
                under += static_cast<double>(base_bin - b) * hist[b];
            under /= count;
            const double mean_x = sum_x / count;
            const double over = mean_x - static_cast<double>(base) + under;
            const double inv_cost = prod.holding_cost * under + prod.penalty_cost * over;

            const double eo = sum_o / count;
            const double eq_slow =
                std::clamp((static_cast<double>(delta) - eo) / gap, 0.0, mu);
            const double eq_fast = mu - eq_slow;

            Candidate c;
            c.policy = DualIndex{base, delta};
            c.inventory_cost = inv_cost;
            c.cost = inv_cost + prod.ship_cost_fast * eq_fast + prod.ship_cost_slow * eq_slow;
            c.emission = prod.emission_fast * eq_fast + prod.emission_slow * eq_slow;
            c.eq_fast = eq_fast;
            c.eq_slow = eq_slow;
            c.eo = eo;
            cands.push_back(c);

            if (eq_slow >= limits_.slow_saturation * mu) break;
        }
    }

    std::size_t best = 0;
    for (std::size_t i = 1; i < cands.size(); ++i)
        if (cands[i].cost < cands[best].cost) best = i;
    entry.cands.unconstrained = best;
    entry.built = true;
}

const Column& CandidateCache::official_column(int product_id, const Policy& policy) {
    auto idx = static_cast<std::size_t>(product_id);
    if (idx >= entries_.size()) throw std::invalid_argument("product_id: out of range");
    // single-mode evaluations are exact and do not need the search table
    if (std::holds_alternative<DualIndex>(policy) && !entries_[idx].built) build(product_id);
    Entry& entry = entries_[idx];
    PolicyKey key = policy_key(policy);
    auto it = entry.official.find(key);
    if (it != entry.official.end()) return it->second;

    const ProductParams& prod = inst_.products[idx];
    Column col;
    col.product_id = product_id;
    col.policy = policy;
    if (std::holds_alternative<DualIndex>(policy)) {
        col.stats = evaluate(policy, prod, sim_, entry.pool.get());
    } else if (std::holds_alternative<FastOnly>(policy)) {
        col.stats = single_mode_stats(prod, exact_single_mode(prod, ShipMode::Fast));
    } else {
        col.stats = single_mode_stats(prod, exact_single_mode(prod, ShipMode::Slow));
    }
    return entry.official.emplace(key, std::move(col)).first->second;
}

const Column& CandidateCache::unconstrained_column(int product_id) {
    const ProductCandidates& c = candidates(product_id);
    return official_column(product_id, c.all[c.unconstrained].policy);
}

std::pair<Column, double> solve_sp(CandidateCache& cache, int product_id,
                                   const DualPrices& duals) {
    const ProductCandidates& cands = cache.candidates(product_id);
    std::size_t best = 0;
    double best_value = 0.0;
    for (std::size_t i = 0; i < cands.all.size(); ++i) {
        double value = cands.all[i].cost - duals.eta * cands.all[i].emission;
        if (i == 0 || value < best_value) {
            best = i;
            best_value = value;
        }
    }
    Column col = cache.official_column(product_id, cands.all[best].policy);
    double rc = col.stats.cost_rate - duals.eta * col.stats.emission_rate - duals.upsilon;
    return {col, rc};
}

std::vector<std::pair<Column, double>> solve_sp_top(CandidateCache& cache, int product_id,
                                                    const DualPrices& duals, std::size_t k) {
    const ProductCandidates& cands = cache.candidates(product_id);
    std::vector<std::size_t> order(cands.all.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return cands.all[a].cost - duals.eta * cands.all[a].emission <
               cands.all[b].cost - duals.eta * cands.all[b].emission;
    });
    std::vector<std::pair<Column, double>> out;
    for (std::size_t i = 0; i < order.size() && out.size() < k; ++i) {
        Column col = cache.official_column(product_id, cands.all[order[i]].policy);
        double rc = col.stats.cost_rate - duals.eta * col.stats.emission_rate - duals.upsilon;
        out.emplace_back(std::move(col), rc);
    }
    return out;
}

Column solve_carbon_priced(CandidateCache& cache, int product_id, double carbon_price) {
    if (carbon_price < 0.0) throw std::invalid_argument("carbon_price: must be >= 0");
    return solve_sp(cache, product_id, DualPrices{-carbon_price, 0.0}).first;
}

}  // namespace dms
