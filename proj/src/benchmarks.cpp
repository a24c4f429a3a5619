#include "dms/benchmarks.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "dms/util.hpp"

namespace dms {

BenchmarkResult solve_sms(CandidateCache& cache, const TargetSpec& target) {
    const Instance& inst = cache.instance();
    Pools pools(inst.products.size());
    std::vector<std::array<Column, 2>> columns(inst.products.size());
    for (std::size_t j = 0; j < inst.products.size(); ++j) {
        int id = static_cast<int>(j);
        const ProductParams& prod = inst.products[j];
        columns[j][0] = cache.official_column(
            id, SlowOnly{exact_single_mode(prod, ShipMode::Slow).base});
        columns[j][1] = cache.official_column(
            id, FastOnly{exact_single_mode(prod, ShipMode::Fast).base});
        pools[j].push_back({columns[j][0].policy, columns[j][0].stats});
        pools[j].push_back({columns[j][1].policy, columns[j][1].stats});
    }

    LpSolution lp = solve_rmp_lp(pools, target.e_max);
    IntegerSolution ip = solve_integer(pools, target.e_max, lp.value);

    BenchmarkResult res;
    for (std::size_t j = 0; j < pools.size(); ++j) {
        res.chosen.push_back(columns[j][static_cast<std::size_t>(ip.chosen[j])]);
        res.cost += res.chosen.back().stats.cost_rate;
        res.emission += res.chosen.back().stats.emission_rate;
    }
    return res;
}

BenchmarkResult solve_bms(CandidateCache& cache, double reduction) {
    if (!(reduction >= 0.0 && reduction <= 1.0))
        throw std::invalid_argument("reduction: must be in [0, 1]");
    const Instance& inst = cache.instance();
    const auto n = static_cast<int>(inst.products.size());

    cache.build_all();
    std::vector<Column> chosen(static_cast<std::size_t>(n));
    parallel_for(n, [&](int j) {
        const ProductParams& prod = inst.products[static_cast<std::size_t>(j)];
        const ProductCandidates& cands = cache.candidates(j);
        const Column& unc = cache.unconstrained_column(j);
        double e_unc = unc.stats.emission_rate;
        double e_min = prod.min_emission_rate();
        double budget = std::max(e_unc - reduction * (e_unc - e_min), e_min);
        const double slack = 1e-9 * (1.0 + budget);

        // cheapest candidate whose frozen emissions respect the product
        // budget. The pre-screen runs on search-table emissions; the
        // budget-defining unconstrained candidate is screened on its frozen
        // value instead so the r = 0 boundary is exact.
        std::vector<std::size_t> order(cands.all.size());
        std::iota(order.begin(), order.end(), std::size_t{0});
        std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
            return cands.all[a].cost < cands.all[b].cost;
        });
        for (std::size_t idx : order) {
            bool screened = cands.all[idx].emission <= budget + slack;
            if (idx == cands.unconstrained) screened = e_unc <= budget + slack;
            if (!screened) continue;
            Column col = cache.official_column(j, cands.all[idx].policy);
            if (col.stats.emission_rate <= budget + slack) {
                chosen[static_cast<std::size_t>(j)] = col;
                return;
            }
        }
        // the cleanest exact single-mode column is always feasible
        ShipMode cleanest =
            prod.emission_slow <= prod.emission_fast ? ShipMode::Slow : ShipMode::Fast;
        chosen[static_cast<std::size_t>(j)] = cache.official_column(
            j, single_mode_policy(exact_single_mode(prod, cleanest)));
    });

    BenchmarkResult res;
    res.chosen = std::move(chosen);
    for (const auto& col : res.chosen) {
        res.cost += col.stats.cost_rate;
        res.emission += col.stats.emission_rate;
    }
    return res;
}

}  // namespace dms
