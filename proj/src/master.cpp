#include "dms/master.hpp"

#include <algorithm>
#include <cmath>
#include <queue>
#include <stdexcept>

#include "dms/util.hpp"

namespace dms {

namespace {

struct HullPoint {
    double emission;
    double cost;
    int column;
};

double cross(const HullPoint& a, const HullPoint& b, const HullPoint& c) {
    return (b.emission - a.emission) * (c.cost - a.cost) -
           (b.cost - a.cost) * (c.emission - a.emission);
}

/// Lower convex hull of the efficient (emission, cost) points, left to right.
std::vector<HullPoint> lower_hull(const ColumnPool& pool) {
    std::vector<HullPoint> pts;
    pts.reserve(pool.size());
    for (std::size_t k = 0; k < pool.size(); ++k)
        pts.push_back({pool[k].emission(), pool[k].cost(), static_cast<int>(k)});
    std::sort(pts.begin(), pts.end(), [](const HullPoint& a, const HullPoint& b) {
        if (a.emission != b.emission) return a.emission < b.emission;
        if (a.cost != b.cost) return a.cost < b.cost;
        return a.column < b.column;
    });
    // dominance filter: keep strictly cheaper points as emission grows
    std::vector<HullPoint> efficient;
    for (const auto& p : pts) {
        if (!efficient.empty() && p.cost >= efficient.back().cost) continue;
        efficient.push_back(p);
    }
    if (efficient.size() <= 2) return efficient;
    std::vector<HullPoint> hull;
    for (const auto& p : efficient) {
        while (hull.size() >= 2 && cross(hull[hull.size() - 2], hull.back(), p) <= 0.0)
            hull.pop_back();
        hull.push_back(p);
    }
    return hull;
}

struct Segment {
    double rate;  // cost increase per unit emission saved
    int product;
    std::size_t left_vertex;  // hull index reached when the segment is taken
    double emission_drop;
    double cost_rise;
};

std::optional<LpSolution> solve_lp_impl(const Pools& pools, double e_max,
                                        const std::vector<int>* fixed) {
    const std::size_t n = pools.size();
    std::vector<std::vector<HullPoint>> hulls(n);
    std::vector<std::size_t> position(n);  // hull index currently selected
    double total_emission = 0.0;
    double total_cost = 0.0;

    for (std::size_t j = 0; j < n; ++j) {
        if (pools[j].empty()) throw std::invalid_argument("master: empty column pool");
        if (fixed && (*fixed)[j] >= 0) {
            const PooledColumn& col = pools[j][static_cast<std::size_t>((*fixed)[j])];
            hulls[j] = {{col.emission(), col.cost(), (*fixed)[j]}};
        } else {
            hulls[j] = lower_hull(pools[j]);
        }
        position[j] = hulls[j].size() - 1;  // min-cost vertex
        total_emission += hulls[j].back().emission;
        total_cost += hulls[j].back().cost;
    }

    const double eps = 1e-9 * (1.0 + std::fabs(total_emission) + std::fabs(e_max));
    double need = total_emission - e_max;

    LpSolution sol;
    sol.upsilon.assign(n, 0.0);
    sol.weights.resize(n);
    for (std::size_t j = 0; j < n; ++j) sol.weights[j].assign(pools[j].size(), 0.0);

    double frac = 0.0;  // weight on the left vertex of the marginal segment
    int frac_product = -1;

    if (need > eps) {
        std::vector<Segment> segments;
        for (std::size_t j = 0; j < n; ++j) {
            const auto& hull = hulls[j];
            for (std::size_t i = hull.size(); i-- > 1;) {
                double de = hull[i].emission - hull[i - 1].emission;
                double dc = hull[i - 1].cost - hull[i].cost;
                segments.push_back({dc / de, static_cast<int>(j), i - 1, de, dc});
            }
        }
        std::sort(segments.begin(), segments.end(), [](const Segment& a, const Segment& b) {
            if (a.rate != b.rate) return a.rate < b.rate;
            if (a.product != b.product) return a.product < b.product;
            return a.left_vertex > b.left_vertex;  // right-to-left within a product
        });

        bool met = false;
        for (const auto& seg : segments) {
            auto j = static_cast<std::size_t>(seg.product);
            if (need >= seg.emission_drop - eps) {
                // take fully
                position[j] = seg.left_vertex;
                need -= seg.emission_drop;
                total_cost += seg.cost_rise;
                sol.eta = -seg.rate;
                if (need <= eps) {
                    met = true;
                    break;
                }
            } else {
                // split this product across the segment's endpoints
                frac = need / seg.emission_drop;
                frac_product = seg.product;
                position[j] = seg.left_vertex;  // stores the left endpoint
                total_cost += frac * seg.cost_rise;
                sol.eta = -seg.rate;
                need = 0.0;
                met = true;
                break;
            }
        }
        if (!met && need > eps) return std::nullopt;
    }

    for (std::size_t j = 0; j < n; ++j) {
        const auto& hull = hulls[j];
        std::size_t pos = position[j];
        if (static_cast<int>(j) == frac_product) {
            sol.weights[j][static_cast<std::size_t>(hull[pos].column)] = frac;
            sol.weights[j][static_cast<std::size_t>(hull[pos + 1].column)] = 1.0 - frac;
        } else {
            sol.weights[j][static_cast<std::size_t>(hull[pos].column)] = 1.0;
        }
    }
    sol.fractional_product = frac_product;
    sol.value = 0.0;
    sol.total_emission = 0.0;
    for (std::size_t j = 0; j < n; ++j)
        for (std::size_t k = 0; k < pools[j].size(); ++k)
            if (sol.weights[j][k] > 0.0) {
                sol.value += sol.weights[j][k] * pools[j][k].cost();
                sol.total_emission += sol.weights[j][k] * pools[j][k].emission();
            }
    for (std::size_t j = 0; j < n; ++j) {
        double best = std::numeric_limits<double>::infinity();
        for (const auto& col : pools[j])
            best = std::min(best, col.cost() - sol.eta * col.emission());
        sol.upsilon[j] = best;
    }
    return sol;
}

bool pool_contains(const ColumnPool& pool, const Policy& policy) {
    PolicyKey key = policy_key(policy);
    for (const auto& col : pool)
        if (policy_key(col.policy) == key) return true;
    return false;
}

}  // namespace

std::optional<LpSolution> try_solve_rmp_lp(const Pools& pools, double e_max) {
    return solve_lp_impl(pools, e_max, nullptr);
}

LpSolution solve_rmp_lp(const Pools& pools, double e_max) {
    auto sol = try_solve_rmp_lp(pools, e_max);
    if (!sol) throw infeasible_error("master: emission budget below the pool minimum");
    return *sol;
}

IntegerSolution solve_integer(const Pools& pools, double e_max, double lower_bound) {
    const std::size_t n = pools.size();

    struct Node {
        double bound;
        std::vector<int> fixed;
    };
    auto cmp = [](const Node& a, const Node& b) { return a.bound > b.bound; };
    std::priority_queue<Node, std::vector<Node>, decltype(cmp)> queue(cmp);

    std::vector<int> free_all(n, -1);
    auto root = solve_lp_impl(pools, e_max, &free_all);
    if (!root) throw infeasible_error("master: no feasible assignment in the pools");
    queue.push({root->value, free_all});

    IntegerSolution best;
    bool have_incumbent = false;
    int nodes = 0;
    const int node_cap = 200000;

    while (!queue.empty()) {
        Node node = queue.top();
        queue.pop();
        if (++nodes > node_cap) {
            best.optimal = false;
            break;
        }
        if (have_incumbent && node.bound >= best.cost - 1e-12) break;
        auto lp = solve_lp_impl(pools, e_max, &node.fixed);
        if (!lp) continue;
        if (lp->fractional_product < 0) {
            // integral: best-first means this is optimal
            IntegerSolution sol;
            sol.chosen.assign(n, 0);
            sol.cost = 0.0;
            sol.emission = 0.0;
            for (std::size_t j = 0; j < n; ++j) {
                for (std::size_t k = 0; k < pools[j].size(); ++k)
                    if (lp->weights[j][k] > 0.5) sol.chosen[j] = static_cast<int>(k);
                sol.cost += pools[j][static_cast<std::size_t>(sol.chosen[j])].cost();
                sol.emission += pools[j][static_cast<std::size_t>(sol.chosen[j])].emission();
            }
            best = sol;
            have_incumbent = true;
            break;
        }
        auto j = static_cast<std::size_t>(lp->fractional_product);
        for (std::size_t k = 0; k < pools[j].size(); ++k) {
            Node child{0.0, node.fixed};
            child.fixed[j] = static_cast<int>(k);
            auto child_lp = solve_lp_impl(pools, e_max, &child.fixed);
            if (!child_lp) continue;
            child.bound = child_lp->value;
            if (have_incumbent && child.bound >= best.cost - 1e-12) continue;
            queue.push(std::move(child));
        }
    }

    if (!have_incumbent) {
        // fall back to the cleanest assignment
        best.chosen.assign(n, 0);
        best.cost = 0.0;
        best.emission = 0.0;
        for (std::size_t j = 0; j < n; ++j) {
            std::size_t cleanest = 0;
            for (std::size_t k = 1; k < pools[j].size(); ++k)
                if (pools[j][k].emission() < pools[j][cleanest].emission()) cleanest = k;
            best.chosen[j] = static_cast<int>(cleanest);
            best.cost += pools[j][cleanest].cost();
            best.emission += pools[j][cleanest].emission();
        }
        if (best.emission > e_max * (1.0 + 1e-12))
            throw infeasible_error("master: no feasible assignment in the pools");
        best.optimal = false;
    }
    best.gap_pct = lower_bound > 0.0 ? 100.0 * (best.cost - lower_bound) / lower_bound : 0.0;
    return best;
}

Pools init_pool(CandidateCache& cache, const TargetSpec& target) {
    const Instance& inst = cache.instance();
    Pools pools(inst.products.size());
    double min_emission = 0.0;
    for (std::size_t j = 0; j < inst.products.size(); ++j) {
        int id = static_cast<int>(j);
        const Column& slow = cache.official_column(id, SlowOnly{
            exact_single_mode(inst.products[j], ShipMode::Slow).base});
        const Column& fast = cache.official_column(id, FastOnly{
            exact_single_mode(inst.products[j], ShipMode::Fast).base});
        pools[j].push_back({slow.policy, slow.stats});
        pools[j].push_back({fast.policy, fast.stats});
        const Column& unc = cache.unconstrained_column(id);
        if (!pool_contains(pools[j], unc.policy)) pools[j].push_back({unc.policy, unc.stats});
        min_emission += std::min(slow.stats.emission_rate, fast.stats.emission_rate);
    }
    if (min_emission > target.e_max * (1.0 + 1e-12) + 1e-12)
        throw infeasible_error("target: emission budget below the minimum achievable emissions");
    return pools;
}

CgResult run_column_generation(CandidateCache& cache, const TargetSpec& target,
                               const MasterConfig& cfg) {
    const Instance& inst = cache.instance();
    const auto n = static_cast<int>(inst.products.size());

    cache.build_all();  // idempotent; fans the search tables out across threads
    CgResult result;
    result.pools = init_pool(cache, target);

    std::vector<double> epsilon(static_cast<std::size_t>(n));
    for (int j = 0; j < n; ++j)
        epsilon[static_cast<std::size_t>(j)] = std::max(
            cfg.epsilon_abs, cfg.epsilon_rel * cache.unconstrained_column(j).stats.cost_rate);

    for (int iter = 1; iter <= cfg.max_iterations; ++iter) {
        result.lp = solve_rmp_lp(result.pools, target.e_max);
        result.iterations = iter;

        std::vector<std::vector<std::pair<Column, double>>> priced(static_cast<std::size_t>(n));
        parallel_for(n, [&](int j) {
            DualPrices duals{result.lp.eta, result.lp.upsilon[static_cast<std::size_t>(j)]};
            priced[static_cast<std::size_t>(j)] = solve_sp_top(
                cache, j, duals, static_cast<std::size_t>(std::max(cfg.columns_per_round, 1)));
        });

        int added = 0;
        for (int j = 0; j < n; ++j) {
            auto uj = static_cast<std::size_t>(j);
            for (const auto& [col, rc] : priced[uj]) {
                if (rc < -epsilon[uj] && !pool_contains(result.pools[uj], col.policy)) {
                    result.pools[uj].push_back({col.policy, col.stats});
                    ++added;
                }
            }
        }

        std::size_t pool_size = 0;
        for (const auto& pool : result.pools) pool_size += pool.size();
        result.log.push_back({iter, result.lp.value, pool_size, result.lp.eta, added});

        if (added == 0) {
            result.converged = true;
            break;
        }
        if (iter == cfg.max_iterations) {
            // refresh the LP over the final pools before the integer finish
            result.lp = solve_rmp_lp(result.pools, target.e_max);
        }
    }

    // Densify the pools with the candidates priced closest to the final
    // supporting plane: the LP cannot improve (their reduced costs are
    // nonnegative up to the guard), but the integer finish gets fine-grained
    // columns to round over.
    if (cfg.finish_columns > 0) {
        std::vector<std::vector<std::pair<Column, double>>> finish(static_cast<std::size_t>(n));
        parallel_for(n, [&](int j) {
            DualPrices duals{result.lp.eta, result.lp.upsilon[static_cast<std::size_t>(j)]};
            finish[static_cast<std::size_t>(j)] =
                solve_sp_top(cache, j, duals, static_cast<std::size_t>(cfg.finish_columns));
        });
        for (int j = 0; j < n; ++j) {
            auto uj = static_cast<std::size_t>(j);
            for (const auto& [col, rc] : finish[uj])
                if (!pool_contains(result.pools[uj], col.policy))
                    result.pools[uj].push_back({col.policy, col.stats});
        }
        result.lp = solve_rmp_lp(result.pools, target.e_max);
    }

    result.integer = solve_integer(result.pools, target.e_max, result.lp.value);
    return result;
}

}  // namespace dms
