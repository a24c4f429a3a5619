#pragma once

#include <optional>
#include <vector>

#include "dms/instance.hpp"
#include "dms/subproblem.hpp"

namespace dms {

struct MasterConfig {
    int max_iterations = 50;
    double epsilon_abs = 1e-6;   // improving-column guard, absolute floor
    double epsilon_rel = 1e-3;   // ... relative to the product's unconstrained cost
    int columns_per_round = 10;  // improving columns added per product per pricing round
    int finish_columns = 40;     // near-marginal columns pooled before the integer finish
};

struct PooledColumn {
    Policy policy;
    ColumnStats stats;
    double cost() const { return stats.cost_rate; }
    double emission() const { return stats.emission_rate; }
};

using ColumnPool = std::vector<PooledColumn>;
using Pools = std::vector<ColumnPool>;  // one pool per product

/// LP optimum of the linear multiple-choice knapsack over the pools: one
/// column per product in convex combination, emissions below the budget.
struct LpSolution {
    double value = 0.0;                         // lower bound
    double eta = 0.0;                           // emission dual, <= 0
    std::vector<double> upsilon;                // convexity duals
    std::vector<std::vector<double>> weights;   // aligned with the pools
    int fractional_product = -1;                // -1 when integral
    double total_emission = 0.0;
};

/// Exact solve by per-product convex hulls and a greedy walk over hull
/// segments in increasing cost-per-emission-saved order. At most one product
/// ends up fractional. Returns nullopt when even the min-emission assignment
/// exceeds the budget.
std::optional<LpSolution> try_solve_rmp_lp(const Pools& pools, double e_max);

/// As above but throws infeasible_error instead of returning nullopt.
LpSolution solve_rmp_lp(const Pools& pools, double e_max);

struct IntegerSolution {
    std::vector<int> chosen;  // column index per product
    double cost = 0.0;
    double emission = 0.0;
    double gap_pct = 0.0;     // vs the supplied lower bound
    bool optimal = true;      // false when the node cap was hit
};

/// Exact integer optimum over the pools via best-first branch and bound,
/// bounding each node with the hull LP.
IntegerSolution solve_integer(const Pools& pools, double e_max, double lower_bound);

/// Seed pools: the cleaner single-mode column, the other single-mode column
/// and the unconstrained optimum of every product. Feasible whenever the
/// budget admits the all-cleanest assignment.
Pools init_pool(CandidateCache& cache, const TargetSpec& target);

struct CgIterationRow {
    int iteration = 0;
    double lower_bound = 0.0;
    std::size_t pool_size = 0;
    double eta = 0.0;
    int columns_added = 0;
};

struct CgResult {
    Pools pools;
    LpSolution lp;
    IntegerSolution integer;
    int iterations = 0;
    bool converged = false;
    std::vector<CgIterationRow> log;
    double gap_pct() const {
        return lp.value > 0.0 ? 100.0 * (integer.cost - lp.value) / lp.value : 0.0;
    }
};

/// Iterates RMP solves and per-product pricing until no product returns an
/// improving column, then finishes with the integer solve.
CgResult run_column_generation(CandidateCache& cache, const TargetSpec& target,
                               const MasterConfig& cfg = {});

}  // namespace dms
