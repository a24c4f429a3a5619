#pragma once

#include <map>
#include <memory>
#include <span>
#include <tuple>
#include <vector>

#include "dms/instance.hpp"
#include "dms/newsvendor.hpp"
#include "dms/simulate.hpp"

namespace dms {

/// Dual prices of the restricted master: eta prices emissions (nonpositive
/// for the <= budget in a minimization), upsilon is the product's convexity
/// dual.
struct DualPrices {
    double eta = 0.0;
    double upsilon = 0.0;
};

struct Column {
    int product_id = 0;
    Policy policy;
    ColumnStats stats;
};

/// Grid limits for the one-dimensional delta search.
struct SearchLimits {
    double slow_saturation = 0.999;  // stop once eq_slow >= this fraction of mean demand
    double cap_quantile = 0.9999;    // hard cap: quantile of lead-gap-period demand
};

/// One (policy, estimate) row of a product's search table. Shipping splits
/// come from the stationary identities eq_slow = (delta - E[O]) / gap and
/// eq_fast = E[D] - eq_slow; single-mode rows are exact.
struct Candidate {
    Policy policy;
    double cost = 0.0;
    double emission = 0.0;
    double eq_fast = 0.0;
    double eq_slow = 0.0;
    double eo = 0.0;
    double inventory_cost = 0.0;
};

struct ProductCandidates {
    std::vector<Candidate> all;      // [0] slow-only, [1] fast-only, then delta = 1, 2, ...
    std::size_t unconstrained = 0;   // argmin cost
};

using PolicyKey = std::tuple<int, long long, long long>;
PolicyKey policy_key(const Policy& p);

/// Smallest base with empirical P(lead_demand - overshoot <= base) >= the
/// critical ratio; samples are paired index by index.
long long optimal_base_fast(const ProductParams& product, std::span<const long long> lead_demand,
                            std::span<const long long> overshoot);

/// Per-instance store of search tables, demand pools and frozen column
/// evaluations. Tables are dual-independent, so column generation prices
/// against them without re-simulating. Per-product state is touched only by
/// the thread working that product; build_all() fans out across products.
class CandidateCache {
  public:
    CandidateCache(const Instance& inst, const SimConfig& sim, const SearchLimits& limits = {});

    void build_all();
    const ProductCandidates& candidates(int product_id);

    /// Frozen stats for a policy: exact for single-mode, one fixed-seed
    /// simulation for dual-index. Repeated calls return the same column.
    const Column& official_column(int product_id, const Policy& policy);
    const Column& unconstrained_column(int product_id);

    const Instance& instance() const { return inst_; }
    const SimConfig& sim_config() const { return sim_; }

  private:
    struct Entry {
        bool built = false;
        ProductCandidates cands;
        std::unique_ptr<DemandPool> pool;
        std::map<PolicyKey, Column> official;
    };

    void build(int product_id);

    Instance inst_;
    SimConfig sim_;
    SearchLimits limits_;
    std::vector<Entry> entries_;
};

/// Prices one product against the duals: argmin of cost - eta * emission
/// over the search table; returns the frozen column and its reduced cost
/// computed from the frozen stats.
std::pair<Column, double> solve_sp(CandidateCache& cache, int product_id,
                                   const DualPrices& duals);

/// The k best-priced candidates (by the search table), frozen. Densifies the
/// master pools so the integer finish has fine-grained columns to round over.
std::vector<std::pair<Column, double>> solve_sp_top(CandidateCache& cache, int product_id,
                                                    const DualPrices& duals, std::size_t k);

/// Product-level optimum under a linear emission price (eta = -price).
Column solve_carbon_priced(CandidateCache& cache, int product_id, double carbon_price);

}  // namespace dms
