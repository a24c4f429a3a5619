#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "dms/instance.hpp"
#include "dms/policy.hpp"

namespace dms {

struct SimConfig {
    int replications = 10;
    long long horizon = 9500;   // measured periods per replication
    long long warmup = 5000;    // discarded periods per replication
    std::uint64_t seed = 0x5EEDED;
    double ci_limit_rel = 0.03; // flag estimates whose 95% CI is wider than this
};

/// Long-run per-period estimates for one (product, policy) pair.
struct ColumnStats {
    double cost_rate = 0.0;      // holding + backlog + shipping per period
    double emission_rate = 0.0;  // kg CO2 per period
    double eq_fast = 0.0;        // mean units shipped fast per period
    double eq_slow = 0.0;        // mean units shipped slow per period
    double eo = 0.0;             // mean overshoot
    double ci_halfwidth_rel = 0.0;
    int replications = 0;        // 0 marks an exact (zero variance) evaluation
    bool ci_flagged = false;
};

/// Simulation state of one product. Pipelines hold in-transit orders, front
/// entry due next period; the queues keep fixed length lead_fast / lead_slow.
struct SimState {
    long long inventory = 0;  // net inventory, backlog negative
    std::vector<long long> fast_pipe;
    std::vector<long long> slow_pipe;
    long long period = 0;
};

struct StepResult {
    long long q_fast = 0;
    long long q_slow = 0;
    long long overshoot = 0;
    long long inventory_before_demand = 0;  // after arrivals and orders
    double cost = 0.0;
};

SimState initial_state(const Policy& policy, const ProductParams& product);

/// Executes one period: arrivals, fast order, slow order, demand, costs.
StepResult step(SimState& state, const Policy& policy, const ProductParams& product,
                long long demand);

/// Cached integer demand paths, one stream per (product, replication). All
/// policy evaluations of a product replay the same paths (common random
/// numbers). Not safe for concurrent use by multiple threads.
class DemandPool {
  public:
    DemandPool(NegBinomial law, std::uint64_t seed, int product_id);
    /// Path of the given replication, extended deterministically on demand.
    std::span<const std::int32_t> path(int replication, std::size_t length);
    long long max_seen() const { return max_seen_; }

  private:
    NegBinomial law_;
    std::uint64_t seed_ = 0;
    int product_id_ = 0;
    std::vector<std::vector<std::int32_t>> paths_;
    std::vector<RngStream> streams_;
    long long max_seen_ = 0;
};

/// Monte-Carlo estimate over independent replications; the demand pool is
/// created on the fly when none is supplied. Shipment rates are reported
/// through a ratio estimator (scaled to the exact demand mean per
/// replication); inventory costs are realized averages.
ColumnStats evaluate(const Policy& policy, const ProductParams& product, const SimConfig& cfg,
                     DemandPool* pool = nullptr);

/// Per-period trace for golden tests and the trace subcommand.
std::vector<StepResult> trace_policy(const Policy& policy, const ProductParams& product,
                                     std::span<const std::int32_t> demand);

/// The base-stock-free recursion of the dual-index order streams: overshoot
/// and both shipment sizes depend on delta only. Requires lead gap >= 1.
class OvershootProcess {
  public:
    OvershootProcess(long long delta, int lead_gap);

    struct Step {
        long long overshoot = 0;
        long long q_fast = 0;
        long long q_slow = 0;
    };

    /// Advances one period given the previous period's demand.
    Step advance(long long demand);

    long long overshoot() const { return overshoot_; }

  private:
    long long delta_ = 0;
    long long overshoot_ = 0;
    std::vector<long long> pending_;  // slow orders not yet in the fast horizon
    std::size_t head_ = 0;
};

}  // namespace dms
