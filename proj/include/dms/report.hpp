#pragma once

#include <optional>
#include <string>
#include <vector>

#include "dms/benchmarks.hpp"
#include "dms/master.hpp"

namespace dms {

enum class Approach { Dms, Sms, Bms };
std::string approach_name(Approach a);
Approach approach_from_string(const std::string& s);

/// One solved (target, approach) cell.
struct SolveOutcome {
    Approach approach = Approach::Dms;
    double reduction = 0.0;
    TargetSpec target;
    std::vector<Column> chosen;    // one column per product
    double cost = 0.0;
    double emission = 0.0;
    std::optional<double> lower_bound;  // DMS only
    std::optional<double> gap_pct;      // DMS only
    double eta = 0.0;                   // DMS only: emission dual at the optimum
    bool converged = true;
    /// mean fraction of flow shipped fast across products
    double fast_share_pct = 0.0;
};

TargetSpec resolve_target_with_cache(CandidateCache& cache, double reduction);

SolveOutcome solve_approach(CandidateCache& cache, Approach approach, double reduction,
                            const MasterConfig& cfg = {});

struct SweepRow {
    double reduction = 0.0;
    Approach approach = Approach::Dms;
    double cost = 0.0;
    double emission = 0.0;
    double e_max = 0.0;
    double slack_pct = 0.0;
    std::optional<double> gap_pct;
    std::optional<double> pct_sms;  // cost surplus of SMS over DMS at this target
    std::optional<double> pct_bms;
    double fast_share_pct = 0.0;
    std::optional<double> cost_normalized;  // cost / same-approach cost at r = 1
};

struct SweepResult {
    std::vector<SweepRow> rows;              // ordered by (reduction, approach)
    std::vector<SolveOutcome> outcomes;      // same order
};

/// Runs every requested approach at every target over one shared frozen
/// column cache, then derives the comparison metrics.
SweepResult run_sweep(CandidateCache& cache, const std::vector<double>& reductions,
                      const std::vector<Approach>& approaches, const MasterConfig& cfg = {});

/// Fixed-schema CSV (header row stable across runs).
std::string sweep_csv(const SweepResult& result);

std::string iteration_log_csv(const std::vector<CgIterationRow>& log);

/// Cumulative emission-reduction shares under two orderings: products sorted
/// by realized reduction, and by the emission-gap-per-cost-premium ratio.
struct LorenzResult {
    std::vector<double> product_fraction;   // k / |J|
    std::vector<double> share_realized;     // cumulative, realized-reduction order
    std::vector<double> share_ratio;        // cumulative, gap/premium-ratio order
    double top20_realized = 0.0;
    double top20_ratio = 0.0;
    bool zero_reduction = false;
};

LorenzResult lorenz_curves(CandidateCache& cache, const SolveOutcome& dms);
std::string lorenz_csv(const LorenzResult& lorenz);

struct PriceOutcome {
    double carbon_price = 0.0;
    std::vector<Column> chosen;
    double cost = 0.0;              // operating cost, emission charge excluded
    double emission = 0.0;
    double cost_with_charge = 0.0;  // cost + price * emission
};

PriceOutcome solve_carbon_price_all(CandidateCache& cache, double carbon_price);

// Solution files carry the sim config so results can be reproduced bit for bit.
nlohmann::json outcome_to_json(const SolveOutcome& outcome, const SimConfig& sim);
nlohmann::json price_to_json(const PriceOutcome& outcome, const SimConfig& sim);

/// Reads a solution file back, including the sim config it was produced with.
std::pair<SolveOutcome, SimConfig> outcome_from_json(const nlohmann::json& j);

}  // namespace dms
