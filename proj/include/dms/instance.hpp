#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "dms/dist.hpp"
#include "dms/emissions.hpp"

#include <json.hpp>

namespace dms {

/// One product of the assortment: demand law, cost rates, lead times and
/// per-unit shipping emissions for the slow and fast mode.
struct ProductParams {
    int id = 0;
    NegBinomial demand;
    double holding_cost = 0.0;   // per unit per period
    double penalty_cost = 0.0;   // per backlogged unit per period
    double ship_cost_slow = 0.0; // per unit shipped
    double ship_cost_fast = 0.0;
    int lead_slow = 0;           // periods
    int lead_fast = 0;
    double emission_slow = 0.0;  // kg CO2 per unit shipped
    double emission_fast = 0.0;

    int lead_gap() const { return lead_slow - lead_fast; }
    double mean_demand() const { return demand.mean; }
    /// Emission rate when every unit ships on the cleaner mode.
    double min_emission_rate() const {
        return std::min(emission_slow, emission_fast) * demand.mean;
    }
};

void validate(const ProductParams& p);

/// Sweep knobs; absent fields keep their base-case values.
struct Overrides {
    std::optional<int> num_products;       // |J|, base 100
    std::optional<double> cv_mean_demand;  // cv of the gamma for the demand mean, base 0.5
    std::optional<double> demand_cv_shift; // shift of the demand-cv beta, base 0.3
    std::optional<double> rho;             // copula correlation of (mean demand, holding), base -0.5
    std::optional<double> penalty_factor;  // psi: penalty = psi * chi_p * holding, base 9
    std::optional<double> premium_sd;      // sd of the premium multiplier beta, base 0.1
    std::optional<int> lead_slow;          // base 3
    std::optional<double> emission_scale;  // scales |e_s - e_f| keeping the cleaner mode fixed, base 1

    bool operator==(const Overrides&) const = default;
};

struct Instance {
    AssortmentType type = AssortmentType::Apparel;
    std::uint64_t seed = 0;
    Overrides overrides;
    std::vector<ProductParams> products;
};

/// Draws a reproducible instance. Same (type, seed, overrides) gives a
/// bit-identical result; product j only consumes stream (seed, j), so
/// enlarging |J| keeps earlier products unchanged.
Instance generate_instance(AssortmentType type, std::uint64_t seed, const Overrides& ov = {});

nlohmann::json to_json(const Instance& inst);
Instance instance_from_json(const nlohmann::json& j);
void save_instance(const Instance& inst, const std::string& path);
Instance load_instance(const std::string& path);

/// Emission budget derived from the reducible emissions of an instance.
struct TargetSpec {
    double reduction = 0.0;        // requested fraction of reducible emissions to cut
    double e_max = 0.0;            // resolved budget, kg CO2 per period
    double e_unconstrained = 0.0;  // emissions of the cost-optimal unconstrained policies
    double e_min = 0.0;            // every product on its cleaner mode
};

struct ProductObjective {
    double cost = 0.0;
    double emission = 0.0;
};

/// Evaluates a product's cost-optimal unconstrained policy (provided by the
/// sub-problem solver; injected to keep this module solver-agnostic).
using UnconstrainedEval = std::function<ProductObjective(const ProductParams&)>;

/// E_max = E_unconstrained - r * (E_unconstrained - E_min). A degenerate
/// instance (no reducible emissions) resolves to E_max = E_min.
TargetSpec resolve_target(const Instance& inst, double reduction,
                          const UnconstrainedEval& unconstrained);

}  // namespace dms
