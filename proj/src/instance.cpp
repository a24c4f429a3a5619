#include "dms/instance.hpp"

#include <cmath>
#include <fstream>
#include <stdexcept>

namespace dms {

namespace {

[[noreturn]] void bad(const std::string& what) { throw std::invalid_argument(what); }

struct BaseCase {
    int num_products = 100;
    double mean_demand_mean = 100.0;
    double cv_mean_demand = 0.5;
    double demand_cv_mean = 0.9;
    double demand_cv_sd = 0.25;
    double demand_cv_shift = 0.3;
    double holding_mean = 1.0;
    double holding_cv = 0.5;
    double rho = -0.5;
    double penalty_factor = 9.0;
    double penalty_chi_mean = 0.98;
    double penalty_chi_sd = 0.1;
    double penalty_chi_shift = 0.02;
    double premium_mean = 0.25;
    double premium_sd = 0.1;
    int lead_fast = 0;
    int lead_slow = 3;
    double ship_cost_slow = 0.0;
    double emission_scale = 1.0;
};

BaseCase apply_overrides(const Overrides& ov) {
    BaseCase b;
    if (ov.num_products) b.num_products = *ov.num_products;
    if (ov.cv_mean_demand) b.cv_mean_demand = *ov.cv_mean_demand;
    if (ov.demand_cv_shift) b.demand_cv_shift = *ov.demand_cv_shift;
    if (ov.rho) b.rho = *ov.rho;
    if (ov.penalty_factor) b.penalty_factor = *ov.penalty_factor;
    if (ov.premium_sd) b.premium_sd = *ov.premium_sd;
    if (ov.lead_slow) b.lead_slow = *ov.lead_slow;
    if (ov.emission_scale) b.emission_scale = *ov.emission_scale;

    if (b.num_products < 1) bad("num_products: must be >= 1");
    if (!(b.cv_mean_demand > 0.0 && b.cv_mean_demand <= 2.0)) bad("cv_mean_demand: must be in (0, 2]");
    if (!(b.demand_cv_shift >= 0.0 && b.demand_cv_shift <= 1.0)) bad("demand_cv_shift: must be in [0, 1]");
    if (!(std::fabs(b.rho) < 1.0)) bad("rho: |rho| < 1 required");
    if (!(b.penalty_factor > 0.0)) bad("penalty_factor: must be > 0");
    if (!(b.premium_sd > 0.0 && b.premium_sd * b.premium_sd < b.premium_mean * (1.0 - b.premium_mean)))
        bad("premium_sd: sd^2 must be in (0, mean(1-mean))");
    if (b.lead_slow < 1) bad("lead_slow: must be >= 1");
    if (!(b.emission_scale >= 0.0)) bad("emission_scale: must be >= 0");
    return b;
}

}  // namespace

void validate(const ProductParams& p) {
    validate(DistSpec{p.demand});
    if (!(p.holding_cost > 0.0)) bad("holding_cost: must be > 0");
    if (!(p.penalty_cost > 0.0)) bad("penalty_cost: must be > 0");
    if (p.ship_cost_slow < 0.0) bad("ship_cost_slow: must be >= 0");
    if (p.ship_cost_fast < 0.0) bad("ship_cost_fast: must be >= 0");
    if (p.lead_fast < 0) bad("lead_fast: must be >= 0");
    if (p.lead_slow < p.lead_fast) bad("lead_slow: must be >= lead_fast");
    if (p.emission_slow < 0.0) bad("emission_slow: must be >= 0");
    if (p.emission_fast < 0.0) bad("emission_fast: must be >= 0");
}

Instance generate_instance(AssortmentType type, std::uint64_t seed, const Overrides& ov) {
    BaseCase base = apply_overrides(ov);
    Instance inst;
    inst.type = type;
    inst.seed = seed;
    inst.overrides = ov;
    inst.products.reserve(base.num_products);

    const Gamma mean_demand_law{base.mean_demand_mean, base.cv_mean_demand};
    const Gamma holding_law{base.holding_mean, base.holding_cv};
    const ShiftedBeta demand_cv_law{base.demand_cv_mean, base.demand_cv_sd, base.demand_cv_shift};
    const ShiftedBeta penalty_chi_law{base.penalty_chi_mean, base.penalty_chi_sd,
                                      base.penalty_chi_shift};
    const ShiftedBeta premium_chi_law{base.premium_mean, base.premium_sd, 0.0};

    for (int j = 0; j < base.num_products; ++j) {
        RngStream rng(seed, static_cast<std::uint64_t>(j));
        ProductParams p;
        // demand can violate the over-dispersion requirement for extreme
        // draws; redraw the product until it is valid
        for (int attempt = 0;; ++attempt) {
            if (attempt >= 1000) bad("generate_instance: could not draw a valid product");
            auto [mu_d, h] = sample_correlated(mean_demand_law, holding_law, base.rho, rng);
            double cv_d = sample(DistSpec{demand_cv_law}, rng);
            auto [e_slow, e_fast] = sample_emission_pair(type, rng);
            double chi_p = sample(DistSpec{penalty_chi_law}, rng);
            double chi_c = sample(DistSpec{premium_chi_law}, rng);

            if (!(cv_d * cv_d * mu_d > 1.0)) continue;

            p.id = j;
            p.demand = NegBinomial{mu_d, cv_d};
            p.holding_cost = h;
            p.penalty_cost = base.penalty_factor * chi_p * h;
            p.lead_fast = base.lead_fast;
            p.lead_slow = base.lead_slow;
            p.ship_cost_slow = base.ship_cost_slow;
            p.ship_cost_fast = chi_c * p.penalty_cost * p.lead_gap();
            // rescale the dirtier mode's gap, cleaner mode stays fixed
            double gap = base.emission_scale * std::fabs(e_slow - e_fast);
            if (e_slow >= e_fast) {
                p.emission_fast = e_fast;
                p.emission_slow = e_fast + gap;
            } else {
                p.emission_slow = e_slow;
                p.emission_fast = e_slow + gap;
            }
            break;
        }
        validate(p);
        inst.products.push_back(p);
    }
    return inst;
}

nlohmann::json to_json(const Instance& inst) {
    nlohmann::json j;
    j["schema_version"] = 1;
    j["type"] = static_cast<int>(inst.type);
    j["seed"] = inst.seed;
    nlohmann::json ov = nlohmann::json::object();
    const Overrides& o = inst.overrides;
    if (o.num_products) ov["num_products"] = *o.num_products;
    if (o.cv_mean_demand) ov["cv_mean_demand"] = *o.cv_mean_demand;
    if (o.demand_cv_shift) ov["demand_cv_shift"] = *o.demand_cv_shift;
    if (o.rho) ov["rho"] = *o.rho;
    if (o.penalty_factor) ov["penalty_factor"] = *o.penalty_factor;
    if (o.premium_sd) ov["premium_sd"] = *o.premium_sd;
    if (o.lead_slow) ov["lead_slow"] = *o.lead_slow;
    if (o.emission_scale) ov["emission_scale"] = *o.emission_scale;
    j["overrides"] = ov;
    j["products"] = nlohmann::json::array();
    for (const auto& p : inst.products) {
        j["products"].push_back({{"id", p.id},
                                 {"demand_mean", p.demand.mean},
                                 {"demand_cv", p.demand.cv},
                                 {"holding_cost", p.holding_cost},
                                 {"penalty_cost", p.penalty_cost},
                                 {"ship_cost_slow", p.ship_cost_slow},
                                 {"ship_cost_fast", p.ship_cost_fast},
                                 {"lead_slow", p.lead_slow},
                                 {"lead_fast", p.lead_fast},
                                 {"emission_slow", p.emission_slow},
                                 {"emission_fast", p.emission_fast}});
    }
    return j;
}

Instance instance_from_json(const nlohmann::json& j) {
    if (j.value("schema_version", 0) != 1) bad("instance: unsupported schema_version");
    Instance inst;
    inst.type = assortment_from_int(j.at("type").get<int>());
    inst.seed = j.at("seed").get<std::uint64_t>();
    const auto& ov = j.at("overrides");
    if (ov.contains("num_products")) inst.overrides.num_products = ov["num_products"].get<int>();
    if (ov.contains("cv_mean_demand")) inst.overrides.cv_mean_demand = ov["cv_mean_demand"].get<double>();
    if (ov.contains("demand_cv_shift")) inst.overrides.demand_cv_shift = ov["demand_cv_shift"].get<double>();
    if (ov.contains("rho")) inst.overrides.rho = ov["rho"].get<double>();
    if (ov.contains("penalty_factor")) inst.overrides.penalty_factor = ov["penalty_factor"].get<double>();
    if (ov.contains("premium_sd")) inst.overrides.premium_sd = ov["premium_sd"].get<double>();
    if (ov.contains("lead_slow")) inst.overrides.lead_slow = ov["lead_slow"].get<int>();
    if (ov.contains("emission_scale")) inst.overrides.emission_scale = ov["emission_scale"].get<double>();
    for (const auto& pj : j.at("products")) {
        ProductParams p;
        p.id = pj.at("id").get<int>();
        p.demand = NegBinomial{pj.at("demand_mean").get<double>(), pj.at("demand_cv").get<double>()};
        p.holding_cost = pj.at("holding_cost").get<double>();
        p.penalty_cost = pj.at("penalty_cost").get<double>();
        p.ship_cost_slow = pj.at("ship_cost_slow").get<double>();
        p.ship_cost_fast = pj.at("ship_cost_fast").get<double>();
        p.lead_slow = pj.at("lead_slow").get<int>();
        p.lead_fast = pj.at("lead_fast").get<int>();
        p.emission_slow = pj.at("emission_slow").get<double>();
        p.emission_fast = pj.at("emission_fast").get<double>();
        validate(p);
        inst.products.push_back(p);
    }
    if (inst.products.empty()) bad("instance: products must be nonempty");
    return inst;
}

void save_instance(const Instance& inst, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open for writing: " + path);
    out << to_json(inst).dump(2) << "\n";
}

Instance load_instance(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open for reading: " + path);
    nlohmann::json j;
    in >> j;
    return instance_from_json(j);
}

TargetSpec resolve_target(const Instance& inst, double reduction,
                          const UnconstrainedEval& unconstrained) {
    if (!(reduction >= 0.0 && reduction <= 1.0)) bad("reduction: must be in [0, 1]");
    if (inst.products.empty()) bad("instance: products must be nonempty");
    TargetSpec t;
    t.reduction = reduction;
    for (const auto& p : inst.products) {
        t.e_unconstrained += unconstrained(p).emission;
        t.e_min += p.min_emission_rate();
    }
    if (t.e_unconstrained < t.e_min) {
        // only reachable through estimator noise; no reducible emissions
        t.e_unconstrained = t.e_min;
        t.e_max = t.e_min;
        return t;
    }
    t.e_max = t.e_unconstrained - reduction * (t.e_unconstrained - t.e_min);
    return t;
}

}  // namespace dms
