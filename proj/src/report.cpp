#include "dms/report.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include "dms/util.hpp"

namespace dms {

std::string approach_name(Approach a) {
    switch (a) {
        case Approach::Dms: return "DMS";
        case Approach::Sms: return "SMS";
        case Approach::Bms: return "BMS";
    }
    return "?";
}

Approach approach_from_string(const std::string& s) {
    std::string up;
    for (char c : s) up.push_back(static_cast<char>(std::toupper(c)));
    if (up == "DMS") return Approach::Dms;
    if (up == "SMS") return Approach::Sms;
    if (up == "BMS") return Approach::Bms;
    throw std::invalid_argument("approach: expected dms, sms or bms");
}

TargetSpec resolve_target_with_cache(CandidateCache& cache, double reduction) {
    cache.build_all();
    return resolve_target(cache.instance(), reduction, [&cache](const ProductParams& p) {
        const Column& c = cache.unconstrained_column(p.id);
        return ProductObjective{c.stats.cost_rate, c.stats.emission_rate};
    });
}

namespace {

double fast_share_pct(const std::vector<Column>& chosen) {
    if (chosen.empty()) return 0.0;
    double sum = 0.0;
    for (const auto& col : chosen) {
        double flow = col.stats.eq_fast + col.stats.eq_slow;
        sum += flow > 0.0 ? col.stats.eq_fast / flow : 0.0;
    }
    return 100.0 * sum / static_cast<double>(chosen.size());
}

}  // namespace

SolveOutcome solve_approach(CandidateCache& cache, Approach approach, double reduction,
                            const MasterConfig& cfg) {
    SolveOutcome out;
    out.approach = approach;
    out.reduction = reduction;
    out.target = resolve_target_with_cache(cache, reduction);

    switch (approach) {
        case Approach::Dms: {
            CgResult res = run_column_generation(cache, out.target, cfg);
            out.converged = res.converged;
            out.lower_bound = res.lp.value;
            out.gap_pct = res.gap_pct();
            out.eta = res.lp.eta;
            for (std::size_t j = 0; j < res.pools.size(); ++j) {
                const PooledColumn& col =
                    res.pools[j][static_cast<std::size_t>(res.integer.chosen[j])];
                Column c;
                c.product_id = static_cast<int>(j);
                c.policy = col.policy;
                c.stats = col.stats;
                out.chosen.push_back(std::move(c));
            }
            out.cost = res.integer.cost;
            out.emission = res.integer.emission;
            break;
        }
        case Approach::Sms: {
            BenchmarkResult res = solve_sms(cache, out.target);
            out.chosen = res.chosen;
            out.cost = res.cost;
            out.emission = res.emission;
            break;
        }
        case Approach::Bms: {
            BenchmarkResult res = solve_bms(cache, reduction);
            out.chosen = res.chosen;
            out.cost = res.cost;
            out.emission = res.emission;
            break;
        }
    }
    out.fast_share_pct = fast_share_pct(out.chosen);
    return out;
}

SweepResult run_sweep(CandidateCache& cache, const std::vector<double>& reductions,
                      const std::vector<Approach>& approaches, const MasterConfig& cfg) {
    std::vector<double> sorted = reductions;
    std::sort(sorted.begin(), sorted.end());
    sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());

    SweepResult result;
    for (double r : sorted) {
        std::optional<double> dms_cost;
        std::vector<SolveOutcome> at_r;
        for (Approach a : {Approach::Dms, Approach::Sms, Approach::Bms}) {
            if (std::find(approaches.begin(), approaches.end(), a) == approaches.end()) continue;
            SolveOutcome out = solve_approach(cache, a, r, cfg);
            if (a == Approach::Dms) dms_cost = out.cost;
            at_r.push_back(std::move(out));
        }
        for (auto& out : at_r) {
            SweepRow row;
            row.reduction = r;
            row.approach = out.approach;
            row.cost = out.cost;
            row.emission = out.emission;
            row.e_max = out.target.e_max;
            row.slack_pct =
                out.target.e_max > 0.0
                    ? 100.0 * (out.target.e_max - out.emission) / out.target.e_max
                    : 0.0;
            row.gap_pct = out.gap_pct;
            row.fast_share_pct = out.fast_share_pct;
            if (dms_cost && out.approach == Approach::Sms)
                row.pct_sms = 100.0 * (out.cost - *dms_cost) / *dms_cost;
            if (dms_cost && out.approach == Approach::Bms)
                row.pct_bms = 100.0 * (out.cost - *dms_cost) / *dms_cost;
            result.rows.push_back(row);
            result.outcomes.push_back(std::move(out));
        }
    }

    // normalize each approach by its own cost at the full-reduction target
    for (auto& row : result.rows) {
        for (const auto& ref : result.rows) {
            if (ref.approach == row.approach && ref.reduction == 1.0 && ref.cost > 0.0) {
                row.cost_normalized = row.cost / ref.cost;
                break;
            }
        }
    }
    return result;
}

namespace {

std::string opt_str(const std::optional<double>& v) {
    return v ? format_number(*v) : std::string();
}

}  // namespace

std::string sweep_csv(const SweepResult& result) {
    std::ostringstream out;
    out << "r,approach,cost,emission,e_max,slack_pct,gap_pct,pct_sms,pct_bms,pct_fast,"
           "cost_norm_vs_r1\n";
    for (const auto& row : result.rows) {
        out << format_number(row.reduction) << ',' << approach_name(row.approach) << ','
            << format_number(row.cost) << ',' << format_number(row.emission) << ','
            << format_number(row.e_max) << ',' << format_number(row.slack_pct) << ','
            << opt_str(row.gap_pct) << ',' << opt_str(row.pct_sms) << ','
            << opt_str(row.pct_bms) << ',' << format_number(row.fast_share_pct) << ','
            << opt_str(row.cost_normalized) << '\n';
    }
    return out.str();
}

std::string iteration_log_csv(const std::vector<CgIterationRow>& log) {
    std::ostringstream out;
    out << "iteration,lower_bound,pool_size,eta,columns_added\n";
    for (const auto& row : log) {
        out << row.iteration << ',' << format_number(row.lower_bound) << ',' << row.pool_size
            << ',' << format_number(row.eta) << ',' << row.columns_added << '\n';
    }
    return out.str();
}

LorenzResult lorenz_curves(CandidateCache& cache, const SolveOutcome& dms) {
    const Instance& inst = cache.instance();
    const std::size_t n = inst.products.size();
    if (dms.chosen.size() != n)
        throw std::invalid_argument("lorenz: solution does not match the instance");

    std::vector<double> reduction(n);
    std::vector<double> ratio(n);
    double total = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
        const ProductParams& p = inst.products[j];
        double e_unc = cache.unconstrained_column(static_cast<int>(j)).stats.emission_rate;
        reduction[j] = std::max(e_unc - dms.chosen[j].stats.emission_rate, 0.0);
        total += reduction[j];
        double premium = p.ship_cost_fast - p.ship_cost_slow;
        double gap = std::fabs(p.emission_fast - p.emission_slow);
        ratio[j] = premium > 0.0 ? gap / premium : std::numeric_limits<double>::infinity();
    }

    LorenzResult res;
    res.zero_reduction = total <= 0.0;

    auto cumulative = [&](const std::vector<std::size_t>& order) {
        std::vector<double> shares(n);
        double run = 0.0;
        for (std::size_t k = 0; k < n; ++k) {
            run += reduction[order[k]];
            shares[k] = res.zero_reduction ? 0.0 : run / total;
        }
        return shares;
    };

    std::vector<std::size_t> by_realized(n), by_ratio(n);
    std::iota(by_realized.begin(), by_realized.end(), std::size_t{0});
    by_ratio = by_realized;
    std::stable_sort(by_realized.begin(), by_realized.end(),
                     [&](std::size_t a, std::size_t b) { return reduction[a] > reduction[b]; });
    std::stable_sort(by_ratio.begin(), by_ratio.end(),
                     [&](std::size_t a, std::size_t b) { return ratio[a] > ratio[b]; });

    res.share_realized = cumulative(by_realized);
    res.share_ratio = cumulative(by_ratio);
    res.product_fraction.resize(n);
    for (std::size_t k = 0; k < n; ++k)
        res.product_fraction[k] = static_cast<double>(k + 1) / static_cast<double>(n);

    auto top20 = [&](const std::vector<double>& shares) {
        std::size_t k = std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil(0.2 * n)));
        return shares[k - 1];
    };
    res.top20_realized = top20(res.share_realized);
    res.top20_ratio = top20(res.share_ratio);
    return res;
}

std::string lorenz_csv(const LorenzResult& lorenz) {
    std::ostringstream out;
    out << "rank,product_fraction,cum_share_realized_order,cum_share_ratio_order\n";
    for (std::size_t k = 0; k < lorenz.product_fraction.size(); ++k) {
        out << (k + 1) << ',' << format_number(lorenz.product_fraction[k]) << ','
            << format_number(lorenz.share_realized[k]) << ','
            << format_number(lorenz.share_ratio[k]) << '\n';
    }
    return out.str();
}

PriceOutcome solve_carbon_price_all(CandidateCache& cache, double carbon_price) {
    if (carbon_price < 0.0) throw std::invalid_argument("carbon_price: must be >= 0");
    cache.build_all();
    const auto n = static_cast<int>(cache.instance().products.size());
    PriceOutcome out;
    out.carbon_price = carbon_price;
    out.chosen.resize(static_cast<std::size_t>(n));
    parallel_for(n, [&](int j) {
        out.chosen[static_cast<std::size_t>(j)] = solve_carbon_priced(cache, j, carbon_price);
    });
    for (const auto& col : out.chosen) {
        out.cost += col.stats.cost_rate;
        out.emission += col.stats.emission_rate;
    }
    out.cost_with_charge = out.cost + carbon_price * out.emission;
    return out;
}

namespace {

nlohmann::json sim_to_json(const SimConfig& sim) {
    return {{"replications", sim.replications},
            {"horizon", sim.horizon},
            {"warmup", sim.warmup},
            {"seed", sim.seed}};
}

nlohmann::json columns_to_json(const std::vector<Column>& chosen) {
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& col : chosen) {
        arr.push_back({{"product", col.product_id},
                       {"policy", policy_to_json(col.policy)},
                       {"cost", col.stats.cost_rate},
                       {"emission", col.stats.emission_rate},
                       {"eq_fast", col.stats.eq_fast},
                       {"eq_slow", col.stats.eq_slow}});
    }
    return arr;
}

}  // namespace

nlohmann::json outcome_to_json(const SolveOutcome& outcome, const SimConfig& sim) {
    nlohmann::json j;
    j["schema_version"] = 1;
    j["approach"] = approach_name(outcome.approach);
    j["r"] = outcome.reduction;
    j["e_max"] = outcome.target.e_max;
    j["e_unconstrained"] = outcome.target.e_unconstrained;
    j["e_min"] = outcome.target.e_min;
    j["cost"] = outcome.cost;
    j["emission"] = outcome.emission;
    j["fast_share_pct"] = outcome.fast_share_pct;
    j["converged"] = outcome.converged;
    if (outcome.lower_bound) j["lower_bound"] = *outcome.lower_bound;
    if (outcome.gap_pct) j["gap_pct"] = *outcome.gap_pct;
    if (outcome.approach == Approach::Dms) j["eta"] = outcome.eta;
    j["sim"] = sim_to_json(sim);
    j["products"] = columns_to_json(outcome.chosen);
    return j;
}

nlohmann::json price_to_json(const PriceOutcome& outcome, const SimConfig& sim) {
    nlohmann::json j;
    j["schema_version"] = 1;
    j["carbon_price"] = outcome.carbon_price;
    j["cost"] = outcome.cost;
    j["emission"] = outcome.emission;
    j["cost_with_charge"] = outcome.cost_with_charge;
    j["sim"] = sim_to_json(sim);
    j["products"] = columns_to_json(outcome.chosen);
    return j;
}

std::pair<SolveOutcome, SimConfig> outcome_from_json(const nlohmann::json& j) {
    if (j.value("schema_version", 0) != 1)
        throw std::invalid_argument("solution: unsupported schema_version");
    SolveOutcome out;
    out.approach = approach_from_string(j.at("approach").get<std::string>());
    out.reduction = j.at("r").get<double>();
    out.target.reduction = out.reduction;
    out.target.e_max = j.at("e_max").get<double>();
    out.target.e_unconstrained = j.value("e_unconstrained", 0.0);
    out.target.e_min = j.value("e_min", 0.0);
    out.cost = j.at("cost").get<double>();
    out.emission = j.at("emission").get<double>();
    out.fast_share_pct = j.value("fast_share_pct", 0.0);
    out.converged = j.value("converged", true);
    if (j.contains("lower_bound")) out.lower_bound = j["lower_bound"].get<double>();
    if (j.contains("gap_pct")) out.gap_pct = j["gap_pct"].get<double>();
    out.eta = j.value("eta", 0.0);
    for (const auto& pj : j.at("products")) {
        Column col;
        col.product_id = pj.at("product").get<int>();
        col.policy = policy_from_json(pj.at("policy"));
        col.stats.cost_rate = pj.at("cost").get<double>();
        col.stats.emission_rate = pj.at("emission").get<double>();
        col.stats.eq_fast = pj.value("eq_fast", 0.0);
        col.stats.eq_slow = pj.value("eq_slow", 0.0);
        out.chosen.push_back(std::move(col));
    }
    const auto& sj = j.at("sim");
    SimConfig sim;
    sim.replications = sj.at("replications").get<int>();
    sim.horizon = sj.at("horizon").get<long long>();
    sim.warmup = sj.at("warmup").get<long long>();
    sim.seed = sj.at("seed").get<std::uint64_t>();
    return {std::move(out), sim};
}

}  // namespace dms
