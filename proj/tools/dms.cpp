// Command-line frontend: instance generation, single solves, target sweeps,
// emission-reduction curves, carbon pricing and policy traces.
//
// Exit codes: 0 success, 2 validation error, 3 infeasible, 4 non-convergence.
// DMS_THREADS limits worker threads (default: hardware concurrency).

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "dms/report.hpp"
#include "dms/util.hpp"

namespace {

constexpr int kOk = 0;
constexpr int kValidation = 2;
constexpr int kInfeasible = 3;
constexpr int kNoConvergence = 4;

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open for writing: " + path);
    out << content;
}

struct SimFlags {
    int reps = 10;
    long long horizon = 9500;
    long long warmup = 5000;
    std::uint64_t seed = 0x5EEDED;

    void attach(CLI::App* cmd) {
        cmd->add_option("--reps", reps, "simulation replications");
        cmd->add_option("--horizon", horizon, "measured periods per replication");
        cmd->add_option("--warmup", warmup, "discarded periods per replication");
        cmd->add_option("--sim-seed", seed, "simulation seed (independent of the instance seed)");
    }

    dms::SimConfig config() const {
        dms::SimConfig cfg;
        cfg.replications = reps;
        cfg.horizon = horizon;
        cfg.warmup = warmup;
        cfg.seed = seed;
        return cfg;
    }
};

std::vector<double> parse_targets(const std::string& spec) {
    std::vector<double> out;
    std::stringstream ss(spec);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
        if (tok.empty()) continue;
        out.push_back(std::stod(tok));
    }
    if (out.empty()) throw std::invalid_argument("targets: no values given");
    for (double r : out)
        if (!(r >= 0.0 && r <= 1.0)) throw std::invalid_argument("targets: must lie in [0, 1]");
    return out;
}

std::vector<dms::Approach> parse_approaches(const std::string& spec) {
    std::vector<dms::Approach> out;
    std::stringstream ss(spec);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
        if (tok.empty()) continue;
        out.push_back(dms::approach_from_string(tok));
    }
    if (out.empty()) throw std::invalid_argument("approaches: no values given");
    return out;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"dual-mode shipping policies under an assortment-wide emission cap"};
    app.require_subcommand(1);

    // --- gen -------------------------------------------------------------
    auto* gen = app.add_subcommand("gen", "generate a reproducible instance");
    int gen_type = 1;
    std::uint64_t gen_seed = 1;
    std::string gen_out = "instance.json";
    dms::Overrides ov;
    std::optional<int> ov_products, ov_lead_slow;
    std::optional<double> ov_cv_mu, ov_cv_shift, ov_rho, ov_psi, ov_sigma_c, ov_scale;
    gen->add_option("--type", gen_type, "assortment type (1 apparel, 2 industrial, 3 mixed)")
        ->required();
    gen->add_option("--seed", gen_seed, "instance seed")->required();
    gen->add_option("--products", ov_products, "number of products");
    gen->add_option("--cv-mu", ov_cv_mu, "cv of the mean-demand distribution");
    gen->add_option("--cv-shift", ov_cv_shift, "shift of the demand-cv distribution");
    gen->add_option("--rho", ov_rho, "copula correlation of (mean demand, holding cost)");
    gen->add_option("--penalty-factor", ov_psi, "penalty-to-holding cost factor");
    gen->add_option("--premium-sd", ov_sigma_c, "sd of the fast-premium multiplier");
    gen->add_option("--lead-slow", ov_lead_slow, "slow-mode lead time (periods)");
    gen->add_option("--emission-scale", ov_scale, "scale of the emission gap between modes");
    gen->add_option("--out", gen_out, "output instance file");

    // --- solve -----------------------------------------------------------
    auto* solve = app.add_subcommand("solve", "solve one (target, approach) cell");
    std::string solve_instance, solve_out = "solution.json", solve_log;
    double solve_target = 0.5;
    std::string solve_approach = "dms";
    SimFlags solve_sim;
    solve->add_option("--instance", solve_instance, "instance file")->required();
    solve->add_option("--target", solve_target, "reducible-emission reduction fraction in [0,1]");
    solve->add_option("--approach", solve_approach, "dms | sms | bms");
    solve->add_option("--out", solve_out, "output solution file");
    solve->add_option("--log", solve_log, "column-generation iteration log (CSV)");
    solve_sim.attach(solve);

    // --- sweep -----------------------------------------------------------
    auto* sweep = app.add_subcommand("sweep", "solve a grid of targets and approaches");
    std::string sweep_instance, sweep_out = "report.csv";
    std::string sweep_targets = "0,0.1,0.2,0.3,0.4,0.5,0.6,0.7,0.8,0.9,1";
    std::string sweep_approaches = "dms,sms,bms";
    SimFlags sweep_sim;
    sweep->add_option("--instance", sweep_instance, "instance file")->required();
    sweep->add_option("--targets", sweep_targets, "comma-separated reduction fractions");
    sweep->add_option("--approaches", sweep_approaches, "comma-separated subset of dms,sms,bms");
    sweep->add_option("--out", sweep_out, "output report CSV");
    sweep_sim.attach(sweep);

    // --- lorenz ----------------------------------------------------------
    auto* lorenz = app.add_subcommand("lorenz", "cumulative emission-reduction shares");
    std::string lor_instance, lor_solution, lor_out = "lorenz.csv";
    lorenz->add_option("--instance", lor_instance, "instance file")->required();
    lorenz->add_option("--solution", lor_solution, "DMS solution file")->required();
    lorenz->add_option("--out", lor_out, "output CSV");

    // --- price -----------------------------------------------------------
    auto* price = app.add_subcommand("price", "per-product optima under a carbon price");
    std::string price_instance, price_out = "price.json";
    double carbon_price = 0.0;
    SimFlags price_sim;
    price->add_option("--instance", price_instance, "instance file")->required();
    price->add_option("--carbon-price", carbon_price, "cost per kg CO2")->required();
    price->add_option("--out", price_out, "output JSON");
    price_sim.attach(price);

    // --- trace -----------------------------------------------------------
    auto* trace = app.add_subcommand("trace", "per-period trace of one policy");
    std::string trace_instance, trace_out = "trace.csv";
    int trace_product = 0, trace_rep = 0;
    long long trace_periods = 50;
    std::optional<long long> trace_base_fast, trace_delta, trace_base;
    std::string trace_mode;
    SimFlags trace_sim;
    trace->add_option("--instance", trace_instance, "instance file")->required();
    trace->add_option("--product", trace_product, "product id");
    trace->add_option("--periods", trace_periods, "periods to trace");
    trace->add_option("--rep", trace_rep, "demand replication index");
    trace->add_option("--base-fast", trace_base_fast, "dual-index fast base-stock");
    trace->add_option("--delta", trace_delta, "dual-index base-stock difference");
    trace->add_option("--mode", trace_mode, "single mode: fast | slow");
    trace->add_option("--base", trace_base, "single-mode base-stock");
    trace->add_option("--out", trace_out, "output CSV");
    trace_sim.attach(trace);

    try {
        app.parse(argc, argv);

        if (gen->parsed()) {
            ov.num_products = ov_products;
            ov.cv_mean_demand = ov_cv_mu;
            ov.demand_cv_shift = ov_cv_shift;
            ov.rho = ov_rho;
            ov.penalty_factor = ov_psi;
            ov.premium_sd = ov_sigma_c;
            ov.lead_slow = ov_lead_slow;
            ov.emission_scale = ov_scale;
            dms::Instance inst =
                dms::generate_instance(dms::assortment_from_int(gen_type), gen_seed, ov);
            dms::save_instance(inst, gen_out);
            std::cout << "wrote " << gen_out << " (" << inst.products.size() << " products)\n";
            return kOk;
        }

        if (solve->parsed()) {
            dms::Instance inst = dms::load_instance(solve_instance);
            dms::CandidateCache cache(inst, solve_sim.config());
            dms::Approach approach = dms::approach_from_string(solve_approach);
            dms::SolveOutcome out = dms::solve_approach(cache, approach, solve_target);
            write_file(solve_out, dms::outcome_to_json(out, solve_sim.config()).dump(2) + "\n");
            if (!solve_log.empty() && approach == dms::Approach::Dms) {
                // re-run is cheap against the warm cache; keep the log faithful
                dms::CgResult cg = dms::run_column_generation(cache, out.target);
                write_file(solve_log, dms::iteration_log_csv(cg.log));
            }
            std::cout << dms::approach_name(approach) << " r=" << out.reduction
                      << " cost=" << dms::format_number(out.cost)
                      << " emission=" << dms::format_number(out.emission)
                      << " e_max=" << dms::format_number(out.target.e_max) << "\n";
            if (!out.converged) {
                std::cerr << "column generation hit the iteration cap\n";
                return kNoConvergence;
            }
            return kOk;
        }

        if (sweep->parsed()) {
            dms::Instance inst = dms::load_instance(sweep_instance);
            dms::CandidateCache cache(inst, sweep_sim.config());
            dms::SweepResult res = dms::run_sweep(cache, parse_targets(sweep_targets),
                                                  parse_approaches(sweep_approaches));
            write_file(sweep_out, dms::sweep_csv(res));
            std::cout << "wrote " << sweep_out << " (" << res.rows.size() << " rows)\n";
            for (const auto& out : res.outcomes)
                if (!out.converged) {
                    std::cerr << "column generation hit the iteration cap\n";
                    return kNoConvergence;
                }
            return kOk;
        }

        if (lorenz->parsed()) {
            dms::Instance inst = dms::load_instance(lor_instance);
            std::ifstream in(lor_solution);
            if (!in) throw std::runtime_error("cannot open for reading: " + lor_solution);
            nlohmann::json j;
            in >> j;
            auto [outcome, sim] = dms::outcome_from_json(j);
            dms::CandidateCache cache(inst, sim);
            dms::LorenzResult res = dms::lorenz_curves(cache, outcome);
            write_file(lor_out, dms::lorenz_csv(res));
            if (res.zero_reduction) std::cout << "no emission reduction in this solution\n";
            std::cout << "top-20% share: realized=" << dms::format_number(res.top20_realized)
                      << " ratio-ordered=" << dms::format_number(res.top20_ratio) << "\n";
            return kOk;
        }

        if (price->parsed()) {
            dms::Instance inst = dms::load_instance(price_instance);
            dms::CandidateCache cache(inst, price_sim.config());
            dms::PriceOutcome out = dms::solve_carbon_price_all(cache, carbon_price);
            write_file(price_out, dms::price_to_json(out, price_sim.config()).dump(2) + "\n");
            std::cout << "carbon_price=" << dms::format_number(out.carbon_price)
                      << " cost=" << dms::format_number(out.cost)
                      << " emission=" << dms::format_number(out.emission) << "\n";
            return kOk;
        }

        if (trace->parsed()) {
            dms::Instance inst = dms::load_instance(trace_instance);
            if (trace_product < 0 || trace_product >= static_cast<int>(inst.products.size()))
                throw std::invalid_argument("product: out of range");
            const dms::ProductParams& prod =
                inst.products[static_cast<std::size_t>(trace_product)];
            dms::Policy policy;
            if (trace_base_fast && trace_delta) {
                policy = dms::DualIndex{*trace_base_fast, *trace_delta};
            } else if (trace_mode == "fast") {
                policy = dms::FastOnly{
                    trace_base ? *trace_base
                               : dms::exact_single_mode(prod, dms::ShipMode::Fast).base};
            } else if (trace_mode == "slow") {
                policy = dms::SlowOnly{
                    trace_base ? *trace_base
                               : dms::exact_single_mode(prod, dms::ShipMode::Slow).base};
            } else {
                throw std::invalid_argument(
                    "trace: give --base-fast and --delta, or --mode fast|slow");
            }
            dms::DemandPool pool(prod.demand, trace_sim.config().seed, prod.id);
            auto demand = pool.path(trace_rep, static_cast<std::size_t>(trace_periods));
            auto rows = dms::trace_policy(policy, prod, demand);
            std::ostringstream csv;
            csv << "t,demand,q_fast,q_slow,overshoot,inventory\n";
            for (std::size_t t = 0; t < rows.size(); ++t) {
                csv << t << ',' << demand[t] << ',' << rows[t].q_fast << ',' << rows[t].q_slow
                    << ',' << rows[t].overshoot << ',' << rows[t].inventory_before_demand
                    << '\n';
            }
            write_file(trace_out, csv.str());
            std::cout << "wrote " << trace_out << " (" << rows.size() << " periods, "
                      << dms::describe(policy) << ")\n";
            return kOk;
        }
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? kOk : kValidation;
    } catch (const dms::infeasible_error& e) {
        std::cerr << "infeasible: " << e.what() << "\n";
        return kInfeasible;
    } catch (const std::invalid_argument& e) {
        std::cerr << "invalid argument: " << e.what() << "\n";
        return kValidation;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kValidation;
    }
    return kOk;
}
