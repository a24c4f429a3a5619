#include "dms/simulate.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace dms {

std::string describe(const Policy& p) {
    if (const auto* d = std::get_if<DualIndex>(&p))
        return "dual_index(base_fast=" + std::to_string(d->base_fast) +
               ", delta=" + std::to_string(d->delta) + ")";
    if (const auto* f = std::get_if<FastOnly>(&p))
        return "fast_only(base=" + std::to_string(f->base) + ")";
    const auto& s = std::get<SlowOnly>(p);
    return "slow_only(base=" + std::to_string(s.base) + ")";
}

nlohmann::json policy_to_json(const Policy& p) {
    nlohmann::json j;
    if (const auto* d = std::get_if<DualIndex>(&p)) {
        j["kind"] = "dual_index";
        j["base_fast"] = d->base_fast;
        j["delta"] = d->delta;
    } else if (const auto* f = std::get_if<FastOnly>(&p)) {
        j["kind"] = "fast_only";
        j["base"] = f->base;
    } else {
        j["kind"] = "slow_only";
        j["base"] = std::get<SlowOnly>(p).base;
    }
    return j;
}

Policy policy_from_json(const nlohmann::json& j) {
    std::string kind = j.at("kind").get<std::string>();
    if (kind == "dual_index")
        return DualIndex{j.at("base_fast").get<long long>(), j.at("delta").get<long long>()};
    if (kind == "fast_only") return FastOnly{j.at("base").get<long long>()};
    if (kind == "slow_only") return SlowOnly{j.at("base").get<long long>()};
    throw std::invalid_argument("policy.kind: unknown value '" + kind + "'");
}

namespace {

long long pipe_sum(const std::vector<long long>& pipe) {
    return std::accumulate(pipe.begin(), pipe.end(), 0LL);
}

long long pop_front(std::vector<long long>& pipe) {
    if (pipe.empty()) return 0;
    long long v = pipe.front();
    pipe.erase(pipe.begin());
    return v;
}

}  // namespace

SimState initial_state(const Policy& policy, const ProductParams& product) {
    if (const auto* d = std::get_if<DualIndex>(&policy)) {
        if (d->delta < 0) throw std::invalid_argument("DualIndex.delta: must be >= 0");
    }
    SimState s;
    s.inventory = std::visit(
        [](const auto& p) -> long long {
            using T = std::decay_t<decltype(p)>;
            if constexpr (std::is_same_v<T, DualIndex>) return p.base_fast;
            else if constexpr (std::is_same_v<T, FastOnly>) return p.base;
            else return p.base;
        },
        policy);
    s.fast_pipe.assign(static_cast<std::size_t>(product.lead_fast), 0);
    s.slow_pipe.assign(static_cast<std::size_t>(product.lead_slow), 0);
    return s;
}

StepResult step(SimState& state, const Policy& policy, const ProductParams& product,
                long long demand) {
    // 1. arrivals
    state.inventory += pop_front(state.fast_pipe) + pop_front(state.slow_pipe);

    StepResult r;

    // 2. fast order: raise the fast position, which sees slow orders due
    //    within the fast lead time (the oldest lead_fast entries)
    long long slow_in_horizon = 0;
    std::size_t horizon = std::min<std::size_t>(product.lead_fast, state.slow_pipe.size());
    for (std::size_t i = 0; i < horizon; ++i) slow_in_horizon += state.slow_pipe[i];
    long long ip_fast = state.inventory + pipe_sum(state.fast_pipe) + slow_in_horizon;

    std::visit(
        [&](const auto& p) {
            using T = std::decay_t<decltype(p)>;
            if constexpr (std::is_same_v<T, DualIndex>) {
                r.q_fast = std::max(p.base_fast - ip_fast, 0LL);
                r.overshoot = std::max(ip_fast - p.base_fast, 0LL);
            } else if constexpr (std::is_same_v<T, FastOnly>) {
                r.q_fast = std::max(p.base - ip_fast, 0LL);
                r.overshoot = std::max(ip_fast - p.base, 0LL);
            }
        },
        policy);
    if (product.lead_fast == 0)
        state.inventory += r.q_fast;
    else
        state.fast_pipe.push_back(r.q_fast);

    // 3. slow order: raise the slow position, which includes the fast order
    //    just placed and the whole slow pipeline
    long long ip_slow = state.inventory + pipe_sum(state.fast_pipe) + pipe_sum(state.slow_pipe);
    std::visit(
        [&](const auto& p) {
            using T = std::decay_t<decltype(p)>;
            if constexpr (std::is_same_v<T, DualIndex>) {
                r.q_slow = std::max(p.base_fast + p.delta - ip_slow, 0LL);
            } else if constexpr (std::is_same_v<T, SlowOnly>) {
                r.q_slow = std::max(p.base - ip_slow, 0LL);
            }
        },
        policy);
    if (product.lead_slow == 0)
        state.inventory += r.q_slow;
    else
        state.slow_pipe.push_back(r.q_slow);

    // 4. demand, 5. costs
    r.inventory_before_demand = state.inventory;
    state.inventory -= demand;
    double on_hand = static_cast<double>(std::max(state.inventory, 0LL));
    double backlog = static_cast<double>(std::max(-state.inventory, 0LL));
    r.cost = product.holding_cost * on_hand + product.penalty_cost * backlog +
             product.ship_cost_fast * static_cast<double>(r.q_fast) +
             product.ship_cost_slow * static_cast<double>(r.q_slow);
    ++state.period;
    return r;
}

DemandPool::DemandPool(NegBinomial law, std::uint64_t seed, int product_id)
    : law_(law), seed_(seed), product_id_(product_id) {
    validate(DistSpec{law_});
}

std::span<const std::int32_t> DemandPool::path(int replication, std::size_t length) {
    if (replication < 0) throw std::invalid_argument("replication: must be >= 0");
    while (static_cast<int>(paths_.size()) <= replication) {
        std::uint64_t tag = (1ULL << 62) |
                            (static_cast<std::uint64_t>(product_id_) << 24) |
                            static_cast<std::uint64_t>(paths_.size());
        streams_.emplace_back(seed_, tag);
        paths_.emplace_back();
    }
    auto& path = paths_[replication];
    auto& rng = streams_[replication];
    while (path.size() < length) {
        long long d = sample_negbin(law_, rng);
        if (d > INT32_MAX) throw std::runtime_error("demand draw exceeds 32-bit range");
        max_seen_ = std::max(max_seen_, d);
        path.push_back(static_cast<std::int32_t>(d));
    }
    return {path.data(), length};
}

ColumnStats evaluate(const Policy& policy, const ProductParams& product, const SimConfig& cfg,
                     DemandPool* pool) {
    if (cfg.replications < 1) throw std::invalid_argument("replications: must be >= 1");
    if (cfg.horizon < 1) throw std::invalid_argument("horizon: must be >= 1");
    if (cfg.warmup < 0) throw std::invalid_argument("warmup: must be >= 0");

    DemandPool local(product.demand, cfg.seed, product.id);
    DemandPool& demands = pool ? *pool : local;

    const long long total = cfg.warmup + cfg.horizon;
    std::vector<double> rep_cost(cfg.replications), rep_emis(cfg.replications);
    double sum_qf = 0, sum_qs = 0, sum_o = 0;

    // Flow-proportional terms use a ratio estimator: realized shipment rates
    // are scaled so they integrate to the exact demand mean. This removes the
    // demand-level wobble of the window (the per-unit mode split is what the
    // policy controls) and keeps emission rates inside their hard bounds.
    const double mu = product.mean_demand();
    for (int rep = 0; rep < cfg.replications; ++rep) {
        auto path = demands.path(rep, static_cast<std::size_t>(total));
        SimState state = initial_state(policy, product);
        double inv_cost = 0;
        long long qf = 0, qs = 0, ov = 0;
        for (long long t = 0; t < total; ++t) {
            StepResult r = step(state, policy, product, path[static_cast<std::size_t>(t)]);
            if (t < cfg.warmup) continue;
            inv_cost += r.cost - product.ship_cost_fast * static_cast<double>(r.q_fast) -
                        product.ship_cost_slow * static_cast<double>(r.q_slow);
            qf += r.q_fast;
            qs += r.q_slow;
            ov += r.overshoot;
        }
        double T = static_cast<double>(cfg.horizon);
        double flow = static_cast<double>(qf + qs) / T;
        double scale = flow > 0.0 ? mu / flow : 1.0;
        double eqf = scale * static_cast<double>(qf) / T;
        double eqs = scale * static_cast<double>(qs) / T;
        rep_cost[rep] = inv_cost / T + product.ship_cost_fast * eqf +
                        product.ship_cost_slow * eqs;
        rep_emis[rep] = product.emission_fast * eqf + product.emission_slow * eqs;
        sum_qf += eqf;
        sum_qs += eqs;
        sum_o += static_cast<double>(ov) / T;
    }

    int R = cfg.replications;
    ColumnStats s;
    s.replications = R;
    s.cost_rate = std::accumulate(rep_cost.begin(), rep_cost.end(), 0.0) / R;
    s.emission_rate = std::accumulate(rep_emis.begin(), rep_emis.end(), 0.0) / R;
    s.eq_fast = sum_qf / R;
    s.eq_slow = sum_qs / R;
    s.eo = sum_o / R;
    if (R > 1) {
        double ss = 0;
        for (double c : rep_cost) ss += (c - s.cost_rate) * (c - s.cost_rate);
        double halfwidth = 1.96 * std::sqrt(ss / (R - 1)) / std::sqrt(static_cast<double>(R));
        s.ci_halfwidth_rel = s.cost_rate != 0.0 ? halfwidth / std::fabs(s.cost_rate) : 0.0;
        s.ci_flagged = s.ci_halfwidth_rel > cfg.ci_limit_rel;
    }
    return s;
}

std::vector<StepResult> trace_policy(const Policy& policy, const ProductParams& product,
                                     std::span<const std::int32_t> demand) {
    SimState state = initial_state(policy, product);
    std::vector<StepResult> out;
    out.reserve(demand.size());
    for (std::int32_t d : demand) out.push_back(step(state, policy, product, d));
    return out;
}

OvershootProcess::OvershootProcess(long long delta, int lead_gap) : delta_(delta) {
    if (delta < 0) throw std::invalid_argument("delta: must be >= 0");
    if (lead_gap < 1) throw std::invalid_argument("lead_gap: must be >= 1 (unequal lead times)");
    pending_.assign(static_cast<std::size_t>(lead_gap), 0);
    pending_.back() = delta;  // the initial slow order that fills the gap
}

OvershootProcess::Step OvershootProcess::advance(long long demand) {
    long long entering = pending_[head_];
    long long reachable = overshoot_ + entering;
    Step s;
    s.overshoot = std::max(reachable - demand, 0LL);
    s.q_fast = std::max(demand - reachable, 0LL);
    s.q_slow = demand - s.q_fast;
    pending_[head_] = s.q_slow;
    head_ = (head_ + 1) % pending_.size();
    overshoot_ = s.overshoot;
    return s;
}

}  // namespace dms
