#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <vector>

#include "dms/master.hpp"
#include "dms/util.hpp"

using namespace dms;

namespace {

PooledColumn col(double emission, double cost, long long tag) {
    PooledColumn c;
    c.policy = FastOnly{tag};
    c.stats.cost_rate = cost;
    c.stats.emission_rate = emission;
    return c;
}

Pools hand_instance() {
    Pools pools(2);
    pools[0] = {col(10.0, 10.0, 0), col(2.0, 20.0, 1)};
    pools[1] = {col(8.0, 4.0, 2), col(4.0, 10.0, 3)};
    return pools;
}

// exhaustive integer optimum over small pools
std::pair<double, double> enumerate_best(const Pools& pools, double e_max) {
    std::vector<std::size_t> idx(pools.size(), 0);
    double best = std::numeric_limits<double>::infinity();
    double best_emission = 0.0;
    for (;;) {
        double cost = 0.0, emission = 0.0;
        for (std::size_t j = 0; j < pools.size(); ++j) {
            cost += pools[j][idx[j]].cost();
            emission += pools[j][idx[j]].emission();
        }
        if (emission <= e_max && cost < best) {
            best = cost;
            best_emission = emission;
        }
        std::size_t j = 0;
        while (j < pools.size() && ++idx[j] == pools[j].size()) idx[j++] = 0;
        if (j == pools.size()) break;
    }
    return {best, best_emission};
}

int count_fractional(const LpSolution& lp) {
    int frac = 0;
    for (const auto& w : lp.weights) {
        int nonzero = 0;
        for (double x : w)
            if (x > 1e-12) ++nonzero;
        if (nonzero > 1) ++frac;
    }
    return frac;
}

}  // namespace

TEST_CASE("hand-checked linear relaxation with one split product") {
    Pools pools = hand_instance();
    LpSolution lp = solve_rmp_lp(pools, 12.0);

    CHECK(lp.value == doctest::Approx(21.5));
    CHECK(lp.eta == doctest::Approx(-1.25));
    CHECK(lp.upsilon[0] == doctest::Approx(22.5));
    CHECK(lp.upsilon[1] == doctest::Approx(14.0));
    CHECK(lp.fractional_product == 0);
    CHECK(lp.weights[0][1] == doctest::Approx(0.75));
    CHECK(lp.weights[0][0] == doctest::Approx(0.25));
    CHECK(lp.weights[1][0] == doctest::Approx(1.0));
    CHECK(lp.total_emission == doctest::Approx(12.0));
    // strong duality
    CHECK(lp.value == doctest::Approx(lp.eta * 12.0 + lp.upsilon[0] + lp.upsilon[1]));

    IntegerSolution ip = solve_integer(pools, 12.0, lp.value);
    CHECK(ip.cost == doctest::Approx(24.0));
    CHECK(ip.emission <= 12.0);
    CHECK(ip.chosen == std::vector<int>{1, 0});
}

TEST_CASE("slack budget prices emissions at zero") {
    Pools pools = hand_instance();
    LpSolution lp = solve_rmp_lp(pools, 20.0);
    CHECK(lp.eta == 0.0);
    CHECK(lp.value == doctest::Approx(14.0));
    CHECK(lp.fractional_product == -1);
    CHECK(lp.total_emission == doctest::Approx(18.0));
    IntegerSolution ip = solve_integer(pools, 20.0, lp.value);
    CHECK(ip.cost == doctest::Approx(14.0));
    CHECK(ip.gap_pct == doctest::Approx(0.0));
}

TEST_CASE("budget at the pool minimum forces the cleanest assignment") {
    Pools pools = hand_instance();
    LpSolution lp = solve_rmp_lp(pools, 6.0);
    CHECK(lp.value == doctest::Approx(30.0));
    CHECK(lp.fractional_product == -1);
    IntegerSolution ip = solve_integer(pools, 6.0, lp.value);
    CHECK(ip.cost == doctest::Approx(30.0));
}

TEST_CASE("equal-rate segments resolve by product id") {
    // both products offer the same 1-cost-per-emission trade; the walk must
    // consume product 0 first
    Pools pools(2);
    pools[0] = {col(10.0, 10.0, 0), col(6.0, 14.0, 1)};
    pools[1] = {col(10.0, 10.0, 2), col(6.0, 14.0, 3)};
    LpSolution lp = solve_rmp_lp(pools, 18.0);  // need to shed 2 units
    CHECK(lp.fractional_product == 0);
    CHECK(lp.weights[0][1] == doctest::Approx(0.5));
    CHECK(lp.weights[1][0] == doctest::Approx(1.0));
    CHECK(lp.eta == doctest::Approx(-1.0));
}

TEST_CASE("infeasible budgets are reported") {
    Pools pools = hand_instance();
    CHECK(!try_solve_rmp_lp(pools, 5.0).has_value());
    CHECK_THROWS_AS(solve_rmp_lp(pools, 5.0), infeasible_error);
    CHECK_THROWS_AS(solve_integer(pools, 5.0, 0.0), infeasible_error);
}

TEST_CASE("integer solve matches exhaustive enumeration on random pools") {
    RngStream rng(2025, 17);
    for (int trial = 0; trial < 50; ++trial) {
        std::size_t n = 2 + rng.next_u64() % 5;  // up to 6 products
        Pools pools(n);
        double min_e = 0.0, max_e = 0.0;
        long long tag = 0;
        for (auto& pool : pools) {
            std::size_t cols = 1 + rng.next_u64() % 5;  // up to 5 columns
            double lo = 1e300, hi = -1e300;
            for (std::size_t k = 0; k < cols; ++k) {
                double e = 10.0 * rng.next_double();
                double c = 100.0 * rng.next_double();
                pool.push_back(col(e, c, tag++));
                lo = std::min(lo, e);
                hi = std::max(hi, e);
            }
            min_e += lo;
            max_e += hi;
        }
        double e_max = min_e + (max_e - min_e) * rng.next_double();

        LpSolution lp = solve_rmp_lp(pools, e_max);
        CHECK(count_fractional(lp) <= 1);
        CHECK(lp.total_emission <= e_max * (1.0 + 1e-9) + 1e-9);
        // duals price every pooled column nonnegatively
        for (std::size_t j = 0; j < n; ++j)
            for (const auto& c : pools[j])
                CHECK(c.cost() - lp.eta * c.emission() - lp.upsilon[j] >= -1e-9);
        double dual_value = lp.eta * e_max;
        for (double u : lp.upsilon) dual_value += u;
        CHECK(lp.value == doctest::Approx(dual_value).epsilon(1e-9));

        auto [best_cost, best_emission] = enumerate_best(pools, e_max);
        IntegerSolution ip = solve_integer(pools, e_max, lp.value);
        CHECK(ip.cost == doctest::Approx(best_cost).epsilon(1e-12));
        CHECK(ip.emission <= e_max * (1.0 + 1e-12));
        CHECK(lp.value <= best_cost * (1.0 + 1e-12) + 1e-12);
        (void)best_emission;
    }
}

TEST_CASE("column generation on a small generated instance") {
    Overrides ov;
    ov.num_products = 4;
    Instance inst = generate_instance(AssortmentType::Industrial, 314, ov);
    SimConfig sim;
    sim.replications = 5;
    sim.horizon = 2000;
    sim.warmup = 1000;
    sim.seed = 551;
    CandidateCache cache(inst, sim);

    UnconstrainedEval handle = [&cache](const ProductParams& p) {
        const Column& c = cache.unconstrained_column(p.id);
        return ProductObjective{c.stats.cost_rate, c.stats.emission_rate};
    };

    double previous_lb = -1.0;
    for (double r : {0.0, 0.25, 0.5, 0.75, 1.0}) {
        TargetSpec target = resolve_target(inst, r, handle);
        CgResult res = run_column_generation(cache, target);
        CHECK(res.converged);
        CHECK(res.integer.cost >= res.lp.value - 1e-9);
        CHECK(res.integer.emission <= target.e_max * (1.0 + 1e-9) + 1e-9);
        CHECK(count_fractional(res.lp) <= 1);
        CHECK(!res.log.empty());
        // lower bound grows as the budget tightens
        CHECK(res.lp.value >= previous_lb - 1e-6 * (1.0 + std::fabs(previous_lb)));
        previous_lb = res.lp.value;
        // boundary targets leave only noise-scale integrality gaps
        if (r == 0.0 || r == 1.0) CHECK(res.gap_pct() <= 0.25);
        // dual feasibility over the final pools
        for (std::size_t j = 0; j < res.pools.size(); ++j)
            for (const auto& c : res.pools[j])
                CHECK(c.cost() - res.lp.eta * c.emission() - res.lp.upsilon[j] >= -1e-9);
    }
}

TEST_CASE("iteration cap reports non-convergence but still returns bounds") {
    Overrides ov;
    ov.num_products = 6;
    Instance inst = generate_instance(AssortmentType::Industrial, 12, ov);
    SimConfig sim;
    sim.replications = 3;
    sim.horizon = 800;
    sim.warmup = 300;
    sim.seed = 99;
    CandidateCache cache(inst, sim);
    UnconstrainedEval handle = [&cache](const ProductParams& p) {
        const Column& c = cache.unconstrained_column(p.id);
        return ProductObjective{c.stats.cost_rate, c.stats.emission_rate};
    };
    TargetSpec target = resolve_target(inst, 0.6, handle);
    MasterConfig cfg;
    cfg.max_iterations = 1;
    cfg.columns_per_round = 1;
    CgResult res = run_column_generation(cache, target, cfg);
    CHECK(!res.converged);
    CHECK(res.integer.cost >= res.lp.value - 1e-9);
    CHECK(res.integer.emission <= target.e_max * (1.0 + 1e-9) + 1e-9);
}

TEST_CASE("integer finish without any feasible branch falls back to cleanest") {
    // single product, budget exactly at the cleanest column
    Pools pools(1);
    pools[0] = {col(5.0, 1.0, 0), col(2.0, 3.0, 1)};
    LpSolution lp = solve_rmp_lp(pools, 2.0);
    IntegerSolution ip = solve_integer(pools, 2.0, lp.value);
    CHECK(ip.chosen == std::vector<int>{1});
    CHECK(ip.cost == doctest::Approx(3.0));
}
