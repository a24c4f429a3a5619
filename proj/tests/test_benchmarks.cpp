#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "dms/benchmarks.hpp"

using namespace dms;

namespace {

struct Fixture {
    Instance inst;
    SimConfig sim;
    std::unique_ptr<CandidateCache> cache;

    explicit Fixture(int products, AssortmentType type = AssortmentType::Industrial,
                     std::uint64_t seed = 909) {
        Overrides ov;
        ov.num_products = products;
        inst = generate_instance(type, seed, ov);
        sim.replications = 5;
        sim.horizon = 2000;
        sim.warmup = 1000;
        sim.seed = 717;
        cache = std::make_unique<CandidateCache>(inst, sim);
    }

    UnconstrainedEval handle() {
        return [this](const ProductParams& p) {
            const Column& c = cache->unconstrained_column(p.id);
            return ProductObjective{c.stats.cost_rate, c.stats.emission_rate};
        };
    }
};

}  // namespace

TEST_CASE("static mode selection matches exhaustive enumeration") {
    Fixture fx(12);
    TargetSpec target = resolve_target(fx.inst, 0.5, fx.handle());
    BenchmarkResult sms = solve_sms(*fx.cache, target);
    CHECK(sms.emission <= target.e_max * (1.0 + 1e-9));

    // brute force over all 2^12 mode assignments with exact evaluations
    const auto n = fx.inst.products.size();
    std::vector<SingleModeEval> slow(n), fast(n);
    for (std::size_t j = 0; j < n; ++j) {
        slow[j] = exact_single_mode(fx.inst.products[j], ShipMode::Slow);
        fast[j] = exact_single_mode(fx.inst.products[j], ShipMode::Fast);
    }
    double best = std::numeric_limits<double>::infinity();
    for (std::uint32_t mask = 0; mask < (1u << n); ++mask) {
        double cost = 0.0, emission = 0.0;
        for (std::size_t j = 0; j < n; ++j) {
            const SingleModeEval& e = (mask >> j) & 1u ? fast[j] : slow[j];
            cost += e.cost_rate;
            emission += e.emission_rate;
        }
        if (emission <= target.e_max) best = std::min(best, cost);
    }
    CHECK(sms.cost == doctest::Approx(best).epsilon(1e-12));
}

TEST_CASE("static mode selection boundary targets") {
    Fixture fx(10, AssortmentType::Apparel, 31);
    TargetSpec t0 = resolve_target(fx.inst, 0.0, fx.handle());
    BenchmarkResult sms0 = solve_sms(*fx.cache, t0);
    // no binding target: each product takes its cheaper mode
    for (std::size_t j = 0; j < fx.inst.products.size(); ++j) {
        const ProductParams& p = fx.inst.products[j];
        double cheap = std::min(exact_single_mode(p, ShipMode::Slow).cost_rate,
                                exact_single_mode(p, ShipMode::Fast).cost_rate);
        CHECK(sms0.chosen[j].stats.cost_rate == doctest::Approx(cheap));
    }

    TargetSpec t1 = resolve_target(fx.inst, 1.0, fx.handle());
    BenchmarkResult sms1 = solve_sms(*fx.cache, t1);
    for (std::size_t j = 0; j < fx.inst.products.size(); ++j) {
        CHECK(sms1.chosen[j].stats.emission_rate ==
              doctest::Approx(fx.inst.products[j].min_emission_rate()));
    }
}

TEST_CASE("blanket mode selection boundaries coincide with the unconstrained and cleanest policies") {
    Fixture fx(8, AssortmentType::Mixed, 77);
    BenchmarkResult b0 = solve_bms(*fx.cache, 0.0);
    for (std::size_t j = 0; j < fx.inst.products.size(); ++j) {
        const Column& unc = fx.cache->unconstrained_column(static_cast<int>(j));
        CHECK(b0.chosen[j].stats.cost_rate <= unc.stats.cost_rate * (1.0 + 1e-9));
    }

    BenchmarkResult b1 = solve_bms(*fx.cache, 1.0);
    for (std::size_t j = 0; j < fx.inst.products.size(); ++j)
        CHECK(b1.chosen[j].stats.emission_rate ==
              doctest::Approx(fx.inst.products[j].min_emission_rate()).epsilon(1e-9));

    CHECK_THROWS_AS(solve_bms(*fx.cache, 1.5), std::invalid_argument);
}

TEST_CASE("blanket mode selection respects each product budget and matches brute force") {
    Fixture fx(6, AssortmentType::Industrial, 400);
    const double r = 0.5;
    BenchmarkResult bms = solve_bms(*fx.cache, r);
    for (std::size_t j = 0; j < fx.inst.products.size(); ++j) {
        const ProductParams& p = fx.inst.products[j];
        double e_unc = fx.cache->unconstrained_column(static_cast<int>(j)).stats.emission_rate;
        double budget = e_unc - r * (e_unc - p.min_emission_rate());
        CHECK(bms.chosen[j].stats.emission_rate <= budget * (1.0 + 1e-6) + 1e-9);

        // brute force over the product's own search table
        const ProductCandidates& cands = fx.cache->candidates(static_cast<int>(j));
        double best = std::numeric_limits<double>::infinity();
        for (const auto& c : cands.all)
            if (c.emission <= budget * (1.0 + 1e-9) + 1e-9) best = std::min(best, c.cost);
        // frozen stats differ from search stats only within simulation noise
        CHECK(bms.chosen[j].stats.cost_rate <= best * 1.03 + 1e-6);
    }
}

TEST_CASE("dual-mode flexibility dominates the single-mode benchmark") {
    Fixture fx(10, AssortmentType::Industrial, 11);
    for (double r : {0.0, 0.5, 1.0}) {
        TargetSpec target = resolve_target(fx.inst, r, fx.handle());
        CgResult dms = run_column_generation(*fx.cache, target);
        BenchmarkResult sms = solve_sms(*fx.cache, target);
        CHECK(dms.integer.cost <= sms.cost * (1.0 + 1e-9));

        BenchmarkResult bms = solve_bms(*fx.cache, r);
        CHECK(bms.emission <= target.e_max * (1.0 + 1e-6) + 1e-9);
        double tol = (dms.integer.cost - dms.lp.value) + 0.02 * dms.integer.cost;
        CHECK(dms.integer.cost <= bms.cost + tol);
    }
}
