#pragma once

#include <vector>

#include "dms/master.hpp"
#include "dms/subproblem.hpp"

namespace dms {

struct BenchmarkResult {
    std::vector<Column> chosen;  // one column per product
    double cost = 0.0;
    double emission = 0.0;
};

/// Static mode selection: one transport mode per product forever. Exactly the
/// multiple-choice knapsack over the two exact single-mode columns, solved
/// with the master machinery.
BenchmarkResult solve_sms(CandidateCache& cache, const TargetSpec& target);

/// Blanket mode selection: each product gets its own budget, a fraction r of
/// its reducible emissions below its unconstrained optimum, and is optimized
/// independently over the search table (cheapest column whose frozen
/// emissions respect the product budget).
BenchmarkResult solve_bms(CandidateCache& cache, double reduction);

}  // namespace dms
