#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "cohere/coherence.hpp"
#include "cohere/randmat.hpp"

namespace cohere {

// Replicated Monte Carlo verification of the limit laws.
//
// Scenarios:
//   iid       n x p entries from an i.i.d. family
//   banded    rows N_p(mu, Sigma) with banded Sigma (the H0 ensemble)
//   remark23  Sigma = I with p = 2n and tau = n; the transformed statistic
//             converges to the law shifted left by log 16
//   remark24  block-constant rows (all-ones block covariance), tau = block
//             size; shifted left by 16 log log p
struct SimulationConfig {
    enum class Scenario { iid, banded, remark23, remark24 };
    Scenario scenario = Scenario::iid;
    Family iid_family = Family::gaussian;
    std::optional<BandedCovSpec> cov;  // banded scenario
    std::int64_t n = 0;
    std::int64_t p = 0;
    std::int64_t tau = 1;
    std::int64_t block_size = 0;  // remark24
    std::int64_t num_blocks = 0;  // remark24
    StatKind kind = StatKind::L;  // L (Pearson) or L_tilde (known means)
    std::int64_t replicates = 0;
    std::uint64_t master_seed = 0;
    std::optional<double> alpha;  // when set, also estimate the rejection rate
    int threads = 0;

    void resolve();  // fills forced dimensions, validates; throws ParameterError
};

struct SimulationReport {
    std::vector<double> raw;          // per-replicate coherence values
    std::vector<double> transformed;  // n L^2 - 4 log p + log log p
    std::vector<double> ecdf_grid;    // 512 points on [min-1, max+1]
    std::vector<double> ecdf_values;
    double target_shift = 0.0;  // the scenario's limit is F shifted by this
    double ks_distance = 0.0;   // exact sup distance, ECDF vs F(y - target_shift)
    double mean_transformed = 0.0;
    double mean_lln_ratio = 0.0;
    double shift_estimate = 0.0;  // mean_transformed - law mean
    std::optional<double> rejection_rate;
    std::vector<std::string> warnings;
};

SimulationReport simulate(const SimulationConfig& config);

// ECDF sup-distance of values against the law of (Y + shift), Y ~ F; the
// target CDF is y -> F(y - shift). shift_estimate is mean - (law mean + shift).
struct LawComparison {
    double ks_distance = 0.0;
    double mean = 0.0;
    double shift_estimate = 0.0;
};
LawComparison compare_to_law(const std::vector<double>& values, double shift);

}  // namespace cohere
