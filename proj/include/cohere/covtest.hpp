#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "cohere/coherence.hpp"
#include "cohere/evtlaw.hpp"

namespace cohere {

// The bandedness test: H0 "sigma_ij = 0 for all |i-j| >= tau" is rejected
// when L_{n,tau}^2 meets the size-alpha threshold (tau = 1 tests independence).
struct TestConfig {
    std::int64_t tau = 1;
    double alpha = 0.05;
    MeanMode mean_mode = MeanMode::Unknown();
};

struct TestResult {
    CoherenceResult statistic;  // kind L or L_tilde at the configured tau
    evtlaw::EvtStatistic evt;
    double threshold_L2 = 0.0;
    bool reject = false;  // statistic.value^2 >= threshold_L2 (ties reject)
    std::vector<std::string> warnings;
};

TestResult run_test(const DataMatrix& X, const TestConfig& cfg, const KernelOptions& opts = {});

}  // namespace cohere
