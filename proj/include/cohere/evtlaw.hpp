#pragma once

#include <cstdint>

namespace cohere::evtlaw {

// Limit law of the transformed squared coherence:
//   F(y) = exp(-e^{-y/2} / sqrt(8 pi)),  y in R.
// Mean and standard deviation follow from the Gumbel location-scale form
// y = 2 (G + log c), c = 1/sqrt(8 pi).
inline constexpr double kLawMean = -2.0697400977261704;
inline constexpr double kLawSd = 2.5650996603237282;

double evt_cdf(double y);

// Inverse of evt_cdf; q must lie in (0, 1).
double evt_quantile(double q);

struct EvtStatistic {
    double raw = 0.0;  // the coherence value L
    std::int64_t n = 0;
    std::int64_t p = 0;
    double transformed = 0.0;  // n L^2 - 4 log p + log log p
    double pvalue = 0.0;       // 1 - F(transformed)
    double lln_ratio = 0.0;    // sqrt(n / log p) * L
};

// Requires p >= 3 (log log p must be positive); throws DataError otherwise.
EvtStatistic transform_statistic(double L, std::int64_t n, std::int64_t p);

// Size-alpha rejection threshold on L^2:
//   n^{-1} (4 log p - log log p - log(8 pi) - 2 log log (1-alpha)^{-1}).
// May be negative for tiny p; callers compare regardless.
double test_threshold(double alpha, std::int64_t n, std::int64_t p);

}  // namespace cohere::evtlaw
