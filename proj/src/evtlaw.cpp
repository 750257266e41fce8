#include "cohere/evtlaw.hpp"

#include <cmath>
#include <string>

#include "cohere/errors.hpp"

namespace cohere::evtlaw {

namespace {
const double kSqrt8Pi = std::sqrt(8.0 * 3.14159265358979323846);
const double kLog8Pi = std::log(8.0 * 3.14159265358979323846);

void require_p(std::int64_t p) {
    if (p < 3)
        throw DataError("limit law needs p >= 3 (log log p must be positive), got p = " +
                        std::to_string(p));
}
}  // namespace

double evt_cdf(double y) {
    return std::exp(-std::exp(-y / 2.0) / kSqrt8Pi);
}

double evt_quantile(double q) {
    if (!(q > 0.0 && q < 1.0))
        throw ParameterError("evt_quantile: q must lie in (0, 1)");
    return -2.0 * std::log(kSqrt8Pi * (-std::log(q)));
}

EvtStatistic transform_statistic(double L, std::int64_t n, std::int64_t p) {
    require_p(p);
    if (n < 1) throw DataError("transform_statistic: n must be positive");
    const double log_p = std::log(static_cast<double>(p));
    EvtStatistic s;
    s.raw = L;
    s.n = n;
    s.p = p;
    s.transformed = static_cast<double>(n) * L * L - 4.0 * log_p + std::log(log_p);
    // 1 - exp(-z) computed as -expm1(-z) to keep precision in the upper tail
    s.pvalue = -std::expm1(-std::exp(-s.transformed / 2.0) / kSqrt8Pi);
    s.lln_ratio = std::sqrt(static_cast<double>(n) / log_p) * L;
    return s;
}

double test_threshold(double alpha, std::int64_t n, std::int64_t p) {
    if (!(alpha > 0.0 && alpha < 1.0))
        throw ParameterError("test_threshold: alpha must lie in (0, 1)");
    require_p(p);
    if (n < 1) throw DataError("test_threshold: n must be positive");
    const double log_p = std::log(static_cast<double>(p));
    // log((1-alpha)^{-1}) = -log1p(-alpha)
    const double log_inv = -std::log1p(-alpha);
    return (4.0 * log_p - std::log(log_p) - kLog8Pi - 2.0 * std::log(log_inv)) /
           static_cast<double>(n);
}

}  // namespace cohere::evtlaw
