#include "cohere/covtest.hpp"

#include <cmath>

#include "cohere/errors.hpp"

namespace cohere {

namespace {

bool provenance_is_nongaussian_iid(const Provenance& prov) {
    if (prov.kind != Provenance::Kind::ensemble || !prov.spec) return false;
    const Family f = prov.spec->family;
    return f == Family::rademacher || f == Family::sparse_ternary;
}

}  // namespace

TestResult run_test(const DataMatrix& X, const TestConfig& cfg, const KernelOptions& opts) {
    if (!(cfg.alpha > 0.0 && cfg.alpha < 1.0))
        throw ParameterError("run_test: alpha must lie in (0, 1)");

    TestResult r;
    r.statistic = coherence(X, cfg.tau, cfg.mean_mode, opts);
    r.evt = evtlaw::transform_statistic(r.statistic.value, X.n, X.p);
    r.threshold_L2 = evtlaw::test_threshold(cfg.alpha, X.n, X.p);
    r.reject = r.statistic.value * r.statistic.value >= r.threshold_L2;

    const double n_real = static_cast<double>(X.n);
    const double p_real = static_cast<double>(X.p);
    if (std::log(p_real) > std::cbrt(n_real))
        r.warnings.push_back("log p exceeds n^(1/3); the limit law may be inaccurate at these dimensions");
    if (static_cast<double>(cfg.tau) >= std::pow(p_real, 0.1))
        r.warnings.push_back("tau is large relative to p; the banded limit law assumes tau = o(p^t)");
    if (X.n < 30)
        r.warnings.push_back("n below 30; asymptotic approximation is dubious");
    if (cfg.tau >= 2 && provenance_is_nongaussian_iid(X.provenance))
        r.warnings.push_back("bandedness test (tau >= 2) is derived for Gaussian rows; "
                             "data provenance is a non-Gaussian ensemble");
    return r;
}

}  // namespace cohere
