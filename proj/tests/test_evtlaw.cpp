#include <doctest.h>

#include <cmath>
#include <random>

#include "cohere/errors.hpp"
#include "cohere/evtlaw.hpp"

using namespace cohere;
using namespace cohere::evtlaw;

// Reference values computed with mpmath at 50 digits.
namespace ref {
constexpr double kF0 = 0.81916386137641116;            // exp(-1/sqrt(8 pi))
constexpr double kQ95 = 2.716219070555093;             // quantile(0.95)
constexpr double kQ50 = -2.4911455863659074;           // quantile(0.5)
constexpr double kThreshold = 0.2224209924460578;      // test_threshold(0.05, 100, 200)
constexpr double kTransform = 16.623692073271773;      // 100*0.25 - 4 log 10 + log log 10
constexpr double kTransformZero = -8.3763079267282269; // L = 0, p = 10
constexpr double kLlnRatio = 1.9428801600600837;       // 0.2 * sqrt(500 / log 200)
}  // namespace ref

TEST_SUITE("evtlaw") {

TEST_CASE("cdf values and limits") {
    CHECK(evt_cdf(0.0) == doctest::Approx(ref::kF0).epsilon(1e-14));
    CHECK(evt_cdf(200.0) == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(evt_cdf(-80.0) == doctest::Approx(0.0).scale(1.0).epsilon(1e-14));
    CHECK(evt_cdf(5.0) > evt_cdf(4.0));
}

TEST_CASE("quantile closed form") {
    CHECK(evt_quantile(0.95) == doctest::Approx(ref::kQ95).epsilon(1e-13));
    CHECK(evt_quantile(0.5) == doctest::Approx(ref::kQ50).epsilon(1e-13));
    CHECK(evt_quantile(ref::kF0) == doctest::Approx(0.0).scale(1.0).epsilon(1e-13));
    CHECK_THROWS_AS(evt_quantile(0.0), ParameterError);
    CHECK_THROWS_AS(evt_quantile(1.0), ParameterError);
    CHECK_THROWS_AS(evt_quantile(-0.3), ParameterError);
}

TEST_CASE("round trips hold to 1e-12 inside the representable window") {
    for (int k = 1; k < 5000; ++k) {
        const double q = static_cast<double>(k) / 5000.0;
        CHECK(std::fabs(evt_cdf(evt_quantile(q)) - q) <= 1e-12);
    }
    // Above y ~ 13.6 the digits of F(y) near 1 cannot carry the quantile back
    // at 1e-12 in binary64, so the y-side sweep stops at 12.
    for (int k = 0; k <= 5000; ++k) {
        const double y = -10.0 + 22.0 * static_cast<double>(k) / 5000.0;
        CHECK(std::fabs(evt_quantile(evt_cdf(y)) - y) <= 1e-12 * std::max(1.0, std::fabs(y)));
    }
}

TEST_CASE("transform populates every field") {
    const EvtStatistic s = transform_statistic(0.5, 100, 10);
    CHECK(s.transformed == doctest::Approx(ref::kTransform).epsilon(1e-13));
    CHECK(s.pvalue == doctest::Approx(1.0 - evt_cdf(s.transformed)).epsilon(1e-12));
    const EvtStatistic z = transform_statistic(0.0, 12345, 10);
    CHECK(z.transformed == doctest::Approx(ref::kTransformZero).epsilon(1e-13));
    CHECK(z.pvalue > 0.9999);  // 1 - F(-8.376) = 0.9999986
    const EvtStatistic l = transform_statistic(0.2, 500, 200);
    CHECK(l.lln_ratio == doctest::Approx(ref::kLlnRatio).epsilon(1e-13));
    CHECK_THROWS_AS(transform_statistic(0.5, 100, 2), DataError);
}

TEST_CASE("threshold value and tail behavior") {
    CHECK(test_threshold(0.05, 100, 200) == doctest::Approx(ref::kThreshold).epsilon(1e-12));
    // alpha -> 1 sends the threshold toward -infinity; the divergence is
    // doubly logarithmic, so check monotone descent and a reachable sign flip
    CHECK(test_threshold(0.99, 100, 200) < test_threshold(0.5, 100, 200));
    CHECK(test_threshold(0.5, 100, 200) < test_threshold(0.05, 100, 200));
    CHECK(test_threshold(0.999999999999999, 1, 3) < 0.0);
    CHECK_THROWS_AS(test_threshold(0.0, 100, 200), ParameterError);
    CHECK_THROWS_AS(test_threshold(1.0, 100, 200), ParameterError);
    CHECK_THROWS_AS(test_threshold(0.05, 100, 2), DataError);
}

TEST_CASE("threshold consistency identity against the quantile") {
    std::mt19937_64 gen(17);
    std::uniform_real_distribution<double> ua(0.001, 0.999);
    std::uniform_int_distribution<std::int64_t> un(1, 100000), up(3, 1000000);
    for (int k = 0; k < 100; ++k) {
        const double alpha = ua(gen);
        const std::int64_t n = un(gen), p = up(gen);
        const double log_p = std::log(static_cast<double>(p));
        const double lhs = static_cast<double>(n) * test_threshold(alpha, n, p);
        const double rhs = evt_quantile(1.0 - alpha) + 4.0 * log_p - std::log(log_p);
        CHECK(std::fabs(lhs - rhs) <= 1e-12 * std::max(1.0, std::fabs(rhs)));
    }
}

TEST_CASE("law mean and sd constants match the Gumbel transformation") {
    // y = 2 (G + log c): mean 2 (gamma + log c), sd 2 pi / sqrt(6)
    const double c = 1.0 / std::sqrt(8.0 * 3.14159265358979323846);
    const double gamma = 0.57721566490153286;
    CHECK(kLawMean == doctest::Approx(2.0 * (gamma + std::log(c))).epsilon(1e-12));
    CHECK(kLawSd == doctest::Approx(2.0 * 3.14159265358979323846 / std::sqrt(6.0)).epsilon(1e-12));
}

}  // TEST_SUITE
