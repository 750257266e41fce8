#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <utility>
#include <vector>

#include "cohere/coherence.hpp"
#include "cohere/randmat.hpp"

namespace cohere {

// Standardized entry families used by the deviation bounds (entries xi with
// mean 0, variance 1): standard normal, +-1 symmetric, and the sparse ternary
// +-sqrt(3) w.p. 1/6 / 0 w.p. 2/3.
enum class EntryFamily { gaussian, rademacher, ternary };
const char* entry_family_name(EntryFamily f);

// Large-deviation rate function: I(x) = sup_theta { theta x - Lambda(theta) }.
// I1 is the rate of the product xi*eta, I2 the rate of xi^2. Closed forms are
// used where available; the ternary I1 and user-supplied cumulants go through
// the numeric Legendre transform (safeguarded Newton, tolerance 1e-12 in theta).
// Evaluation returns +infinity outside the effective domain.
class RateFunction {
public:
    enum class Label {
        i1_gaussian,
        i2_gaussian,
        i1_rademacher,
        i2_rademacher,
        i1_ternary,
        i2_ternary,
        numeric,
    };

    static RateFunction i1(EntryFamily f);
    static RateFunction i2(EntryFamily f);
    // cumulant must be finite and convex on the open interval (theta_lo, theta_hi).
    static RateFunction numeric(std::function<double(double)> cumulant, double theta_lo,
                                double theta_hi);

    double operator()(double x) const;
    Label label() const { return label_; }

private:
    RateFunction(Label label, std::function<double(double)> cumulant, double lo, double hi)
        : label_(label), cumulant_(std::move(cumulant)), theta_lo_(lo), theta_hi_(hi) {}
    Label label_;
    std::function<double(double)> cumulant_;
    double theta_lo_ = 0.0;
    double theta_hi_ = 0.0;
};

double rate_eval(const RateFunction& rf, double x);

// g(t) = min{ I1(t/2), I2(1/2) }; the tail exponent of P(L~_n >= t).
double g_of_t(EntryFamily family, double t);

// t-range on which the quadratic floor g(t) >= t^2 / 12 is certified.
std::pair<double, double> quadratic_floor_range(EntryFamily family);

// Largest alpha with E[Z^2 e^{alpha |Z|}] <= 3/2 for the product Z = xi*eta
// (closed form for rademacher/ternary; 1e-3 grid with quadrature for gaussian).
// On that alpha, I1(x) >= x^2/3 holds for 0 <= x <= 3 alpha / 2. Returns
// nullopt when no positive alpha satisfies the moment bound.
struct FloorCheck {
    double alpha = 0.0;
    double x_hi = 0.0;  // 3 alpha / 2
};
std::optional<FloorCheck> quadratic_floor_check(EntryFamily family);

// E[Z^2 e^{alpha |Z|}] for the product Z = xi*eta (exposed for tests).
double product_moment(EntryFamily family, double alpha);

// Probability that an n x p matrix from the family satisfies the MIP at
// sparsity k, bounded below two ways:
//   g_bound:          1 - 3 p^2 exp(-n g(1/(2k-1)))
//   simplified_bound: 1 - 3 p^2 exp(-n / (12 (2k-1)^2))
// Both clamp to [0, 1]; a clamped-to-zero bound is flagged vacuous. The
// simplified bound is valid for k >= 1 (gaussian, rademacher) or k >= 2 (ternary).
struct MipBound {
    double g_bound = 0.0;
    bool g_vacuous = false;
    double simplified_bound = 0.0;
    bool simplified_vacuous = false;
    bool valid = false;
};
MipBound mip_prob_bound(EntryFamily family, std::int64_t n, std::int64_t p, std::int64_t k);

// Largest k >= 0 with (2k-1) L < 1, evaluated strictly in double arithmetic.
// Requires 1e-18 <= L <= 1; below that the certificate treats L as zero.
std::int64_t mip_k_max(double L_tilde);

// Empirical MIP certificate for a concrete matrix: L~_n under Known(mu, sigma)
// and the largest k with (2k-1) L~_n < 1. L~ = 0 (or below 1e-18) certifies
// every k at these dimensions; that is reported as unbounded with the
// combinatorial cap k <= n.
struct MipReport {
    std::int64_t n = 0;
    std::int64_t p = 0;
    double L_tilde = 0.0;
    std::int64_t k_max = 0;
    bool unbounded = false;
    std::int64_t cap = 0;  // = n, reported alongside the unbounded sentinel
    std::optional<EntryFamily> family;
    std::vector<std::pair<std::int64_t, MipBound>> table;  // per-k bounds when family given
};
MipReport mip_certify(const DataMatrix& X, const std::vector<double>& mu,
                      const std::vector<double>& sigma,
                      std::optional<EntryFamily> family = std::nullopt,
                      std::int64_t table_k_max = 8, const KernelOptions& opts = {});

}  // namespace cohere
