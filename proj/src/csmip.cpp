#include "cohere/csmip.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "cohere/errors.hpp"

namespace cohere {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Z = xi*eta, ternary:  P(Z = +-3) = 1/18, P(Z = 0) = 8/9
//   log(8/9 + cosh(3 theta)/9) = u - log 18 + log1p(e^{-2u} + 16 e^{-u}), u = 3|theta|
double cumulant_ternary_product(double t) {
    const double u = 3.0 * std::fabs(t);
    return u - std::log(18.0) + std::log1p(std::exp(-2.0 * u) + 16.0 * std::exp(-u));
}

// --- numeric Legendre transform ----------------------------------------------

struct NumericCumulant {
    const std::function<double(double)>* fn;
    double lo, hi;  // open theta-interval
    double eval(double t) const { return (*fn)(t); }
};

double central_diff(const NumericCumulant& c, double t, double h) {
    return (c.eval(t + h) - c.eval(t - h)) / (2.0 * h);
}

double step_for(const NumericCumulant& c, double t) {
    double h = 1e-6 * std::max(1.0, std::fabs(t));
    if (std::isfinite(c.hi)) h = std::min(h, (c.hi - t) / 4.0);
    if (std::isfinite(c.lo)) h = std::min(h, (t - c.lo) / 4.0);
    return std::max(h, 1e-300);
}

// sup_theta { theta x - Lambda(theta) } by safeguarded Newton on the concave
// objective: bracket the root of d(theta) = x - Lambda'(theta) (d is
// decreasing), then Newton with bisection fallback to 1e-12 in theta. If the
// bracket ladder exhausts without a sign change, x is at or beyond the edge of
// the reachable mean range; the Chernoff value at the last probed theta is
// returned (a valid lower bound of the supremum).
double legendre_max(const NumericCumulant& c, double x) {
    auto d = [&](double t) { return x - central_diff(c, t, step_for(c, t)); };
    auto objective = [&](double t) { return t * x - c.eval(t); };

    double t0 = 0.0;
    if (!(c.lo < 0.0 && c.hi > 0.0)) t0 = 0.5 * (c.lo + c.hi);
    double d0 = d(t0);
    if (d0 == 0.0) return std::max(0.0, objective(t0));

    // ladder toward the relevant domain edge until the derivative changes sign
    const bool upward = d0 > 0.0;
    const double edge = upward ? c.hi : c.lo;
    double prev = t0, probe = t0;
    bool bracketed = false;
    for (int k = 1; k <= 70 && !bracketed; ++k) {
        if (std::isfinite(edge)) {
            probe = edge - (edge - t0) * std::pow(0.5, k);
        } else {
            probe = t0 + (upward ? 1.0 : -1.0) * std::pow(2.0, k - 1);
        }
        const double dk = d(probe);
        if ((dk <= 0.0) == upward) {
            bracketed = true;
        } else {
            prev = probe;
        }
    }
    if (!bracketed) return std::max(0.0, objective(prev));

    double a = upward ? prev : probe;  // d(a) > 0
    double b = upward ? probe : prev;  // d(b) <= 0
    double t = 0.5 * (a + b);
    for (int iter = 0; iter < 200; ++iter) {
        const double width = b - a;
        if (width <= 1e-12 * std::max(1.0, std::fabs(t))) {
            return std::max(0.0, objective(t));
        }
        const double h = step_for(c, t);
        const double dp = d(t);
        if (dp == 0.0) return std::max(0.0, objective(t));
        if (dp > 0.0) a = t; else b = t;
        // Newton on d with numeric curvature; bisect when the step leaves the bracket
        const double curv = (c.eval(t + h) - 2.0 * c.eval(t) + c.eval(t - h)) / (h * h);
        double tn = curv > 0.0 ? t + dp / curv : 0.5 * (a + b);
        if (!(tn > a && tn < b)) tn = 0.5 * (a + b);
        t = tn;
    }
    throw NumericError("Legendre transform did not converge within 200 iterations");
}

double legendre_of(double (*cumulant)(double), double lo, double hi, double x) {
    std::function<double(double)> fn = cumulant;
    NumericCumulant c{&fn, lo, hi};
    return legendre_max(c, x);
}

}  // namespace

const char* entry_family_name(EntryFamily f) {
    switch (f) {
        case EntryFamily::gaussian: return "gaussian";
        case EntryFamily::rademacher: return "rademacher";
        case EntryFamily::ternary: return "ternary";
    }
    return "unknown";
}

RateFunction RateFunction::i1(EntryFamily f) {
    switch (f) {
        case EntryFamily::gaussian: return {Label::i1_gaussian, nullptr, 0, 0};
        case EntryFamily::rademacher: return {Label::i1_rademacher, nullptr, 0, 0};
        case EntryFamily::ternary: return {Label::i1_ternary, nullptr, 0, 0};
    }
    throw ParameterError("unknown entry family");
}

RateFunction RateFunction::i2(EntryFamily f) {
    switch (f) {
        case EntryFamily::gaussian: return {Label::i2_gaussian, nullptr, 0, 0};
        case EntryFamily::rademacher: return {Label::i2_rademacher, nullptr, 0, 0};
        case EntryFamily::ternary: return {Label::i2_ternary, nullptr, 0, 0};
    }
    throw ParameterError("unknown entry family");
}

RateFunction RateFunction::numeric(std::function<double(double)> cumulant, double theta_lo,
                                   double theta_hi) {
    if (!(theta_lo < 0.0 || theta_hi > 0.0) || !(theta_lo < theta_hi))
        throw ParameterError("numeric rate function: invalid theta domain");
    return {Label::numeric, std::move(cumulant), theta_lo, theta_hi};
}

double RateFunction::operator()(double x) const {
    switch (label_) {
        case Label::i2_gaussian:
            return x > 0.0 ? (x - 1.0 - std::log(x)) / 2.0 : kInf;
        case Label::i1_gaussian: {
            const double s = std::sqrt(4.0 * x * x + 1.0);
            return (s - 1.0) / 2.0 - 0.5 * std::log((s + 1.0) / 2.0);
        }
        case Label::i1_rademacher: {
            const double ax = std::fabs(x);
            if (ax > 1.0) return kInf;
            if (ax == 1.0) return std::log(2.0);
            return ax * std::atanh(ax) + 0.5 * std::log1p(-ax * ax);
        }
        case Label::i2_rademacher:
            return x == 1.0 ? 0.0 : kInf;
        case Label::i2_ternary: {
            if (x < 0.0 || x > 3.0) return kInf;
            if (x == 0.0) return std::log(1.5);
            if (x == 3.0) return std::log(3.0);
            return (x / 3.0) * std::log(x) + (1.0 - x / 3.0) * std::log((3.0 - x) / 2.0);
        }
        case Label::i1_ternary: {
            const double ax = std::fabs(x);
            if (ax > 3.0) return kInf;
            if (ax == 3.0) return std::log(18.0);  // -log P(Z = 3)
            return legendre_of(cumulant_ternary_product, -kInf, kInf, ax);
        }
        case Label::numeric: {
            NumericCumulant c{&cumulant_, theta_lo_, theta_hi_};
            return legendre_max(c, x);
        }
    }
    throw ParameterError("unknown rate function label");
}

double rate_eval(const RateFunction& rf, double x) { return rf(x); }

double g_of_t(EntryFamily family, double t) {
    if (!(t > 0.0)) throw ParameterError("g_of_t: t must be positive");
    const double i1 = RateFunction::i1(family)(t / 2.0);
    const double i2 = RateFunction::i2(family)(0.5);
    return std::min(i1, i2);
}

std::pair<double, double> quadratic_floor_range(EntryFamily family) {
    switch (family) {
        case EntryFamily::gaussian: return {0.0, 1.0};
        case EntryFamily::rademacher: return {0.0, 1.2};
        case EntryFamily::ternary: return {0.0, 0.4};
    }
    throw ParameterError("unknown entry family");
}

namespace {

double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }
double normal_pdf(double x) {
    return std::exp(-0.5 * x * x) / std::sqrt(2.0 * 3.14159265358979323846);
}

// E[Z^2 e^{a|Z|}] for Z = xi*eta with xi,eta iid N(0,1), reduced to one
// dimension: the inner expectation over eta > 0 is analytic,
//   int_0^inf y^2 e^{c y} phi(y) dy = e^{c^2/2} ((1 + c^2) Phi(c) + c phi(c)).
double gaussian_product_moment(double a) {
    auto f = [a](double x) {
        const double c = a * x;
        // e^{c^2/2} phi(x) combined to avoid overflow at large x
        const double w = std::exp(0.5 * c * c - 0.5 * x * x) /
                         std::sqrt(2.0 * 3.14159265358979323846);
        return 4.0 * x * x * w * ((1.0 + c * c) * normal_cdf(c) + c * normal_pdf(c));
    };
    // adaptive Simpson, absolute tolerance 1e-10
    struct Simpson {
        std::function<double(double)> g;
        double recurse(double lo, double hi, double flo, double fmid, double fhi, double whole,
                       double tol, int depth) const {
            const double mid = 0.5 * (lo + hi);
            const double lm = 0.5 * (lo + mid), rm = 0.5 * (mid + hi);
            const double flm = g(lm), frm = g(rm);
            const double left = (mid - lo) / 6.0 * (flo + 4.0 * flm + fmid);
            const double right = (hi - mid) / 6.0 * (fmid + 4.0 * frm + fhi);
            if (depth > 50 || std::fabs(left + right - whole) < 15.0 * tol)
                return left + right + (left + right - whole) / 15.0;
            return recurse(lo, mid, flo, flm, fmid, left, tol / 2.0, depth + 1) +
                   recurse(mid, hi, fmid, frm, fhi, right, tol / 2.0, depth + 1);
        }
        double run(double lo, double hi, double tol) const {
            const double mid = 0.5 * (lo + hi);
            const double flo = g(lo), fmid = g(mid), fhi = g(hi);
            const double whole = (hi - lo) / 6.0 * (flo + 4.0 * fmid + fhi);
            return recurse(lo, hi, flo, fmid, fhi, whole, tol, 0);
        }
    };
    Simpson s;
    s.g = f;
    // fixed panels keep the sampler from skipping the mass near the origin
    double total = 0.0;
    for (int k = 0; k < 12; ++k)
        total += s.run(static_cast<double>(k), static_cast<double>(k + 1), 1e-11);
    total += s.run(12.0, 45.0, 1e-11);
    return total;
}

}  // namespace

double product_moment(EntryFamily family, double alpha) {
    switch (family) {
        case EntryFamily::rademacher:
            return std::exp(alpha);  // Z^2 = 1, |Z| = 1
        case EntryFamily::ternary:
            return std::exp(3.0 * alpha);  // (2/18) * 9 * e^{3a}
        case EntryFamily::gaussian:
            return gaussian_product_moment(alpha);
    }
    throw ParameterError("unknown entry family");
}

std::optional<FloorCheck> quadratic_floor_check(EntryFamily family) {
    switch (family) {
        case EntryFamily::rademacher: {
            const double a = std::log(1.5);  // E Z^2 e^{a|Z|} = e^a = 3/2 exactly
            return FloorCheck{a, 1.5 * a};
        }
        case EntryFamily::ternary: {
            const double a = std::log(1.5) / 3.0;  // e^{3a} = 3/2 exactly
            return FloorCheck{a, 1.5 * a};
        }
        case EntryFamily::gaussian: {
            // largest grid alpha (step 1e-3) with the moment still <= 3/2
            const double step = 1e-3;
            double good = -1.0;
            for (int k = 1; k < 1000; ++k) {
                const double a = k * step;
                if (product_moment(EntryFamily::gaussian, a) <= 1.5)
                    good = a;
                else
                    break;
            }
            if (good < 0.0) return std::nullopt;
            return FloorCheck{good, 1.5 * good};
        }
    }
    throw ParameterError("unknown entry family");
}

MipBound mip_prob_bound(EntryFamily family, std::int64_t n, std::int64_t p, std::int64_t k) {
    if (n < 2) throw ParameterError("mip_prob_bound: needs n >= 2");
    if (k < 1) throw ParameterError("mip_prob_bound: needs k >= 1");
    if (p < 1) throw ParameterError("mip_prob_bound: needs p >= 1");
    const double t = 1.0 / static_cast<double>(2 * k - 1);
    const double p_sq = static_cast<double>(p) * static_cast<double>(p);
    MipBound b;
    const double g_raw = 1.0 - 3.0 * p_sq * std::exp(-static_cast<double>(n) * g_of_t(family, t));
    b.g_vacuous = g_raw <= 0.0;
    b.g_bound = std::clamp(g_raw, 0.0, 1.0);
    const double s_exp = static_cast<double>(n) / (12.0 * static_cast<double>((2 * k - 1) * (2 * k - 1)));
    const double s_raw = 1.0 - 3.0 * p_sq * std::exp(-s_exp);
    b.simplified_vacuous = s_raw <= 0.0;
    b.simplified_bound = std::clamp(s_raw, 0.0, 1.0);
    b.valid = (family != EntryFamily::ternary) || k >= 2;
    return b;
}

std::int64_t mip_k_max(double L_tilde) {
    if (!(L_tilde >= 1e-18 && L_tilde <= 1.0))
        throw ParameterError("mip_k_max: coherence must lie in [1e-18, 1]");
    std::int64_t k = static_cast<std::int64_t>(std::ceil((1.0 / L_tilde + 1.0) / 2.0)) - 1;
    if (k < 0) k = 0;
    while (k >= 1 && !(static_cast<double>(2 * k - 1) * L_tilde < 1.0)) --k;
    while (static_cast<double>(2 * (k + 1) - 1) * L_tilde < 1.0) ++k;
    return k;
}

MipReport mip_certify(const DataMatrix& X, const std::vector<double>& mu,
                      const std::vector<double>& sigma, std::optional<EntryFamily> family,
                      std::int64_t table_k_max, const KernelOptions& opts) {
    MipReport rep;
    rep.n = X.n;
    rep.p = X.p;
    rep.family = family;
    const CoherenceResult c = coherence(X, 1, MeanMode::Known(mu, sigma), opts);
    rep.L_tilde = c.value;
    rep.cap = X.n;

    if (c.value < 1e-18) {
        rep.unbounded = true;
        rep.k_max = X.n;
    } else {
        rep.k_max = mip_k_max(c.value);
    }

    if (family && X.n >= 2) {
        for (std::int64_t k = 1; k <= table_k_max; ++k)
            rep.table.emplace_back(k, mip_prob_bound(*family, X.n, X.p, k));
    }
    return rep;
}

}  // namespace cohere
