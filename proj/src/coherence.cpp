#include "cohere/coherence.hpp"

#include <algorithm>
#include <cmath>

#include "cohere/errors.hpp"
#include "cohere/parallel.hpp"

namespace cohere {

const char* stat_kind_name(StatKind k) {
    switch (k) {
        case StatKind::L: return "L";
        case StatKind::L_tilde: return "L_tilde";
        case StatKind::W: return "W";
        case StatKind::V: return "V";
        case StatKind::J: return "J";
        case StatKind::U: return "U";
    }
    return "?";
}

void MeanMode::validate(std::int64_t p) const {
    if (!known()) return;
    if (mu.empty() || (mu.size() != 1 && static_cast<std::int64_t>(mu.size()) != p))
        throw ParameterError("known mean mode: mu must have length p (or a single broadcast value)");
    if (!sigma.empty()) {
        if (sigma.size() != 1 && static_cast<std::int64_t>(sigma.size()) != p)
            throw ParameterError("known mean mode: sigma must have length p (or a single broadcast value)");
        for (double s : sigma)
            if (!(s > 0.0)) throw ParameterError("known mean mode: sigma entries must be positive");
    }
}

namespace {

// One shared dot routine (4 independent accumulators, fixed combine order) so
// every caller computes bit-identical inner products for a given pair.
double dot(const double* a, const double* b, std::int64_t n) {
    double s0 = 0.0, s1 = 0.0, s2 = 0.0, s3 = 0.0;
    std::int64_t k = 0;
    for (; k + 4 <= n; k += 4) {
        s0 += a[k] * b[k];
        s1 += a[k + 1] * b[k + 1];
        s2 += a[k + 2] * b[k + 2];
        s3 += a[k + 3] * b[k + 3];
    }
    double s = (s0 + s1) + (s2 + s3);
    for (; k < n; ++k) s += a[k] * b[k];
    return s;
}

struct PairMax {
    double value = -1.0;  // |dot|
    std::int64_t i = -1;
    std::int64_t j = -1;

    void offer(double v, std::int64_t ii, std::int64_t jj) {
        if (v > value || (v == value && (ii < i || (ii == i && jj < j)))) {
            value = v;
            i = ii;
            j = jj;
        }
    }
};

// Max |col_i . col_j| over pairs i < j with j - i >= tau. Panel pairs run in
// parallel; each pair's dot is computed identically regardless of the block
// edge or thread count, and the final reduction re-applies the lexicographic
// tie rule, so the result is fully deterministic.
PairMax max_abs_dot(const double* cols, std::int64_t n, std::int64_t p, std::int64_t tau,
                    const KernelOptions& opts) {
    const std::int64_t B = std::max<std::int64_t>(1, opts.block_edge);
    const std::int64_t nblocks = (p + B - 1) / B;

    struct Task {
        std::int64_t bi, bj;
    };
    std::vector<Task> tasks;
    for (std::int64_t bi = 0; bi < nblocks; ++bi) {
        for (std::int64_t bj = bi; bj < nblocks; ++bj) {
            const std::int64_t i_lo = bi * B;
            const std::int64_t j_hi = std::min(bj * B + B, p) - 1;
            if (j_hi - i_lo >= tau) tasks.push_back({bi, bj});
        }
    }

    std::vector<PairMax> champs(tasks.size());
    parallel_for(static_cast<std::int64_t>(tasks.size()), opts.threads, [&](std::int64_t t) {
        const Task task = tasks[static_cast<std::size_t>(t)];
        const std::int64_t i_lo = task.bi * B, i_hi = std::min(i_lo + B, p);
        const std::int64_t j_hi = std::min(task.bj * B + B, p);
        PairMax best;
        for (std::int64_t i = i_lo; i < i_hi; ++i) {
            const std::int64_t j_lo = std::max(task.bj * B, i + tau);
            const double* ci = cols + i * n;
            for (std::int64_t j = j_lo; j < j_hi; ++j) {
                const double v = std::fabs(dot(ci, cols + j * n, n));
                best.offer(v, i, j);
            }
        }
        champs[static_cast<std::size_t>(t)] = best;
    });

    PairMax best;
    for (const PairMax& c : champs)
        if (c.i >= 0) best.offer(c.value, c.i, c.j);
    return best;
}

void require_pairs(std::int64_t p, std::int64_t tau) {
    if (tau < 1) throw ParameterError("tau must be a positive integer");
    if (p < tau + 1)
        throw DataError("no admissible pair: need p >= tau + 1 (p = " + std::to_string(p) +
                        ", tau = " + std::to_string(tau) + ")");
}

// Columns centered by mu_j and scaled by 1/sigma_j (for J/U), or raw (W/V).
std::vector<double> prepare_gram_columns(const DataMatrix& X, const MeanMode& mode) {
    std::vector<double> cols(X.values);
    if (!mode.known()) return cols;
    for (std::int64_t j = 0; j < X.p; ++j) {
        const double mu = mode.mu_at(j);
        const double inv_sigma = 1.0 / mode.sigma_at(j);
        double* c = cols.data() + j * X.n;
        for (std::int64_t i = 0; i < X.n; ++i) c[i] = (c[i] - mu) * inv_sigma;
    }
    return cols;
}

}  // namespace

StandardizeResult standardize_columns(const DataMatrix& X, const MeanMode& mode) {
    mode.validate(X.p);
    if (X.n < 1 || X.p < 1) throw DataError("standardize: matrix is empty");
    if (!mode.known() && X.n < 2)
        throw DataError("standardize: Pearson centering needs n >= 2");

    StandardizeResult out;
    out.columns.resize(X.values.size());
    out.stats.center.resize(static_cast<std::size_t>(X.p));
    out.stats.h.resize(static_cast<std::size_t>(X.p));
    const double sqrt_n = std::sqrt(static_cast<double>(X.n));

    for (std::int64_t j = 0; j < X.p; ++j) {
        const double* src = X.col(j);
        double* dst = out.columns.data() + j * X.n;
        double center;
        if (mode.known()) {
            center = mode.mu_at(j);
        } else {
            double s = 0.0;
            for (std::int64_t i = 0; i < X.n; ++i) s += src[i];
            center = s / static_cast<double>(X.n);
        }
        double norm2 = 0.0;
        for (std::int64_t i = 0; i < X.n; ++i) {
            const double c = src[i] - center;
            dst[i] = c;
            norm2 += c * c;
        }
        const double norm = std::sqrt(norm2);
        if (!(norm > 0.0))
            throw DataError("degenerate column " + std::to_string(j + 1) +
                            ": zero norm after centering");
        const double inv = 1.0 / norm;
        for (std::int64_t i = 0; i < X.n; ++i) dst[i] *= inv;
        out.stats.center[static_cast<std::size_t>(j)] = center;
        out.stats.h[static_cast<std::size_t>(j)] = norm / sqrt_n;
    }
    return out;
}

CoherenceResult coherence(const DataMatrix& X, std::int64_t tau, const MeanMode& mode,
                          const KernelOptions& opts) {
    require_pairs(X.p, tau);
    const StandardizeResult std_cols = standardize_columns(X, mode);
    PairMax best = max_abs_dot(std_cols.columns.data(), X.n, X.p, tau, opts);
    CoherenceResult r;
    r.kind = mode.known() ? StatKind::L_tilde : StatKind::L;
    r.tau = tau;
    r.value = std::clamp(best.value, 0.0, 1.0);
    r.i = best.i + 1;
    r.j = best.j + 1;
    r.n = X.n;
    r.p = X.p;
    return r;
}

CoherenceResult gram_offdiag_max(const DataMatrix& X, std::int64_t tau, const MeanMode& mode,
                                 const KernelOptions& opts) {
    require_pairs(X.p, tau);
    mode.validate(X.p);
    if (mode.known() && mode.sigma.empty())
        throw ParameterError("gram statistics J/U require sigma in known mean mode");
    const std::vector<double> cols = prepare_gram_columns(X, mode);
    PairMax best = max_abs_dot(cols.data(), X.n, X.p, tau, opts);
    CoherenceResult r;
    r.kind = mode.known() ? (tau == 1 ? StatKind::J : StatKind::U)
                          : (tau == 1 ? StatKind::W : StatKind::V);
    r.tau = tau;
    r.value = best.value;
    r.i = best.i + 1;
    r.j = best.j + 1;
    r.n = X.n;
    r.p = X.p;
    return r;
}

double statistic_at_pair(const DataMatrix& X, const MeanMode& mode, StatKind kind,
                         std::int64_t i, std::int64_t j) {
    const std::int64_t i0 = i - 1, j0 = j - 1;
    if (kind == StatKind::L || kind == StatKind::L_tilde) {
        const StandardizeResult std_cols = standardize_columns(X, mode);
        return std::fabs(dot(std_cols.columns.data() + i0 * X.n,
                             std_cols.columns.data() + j0 * X.n, X.n));
    }
    const std::vector<double> cols = prepare_gram_columns(X, mode);
    return std::fabs(dot(cols.data() + i0 * X.n, cols.data() + j0 * X.n, X.n));
}

GramDiagnostics lemma_bound_diagnostics(const DataMatrix& X, const KernelOptions& opts) {
    if (X.n < 2) throw DataError("lemma diagnostics: need n >= 2");
    if (X.p < 2) throw DataError("lemma diagnostics: need p >= 2");
    const StandardizeResult std_cols = standardize_columns(X, MeanMode::Unknown());
    const std::vector<double>& h = std_cols.stats.h;
    const std::vector<double>& xbar = std_cols.stats.center;

    GramDiagnostics d;
    d.b1 = 0.0;
    d.b3 = h[0];
    d.b4 = 0.0;
    for (std::int64_t j = 0; j < X.p; ++j) {
        d.b1 = std::max(d.b1, std::fabs(h[static_cast<std::size_t>(j)] - 1.0));
        d.b3 = std::min(d.b3, h[static_cast<std::size_t>(j)]);
        d.b4 = std::max(d.b4, std::fabs(xbar[static_cast<std::size_t>(j)]));
    }

    // Per-pair deviation via the algebraic identity
    //   n rho_ij - x_i^T x_j = (x_i^T x_j (1 - h_i h_j) - n xbar_i xbar_j) / (h_i h_j),
    // which is exact (and exactly zero when b1 = b4 = 0).
    const double n_real = static_cast<double>(X.n);
    std::vector<double> max_dev(static_cast<std::size_t>(X.p), 0.0);
    std::vector<double> max_dot(static_cast<std::size_t>(X.p), 0.0);
    parallel_for(X.p, opts.threads, [&](std::int64_t i) {
        const double* ci = X.col(i);
        double dev = 0.0, w = 0.0;
        for (std::int64_t j = i + 1; j < X.p; ++j) {
            const double g = dot(ci, X.col(j), X.n);
            const double hh = h[static_cast<std::size_t>(i)] * h[static_cast<std::size_t>(j)];
            const double num = g * (1.0 - hh) -
                               n_real * xbar[static_cast<std::size_t>(i)] * xbar[static_cast<std::size_t>(j)];
            dev = std::max(dev, std::fabs(num / hh));
            w = std::max(w, std::fabs(g));
        }
        max_dev[static_cast<std::size_t>(i)] = dev;
        max_dot[static_cast<std::size_t>(i)] = w;
    });
    d.actual_dev = *std::max_element(max_dev.begin(), max_dev.end());
    d.W = *std::max_element(max_dot.begin(), max_dot.end());
    const double inv_b3_sq = 1.0 / (d.b3 * d.b3);
    d.lemma_bound = (d.b1 * d.b1 + 2.0 * d.b1) * d.W * inv_b3_sq + n_real * inv_b3_sq * d.b4 * d.b4;
    return d;
}

}  // namespace cohere
