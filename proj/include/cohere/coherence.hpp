#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "cohere/randmat.hpp"

namespace cohere {

// Column centering/scaling convention for the pairwise statistics.
// Unknown: Pearson centering by column sample means.
// Known:   center by the given mean vector; sigma (optional) scales the
//          unnormalized gram statistics and is ignored by the normalized ones.
struct MeanMode {
    enum class Kind { unknown, known };
    Kind kind = Kind::unknown;
    std::vector<double> mu;     // length p, or length 1 to broadcast
    std::vector<double> sigma;  // empty = absent; length p or 1

    static MeanMode Unknown() { return {}; }
    static MeanMode Known(std::vector<double> mu_, std::vector<double> sigma_ = {}) {
        return {Kind::known, std::move(mu_), std::move(sigma_)};
    }
    static MeanMode KnownScalar(double mu_, double sigma_) {
        return {Kind::known, {mu_}, {sigma_}};
    }

    bool known() const { return kind == Kind::known; }
    double mu_at(std::int64_t j) const { return mu.size() == 1 ? mu[0] : mu[static_cast<std::size_t>(j)]; }
    double sigma_at(std::int64_t j) const { return sigma.size() == 1 ? sigma[0] : sigma[static_cast<std::size_t>(j)]; }
    void validate(std::int64_t p) const;  // throws ParameterError
};

enum class StatKind { L, L_tilde, W, V, J, U };
const char* stat_kind_name(StatKind k);

// argmax indices are 1-based, i < j.
struct CoherenceResult {
    StatKind kind = StatKind::L;
    std::int64_t tau = 1;
    double value = 0.0;
    std::int64_t i = 0;
    std::int64_t j = 0;
    std::int64_t n = 0;
    std::int64_t p = 0;
};

struct ColumnStats {
    std::vector<double> center;  // sample mean (Unknown) or mu_j (Known)
    std::vector<double> h;       // ||x_j - center_j|| / sqrt(n)
};

struct StandardizeResult {
    std::vector<double> columns;  // column-major, each column unit Euclidean norm
    ColumnStats stats;
};

// Throws DataError naming the first degenerate (zero norm after centering) column.
StandardizeResult standardize_columns(const DataMatrix& X, const MeanMode& mode);

struct KernelOptions {
    int threads = 0;              // 0 = hardware
    std::int64_t block_edge = 256;
};

// max |rho_ij| (Unknown) or |rho~_ij| (Known) over pairs i < j with j - i >= tau.
// Ties at the max break to the lexicographically smallest (i, j).
CoherenceResult coherence(const DataMatrix& X, std::int64_t tau, const MeanMode& mode,
                          const KernelOptions& opts = {});

// Unnormalized gram statistics with the same kernel and tie rule:
//   Unknown mode: W (tau = 1) or V (banded mask) over raw inner products.
//   Known mode:   J (tau = 1) or U, inner products of (x_j - mu_j)/sigma_j;
//                 sigma is required.
CoherenceResult gram_offdiag_max(const DataMatrix& X, std::int64_t tau, const MeanMode& mode,
                                 const KernelOptions& opts = {});

// Recompute the configured statistic at one pair (1-based), for cross-checks.
double statistic_at_pair(const DataMatrix& X, const MeanMode& mode, StatKind kind,
                         std::int64_t i, std::int64_t j);

// Gram-vs-correlation approximation diagnostics:
//   b1 = max_i |h_i - 1|, b3 = min_i h_i, b4 = max_i |xbar_i|,
//   W = max raw |x_i^T x_j|, lemma_bound = (b1^2 + 2 b1) W / b3^2 + n b4^2 / b3^2,
//   actual_dev = max_{i<j} |n rho_ij - x_i^T x_j|.
// actual_dev <= lemma_bound holds exactly whenever b3 > 0.
struct GramDiagnostics {
    double b1 = 0.0;
    double b3 = 0.0;
    double b4 = 0.0;
    double W = 0.0;
    double lemma_bound = 0.0;
    double actual_dev = 0.0;
};
GramDiagnostics lemma_bound_diagnostics(const DataMatrix& X, const KernelOptions& opts = {});

}  // namespace cohere
