#include "cohere/randmat.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "cohere/errors.hpp"
#include "cohere/rng.hpp"

namespace cohere {

const char* family_name(Family f) {
    switch (f) {
        case Family::gaussian: return "gaussian";
        case Family::scaled_gaussian: return "scaled-gaussian";
        case Family::rademacher: return "rademacher";
        case Family::sparse_ternary: return "sparse-ternary";
        case Family::banded_gaussian: return "banded-gaussian";
        case Family::block_gaussian: return "block-gaussian";
    }
    return "unknown";
}

BandedCovSpec BandedCovSpec::constant(std::int64_t p, const std::vector<double>& band_values) {
    BandedCovSpec spec;
    spec.p = p;
    spec.tau = static_cast<std::int64_t>(band_values.size());
    spec.bands.resize(band_values.size());
    for (std::size_t d = 0; d < band_values.size(); ++d) {
        spec.bands[d].assign(static_cast<std::size_t>(p - static_cast<std::int64_t>(d)),
                             band_values[d]);
    }
    return spec;
}

double BandedCovSpec::entry(std::int64_t i, std::int64_t j) const {
    const std::int64_t d = std::llabs(i - j);
    if (d >= tau) return 0.0;
    const std::int64_t k = std::min(i, j);
    return bands[static_cast<std::size_t>(d)][static_cast<std::size_t>(k)];
}

void BandedCovSpec::validate_shape() const {
    if (p < 1) throw ParameterError("banded covariance: p must be positive");
    if (tau < 1 || tau > p) throw ParameterError("banded covariance: bandwidth tau must be in [1, p]");
    if (static_cast<std::int64_t>(bands.size()) != tau)
        throw ParameterError("banded covariance: expected one band per offset 0..tau-1");
    for (std::int64_t d = 0; d < tau; ++d) {
        if (static_cast<std::int64_t>(bands[static_cast<std::size_t>(d)].size()) != p - d)
            throw ParameterError("banded covariance: band at offset " + std::to_string(d) +
                                 " must have length p - offset");
    }
    for (std::int64_t i = 0; i < p; ++i) {
        if (!(bands[0][static_cast<std::size_t>(i)] > 0.0))
            throw ParameterError("banded covariance: diagonal entry " + std::to_string(i + 1) +
                                 " must be positive");
    }
}

BandedCholesky banded_cholesky(const BandedCovSpec& cov) {
    cov.validate_shape();
    const std::int64_t p = cov.p;
    const std::int64_t tau = cov.tau;
    double max_diag = 0.0;
    for (std::int64_t i = 0; i < p; ++i)
        max_diag = std::max(max_diag, cov.bands[0][static_cast<std::size_t>(i)]);
    const double pivot_tol = 1e-10 * max_diag;

    BandedCholesky chol;
    chol.p = p;
    chol.tau = tau;
    chol.bands.resize(static_cast<std::size_t>(tau));
    for (std::int64_t d = 0; d < tau; ++d)
        chol.bands[static_cast<std::size_t>(d)].assign(static_cast<std::size_t>(p - d), 0.0);

    auto L = [&chol](std::int64_t i, std::int64_t j) -> double& {
        return chol.bands[static_cast<std::size_t>(i - j)][static_cast<std::size_t>(j)];
    };

    for (std::int64_t j = 0; j < p; ++j) {
        const std::int64_t iend = std::min(j + tau, p);
        for (std::int64_t i = j; i < iend; ++i) {
            double s = cov.entry(i, j);
            const std::int64_t kbeg = std::max<std::int64_t>(0, i - tau + 1);
            for (std::int64_t k = kbeg; k < j; ++k) s -= L(i, k) * L(j, k);
            if (i == j) {
                if (!(s > pivot_tol))
                    throw DataError("banded covariance is not positive definite: leading minor of order " +
                                    std::to_string(j + 1) + " failed");
                L(j, j) = std::sqrt(s);
            } else {
                L(i, j) = s / L(j, j);
            }
        }
    }
    return chol;
}

void EnsembleSpec::validate() const {
    if (n < 1 || p < 1) throw ParameterError("ensemble: n and p must be positive");
    if (n > (std::int64_t{1} << 31) || p > (std::int64_t{1} << 31) ||
        n * p > (std::int64_t{1} << 33))
        throw ParameterError("ensemble: matrix size overflow");
    switch (family) {
        case Family::gaussian:
            if (!(sd > 0.0)) throw ParameterError("gaussian ensemble: sd must be positive");
            break;
        case Family::scaled_gaussian:
        case Family::rademacher:
        case Family::sparse_ternary:
            break;
        case Family::banded_gaussian:
            if (!cov) throw ParameterError("banded-gaussian ensemble: missing covariance spec");
            cov->validate_shape();
            if (cov->p != p) throw ParameterError("banded-gaussian ensemble: covariance p mismatch");
            if (!mu.empty() && static_cast<std::int64_t>(mu.size()) != p)
                throw ParameterError("banded-gaussian ensemble: mean vector must have length p");
            break;
        case Family::block_gaussian:
            if (block_size < 1 || num_blocks < 1)
                throw ParameterError("block-gaussian ensemble: block_size and num_blocks must be positive");
            if (block_size * num_blocks != p)
                throw ParameterError("block-gaussian ensemble: p must equal block_size * num_blocks");
            break;
    }
}

namespace {

// Fill column j of out from its derived stream.
void fill_iid_column(const EnsembleSpec& spec, std::uint64_t seed, std::int64_t j, double* out) {
    rng::Stream stream(rng::derive_stream(seed, static_cast<std::uint64_t>(j)));
    const std::int64_t n = spec.n;
    switch (spec.family) {
        case Family::gaussian: {
            for (std::int64_t i = 0; i < n; ++i)
                out[i] = spec.mean + spec.sd * stream.next_normal();
            break;
        }
        case Family::scaled_gaussian: {
            const double s = 1.0 / std::sqrt(static_cast<double>(n));
            for (std::int64_t i = 0; i < n; ++i) out[i] = s * stream.next_normal();
            break;
        }
        case Family::rademacher: {
            const double s = 1.0 / std::sqrt(static_cast<double>(n));
            for (std::int64_t i = 0; i < n; ++i)
                out[i] = (stream.next_u64() >> 63) ? s : -s;
            break;
        }
        case Family::sparse_ternary: {
            const double s = std::sqrt(3.0 / static_cast<double>(n));
            for (std::int64_t i = 0; i < n; ++i) {
                const double u = stream.next_unit();
                out[i] = u <= 1.0 / 6.0 ? s : (u <= 1.0 / 3.0 ? -s : 0.0);
            }
            break;
        }
        default:
            throw ParameterError("fill_iid_column: not an i.i.d. family");
    }
}

}  // namespace

DataMatrix gen_iid(const EnsembleSpec& spec, std::uint64_t seed) {
    spec.validate();
    if (spec.family == Family::banded_gaussian || spec.family == Family::block_gaussian)
        throw ParameterError("gen_iid: family is not an i.i.d. family");
    DataMatrix X;
    X.n = spec.n;
    X.p = spec.p;
    X.values.resize(static_cast<std::size_t>(spec.n * spec.p));
    for (std::int64_t j = 0; j < spec.p; ++j) fill_iid_column(spec, seed, j, X.col(j));
    X.provenance = {Provenance::Kind::ensemble, spec, seed, {}};
    return X;
}

DataMatrix gen_banded_gaussian(const EnsembleSpec& spec, std::uint64_t seed) {
    spec.validate();
    if (spec.family != Family::banded_gaussian)
        throw ParameterError("gen_banded_gaussian: family mismatch");
    const BandedCholesky chol = banded_cholesky(*spec.cov);
    const std::int64_t n = spec.n, p = spec.p, tau = chol.tau;

    // Standard-normal field z, column-keyed like the i.i.d. generators.
    std::vector<double> z(static_cast<std::size_t>(n * p));
    for (std::int64_t j = 0; j < p; ++j) {
        rng::Stream stream(rng::derive_stream(seed, static_cast<std::uint64_t>(j)));
        double* col = z.data() + j * n;
        for (std::int64_t i = 0; i < n; ++i) col[i] = stream.next_normal();
    }

    // Row transform x_i = mu + L z_i, accumulated column by column: O(n p tau).
    DataMatrix X;
    X.n = n;
    X.p = p;
    X.values.assign(static_cast<std::size_t>(n * p), 0.0);
    for (std::int64_t j = 0; j < p; ++j) {
        double* out = X.col(j);
        const double mu_j = spec.mu.empty() ? 0.0 : spec.mu[static_cast<std::size_t>(j)];
        for (std::int64_t i = 0; i < n; ++i) out[i] = mu_j;
        const std::int64_t dmax = std::min(tau - 1, j);
        for (std::int64_t d = 0; d <= dmax; ++d) {
            const std::int64_t k = j - d;  // z column index; L_{j,k}
            const double l = chol.bands[static_cast<std::size_t>(d)][static_cast<std::size_t>(k)];
            if (l == 0.0) continue;
            const double* zk = z.data() + k * n;
            for (std::int64_t i = 0; i < n; ++i) out[i] += l * zk[i];
        }
    }
    X.provenance = {Provenance::Kind::ensemble, spec, seed, {}};
    return X;
}

DataMatrix gen_block_counterexample(std::int64_t block_size, std::int64_t num_blocks,
                                    std::int64_t n, std::uint64_t seed) {
    EnsembleSpec spec;
    spec.family = Family::block_gaussian;
    spec.n = n;
    spec.p = block_size * num_blocks;
    spec.block_size = block_size;
    spec.num_blocks = num_blocks;
    spec.validate();

    // m underlying N(0,1) values per row, each repeated block_size times.
    DataMatrix X;
    X.n = n;
    X.p = spec.p;
    X.values.resize(static_cast<std::size_t>(n * spec.p));
    for (std::int64_t b = 0; b < num_blocks; ++b) {
        rng::Stream stream(rng::derive_stream(seed, static_cast<std::uint64_t>(b)));
        double* first = X.col(b * block_size);
        for (std::int64_t i = 0; i < n; ++i) first[i] = stream.next_normal();
        for (std::int64_t r = 1; r < block_size; ++r)
            std::copy(first, first + n, X.col(b * block_size + r));
    }
    X.provenance = {Provenance::Kind::ensemble, spec, seed, {}};
    return X;
}

DataMatrix generate(const EnsembleSpec& spec, std::uint64_t seed) {
    spec.validate();
    switch (spec.family) {
        case Family::banded_gaussian:
            return gen_banded_gaussian(spec, seed);
        case Family::block_gaussian:
            return gen_block_counterexample(spec.block_size, spec.num_blocks, spec.n, seed);
        default:
            return gen_iid(spec, seed);
    }
}

}  // namespace cohere
