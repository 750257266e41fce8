#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace cohere {

enum class Family {
    gaussian,         // N(mean, sd^2) entries
    scaled_gaussian,  // N(0, 1/n) entries
    rademacher,       // +-1/sqrt(n) equiprobable
    sparse_ternary,   // +-sqrt(3/n) w.p. 1/6 each, 0 w.p. 2/3
    banded_gaussian,  // rows iid N_p(mu, Sigma), Sigma banded
    block_gaussian,   // rows with block-constant values (all-ones block covariance)
};

const char* family_name(Family f);

// Banded covariance, stored band by band: bands[d][i] = sigma_{i, i+d},
// d = 0..tau-1 (offset 0 is the diagonal). Entries with |i-j| >= tau are zero.
struct BandedCovSpec {
    std::int64_t p = 0;
    std::int64_t tau = 1;
    std::vector<std::vector<double>> bands;

    // Constant value per offset: band_values[d] fills bands[d].
    static BandedCovSpec constant(std::int64_t p, const std::vector<double>& band_values);

    double entry(std::int64_t i, std::int64_t j) const;  // full Sigma_{ij}
    void validate_shape() const;                         // throws ParameterError
};

// Banded lower Cholesky factor, same band layout: bands[d][i] = L_{i+d, i}.
// Throws DataError naming the failing leading minor when Sigma is not
// positive definite at the pivot tolerance 1e-10 * max(diagonal).
struct BandedCholesky {
    std::int64_t p = 0;
    std::int64_t tau = 1;
    std::vector<std::vector<double>> bands;
};
BandedCholesky banded_cholesky(const BandedCovSpec& cov);

struct EnsembleSpec {
    Family family = Family::gaussian;
    std::int64_t n = 0;
    std::int64_t p = 0;
    // gaussian
    double mean = 0.0;
    double sd = 1.0;
    // banded_gaussian
    std::optional<BandedCovSpec> cov;
    std::vector<double> mu;  // length p; empty means zero vector
    // block_gaussian
    std::int64_t block_size = 0;
    std::int64_t num_blocks = 0;

    void validate() const;  // throws ParameterError
};

struct Provenance {
    enum class Kind { ensemble, external };
    Kind kind = Kind::external;
    std::optional<EnsembleSpec> spec;
    std::uint64_t seed = 0;
    std::string path;
};

// n x p real matrix, column-major storage.
struct DataMatrix {
    std::int64_t n = 0;
    std::int64_t p = 0;
    std::vector<double> values;  // size n*p, column j at values[j*n .. j*n+n)
    Provenance provenance;

    const double* col(std::int64_t j) const { return values.data() + j * n; }
    double* col(std::int64_t j) { return values.data() + j * n; }
    double at(std::int64_t i, std::int64_t j) const { return values[j * n + i]; }
    double& at(std::int64_t i, std::int64_t j) { return values[j * n + i]; }
};

// Seeded generation. All generators are pure functions of (spec, seed):
// column j draws from the stream hash(seed, j), so output is bit-identical
// regardless of how generation is scheduled, and deleting a column leaves
// the others unchanged.
DataMatrix gen_iid(const EnsembleSpec& spec, std::uint64_t seed);
DataMatrix gen_banded_gaussian(const EnsembleSpec& spec, std::uint64_t seed);
DataMatrix gen_block_counterexample(std::int64_t block_size, std::int64_t num_blocks,
                                    std::int64_t n, std::uint64_t seed);
DataMatrix generate(const EnsembleSpec& spec, std::uint64_t seed);

}  // namespace cohere
