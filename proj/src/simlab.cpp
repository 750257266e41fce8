#include "cohere/simlab.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "cohere/covtest.hpp"
#include "cohere/errors.hpp"
#include "cohere/evtlaw.hpp"
#include "cohere/parallel.hpp"
#include "cohere/rng.hpp"

namespace cohere {

void SimulationConfig::resolve() {
    if (replicates < 1) throw ParameterError("simulate: replicates must be positive");
    if (kind != StatKind::L && kind != StatKind::L_tilde)
        throw ParameterError("simulate: statistic kind must be L or L_tilde");
    switch (scenario) {
        case Scenario::iid:
            if (n < 1 || p < 1) throw ParameterError("simulate: n and p must be positive");
            if (iid_family == Family::banded_gaussian || iid_family == Family::block_gaussian)
                throw ParameterError("simulate: iid scenario needs an i.i.d. family");
            break;
        case Scenario::banded:
            if (!cov) throw ParameterError("simulate: banded scenario needs a covariance spec");
            if (n < 1) throw ParameterError("simulate: n must be positive");
            if (p == 0) p = cov->p;
            if (p != cov->p) throw ParameterError("simulate: p inconsistent with covariance spec");
            break;
        case Scenario::remark23:
            if (n < 1) throw ParameterError("simulate: n must be positive");
            if (p == 0) p = 2 * n;
            if (tau == 1) tau = n;
            if (p != 2 * n || tau != n)
                throw ParameterError("simulate: remark23 forces p = 2n and tau = n");
            break;
        case Scenario::remark24:
            if (n < 1 || block_size < 1 || num_blocks < 1)
                throw ParameterError("simulate: remark24 needs n, block_size, num_blocks");
            if (p == 0) p = block_size * num_blocks;
            if (tau == 1) tau = block_size;
            if (p != block_size * num_blocks || tau != block_size)
                throw ParameterError("simulate: remark24 forces p = block_size * num_blocks and tau = block_size");
            break;
    }
    if (p < tau + 1) throw ParameterError("simulate: no admissible pair (p < tau + 1)");
    if (alpha && !(*alpha > 0.0 && *alpha < 1.0))
        throw ParameterError("simulate: alpha must lie in (0, 1)");
}

namespace {

DataMatrix generate_replicate(const SimulationConfig& cfg, std::uint64_t seed) {
    EnsembleSpec spec;
    spec.n = cfg.n;
    spec.p = cfg.p;
    switch (cfg.scenario) {
        case SimulationConfig::Scenario::iid:
            spec.family = cfg.iid_family;
            return gen_iid(spec, seed);
        case SimulationConfig::Scenario::banded:
            spec.family = Family::banded_gaussian;
            spec.cov = cfg.cov;
            return gen_banded_gaussian(spec, seed);
        case SimulationConfig::Scenario::remark23:
            spec.family = Family::gaussian;
            return gen_iid(spec, seed);
        case SimulationConfig::Scenario::remark24:
            return gen_block_counterexample(cfg.block_size, cfg.num_blocks, cfg.n, seed);
    }
    throw ParameterError("simulate: unknown scenario");
}

MeanMode replicate_mean_mode(const SimulationConfig& cfg) {
    // Scenario matrices are generated with zero means, so L_tilde uses mu = 0.
    return cfg.kind == StatKind::L ? MeanMode::Unknown() : MeanMode::Known({0.0});
}

}  // namespace

LawComparison compare_to_law(const std::vector<double>& values, double shift) {
    if (values.empty()) throw ParameterError("compare_to_law: empty input");
    std::vector<double> sorted(values);
    std::sort(sorted.begin(), sorted.end());
    const double N = static_cast<double>(sorted.size());
    double ks = 0.0;
    for (std::size_t k = 0; k < sorted.size(); ++k) {
        const double cdf = evtlaw::evt_cdf(sorted[k] - shift);
        ks = std::max(ks, std::max((static_cast<double>(k + 1)) / N - cdf,
                                   cdf - static_cast<double>(k) / N));
    }
    LawComparison c;
    c.ks_distance = ks;
    c.mean = std::accumulate(values.begin(), values.end(), 0.0) / N;
    c.shift_estimate = c.mean - (evtlaw::kLawMean + shift);
    return c;
}

SimulationReport simulate(const SimulationConfig& config) {
    SimulationConfig cfg = config;
    cfg.resolve();

    SimulationReport rep;
    if (cfg.replicates < 100)
        rep.warnings.push_back("fewer than 100 replicates; distribution summaries are noisy");

    const MeanMode mode = replicate_mean_mode(cfg);
    const std::optional<double> threshold =
        cfg.alpha ? std::optional<double>(evtlaw::test_threshold(*cfg.alpha, cfg.n, cfg.p))
                  : std::nullopt;

    rep.raw.assign(static_cast<std::size_t>(cfg.replicates), 0.0);
    rep.transformed.assign(static_cast<std::size_t>(cfg.replicates), 0.0);
    std::vector<unsigned char> rejected(static_cast<std::size_t>(cfg.replicates), 0);

    // Replicate-level parallelism; each replicate's statistic is computed
    // single-threaded and lands in its own slot, so worker count cannot
    // change the report.
    KernelOptions kernel_opts;
    kernel_opts.threads = 1;
    parallel_for(cfg.replicates, cfg.threads, [&](std::int64_t r) {
        const std::uint64_t seed_r = rng::derive_stream(cfg.master_seed, static_cast<std::uint64_t>(r));
        const DataMatrix X = generate_replicate(cfg, seed_r);
        const CoherenceResult c = coherence(X, cfg.tau, mode, kernel_opts);
        const evtlaw::EvtStatistic s = evtlaw::transform_statistic(c.value, cfg.n, cfg.p);
        rep.raw[static_cast<std::size_t>(r)] = c.value;
        rep.transformed[static_cast<std::size_t>(r)] = s.transformed;
        if (threshold) rejected[static_cast<std::size_t>(r)] = c.value * c.value >= *threshold;
    });

    const double log_p = std::log(static_cast<double>(cfg.p));
    switch (cfg.scenario) {
        case SimulationConfig::Scenario::remark23:
            rep.target_shift = -std::log(16.0);
            break;
        case SimulationConfig::Scenario::remark24:
            rep.target_shift = -16.0 * std::log(log_p);
            break;
        default:
            rep.target_shift = 0.0;
    }

    const LawComparison cmp = compare_to_law(rep.transformed, rep.target_shift);
    rep.ks_distance = cmp.ks_distance;
    rep.mean_transformed = cmp.mean;
    rep.shift_estimate = rep.mean_transformed - evtlaw::kLawMean;

    const double lln_scale = std::sqrt(static_cast<double>(cfg.n) / log_p);
    double ratio_sum = 0.0;
    for (double v : rep.raw) ratio_sum += lln_scale * v;
    rep.mean_lln_ratio = ratio_sum / static_cast<double>(cfg.replicates);

    if (threshold) {
        std::int64_t count = 0;
        for (unsigned char b : rejected) count += b;
        rep.rejection_rate = static_cast<double>(count) / static_cast<double>(cfg.replicates);
    }

    // 512-point ECDF for serialization; the KS above is exact at jump points.
    std::vector<double> sorted(rep.transformed);
    std::sort(sorted.begin(), sorted.end());
    const double lo = sorted.front() - 1.0, hi = sorted.back() + 1.0;
    rep.ecdf_grid.resize(512);
    rep.ecdf_values.resize(512);
    for (int g = 0; g < 512; ++g) {
        const double y = lo + (hi - lo) * static_cast<double>(g) / 511.0;
        rep.ecdf_grid[static_cast<std::size_t>(g)] = y;
        const auto it = std::upper_bound(sorted.begin(), sorted.end(), y);
        rep.ecdf_values[static_cast<std::size_t>(g)] =
            static_cast<double>(it - sorted.begin()) / static_cast<double>(sorted.size());
    }
    return rep;
}

}  // namespace cohere
