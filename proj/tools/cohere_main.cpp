// cohere — coherence statistics of large random matrices: seeded ensemble
// generation, banded/independence covariance tests, MIP certification for
// compressed sensing, and a Monte Carlo verification harness. All reports are
// single-line JSON on stdout; errors are single-line JSON on stderr.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "cohere/coherence.hpp"
#include "cohere/covtest.hpp"
#include "cohere/csmip.hpp"
#include "cohere/errors.hpp"
#include "cohere/evtlaw.hpp"
#include "cohere/io.hpp"
#include "cohere/jsonw.hpp"
#include "cohere/randmat.hpp"
#include "cohere/simlab.hpp"

namespace {

using namespace cohere;

int default_threads() {
    if (const char* env = std::getenv("COHERE_THREADS")) {
        const int v = std::atoi(env);
        if (v > 0) return v;
    }
    return 0;  // hardware
}

Family parse_family(const std::string& name) {
    if (name == "gaussian") return Family::gaussian;
    if (name == "scaled-gaussian") return Family::scaled_gaussian;
    if (name == "rademacher") return Family::rademacher;
    if (name == "sparse-ternary") return Family::sparse_ternary;
    if (name == "banded-gaussian") return Family::banded_gaussian;
    if (name == "block-gaussian") return Family::block_gaussian;
    throw ParameterError("unknown family: " + name);
}

EntryFamily parse_entry_family(const std::string& name) {
    if (name == "gaussian" || name == "scaled-gaussian") return EntryFamily::gaussian;
    if (name == "rademacher") return EntryFamily::rademacher;
    if (name == "ternary" || name == "sparse-ternary") return EntryFamily::ternary;
    throw ParameterError("unknown entry family: " + name);
}

std::vector<double> parse_value_list(const std::string& csv) {
    std::vector<double> out;
    std::size_t start = 0;
    while (start <= csv.size()) {
        const std::size_t pos = csv.find(',', start);
        const std::string tok =
            pos == std::string::npos ? csv.substr(start) : csv.substr(start, pos - start);
        if (!tok.empty()) {
            try {
                std::size_t used = 0;
                out.push_back(std::stod(tok, &used));
                if (used != tok.size()) throw std::invalid_argument(tok);
            } catch (const std::exception&) {
                throw ParameterError("bad numeric list entry: '" + tok + "'");
            }
        }
        if (pos == std::string::npos) break;
        start = pos + 1;
    }
    if (out.empty()) throw ParameterError("empty numeric list");
    return out;
}

struct VectorFlag {
    double scalar = 0.0;
    std::string file;
    bool scalar_set = false;

    std::vector<double> resolve(double fallback) const {
        if (!file.empty()) return io::read_vector(file);
        return {scalar_set ? scalar : fallback};
    }
};

// Band file: line d holds the comma-separated offset-d band (length p - d).
BandedCovSpec read_band_file(const std::string& path, std::int64_t p) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open band file: " + path);
    BandedCovSpec cov;
    cov.p = p;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty() || line == "\r") continue;
        cov.bands.push_back(parse_value_list(line));
    }
    cov.tau = static_cast<std::int64_t>(cov.bands.size());
    cov.validate_shape();
    return cov;
}

void emit_coherence(JsonWriter& w, const CoherenceResult& r) {
    w.begin_object();
    w.key("kind").value(stat_kind_name(r.kind));
    w.key("n").value(r.n);
    w.key("p").value(r.p);
    w.key("tau").value(r.tau);
    w.key("value").value(r.value);
    w.key("argmax").begin_array().value(r.i).value(r.j).end_array();
    w.end_object();
}

void emit_evt(JsonWriter& w, const evtlaw::EvtStatistic& s) {
    w.begin_object();
    w.key("raw").value(s.raw);
    w.key("n").value(s.n);
    w.key("p").value(s.p);
    w.key("transformed").value(s.transformed);
    w.key("pvalue").value(s.pvalue);
    w.key("lln_ratio").value(s.lln_ratio);
    w.end_object();
}

void emit_warnings(JsonWriter& w, const std::vector<std::string>& warnings) {
    w.begin_array();
    for (const std::string& s : warnings) w.value(s);
    w.end_array();
}

// ---- subcommand configs ----

struct GenerateArgs {
    std::string family = "gaussian";
    std::int64_t n = 0, p = 0;
    std::uint64_t seed = 0;
    std::string out, format;
    double mean = 0.0, sd = 1.0;
    std::string band_values, band_file;
    VectorFlag mu;
    std::int64_t block_size = 0, num_blocks = 0;
};

struct MatrixInArgs {
    std::string in, format;
};

int cmd_generate(const GenerateArgs& a) {
    EnsembleSpec spec;
    spec.family = parse_family(a.family);
    spec.n = a.n;
    spec.p = a.p;
    spec.mean = a.mean;
    spec.sd = a.sd;
    if (spec.family == Family::banded_gaussian) {
        if (!a.band_file.empty()) {
            spec.cov = read_band_file(a.band_file, a.p);
        } else if (!a.band_values.empty()) {
            spec.cov = BandedCovSpec::constant(a.p, parse_value_list(a.band_values));
        } else {
            throw ParameterError("banded-gaussian requires --band-values (e.g. \"1,0.4\") or --band-file");
        }
        const std::vector<double> mu = a.mu.resolve(0.0);
        if (mu.size() == 1) {
            if (mu[0] != 0.0) spec.mu.assign(static_cast<std::size_t>(a.p), mu[0]);
        } else {
            spec.mu = mu;
        }
    }
    if (spec.family == Family::block_gaussian) {
        spec.block_size = a.block_size;
        spec.num_blocks = a.num_blocks;
        if (spec.p == 0) spec.p = a.block_size * a.num_blocks;
    }
    const DataMatrix X = generate(spec, a.seed);
    io::write_matrix(a.out, X, a.format);

    JsonWriter w;
    w.begin_object();
    w.key("written").value(a.out);
    w.key("family").value(family_name(spec.family));
    w.key("n").value(X.n);
    w.key("p").value(X.p);
    w.key("seed").value(a.seed);
    w.end_object();
    std::cout << w.str() << "\n";
    return 0;
}

MeanMode make_mode(const std::string& mode, const VectorFlag& mu, const VectorFlag& sigma,
                   bool want_sigma) {
    if (mode == "unknown") return MeanMode::Unknown();
    if (mode != "known") throw ParameterError("--mean-mode must be 'unknown' or 'known'");
    std::vector<double> sig;
    if (want_sigma || sigma.scalar_set || !sigma.file.empty()) sig = sigma.resolve(1.0);
    return MeanMode::Known(mu.resolve(0.0), sig);
}

int run_cli(int argc, char** argv) {
    CLI::App app{"coherence statistics of random matrices"};
    app.require_subcommand(1);
    app.fallthrough(true);
    int threads = default_threads();
    std::int64_t block_edge = 256;
    app.add_option("--threads", threads, "worker threads (default: COHERE_THREADS or hardware)");
    app.add_option("--block-edge", block_edge, "pairwise kernel column block edge")
        ->check(CLI::PositiveNumber);

    // generate
    GenerateArgs gen;
    auto* c_gen = app.add_subcommand("generate", "generate a seeded ensemble matrix");
    c_gen->add_option("--family", gen.family,
                      "gaussian|scaled-gaussian|rademacher|sparse-ternary|banded-gaussian|block-gaussian");
    c_gen->add_option("--n", gen.n, "rows (observations)")->required();
    c_gen->add_option("--p", gen.p, "columns (variables)");
    c_gen->add_option("--seed", gen.seed, "master seed")->required();
    c_gen->add_option("--out", gen.out, "output path (.csv or .bin)")->required();
    c_gen->add_option("--format", gen.format, "csv|bin (default: by extension)");
    c_gen->add_option("--mean", gen.mean, "gaussian mean");
    c_gen->add_option("--sd", gen.sd, "gaussian sd");
    c_gen->add_option("--band-values", gen.band_values, "constant band values, offset 0..tau-1");
    c_gen->add_option("--mu", gen.mu.scalar, "mean (banded)")->each([&](const std::string&) {
        gen.mu.scalar_set = true;
    });
    c_gen->add_option("--mu-file", gen.mu.file, "mean vector file (banded)");
    c_gen->add_option("--block-size", gen.block_size, "block-gaussian block size");
    c_gen->add_option("--num-blocks", gen.num_blocks, "block-gaussian number of blocks");

    // coherence
    MatrixInArgs coh_in;
    std::int64_t coh_tau = 1;
    std::string coh_mode = "unknown", coh_stat = "normalized";
    VectorFlag coh_mu, coh_sigma;
    auto* c_coh = app.add_subcommand("coherence", "compute a coherence statistic");
    c_coh->add_option("--in", coh_in.in, "input matrix")->required();
    c_coh->add_option("--format", coh_in.format, "csv|bin");
    c_coh->add_option("--tau", coh_tau, "bandwidth mask (1 = all off-diagonal pairs)");
    c_coh->add_option("--mean-mode", coh_mode, "unknown|known");
    c_coh->add_option("--mu", coh_mu.scalar, "known mean")->each([&](const std::string&) {
        coh_mu.scalar_set = true;
    });
    c_coh->add_option("--mu-file", coh_mu.file, "known mean vector file");
    c_coh->add_option("--sigma", coh_sigma.scalar, "known sd")->each([&](const std::string&) {
        coh_sigma.scalar_set = true;
    });
    c_coh->add_option("--sigma-file", coh_sigma.file, "known sd vector file");
    c_coh->add_option("--statistic", coh_stat, "normalized (L/L~) | gram (W/V/J/U)");

    // test
    MatrixInArgs test_in;
    std::int64_t test_tau = 1;
    double test_alpha = 0.05;
    std::string test_mode = "unknown";
    VectorFlag test_mu, test_sigma;
    auto* c_test = app.add_subcommand("test", "bandedness / independence test");
    c_test->add_option("--in", test_in.in, "input matrix")->required();
    c_test->add_option("--format", test_in.format, "csv|bin");
    c_test->add_option("--tau", test_tau, "bandwidth under H0 (1 = independence)");
    c_test->add_option("--alpha", test_alpha, "test size");
    c_test->add_option("--mean-mode", test_mode, "unknown|known");
    c_test->add_option("--mu", test_mu.scalar, "known mean")->each([&](const std::string&) {
        test_mu.scalar_set = true;
    });
    c_test->add_option("--mu-file", test_mu.file, "known mean vector file");

    // mip
    MatrixInArgs mip_in;
    VectorFlag mip_mu, mip_sigma;
    std::string mip_family;
    std::int64_t mip_kmax = 8;
    auto* c_mip = app.add_subcommand("mip", "certify the mutual incoherence property");
    c_mip->add_option("--in", mip_in.in, "input matrix")->required();
    c_mip->add_option("--format", mip_in.format, "csv|bin");
    c_mip->add_option("--mu", mip_mu.scalar, "known entry mean")->each([&](const std::string&) {
        mip_mu.scalar_set = true;
    });
    c_mip->add_option("--mu-file", mip_mu.file, "known mean vector file");
    c_mip->add_option("--sigma", mip_sigma.scalar, "known entry sd")->each([&](const std::string&) {
        mip_sigma.scalar_set = true;
    });
    c_mip->add_option("--sigma-file", mip_sigma.file, "known sd vector file");
    c_mip->add_option("--family", mip_family, "gaussian|rademacher|ternary (adds probability bounds)");
    c_mip->add_option("--k-max", mip_kmax, "largest k in the per-k bound table")
        ->check(CLI::PositiveNumber);

    // simulate
    std::string sim_scenario = "iid-gaussian", sim_kind = "L", sim_band_values, sim_dump;
    SimulationConfig sim;
    double sim_alpha = -1.0;
    auto* c_sim = app.add_subcommand("simulate", "Monte Carlo verification run");
    c_sim->add_option("--scenario", sim_scenario,
                      "iid-gaussian|iid-scaled-gaussian|iid-rademacher|iid-ternary|banded|remark23|remark24");
    c_sim->add_option("--n", sim.n, "rows per replicate")->required();
    c_sim->add_option("--p", sim.p, "columns per replicate");
    c_sim->add_option("--tau", sim.tau, "bandwidth mask");
    c_sim->add_option("--reps", sim.replicates, "replicates")->required();
    c_sim->add_option("--seed", sim.master_seed, "master seed")->required();
    c_sim->add_option("--alpha", sim_alpha, "also estimate the rejection rate at this size");
    c_sim->add_option("--kind", sim_kind, "L|L-tilde");
    c_sim->add_option("--band-values", sim_band_values, "banded scenario constant bands");
    c_sim->add_option("--block-size", sim.block_size, "remark24 block size");
    c_sim->add_option("--num-blocks", sim.num_blocks, "remark24 number of blocks");
    c_sim->add_option("--dump-values", sim_dump, "write per-replicate transformed values (CSV)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        JsonWriter w;
        w.begin_object();
        w.key("error").value("usage");
        w.key("detail").value(e.what());
        w.end_object();
        std::cerr << w.str() << "\n";
        return 1;
    }

    KernelOptions opts;
    opts.threads = threads;
    opts.block_edge = block_edge;

    if (c_gen->parsed()) return cmd_generate(gen);

    if (c_coh->parsed()) {
        const DataMatrix X = io::read_matrix(coh_in.in, coh_in.format);
        const bool gram = coh_stat == "gram";
        if (!gram && coh_stat != "normalized")
            throw ParameterError("--statistic must be 'normalized' or 'gram'");
        const MeanMode mode = make_mode(coh_mode, coh_mu, coh_sigma, gram);
        const CoherenceResult r =
            gram ? gram_offdiag_max(X, coh_tau, mode, opts) : coherence(X, coh_tau, mode, opts);
        JsonWriter w;
        emit_coherence(w, r);
        std::cout << w.str() << "\n";
        return 0;
    }

    if (c_test->parsed()) {
        const DataMatrix X = io::read_matrix(test_in.in, test_in.format);
        TestConfig cfg;
        cfg.tau = test_tau;
        cfg.alpha = test_alpha;
        cfg.mean_mode = make_mode(test_mode, test_mu, test_sigma, false);
        const TestResult r = run_test(X, cfg, opts);
        JsonWriter w;
        w.begin_object();
        w.key("statistic");
        emit_coherence(w, r.statistic);
        w.key("evt");
        emit_evt(w, r.evt);
        w.key("alpha").value(cfg.alpha);
        w.key("threshold_L2").value(r.threshold_L2);
        w.key("reject").value(r.reject);
        w.key("warnings");
        emit_warnings(w, r.warnings);
        w.end_object();
        std::cout << w.str() << "\n";
        return 0;
    }

    if (c_mip->parsed()) {
        const DataMatrix X = io::read_matrix(mip_in.in, mip_in.format);
        std::optional<EntryFamily> family;
        if (!mip_family.empty()) family = parse_entry_family(mip_family);
        const MipReport r = mip_certify(X, mip_mu.resolve(0.0), mip_sigma.resolve(1.0), family,
                                        mip_kmax, opts);
        JsonWriter w;
        w.begin_object();
        w.key("n").value(r.n);
        w.key("p").value(r.p);
        w.key("L_tilde").value(r.L_tilde);
        w.key("k_max").value(r.k_max);
        w.key("k_max_unbounded").value(r.unbounded);
        if (r.unbounded)
            w.key("note").value("all columns orthogonal at this n,p; every k certifies, reported up to the cap k <= n");
        w.key("k_cap").value(r.cap);
        w.key("family");
        if (r.family) w.value(entry_family_name(*r.family)); else w.null();
        w.key("table").begin_array();
        for (const auto& [k, b] : r.table) {
            w.begin_object();
            w.key("k").value(k);
            w.key("g_bound").value(b.g_bound);
            w.key("g_vacuous").value(b.g_vacuous);
            w.key("simplified_bound").value(b.simplified_bound);
            w.key("simplified_vacuous").value(b.simplified_vacuous);
            w.key("valid").value(b.valid);
            w.end_object();
        }
        w.end_array();
        w.end_object();
        std::cout << w.str() << "\n";
        return 0;
    }

    if (c_sim->parsed()) {
        if (sim_scenario == "iid-gaussian") {
            sim.scenario = SimulationConfig::Scenario::iid;
            sim.iid_family = Family::gaussian;
        } else if (sim_scenario == "iid-scaled-gaussian") {
            sim.scenario = SimulationConfig::Scenario::iid;
            sim.iid_family = Family::scaled_gaussian;
        } else if (sim_scenario == "iid-rademacher") {
            sim.scenario = SimulationConfig::Scenario::iid;
            sim.iid_family = Family::rademacher;
        } else if (sim_scenario == "iid-ternary") {
            sim.scenario = SimulationConfig::Scenario::iid;
            sim.iid_family = Family::sparse_ternary;
        } else if (sim_scenario == "banded") {
            sim.scenario = SimulationConfig::Scenario::banded;
            if (sim_band_values.empty())
                throw ParameterError("banded scenario requires --band-values");
            sim.cov = BandedCovSpec::constant(sim.p, parse_value_list(sim_band_values));
        } else if (sim_scenario == "remark23") {
            sim.scenario = SimulationConfig::Scenario::remark23;
        } else if (sim_scenario == "remark24") {
            sim.scenario = SimulationConfig::Scenario::remark24;
        } else {
            throw ParameterError("unknown scenario: " + sim_scenario);
        }
        if (sim_kind == "L") sim.kind = StatKind::L;
        else if (sim_kind == "L-tilde") sim.kind = StatKind::L_tilde;
        else throw ParameterError("--kind must be 'L' or 'L-tilde'");
        if (sim_alpha >= 0.0) sim.alpha = sim_alpha;
        sim.threads = threads;

        const SimulationReport r = simulate(sim);
        if (!sim_dump.empty()) io::write_values_csv(sim_dump, r.transformed);

        JsonWriter w;
        w.begin_object();
        w.key("scenario").value(sim_scenario);
        w.key("kind").value(sim_kind);
        w.key("n").value(sim.n);
        w.key("p").value(sim.p);
        w.key("tau").value(sim.tau);
        w.key("replicates").value(sim.replicates);
        w.key("master_seed").value(sim.master_seed);
        w.key("alpha");
        if (sim.alpha) w.value(*sim.alpha); else w.null();
        w.key("target_shift").value(r.target_shift);
        w.key("ks_distance").value(r.ks_distance);
        w.key("mean_transformed").value(r.mean_transformed);
        w.key("mean_lln_ratio").value(r.mean_lln_ratio);
        w.key("shift_estimate").value(r.shift_estimate);
        w.key("rejection_rate");
        if (r.rejection_rate) w.value(*r.rejection_rate); else w.null();
        w.key("warnings");
        emit_warnings(w, r.warnings);
        w.key("ecdf_grid").begin_array();
        for (double v : r.ecdf_grid) w.value(v);
        w.end_array();
        w.key("ecdf_values").begin_array();
        for (double v : r.ecdf_values) w.value(v);
        w.end_array();
        w.key("transformed").begin_array();
        for (double v : r.transformed) w.value(v);
        w.end_array();
        w.end_object();
        std::cout << w.str() << "\n";
        return 0;
    }

    return 1;
}

}  // namespace

int main(int argc, char** argv) {
    try {
        return run_cli(argc, argv);
    } catch (const cohere::ParameterError& e) {
        cohere::JsonWriter w;
        w.begin_object();
        w.key("error").value("parameter");
        w.key("detail").value(e.what());
        w.end_object();
        std::cerr << w.str() << "\n";
        return 1;
    } catch (const cohere::DataError& e) {
        cohere::JsonWriter w;
        w.begin_object();
        w.key("error").value("data");
        w.key("detail").value(e.what());
        w.end_object();
        std::cerr << w.str() << "\n";
        return 2;
    } catch (const cohere::NumericError& e) {
        cohere::JsonWriter w;
        w.begin_object();
        w.key("error").value("numeric");
        w.key("detail").value(e.what());
        w.end_object();
        std::cerr << w.str() << "\n";
        return 3;
    } catch (const std::exception& e) {
        cohere::JsonWriter w;
        w.begin_object();
        w.key("error").value("internal");
        w.key("detail").value(e.what());
        w.end_object();
        std::cerr << w.str() << "\n";
        return 3;
    }
}
