#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "alertzone/alertzone.hpp"

namespace az = alertzone;
namespace bench = alertzone::bench;

namespace {

struct ExperimentFlags {
    std::string config_path;
    std::optional<std::size_t> n;
    std::optional<std::string> algorithm;
    std::optional<int> depth;
    std::optional<double> a;
    std::optional<double> b;
    std::vector<double> fractions;
    std::optional<double> noise;
    std::optional<std::size_t> trials;
    std::optional<std::uint64_t> seed;
    std::optional<std::size_t> zones;
    std::optional<std::string> sampling;
    bool timing = false;
    std::optional<double> alpha;
    std::optional<double> c;
    std::optional<std::uint64_t> walks;
    std::optional<std::uint64_t> evolve_steps;
    std::optional<std::uint64_t> workload;
    std::optional<std::uint64_t> reencode;
    std::string out;

    void attach(CLI::App* app, bool with_dynamics) {
        app->add_option("--config", config_path, "JSON experiment config");
        app->add_option("--n", n, "grid cells");
        app->add_option("--algorithm", algorithm, "GO, MSGO, SGO, HGE or RANDOM");
        app->add_option("--depth", depth, "GO/MSGO depth (0 = full for GO)");
        app->add_option("--a", a, "sigmoid inflection");
        app->add_option("--b", b, "sigmoid gradient");
        app->add_option("--fractions", fractions, "alert fractions")->delimiter(',');
        app->add_option("--noise", noise, "maximum probability noise u");
        app->add_option("--trials", trials, "number of trials");
        app->add_option("--seed", seed, "master seed");
        app->add_option("--zones", zones, "zones per fraction");
        app->add_option("--sampling", sampling, "weighted or uniform");
        app->add_flag("--timing", timing, "record encoder wall time");
        app->add_option("--out", out, "CSV output file (default stdout)");
        if (with_dynamics) {
            app->add_option("--alpha", alpha, "damping for the estimator chain");
            app->add_option("--c", c, "walk continuation probability");
            app->add_option("--walks", walks, "Monte Carlo walks");
            app->add_option("--evolve-steps", evolve_steps, "uniform steps before re-encoding");
            app->add_option("--workload", workload, "zones scored after re-encoding");
            app->add_option("--reencode-interval", reencode, "re-encode every this many workload zones (0 = once)");
        }
    }

    [[nodiscard]] bench::ExperimentConfig resolve() const {
        bench::ExperimentConfig cfg = config_path.empty() ? bench::ExperimentConfig{} : bench::load_config(config_path);
        if (n) cfg.n = *n;
        if (algorithm) cfg.algorithm = bench::parse_algorithm(*algorithm);
        if (depth) cfg.depth = *depth;
        if (a) cfg.a = *a;
        if (b) cfg.b = *b;
        if (!fractions.empty()) cfg.fractions = fractions;
        if (noise) cfg.noise = *noise;
        if (trials) cfg.trials = *trials;
        if (seed) cfg.seed = *seed;
        if (zones) cfg.zones_per_fraction = *zones;
        if (sampling) {
            if (*sampling == "weighted") cfg.sampling = bench::Sampling::weighted;
            else if (*sampling == "uniform") cfg.sampling = bench::Sampling::uniform;
            else throw bench::ConfigError("sampling must be 'weighted' or 'uniform'");
        }
        if (timing) cfg.timing = true;
        if (alpha) cfg.dynamics.alpha = *alpha;
        if (c) cfg.dynamics.c = *c;
        if (walks) cfg.dynamics.walks = *walks;
        if (evolve_steps) cfg.dynamics.evolve_steps = *evolve_steps;
        if (workload) cfg.dynamics.workload_zones = *workload;
        if (reencode) cfg.dynamics.reencode_interval = *reencode;
        cfg.validate();
        return cfg;
    }
};

void emit(const bench::ExperimentReport& report, const std::string& path) {
    if (path.empty()) {
        bench::write_csv(std::cout, report.rows);
    } else {
        std::ofstream out(path);
        if (!out) throw std::runtime_error("cannot write '" + path + "'");
        bench::write_csv(out, report.rows);
    }
    for (const auto& f : report.failures) std::cerr << "failed " << f << '\n';
}

std::vector<double> parse_list(const std::string& text) {
    std::vector<double> out;
    std::stringstream in(text);
    std::string item;
    while (std::getline(in, item, ',')) out.push_back(std::stod(item));
    return out;
}

az::Grid grid_from(std::size_t n, const std::string& probabilities, double a, double b, std::uint64_t seed) {
    if (!probabilities.empty()) {
        const auto p = parse_list(probabilities);
        if (p.size() != n) throw bench::ConfigError("--probabilities must list exactly n values");
        return az::Grid::lattice(n, p);
    }
    const az::Grid geometry = az::Grid::lattice(n);
    return geometry.with_probabilities(bench::gen_probabilities(geometry, {a, b, seed, std::nullopt}));
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Gray-code grid encodings and HVE token costs for alert zones"};
    app.require_subcommand(1);

    // encode
    auto* encode = app.add_subcommand("encode", "build a grid encoding and print it");
    std::size_t enc_n = 16;
    std::string enc_algorithm = "GO";
    int enc_depth = 0;
    std::uint64_t enc_seed = 1;
    double enc_a = 0.75;
    double enc_b = 10.0;
    std::string enc_probabilities;
    std::string enc_out;
    encode->add_option("--n", enc_n, "grid cells");
    encode->add_option("--algorithm", enc_algorithm, "GO, MSGO, SGO, HGE or RANDOM");
    encode->add_option("--depth", enc_depth, "depth for GO/MSGO");
    encode->add_option("--seed", enc_seed, "rng seed");
    encode->add_option("--a", enc_a, "sigmoid inflection");
    encode->add_option("--b", enc_b, "sigmoid gradient");
    encode->add_option("--probabilities", enc_probabilities, "comma-separated cell probabilities");
    encode->add_option("--out", enc_out, "output file");

    // tokens
    auto* tokens = app.add_subcommand("tokens", "minimize the token set of an alert zone");
    std::string tok_encoding;
    std::string tok_zone;
    bool tok_per_cycle = false;
    tokens->add_option("--encoding", tok_encoding, "encoding file written by 'encode'")->required();
    tokens->add_option("--zone", tok_zone, "comma-separated cell ids")->required();
    tokens->add_flag("--per-cycle", tok_per_cycle, "one token per complete cycle instead of a minimized cover");

    ExperimentFlags bench_flags;
    auto* benchmark = app.add_subcommand("benchmark", "compare an encoder against HGE (CSV)");
    bench_flags.attach(benchmark, false);

    ExperimentFlags sweep_flags;
    std::vector<int> sweep_depths;
    auto* sweep = app.add_subcommand("depth-sweep", "GO improvement by seeding depth (CSV)");
    sweep_flags.attach(sweep, false);
    sweep->add_option("--depths", sweep_depths, "depths to run (default 1..k)")->delimiter(',');

    ExperimentFlags timing_flags;
    auto* timing = app.add_subcommand("timing", "encoder wall time (CSV)");
    timing_flags.attach(timing, false);

    // dynamics
    auto* dynamics = app.add_subcommand("dynamics", "Markov model of zone evolution");
    dynamics->require_subcommand(1);
    auto* stationary = dynamics->add_subcommand("stationary", "stationary distribution of a small model");
    std::size_t dyn_n = 2;
    std::string dyn_probabilities;
    std::string dyn_model = "independent";
    std::optional<double> dyn_alpha;
    std::string dyn_method = "exact";
    std::uint64_t dyn_walks = 100000;
    double dyn_c = 0.6;
    std::uint64_t dyn_seed = 1;
    bool dyn_marginals = false;
    stationary->add_option("--n", dyn_n, "grid cells (at most 20)");
    stationary->add_option("--probabilities", dyn_probabilities, "comma-separated cell probabilities");
    stationary->add_option("--model", dyn_model, "independent, spatial or uniform");
    stationary->add_option("--alpha", dyn_alpha, "damping factor");
    stationary->add_option("--method", dyn_method, "exact or monte-carlo");
    stationary->add_option("--walks", dyn_walks, "Monte Carlo walks");
    stationary->add_option("--c", dyn_c, "walk continuation probability");
    stationary->add_option("--seed", dyn_seed, "rng seed");
    stationary->add_flag("--marginals", dyn_marginals, "print cell marginals instead of state probabilities");
    ExperimentFlags compare_flags;
    auto* compare = dynamics->add_subcommand("compare", "static versus marginal-fed encoding (CSV)");
    compare_flags.attach(compare, true);

    // hve-demo
    auto* demo = app.add_subcommand("hve-demo", "encrypt one attribute and query it with one pattern");
    int demo_width = 4;
    std::string demo_attribute = "0101";
    std::string demo_pattern = "01*1";
    std::uint64_t demo_seed = 1;
    int demo_bits = 32;
    demo->add_option("--width", demo_width, "codeword width");
    demo->add_option("--attribute", demo_attribute, "attribute bits, msb first");
    demo->add_option("--pattern", demo_pattern, "pattern over 0, 1 and *");
    demo->add_option("--seed", demo_seed, "rng seed");
    demo->add_option("--prime-bits", demo_bits, "bit length of each group prime (3..32)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    }

    try {
        if (*encode) {
            const az::Grid grid = grid_from(enc_n, enc_probabilities, enc_a, enc_b, enc_seed);
            const auto algorithm = bench::parse_algorithm(enc_algorithm);
            if (algorithm == bench::Algorithm::MSGO && enc_depth == 0) enc_depth = 1;
            const az::GridEncoding e = bench::encode(algorithm, grid, enc_depth, enc_seed);
            az::EncodingHeader header{enc_n, e.width(), enc_algorithm, {}, enc_seed};
            if (enc_depth != 0) header.params["depth"] = std::to_string(enc_depth);
            if (enc_out.empty()) {
                az::write_encoding(std::cout, e, header);
            } else {
                std::ofstream out(enc_out);
                if (!out) throw std::runtime_error("cannot write '" + enc_out + "'");
                az::write_encoding(out, e, header);
            }
        } else if (*tokens) {
            std::ifstream in(tok_encoding);
            if (!in) throw bench::ConfigError("cannot open encoding '" + tok_encoding + "'");
            az::EncodingHeader header;
            const az::GridEncoding e = az::read_encoding(in, &header);
            std::vector<std::uint32_t> cells;
            for (double x : parse_list(tok_zone)) cells.push_back(static_cast<std::uint32_t>(x));
            const az::AlertZone zone(cells);
            const az::TokenSet ts = tok_per_cycle ? az::per_cycle_tokens(zone, e) : az::minimize(zone, e);
            az::write_token_set(std::cout, ts, zone.size(), header.algorithm);
        } else if (*benchmark) {
            emit(bench::run_experiment(bench_flags.resolve()), bench_flags.out);
        } else if (*sweep) {
            emit(bench::run_depth_sweep(sweep_flags.resolve(), sweep_depths), sweep_flags.out);
        } else if (*timing) {
            emit(bench::run_timing(timing_flags.resolve()), timing_flags.out);
        } else if (*stationary) {
            const az::Grid grid = grid_from(dyn_n, dyn_probabilities, 0.75, 10.0, dyn_seed);
            az::TransitionMatrix q = dyn_model == "independent" ? az::build_q_independent(grid)
                                     : dyn_model == "spatial"   ? az::build_q_spatial(grid)
                                     : dyn_model == "uniform"   ? az::build_q_uniform(static_cast<int>(dyn_n))
                                                                : throw bench::ConfigError("unknown model '" + dyn_model + "'");
            if (dyn_alpha) q = az::damp(q, *dyn_alpha);
            az::StationaryDistribution s;
            if (dyn_method == "exact") s = az::stationary_exact(q);
            else if (dyn_method == "monte-carlo") s = az::stationary_monte_carlo(q, dyn_walks, dyn_c, dyn_seed);
            else throw bench::ConfigError("unknown method '" + dyn_method + "'");
            const az::StateSpace space(static_cast<int>(dyn_n));
            if (dyn_marginals) az::write_marginals(std::cout, az::cell_marginals(s, space));
            else az::write_distribution(std::cout, s, space);
        } else if (*compare) {
            emit(bench::run_dynamic(compare_flags.resolve()), compare_flags.out);
        } else if (*demo) {
            using namespace alertzone::hve;
            const az::Codeword attribute = az::Codeword::parse(demo_attribute);
            const az::Pattern pattern = az::Pattern::parse(demo_pattern);
            if (attribute.width != demo_width || pattern.width != demo_width) {
                throw bench::ConfigError("attribute and pattern must both have width " + std::to_string(demo_width));
            }
            az::SplitMix64 rng(demo_seed);
            const ReferenceHve scheme{ReferenceGroup(GroupParams::generate(demo_bits, rng()))};
            const auto keys = scheme.setup(demo_width, rng);
            const MessageSpace<ReferenceGroup> messages(scheme.group(), 1, rng());
            const auto c = scheme.encrypt(keys.pk, attribute, messages.message(0), rng);
            const auto tk = scheme.gen_token(keys.sk, pattern, rng);
            const auto r = scheme.query(c, tk, messages);
            std::cout << "attribute=" << attribute.to_string() << " pattern=" << pattern.to_string()
                      << " match=" << (r.matched() ? "yes" : "no") << " pairings=" << r.pairings << '\n';
        }
    } catch (const bench::ConfigError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
