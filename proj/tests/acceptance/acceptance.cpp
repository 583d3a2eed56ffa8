// Acceptance suite: one PASS/FAIL line per criterion. Tolerances, seeds and
// runtime limits are fixed here.
//
//   acceptance                 run every criterion
//   acceptance --criterion N   run criterion N only

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <iostream>
#include <map>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "../oracles.hpp"
#include "alertzone/alertzone.hpp"

using namespace alertzone;
namespace bench = alertzone::bench;

namespace {

constexpr std::uint64_t kMasterSeed = 20240611;

struct Verdict {
    bool pass = true;
    std::string detail;
};

std::string fmt(double x, int digits = 4) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*f", digits, x);
    return buf;
}

std::string vec(const std::vector<double>& v, int digits = 4) {
    std::string out = "[";
    for (std::size_t i = 0; i < v.size(); ++i) out += (i ? ", " : "") + fmt(v[i], digits);
    return out + "]";
}

bool text_match(const std::string& attribute, const std::string& pattern) {
    for (std::size_t i = 0; i < pattern.size(); ++i) {
        if (pattern[i] != '*' && pattern[i] != attribute[i]) return false;
    }
    return true;
}

double max_dev(const std::vector<double>& got, const std::vector<double>& want) {
    double d = 0.0;
    for (std::size_t i = 0; i < got.size(); ++i) d = std::max(d, std::abs(got[i] - want[i]));
    return d;
}

Verdict hve_exhaustive() {
    using namespace alertzone::hve;
    std::size_t queries = 0;
    std::size_t wrong_match = 0;
    std::size_t wrong_pairings = 0;
    for (int k = 1; k <= 8; ++k) {
        const ReferenceHve scheme{ReferenceGroup(GroupParams::generate(32, kMasterSeed + static_cast<unsigned>(k)))};
        SplitMix64 rng(derive_seed(kMasterSeed, {1, static_cast<std::uint64_t>(k)}));
        const auto keys = scheme.setup(k, rng);
        const MessageSpace<ReferenceGroup> messages(scheme.group(), 4, rng());
        const std::uint32_t space = 1U << k;
        std::vector<Ciphertext<ReferenceGroup>> cts;
        for (std::uint32_t a = 0; a < space; ++a) {
            cts.push_back(scheme.encrypt(keys.pk, Codeword(a, k), messages.message(a % 4), rng));
        }
        for (std::uint32_t care = 0; care < space; ++care) {
            for (std::uint32_t value = care;; value = (value - 1) & care) {
                const Pattern p(care, value, k);
                const auto tk = scheme.gen_token(keys.sk, p, rng);
                const std::string text = p.to_string();
                for (std::uint32_t a = 0; a < space; ++a) {
                    const auto r = scheme.query(cts[a], tk, messages);
                    const bool expect = text_match(Codeword(a, k).to_string(), text);
                    ++queries;
                    if (r.matched() != expect || (expect && r.message != a % 4)) ++wrong_match;
                    if (r.pairings != 2U * static_cast<std::size_t>(std::popcount(care)) + 1U) ++wrong_pairings;
                }
                if (value == 0) break;
            }
        }
    }
    return {wrong_match == 0 && wrong_pairings == 0,
            std::to_string(queries) + " queries over widths 1..8, " + std::to_string(wrong_match) +
                " wrong outcomes, " + std::to_string(wrong_pairings) + " wrong pairing counts"};
}

Verdict stationary_reproduction() {
    const Grid g = Grid::lattice(2, {0.2, 0.8});
    const auto q = build_q_independent(g);
    const auto s = stationary_exact(q).s;
    const std::vector<double> s_want{0.4310, 0.0862, 0.3448, 0.1379};
    const auto o = damp(q, 0.85);
    const std::vector<std::vector<double>> o_want{{.0375, .2075, .7175, .0375},
                                                  {.2075, .0375, .0375, .7175},
                                                  {.7175, .0375, .0375, .2075},
                                                  {.8875, .0375, .0375, .0375}};
    double o_dev = 0.0;
    const auto od = o.dense();
    for (std::size_t i = 0; i < 4; ++i) o_dev = std::max(o_dev, max_dev(od[i], o_want[i]));
    const auto so = stationary_exact(o).s;
    const std::vector<double> so_want{0.4111, 0.1074, 0.3171, 0.1644};
    const auto t50 = marginal_distribution(o, {.25, .25, .25, .25}, 50);
    const double d1 = max_dev(s, s_want);
    const double d2 = max_dev(so, so_want);
    const double d3 = max_dev(t50, so_want);
    return {d1 <= 5e-4 && o_dev <= 1e-4 && d2 <= 5e-4 && d3 <= 1e-4,
            "Q2 s=" + vec(s) + " (dev " + fmt(d1, 6) + "), O2 entry dev " + fmt(o_dev, 6) + ", O2 s=" + vec(so) +
                " (dev " + fmt(d2, 6) + "), tO2^50 dev " + fmt(d3, 6)};
}

Verdict monte_carlo_agreement() {
    const auto o = damp(build_q_independent(Grid::lattice(2, {0.2, 0.8})), 0.85);
    const auto exact = stationary_exact(o).s;
    const auto mc = stationary_monte_carlo(o, 200000, 0.6, kMasterSeed).s;
    const double d = max_dev(mc, exact);
    return {d <= 0.01, "estimate " + vec(mc) + " vs exact " + vec(exact) + ", max deviation " + fmt(d)};
}

Verdict go_operation_count() {
    std::string detail;
    bool pass = true;
    std::mt19937_64 rng(kMasterSeed);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (std::size_t n : {4U, 8U, 16U, 32U}) {
        std::vector<double> p(n);
        for (auto& x : p) x = u(rng);
        OpCounter counter;
        static_cast<void>(gray_optimizer(Grid::lattice(n, p), {}, &counter));
        const double closed = std::pow(static_cast<double>(n), std::log2(3.0)) - 2.0 * static_cast<double>(n) + 1.0;
        const auto expected = static_cast<std::uint64_t>(std::llround(closed));
        pass &= counter.multiplications == expected && std::abs(closed - static_cast<double>(expected)) < 1e-6;
        detail += (detail.empty() ? "" : ", ") + ("n=" + std::to_string(n) + ": " + std::to_string(counter.multiplications) +
                                                  "/" + std::to_string(expected));
    }
    return {pass, detail};
}

Verdict go_stage_optimality() {
    std::mt19937_64 rng(kMasterSeed + 5);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::size_t stages = 0;
    std::size_t bad = 0;
    for (int trial = 0; trial < 100; ++trial) {
        std::vector<double> p(8);
        for (auto& x : p) x = u(rng);
        const Grid g = Grid::lattice(8, p);
        const GridEncoding e = gray_optimizer(g);
        for (const auto& s : oracle::stage_optimality(g, e, 0)) {
            ++stages;
            if (s.achieved < s.best - 1e-12 * std::max(1.0, std::abs(s.best))) ++bad;
        }
    }
    return {bad == 0, std::to_string(stages) + " stages checked over 100 vectors, " + std::to_string(bad) + " below the brute-force maximum"};
}

Verdict rank_matching_optimality() {
    std::mt19937_64 rng(kMasterSeed + 6);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::size_t bad = 0;
    for (int trial = 0; trial < 200; ++trial) {
        const std::size_t len = 1 + static_cast<std::size_t>(rng() % 8);
        std::vector<double> a(len), b(len);
        for (auto& x : a) x = u(rng);
        for (auto& x : b) x = u(rng);
        const auto match = rank_matching(a, b);
        double sum = 0.0;
        for (std::size_t i = 0; i < len; ++i) sum += a[i] * b[static_cast<std::size_t>(match[i])];
        if (sum < oracle::best_pairing_sum(a, b) - 1e-12) ++bad;
    }
    return {bad == 0, "200 weight pairs, " + std::to_string(bad) + " below the best permutation"};
}

Verdict token_minimization() {
    std::mt19937_64 rng(kMasterSeed + 7);
    std::size_t cost_mismatch = 0;
    std::size_t cover_mismatch = 0;
    for (int trial = 0; trial < 200; ++trial) {
        std::vector<std::uint32_t> on;
        for (std::uint32_t x = 0; x < 16; ++x) {
            if (rng() % 2) on.push_back(x);
        }
        if (on.empty()) on.push_back(static_cast<std::uint32_t>(rng() % 16));
        const std::vector<bool> dc(16, false);
        const auto ts = minimize_codewords(4, on, dc);
        const auto best = oracle::min_cover_cost(4, on, dc);
        if (ts.non_star_bits() != best.literals || ts.patterns.size() != best.patterns || ts.approximate) ++cost_mismatch;
        if (ts.covered != on) ++cover_mismatch;
    }
    return {cost_mismatch == 0 && cover_mismatch == 0,
            "200 zones at k=4, " + std::to_string(cost_mismatch) + " off the exhaustive optimum, " +
                std::to_string(cover_mismatch) + " inexact covers"};
}

std::string failures_note(const bench::ExperimentReport& r) {
    return r.failures.empty() ? "" : " (" + std::to_string(r.failures.size()) + " failed trials: " + r.failures.front() + ")";
}

Verdict improvement_bands() {
    bool pass = true;
    std::string detail;

    bench::ExperimentConfig go;
    go.n = 100;
    go.algorithm = bench::Algorithm::GO;
    go.fractions = {0.1, 0.2, 0.3, 0.4, 0.5, 0.6};
    go.trials = 20;
    go.seed = kMasterSeed;
    const auto go_report = bench::run_experiment(go);
    const auto go_means = bench::mean_by_fraction(go_report.rows);
    double go_mean = 0.0;
    double go_peak = -1e9;
    std::vector<double> go_curve;
    for (const auto& [f, m] : go_means) {
        go_mean += m / static_cast<double>(go_means.size());
        go_peak = std::max(go_peak, m);
        go_curve.push_back(m);
    }
    const bool go_ok = go_report.failures.empty() && go_mean > 20.0 && go_mean < 55.0 && go_peak >= 30.0;
    pass &= go_ok;
    detail += std::string("GO n=100 ") + (go_ok ? "ok" : "out of band") + ": by fraction " + vec(go_curve, 1) + "%, mean " +
              fmt(go_mean, 1) + "% (band 20..55), peak " + fmt(go_peak, 1) + "% (>=30)" + failures_note(go_report);

    bench::ExperimentConfig ms = go;
    ms.n = 1024;
    ms.algorithm = bench::Algorithm::MSGO;
    ms.depth = 4;
    const auto ms_report = bench::run_experiment(ms);
    const auto ms_means = bench::mean_by_fraction(ms_report.rows);
    const double ms_last = ms_means.rbegin()->second;
    std::vector<double> ms_curve;
    for (const auto& [f, m] : ms_means) ms_curve.push_back(m);
    const bool ms_ok = ms_report.failures.empty() && ms_last > 35.0 && ms_last < 60.0;
    pass &= ms_ok;
    detail += std::string("; MSGO n=1024 depth 4 ") + (ms_ok ? "ok" : "out of band") + ": by fraction " + vec(ms_curve, 1) +
              "%, at 60% " + fmt(ms_last, 1) + "% (band 35..60)" + failures_note(ms_report);

    bench::ExperimentConfig sg = go;
    sg.n = 10000;
    sg.algorithm = bench::Algorithm::SGO;
    sg.fractions = {0.09};
    const auto sg_report = bench::run_experiment(sg);
    const double sg_mean = bench::mean_improvement(sg_report.rows, [](const auto&) { return true; });
    const bool sg_ok = sg_report.failures.empty() && sg_mean > 18.0 && sg_mean < 35.0;
    pass &= sg_ok;
    detail += std::string("; SGO n=10000 at 9% ") + (sg_ok ? "ok" : "out of band") + ": " + fmt(sg_mean, 1) +
              "% (band 18..35)" + failures_note(sg_report);
    return {pass, detail};
}

Verdict noise_degradation() {
    const std::vector<double> levels{0.0, 0.1, 0.25, 0.5, 1.0};
    std::vector<double> mean;
    std::vector<double> se;
    std::size_t failed = 0;
    for (double u : levels) {
        bench::ExperimentConfig cfg;
        cfg.n = 100;
        cfg.algorithm = bench::Algorithm::GO;
        cfg.fractions = {0.4};
        cfg.noise = u;
        cfg.trials = 100;
        cfg.zones_per_fraction = 4;
        cfg.seed = kMasterSeed + 9;
        const auto report = bench::run_experiment(cfg);
        failed += report.failures.size();
        double m = 0.0;
        for (const auto& r : report.rows) m += r.improvement_pct;
        m /= static_cast<double>(report.rows.size());
        double var = 0.0;
        for (const auto& r : report.rows) var += (r.improvement_pct - m) * (r.improvement_pct - m);
        var /= static_cast<double>(report.rows.size() - 1);
        mean.push_back(m);
        se.push_back(std::sqrt(var / static_cast<double>(report.rows.size())));
    }
    // Non-increasing up to noise: no step may rise by more than two combined
    // standard errors, and the clean end must sit above the noisy end.
    bool monotone = mean.front() > mean.back();
    for (std::size_t i = 0; i + 1 < mean.size(); ++i) {
        monotone &= mean[i + 1] <= mean[i] + 2.0 * std::hypot(se[i], se[i + 1]);
    }
    const bool converges = std::abs(mean.back()) <= 3.0;
    return {failed == 0 && monotone && converges,
            "GO n=100 at 40%: improvement by noise {0,.1,.25,.5,1} = " + vec(mean, 2) + "% (se " + vec(se, 2) +
                "); |improvement at u=1| " + (converges ? "<= 3" : "> 3") + ", trend " +
                (monotone ? "non-increasing" : "not monotone")};
}

Verdict dynamic_vs_static() {
    bench::ExperimentConfig cfg;
    cfg.n = 100;
    cfg.algorithm = bench::Algorithm::GO;
    cfg.trials = 20;
    cfg.seed = kMasterSeed + 10;
    const auto report = bench::run_dynamic(cfg);
    std::map<std::size_t, std::pair<std::uint64_t, std::uint64_t>> totals;
    for (const auto& r : report.rows) {
        totals[r.trial].first += r.pairing_cost;
        totals[r.trial].second += r.baseline_cost;
    }
    std::size_t wins = 0;
    double mean = 0.0;
    for (const auto& [t, c] : totals) {
        wins += c.first < c.second;
        mean += bench::improvement_percent(c.first, c.second) / static_cast<double>(totals.size());
    }
    const double share = static_cast<double>(wins) / static_cast<double>(cfg.trials);
    const bool pass = report.failures.empty() && share >= 0.8 && mean >= 15.0;
    return {pass, "dynamic below static in " + std::to_string(wins) + "/" + std::to_string(cfg.trials) +
                      " trials (need >= 80%), mean improvement " + fmt(mean, 1) + "% (need >= 15)" +
                      failures_note(report)};
}

Verdict timing_budgets() {
    struct Case {
        bench::Algorithm algorithm;
        std::size_t n;
        int depth;
        double budget_s;
    };
    bool pass = true;
    std::string detail;
    for (const Case& c : {Case{bench::Algorithm::GO, 600, 0, 60.0}, Case{bench::Algorithm::SGO, 50625, 0, 720.0},
                          Case{bench::Algorithm::MSGO, 4000, 4, 1800.0}}) {
        const Grid geometry = Grid::lattice(c.n);
        const Grid grid = geometry.with_probabilities(bench::gen_probabilities(geometry, {0.75, 10.0, kMasterSeed, std::nullopt}));
        const auto start = std::chrono::steady_clock::now();
        const GridEncoding e = bench::encode(c.algorithm, grid, c.depth, kMasterSeed);
        const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        const bool ok = seconds < c.budget_s && e.cell_count() == c.n;
        pass &= ok;
        detail += (detail.empty() ? "" : ", ") + bench::to_string(c.algorithm) + " n=" + std::to_string(c.n) + " " +
                  fmt(seconds, 3) + " s (< " + fmt(c.budget_s, 0) + " s)";
    }
    return {pass, detail};
}

struct Criterion {
    int id;
    const char* name;
    double runtime_limit_s;  // 0: none
    std::function<Verdict()> run;
};

}  // namespace

int main(int argc, char** argv) {
    const std::vector<Criterion> criteria{
        {1, "HVE correctness", 60.0, hve_exhaustive},
        {2, "stationary distribution reproduction", 1.0, stationary_reproduction},
        {3, "Monte Carlo agreement", 30.0, monte_carlo_agreement},
        {4, "GO operation count", 0.0, go_operation_count},
        {5, "GO stage optimality", 60.0, go_stage_optimality},
        {6, "rank matching optimality", 0.0, rank_matching_optimality},
        {7, "token minimization", 0.0, token_minimization},
        {8, "improvement bands", 1800.0, improvement_bands},
        {9, "noise degradation", 0.0, noise_degradation},
        {10, "dynamic versus static", 0.0, dynamic_vs_static},
        {11, "timing budgets", 0.0, timing_budgets},
    };

    int only = 0;
    for (int i = 1; i < argc; ++i) {
        const std::string arg = argv[i];
        if (arg == "--criterion" && i + 1 < argc) {
            only = std::stoi(argv[++i]);
        } else {
            std::cerr << "usage: acceptance [--criterion N]\n";
            return 2;
        }
    }
    if (only != 0 && (only < 1 || only > static_cast<int>(criteria.size()))) {
        std::cerr << "no criterion " << only << '\n';
        return 2;
    }

    int failed = 0;
    for (const auto& c : criteria) {
        if (only != 0 && c.id != only) continue;
        const auto start = std::chrono::steady_clock::now();
        Verdict v;
        try {
            v = c.run();
        } catch (const std::exception& e) {
            v = {false, std::string("exception: ") + e.what()};
        }
        const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        if (c.runtime_limit_s > 0.0 && seconds >= c.runtime_limit_s) {
            v.pass = false;
            v.detail += "; runtime " + fmt(seconds, 1) + " s over the " + fmt(c.runtime_limit_s, 0) + " s limit";
        }
        std::cout << "criterion " << c.id << ' ' << (v.pass ? "PASS" : "FAIL") << " [" << c.name << "] " << v.detail << " ("
                  << fmt(seconds, 2) << " s)" << std::endl;
        failed += !v.pass;
    }
    return failed == 0 ? 0 : 1;
}
