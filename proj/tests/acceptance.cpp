// Acceptance gate: one line per criterion, nonzero exit on any failure.
//
// Criterion 7 (dimension sweeps above d = 100) is exercised through the CLI's
// --full-scale flag and is intentionally not run here: a single sweep takes
// hours and belongs in a manual benchmarking session, not in ctest.

#include <cmath>
#include <cstdio>
#include <string>
#include <vector>

#include "eftt/bench.hpp"
#include "eftt/model.hpp"
#include "eftt/runner.hpp"

using namespace eftt;

namespace {

int failures = 0;

void report(int id, const std::string& what, bool ok, const std::string& detail) {
    std::printf("[%s] criterion %d: %s%s%s\n", ok ? "PASS" : "FAIL", id, what.c_str(),
                detail.empty() ? "" : " -- ", detail.c_str());
    std::fflush(stdout);
    if (!ok) ++failures;
}

runner::RunRecord build_fixed(const std::string& name, int degree, runner::Method method,
                              std::uint64_t seed) {
    runner::RunConfig cfg;
    cfg.fn = name;
    cfg.adaptive = false;
    cfg.fixed_degree = degree;
    cfg.method = method;
    cfg.seed = seed;
    auto res = runner::run_benchmark(cfg);
    return res.records.at(0);
}

// 1: exact ranks at d = 7, n = 100 for the functions with known structure.
void criterion_ranks() {
    struct Case {
        const char* name;
        Index R, r;
    };
    const Case cases[] = {
        {"exponential", 1, 1}, {"alpine", 2, 2}, {"michalewicz", 2, 2}, {"schwefel", 2, 2}};
    bool ok = true;
    std::string detail;
    for (const auto& c : cases) {
        auto rec = build_fixed(c.name, 100, runner::Method::EFTT, 1);
        bool match = !rec.failed && rec.max_R == c.R && rec.max_r == c.r;
        detail += std::string(c.name) + " R=" + std::to_string(rec.max_R) +
                  " r=" + std::to_string(rec.max_r) + (match ? " " : "(!) ");
        ok = ok && match;
    }
    report(1, "exact TT/sketch ranks for structured benchmarks", ok, detail);
}

// 2: accuracy bands at the matched fixed-degree protocol.
void criterion_errors() {
    struct Case {
        const char* name;
        double lo, hi;
    };
    // bands: machine-precision class functions well below 1e-10; the two
    // rank-2 trigonometric benchmarks near their reference magnitudes.
    const Case cases[] = {
        {"exponential", 0.0, 1e-10},
        {"alpine", 1e-4, 1e-1},
        {"schwefel", 1e-5, 1e-2},
    };
    bool ok = true;
    std::string detail;
    for (const auto& c : cases) {
        auto rec = build_fixed(c.name, 100, runner::Method::EFTT, 2);
        bool match = !rec.failed && rec.error >= c.lo && rec.error <= c.hi;
        char buf[128];
        std::snprintf(buf, sizeof buf, "%s err=%.3e%s ", c.name, rec.error,
                      match ? "" : "(!)");
        detail += buf;
        ok = ok && match;
    }
    report(2, "relative errors inside the reference bands", ok, detail);
}

// 3: the compressed pipeline needs far fewer evaluations on Ackley.
void criterion_ackley_evals() {
    runner::RunConfig cfg;
    cfg.fn = "ackley";
    cfg.adaptive = false;
    cfg.fixed_degree = 100;
    cfg.seed = 3;
    auto cmp = runner::run_comparison(cfg);
    const auto& e = cmp.eftt.records.at(0);
    const auto& t = cmp.direct.records.at(0);
    double ratio = t.evals ? double(e.evals) / double(t.evals) : 1.0;
    bool ok = !e.failed && !t.failed && ratio <= 0.3;
    char buf[160];
    std::snprintf(buf, sizeof buf, "eftt=%llu direct=%llu ratio=%.3f",
                  (unsigned long long)e.evals, (unsigned long long)t.evals, ratio);
    report(3, "Ackley evaluation count at most 0.3x the direct baseline", ok, buf);
}

// 4: sin-sum ranks and the integral under the alternative basis.
void criterion_sin_sum() {
    runner::RunConfig base;
    base.seed = 4;
    auto recs = runner::run_sin_integration({2, 5, 10, 15, 20}, base);
    bool ok = true;
    std::string detail;
    for (const auto& rec : recs) {
        bool ranks2 = !rec.failed;
        for (Index r : rec.tt_ranks) ranks2 = ranks2 && r == 2;
        bool err_ok = !rec.failed && rec.integral_error_rel <= 1e-8;
        char buf[96];
        std::snprintf(buf, sizeof buf, "d=%d err=%.2e%s ", rec.d, rec.integral_error_rel,
                      ranks2 && err_ok ? "" : "(!)");
        detail += buf;
        ok = ok && ranks2 && err_ok;
    }
    report(4, "sin-sum rank-2 cores and 1e-8 integrals in the alternative basis", ok,
           detail);
}

// 5: Genz sweep -- rank-1 continuous family and an evaluation-count win on
// the oscillatory family at d = 20 over 30 trials.
void criterion_genz() {
    runner::RunConfig base;
    base.seed = 5;
    base.mc_samples = 2000;
    auto aggs = runner::run_genz_sweep({20, 50}, 30, base);
    bool cont_ok = true;
    int osc_wins = -1;
    std::string detail;
    for (const auto& agg : aggs) {
        if (agg.family == "genz-continuous") {
            cont_ok = cont_ok && agg.eftt_max_r_overall <= 1;
            for (const auto& rec : agg.records) cont_ok = cont_ok && !rec.failed;
            detail += "continuous d=" + std::to_string(agg.d) +
                      " max_r=" + std::to_string(agg.eftt_max_r_overall) + " ";
        }
        if (agg.family == "genz-oscillatory" && agg.d == 20) {
            osc_wins = agg.eftt_fewer_evals;
            detail += "oscillatory d=20 wins=" + std::to_string(osc_wins) + "/30 ";
        }
    }
    bool ok = cont_ok && osc_wins >= 25;
    report(5, "Genz sweep: continuous stays rank-1, oscillatory wins on evaluations", ok,
           detail);
}

// 6: invariants spot-checked here; the exhaustive versions run in the unit
// suites under ctest.
void criterion_properties() {
    bool ok = true;
    std::string detail;

    // polynomial exactness end to end
    auto poly = [](const std::vector<double>& x) {
        return (x[0] * x[0] - 0.25) * x[1] + 0.5 * x[2];
    };
    auto m = model::eftt_approximate(poly, 3, model::ApproxOptions{}, 6);
    double worst = 0.0;
    for (double a : {-0.9, -0.2, 0.4, 0.99})
        for (double b : {-0.7, 0.1, 0.8})
            for (double c : {-1.0, 0.0, 1.0})
                worst = std::max(worst,
                                 std::abs(model::eftt_eval(m, {a, b, c}) - poly({a, b, c})));
    bool poly_ok = worst <= 1e-11;
    detail += "poly_sup=" + std::to_string(worst) + " ";

    // serialization round trip preserves evaluations bitwise
    auto bytes = model::serialize(m);
    auto back = model::deserialize(bytes);
    bool ser_ok = model::eftt_eval(back, {0.3, -0.5, 0.7}) ==
                  model::eftt_eval(m, {0.3, -0.5, 0.7});

    // interpolation-error bound on dense data
    auto runge = [](const std::vector<double>& x) {
        return 1.0 / (1.0 + 16.0 * x[0] * x[0]) / (1.0 + 9.0 * x[1] * x[1]);
    };
    bool lemma_ok = true;
    for (double tol : {1e-2, 1e-5}) {
        auto chk = model::lemma1_bound_check(runge, 2, 16, tol, 33, 7);
        lemma_ok = lemma_ok && chk.lhs <= chk.rhs() + 1e-13;
    }

    ok = poly_ok && ser_ok && lemma_ok;
    if (!ser_ok) detail += "serialization(!) ";
    if (!lemma_ok) detail += "bound(!) ";
    report(6, "property suite spot checks", ok, detail);
}

}  // namespace

int main() {
    criterion_ranks();
    criterion_errors();
    criterion_ackley_evals();
    criterion_sin_sum();
    criterion_genz();
    criterion_properties();
    std::printf("[INFO] criterion 7: high-dimension sweeps are gated behind the CLI "
                "--full-scale flag and excluded from the automated gate\n");
    std::printf("%s\n", failures == 0 ? "ACCEPTANCE: all criteria passed"
                                      : "ACCEPTANCE: FAILURES PRESENT");
    return failures == 0 ? 0 : 1;
}
