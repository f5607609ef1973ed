#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "eftt/bench.hpp"
#include "eftt/model.hpp"

namespace eftt::runner {

enum class Method { EFTT, DirectTT };

struct RunConfig {
    std::string fn;  // registry name, or "sin-sum" (needs dim)
    int dim = 0;     // 0 = the function's native dimension
    double tol = 1e-10;
    int samples = 0;  // cross sample pairs; 0 = min(geomean(mode sizes)/2, 50)
    bool adaptive = true;
    int fixed_degree = 100;
    model::BasisKind basis = model::BasisKind::Chebyshev;
    Method method = Method::EFTT;
    std::uint64_t seed = 0;
    int repeats = 1;
    int mc_samples = 10000;
};

struct RunRecord {
    std::string fn;
    std::string method;  // "eftt" | "directtt"
    std::uint64_t seed = 0;
    double error = 0.0;
    bool error_absolute = false;
    std::uint64_t evals = 0;
    Index dofs = 0;
    Index max_R = 0;
    Index max_r = 0;  // 0 for directtt
    std::vector<int> degrees;
    double wall_seconds = 0.0;
    bool failed = false;
    std::string fail_reason;
    std::string warnings;  // ';'-joined
};

struct BatchSummary {
    int runs = 0;
    int failures = 0;
    double error_geomean = 0.0;
    double error_log_sd = 0.0;  // sd of log10(error)
    double evals_mean = 0.0;
    double evals_sd = 0.0;
    double dofs_mean = 0.0;
    double dofs_sd = 0.0;
};

struct BenchmarkResult {
    std::vector<RunRecord> records;
    BatchSummary summary;
};

/// One method on one function, cfg.repeats times with seeds seed, seed+1, ...
/// Error is the Monte-Carlo relative L2 error against the oracle. Build
/// failures are recorded per run, not thrown.
BenchmarkResult run_benchmark(const RunConfig& cfg);

struct ComparisonResult {
    BenchmarkResult eftt;
    BenchmarkResult direct;
    double eval_reduction = 0.0;  // 1 - EFTT/DirectTT mean evals
    double dof_reduction = 0.0;
};

/// Both methods on the identical oracle with matched settings (fixed degree
/// for both, per the protocol of the tables).
ComparisonResult run_comparison(const RunConfig& cfg);

struct GenzAggregate {
    std::string family;
    int d = 0;
    int trials = 0;
    double eftt_error_geomean = 0.0;
    double direct_error_geomean = 0.0;
    double eftt_evals_mean = 0.0;
    double direct_evals_mean = 0.0;
    int eftt_fewer_evals = 0;     // trials with strictly fewer EFTT evaluations
    Index eftt_max_r_overall = 0;
    std::vector<RunRecord> records;  // interleaved eftt/directtt per trial
};

/// Fresh Genz parameters per trial (seed stream shared between methods);
/// EFTT runs degree-adaptively, DirectTT at the fixed degree.
std::vector<GenzAggregate> run_genz_sweep(const std::vector<int>& dims, int repeats,
                                          const RunConfig& base);

struct SinIntegrationRecord {
    int d = 0;
    double integral_error_rel = 0.0;
    std::vector<Index> tt_ranks;  // interior TT ranks of the core
    std::uint64_t evals = 0;
    bool failed = false;
    std::string fail_reason;
};

/// Legendre-basis EFTT models of sin(x_1+...+x_d) on [0,1]^d; compares the
/// surrogate integral (with the affine volume factor) to the analytic value.
std::vector<SinIntegrationRecord> run_sin_integration(const std::vector<int>& dims,
                                                      const RunConfig& base);

/// Versioned CSV with one row per record; parses back losslessly
/// (doubles round-trip via max_digits10).
std::string to_csv(const std::vector<RunRecord>& records);
std::vector<RunRecord> parse_csv(const std::string& csv);

std::string to_json(const std::vector<RunRecord>& records);

}  // namespace eftt::runner
