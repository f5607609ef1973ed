#include <CLI11.hpp>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "eftt/bench.hpp"
#include "eftt/model.hpp"
#include "eftt/runner.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitBuildFailure = 2;
constexpr int kExitBandViolation = 3;

void emit_records(const std::vector<eftt::runner::RunRecord>& records, const std::string& fmt) {
    std::cout << (fmt == "json" ? eftt::runner::to_json(records)
                                : eftt::runner::to_csv(records));
}

bool any_failed(const std::vector<eftt::runner::RunRecord>& records) {
    for (const auto& r : records) {
        if (r.failed) {
            std::cerr << "build failure (" << r.fn << ", " << r.method
                      << ", seed " << r.seed << "): " << r.fail_reason << "\n";
            return true;
        }
    }
    return false;
}

bool ranks_in_band(const std::vector<eftt::runner::RunRecord>& records,
                   const eftt::bench::TestFunction& fn) {
    if (!fn.known_ranks) return true;
    for (const auto& r : records) {
        if (r.max_R != fn.known_ranks->first) return false;
        if (r.method == "eftt" && r.max_r != fn.known_ranks->second) return false;
    }
    return true;
}

void save_model(const eftt::model::EFTTModel& m, const std::string& path) {
    auto bytes = eftt::model::serialize(m);
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open model file for writing: " + path);
    out.write(reinterpret_cast<const char*>(bytes.data()),
              static_cast<std::streamsize>(bytes.size()));
}

eftt::model::EFTTModel load_model(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open model file: " + path);
    std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)),
                                    std::istreambuf_iterator<char>());
    return eftt::model::deserialize(bytes);
}

std::vector<double> parse_point(const std::string& s) {
    std::vector<double> out;
    std::stringstream ss(s);
    std::string tok;
    while (std::getline(ss, tok, ',')) out.push_back(std::stod(tok));
    return out;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"EFTT function compression benchmark harness"};
    app.require_subcommand(1);

    eftt::runner::RunConfig cfg;
    std::string basis = "cheb";
    std::string out_fmt = "csv";
    std::string model_file;
    std::string point_str;
    std::string method = "eftt";
    std::vector<int> dims;
    bool check = false;
    bool fixed = false;
    bool full_scale = false;

    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--tol", cfg.tol, "cross/chop tolerance");
        sub->add_option("--samples", cfg.samples,
                        "sample pairs per cross round (0 = min(geomean(n)/2, 50))");
        sub->add_option("--fixed-degree", cfg.fixed_degree, "polynomial degree for fixed mode")
            ->each([&](const std::string&) { fixed = true; });
        sub->add_option("--basis", basis, "polynomial basis")
            ->check(CLI::IsMember({"cheb", "legendre"}));
        sub->add_option("--seed", cfg.seed, "base RNG seed");
        sub->add_option("--repeats", cfg.repeats, "independent repeats");
        sub->add_option("--mc-samples", cfg.mc_samples, "Monte-Carlo error sample count");
        sub->add_option("--out", out_fmt, "output format")
            ->check(CLI::IsMember({"csv", "json"}));
        sub->add_flag("--check", check, "exit 3 when outside the expected bands");
    };

    auto* approx = app.add_subcommand("approx", "approximate one function");
    approx->add_option("--fn", cfg.fn, "function name")->required();
    approx->add_option("--dim", cfg.dim, "dimension (sin-sum only)");
    approx->add_option("--method", method, "approximation method")
        ->check(CLI::IsMember({"eftt", "directtt"}));
    approx->add_option("--model-file", model_file, "serialize the first model here");
    add_common(approx);

    auto* compare = app.add_subcommand("compare", "EFTT vs DirectTT on one function");
    compare->add_option("--fn", cfg.fn, "function name")->required();
    compare->add_option("--dim", cfg.dim, "dimension (sin-sum only)");
    add_common(compare);

    auto* sweep = app.add_subcommand("genz-sweep", "Genz families over dimensions");
    sweep->add_option("--dims", dims, "dimension list");
    sweep->add_flag("--full-scale", full_scale, "allow d > 100 (no acceptance band)");
    add_common(sweep);

    auto* sinint = app.add_subcommand("sin-integrate", "sin-sum integration sweep");
    sinint->add_option("--dims", dims, "dimension list");
    add_common(sinint);

    auto* evalc = app.add_subcommand("eval", "evaluate a serialized model");
    evalc->add_option("--model-file", model_file, "model file")->required();
    evalc->add_option("--point", point_str, "comma-separated coordinates in [-1,1]^d")
        ->required();

    auto* integ = app.add_subcommand("integrate", "integrate a serialized model over the cube");
    integ->add_option("--model-file", model_file, "model file")->required();

    CLI11_PARSE(app, argc, argv);

    cfg.basis = basis == "legendre" ? eftt::model::BasisKind::LegendreCC
                                    : eftt::model::BasisKind::Chebyshev;
    cfg.adaptive = !fixed;

    try {
        if (*approx) {
            cfg.method = method == "directtt" ? eftt::runner::Method::DirectTT
                                              : eftt::runner::Method::EFTT;
            auto res = eftt::runner::run_benchmark(cfg);
            emit_records(res.records, out_fmt);
            if (!model_file.empty() && cfg.method == eftt::runner::Method::EFTT) {
                eftt::bench::TestFunction storage;
                const auto& fn = cfg.fn == "sin-sum" ? (storage = eftt::bench::sin_sum(cfg.dim),
                                                        storage)
                                                     : eftt::bench::lookup(cfg.fn);
                eftt::model::ApproxOptions opt;
                opt.tol = cfg.tol;
                opt.samples = cfg.samples;
                opt.adaptive = cfg.adaptive;
                opt.fixed_degree = cfg.fixed_degree;
                opt.basis = cfg.basis;
                save_model(eftt::model::eftt_approximate(fn.on_cube(), fn.d, opt, cfg.seed),
                           model_file);
            }
            if (any_failed(res.records)) return kExitBuildFailure;
            if (check && cfg.fn != "sin-sum" &&
                !ranks_in_band(res.records, eftt::bench::lookup(cfg.fn)))
                return kExitBandViolation;
            return kExitOk;
        }
        if (*compare) {
            auto res = eftt::runner::run_comparison(cfg);
            std::vector<eftt::runner::RunRecord> all = res.eftt.records;
            all.insert(all.end(), res.direct.records.begin(), res.direct.records.end());
            emit_records(all, out_fmt);
            std::cerr << "eval reduction: " << res.eval_reduction * 100.0
                      << "%, dof reduction: " << res.dof_reduction * 100.0 << "%\n";
            if (any_failed(all)) return kExitBuildFailure;
            if (check && cfg.fn != "sin-sum" &&
                !ranks_in_band(all, eftt::bench::lookup(cfg.fn)))
                return kExitBandViolation;
            return kExitOk;
        }
        if (*sweep) {
            if (dims.empty()) dims = {20, 50, 100};
            if (!full_scale) {
                for (int d : dims) {
                    if (d > 100) {
                        std::cerr << "d = " << d << " needs --full-scale\n";
                        return kExitBuildFailure;
                    }
                }
            }
            if (cfg.repeats == 1) cfg.repeats = 30;
            auto aggs = eftt::runner::run_genz_sweep(dims, cfg.repeats, cfg);
            std::vector<eftt::runner::RunRecord> all;
            for (const auto& a : aggs)
                all.insert(all.end(), a.records.begin(), a.records.end());
            emit_records(all, out_fmt);
            bool failed = any_failed(all);
            if (failed) return kExitBuildFailure;
            if (check) {
                for (const auto& a : aggs) {
                    if (a.family == "genz-continuous" && a.eftt_max_r_overall > 1)
                        return kExitBandViolation;
                    if (a.family == "genz-oscillatory" && a.d == 20 &&
                        a.eftt_fewer_evals * 30 < a.trials * 25)
                        return kExitBandViolation;
                }
            }
            return kExitOk;
        }
        if (*sinint) {
            if (dims.empty()) dims = {2, 5, 10, 15, 20};
            auto recs = eftt::runner::run_sin_integration(dims, cfg);
            std::cout << "d,integral_error_rel,tt_ranks,evals,failed,fail_reason\n";
            bool failed = false, band_violation = false;
            for (const auto& r : recs) {
                std::string ranks;
                for (auto v : r.tt_ranks) ranks += (ranks.empty() ? "" : ";") +
                                                   std::to_string(v);
                char err[32];
                std::snprintf(err, sizeof(err), "%.6e", r.integral_error_rel);
                std::cout << r.d << ',' << err << ',' << ranks << ',' << r.evals << ','
                          << (r.failed ? "1" : "0") << ',' << r.fail_reason << '\n';
                failed |= r.failed;
                if (!r.failed) {
                    for (auto v : r.tt_ranks) band_violation |= v != 2;
                    band_violation |= r.integral_error_rel > 1e-8;
                }
            }
            if (failed) return kExitBuildFailure;
            if (check && band_violation) return kExitBandViolation;
            return kExitOk;
        }
        if (*evalc) {
            auto m = load_model(model_file);
            std::printf("%.17g\n", eftt::model::eftt_eval(m, parse_point(point_str)));
            return kExitOk;
        }
        if (*integ) {
            auto m = load_model(model_file);
            std::printf("%.17g\n", eftt::model::eftt_integrate(m));
            return kExitOk;
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitBuildFailure;
    }
    return kExitOk;
}
