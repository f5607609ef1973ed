#include "eftt/runner.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <sstream>
#include <stdexcept>

#include <nlohmann/json.hpp>

namespace eftt::runner {

namespace {

constexpr int kCsvSchemaVersion = 1;
constexpr std::uint64_t kMcSeedMix = 0xa0761d6478bd642fULL;

std::string join_warnings(const std::vector<std::string>& w) {
    std::string out;
    for (const auto& s : w) out += (out.empty() ? "" : ";") + s;
    return out;
}

std::string join_degrees(const std::vector<int>& d) {
    std::string out;
    for (int v : d) out += (out.empty() ? "" : ";") + std::to_string(v);
    return out;
}

std::vector<int> split_degrees(const std::string& s) {
    std::vector<int> out;
    std::stringstream ss(s);
    std::string tok;
    while (std::getline(ss, tok, ';')) out.push_back(std::stoi(tok));
    return out;
}

const bench::TestFunction& resolve(const RunConfig& cfg, bench::TestFunction& storage) {
    if (cfg.fn == "sin-sum") {
        if (cfg.dim < 1) throw std::invalid_argument("sin-sum requires --dim");
        storage = bench::sin_sum(cfg.dim);
        return storage;
    }
    const auto& fn = bench::lookup(cfg.fn);
    if (cfg.dim != 0 && cfg.dim != fn.d)
        throw std::invalid_argument("function '" + cfg.fn + "' is defined for d = " +
                                    std::to_string(fn.d));
    return fn;
}

model::ApproxOptions approx_options(const RunConfig& cfg) {
    model::ApproxOptions opt;
    opt.tol = cfg.tol;
    opt.samples = cfg.samples;
    opt.adaptive = cfg.adaptive;
    opt.fixed_degree = cfg.fixed_degree;
    opt.basis = cfg.basis;
    return opt;
}

RunRecord run_one(const bench::TestFunction& fn, const RunConfig& cfg, Method method,
                  std::uint64_t seed) {
    RunRecord rec;
    rec.fn = fn.name;
    rec.method = method == Method::EFTT ? "eftt" : "directtt";
    rec.seed = seed;
    const auto t0 = std::chrono::steady_clock::now();
    try {
        model::PointFn oracle = fn.on_cube();
        model::ApproxOptions opt = approx_options(cfg);
        model::PointFn surrogate;
        if (method == Method::EFTT) {
            auto m = model::eftt_approximate(oracle, fn.d, opt, seed);
            rec.evals = m.eval_count;
            rec.dofs = model::eftt_dofs(m).total();
            rec.max_R = m.max_R();
            rec.max_r = m.max_r();
            rec.degrees = m.degrees_n;
            rec.warnings = join_warnings(m.warnings);
            surrogate = [m = std::move(m)](const std::vector<double>& x) {
                return model::eftt_eval(m, x);
            };
        } else {
            auto m = model::direct_tt_approximate(oracle, fn.d, cfg.fixed_degree, opt, seed);
            rec.evals = m.eval_count;
            rec.dofs = model::ftt_dofs(m);
            rec.max_R = m.max_R();
            rec.degrees = m.degrees_n;
            rec.warnings = join_warnings(m.warnings);
            surrogate = [m = std::move(m)](const std::vector<double>& x) {
                return model::ftt_eval(m, x);
            };
        }
        auto err = model::mc_l2_error(surrogate, oracle, fn.d, cfg.mc_samples,
                                      seed ^ kMcSeedMix);
        rec.error = err.value;
        rec.error_absolute = err.absolute;
    } catch (const std::exception& e) {
        rec.failed = true;
        rec.fail_reason = e.what();
    }
    rec.wall_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return rec;
}

BatchSummary summarize(const std::vector<RunRecord>& records) {
    BatchSummary s;
    s.runs = static_cast<int>(records.size());
    double log_sum = 0.0, log_sq = 0.0, ev_sum = 0.0, ev_sq = 0.0, dof_sum = 0.0, dof_sq = 0.0;
    int ok = 0;
    for (const auto& r : records) {
        if (r.failed) {
            ++s.failures;
            continue;
        }
        ++ok;
        double lg = std::log10(std::max(r.error, 1e-300));
        log_sum += lg;
        log_sq += lg * lg;
        ev_sum += static_cast<double>(r.evals);
        ev_sq += static_cast<double>(r.evals) * static_cast<double>(r.evals);
        dof_sum += static_cast<double>(r.dofs);
        dof_sq += static_cast<double>(r.dofs) * static_cast<double>(r.dofs);
    }
    if (ok == 0) return s;
    s.error_geomean = std::pow(10.0, log_sum / ok);
    s.evals_mean = ev_sum / ok;
    s.dofs_mean = dof_sum / ok;
    if (ok > 1) {
        s.error_log_sd = std::sqrt(std::max(0.0, (log_sq - log_sum * log_sum / ok) / (ok - 1)));
        s.evals_sd = std::sqrt(std::max(0.0, (ev_sq - ev_sum * ev_sum / ok) / (ok - 1)));
        s.dofs_sd = std::sqrt(std::max(0.0, (dof_sq - dof_sum * dof_sum / ok) / (ok - 1)));
    }
    return s;
}

std::string fmt_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

std::string csv_escape(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    out += '"';
    return out;
}


}  // namespace

BenchmarkResult run_benchmark(const RunConfig& cfg) {
    bench::TestFunction storage;
    const auto& fn = resolve(cfg, storage);
    BenchmarkResult res;
    for (int rep = 0; rep < cfg.repeats; ++rep)
        res.records.push_back(run_one(fn, cfg, cfg.method, cfg.seed + rep));
    res.summary = summarize(res.records);
    return res;
}

ComparisonResult run_comparison(const RunConfig& cfg) {
    bench::TestFunction storage;
    const auto& fn = resolve(cfg, storage);
    RunConfig fixed = cfg;
    fixed.adaptive = false;  // matched fixed-degree settings for both methods
    ComparisonResult res;
    for (int rep = 0; rep < cfg.repeats; ++rep) {
        res.eftt.records.push_back(run_one(fn, fixed, Method::EFTT, cfg.seed + rep));
        res.direct.records.push_back(run_one(fn, fixed, Method::DirectTT, cfg.seed + rep));
    }
    res.eftt.summary = summarize(res.eftt.records);
    res.direct.summary = summarize(res.direct.records);
    if (res.direct.summary.evals_mean > 0.0)
        res.eval_reduction = 1.0 - res.eftt.summary.evals_mean / res.direct.summary.evals_mean;
    if (res.direct.summary.dofs_mean > 0.0)
        res.dof_reduction = 1.0 - res.eftt.summary.dofs_mean / res.direct.summary.dofs_mean;
    return res;
}

std::vector<GenzAggregate> run_genz_sweep(const std::vector<int>& dims, int repeats,
                                          const RunConfig& base) {
    static const std::pair<bench::GenzFamily, const char*> families[] = {
        {bench::GenzFamily::Oscillatory, "genz-oscillatory"},
        {bench::GenzFamily::CornerPeak, "genz-corner-peak"},
        {bench::GenzFamily::Continuous, "genz-continuous"},
    };
    std::vector<GenzAggregate> out;
    for (const auto& [family, name] : families) {
        for (int d : dims) {
            GenzAggregate agg;
            agg.family = name;
            agg.d = d;
            agg.trials = repeats;
            for (int trial = 0; trial < repeats; ++trial) {
                std::uint64_t seed = base.seed + trial;
                auto [spec, oracle] = bench::genz(family, d, seed);
                bench::TestFunction fn;
                fn.name = name;
                fn.d = d;
                fn.box.assign(d, {-1.0, 1.0});
                fn.f = oracle;
                RunConfig eftt_cfg = base;
                eftt_cfg.adaptive = true;
                RunConfig direct_cfg = base;
                auto efr = run_one(fn, eftt_cfg, Method::EFTT, seed);
                auto dir = run_one(fn, direct_cfg, Method::DirectTT, seed);
                if (!efr.failed && !dir.failed && efr.evals < dir.evals)
                    ++agg.eftt_fewer_evals;
                if (!efr.failed) agg.eftt_max_r_overall = std::max(agg.eftt_max_r_overall,
                                                                   efr.max_r);
                agg.records.push_back(std::move(efr));
                agg.records.push_back(std::move(dir));
            }
            std::vector<RunRecord> eftt_recs, dir_recs;
            for (std::size_t i = 0; i < agg.records.size(); ++i)
                (i % 2 == 0 ? eftt_recs : dir_recs).push_back(agg.records[i]);
            auto es = summarize(eftt_recs);
            auto ds = summarize(dir_recs);
            agg.eftt_error_geomean = es.error_geomean;
            agg.direct_error_geomean = ds.error_geomean;
            agg.eftt_evals_mean = es.evals_mean;
            agg.direct_evals_mean = ds.evals_mean;
            out.push_back(std::move(agg));
        }
    }
    return out;
}

std::vector<SinIntegrationRecord> run_sin_integration(const std::vector<int>& dims,
                                                      const RunConfig& base) {
    std::vector<SinIntegrationRecord> out;
    for (int d : dims) {
        SinIntegrationRecord rec;
        rec.d = d;
        try {
            auto fn = bench::sin_sum(d);
            model::ApproxOptions opt = approx_options(base);
            opt.basis = model::BasisKind::LegendreCC;
            auto m = model::eftt_approximate(fn.on_cube(), d, opt, base.seed);
            rec.evals = m.eval_count;
            auto ranks = m.tt.ranks();
            rec.tt_ranks.assign(ranks.begin() + 1, ranks.end() - 1);
            double integral = model::eftt_integrate(m) * fn.volume_factor();
            rec.integral_error_rel =
                std::abs(integral - *fn.analytic_integral) / std::abs(*fn.analytic_integral);
        } catch (const std::exception& e) {
            rec.failed = true;
            rec.fail_reason = e.what();
        }
        out.push_back(std::move(rec));
    }
    return out;
}

std::string to_csv(const std::vector<RunRecord>& records) {
    std::string out = "schema_version,fn,method,seed,error,error_absolute,evals,dofs,max_R,"
                      "max_r,degrees,wall_seconds,failed,fail_reason,warnings\n";
    for (const auto& r : records) {
        out += std::to_string(kCsvSchemaVersion) + ',' + csv_escape(r.fn) + ',' + r.method +
               ',' + std::to_string(r.seed) + ',' + fmt_double(r.error) + ',' +
               (r.error_absolute ? "1" : "0") + ',' + std::to_string(r.evals) + ',' +
               std::to_string(r.dofs) + ',' + std::to_string(r.max_R) + ',' +
               std::to_string(r.max_r) + ',' + join_degrees(r.degrees) + ',' +
               fmt_double(r.wall_seconds) + ',' + (r.failed ? "1" : "0") + ',' +
               csv_escape(r.fail_reason) + ',' + csv_escape(r.warnings) + '\n';
    }
    return out;
}

std::vector<RunRecord> parse_csv(const std::string& csv) {
    // character-level scan: quoted cells may contain commas, quotes, and
    // newlines, so rows cannot be recovered with getline
    std::vector<std::vector<std::string>> rows;
    std::vector<std::string> row;
    std::string cell;
    bool quoted = false, any = false;
    for (std::size_t p = 0; p < csv.size(); ++p) {
        char c = csv[p];
        if (quoted) {
            if (c == '"') {
                if (p + 1 < csv.size() && csv[p + 1] == '"') {
                    cell += '"';
                    ++p;
                } else {
                    quoted = false;
                }
            } else {
                cell += c;
            }
        } else if (c == '"') {
            quoted = true;
            any = true;
        } else if (c == ',') {
            row.push_back(std::move(cell));
            cell.clear();
            any = true;
        } else if (c == '\n') {
            if (any || !cell.empty()) {
                row.push_back(std::move(cell));
                cell.clear();
                rows.push_back(std::move(row));
                row.clear();
                any = false;
            }
        } else {
            cell += c;
            any = true;
        }
    }
    if (quoted) throw std::runtime_error("parse_csv: unterminated quote");
    if (any || !cell.empty()) {
        row.push_back(std::move(cell));
        rows.push_back(std::move(row));
    }

    std::vector<RunRecord> out;
    bool header = true;
    for (auto& cells : rows) {
        if (header) {
            header = false;
            continue;
        }
        if (cells.size() != 15) throw std::runtime_error("parse_csv: malformed row");
        if (std::stoi(cells[0]) != kCsvSchemaVersion)
            throw std::runtime_error("parse_csv: unknown schema version");
        RunRecord r;
        r.fn = cells[1];
        r.method = cells[2];
        r.seed = std::stoull(cells[3]);
        r.error = std::stod(cells[4]);
        r.error_absolute = cells[5] == "1";
        r.evals = std::stoull(cells[6]);
        r.dofs = std::stoll(cells[7]);
        r.max_R = std::stoll(cells[8]);
        r.max_r = std::stoll(cells[9]);
        if (!cells[10].empty()) r.degrees = split_degrees(cells[10]);
        r.wall_seconds = std::stod(cells[11]);
        r.failed = cells[12] == "1";
        r.fail_reason = cells[13];
        r.warnings = cells[14];
        out.push_back(std::move(r));
    }
    return out;
}

std::string to_json(const std::vector<RunRecord>& records) {
    nlohmann::json j;
    j["schema_version"] = kCsvSchemaVersion;
    j["records"] = nlohmann::json::array();
    for (const auto& r : records) {
        nlohmann::json rec;
        rec["fn"] = r.fn;
        rec["method"] = r.method;
        rec["seed"] = r.seed;
        rec["error"] = r.error;
        rec["error_absolute"] = r.error_absolute;
        rec["evals"] = r.evals;
        rec["dofs"] = r.dofs;
        rec["max_R"] = r.max_R;
        rec["max_r"] = r.max_r;
        rec["degrees"] = r.degrees;
        rec["wall_seconds"] = r.wall_seconds;
        rec["failed"] = r.failed;
        rec["fail_reason"] = r.fail_reason;
        rec["warnings"] = r.warnings;
        j["records"].push_back(std::move(rec));
    }
    return j.dump(2);
}

}  // namespace eftt::runner
