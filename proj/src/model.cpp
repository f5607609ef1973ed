#include "eftt/model.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstring>
#include <memory>
#include <numbers>
#include <random>
#include <stdexcept>

#include <nlohmann/json.hpp>

#include "eftt/cheb.hpp"
#include "eftt/legendre.hpp"
#include "eftt/tucker.hpp"

namespace eftt::model {

namespace {

constexpr int kLegendreDegreeMax = 105;
constexpr std::uint64_t kStageSeedMix = 0x9e3779b97f4a7c15ULL;

int grid_degree(BasisKind basis, int m) { return basis == BasisKind::Chebyshev ? m : 2 * m; }

int derive_samples(const std::vector<int>& dims) {
    double log_sum = 0.0;
    for (int n : dims) log_sum += std::log(static_cast<double>(n));
    double geomean = std::exp(log_sum / static_cast<double>(dims.size()));
    return std::clamp(static_cast<int>(geomean / 2.0), 1, 50);
}

// The factory argument is the evaluation-grid degree per mode (already
// basis-converted), not the coefficient degree.
std::function<FuncTensor(const std::vector<int>&)> tensor_factory(
    const PointFn& f, int d, std::size_t cache_cap,
    std::shared_ptr<std::uint64_t> counter) {
    return [f, d, cache_cap, counter](const std::vector<int>& grid_degrees) {
        auto nodes = std::make_shared<std::vector<std::vector<double>>>(d);
        std::vector<int> dims(d);
        for (int l = 0; l < d; ++l) {
            int n = grid_degrees[l];
            (*nodes)[l] = cheb::cheb_points(n).nodes;
            dims[l] = n + 1;
        }
        EntryFn oracle = [f, nodes](const MultiIndex& idx) {
            std::vector<double> x(idx.size());
            for (std::size_t l = 0; l < idx.size(); ++l) x[l] = (*nodes)[l][idx[l]];
            return f(x);
        };
        return FuncTensor(std::move(dims), std::move(oracle), true, cache_cap, counter);
    };
}

tucker::BasisPolicy legendre_policy(double tol) {
    tucker::BasisPolicy policy;
    policy.grid_degree = [](int m) { return 2 * m; };
    policy.resolved = [tol](const Eigen::MatrixXd& fibers, int m) {
        if (m < 3) return false;
        Eigen::MatrixXd coeffs = legendre::projection_matrix(m, 2 * m) * fibers;
        for (Eigen::Index c = 0; c < coeffs.cols(); ++c) {
            for (Eigen::Index i = coeffs.rows() - 4; i < coeffs.rows(); ++i) {
                if (std::abs(coeffs(i, c)) >= tol) return false;
            }
        }
        return true;
    };
    return policy;
}

Eigen::MatrixXd basis_transform(BasisKind basis, int m, int n) {
    return basis == BasisKind::Chebyshev ? cheb::dct_matrix(n)
                                         : legendre::projection_matrix(m, n);
}

Eigen::VectorXd basis_values(BasisKind basis, int m, double x) {
    return basis == BasisKind::Chebyshev ? cheb::cheb_basis_values(m, x)
                                         : legendre::legendre_basis_values(m, x);
}

Eigen::VectorXd integral_weights(BasisKind basis, int m) {
    std::vector<double> w = basis == BasisKind::Chebyshev
                                ? cheb::cheb_integral_weights(m)
                                : legendre::legendre_integral_weights(m);
    return Eigen::Map<const Eigen::VectorXd>(w.data(), static_cast<Eigen::Index>(w.size()));
}

double chain_contract(const tt::TTCores& c, const std::vector<Eigen::VectorXd>& w) {
    Eigen::RowVectorXd v = Eigen::RowVectorXd::Ones(1);
    for (std::size_t l = 0; l < c.cores.size(); ++l) {
        const auto& slices = c.cores[l];
        Eigen::MatrixXd m = Eigen::MatrixXd::Zero(slices.front().rows(), slices.front().cols());
        for (std::size_t j = 0; j < slices.size(); ++j) m += w[l](j) * slices[j];
        v = v * m;
    }
    return v(0);
}

void check_point(const std::vector<double>& x, int d) {
    if (static_cast<int>(x.size()) != d)
        throw std::invalid_argument("eval: point dimension mismatch");
    for (double xi : x) {
        if (!(xi >= -1.0 - 1e-12 && xi <= 1.0 + 1e-12))
            throw std::domain_error("eval: point outside [-1,1]^d");
    }
}

void append_cross_warnings(const tt::TTCrossResult& res, std::vector<std::string>& warnings) {
    if (res.rank_capped) warnings.push_back("tt cross: rank cap reached");
    if (res.sweeps_capped) warnings.push_back("tt cross: sweep cap reached without convergence");
}

tt::TTCrossOptions cross_options(const ApproxOptions& opt, const std::vector<int>& dims) {
    tt::TTCrossOptions topt;
    topt.tol = opt.tol;
    topt.samples = opt.samples > 0 ? opt.samples : derive_samples(dims);
    topt.check_samples = opt.check_samples;
    topt.max_rank = opt.max_rank;
    topt.max_sweeps = opt.max_sweeps;
    return topt;
}

// --- byte-stream helpers (explicit little-endian) ---

void put_u8(std::vector<std::uint8_t>& out, std::uint8_t v) { out.push_back(v); }
void put_u16(std::vector<std::uint8_t>& out, std::uint16_t v) {
    out.push_back(static_cast<std::uint8_t>(v));
    out.push_back(static_cast<std::uint8_t>(v >> 8));
}
void put_u32(std::vector<std::uint8_t>& out, std::uint32_t v) {
    for (int s = 0; s < 32; s += 8) out.push_back(static_cast<std::uint8_t>(v >> s));
}
void put_u64(std::vector<std::uint8_t>& out, std::uint64_t v) {
    for (int s = 0; s < 64; s += 8) out.push_back(static_cast<std::uint8_t>(v >> s));
}
void put_f64(std::vector<std::uint8_t>& out, double v) {
    put_u64(out, std::bit_cast<std::uint64_t>(v));
}

struct ByteReader {
    const std::vector<std::uint8_t>* bytes;
    std::size_t pos = 0;

    void need(std::size_t n) const {
        if (pos + n > bytes->size()) throw std::runtime_error("deserialize: truncated stream");
    }
    std::uint8_t u8() {
        need(1);
        return (*bytes)[pos++];
    }
    std::uint16_t u16() {
        need(2);
        std::uint16_t v = static_cast<std::uint16_t>((*bytes)[pos] |
                                                     ((*bytes)[pos + 1] << 8));
        pos += 2;
        return v;
    }
    std::uint32_t u32() {
        need(4);
        std::uint32_t v = 0;
        for (int s = 0; s < 32; s += 8) v |= static_cast<std::uint32_t>((*bytes)[pos++]) << s;
        return v;
    }
    std::uint64_t u64() {
        need(8);
        std::uint64_t v = 0;
        for (int s = 0; s < 64; s += 8) v |= static_cast<std::uint64_t>((*bytes)[pos++]) << s;
        return v;
    }
    double f64() { return std::bit_cast<double>(u64()); }
};

constexpr std::uint8_t kMagic[4] = {'E', 'F', 'T', 'T'};
constexpr std::uint16_t kFormatVersion = 1;

std::string base64_encode(const std::uint8_t* data, std::size_t len) {
    static const char table[] = "ABCDEFGHIJKLMNOPQRSTUVWXYZabcdefghijklmnopqrstuvwxyz0123456789+/";
    std::string out;
    out.reserve((len + 2) / 3 * 4);
    for (std::size_t i = 0; i < len; i += 3) {
        std::uint32_t chunk = data[i] << 16;
        if (i + 1 < len) chunk |= data[i + 1] << 8;
        if (i + 2 < len) chunk |= data[i + 2];
        out.push_back(table[(chunk >> 18) & 63]);
        out.push_back(table[(chunk >> 12) & 63]);
        out.push_back(i + 1 < len ? table[(chunk >> 6) & 63] : '=');
        out.push_back(i + 2 < len ? table[chunk & 63] : '=');
    }
    return out;
}

std::string base64_doubles(const Eigen::MatrixXd& m) {
    std::vector<std::uint8_t> bytes;
    bytes.reserve(static_cast<std::size_t>(m.size()) * 8);
    for (Eigen::Index c = 0; c < m.cols(); ++c) {
        for (Eigen::Index r = 0; r < m.rows(); ++r) put_f64(bytes, m(r, c));
    }
    return base64_encode(bytes.data(), bytes.size());
}

}  // namespace

std::vector<Index> EFTTModel::tucker_ranks() const {
    std::vector<Index> r(coeff_factors.size());
    for (std::size_t l = 0; l < coeff_factors.size(); ++l) r[l] = coeff_factors[l].cols();
    return r;
}

Index EFTTModel::max_R() const { return tt.max_rank(); }

Index EFTTModel::max_r() const {
    Index r = 0;
    for (const auto& cf : coeff_factors) r = std::max(r, static_cast<Index>(cf.cols()));
    return r;
}

Index FTTModel::max_R() const { return tt.max_rank(); }

EFTTModel eftt_approximate(const PointFn& f, int d, const ApproxOptions& opt,
                           std::uint64_t seed) {
    if (d < 1) throw std::invalid_argument("eftt_approximate: d must be positive");
    if (opt.tol <= 0.0) throw std::invalid_argument("eftt_approximate: tol must be positive");

    auto counter = std::make_shared<std::uint64_t>(0);
    auto make_tensor = tensor_factory(f, d, opt.cache_cap, counter);
    tucker::BasisPolicy policy = opt.basis == BasisKind::Chebyshev
                                     ? tucker::chebyshev_policy(opt.tol)
                                     : legendre_policy(opt.tol);

    tucker::AdaptiveOptions aopt;
    aopt.tol = opt.tol;
    aopt.samples = opt.samples;
    aopt.adaptive = opt.adaptive;
    aopt.degree_init = opt.adaptive ? opt.degree_init : opt.fixed_degree;
    aopt.degree_max = opt.basis == BasisKind::LegendreCC
                          ? std::min(opt.degree_max, kLegendreDegreeMax)
                          : opt.degree_max;
    auto ares = tucker::adaptive_sketch(make_tensor, d, aopt, policy, seed);

    EFTTModel m;
    m.basis = opt.basis;
    for (int l = 0; l < d; ++l) {
        const auto& mode = ares.sketch.modes[l];
        m.degrees_m.push_back(ares.degrees[l]);
        m.degrees_n.push_back(grid_degree(opt.basis, ares.degrees[l]));
        if (mode.unresolved)
            m.warnings.push_back("degree cap reached in mode " + std::to_string(l));
        if (mode.degenerate)
            m.warnings.push_back("all sampled fibers vanished in mode " + std::to_string(l));
    }

    m.deim_sets = ares.sketch.deim_sets();
    FuncTensor core = tucker::core_oracle(ares.sketch, ares.tensor);
    auto ttres = tt::tt_cross(core, cross_options(opt, ares.tensor.dims()),
                              seed ^ kStageSeedMix);
    append_cross_warnings(ttres, m.warnings);
    m.tt = std::move(ttres.cores);

    for (int l = 0; l < d; ++l) {
        m.coeff_factors.push_back(basis_transform(opt.basis, m.degrees_m[l], m.degrees_n[l]) *
                                  ares.sketch.modes[l].oblique);
    }
    m.eval_count = *counter;
    return m;
}

FTTModel direct_tt_approximate(const PointFn& f, int d, int degree, const ApproxOptions& opt,
                               std::uint64_t seed) {
    if (d < 1) throw std::invalid_argument("direct_tt_approximate: d must be positive");
    if (degree < 1) throw std::invalid_argument("direct_tt_approximate: degree must be positive");
    if (opt.tol <= 0.0) throw std::invalid_argument("direct_tt_approximate: tol must be positive");

    auto counter = std::make_shared<std::uint64_t>(0);
    auto make_tensor = tensor_factory(f, d, opt.cache_cap, counter);
    FuncTensor t = make_tensor(std::vector<int>(d, grid_degree(opt.basis, degree)));

    FTTModel m;
    m.basis = opt.basis;
    m.degrees_m.assign(d, degree);
    m.degrees_n.assign(d, grid_degree(opt.basis, degree));

    auto ttres = tt::tt_cross(t, cross_options(opt, t.dims()), seed ^ kStageSeedMix);
    append_cross_warnings(ttres, m.warnings);

    // fold the basis transform into the middle index of every core
    m.tt.cores.resize(d);
    for (int l = 0; l < d; ++l) {
        Eigen::MatrixXd b = basis_transform(opt.basis, degree, m.degrees_n[l]);
        const auto& grid_slices = ttres.cores.cores[l];
        m.tt.cores[l].assign(
            degree + 1, Eigen::MatrixXd::Zero(grid_slices.front().rows(),
                                              grid_slices.front().cols()));
        for (int k = 0; k <= degree; ++k) {
            for (std::size_t i = 0; i < grid_slices.size(); ++i)
                m.tt.cores[l][k] += b(k, static_cast<Eigen::Index>(i)) * grid_slices[i];
        }
    }
    m.eval_count = *counter;
    return m;
}

double eftt_eval(const EFTTModel& m, const std::vector<double>& x) {
    check_point(x, m.order());
    std::vector<Eigen::VectorXd> w(m.order());
    for (int l = 0; l < m.order(); ++l)
        w[l] = m.coeff_factors[l].transpose() * basis_values(m.basis, m.degrees_m[l], x[l]);
    return chain_contract(m.tt, w);
}

double ftt_eval(const FTTModel& m, const std::vector<double>& x) {
    check_point(x, m.order());
    std::vector<Eigen::VectorXd> w(m.order());
    for (int l = 0; l < m.order(); ++l) w[l] = basis_values(m.basis, m.degrees_m[l], x[l]);
    return chain_contract(m.tt, w);
}

double eftt_integrate(const EFTTModel& m) {
    std::vector<Eigen::VectorXd> w(m.order());
    for (int l = 0; l < m.order(); ++l)
        w[l] = m.coeff_factors[l].transpose() * integral_weights(m.basis, m.degrees_m[l]);
    return chain_contract(m.tt, w);
}

double ftt_integrate(const FTTModel& m) {
    std::vector<Eigen::VectorXd> w(m.order());
    for (int l = 0; l < m.order(); ++l) w[l] = integral_weights(m.basis, m.degrees_m[l]);
    return chain_contract(m.tt, w);
}

DofBreakdown eftt_dofs(const EFTTModel& m) {
    DofBreakdown d;
    d.core_dofs = m.tt.dofs();
    for (const auto& cf : m.coeff_factors) d.factor_dofs += cf.rows() * cf.cols();
    return d;
}

Index ftt_dofs(const FTTModel& m) { return m.tt.dofs(); }

McError mc_l2_error(const PointFn& surrogate, const PointFn& f, int d, int n_samples,
                    std::uint64_t seed) {
    if (n_samples < 1) throw std::invalid_argument("mc_l2_error: need at least one sample");
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unit(-1.0, 1.0);
    double num = 0.0, den = 0.0;
    std::vector<double> x(d);
    for (int s = 0; s < n_samples; ++s) {
        for (int l = 0; l < d; ++l) x[l] = unit(rng);
        double fv = f(x);
        double diff = fv - surrogate(x);
        num += diff * diff;
        den += fv * fv;
    }
    McError e;
    if (den == 0.0) {
        e.absolute = true;
        e.value = std::sqrt(num / n_samples);
    } else {
        e.value = std::sqrt(num / den);
    }
    return e;
}

Lemma1Check lemma1_bound_check(const PointFn& f, int d, int n, double tol,
                               int grid_per_mode, std::uint64_t seed) {
    if (d < 1 || d > 3) throw std::invalid_argument("lemma1_bound_check: d must be in 1..3");
    if (n < 2 || n > 16) throw std::invalid_argument("lemma1_bound_check: n must be in 2..16");
    if (grid_per_mode < 2)
        throw std::invalid_argument("lemma1_bound_check: need at least two grid points per mode");

    auto nodes = cheb::cheb_points(n).nodes;
    std::vector<int> dims(d, n + 1);
    DenseTensor t(dims);
    std::vector<double> x(d);
    MultiIndex idx(d, 0);
    auto advance = [&](std::vector<int>& iv, const std::vector<int>& lim) {
        for (int l = 0; l < d; ++l) {
            if (++iv[l] < lim[l]) return true;
            iv[l] = 0;
        }
        return false;
    };
    do {
        for (int l = 0; l < d; ++l) x[l] = nodes[idx[l]];
        t.at(idx) = f(x);
    } while (advance(idx, dims));

    FuncTensor lazy(dims, [&t](const MultiIndex& i) { return t.at(i); }, false);
    tt::TTCrossOptions topt;
    topt.tol = tol;
    auto ttres = tt::tt_cross(lazy, topt, seed);

    DenseTensor that(dims);
    idx.assign(d, 0);
    do {
        that.at(idx) = tt::tt_entry(ttres.cores, idx);
    } while (advance(idx, dims));

    // interpolants via dense coefficient tensors
    Eigen::MatrixXd f_mat = cheb::dct_matrix(n);
    DenseTensor coeff_tilde = t, coeff_hat = that;
    for (int l = 0; l < d; ++l) {
        coeff_tilde = mode_mult(coeff_tilde, f_mat, l);
        coeff_hat = mode_mult(coeff_hat, f_mat, l);
    }
    auto interp_eval = [&](const DenseTensor& coeff, const std::vector<double>& pt) {
        DenseTensor acc = coeff;
        for (int l = d - 1; l >= 0; --l) {
            Eigen::MatrixXd row = cheb::cheb_basis_values(n, pt[l]).transpose();
            acc = mode_mult(acc, row, l);
        }
        return acc.data()[0];
    };

    Lemma1Check out;
    out.factor = 1.0;
    for (int l = 0; l < d; ++l)
        out.factor *= 2.0 / std::numbers::pi * std::log(static_cast<double>(n)) + 1.0;

    std::vector<int> glim(d, grid_per_mode);
    std::vector<int> gidx(d, 0);
    do {
        for (int l = 0; l < d; ++l)
            x[l] = -1.0 + 2.0 * gidx[l] / static_cast<double>(grid_per_mode - 1);
        double fv = f(x);
        out.lhs = std::max(out.lhs, std::abs(fv - interp_eval(coeff_hat, x)));
        out.interp_err = std::max(out.interp_err, std::abs(fv - interp_eval(coeff_tilde, x)));
    } while (advance(gidx, glim));

    for (Index i = 0; i < t.size(); ++i)
        out.tensor_err = std::max(out.tensor_err, std::abs(t.data()[i] - that.data()[i]));
    return out;
}

std::vector<std::uint8_t> serialize(const EFTTModel& m) {
    std::vector<std::uint8_t> out;
    out.insert(out.end(), std::begin(kMagic), std::end(kMagic));
    put_u16(out, kFormatVersion);
    put_u8(out, static_cast<std::uint8_t>(m.basis));
    const int d = m.order();
    put_u32(out, static_cast<std::uint32_t>(d));
    for (int l = 0; l < d; ++l) {
        put_u32(out, static_cast<std::uint32_t>(m.degrees_n[l]));
        put_u32(out, static_cast<std::uint32_t>(m.degrees_m[l]));
        put_u32(out, static_cast<std::uint32_t>(m.coeff_factors[l].cols()));
    }
    auto ranks = m.tt.ranks();
    for (Index r : ranks) put_u32(out, static_cast<std::uint32_t>(r));
    put_u64(out, m.eval_count);
    for (const auto& cf : m.coeff_factors) {
        for (Eigen::Index c = 0; c < cf.cols(); ++c) {
            for (Eigen::Index r = 0; r < cf.rows(); ++r) put_f64(out, cf(r, c));
        }
    }
    for (const auto& slices : m.tt.cores) {
        for (const auto& slice : slices) {
            for (Eigen::Index c = 0; c < slice.cols(); ++c) {
                for (Eigen::Index r = 0; r < slice.rows(); ++r) put_f64(out, slice(r, c));
            }
        }
    }
    return out;
}

EFTTModel deserialize(const std::vector<std::uint8_t>& bytes) {
    ByteReader in{&bytes};
    in.need(4);
    if (!std::equal(std::begin(kMagic), std::end(kMagic), bytes.begin()))
        throw std::runtime_error("deserialize: bad magic");
    in.pos = 4;
    if (in.u16() != kFormatVersion) throw std::runtime_error("deserialize: unsupported version");
    std::uint8_t basis_tag = in.u8();
    if (basis_tag > 1) throw std::runtime_error("deserialize: unknown basis tag");

    EFTTModel m;
    m.basis = static_cast<BasisKind>(basis_tag);
    const std::uint32_t d = in.u32();
    if (d == 0 || d > 100000) throw std::runtime_error("deserialize: implausible order");
    std::vector<std::uint32_t> r_l(d);
    for (std::uint32_t l = 0; l < d; ++l) {
        m.degrees_n.push_back(static_cast<int>(in.u32()));
        m.degrees_m.push_back(static_cast<int>(in.u32()));
        r_l[l] = in.u32();
    }
    std::vector<std::uint32_t> ranks(d + 1);
    for (auto& r : ranks) r = in.u32();
    if (ranks.front() != 1 || ranks.back() != 1)
        throw std::runtime_error("deserialize: boundary TT ranks must be 1");
    m.eval_count = in.u64();

    for (std::uint32_t l = 0; l < d; ++l) {
        Eigen::MatrixXd cf(m.degrees_m[l] + 1, r_l[l]);
        for (Eigen::Index c = 0; c < cf.cols(); ++c) {
            for (Eigen::Index r = 0; r < cf.rows(); ++r) cf(r, c) = in.f64();
        }
        m.coeff_factors.push_back(std::move(cf));
    }
    m.tt.cores.resize(d);
    for (std::uint32_t l = 0; l < d; ++l) {
        for (std::uint32_t i = 0; i < r_l[l]; ++i) {
            Eigen::MatrixXd slice(ranks[l], ranks[l + 1]);
            for (Eigen::Index c = 0; c < slice.cols(); ++c) {
                for (Eigen::Index r = 0; r < slice.rows(); ++r) slice(r, c) = in.f64();
            }
            m.tt.cores[l].push_back(std::move(slice));
        }
    }
    if (in.pos != bytes.size()) throw std::runtime_error("deserialize: trailing bytes");
    return m;
}

std::string to_json(const EFTTModel& m) {
    nlohmann::json j;
    j["format_version"] = kFormatVersion;
    j["basis"] = m.basis == BasisKind::Chebyshev ? "chebyshev" : "legendre-cc";
    j["order"] = m.order();
    j["degrees_n"] = m.degrees_n;
    j["degrees_m"] = m.degrees_m;
    std::vector<Index> ranks = m.tt.ranks();
    j["tt_ranks"] = ranks;
    j["eval_count"] = m.eval_count;
    j["warnings"] = m.warnings;
    for (int l = 0; l < m.order(); ++l) {
        nlohmann::json mode;
        mode["rows"] = m.coeff_factors[l].rows();
        mode["cols"] = m.coeff_factors[l].cols();
        mode["data_base64"] = base64_doubles(m.coeff_factors[l]);
        j["coeff_factors"].push_back(mode);
        nlohmann::json core;
        core["left_rank"] = m.tt.cores[l].front().rows();
        core["middle"] = m.tt.cores[l].size();
        core["right_rank"] = m.tt.cores[l].front().cols();
        Eigen::MatrixXd stacked(m.tt.cores[l].front().rows(),
                                static_cast<Eigen::Index>(m.tt.cores[l].size()) *
                                    m.tt.cores[l].front().cols());
        for (std::size_t i = 0; i < m.tt.cores[l].size(); ++i) {
            stacked.middleCols(static_cast<Eigen::Index>(i) * m.tt.cores[l].front().cols(),
                               m.tt.cores[l].front().cols()) = m.tt.cores[l][i];
        }
        core["data_base64"] = base64_doubles(stacked);
        j["tt_cores"].push_back(core);
    }
    return j.dump(2);
}

}  // namespace eftt::model
