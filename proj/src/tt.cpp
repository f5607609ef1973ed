#include "eftt/tt.hpp"

#include <Eigen/LU>
#include <algorithm>
#include <cmath>
#include <limits>
#include <set>
#include <stdexcept>
#include <string>

#include "eftt/cross.hpp"

namespace eftt::tt {

namespace {

MultiIndex concat(const MultiIndex& a, int mid, const MultiIndex& b) {
    MultiIndex out;
    out.reserve(a.size() + 1 + b.size());
    out.insert(out.end(), a.begin(), a.end());
    out.push_back(mid);
    out.insert(out.end(), b.begin(), b.end());
    return out;
}

MultiIndex concat(const MultiIndex& a, const MultiIndex& b) {
    MultiIndex out;
    out.reserve(a.size() + b.size());
    out.insert(out.end(), a.begin(), a.end());
    out.insert(out.end(), b.begin(), b.end());
    return out;
}

const std::vector<MultiIndex> kTrivialSet = {MultiIndex{}};

/// Two-mode supercore t(left_prev, :, :, right_next) reshaped into a matrix.
/// Rows encode (left member, i_m) with the left member fastest; columns
/// encode (i_{m+1}, right member) with i_{m+1} fastest.
class SupercoreOracle {
  public:
    using col_type = Index;

    SupercoreOracle(const FuncTensor& t, int mode, const std::vector<MultiIndex>& left_prev,
                    const std::vector<MultiIndex>& right_next)
        : t_(&t), mode_(mode), left_prev_(&left_prev), right_next_(&right_next) {
        nl_ = static_cast<Index>(left_prev.size());
        nr_ = static_cast<Index>(right_next.size());
        size_m_ = t.dims()[mode];
        size_m1_ = t.dims()[mode + 1];
    }

    Index rows() const { return nl_ * size_m_; }
    Index cols() const { return size_m1_ * nr_; }

    double entry(Index row, Index col) const {
        const Index s = row % nl_;
        const int i = static_cast<int>(row / nl_);
        const int j = static_cast<int>(col % size_m1_);
        const Index r = col / size_m1_;
        MultiIndex idx;
        idx.reserve(t_->order());
        const MultiIndex& lp = (*left_prev_)[s];
        const MultiIndex& rn = (*right_next_)[r];
        idx.insert(idx.end(), lp.begin(), lp.end());
        idx.push_back(i);
        idx.push_back(j);
        idx.insert(idx.end(), rn.begin(), rn.end());
        return t_->entry(idx);
    }

    Index random_col(std::mt19937_64& rng) const {
        return std::uniform_int_distribution<Index>(0, cols() - 1)(rng);
    }

    Index encode_row(Index left_member, int i) const { return left_member + nl_ * i; }
    Index encode_col(int j, Index right_member) const { return j + size_m1_ * right_member; }
    std::pair<Index, int> decode_row(Index row) const {
        return {row % nl_, static_cast<int>(row / nl_)};
    }
    std::pair<int, Index> decode_col(Index col) const {
        return {static_cast<int>(col % size_m1_), col / size_m1_};
    }

  private:
    const FuncTensor* t_;
    int mode_;
    const std::vector<MultiIndex>* left_prev_;
    const std::vector<MultiIndex>* right_next_;
    Index nl_, nr_, size_m_, size_m1_;
};

Index position_of(const std::vector<MultiIndex>& set, const MultiIndex& tuple) {
    for (std::size_t p = 0; p < set.size(); ++p) {
        if (set[p] == tuple) return static_cast<Index>(p);
    }
    throw std::logic_error("tt_cross: nestedness violated (tuple not found in neighboring set)");
}

TTCores zero_cores(const FuncTensor& t, const NestedIndexSets& sets) {
    const int d = t.order();
    TTCores out;
    out.cores.resize(d);
    for (int m = 0; m < d; ++m) {
        Index rl = (m == 0) ? 1 : static_cast<Index>(sets.left[m - 1].size());
        Index rr = (m == d - 1) ? 1 : static_cast<Index>(sets.right[m].size());
        out.cores[m].assign(t.dims()[m], Eigen::MatrixXd::Zero(rl, rr));
    }
    return out;
}

}  // namespace

std::vector<int> TTCores::sizes() const {
    std::vector<int> s(cores.size());
    for (std::size_t m = 0; m < cores.size(); ++m) s[m] = static_cast<int>(cores[m].size());
    return s;
}

std::vector<Index> TTCores::ranks() const {
    std::vector<Index> r;
    r.reserve(cores.size() + 1);
    r.push_back(1);
    for (const auto& core : cores) r.push_back(core.front().cols());
    return r;
}

Index TTCores::max_rank() const {
    Index r = 1;
    for (const auto& core : cores) r = std::max(r, static_cast<Index>(core.front().cols()));
    return r;
}

Index TTCores::dofs() const {
    Index total = 0;
    for (const auto& core : cores) {
        total += static_cast<Index>(core.size()) * core.front().rows() * core.front().cols();
    }
    return total;
}

double tt_entry(const TTCores& c, const MultiIndex& idx) {
    if (idx.size() != c.cores.size()) throw std::out_of_range("tt_entry: index order mismatch");
    Eigen::RowVectorXd v = Eigen::RowVectorXd::Ones(1);
    for (std::size_t m = 0; m < c.cores.size(); ++m) {
        if (idx[m] < 0 || idx[m] >= static_cast<int>(c.cores[m].size()))
            throw std::out_of_range("tt_entry: index out of range");
        v = v * c.cores[m][idx[m]];
    }
    return v(0);
}

bool NestedIndexSets::nested() const {
    auto distinct = [](const std::vector<MultiIndex>& s) {
        std::set<MultiIndex> seen(s.begin(), s.end());
        return seen.size() == s.size();
    };
    for (const auto& s : left) {
        if (!distinct(s)) return false;
    }
    for (const auto& s : right) {
        if (!distinct(s)) return false;
    }
    for (std::size_t k = 1; k < left.size(); ++k) {
        for (const auto& tup : left[k]) {
            MultiIndex prefix(tup.begin(), tup.end() - 1);
            if (std::find(left[k - 1].begin(), left[k - 1].end(), prefix) == left[k - 1].end())
                return false;
        }
    }
    for (std::size_t k = 0; k + 1 < right.size(); ++k) {
        for (const auto& tup : right[k]) {
            MultiIndex suffix(tup.begin() + 1, tup.end());
            if (std::find(right[k + 1].begin(), right[k + 1].end(), suffix) == right[k + 1].end())
                return false;
        }
    }
    return true;
}

TTCores tt_cores_from_cross(const FuncTensor& t, const NestedIndexSets& sets) {
    const int d = t.order();
    if (d == 1) {
        TTCores out;
        out.cores.resize(1);
        for (int i = 0; i < t.dims()[0]; ++i) {
            Eigen::MatrixXd s(1, 1);
            s(0, 0) = t.entry({i});
            out.cores[0].push_back(std::move(s));
        }
        return out;
    }
    if (static_cast<int>(sets.left.size()) != d - 1 ||
        static_cast<int>(sets.right.size()) != d - 1)
        throw std::invalid_argument("tt_cores_from_cross: index sets do not match tensor order");

    TTCores out;
    out.cores.resize(d);
    for (int m = 0; m < d; ++m) {
        const auto& lprev = (m == 0) ? kTrivialSet : sets.left[m - 1];
        const auto& rcur = (m == d - 1) ? kTrivialSet : sets.right[m];
        const Index rl = static_cast<Index>(lprev.size());
        const Index rr = static_cast<Index>(rcur.size());

        std::vector<Eigen::MatrixXd> slices(t.dims()[m]);
        for (int i = 0; i < t.dims()[m]; ++i) {
            Eigen::MatrixXd v(rl, rr);
            for (Index a = 0; a < rl; ++a) {
                for (Index b = 0; b < rr; ++b) v(a, b) = t.entry(concat(lprev[a], i, rcur[b]));
            }
            slices[i] = std::move(v);
        }

        if (m < d - 1) {
            Eigen::MatrixXd block(rr, rr);
            for (Index s = 0; s < rr; ++s) {
                for (Index r = 0; r < rr; ++r)
                    block(s, r) = t.entry(concat(sets.left[m][s], sets.right[m][r]));
            }
            Eigen::FullPivLU<Eigen::MatrixXd> lu(block);
            if (!lu.isInvertible()) {
                if (block.cwiseAbs().maxCoeff() == 0.0) return zero_cores(t, sets);
                throw std::runtime_error("tt_cores_from_cross: singular pivot block at mode " +
                                         std::to_string(m));
            }
            Eigen::MatrixXd inv = lu.inverse();
            for (auto& s : slices) s = s * inv;
        }
        out.cores[m] = std::move(slices);
    }
    return out;
}

TTCrossResult tt_cross(const FuncTensor& t, const TTCrossOptions& opt, std::uint64_t seed) {
    if (opt.tol <= 0.0) throw std::invalid_argument("tt_cross: tol must be positive");
    const int d = t.order();
    std::mt19937_64 rng(seed);

    TTCrossResult res;
    if (d == 1) {
        res.cores = tt_cores_from_cross(t, NestedIndexSets{});
        res.converged = true;
        return res;
    }

    // single random nested sets: prefixes of one random point, suffixes of
    // another. Take the largest-magnitude point out of a handful of draws:
    // a coordinate sitting on a (near-)zero slice would poison the pivot
    // blocks for the whole run, since initial indices are never dropped.
    auto pick_point = [&]() {
        MultiIndex best = t.random_index(rng);
        double best_abs = std::abs(t.entry(best));
        for (int c = 1; c < 8; ++c) {
            MultiIndex cand = t.random_index(rng);
            double a = std::abs(t.entry(cand));
            if (a > best_abs) {
                best_abs = a;
                best = std::move(cand);
            }
        }
        return best;
    };
    MultiIndex p = pick_point();
    MultiIndex q = pick_point();
    res.sets.left.resize(d - 1);
    res.sets.right.resize(d - 1);
    for (int k = 0; k < d - 1; ++k) {
        res.sets.left[k] = {MultiIndex(p.begin(), p.begin() + k + 1)};
        res.sets.right[k] = {MultiIndex(q.begin() + k + 1, q.end())};
    }

    TTCores best_cores;
    NestedIndexSets best_sets;
    double best_err = std::numeric_limits<double>::infinity();

    for (int sweep = 0;; ++sweep) {
        bool have_cores = true;
        try {
            res.cores = tt_cores_from_cross(t, res.sets);
        } catch (const std::runtime_error&) {
            // a random initial index can land on a (near-)zero slice, making
            // the pivot block singular; the block becomes invertible once a
            // cross sweep adds a genuine pivot, so keep sweeping
            if (sweep >= opt.max_sweeps && best_err == std::numeric_limits<double>::infinity())
                throw;
            have_cores = false;
        }

        if (have_cores) {
            double scale = 0.0, err = 0.0;
            for (int c = 0; c < opt.check_samples; ++c) {
                MultiIndex idx = t.random_index(rng);
                double v = t.entry(idx);
                scale = std::max(scale, std::abs(v));
                err = std::max(err, std::abs(v - tt_entry(res.cores, idx)));
            }
            if (err < best_err) {
                best_err = err;
                best_cores = res.cores;
                best_sets = res.sets;
            }
            if (err <= opt.tol * std::max(1.0, scale)) {
                res.converged = true;
                return res;
            }
        }
        if (sweep >= opt.max_sweeps) {
            // hand back the best validated iterate: later sweeps can degrade
            // once pivot residuals sink into roundoff
            res.cores = std::move(best_cores);
            res.sets = std::move(best_sets);
            res.sweeps_capped = true;
            return res;
        }

        for (int m = 0; m < d - 1; ++m) {
            if (static_cast<Index>(res.sets.left[m].size()) >= opt.max_rank) {
                res.rank_capped = true;
                continue;
            }
            const auto& lprev = (m == 0) ? kTrivialSet : res.sets.left[m - 1];
            const auto& rnext = (m == d - 2) ? kTrivialSet : res.sets.right[m + 1];
            SupercoreOracle oracle(t, m, lprev, rnext);

            cross::CrossSkeleton<Index> init;
            const Index r = static_cast<Index>(res.sets.left[m].size());
            for (Index s = 0; s < r; ++s) {
                const MultiIndex& lt = res.sets.left[m][s];
                MultiIndex prefix(lt.begin(), lt.end() - 1);
                init.rows.push_back(oracle.encode_row(position_of(lprev, prefix), lt.back()));
                const MultiIndex& rt = res.sets.right[m][s];
                MultiIndex suffix(rt.begin() + 1, rt.end());
                init.cols.push_back(oracle.encode_col(rt.front(), position_of(rnext, suffix)));
            }
            init.pivot_block.resize(r, r);
            for (Index a = 0; a < r; ++a) {
                for (Index b = 0; b < r; ++b)
                    init.pivot_block(a, b) = oracle.entry(init.rows[a], init.cols[b]);
            }
            init.refactor();

            cross::AcaOptions aca_opt;
            aca_opt.tol = opt.tol;
            aca_opt.samples = opt.samples;
            aca_opt.max_new = 1;
            aca_opt.rook = true;  // random pivots alone degrade the pivot block
                                  // conditioning once ranks grow past ~10
            auto skel = cross::aca_random(oracle, aca_opt, rng, &init);

            if (skel.rank() > static_cast<int>(r)) {
                std::vector<MultiIndex> new_left, new_right;
                for (Index row : skel.rows) {
                    auto [s, i] = oracle.decode_row(row);
                    new_left.push_back(concat(lprev[s], MultiIndex{i}));
                }
                for (Index col : skel.cols) {
                    auto [j, s] = oracle.decode_col(col);
                    new_right.push_back(concat(MultiIndex{j}, rnext[s]));
                }
                res.sets.left[m] = std::move(new_left);
                res.sets.right[m] = std::move(new_right);
            }
        }
    }
}

}  // namespace eftt::tt
