#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <functional>
#include <memory>
#include <random>
#include <span>
#include <vector>

namespace eftt {

using Index = std::int64_t;
using MultiIndex = std::vector<int>;
using EntryFn = std::function<double(const MultiIndex&)>;

/// Dense d-way tensor, flat storage with the first mode varying fastest.
class DenseTensor {
  public:
    DenseTensor() = default;
    DenseTensor(std::vector<int> dims, double fill = 0.0);
    DenseTensor(std::vector<int> dims, std::vector<double> data);

    const std::vector<int>& dims() const { return dims_; }
    int order() const { return static_cast<int>(dims_.size()); }
    Index size() const { return static_cast<Index>(data_.size()); }
    double& at(const MultiIndex& idx) { return data_[offset(idx)]; }
    double at(const MultiIndex& idx) const { return data_[offset(idx)]; }
    std::span<double> data() { return data_; }
    std::span<const double> data() const { return data_; }
    Index offset(const MultiIndex& idx) const;
    double max_abs() const;

  private:
    std::vector<int> dims_;
    std::vector<double> data_;
};

/// Mode product: contracts dims[mode] with the columns of m; the result has
/// dims[mode] replaced by m.rows().
DenseTensor mode_mult(const DenseTensor& t, const Eigen::MatrixXd& m, int mode);

/// Lazily evaluated d-way tensor backed by a deterministic entry oracle.
/// Evaluations are counted (cache hits do not count) and cached by default.
/// Subtensor views share the parent's oracle, counter and cache.
class FuncTensor {
  public:
    static constexpr std::size_t kUnbounded = 0;

    FuncTensor(std::vector<int> dims, EntryFn oracle, bool cache = true,
               std::size_t cache_cap = kUnbounded,
               std::shared_ptr<std::uint64_t> counter = nullptr);

    const std::vector<int>& dims() const { return dims_; }
    int order() const { return static_cast<int>(dims_.size()); }

    /// Oracle value at idx; increments the evaluation counter on cache miss only.
    double entry(const MultiIndex& idx) const;

    std::uint64_t eval_count() const;
    std::shared_ptr<std::uint64_t> counter() const;

    /// Lazy view restricted to the given per-mode index subsets; evaluations
    /// count against this tensor's counter.
    FuncTensor subtensor(std::vector<std::vector<int>> index_lists) const;

    MultiIndex random_index(std::mt19937_64& rng) const;

  private:
    struct Impl;
    FuncTensor(std::shared_ptr<Impl> impl, std::vector<int> dims,
               std::vector<std::vector<int>> remap);

    std::shared_ptr<Impl> impl_;
    std::vector<int> dims_;
    std::vector<std::vector<int>> remap_;  // empty = identity view
};

/// Mode-l matricization of a FuncTensor as an entry oracle. Rows index the
/// selected mode; columns are multi-indices over the remaining modes in
/// ascending mode order with the first-listed mode varying fastest. A flat
/// column index is available whenever the column count fits in 63 bits.
class Matricization {
  public:
    using col_type = MultiIndex;

    Matricization(const FuncTensor& t, int mode);

    Index rows() const { return rows_; }
    Index cols_flat() const;  // throws std::overflow_error if it does not fit
    bool cols_fit_flat() const { return flat_ok_; }

    double entry(Index i, const col_type& rest) const;
    double entry_flat(Index i, Index j) const;
    col_type decode_col(Index j) const;
    col_type random_col(std::mt19937_64& rng) const;

    const FuncTensor& tensor() const { return *t_; }
    int mode() const { return mode_; }

  private:
    const FuncTensor* t_;
    int mode_;
    Index rows_;
    std::vector<int> rest_modes_;
    bool flat_ok_;
    Index flat_cols_ = 0;
};

}  // namespace eftt
