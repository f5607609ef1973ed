#include "eftt/tensor.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <unordered_map>

namespace eftt {

namespace {

Index checked_product(std::span<const int> dims) {
    Index p = 1;
    for (int d : dims) {
        if (d <= 0) throw std::invalid_argument("tensor: dimensions must be positive");
        if (p > std::numeric_limits<Index>::max() / d) return -1;
        p *= d;
    }
    return p;
}

struct VecHash {
    std::size_t operator()(const MultiIndex& v) const {
        std::size_t h = 1469598103934665603ull;
        for (int x : v) {
            h ^= static_cast<std::size_t>(x) + 0x9e3779b97f4a7c15ull;
            h *= 1099511628211ull;
        }
        return h;
    }
};

}  // namespace

DenseTensor::DenseTensor(std::vector<int> dims, double fill) : dims_(std::move(dims)) {
    Index n = checked_product(dims_);
    if (n < 0) throw std::invalid_argument("DenseTensor: size overflow");
    data_.assign(static_cast<std::size_t>(n), fill);
}

DenseTensor::DenseTensor(std::vector<int> dims, std::vector<double> data)
    : dims_(std::move(dims)), data_(std::move(data)) {
    Index n = checked_product(dims_);
    if (n < 0 || n != static_cast<Index>(data_.size()))
        throw std::invalid_argument("DenseTensor: data length does not match dims");
}

Index DenseTensor::offset(const MultiIndex& idx) const {
    if (idx.size() != dims_.size()) throw std::out_of_range("DenseTensor: index order mismatch");
    Index off = 0, stride = 1;
    for (std::size_t k = 0; k < dims_.size(); ++k) {
        if (idx[k] < 0 || idx[k] >= dims_[k]) throw std::out_of_range("DenseTensor: index out of range");
        off += stride * idx[k];
        stride *= dims_[k];
    }
    return off;
}

double DenseTensor::max_abs() const {
    double m = 0.0;
    for (double v : data_) m = std::max(m, std::abs(v));
    return m;
}

DenseTensor mode_mult(const DenseTensor& t, const Eigen::MatrixXd& m, int mode) {
    const auto& dims = t.dims();
    if (mode < 0 || mode >= t.order()) throw std::out_of_range("mode_mult: bad mode");
    if (m.cols() != dims[mode]) throw std::invalid_argument("mode_mult: column count mismatch");

    std::vector<int> out_dims = dims;
    out_dims[mode] = static_cast<int>(m.rows());
    DenseTensor out(out_dims);

    Index inner = 1;
    for (int k = 0; k < mode; ++k) inner *= dims[k];
    Index outer = 1;
    for (int k = mode + 1; k < t.order(); ++k) outer *= dims[k];
    const Index nin = dims[mode], nout = m.rows();

    auto src = t.data();
    auto dst = out.data();
    for (Index o = 0; o < outer; ++o) {
        for (Index r = 0; r < nout; ++r) {
            for (Index j = 0; j < nin; ++j) {
                const double w = m(r, j);
                if (w == 0.0) continue;
                const double* s = src.data() + (o * nin + j) * inner;
                double* d = dst.data() + (o * nout + r) * inner;
                for (Index i = 0; i < inner; ++i) d[i] += w * s[i];
            }
        }
    }
    return out;
}

struct FuncTensor::Impl {
    EntryFn oracle;
    std::vector<int> dims;
    bool use_cache;
    std::size_t cache_cap;
    std::shared_ptr<std::uint64_t> count;
    bool flat_ok = false;
    std::vector<Index> strides;
    mutable std::unordered_map<Index, double> cache_flat;
    mutable std::unordered_map<MultiIndex, double, VecHash> cache_vec;

    double fetch(const MultiIndex& idx) const {
        if (!use_cache) {
            ++*count;
            return oracle(idx);
        }
        if (flat_ok) {
            Index key = 0;
            for (std::size_t k = 0; k < idx.size(); ++k) key += strides[k] * idx[k];
            auto it = cache_flat.find(key);
            if (it != cache_flat.end()) return it->second;
            if (cache_cap != kUnbounded && cache_flat.size() >= cache_cap)
                throw std::runtime_error("FuncTensor: cache capacity exceeded");
            ++*count;
            double v = oracle(idx);
            cache_flat.emplace(key, v);
            return v;
        }
        auto it = cache_vec.find(idx);
        if (it != cache_vec.end()) return it->second;
        if (cache_cap != kUnbounded && cache_vec.size() >= cache_cap)
            throw std::runtime_error("FuncTensor: cache capacity exceeded");
        ++*count;
        double v = oracle(idx);
        cache_vec.emplace(idx, v);
        return v;
    }
};

FuncTensor::FuncTensor(std::vector<int> dims, EntryFn oracle, bool cache,
                       std::size_t cache_cap, std::shared_ptr<std::uint64_t> counter) {
    auto impl = std::make_shared<Impl>();
    impl->oracle = std::move(oracle);
    impl->dims = dims;
    impl->use_cache = cache;
    impl->cache_cap = cache_cap;
    impl->count = counter ? std::move(counter) : std::make_shared<std::uint64_t>(0);
    Index total = checked_product(dims);
    impl->flat_ok = total >= 0;
    if (impl->flat_ok) {
        impl->strides.resize(dims.size());
        Index s = 1;
        for (std::size_t k = 0; k < dims.size(); ++k) {
            impl->strides[k] = s;
            s *= dims[k];
        }
    }
    impl_ = std::move(impl);
    dims_ = std::move(dims);
}

FuncTensor::FuncTensor(std::shared_ptr<Impl> impl, std::vector<int> dims,
                       std::vector<std::vector<int>> remap)
    : impl_(std::move(impl)), dims_(std::move(dims)), remap_(std::move(remap)) {}

double FuncTensor::entry(const MultiIndex& idx) const {
    if (idx.size() != dims_.size()) throw std::out_of_range("FuncTensor: index order mismatch");
    for (std::size_t k = 0; k < idx.size(); ++k) {
        if (idx[k] < 0 || idx[k] >= dims_[k]) throw std::out_of_range("FuncTensor: index out of range");
    }
    if (remap_.empty()) return impl_->fetch(idx);
    MultiIndex parent(idx.size());
    for (std::size_t k = 0; k < idx.size(); ++k) parent[k] = remap_[k][idx[k]];
    return impl_->fetch(parent);
}

std::uint64_t FuncTensor::eval_count() const { return *impl_->count; }

std::shared_ptr<std::uint64_t> FuncTensor::counter() const { return impl_->count; }

FuncTensor FuncTensor::subtensor(std::vector<std::vector<int>> index_lists) const {
    if (index_lists.size() != dims_.size())
        throw std::invalid_argument("subtensor: one index list per mode required");
    std::vector<int> new_dims(dims_.size());
    std::vector<std::vector<int>> remap(dims_.size());
    for (std::size_t k = 0; k < dims_.size(); ++k) {
        const auto& lst = index_lists[k];
        if (lst.empty()) throw std::invalid_argument("subtensor: empty index subset");
        remap[k].reserve(lst.size());
        for (int i : lst) {
            if (i < 0 || i >= dims_[k]) throw std::out_of_range("subtensor: index out of range");
            remap[k].push_back(remap_.empty() ? i : remap_[k][i]);
        }
        new_dims[k] = static_cast<int>(lst.size());
    }
    return FuncTensor(impl_, std::move(new_dims), std::move(remap));
}

MultiIndex FuncTensor::random_index(std::mt19937_64& rng) const {
    MultiIndex idx(dims_.size());
    for (std::size_t k = 0; k < dims_.size(); ++k) {
        idx[k] = static_cast<int>(std::uniform_int_distribution<int>(0, dims_[k] - 1)(rng));
    }
    return idx;
}

Matricization::Matricization(const FuncTensor& t, int mode) : t_(&t), mode_(mode) {
    if (mode < 0 || mode >= t.order()) throw std::out_of_range("Matricization: bad mode");
    rows_ = t.dims()[mode];
    for (int k = 0; k < t.order(); ++k) {
        if (k != mode) rest_modes_.push_back(k);
    }
    Index p = 1;
    flat_ok_ = true;
    for (int k : rest_modes_) {
        int d = t.dims()[k];
        if (p > std::numeric_limits<Index>::max() / d) {
            flat_ok_ = false;
            break;
        }
        p *= d;
    }
    if (flat_ok_) flat_cols_ = p;
}

Index Matricization::cols_flat() const {
    if (!flat_ok_) throw std::overflow_error("Matricization: column count exceeds 63 bits");
    return flat_cols_;
}

double Matricization::entry(Index i, const col_type& rest) const {
    if (rest.size() != rest_modes_.size()) throw std::out_of_range("Matricization: bad column key");
    MultiIndex idx(t_->order());
    idx[mode_] = static_cast<int>(i);
    for (std::size_t k = 0; k < rest_modes_.size(); ++k) idx[rest_modes_[k]] = rest[k];
    return t_->entry(idx);
}

double Matricization::entry_flat(Index i, Index j) const { return entry(i, decode_col(j)); }

Matricization::col_type Matricization::decode_col(Index j) const {
    if (!flat_ok_ || j < 0 || j >= flat_cols_) throw std::out_of_range("Matricization: column out of range");
    col_type rest(rest_modes_.size());
    for (std::size_t k = 0; k < rest_modes_.size(); ++k) {
        int d = t_->dims()[rest_modes_[k]];
        rest[k] = static_cast<int>(j % d);
        j /= d;
    }
    return rest;
}

Matricization::col_type Matricization::random_col(std::mt19937_64& rng) const {
    col_type rest(rest_modes_.size());
    for (std::size_t k = 0; k < rest_modes_.size(); ++k) {
        int d = t_->dims()[rest_modes_[k]];
        rest[k] = std::uniform_int_distribution<int>(0, d - 1)(rng);
    }
    return rest;
}

}  // namespace eftt
