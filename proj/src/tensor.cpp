#include "tuckerkit/tensor.hpp"

#include <algorithm>
#include <numeric>
#include <string>

#include "tuckerkit/errors.hpp"

namespace tuckerkit {

namespace {

thread_local std::uint64_t t_madds = 0;

void check_dims(const Dims& dims) {
  if (dims.empty()) throw DimensionError("tensor must have at least one mode");
  if (std::any_of(dims.begin(), dims.end(), [](std::size_t n) { return n == 0; }))
    throw DimensionError("tensor dimensions must be positive");
}

void check_mode(std::size_t mode, std::size_t order) {
  if (mode >= order)
    throw DimensionError("mode " + std::to_string(mode) + " out of range for order " +
                         std::to_string(order));
}

// Extents of the (left, mode, right) view of a tensor around one mode.
struct Split {
  std::size_t left;
  std::size_t n;
  std::size_t right;
};

Split split_at(const Dims& dims, std::size_t mode) {
  Split s{1, dims[mode], 1};
  for (std::size_t i = 0; i < mode; ++i) s.left *= dims[i];
  for (std::size_t i = mode + 1; i < dims.size(); ++i) s.right *= dims[i];
  return s;
}

}  // namespace

const char* to_string(ScalarKind kind) {
  return kind == ScalarKind::Real64 ? "real" : "complex";
}

std::size_t dims_product(std::span<const std::size_t> dims) {
  return std::accumulate(dims.begin(), dims.end(), std::size_t{1}, std::multiplies<>());
}

namespace madd_counter {
std::uint64_t value() { return t_madds; }
void reset() { t_madds = 0; }
void add(std::uint64_t n) { t_madds += n; }
}  // namespace madd_counter

template <TensorScalar T>
DenseTensor<T>::DenseTensor(Dims dims) : dims_(std::move(dims)) {
  check_dims(dims_);
  data_.assign(dims_product(dims_), T{0});
}

template <TensorScalar T>
DenseTensor<T>::DenseTensor(Dims dims, std::vector<T> data)
    : dims_(std::move(dims)), data_(std::move(data)) {
  check_dims(dims_);
  if (data_.size() != dims_product(dims_))
    throw DimensionError("data length " + std::to_string(data_.size()) +
                         " does not match dimension product " +
                         std::to_string(dims_product(dims_)));
}

template <TensorScalar T>
std::size_t DenseTensor<T>::offset(std::span<const std::size_t> index) const {
  if (index.size() != dims_.size()) throw DimensionError("index arity mismatch");
  std::size_t off = 0;
  std::size_t stride = 1;
  for (std::size_t i = 0; i < dims_.size(); ++i) {
    if (index[i] >= dims_[i]) throw DimensionError("index out of range");
    off += index[i] * stride;
    stride *= dims_[i];
  }
  return off;
}

template <TensorScalar T>
double frobenius_norm(const DenseTensor<T>& b) {
  const auto d = b.data();
  const Eigen::Map<const Eigen::Matrix<T, Eigen::Dynamic, 1>> v(d.data(), d.size());
  const double fast = v.norm();
  // rescaled pass only when the plain sum of squares left the normal range
  if (fast == 0.0 || (std::isfinite(fast) && fast > 1e-140 && fast < 1e140)) return fast;
  return v.stableNorm();
}

template <TensorScalar T>
Matrix<T> unfold(const DenseTensor<T>& b, std::size_t mode) {
  check_mode(mode, b.order());
  const auto [left, n, right] = split_at(b.dims(), mode);
  const T* src = b.data().data();
  Matrix<T> m(n, left * right);
  if (left == 1) {
    m = Eigen::Map<const Matrix<T>>(src, n, right);
    return m;
  }
  // column a + left*c holds b[a + left*(t + n*c)] for t = 0..n-1
  for (std::size_t c = 0; c < right; ++c) {
    Eigen::Map<const Matrix<T>> slab(src + c * left * n, left, n);
    m.middleCols(c * left, left) = slab.transpose();
  }
  return m;
}

template <TensorScalar T>
DenseTensor<T> fold(const Matrix<T>& m, std::size_t mode, const Dims& dims) {
  check_dims(dims);
  check_mode(mode, dims.size());
  const auto [left, n, right] = split_at(dims, mode);
  if (static_cast<std::size_t>(m.rows()) != n ||
      static_cast<std::size_t>(m.cols()) != left * right)
    throw DimensionError("fold: matrix shape does not match dimensions");
  DenseTensor<T> b(dims);
  T* dst = b.data().data();
  if (left == 1) {
    Eigen::Map<Matrix<T>>(dst, n, right) = m;
    return b;
  }
  for (std::size_t c = 0; c < right; ++c) {
    Eigen::Map<Matrix<T>> slab(dst + c * left * n, left, n);
    slab = m.middleCols(c * left, left).transpose();
  }
  return b;
}

template <TensorScalar T>
DenseTensor<T> mode_mul(const DenseTensor<T>& b, std::size_t mode, const Matrix<T>& x) {
  check_mode(mode, b.order());
  const auto [left, n, right] = split_at(b.dims(), mode);
  if (static_cast<std::size_t>(x.cols()) != n)
    throw DimensionError("mode_mul: matrix has " + std::to_string(x.cols()) +
                         " columns, mode " + std::to_string(mode) + " has extent " +
                         std::to_string(n));
  if (x.rows() == 0) throw DimensionError("mode_mul: matrix has no rows");
  const std::size_t k = x.rows();
  Dims out_dims = b.dims();
  out_dims[mode] = k;
  DenseTensor<T> out(out_dims);
  const T* src = b.data().data();
  T* dst = out.data().data();
  if (left == 1) {
    Eigen::Map<Matrix<T>>(dst, k, right).noalias() = x * Eigen::Map<const Matrix<T>>(src, n, right);
  } else {
    const Matrix<T> xt = x.transpose();
    for (std::size_t c = 0; c < right; ++c) {
      Eigen::Map<const Matrix<T>> slab(src + c * left * n, left, n);
      Eigen::Map<Matrix<T>>(dst + c * left * k, left, k).noalias() = slab * xt;
    }
  }
  madd_counter::add(static_cast<std::uint64_t>(left) * right * n * k);
  return out;
}

template <TensorScalar T>
DenseTensor<T> multi_mode_mul(const DenseTensor<T>& b, std::span<const ModeProduct<T>> ops) {
  std::vector<bool> seen(b.order(), false);
  for (const auto& op : ops) {
    check_mode(op.mode, b.order());
    if (seen[op.mode]) throw DimensionError("multi_mode_mul: repeated mode");
    seen[op.mode] = true;
  }
  DenseTensor<T> r = b;
  for (const auto& op : ops) r = mode_mul(r, op.mode, op.matrix);
  return r;
}

template <TensorScalar T>
DenseTensor<T> operator-(const DenseTensor<T>& a, const DenseTensor<T>& b) {
  if (a.dims() != b.dims()) throw DimensionError("tensor subtraction: dimension mismatch");
  std::vector<T> d(a.size());
  std::transform(a.data().begin(), a.data().end(), b.data().begin(), d.begin(), std::minus<>());
  return DenseTensor<T>(a.dims(), std::move(d));
}

#define TUCKERKIT_INSTANTIATE(T)                                                           \
  template class DenseTensor<T>;                                                           \
  template double frobenius_norm(const DenseTensor<T>&);                                   \
  template Matrix<T> unfold(const DenseTensor<T>&, std::size_t);                           \
  template DenseTensor<T> fold(const Matrix<T>&, std::size_t, const Dims&);                \
  template DenseTensor<T> mode_mul(const DenseTensor<T>&, std::size_t, const Matrix<T>&);  \
  template DenseTensor<T> multi_mode_mul(const DenseTensor<T>&,                            \
                                         std::span<const ModeProduct<T>>);                 \
  template DenseTensor<T> operator-(const DenseTensor<T>&, const DenseTensor<T>&);

TUCKERKIT_INSTANTIATE(double)
TUCKERKIT_INSTANTIATE(cplx)

#undef TUCKERKIT_INSTANTIATE

}  // namespace tuckerkit
