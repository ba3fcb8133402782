#pragma once

// Dense m-mode tensors and the primitive multilinear operations.
//
// Storage is colexicographic: index i_1 varies fastest, i_m slowest, so the
// mode-0 unfolding of a tensor is a plain column-major reshape. Modes are
// 0-based throughout the C++ API.

#include <complex>
#include <concepts>
#include <cstdint>
#include <span>
#include <vector>

#include <Eigen/Dense>

namespace tuckerkit {

using cplx = std::complex<double>;

enum class ScalarKind : std::uint8_t { Real64 = 0, Complex128 = 1 };

template <typename T>
concept TensorScalar = std::same_as<T, double> || std::same_as<T, cplx>;

template <TensorScalar T>
constexpr ScalarKind kind_of() {
  return std::same_as<T, double> ? ScalarKind::Real64 : ScalarKind::Complex128;
}

const char* to_string(ScalarKind kind);

template <typename T>
using Matrix = Eigen::Matrix<T, Eigen::Dynamic, Eigen::Dynamic>;

using Dims = std::vector<std::size_t>;

// Product of all entries; 1 for an empty vector.
std::size_t dims_product(std::span<const std::size_t> dims);

template <TensorScalar T>
class DenseTensor {
 public:
  using value_type = T;

  DenseTensor() = default;
  // Zero tensor. Throws DimensionError for an empty dims vector or a zero extent.
  explicit DenseTensor(Dims dims);
  DenseTensor(Dims dims, std::vector<T> data);

  const Dims& dims() const { return dims_; }
  std::size_t order() const { return dims_.size(); }
  std::size_t dim(std::size_t mode) const { return dims_.at(mode); }
  std::size_t size() const { return data_.size(); }
  static constexpr ScalarKind kind() { return kind_of<T>(); }

  std::span<const T> data() const { return data_; }
  std::span<T> data() { return data_; }

  // Linear offset of a multi-index in storage order.
  std::size_t offset(std::span<const std::size_t> index) const;
  const T& operator()(std::span<const std::size_t> index) const { return data_[offset(index)]; }
  T& operator()(std::span<const std::size_t> index) { return data_[offset(index)]; }
  const T& operator()(std::initializer_list<std::size_t> index) const {
    return (*this)(std::span<const std::size_t>(index.begin(), index.size()));
  }
  T& operator()(std::initializer_list<std::size_t> index) {
    return (*this)(std::span<const std::size_t>(index.begin(), index.size()));
  }

  friend bool operator==(const DenseTensor&, const DenseTensor&) = default;

 private:
  Dims dims_;
  std::vector<T> data_;
};

template <TensorScalar T>
double frobenius_norm(const DenseTensor<T>& b);

// n_mode x (N / n_mode) matrix. Columns enumerate the remaining indices in
// colexicographic order (earliest remaining index fastest).
template <TensorScalar T>
Matrix<T> unfold(const DenseTensor<T>& b, std::size_t mode);

// Inverse of unfold: fold(unfold(b, l), l, b.dims()) == b exactly.
template <TensorScalar T>
DenseTensor<T> fold(const Matrix<T>& m, std::size_t mode, const Dims& dims);

// b x_mode x, with x of shape k x n_mode. The contract is
// unfold(mode_mul(b, l, x), l) == x * unfold(b, l).
template <TensorScalar T>
DenseTensor<T> mode_mul(const DenseTensor<T>& b, std::size_t mode, const Matrix<T>& x);

template <TensorScalar T>
struct ModeProduct {
  std::size_t mode;
  Matrix<T> matrix;
};

// Applies the products left to right. Modes must be distinct.
template <TensorScalar T>
DenseTensor<T> multi_mode_mul(const DenseTensor<T>& b, std::span<const ModeProduct<T>> ops);

template <TensorScalar T>
DenseTensor<T> operator-(const DenseTensor<T>& a, const DenseTensor<T>& b);

// Scalar multiply-add counter for mode products, per thread. Used to check the
// leading-order cost model of a sweep.
namespace madd_counter {
std::uint64_t value();
void reset();
void add(std::uint64_t n);
}  // namespace madd_counter

}  // namespace tuckerkit
