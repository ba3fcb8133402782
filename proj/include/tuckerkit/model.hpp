#pragma once

// Tucker objective machinery: contracted unfoldings C_l, their Gram matrices,
// the objective f, core recovery, reconstruction and KKT residuals.

#include <optional>
#include <vector>

#include "tuckerkit/linalg.hpp"
#include "tuckerkit/tensor.hpp"

namespace tuckerkit {

// Ordered factor matrices P_0..P_{m-1}, P_l of shape n_l x k_l with
// orthonormal columns.
template <TensorScalar T>
class TuckerFactors {
 public:
  // Throws DimensionError on shape problems and NumericalError when a factor
  // is not orthonormal to 1e-12 sqrt(k).
  TuckerFactors(Dims dims, std::vector<Matrix<T>> factors);

  // All factors equal to the identity (core_dims == dims).
  static TuckerFactors identity(const Dims& dims);

  const Dims& dims() const { return dims_; }
  Dims core_dims() const;
  std::size_t order() const { return dims_.size(); }
  const Matrix<T>& factor(std::size_t mode) const { return factors_.at(mode); }
  const std::vector<Matrix<T>>& factors() const { return factors_; }

  // Square factor that is exactly the identity; its contraction is a no-op.
  bool is_identity(std::size_t mode) const { return identity_.at(mode); }

  void set_factor(std::size_t mode, Matrix<T> p);

 private:
  Dims dims_;
  std::vector<Matrix<T>> factors_;
  std::vector<bool> identity_;
};

// Checks 1 <= k_l <= n_l elementwise and matching order.
void check_core_dims(const Dims& dims, const Dims& core_dims);

// B contracted with P_i^H over every mode in `modes` (largest n_i first),
// skipping identity factors.
template <TensorScalar T>
DenseTensor<T> contract_modes(const DenseTensor<T>& b, const TuckerFactors<T>& f,
                              std::vector<std::size_t> modes);

// [B x_i P_i^H for all i != mode]_(mode): n_mode x prod_{i != mode} k_i.
template <TensorScalar T>
Matrix<T> contracted_unfolding(const DenseTensor<T>& b, const TuckerFactors<T>& f,
                               std::size_t mode);

// C C^H, made exactly Hermitian.
template <TensorScalar T>
Matrix<T> gram(const Matrix<T>& c);

// ||B x_1 P_1^H ... x_m P_m^H||_F^2 evaluated as ||P_mode^H C_mode||_F^2.
template <TensorScalar T>
double objective(const DenseTensor<T>& b, const TuckerFactors<T>& f, std::size_t mode = 0);

template <TensorScalar T>
DenseTensor<T> core(const DenseTensor<T>& b, const TuckerFactors<T>& f);

template <TensorScalar T>
DenseTensor<T> reconstruct(const DenseTensor<T>& core_tensor, const TuckerFactors<T>& f);

// ||B - B_hat||_F / ||B||_F. Throws NumericalError for a zero B.
template <TensorScalar T>
double approx_error(const DenseTensor<T>& b, const DenseTensor<T>& b_hat);

enum class KktVariant { Full, Cheap };
enum class DenominatorMode { ExactSpectral, OneInfEstimate };

const char* to_string(KktVariant v);
const char* to_string(DenominatorMode d);

// ||B||_F and one spectral-norm value (exact or estimated) per unfolding,
// computed once per tensor and reused for every residual evaluation.
struct UnfoldingNorms {
  double frobenius = 0.0;
  std::vector<double> spectral;
  DenominatorMode mode = DenominatorMode::OneInfEstimate;
};

template <TensorScalar T>
UnfoldingNorms unfolding_norms(const DenseTensor<T>& b, DenominatorMode mode);

template <TensorScalar T>
struct KktReport {
  std::vector<double> per_mode;
  double total = 0.0;
  std::vector<Matrix<T>> multipliers;  // Omega_l = P_l^H H_l P_l
  KktVariant variant = KktVariant::Full;
  DenominatorMode denominator = DenominatorMode::OneInfEstimate;
};

// Per mode: ||H_l P_l - P_l Omega_l||_F / (||B||_F ||B_(l)||_2), with
// H_l P_l formed as C_l (C_l^H P_l).
//
// Full evaluates every C_l at the tuple `f` (or takes them from `cached_c` when
// the caller already formed them at that tuple). Cheap takes the C_l matrices a
// solver sweep produced, with `f` holding the factors each C_l was paired
// with; throws Error when the cache is missing.
template <TensorScalar T>
KktReport<T> kkt_residual(const DenseTensor<T>& b, const TuckerFactors<T>& f, KktVariant variant,
                          const UnfoldingNorms& norms,
                          const std::vector<Matrix<T>>* cached_c = nullptr);

// Residual of one mode: returns (||H P - P Omega||_F, Omega).
template <TensorScalar T>
std::pair<double, Matrix<T>> multiplier_residual(const Matrix<T>& c, const Matrix<T>& p);

}  // namespace tuckerkit
