#include "tuckerkit/model.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "tuckerkit/errors.hpp"

namespace tuckerkit {

void check_core_dims(const Dims& dims, const Dims& core_dims) {
  if (dims.empty()) throw DimensionError("tensor must have at least one mode");
  if (core_dims.size() != dims.size())
    throw DimensionError("core dimensions have " + std::to_string(core_dims.size()) +
                         " entries, tensor has " + std::to_string(dims.size()) + " modes");
  for (std::size_t l = 0; l < dims.size(); ++l) {
    if (core_dims[l] < 1 || core_dims[l] > dims[l])
      throw DimensionError("core dimension " + std::to_string(core_dims[l]) + " for mode " +
                           std::to_string(l) + " must lie in [1, " + std::to_string(dims[l]) +
                           "]");
  }
}

template <TensorScalar T>
TuckerFactors<T>::TuckerFactors(Dims dims, std::vector<Matrix<T>> factors)
    : dims_(std::move(dims)), factors_(std::move(factors)) {
  if (factors_.size() != dims_.size())
    throw DimensionError("expected one factor per mode");
  Dims k(dims_.size());
  for (std::size_t l = 0; l < dims_.size(); ++l) {
    if (static_cast<std::size_t>(factors_[l].rows()) != dims_[l])
      throw DimensionError("factor " + std::to_string(l) + " has " +
                           std::to_string(factors_[l].rows()) + " rows, expected " +
                           std::to_string(dims_[l]));
    k[l] = factors_[l].cols();
  }
  check_core_dims(dims_, k);
  identity_.resize(dims_.size());
  for (std::size_t l = 0; l < dims_.size(); ++l) {
    if (!is_orthonormal(factors_[l]))
      throw NumericalError("factor " + std::to_string(l) + " is not orthonormal");
    identity_[l] = factors_[l].rows() == factors_[l].cols() && factors_[l].isIdentity(0.0);
  }
}

template <TensorScalar T>
TuckerFactors<T> TuckerFactors<T>::identity(const Dims& dims) {
  std::vector<Matrix<T>> f;
  for (auto n : dims) f.push_back(Matrix<T>::Identity(n, n));
  return TuckerFactors(dims, std::move(f));
}

template <TensorScalar T>
Dims TuckerFactors<T>::core_dims() const {
  Dims k;
  for (const auto& p : factors_) k.push_back(p.cols());
  return k;
}

template <TensorScalar T>
void TuckerFactors<T>::set_factor(std::size_t mode, Matrix<T> p) {
  const Matrix<T>& old = factors_.at(mode);
  if (p.rows() != old.rows() || p.cols() != old.cols())
    throw DimensionError("set_factor: shape change for mode " + std::to_string(mode));
  identity_[mode] = p.rows() == p.cols() && p.isIdentity(0.0);
  factors_[mode] = std::move(p);
}

template <TensorScalar T>
DenseTensor<T> contract_modes(const DenseTensor<T>& b, const TuckerFactors<T>& f,
                              std::vector<std::size_t> modes) {
  if (b.dims() != f.dims()) throw DimensionError("factors do not match tensor dimensions");
  std::stable_sort(modes.begin(), modes.end(),
                   [&](std::size_t x, std::size_t y) { return b.dim(x) > b.dim(y); });
  DenseTensor<T> r = b;
  for (auto i : modes) {
    if (f.is_identity(i)) continue;
    r = mode_mul<T>(r, i, f.factor(i).adjoint());
  }
  return r;
}

template <TensorScalar T>
Matrix<T> contracted_unfolding(const DenseTensor<T>& b, const TuckerFactors<T>& f,
                               std::size_t mode) {
  if (mode >= b.order()) throw DimensionError("contracted_unfolding: mode out of range");
  std::vector<std::size_t> others;
  for (std::size_t i = 0; i < b.order(); ++i)
    if (i != mode) others.push_back(i);
  return unfold(contract_modes(b, f, std::move(others)), mode);
}

template <TensorScalar T>
Matrix<T> gram(const Matrix<T>& c) {
  Matrix<T> h = c * c.adjoint();
  return (h + h.adjoint()) * 0.5;
}

template <TensorScalar T>
double objective(const DenseTensor<T>& b, const TuckerFactors<T>& f, std::size_t mode) {
  const Matrix<T> c = contracted_unfolding(b, f, mode);
  return (f.factor(mode).adjoint() * c).squaredNorm();
}

template <TensorScalar T>
DenseTensor<T> core(const DenseTensor<T>& b, const TuckerFactors<T>& f) {
  std::vector<std::size_t> all(b.order());
  std::iota(all.begin(), all.end(), 0);
  return contract_modes(b, f, std::move(all));
}

template <TensorScalar T>
DenseTensor<T> reconstruct(const DenseTensor<T>& core_tensor, const TuckerFactors<T>& f) {
  if (core_tensor.dims() != f.core_dims())
    throw DimensionError("reconstruct: core dimensions do not match factors");
  DenseTensor<T> r = core_tensor;
  for (std::size_t l = 0; l < f.order(); ++l) {
    if (f.is_identity(l)) continue;
    r = mode_mul(r, l, f.factor(l));
  }
  return r;
}

template <TensorScalar T>
double approx_error(const DenseTensor<T>& b, const DenseTensor<T>& b_hat) {
  if (b.dims() != b_hat.dims()) throw DimensionError("approx_error: dimension mismatch");
  const double nb = frobenius_norm(b);
  if (nb == 0.0) throw NumericalError("approx_error: reference tensor is zero");
  return frobenius_norm(b - b_hat) / nb;
}

const char* to_string(KktVariant v) { return v == KktVariant::Full ? "full" : "cheap"; }

const char* to_string(DenominatorMode d) {
  return d == DenominatorMode::ExactSpectral ? "exact_spectral" : "one_inf_estimate";
}

template <TensorScalar T>
UnfoldingNorms unfolding_norms(const DenseTensor<T>& b, DenominatorMode mode) {
  UnfoldingNorms out;
  out.mode = mode;
  out.frobenius = frobenius_norm(b);
  for (std::size_t l = 0; l < b.order(); ++l) {
    const Matrix<T> u = unfold(b, l);
    out.spectral.push_back(mode == DenominatorMode::ExactSpectral ? spectral_norm(u)
                                                                  : spectral_norm_estimate(u));
  }
  return out;
}

template <TensorScalar T>
std::pair<double, Matrix<T>> multiplier_residual(const Matrix<T>& c, const Matrix<T>& p) {
  const Matrix<T> ctp = c.adjoint() * p;
  const Matrix<T> hp = c * ctp;
  Matrix<T> omega = ctp.adjoint() * ctp;
  omega = (omega + omega.adjoint()) * 0.5;
  return {(hp - p * omega).norm(), std::move(omega)};
}

template <TensorScalar T>
KktReport<T> kkt_residual(const DenseTensor<T>& b, const TuckerFactors<T>& f, KktVariant variant,
                          const UnfoldingNorms& norms, const std::vector<Matrix<T>>* cached_c) {
  if (b.dims() != f.dims()) throw DimensionError("kkt_residual: factors do not match tensor");
  const std::size_t m = b.order();
  if (norms.spectral.size() != m) throw DimensionError("kkt_residual: norms for wrong order");
  if (norms.frobenius == 0.0) throw NumericalError("kkt_residual: tensor is zero");
  if (variant == KktVariant::Cheap && cached_c == nullptr)
    throw Error("kkt_residual: the cheap variant needs the per-mode C matrices of a sweep");
  if (cached_c != nullptr && cached_c->size() != m)
    throw DimensionError("kkt_residual: expected one cached C per mode");
  KktReport<T> rep;
  rep.variant = variant;
  rep.denominator = norms.mode;
  for (std::size_t l = 0; l < m; ++l) {
    const Matrix<T> c = cached_c != nullptr ? (*cached_c)[l] : contracted_unfolding(b, f, l);
    if (static_cast<std::size_t>(c.rows()) != b.dim(l))
      throw DimensionError("kkt_residual: cached C has the wrong row count");
    auto [r, omega] = multiplier_residual(c, f.factor(l));
    rep.per_mode.push_back(r / (norms.frobenius * norms.spectral[l]));
    rep.multipliers.push_back(std::move(omega));
  }
  rep.total = std::accumulate(rep.per_mode.begin(), rep.per_mode.end(), 0.0);
  return rep;
}

#define TUCKERKIT_INSTANTIATE(T)                                                               \
  template class TuckerFactors<T>;                                                             \
  template DenseTensor<T> contract_modes(const DenseTensor<T>&, const TuckerFactors<T>&,       \
                                         std::vector<std::size_t>);                            \
  template Matrix<T> contracted_unfolding(const DenseTensor<T>&, const TuckerFactors<T>&,      \
                                          std::size_t);                                        \
  template Matrix<T> gram(const Matrix<T>&);                                                   \
  template double objective(const DenseTensor<T>&, const TuckerFactors<T>&, std::size_t);      \
  template DenseTensor<T> core(const DenseTensor<T>&, const TuckerFactors<T>&);                \
  template DenseTensor<T> reconstruct(const DenseTensor<T>&, const TuckerFactors<T>&);         \
  template double approx_error(const DenseTensor<T>&, const DenseTensor<T>&);                  \
  template UnfoldingNorms unfolding_norms(const DenseTensor<T>&, DenominatorMode);             \
  template std::pair<double, Matrix<T>> multiplier_residual(const Matrix<T>&, const Matrix<T>&); \
  template KktReport<T> kkt_residual(const DenseTensor<T>&, const TuckerFactors<T>&,           \
                                     KktVariant, const UnfoldingNorms&,                        \
                                     const std::vector<Matrix<T>>*);

TUCKERKIT_INSTANTIATE(double)
TUCKERKIT_INSTANTIATE(cplx)

#undef TUCKERKIT_INSTANTIATE

}  // namespace tuckerkit
