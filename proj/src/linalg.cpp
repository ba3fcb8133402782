#include "tuckerkit/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "tuckerkit/errors.hpp"

namespace tuckerkit {

namespace {

using Eigen::Index;

template <TensorScalar T>
double magnitude(const T& v) {
  return std::abs(v);
}

template <TensorScalar T>
T unit_phase_conj(const T& p) {
  if constexpr (std::same_as<T, double>) {
    return p < 0 ? -1.0 : 1.0;
  } else {
    return std::conj(p) / std::abs(p);
  }
}

// Pins the phase of each singular pair (largest |u_ij| becomes real positive).
template <TensorScalar T>
void normalize_phases(Matrix<T>& u, Matrix<T>& v) {
  for (Index j = 0; j < u.cols(); ++j) {
    Index imax = 0;
    double best = -1.0;
    for (Index i = 0; i < u.rows(); ++i) {
      const double m = magnitude(u(i, j));
      if (m > best) {
        best = m;
        imax = i;
      }
    }
    if (best <= 0.0) continue;
    const T c = unit_phase_conj(u(imax, j));
    u.col(j) *= c;
    v.col(j) *= c;
    u(imax, j) = T(best);
  }
}

template <TensorScalar T>
ThinSvd<T> svd_square_or_tall(const Matrix<T>& a) {
  Eigen::BDCSVD<Matrix<T>> svd(a, Eigen::ComputeThinU | Eigen::ComputeThinV);
  return {svd.matrixU(), svd.singularValues(), svd.matrixV()};
}

// rows >= cols
template <TensorScalar T>
ThinSvd<T> svd_tall(const Matrix<T>& a) {
  const Index n = a.rows();
  const Index k = a.cols();
  if (n <= k) return svd_square_or_tall(a);
  Eigen::HouseholderQR<Matrix<T>> qr(a);
  const Matrix<T> r = qr.matrixQR().topRows(k).template triangularView<Eigen::Upper>();
  ThinSvd<T> core = svd_square_or_tall(r);
  Matrix<T> u = Matrix<T>::Zero(n, k);
  u.topRows(k) = core.u;
  u.applyOnTheLeft(qr.householderQ());
  return {std::move(u), std::move(core.sigma), std::move(core.v)};
}

template <TensorScalar T>
void check_same_shape(const Matrix<T>& x, const Matrix<T>& y, const char* who) {
  if (x.rows() != y.rows() || x.cols() != y.cols())
    throw DimensionError(std::string(who) + ": basis shapes differ");
  if (x.cols() > x.rows()) throw DimensionError(std::string(who) + ": basis wider than tall");
}

}  // namespace

template <TensorScalar T>
double orthonormality_error(const Matrix<T>& x) {
  const Matrix<T> g = x.adjoint() * x;
  return (g - Matrix<T>::Identity(x.cols(), x.cols())).norm();
}

template <TensorScalar T>
bool is_orthonormal(const Matrix<T>& x, double tol) {
  if (x.cols() > x.rows()) return false;
  if (tol < 0) tol = 1e-12 * std::sqrt(static_cast<double>(x.cols()));
  return orthonormality_error(x) <= tol;
}

template <TensorScalar T>
ThinSvd<T> thin_svd(const Matrix<T>& a) {
  if (a.rows() == 0 || a.cols() == 0) throw DimensionError("thin_svd: empty matrix");
  ThinSvd<T> out;
  if (a.rows() >= a.cols()) {
    out = svd_tall(a);
  } else {
    ThinSvd<T> t = svd_tall<T>(a.adjoint());
    out = {std::move(t.v), std::move(t.sigma), std::move(t.u)};
  }
  normalize_phases(out.u, out.v);
  return out;
}

template <TensorScalar T>
Eigen::VectorXd singular_values(const Matrix<T>& a) {
  if (a.rows() == 0 || a.cols() == 0) return {};
  const Matrix<T> tall = a.rows() >= a.cols() ? a : Matrix<T>(a.adjoint());
  if (tall.rows() > tall.cols()) {
    Eigen::HouseholderQR<Matrix<T>> qr(tall);
    const Matrix<T> r =
        qr.matrixQR().topRows(tall.cols()).template triangularView<Eigen::Upper>();
    return Eigen::BDCSVD<Matrix<T>>(r).singularValues();
  }
  return Eigen::BDCSVD<Matrix<T>>(tall).singularValues();
}

template <TensorScalar T>
HermEig<T> herm_eig(const Matrix<T>& h) {
  if (h.rows() != h.cols()) throw DimensionError("herm_eig: matrix is not square");
  const double hn = h.norm();
  if ((h - h.adjoint()).norm() > 1e-12 * hn)
    throw NumericalError("herm_eig: matrix is not Hermitian within 1e-12 relative");
  const Matrix<T> hs = (h + h.adjoint()) * 0.5;
  Eigen::SelfAdjointEigenSolver<Matrix<T>> es(hs);
  if (es.info() != Eigen::Success) throw NumericalError("herm_eig: eigensolver failed");
  const Index n = h.rows();
  HermEig<T> out{es.eigenvalues().reverse(), es.eigenvectors().rowwise().reverse()};
  Matrix<T> dummy = Matrix<T>::Zero(1, n);
  normalize_phases(out.vectors, dummy);
  return out;
}

template <TensorScalar T>
TopEigenspace<T> top_k_eigvectors(const Matrix<T>& h, std::size_t k) {
  const auto n = static_cast<std::size_t>(h.rows());
  if (k < 1 || k > n) throw DimensionError("top_k_eigvectors: k out of range");
  HermEig<T> eig = herm_eig(h);
  TopEigenspace<T> out{eig.vectors.leftCols(k), std::nullopt};
  if (k < n) out.gap = eig.values(k - 1) - eig.values(k);
  return out;
}

template <TensorScalar T>
StiefelFactor<T> polar_factor(const Matrix<T>& a) {
  if (a.rows() < a.cols()) throw DimensionError("polar_factor: matrix must have rows >= cols");
  const ThinSvd<T> s = thin_svd(a);
  return s.u * s.v.adjoint();
}

template <TensorScalar T>
double trace_norm(const Matrix<T>& a) {
  return singular_values(a).sum();
}

template <TensorScalar T>
Eigen::VectorXd canonical_angles(const StiefelFactor<T>& x, const StiefelFactor<T>& y) {
  check_same_shape(x, y, "canonical_angles");
  const Eigen::VectorXd s = singular_values<T>(x.adjoint() * y);
  Eigen::VectorXd theta(s.size());
  // ascending cosines give descending angles
  for (Index i = 0; i < s.size(); ++i)
    theta(s.size() - 1 - i) = std::acos(std::clamp(s(i), 0.0, 1.0));
  return theta;
}

template <TensorScalar T>
double sin_theta_dist(const StiefelFactor<T>& x, const StiefelFactor<T>& y, SubspaceNorm norm) {
  check_same_shape(x, y, "sin_theta_dist");
  // (I - X X^H) Y has singular values sin(theta_i)
  const Matrix<T> r = y - x * (x.adjoint() * y);
  if (norm == SubspaceNorm::Frobenius) return r.norm();
  return spectral_norm(r);
}

template <TensorScalar T>
StiefelFactor<T> align(const StiefelFactor<T>& x_new, const StiefelFactor<T>& x_ref) {
  check_same_shape(x_new, x_ref, "align");
  return x_new * polar_factor<T>(x_new.adjoint() * x_ref);
}

template <TensorScalar T>
double spectral_norm_estimate(const Matrix<T>& a) {
  if (a.size() == 0) return 0.0;
  const double one = a.cwiseAbs().colwise().sum().maxCoeff();
  const double inf = a.cwiseAbs().rowwise().sum().maxCoeff();
  return std::sqrt(one * inf);
}

template <TensorScalar T>
double spectral_norm(const Matrix<T>& a) {
  if (a.size() == 0) return 0.0;
  return singular_values(a)(0);
}

template <TensorScalar T>
StiefelFactor<T> orthonormalize(const Matrix<T>& a) {
  if (a.rows() < a.cols()) throw DimensionError("orthonormalize: matrix must have rows >= cols");
  Eigen::HouseholderQR<Matrix<T>> qr(a);
  return qr.householderQ() * Matrix<T>::Identity(a.rows(), a.cols());
}

#define TUCKERKIT_INSTANTIATE(T)                                                              \
  template double orthonormality_error(const Matrix<T>&);                                     \
  template bool is_orthonormal(const Matrix<T>&, double);                                     \
  template ThinSvd<T> thin_svd(const Matrix<T>&);                                             \
  template Eigen::VectorXd singular_values(const Matrix<T>&);                                 \
  template HermEig<T> herm_eig(const Matrix<T>&);                                             \
  template TopEigenspace<T> top_k_eigvectors(const Matrix<T>&, std::size_t);                  \
  template StiefelFactor<T> polar_factor(const Matrix<T>&);                                   \
  template double trace_norm(const Matrix<T>&);                                               \
  template Eigen::VectorXd canonical_angles(const StiefelFactor<T>&, const StiefelFactor<T>&); \
  template double sin_theta_dist(const StiefelFactor<T>&, const StiefelFactor<T>&,            \
                                 SubspaceNorm);                                               \
  template StiefelFactor<T> align(const StiefelFactor<T>&, const StiefelFactor<T>&);          \
  template double spectral_norm_estimate(const Matrix<T>&);                                   \
  template double spectral_norm(const Matrix<T>&);                                            \
  template StiefelFactor<T> orthonormalize(const Matrix<T>&);

TUCKERKIT_INSTANTIATE(double)
TUCKERKIT_INSTANTIATE(cplx)

#undef TUCKERKIT_INSTANTIATE

}  // namespace tuckerkit
