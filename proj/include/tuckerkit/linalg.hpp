#pragma once

// Dense factorizations and subspace geometry on orthonormal bases.

#include <optional>

#include "tuckerkit/tensor.hpp"

namespace tuckerkit {

// An n x k matrix with orthonormal columns (a point on the Stiefel manifold).
// Kept as a plain matrix; is_orthonormal() checks the invariant.
template <TensorScalar T>
using StiefelFactor = Matrix<T>;

template <TensorScalar T>
struct ThinSvd {
  Matrix<T> u;              // n x r
  Eigen::VectorXd sigma;    // r, descending, nonnegative
  Matrix<T> v;              // k x r
};

template <TensorScalar T>
struct HermEig {
  Eigen::VectorXd values;   // descending
  Matrix<T> vectors;        // column i pairs with values(i)
};

template <TensorScalar T>
struct TopEigenspace {
  StiefelFactor<T> basis;
  // lambda_k - lambda_{k+1}; empty when k == n.
  std::optional<double> gap;
};

enum class SubspaceNorm { Spectral, Frobenius };

// ||X^H X - I||_F
template <TensorScalar T>
double orthonormality_error(const Matrix<T>& x);

// Default tolerance 1e-12 * sqrt(k).
template <TensorScalar T>
bool is_orthonormal(const Matrix<T>& x, double tol = -1.0);

// Thin SVD with r = min(n, k). Tall inputs are reduced by a Householder QR
// first; wide inputs go through the conjugate transpose. Each singular pair is
// rescaled so that the largest-magnitude entry of the U column is real and
// positive (first such entry on ties), which makes the result deterministic.
template <TensorScalar T>
ThinSvd<T> thin_svd(const Matrix<T>& a);

// Singular values only, descending.
template <TensorScalar T>
Eigen::VectorXd singular_values(const Matrix<T>& a);

// Eigendecomposition of a Hermitian matrix, values descending. The input is
// symmetrized; throws NumericalError when ||H - H^H||_F > 1e-12 ||H||_F.
template <TensorScalar T>
HermEig<T> herm_eig(const Matrix<T>& h);

template <TensorScalar T>
TopEigenspace<T> top_k_eigvectors(const Matrix<T>& h, std::size_t k);

// U V^H from the thin SVD; orthonormal even for rank-deficient input.
// Requires rows >= cols.
template <TensorScalar T>
StiefelFactor<T> polar_factor(const Matrix<T>& a);

template <TensorScalar T>
double trace_norm(const Matrix<T>& a);

// Angles descending, each in [0, pi/2].
template <TensorScalar T>
Eigen::VectorXd canonical_angles(const StiefelFactor<T>& x, const StiefelFactor<T>& y);

template <TensorScalar T>
double sin_theta_dist(const StiefelFactor<T>& x, const StiefelFactor<T>& y, SubspaceNorm norm);

// x_new * Q with Q the polar factor of x_new^H x_ref: the basis of range(x_new)
// closest to x_ref.
template <TensorScalar T>
StiefelFactor<T> align(const StiefelFactor<T>& x_new, const StiefelFactor<T>& x_ref);

// sqrt(||A||_1 ||A||_inf), an upper bound on ||A||_2.
template <TensorScalar T>
double spectral_norm_estimate(const Matrix<T>& a);

template <TensorScalar T>
double spectral_norm(const Matrix<T>& a);

// Orthonormal basis of range(a) from a Householder QR (a must be tall).
template <TensorScalar T>
StiefelFactor<T> orthonormalize(const Matrix<T>& a);

}  // namespace tuckerkit
