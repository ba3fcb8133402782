#include <doctest.h>

#include <numbers>

#include "oracles.hpp"
#include "tuckerkit/errors.hpp"
#include "tuckerkit/linalg.hpp"

using namespace tuckerkit;

namespace {

template <typename T>
double svd_residual(const Matrix<T>& a, const ThinSvd<T>& s) {
  return (a - s.u * s.sigma.asDiagonal() * s.v.adjoint()).norm();
}

template <typename T>
void check_phase_convention(const Matrix<T>& u) {
  for (Eigen::Index j = 0; j < u.cols(); ++j) {
    Eigen::Index imax = 0;
    u.col(j).cwiseAbs().maxCoeff(&imax);
    CHECK(std::abs(std::imag(std::complex<double>(u(imax, j)))) == 0.0);
    CHECK(std::real(std::complex<double>(u(imax, j))) > 0.0);
  }
}

}  // namespace

TEST_SUITE("linalg") {
  TEST_CASE_TEMPLATE("thin_svd factorizes and orders", T, double, cplx) {
    std::mt19937_64 rng(1);
    for (auto [n, k] : {std::pair{50, 6}, {6, 50}, {7, 7}, {1, 4}, {4, 1}}) {
      const auto a = oracle::random_matrix<T>(n, k, rng);
      const auto s = thin_svd<T>(a);
      const Eigen::Index r = std::min(n, k);
      CHECK(s.u.cols() == r);
      CHECK(s.v.cols() == r);
      CHECK(s.sigma.size() == r);
      CHECK(svd_residual(a, s) <= 1e-12 * a.norm());
      CHECK(is_orthonormal<T>(s.u));
      CHECK(is_orthonormal<T>(s.v));
      for (Eigen::Index i = 1; i < r; ++i) CHECK(s.sigma(i) <= s.sigma(i - 1));
      check_phase_convention<T>(s.u);
    }
  }

  TEST_CASE("thin_svd of a diagonal") {
    Matrix<double> a(2, 2);
    a << 3, 0, 0, 2;
    const auto s = thin_svd<double>(a);
    CHECK(s.sigma(0) == doctest::Approx(3));
    CHECK(s.sigma(1) == doctest::Approx(2));
    CHECK((s.u - Matrix<double>::Identity(2, 2)).norm() <= 1e-15);
    CHECK((s.v - Matrix<double>::Identity(2, 2)).norm() <= 1e-15);
  }

  TEST_CASE("thin_svd of a rank-deficient matrix") {
    std::mt19937_64 rng(2);
    Matrix<double> a = oracle::random_matrix<double>(30, 5, rng);
    a.col(3) = a.col(1);
    const auto s = thin_svd<double>(a);
    CHECK(s.sigma(4) <= 1e-14 * s.sigma(0));
    CHECK(svd_residual(a, s) <= 1e-12 * a.norm());
    CHECK(is_orthonormal<double>(s.u));
  }

  TEST_CASE("thin_svd is deterministic") {
    std::mt19937_64 rng(3);
    const auto a = oracle::random_matrix<cplx>(40, 8, rng);
    const auto s1 = thin_svd<cplx>(a), s2 = thin_svd<cplx>(a);
    CHECK(s1.u == s2.u);
    CHECK(s1.v == s2.v);
    CHECK(s1.sigma == s2.sigma);
  }

  TEST_CASE("singular values agree with the Gram eigenvalue oracle") {
    std::mt19937_64 rng(4);
    const auto a = oracle::random_matrix<cplx>(50, 6, rng);
    const Eigen::VectorXd s = singular_values<cplx>(a);
    Eigen::SelfAdjointEigenSolver<Matrix<cplx>> es(a.adjoint() * a);
    for (Eigen::Index i = 0; i < 6; ++i)
      CHECK(s(i) == doctest::Approx(std::sqrt(es.eigenvalues()(5 - i))).epsilon(1e-10));
    const Eigen::VectorXd j = oracle::jacobi_singular_values<cplx>(a);
    CHECK((s - j).norm() <= 1e-12 * j(0));
  }

  TEST_CASE("herm_eig") {
    CHECK(herm_eig<double>(Matrix<double>::Identity(3, 3)).values == Eigen::Vector3d(1, 1, 1));
    const auto d = herm_eig<double>(Eigen::Vector3d(5, -1, 2).asDiagonal().toDenseMatrix());
    CHECK(d.values == Eigen::Vector3d(5, 2, -1));

    std::mt19937_64 rng(5);
    const auto c = oracle::random_matrix<cplx>(7, 4, rng);
    const Matrix<cplx> h = c * c.adjoint();
    const auto e = herm_eig<cplx>(h);
    const Eigen::VectorXd s = oracle::jacobi_singular_values<cplx>(c);
    for (Eigen::Index i = 0; i < 7; ++i) {
      const double want = i < 4 ? s(i) * s(i) : 0.0;
      CHECK(std::abs(e.values(i) - want) <= 1e-10 * e.values(0));
    }
    CHECK((h * e.vectors - e.vectors * e.values.asDiagonal()).norm() <= 1e-11 * h.norm());
    CHECK(is_orthonormal<cplx>(e.vectors));
  }

  TEST_CASE("herm_eig rejects non-Hermitian input") {
    Matrix<double> a(2, 2);
    a << 1, 2, 0, 1;
    CHECK_THROWS_AS(herm_eig<double>(a), NumericalError);
    CHECK_THROWS_AS(herm_eig<double>(Matrix<double>::Ones(2, 3)), DimensionError);
  }

  TEST_CASE("top_k_eigvectors") {
    const auto t = top_k_eigvectors<double>(Eigen::Vector3d(4, 3, 1).asDiagonal().toDenseMatrix(), 2);
    CHECK(t.gap.has_value());
    CHECK(*t.gap == doctest::Approx(2));
    CHECK(oracle::projector_sin_theta<double>(t.basis, Matrix<double>::Identity(3, 2)) <= 1e-15);

    const auto full = top_k_eigvectors<double>(Matrix<double>::Identity(3, 3), 3);
    CHECK_FALSE(full.gap.has_value());
    CHECK(is_orthonormal<double>(full.basis));
    CHECK(full.basis.cols() == 3);
    CHECK_THROWS_AS(top_k_eigvectors<double>(Matrix<double>::Identity(3, 3), 0), DimensionError);
    CHECK_THROWS_AS(top_k_eigvectors<double>(Matrix<double>::Identity(3, 3), 4), DimensionError);
  }

  TEST_CASE("top_k_eigvectors maximizes the trace against random samples") {
    std::mt19937_64 rng(6);
    const auto c = oracle::random_matrix<double>(10, 10, rng);
    const Matrix<double> h = c * c.transpose();
    const auto t = top_k_eigvectors<double>(h, 3);
    const double best = (t.basis.transpose() * h * t.basis).trace();
    for (int i = 0; i < 1000; ++i) {
      const auto p = oracle::random_stiefel<double>(10, 3, rng);
      CHECK((p.transpose() * h * p).trace() <= best + 1e-10 * best);
    }
  }

  TEST_CASE("polar_factor examples") {
    Matrix<double> a(3, 2);
    a << 2, 0, 0, 3, 0, 0;
    CHECK((polar_factor<double>(a) - Matrix<double>::Identity(3, 2)).norm() <= 1e-15);
    std::mt19937_64 rng(7);
    const auto q = oracle::random_stiefel<cplx>(9, 4, rng);
    CHECK((polar_factor<cplx>(q) - q).norm() <= 1e-13);
    const auto b = oracle::random_matrix<cplx>(9, 4, rng);
    const auto p = polar_factor<cplx>(b);
    CHECK(std::real((p.adjoint() * b).trace()) ==
          doctest::Approx(trace_norm<cplx>(b)).epsilon(1e-11));
    CHECK_THROWS_AS(polar_factor<double>(Matrix<double>::Ones(2, 3)), DimensionError);
  }

  TEST_CASE("polar_factor stays orthonormal for rank-deficient input") {
    Matrix<double> a = Matrix<double>::Zero(6, 3);
    a(0, 0) = 1;
    a(1, 1) = 1e-300;
    const auto p = polar_factor<double>(a);
    CHECK(is_orthonormal<double>(p));
    CHECK(is_orthonormal<double>(polar_factor<double>(Matrix<double>::Zero(5, 2))));
  }

  TEST_CASE("trace_norm") {
    CHECK(trace_norm<double>(Matrix<double>::Zero(3, 2)) == 0.0);
    CHECK(trace_norm<double>(Eigen::Vector2d(3, 2).asDiagonal().toDenseMatrix()) ==
          doctest::Approx(5));
    std::mt19937_64 rng(8);
    const auto a = oracle::random_matrix<cplx>(8, 3, rng);
    const double tn = trace_norm<cplx>(a);
    for (int i = 0; i < 100; ++i) {
      const auto p = oracle::random_stiefel<cplx>(8, 3, rng);
      CHECK(std::real((p.adjoint() * a).trace()) <= tn);
    }
  }

  TEST_CASE("canonical angles") {
    const Matrix<double> e1 = Matrix<double>::Identity(2, 1);
    const Matrix<double> e2 = Matrix<double>::Identity(2, 2).col(1);
    Matrix<double> d(2, 1);
    d << 1 / std::sqrt(2.0), 1 / std::sqrt(2.0);
    CHECK(canonical_angles<double>(e1, e1)(0) == 0.0);
    CHECK(canonical_angles<double>(e1, e2)(0) == doctest::Approx(std::numbers::pi / 2));
    CHECK(canonical_angles<double>(e1, d)(0) == doctest::Approx(std::numbers::pi / 4));
    CHECK_THROWS_AS(canonical_angles<double>(e1, Matrix<double>::Identity(3, 1)), DimensionError);
  }

  TEST_CASE("sin-theta distances") {
    const Matrix<double> e1 = Matrix<double>::Identity(2, 1);
    const Matrix<double> e2 = Matrix<double>::Identity(2, 2).col(1);
    CHECK(sin_theta_dist<double>(e1, e1, SubspaceNorm::Frobenius) == 0.0);
    CHECK(sin_theta_dist<double>(e1, e2, SubspaceNorm::Frobenius) == doctest::Approx(1));
    CHECK(sin_theta_dist<double>(e1, e2, SubspaceNorm::Spectral) == doctest::Approx(1));

    std::mt19937_64 rng(9);
    for (int i = 0; i < 20; ++i) {
      const auto x = oracle::random_stiefel<cplx>(12, 4, rng);
      const auto y = oracle::random_stiefel<cplx>(12, 4, rng);
      const double f = sin_theta_dist<cplx>(x, y, SubspaceNorm::Frobenius);
      const Eigen::VectorXd th = canonical_angles<cplx>(x, y);
      CHECK(f == doctest::Approx(th.array().sin().matrix().norm()).epsilon(1e-12));
      CHECK(f == doctest::Approx(oracle::projector_sin_theta<cplx>(x, y)).epsilon(1e-12));
      const Matrix<cplx> dp = x * x.adjoint() - y * y.adjoint();
      CHECK(sin_theta_dist<cplx>(x, y, SubspaceNorm::Spectral) ==
            doctest::Approx(oracle::jacobi_singular_values<cplx>(dp)(0)).epsilon(1e-12));
      CHECK(sin_theta_dist<cplx>(y, x, SubspaceNorm::Frobenius) == doctest::Approx(f).epsilon(1e-14));
    }
  }

  TEST_CASE("align") {
    std::mt19937_64 rng(10);
    const auto y = oracle::random_stiefel<cplx>(10, 3, rng);
    CHECK((align<cplx>(y, y) - y).norm() <= 1e-13);
    const auto q = oracle::random_unitary<cplx>(3, rng);
    CHECK((align<cplx>(y * q, y) - y).norm() <= 1e-12);

    const auto x = oracle::random_stiefel<cplx>(10, 3, rng);
    const auto a = align<cplx>(x, y);
    const Eigen::VectorXd th = canonical_angles<cplx>(x, y);
    const double lhs = (a - y).norm();
    CHECK(lhs == doctest::Approx(2 * (th.array() / 2).sin().matrix().norm()).epsilon(1e-11));
    CHECK(oracle::projector_sin_theta<cplx>(a, x) <= 1e-12);
  }

  TEST_CASE("spectral norm estimate bounds the spectral norm") {
    CHECK(spectral_norm_estimate<double>(Matrix<double>::Identity(4, 4)) == 1.0);
    CHECK(spectral_norm_estimate<double>(Matrix<double>::Ones(5, 5)) == doctest::Approx(5));
    CHECK(spectral_norm<double>(Matrix<double>::Ones(5, 5)) == doctest::Approx(5));
    std::mt19937_64 rng(11);
    const auto a = oracle::random_matrix<double>(100, 40, rng);
    CHECK(spectral_norm_estimate<double>(a) >= oracle::jacobi_singular_values<double>(a)(0));
  }

  TEST_CASE("orthonormalize spans the input") {
    std::mt19937_64 rng(12);
    const auto a = oracle::random_matrix<cplx>(9, 4, rng);
    const auto q = orthonormalize<cplx>(a);
    CHECK(is_orthonormal<cplx>(q));
    CHECK((a - q * (q.adjoint() * a)).norm() <= 1e-13 * a.norm());
    CHECK(orthonormality_error<double>(Matrix<double>::Identity(3, 2)) == 0.0);
    CHECK_FALSE(is_orthonormal<double>(Matrix<double>::Ones(3, 2)));
  }
}
