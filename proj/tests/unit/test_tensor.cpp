#include <doctest.h>

#include "oracles.hpp"
#include "tuckerkit/errors.hpp"
#include "tuckerkit/tensor.hpp"

using namespace tuckerkit;

namespace {

// b_{ijk} = i + 2(j-1) + 4(k-1) with 1-based indices, i.e. 1..8 in storage order
DenseTensor<double> counting_cube() {
  return DenseTensor<double>({2, 2, 2}, {1, 2, 3, 4, 5, 6, 7, 8});
}

Dims random_dims(std::mt19937_64& rng, std::size_t max_order = 4, std::size_t max_n = 5) {
  std::uniform_int_distribution<std::size_t> order(1, max_order), n(1, max_n);
  Dims d(order(rng));
  for (auto& x : d) x = n(rng);
  return d;
}

}  // namespace

TEST_SUITE("tensor") {
  TEST_CASE("construction validates dims and data length") {
    CHECK_THROWS_AS(DenseTensor<double>(Dims{}), DimensionError);
    CHECK_THROWS_AS(DenseTensor<double>(Dims{2, 0}), DimensionError);
    CHECK_THROWS_AS(DenseTensor<double>({2, 2}, {1, 2, 3}), DimensionError);
    const DenseTensor<double> t({2, 3});
    CHECK(t.size() == 6);
    CHECK(t.kind() == ScalarKind::Real64);
    CHECK(DenseTensor<cplx>::kind() == ScalarKind::Complex128);
  }

  TEST_CASE("indexing is colexicographic") {
    const auto b = counting_cube();
    CHECK(b({0, 0, 0}) == 1);
    CHECK(b({1, 0, 0}) == 2);
    CHECK(b({0, 1, 0}) == 3);
    CHECK(b({0, 0, 1}) == 5);
    CHECK(b({1, 1, 1}) == 8);
    CHECK_THROWS_AS(b({2, 0, 0}), DimensionError);
    CHECK_THROWS_AS(b({0, 0}), DimensionError);
  }

  TEST_CASE("frobenius norm") {
    CHECK(frobenius_norm(DenseTensor<double>({3, 4, 2})) == 0.0);
    CHECK(frobenius_norm(DenseTensor<double>({2, 2}, {1, 1, 1, 1})) == 2.0);
    std::mt19937_64 rng(1);
    const auto b = oracle::random_tensor<cplx>({3, 4, 5}, rng);
    CHECK(frobenius_norm(b) == doctest::Approx(oracle::norm(b)).epsilon(1e-14));
  }

  TEST_CASE("frobenius norm does not overflow or underflow") {
    const DenseTensor<double> big({2}, {3e200, 4e200});
    CHECK(frobenius_norm(big) == doctest::Approx(5e200).epsilon(1e-15));
    const DenseTensor<double> tiny({2}, {3e-200, 4e-200});
    CHECK(frobenius_norm(tiny) == doctest::Approx(5e-200).epsilon(1e-15));
  }

  TEST_CASE("unfold of the counting cube") {
    const auto b = counting_cube();
    Matrix<double> expect(2, 4);
    expect << 1, 3, 5, 7, 2, 4, 6, 8;
    CHECK(unfold(b, 0) == expect);
    CHECK(unfold(b, 0) == oracle::unfold(b, 0));
    CHECK(unfold(b, 1) == oracle::unfold(b, 1));
    CHECK(unfold(b, 2) == oracle::unfold(b, 2));
    CHECK_THROWS_AS(unfold(b, 3), DimensionError);
  }

  TEST_CASE("unfold of a matrix is the matrix") {
    std::mt19937_64 rng(2);
    const auto b = oracle::random_tensor<double>({4, 3}, rng);
    const Matrix<double> m = Eigen::Map<const Matrix<double>>(b.data().data(), 4, 3);
    CHECK(unfold(b, 0) == m);
    CHECK(unfold(b, 1) == m.transpose());
  }

  TEST_CASE("unfold matches the index-loop oracle and preserves the norm") {
    std::mt19937_64 rng(3);
    for (int trial = 0; trial < 40; ++trial) {
      const Dims d = random_dims(rng);
      const auto b = oracle::random_tensor<cplx>(d, rng);
      for (std::size_t l = 0; l < d.size(); ++l) {
        const Matrix<cplx> u = unfold(b, l);
        CHECK(u == oracle::unfold(b, l));
        CHECK(u.norm() == doctest::Approx(frobenius_norm(b)).epsilon(1e-14));
      }
    }
  }

  TEST_CASE("fold inverts unfold bit-exactly") {
    const auto b = counting_cube();
    CHECK(fold<double>(unfold(b, 0), 0, b.dims()) == b);
    std::mt19937_64 rng(4);
    for (int trial = 0; trial < 50; ++trial) {
      const Dims d = random_dims(rng);
      const auto t = oracle::random_tensor<double>(d, rng);
      const std::size_t l = std::uniform_int_distribution<std::size_t>(0, d.size() - 1)(rng);
      CHECK(fold<double>(unfold(t, l), l, d) == t);
    }
  }

  TEST_CASE("fold with degenerate dims and bad shapes") {
    Matrix<double> m(2, 1);
    m << 5, 6;
    const auto t = fold<double>(m, 0, {2, 1, 1});
    CHECK(t.dims() == Dims{2, 1, 1});
    CHECK(t({0, 0, 0}) == 5);
    CHECK(t({1, 0, 0}) == 6);
    CHECK_THROWS_AS(fold<double>(m, 0, {3, 1, 1}), DimensionError);
  }

  TEST_CASE("mode_mul examples") {
    const auto b = counting_cube();
    CHECK(mode_mul<double>(b, 1, Matrix<double>::Identity(2, 2)) == b);
    Matrix<double> ones(1, 2);
    ones << 1, 1;
    const auto r = mode_mul(b, 0, ones);
    CHECK(r.dims() == Dims{1, 2, 2});
    CHECK(std::vector<double>(r.data().begin(), r.data().end()) ==
          std::vector<double>{3, 7, 11, 15});
    CHECK_THROWS_AS(mode_mul<double>(b, 0, Matrix<double>::Ones(2, 3)), DimensionError);
    CHECK_THROWS_AS(mode_mul<double>(b, 5, ones), DimensionError);
  }

  TEST_CASE("mode_mul commutes with unfolding and matches the loop oracle") {
    std::mt19937_64 rng(5);
    for (int trial = 0; trial < 30; ++trial) {
      const Dims d = random_dims(rng, 4, 6);
      const auto b = oracle::random_tensor<cplx>(d, rng);
      const std::size_t l = std::uniform_int_distribution<std::size_t>(0, d.size() - 1)(rng);
      const auto x = oracle::random_matrix<cplx>(3, static_cast<Eigen::Index>(d[l]), rng);
      const auto r = mode_mul(b, l, x);
      const Matrix<cplx> lhs = unfold(r, l);
      const Matrix<cplx> rhs = x * unfold(b, l);
      CHECK(oracle::rel_diff(lhs, rhs) <= 1e-14);
      CHECK(oracle::rel_diff(r, oracle::mode_mul(b, l, x)) <= 1e-14);
    }
  }

  TEST_CASE("unitary mode_mul preserves the norm") {
    std::mt19937_64 rng(6);
    const auto b = oracle::random_tensor<cplx>({5, 4, 3}, rng);
    for (std::size_t l = 0; l < 3; ++l) {
      const auto q = oracle::random_unitary<cplx>(static_cast<Eigen::Index>(b.dim(l)), rng);
      CHECK(frobenius_norm(mode_mul(b, l, q)) ==
            doctest::Approx(frobenius_norm(b)).epsilon(1e-13));
    }
  }

  TEST_CASE("multi_mode_mul") {
    std::mt19937_64 rng(7);
    const auto b = oracle::random_tensor<double>({3, 4, 5}, rng);
    CHECK(multi_mode_mul<double>(b, {}) == b);

    const auto x = oracle::random_matrix<double>(2, 3, rng);
    const auto y = oracle::random_matrix<double>(6, 4, rng);
    const std::vector<ModeProduct<double>> xy{{0, x}, {1, y}}, yx{{1, y}, {0, x}};
    CHECK(oracle::rel_diff(multi_mode_mul<double>(b, xy), multi_mode_mul<double>(b, yx)) <= 1e-14);

    std::vector<ModeProduct<double>> ids;
    for (std::size_t l = 0; l < 3; ++l)
      ids.push_back({l, Matrix<double>::Identity(b.dim(l), b.dim(l))});
    CHECK(multi_mode_mul<double>(b, ids) == b);

    const std::vector<ModeProduct<double>> twice{{0, x}, {0, x}};
    CHECK_THROWS_AS(multi_mode_mul<double>(b, twice), DimensionError);
  }

  TEST_CASE("multiply-add counter") {
    std::mt19937_64 rng(8);
    const auto b = oracle::random_tensor<double>({6, 5, 4}, rng);
    const auto x = oracle::random_matrix<double>(3, 5, rng);
    madd_counter::reset();
    (void)mode_mul(b, 1, x);
    // every output entry is a length-5 dot product
    CHECK(madd_counter::value() == 6u * 3u * 4u * 5u);
  }
}
