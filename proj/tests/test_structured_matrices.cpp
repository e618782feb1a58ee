#include <doctest.h>

#include <random>

#include <Eigen/LU>

#include "indexfiber/index_oracle.hpp"
#include "indexfiber/structured_matrices.hpp"

using namespace indexfiber;

namespace {

std::vector<Rational> distinct_alphas(std::mt19937_64& rng, std::size_t n) {
  std::uniform_int_distribution<int> num(-15, 15);
  std::uniform_int_distribution<int> den(1, 6);
  std::vector<Rational> out;
  while (out.size() < n) {
    Rational a(num(rng), den(rng));
    if (std::find(out.begin(), out.end(), a) == out.end()) out.push_back(a);
  }
  return out;
}

// compositions of total into at most max_parts positive parts
void compositions(int total, int max_parts, std::vector<int>& prefix, std::vector<std::vector<int>>& out) {
  if (total == 0) {
    if (!prefix.empty()) out.push_back(prefix);
    return;
  }
  if (static_cast<int>(prefix.size()) == max_parts) return;
  for (int p = 1; p <= total; ++p) {
    prefix.push_back(p);
    compositions(total - p, max_parts, prefix, out);
    prefix.pop_back();
  }
}

}  // namespace

TEST_CASE("binomial table") {
  CHECK(binomial(5, 2) == 10);
  CHECK(binomial(0, 0) == 1);
  CHECK(binomial(3, 5) == 0);
  CHECK(binomial(3, -1) == 0);
  CHECK(binomial(60, 30) == 118264581564861424LL);
}

TEST_CASE("binomial block entries") {
  const Rational a(2, 3);
  const auto block = binomial_block<Rational>(5, 1, 4, 2, a);
  REQUIRE(block.rows() == 4);
  REQUIRE(block.cols() == 2);
  for (int i = 1; i <= 4; ++i)
    for (int j = 1; j <= 2; ++j) {
      const int e = (i + 1) - (j + 2);
      const Rational expected = e < 0 ? Rational(0) : Rational(binomial(i, j + 1)) * ipow(a, e);
      CHECK(block(i - 1, j - 1) == expected);
    }
  CHECK_THROWS_AS(binomial_block<Rational>(2, 2, 3, 0, a), ArgumentError);
}

TEST_CASE("exact determinant of a known matrix") {
  Matrix<Rational> m(3, 3);
  m << 0, 2, 1, 1, 1, 1, 3, 0, Rational(1, 2);
  CHECK(determinant<Rational>(m) == Rational(2));
  CHECK_THROWS_AS(determinant<Rational>(Matrix<Rational>(2, 3)), ArgumentError);
}

TEST_CASE("block determinant identities, every block pattern with total <= 6 and l <= 4") {
  std::mt19937_64 rng(5);
  std::vector<std::vector<int>> patterns;
  for (int total = 1; total <= 6; ++total) {
    std::vector<int> prefix;
    compositions(total, 4, prefix, patterns);
  }
  for (const auto& r : patterns) {
    for (int trial = 0; trial < 5; ++trial) {
      const auto alpha = distinct_alphas(rng, r.size());
      CHECK(block_determinant_identity<Rational>(r, alpha).holds());
      CHECK(shifted_determinant_identity<Rational>(r, alpha).holds());
    }
  }
}

TEST_CASE("determinant identities over Gaussian rationals") {
  const std::vector<int> r{2, 1, 3};
  const std::vector<GaussianRational> alpha{GaussianRational(Rational(1), Rational(1)), GaussianRational(Rational(-1, 2)),
                                            GaussianRational(Rational(0), Rational(2))};
  CHECK(block_determinant_identity<GaussianRational>(r, alpha).holds());
  CHECK(shifted_determinant_identity<GaussianRational>(r, alpha).holds());
}

TEST_CASE("determinant identity rejects repeated alphas and length mismatch") {
  const std::vector<int> r{1, 2};
  const std::vector<Rational> same{Rational(1), Rational(1)};
  CHECK_THROWS(block_determinant_identity<Rational>(r, same));
  const std::vector<Rational> short_alpha{Rational(1)};
  CHECK_THROWS_AS(block_determinant_identity<Rational>(r, short_alpha), ArgumentError);
}

TEST_CASE("similarity identity for n, b <= 8") {
  std::mt19937_64 rng(6);
  for (int n = 1; n <= 8; ++n)
    for (int b = 1; b <= 8; ++b) CHECK(similarity_identity<Rational>(n, b, distinct_alphas(rng, 1)[0]));
}

TEST_CASE("kernel annihilation for all profiles with d <= 8") {
  std::mt19937_64 rng(7);
  for (int d = 3; d <= 8; ++d) {
    for (const auto& profile : profiles_of_degree(d)) {
      if (profile.ell() < 3) continue;
      std::vector<int> reduced;
      for (int p : profile.parts()) reduced.push_back(p - 1);
      CHECK(kernel_annihilation_check<Rational>(reduced, distinct_alphas(rng, reduced.size()), profile.ell()));
    }
  }
}

TEST_CASE("complex determinant agrees with Eigen") {
  std::mt19937_64 rng(8);
  std::normal_distribution<double> g;
  Matrix<Complex> m(5, 5);
  for (int i = 0; i < 5; ++i)
    for (int j = 0; j < 5; ++j) m(i, j) = Complex(g(rng), g(rng));
  const Complex ours = determinant<Complex>(m);
  const Complex ref = m.determinant();
  CHECK(std::abs(ours - ref) <= 1e-12 * std::abs(ref));
}
