#pragma once

// Binomial-Vandermonde blocks and the companion matrices X_b, I_b, N_b,
// templated on the scalar so the same code serves the exact identity checks
// (Rational, GaussianRational) and the floating solver path (Complex).

#include <cstdint>
#include <span>
#include <type_traits>
#include <vector>

#include <Eigen/Core>

#include "indexfiber/errors.hpp"
#include "indexfiber/gaussian_rational.hpp"

namespace indexfiber {

template <typename Scalar>
using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
template <typename Scalar>
using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

// C(n, k) from a Pascal table built once; zero outside 0 <= k <= n.
// Valid for n < 62 (the table is exact in 64 bits there).
std::int64_t binomial(int n, int k);

// The (n-k) x (b-h) block with entry(i,j) = C(i+k-1, j+h-1) * alpha^{(i+k)-(j+h)},
// i and j 1-based. Requires n > k >= 0 and b > h >= 0.
template <typename Scalar>
Matrix<Scalar> binomial_block(int n, int k, int b, int h, const Scalar& alpha) {
  if (k < 0 || h < 0 || n <= k || b <= h) {
    throw ArgumentError("binomial_block: need n > k >= 0 and b > h >= 0");
  }
  const int rows = n - k;
  const int cols = b - h;
  // powers[p] = alpha^p for 0 <= p < n
  std::vector<Scalar> powers(static_cast<std::size_t>(n), Scalar(1));
  for (int p = 1; p < n; ++p) powers[p] = powers[p - 1] * alpha;
  Matrix<Scalar> block(rows, cols);
  for (int i = 1; i <= rows; ++i) {
    for (int j = 1; j <= cols; ++j) {
      const int top = i + k - 1;
      const int bottom = j + h - 1;
      if (top < bottom) {
        block(i - 1, j - 1) = Scalar(0);
      } else {
        block(i - 1, j - 1) = Scalar(static_cast<long long>(binomial(top, bottom))) * powers[top - bottom];
      }
    }
  }
  return block;
}

// A_n^b(alpha)
template <typename Scalar>
Matrix<Scalar> binomial_block(int n, int b, const Scalar& alpha) {
  return binomial_block<Scalar>(n, 0, b, 0, alpha);
}

template <typename Scalar>
Matrix<Scalar> identity_matrix(int b) {
  Matrix<Scalar> m = Matrix<Scalar>::Constant(b, b, Scalar(0));
  for (int i = 0; i < b; ++i) m(i, i) = Scalar(1);
  return m;
}

// X_b = diag(1, 2, ..., b)
template <typename Scalar>
Matrix<Scalar> counting_diagonal(int b) {
  Matrix<Scalar> m = Matrix<Scalar>::Constant(b, b, Scalar(0));
  for (int i = 0; i < b; ++i) m(i, i) = Scalar(i + 1);
  return m;
}

// X_b^{-1} = diag(1, 1/2, ..., 1/b)
template <typename Scalar>
Matrix<Scalar> counting_diagonal_inverse(int b) {
  Matrix<Scalar> m = Matrix<Scalar>::Constant(b, b, Scalar(0));
  for (int i = 0; i < b; ++i) m(i, i) = Scalar(1) / Scalar(i + 1);
  return m;
}

// N_b: ones on the superdiagonal.
template <typename Scalar>
Matrix<Scalar> shift_nilpotent(int b) {
  Matrix<Scalar> m = Matrix<Scalar>::Constant(b, b, Scalar(0));
  for (int i = 0; i + 1 < b; ++i) m(i, i + 1) = Scalar(1);
  return m;
}

template <typename Scalar>
Matrix<Scalar> matrix_power(const Matrix<Scalar>& m, int exponent) {
  Matrix<Scalar> result = identity_matrix<Scalar>(static_cast<int>(m.rows()));
  for (int e = 0; e < exponent; ++e) result = (result * m).eval();
  return result;
}

template <typename Scalar>
bool is_zero_matrix(const Matrix<Scalar>& m) {
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j)
      if (!is_exact_zero(m(i, j))) return false;
  return true;
}

template <typename Scalar>
bool exactly_equal(const Matrix<Scalar>& a, const Matrix<Scalar>& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) return false;
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      if (a(i, j) != b(i, j)) return false;
  return true;
}

// Gaussian elimination. Exact scalars pivot on the first nonzero entry;
// Complex uses partial pivoting by modulus.
template <typename Scalar>
Scalar determinant(Matrix<Scalar> m) {
  if (m.rows() != m.cols()) throw ArgumentError("determinant: matrix is not square");
  const Eigen::Index n = m.rows();
  Scalar det(1);
  for (Eigen::Index c = 0; c < n; ++c) {
    Eigen::Index pivot = -1;
    if constexpr (std::is_same_v<Scalar, Complex>) {
      double best = 0.0;
      for (Eigen::Index r = c; r < n; ++r) {
        if (std::abs(m(r, c)) > best) {
          best = std::abs(m(r, c));
          pivot = r;
        }
      }
    } else {
      for (Eigen::Index r = c; r < n; ++r) {
        if (!is_exact_zero(m(r, c))) {
          pivot = r;
          break;
        }
      }
    }
    if (pivot < 0) return Scalar(0);
    if (pivot != c) {
      m.row(pivot).swap(m.row(c));
      det = -det;
    }
    const Scalar p = m(c, c);
    det *= p;
    for (Eigen::Index r = c + 1; r < n; ++r) {
      if (is_exact_zero(m(r, c))) continue;
      const Scalar factor = m(r, c) / p;
      for (Eigen::Index k = c + 1; k < n; ++k) m(r, k) -= factor * m(c, k);
    }
  }
  return det;
}

template <typename Scalar>
struct IdentitySides {
  Scalar lhs;
  Scalar rhs;
  bool holds() const { return lhs == rhs; }
};

namespace detail {

template <typename Scalar>
void require_distinct(std::span<const Scalar> alpha) {
  for (std::size_t v = 0; v < alpha.size(); ++v)
    for (std::size_t u = v + 1; u < alpha.size(); ++u)
      if (alpha[u] == alpha[v]) throw ArgumentError("determinant identity: repeated alpha");
}

template <typename Scalar>
Scalar vandermonde_power_product(std::span<const int> r, std::span<const Scalar> alpha) {
  Scalar product(1);
  for (std::size_t v = 0; v < r.size(); ++v)
    for (std::size_t u = v + 1; u < r.size(); ++u)
      product *= ipow(alpha[u] - alpha[v], r[v] * r[u]);
  return product;
}

inline void require_block_sizes(std::span<const int> r, std::size_t n_alpha) {
  if (r.empty() || r.size() != n_alpha) throw ArgumentError("determinant identity: length mismatch");
  for (int rv : r)
    if (rv < 1) throw ArgumentError("determinant identity: block sizes must be positive");
}

}  // namespace detail

// det(A_r^{r_1}(a_1), ..., A_r^{r_l}(a_l)) against prod_{v<u} (a_u - a_v)^{r_v r_u}.
template <typename Scalar>
IdentitySides<Scalar> block_determinant_identity(std::span<const int> r, std::span<const Scalar> alpha) {
  detail::require_block_sizes(r, alpha.size());
  detail::require_distinct(alpha);
  int total = 0;
  for (int rv : r) total += rv;
  Matrix<Scalar> m(total, total);
  int col = 0;
  for (std::size_t v = 0; v < r.size(); ++v) {
    m.block(0, col, total, r[v]) = binomial_block<Scalar>(total, r[v], alpha[v]);
    col += r[v];
  }
  return {determinant<Scalar>(std::move(m)), detail::vandermonde_power_product(r, alpha)};
}

// The same with blocks A_{r+1,1}^{r_u+1,1}(a_u); the right side gains r!/(r_1!...r_l!).
template <typename Scalar>
IdentitySides<Scalar> shifted_determinant_identity(std::span<const int> r, std::span<const Scalar> alpha) {
  detail::require_block_sizes(r, alpha.size());
  detail::require_distinct(alpha);
  int total = 0;
  for (int rv : r) total += rv;
  Matrix<Scalar> m(total, total);
  int col = 0;
  for (std::size_t v = 0; v < r.size(); ++v) {
    m.block(0, col, total, r[v]) = binomial_block<Scalar>(total + 1, 1, r[v] + 1, 1, alpha[v]);
    col += r[v];
  }
  // multinomial coefficient as a product of binomials, exact in 64 bits for total < 62
  std::int64_t multinomial = 1;
  int running = 0;
  for (int rv : r) {
    running += rv;
    multinomial *= binomial(running, rv);
  }
  Scalar rhs = Scalar(static_cast<long long>(multinomial)) * detail::vandermonde_power_product(r, alpha);
  return {determinant<Scalar>(std::move(m)), rhs};
}

// A_{n+1,1}^{b+1,1}(alpha) == X_n A_n^b(alpha) X_b^{-1}, entrywise.
template <typename Scalar>
bool similarity_identity(int n, int b, const Scalar& alpha) {
  if (n < 1 || b < 1) throw ArgumentError("similarity_identity: need n, b >= 1");
  const Matrix<Scalar> lhs = binomial_block<Scalar>(n + 1, 1, b + 1, 1, alpha);
  const Matrix<Scalar> rhs =
      counting_diagonal<Scalar>(n) * binomial_block<Scalar>(n, b, alpha) * counting_diagonal_inverse<Scalar>(b);
  return exactly_equal<Scalar>(lhs, rhs);
}

// Product prod_u (-a_u I + N)^{e_u} on (dim x dim) matrices.
template <typename Scalar>
Matrix<Scalar> shifted_nilpotent_product(int dim, std::span<const int> exponents, std::span<const Scalar> alpha) {
  if (exponents.size() != alpha.size()) throw ArgumentError("shifted_nilpotent_product: length mismatch");
  const Matrix<Scalar> nil = shift_nilpotent<Scalar>(dim);
  Matrix<Scalar> product = identity_matrix<Scalar>(dim);
  for (std::size_t u = 0; u < alpha.size(); ++u) {
    const Matrix<Scalar> factor = nil - alpha[u] * identity_matrix<Scalar>(dim);
    for (int e = 0; e < exponents[u]; ++e) product = (product * factor).eval();
  }
  return product;
}

// For distinct alphas and reduced multiplicities d'_u summing to d - ell_prime,
// checks that A_{ell'-2}^{d-2}(0) prod_u(-a_u I + N)^{d'_u} A_{d-2}^{d'_v}(a_v) is
// the zero matrix for every v with d'_v > 0.
template <typename Scalar>
bool kernel_annihilation_check(std::span<const int> reduced, std::span<const Scalar> alpha, int ell_prime) {
  if (reduced.size() != alpha.size() || alpha.empty()) throw ArgumentError("kernel_annihilation_check: length mismatch");
  if (ell_prime < 2) throw ArgumentError("kernel_annihilation_check: need ell' >= 2");
  detail::require_distinct(alpha);
  int d = ell_prime;
  for (int e : reduced) {
    if (e < 0) throw ArgumentError("kernel_annihilation_check: negative multiplicity");
    d += e;
  }
  const int dim = d - 2;
  if (dim < 1 || ell_prime - 2 < 1) return true;  // empty map: nothing to annihilate
  const Matrix<Scalar> head = binomial_block<Scalar>(ell_prime - 2, dim, Scalar(0));
  const Matrix<Scalar> map = head * shifted_nilpotent_product<Scalar>(dim, reduced, alpha);
  for (std::size_t v = 0; v < alpha.size(); ++v) {
    if (reduced[v] == 0) continue;
    const Matrix<Scalar> image = map * binomial_block<Scalar>(dim, reduced[v], alpha[v]);
    if (!is_zero_matrix<Scalar>(image)) return false;
  }
  return true;
}

}  // namespace indexfiber
