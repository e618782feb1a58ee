#pragma once

// The eliminated residue system. For a profile (d_1..d_l) and a labeled
// spectrum m, psi_1..psi_{l-2} are the first l-2 entries of
//
//   N^{d_l - 1} * prod_{i<l} (-zeta_i I + N)^{d_i - 1} * X^{-1} * V * (m_1..m_{l-1})^t
//
// on (d-2)-vectors, with V the power matrix V(r, i) = zeta_i^r (r = 1..d-2) and
// zeta_l pinned to 0. psi_k is homogeneous of degree d - l + k in zeta_1..zeta_{l-1}.

#include <iosfwd>
#include <optional>
#include <span>
#include <vector>

#include <Eigen/Core>

#include "indexfiber/index_oracle.hpp"
#include "indexfiber/sparse_polynomial.hpp"

namespace indexfiber {

// The l-2 polynomials, over any field-like scalar. Throws ArgumentError when l < 2.
template <typename Scalar>
std::vector<SparsePolynomial<Scalar>> assemble_psi_polynomials(std::span<const int> parts, std::span<const Scalar> m) {
  const int ell = static_cast<int>(parts.size());
  if (ell < 2) throw ArgumentError("assemble_psi: need at least two fixed points");
  if (static_cast<int>(m.size()) != ell) throw ArgumentError("assemble_psi: spectrum length mismatch");
  int d = 0;
  for (int p : parts) d += p;
  const int dim = d - 2;
  const int n_vars = ell - 1;
  if (ell == 2) return {};

  using Poly = SparsePolynomial<Scalar>;
  // X^{-1} V m: entry r-1 is (1/r) sum_i m_i zeta_i^r
  std::vector<Poly> w(static_cast<std::size_t>(dim), Poly(n_vars));
  for (int r = 1; r <= dim; ++r) {
    for (int i = 0; i < n_vars; ++i) {
      w[static_cast<std::size_t>(r - 1)] += Poly::monomial(n_vars, i, r, m[static_cast<std::size_t>(i)] / Scalar(r));
    }
  }
  // (-zeta I + N) w: entry r becomes -zeta w_r + w_{r+1}
  auto apply_factor = [&](int var) {
    std::vector<Poly> next(w.size(), Poly(n_vars));
    const Poly minus_zeta = Poly::monomial(n_vars, var, 1, Scalar(-1));
    for (std::size_t r = 0; r < w.size(); ++r) {
      next[r] = minus_zeta * w[r];
      if (r + 1 < w.size()) next[r] += w[r + 1];
    }
    w = std::move(next);
  };
  for (int i = 0; i < n_vars; ++i)
    for (int e = 0; e < parts[static_cast<std::size_t>(i)] - 1; ++e) apply_factor(i);
  // N^{d_l - 1}: shift up
  for (int e = 0; e < parts[static_cast<std::size_t>(ell - 1)] - 1; ++e) {
    for (std::size_t r = 0; r + 1 < w.size(); ++r) w[r] = w[r + 1];
    w.back() = Poly(n_vars);
  }
  w.resize(static_cast<std::size_t>(ell - 2), Poly(n_vars));
  return w;
}

class PsiSystem {
 public:
  const MultiplicityProfile& profile() const { return spectrum_.profile(); }
  const IndexSpectrum& spectrum() const { return spectrum_; }
  int n_vars() const { return profile().ell() - 1; }
  int size() const { return static_cast<int>(polys_.size()); }

  const std::vector<SparsePolynomial<Complex>>& polys() const { return polys_; }
  // Present when the spectrum is exact.
  const std::optional<std::vector<SparsePolynomial<GaussianRational>>>& exact_polys() const { return exact_polys_; }

  // Expected degree d - l + k of psi_k (1-based k).
  std::vector<int> degrees() const;
  // Bezout number prod_k deg psi_k = (d-2)!/(d-l)!.
  long long bezout_number() const;
  // 0-based indices of components that vanish identically.
  std::vector<int> zero_components() const;
  double coefficient_scale() const;

  Eigen::VectorXcd evaluate(std::span<const Complex> point) const;
  // All partial derivatives: (l-2) x (l-1).
  Eigen::MatrixXcd gradient(std::span<const Complex> point) const;
  // The point is rescaled so that coordinate `chart` equals 1; returns the
  // (l-2) x (l-2) matrix of partials with respect to the remaining coordinates.
  // Throws ArgumentError when l < 3 or the chart coordinate vanishes.
  Eigen::MatrixXcd jacobian(std::span<const Complex> point, int chart) const;

  // One "# psi_k degree D" header per component, then one line per monomial:
  // comma-separated exponents, TAB, real part, TAB, imaginary part.
  void dump(std::ostream& os) const;

  friend PsiSystem assemble_psi(const IndexSpectrum& spectrum);

 private:
  explicit PsiSystem(IndexSpectrum spectrum) : spectrum_(std::move(spectrum)) {}

  IndexSpectrum spectrum_;
  std::vector<SparsePolynomial<Complex>> polys_;
  std::optional<std::vector<SparsePolynomial<GaussianRational>>> exact_polys_;
  std::vector<std::vector<SparsePolynomial<Complex>>> partials_;  // [k][var]
};

// Exact coefficients when the spectrum is exact. Throws ArgumentError when l < 2.
PsiSystem assemble_psi(const IndexSpectrum& spectrum);

// Per-fixed-point auxiliary residues (m_i, m_{i,1}, ..., m_{i,d_i-1}) and rho.
struct AuxiliaryResidueVector {
  std::vector<Eigen::VectorXcd> residues;
  Complex rho;
  double residual = 0.0;  // relative residual of the least-squares solve
};

struct RecoverOptions {
  double consistency_tolerance = 1e-8;
  DistinctnessTolerance distinct{};
};

// Solves the stacked residue equations for the m_{i,k} and 1/rho by QR least
// squares. Throws InconsistentError when the relative residual exceeds the
// tolerance (the configuration is not a solution) or when the recovered
// values violate the nonvanishing of m_{i,d_i-1} (d_i >= 2) and m_i (d_i = 1);
// DegenerateConfiguration for coincident zetas; ArgumentError when l < 2.
AuxiliaryResidueVector recover_aux(const IndexSpectrum& spectrum, std::span<const Complex> zetas,
                                   const RecoverOptions& options = {});

}  // namespace indexfiber
