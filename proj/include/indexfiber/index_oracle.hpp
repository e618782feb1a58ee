#pragma once

// Polynomial maps f(z) = z + rho * prod (z - zeta_i)^{d_i} and their fixed-point
// data. The holomorphic indices are computed two independent ways: exactly from
// a truncated Laurent expansion, and numerically by contour quadrature.
//
// Fixed-point labels are 0-based throughout.

#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Core>

#include "indexfiber/errors.hpp"
#include "indexfiber/gaussian_rational.hpp"

namespace indexfiber {

// Weakly increasing positive parts (d_1 <= ... <= d_l) summing to the degree d >= 2.
class MultiplicityProfile {
 public:
  MultiplicityProfile() = default;
  explicit MultiplicityProfile(std::vector<int> parts);

  int degree() const { return degree_; }
  int ell() const { return static_cast<int>(parts_.size()); }
  std::span<const int> parts() const { return parts_; }
  int part(int i) const { return parts_.at(static_cast<std::size_t>(i)); }
  std::string to_string() const;

  friend bool operator==(const MultiplicityProfile&, const MultiplicityProfile&) = default;

 private:
  std::vector<int> parts_;
  int degree_ = 0;
};

// Every profile of degree d (all partitions of d), in lexicographic order of parts.
std::vector<MultiplicityProfile> profiles_of_degree(int d);

// A labeled index vector m with sum zero, plus its unordered form.
// Exact spectra keep their Gaussian-rational values; numeric values are always present.
class IndexSpectrum {
 public:
  static constexpr double kSumTolerance = 1e-10;

  static IndexSpectrum exact(MultiplicityProfile profile, std::vector<GaussianRational> values);
  // Sum-zero is checked to sum_tolerance * (1 + max |m_i|).
  static IndexSpectrum numeric(MultiplicityProfile profile, std::vector<Complex> values,
                               double sum_tolerance = kSumTolerance);

  const MultiplicityProfile& profile() const { return profile_; }
  int size() const { return static_cast<int>(numeric_.size()); }
  bool is_exact() const { return exact_.has_value(); }
  std::span<const Complex> values() const { return numeric_; }
  Complex value(int i) const { return numeric_.at(static_cast<std::size_t>(i)); }
  // Throws ArgumentError for numeric spectra.
  std::span<const GaussianRational> exact_values() const;
  double max_abs() const;

  // (d_i, m_i) pairs sorted by d, then real part, then imaginary part.
  std::vector<std::pair<int, Complex>> unordered() const;

 private:
  IndexSpectrum() = default;
  MultiplicityProfile profile_;
  std::vector<Complex> numeric_;
  std::optional<std::vector<GaussianRational>> exact_;
};

// Distance of two unordered spectra: the best labeled matching within equal
// multiplicities (exhaustive for small l, which is all we handle).
double unordered_distance(const IndexSpectrum& a, const IndexSpectrum& b);

struct DistinctnessTolerance {
  // minimum pairwise distance must exceed relative * max(1, diameter)
  double relative = 1e-9;
};

class PolynomialMap {
 public:
  const MultiplicityProfile& profile() const { return profile_; }
  Complex rho() const { return rho_; }
  std::span<const Complex> zetas() const { return zetas_; }
  Complex zeta(int i) const { return zetas_.at(static_cast<std::size_t>(i)); }
  // Coefficients of f in ascending powers; size d + 1, leading entry rho.
  const Eigen::VectorXcd& coefficients() const { return coeffs_; }

  Complex operator()(Complex z) const;
  Complex derivative(Complex z) const;
  // rho == 1 and sum d_i zeta_i == 0, within tol relative to the configuration scale.
  bool is_monic_centered(double tol = 1e-10) const;

  friend PolynomialMap build_map(const MultiplicityProfile&, std::span<const Complex>, Complex,
                                 DistinctnessTolerance);

 private:
  MultiplicityProfile profile_;
  Complex rho_{1.0, 0.0};
  std::vector<Complex> zetas_;
  Eigen::VectorXcd coeffs_;
};

// Throws ArgumentError for rho == 0 or a size mismatch, DegenerateConfiguration
// for coincident zetas.
PolynomialMap build_map(const MultiplicityProfile& profile, std::span<const Complex> zetas, Complex rho,
                        DistinctnessTolerance tol = {});

// Expansion of z + rho * prod (z - zeta_i)^{d_i} by repeated linear-factor products.
template <typename Scalar>
std::vector<Scalar> expand_map_coefficients(std::span<const int> parts, std::span<const Scalar> zetas,
                                            const Scalar& rho) {
  std::vector<Scalar> c{Scalar(1)};
  for (std::size_t i = 0; i < parts.size(); ++i) {
    for (int e = 0; e < parts[i]; ++e) {
      std::vector<Scalar> next(c.size() + 1, Scalar(0));
      for (std::size_t k = 0; k < c.size(); ++k) {
        next[k + 1] += c[k];
        next[k] -= zetas[i] * c[k];
      }
      c = std::move(next);
    }
  }
  for (auto& x : c) x *= rho;
  if (c.size() < 2) c.resize(2, Scalar(0));
  c[1] += Scalar(1);
  return c;
}

// iota_h(f, zeta_i): minus (1/rho) times the coefficient of t^{d_i-1-h} in
// prod_{j != i} (t + zeta_i - zeta_j)^{-d_j}. Zero for h >= d_i.
// Exact when Scalar is exact; zetas must be pairwise distinct.
template <typename Scalar>
Scalar local_index(std::span<const int> parts, std::span<const Scalar> zetas, const Scalar& rho, int i, int h = 0) {
  const int ell = static_cast<int>(parts.size());
  if (i < 0 || i >= ell || h < 0) throw ArgumentError("local_index: label out of range");
  const int di = parts[static_cast<std::size_t>(i)];
  if (h >= di) return Scalar(0);
  const int order = di - 1 - h;  // coefficient wanted
  std::vector<Scalar> series(static_cast<std::size_t>(order + 1), Scalar(0));
  series[0] = Scalar(1);
  for (int j = 0; j < ell; ++j) {
    if (j == i) continue;
    const Scalar c = zetas[static_cast<std::size_t>(i)] - zetas[static_cast<std::size_t>(j)];
    if (is_exact_zero(c)) throw DegenerateConfiguration("local_index: coincident fixed points");
    const int e = parts[static_cast<std::size_t>(j)];
    // (t + c)^{-e} = c^{-e} sum_n (-1)^n C(e+n-1, n) (t/c)^n
    const Scalar inv_c = Scalar(1) / c;
    std::vector<Scalar> factor(series.size(), Scalar(0));
    Scalar lead = ipow(inv_c, e);
    Scalar step(1);
    for (int n = 0; n <= order; ++n) {
      long long coeff = 1;  // C(e+n-1, n) computed incrementally
      for (int q = 1; q <= n; ++q) coeff = coeff * (e + q - 1) / q;
      Scalar term = Scalar(coeff) * lead * step;
      factor[static_cast<std::size_t>(n)] = (n % 2 == 0) ? term : -term;
      step *= inv_c;
    }
    std::vector<Scalar> product(series.size(), Scalar(0));
    for (int a = 0; a <= order; ++a) {
      if (is_exact_zero(series[static_cast<std::size_t>(a)])) continue;
      for (int b = 0; a + b <= order; ++b)
        product[static_cast<std::size_t>(a + b)] += series[static_cast<std::size_t>(a)] * factor[static_cast<std::size_t>(b)];
    }
    series = std::move(product);
  }
  return -(series[static_cast<std::size_t>(order)] / rho);
}

// f'(zeta_i). Equals 1 when d_i >= 2.
Complex multiplier(const PolynomialMap& map, int i);

Complex holomorphic_index(const PolynomialMap& map, int i, int h = 0);

// |sum_i iota(f, zeta_i)|
double index_sum_check(const PolynomialMap& map);

// Radius used by contour_index when none is given: a quarter of the nearest-neighbour distance.
double default_contour_radius(const PolynomialMap& map, int i);

// Periodic trapezoid rule for (1/2 pi i) * contour integral of (z - zeta_i)^h / (z - f(z))
// around |z - zeta_i| = radius, with z - f(z) evaluated in factored form.
// Throws ArgumentError when the radius reaches half the distance to another fixed
// point, or when n_quadrature < 64.
Complex contour_index(const PolynomialMap& map, int i, double radius, int n_quadrature = 256, int h = 0);

IndexSpectrum spectrum_of(const PolynomialMap& map);

}  // namespace indexfiber
