#include "indexfiber/index_oracle.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numbers>
#include <sstream>

namespace indexfiber {

namespace {

// computed spectra carry rounding from the residue expansion
constexpr double kSpectrumSumTolerance = 1e-8;

}  // namespace

MultiplicityProfile::MultiplicityProfile(std::vector<int> parts) : parts_(std::move(parts)) {
  if (parts_.empty()) throw ArgumentError("profile: no parts");
  for (std::size_t i = 0; i < parts_.size(); ++i) {
    if (parts_[i] < 1) throw ArgumentError("profile: parts must be positive");
    if (i > 0 && parts_[i] < parts_[i - 1]) throw ArgumentError("profile: parts must be weakly increasing");
    degree_ += parts_[i];
  }
  if (degree_ < 2) throw ArgumentError("profile: degree must be at least 2");
}

std::string MultiplicityProfile::to_string() const {
  std::ostringstream os;
  os << "(";
  for (std::size_t i = 0; i < parts_.size(); ++i) os << (i ? "," : "") << parts_[i];
  os << ")";
  return os.str();
}

std::vector<MultiplicityProfile> profiles_of_degree(int d) {
  std::vector<MultiplicityProfile> out;
  std::vector<int> parts;
  std::function<void(int, int)> rec = [&](int remaining, int min_part) {
    if (remaining == 0) {
      out.emplace_back(parts);
      return;
    }
    for (int p = min_part; p <= remaining; ++p) {
      parts.push_back(p);
      rec(remaining - p, p);
      parts.pop_back();
    }
  };
  if (d >= 2) rec(d, 1);
  return out;
}

IndexSpectrum IndexSpectrum::exact(MultiplicityProfile profile, std::vector<GaussianRational> values) {
  if (static_cast<int>(values.size()) != profile.ell()) throw ArgumentError("spectrum: need one index per fixed point");
  GaussianRational sum;
  for (const auto& v : values) sum += v;
  if (!sum.is_zero()) throw ArgumentError("spectrum: indices must sum to zero (got " + sum.to_string() + ")");
  IndexSpectrum s;
  s.profile_ = std::move(profile);
  s.numeric_.reserve(values.size());
  for (const auto& v : values) s.numeric_.push_back(v.to_complex());
  s.exact_ = std::move(values);
  return s;
}

IndexSpectrum IndexSpectrum::numeric(MultiplicityProfile profile, std::vector<Complex> values,
                                     double sum_tolerance) {
  if (static_cast<int>(values.size()) != profile.ell()) throw ArgumentError("spectrum: need one index per fixed point");
  Complex sum{0.0, 0.0};
  double scale = 0.0;
  for (const auto& v : values) {
    if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) throw ArgumentError("spectrum: non-finite index");
    sum += v;
    scale = std::max(scale, std::abs(v));
  }
  if (std::abs(sum) > sum_tolerance * (1.0 + scale)) throw ArgumentError("spectrum: indices must sum to zero");
  IndexSpectrum s;
  s.profile_ = std::move(profile);
  s.numeric_ = std::move(values);
  return s;
}

std::span<const GaussianRational> IndexSpectrum::exact_values() const {
  if (!exact_) throw ArgumentError("spectrum: exact values requested from a numeric spectrum");
  return *exact_;
}

double IndexSpectrum::max_abs() const {
  double m = 0.0;
  for (const auto& v : numeric_) m = std::max(m, std::abs(v));
  return m;
}

std::vector<std::pair<int, Complex>> IndexSpectrum::unordered() const {
  std::vector<std::pair<int, Complex>> pairs;
  for (int i = 0; i < size(); ++i) pairs.emplace_back(profile_.part(i), numeric_[static_cast<std::size_t>(i)]);
  std::sort(pairs.begin(), pairs.end(), [](const auto& a, const auto& b) {
    if (a.first != b.first) return a.first < b.first;
    if (a.second.real() != b.second.real()) return a.second.real() < b.second.real();
    return a.second.imag() < b.second.imag();
  });
  return pairs;
}

double unordered_distance(const IndexSpectrum& a, const IndexSpectrum& b) {
  if (!(a.profile() == b.profile())) return std::numeric_limits<double>::infinity();
  const int n = a.size();
  std::vector<bool> used(static_cast<std::size_t>(n), false);
  double best = std::numeric_limits<double>::infinity();
  // depth-first over multiplicity-preserving matchings, pruned on the running maximum
  std::function<void(int, double)> rec = [&](int i, double worst) {
    if (worst >= best) return;
    if (i == n) {
      best = worst;
      return;
    }
    for (int j = 0; j < n; ++j) {
      if (used[static_cast<std::size_t>(j)] || a.profile().part(i) != b.profile().part(j)) continue;
      used[static_cast<std::size_t>(j)] = true;
      rec(i + 1, std::max(worst, std::abs(a.value(i) - b.value(j))));
      used[static_cast<std::size_t>(j)] = false;
    }
  };
  rec(0, 0.0);
  return best;
}

PolynomialMap build_map(const MultiplicityProfile& profile, std::span<const Complex> zetas, Complex rho,
                        DistinctnessTolerance tol) {
  if (static_cast<int>(zetas.size()) != profile.ell()) throw ArgumentError("build_map: need one zeta per part");
  if (rho == Complex(0.0, 0.0)) throw ArgumentError("build_map: rho must be nonzero");
  double diameter = 0.0;
  double nearest = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < zetas.size(); ++i) {
    for (std::size_t j = i + 1; j < zetas.size(); ++j) {
      const double dist = std::abs(zetas[i] - zetas[j]);
      diameter = std::max(diameter, dist);
      nearest = std::min(nearest, dist);
    }
  }
  if (zetas.size() > 1 && !(nearest > tol.relative * std::max(1.0, diameter))) {
    throw DegenerateConfiguration("build_map: fixed points are not distinct");
  }
  PolynomialMap map;
  map.profile_ = profile;
  map.rho_ = rho;
  map.zetas_.assign(zetas.begin(), zetas.end());
  const auto c = expand_map_coefficients<Complex>(profile.parts(), zetas, rho);
  map.coeffs_ = Eigen::Map<const Eigen::VectorXcd>(c.data(), static_cast<Eigen::Index>(c.size()));
  return map;
}

Complex PolynomialMap::operator()(Complex z) const {
  Complex acc{0.0, 0.0};
  for (Eigen::Index k = coeffs_.size() - 1; k >= 0; --k) acc = acc * z + coeffs_(k);
  return acc;
}

Complex PolynomialMap::derivative(Complex z) const {
  Complex acc{0.0, 0.0};
  for (Eigen::Index k = coeffs_.size() - 1; k >= 1; --k) acc = acc * z + static_cast<double>(k) * coeffs_(k);
  return acc;
}

bool PolynomialMap::is_monic_centered(double tol) const {
  Complex weighted{0.0, 0.0};
  double scale = 1.0;
  for (int i = 0; i < profile_.ell(); ++i) {
    weighted += static_cast<double>(profile_.part(i)) * zetas_[static_cast<std::size_t>(i)];
    scale += profile_.part(i) * std::abs(zetas_[static_cast<std::size_t>(i)]);
  }
  return std::abs(rho_ - 1.0) <= tol && std::abs(weighted) <= tol * scale;
}

Complex multiplier(const PolynomialMap& map, int i) {
  const auto& profile = map.profile();
  if (i < 0 || i >= profile.ell()) throw ArgumentError("multiplier: label out of range");
  // product form: every term except the d_i = 1 one carries an exact zero factor
  if (profile.part(i) >= 2) return {1.0, 0.0};
  Complex prod = map.rho();
  for (int k = 0; k < profile.ell(); ++k) {
    if (k == i) continue;
    prod *= std::pow(map.zeta(i) - map.zeta(k), profile.part(k));
  }
  return Complex(1.0, 0.0) + prod;
}

Complex holomorphic_index(const PolynomialMap& map, int i, int h) {
  return local_index<Complex>(map.profile().parts(), map.zetas(), map.rho(), i, h);
}

double index_sum_check(const PolynomialMap& map) {
  Complex sum{0.0, 0.0};
  for (int i = 0; i < map.profile().ell(); ++i) sum += holomorphic_index(map, i);
  return std::abs(sum);
}

double default_contour_radius(const PolynomialMap& map, int i) {
  double nearest = std::numeric_limits<double>::infinity();
  for (int j = 0; j < map.profile().ell(); ++j)
    if (j != i) nearest = std::min(nearest, std::abs(map.zeta(i) - map.zeta(j)));
  return std::isfinite(nearest) ? 0.25 * nearest : 1.0;
}

Complex contour_index(const PolynomialMap& map, int i, double radius, int n_quadrature, int h) {
  if (i < 0 || i >= map.profile().ell()) throw ArgumentError("contour_index: label out of range");
  if (n_quadrature < 64) throw ArgumentError("contour_index: need at least 64 nodes");
  if (!(radius > 0.0)) throw ArgumentError("contour_index: radius must be positive");
  for (int j = 0; j < map.profile().ell(); ++j) {
    if (j != i && !(radius < 0.5 * std::abs(map.zeta(i) - map.zeta(j)))) {
      throw ArgumentError("contour_index: radius reaches another fixed point");
    }
  }
  // z - f(z) = -rho prod (z - zeta_j)^{d_j} in factored form: relatively accurate near high-order fixed points
  const Complex center = map.zeta(i);
  Complex sum{0.0, 0.0};
  for (int k = 0; k < n_quadrature; ++k) {
    const double theta = 2.0 * std::numbers::pi * k / n_quadrature;
    const Complex offset = std::polar(radius, theta);
    const Complex z = center + offset;
    Complex p = -map.rho();
    for (int j = 0; j < map.profile().ell(); ++j) p *= std::pow(z - map.zeta(j), map.profile().part(j));
    sum += std::pow(offset, h + 1) / p;
  }
  return sum / static_cast<double>(n_quadrature);
}

IndexSpectrum spectrum_of(const PolynomialMap& map) {
  std::vector<Complex> values;
  for (int i = 0; i < map.profile().ell(); ++i) values.push_back(holomorphic_index(map, i));
  return IndexSpectrum::numeric(map.profile(), std::move(values), kSpectrumSumTolerance);
}

}  // namespace indexfiber
