#include "indexfiber/selftest.hpp"

#include <chrono>
#include <cmath>
#include <functional>
#include <random>
#include <sstream>

#include "indexfiber/fiber.hpp"
#include "indexfiber/structured_matrices.hpp"

namespace indexfiber {

namespace {

using Check = std::function<std::string(std::mt19937_64&, bool)>;  // empty string on success

Rational random_rational(std::mt19937_64& rng) {
  std::uniform_int_distribution<int> num(-20, 20);
  std::uniform_int_distribution<int> den(1, 7);
  return Rational(num(rng), den(rng));
}

std::vector<Rational> distinct_rationals(std::mt19937_64& rng, int n) {
  std::vector<Rational> out;
  while (static_cast<int>(out.size()) < n) {
    Rational a = random_rational(rng);
    if (std::find(out.begin(), out.end(), a) == out.end()) out.push_back(a);
  }
  return out;
}

std::vector<int> random_block_sizes(std::mt19937_64& rng, int max_total, int max_blocks) {
  std::uniform_int_distribution<int> count(1, max_blocks);
  std::vector<int> r;
  int budget = max_total;
  const int blocks = count(rng);
  for (int v = 0; v < blocks && budget > 0; ++v) {
    std::uniform_int_distribution<int> size(1, std::max(1, budget - (blocks - v - 1)));
    r.push_back(size(rng));
    budget -= r.back();
  }
  return r;
}

PolynomialMap random_map(std::mt19937_64& rng, int max_degree, int min_ell = 1) {
  std::uniform_int_distribution<int> degree(std::max(2, min_ell), max_degree);
  auto profiles = profiles_of_degree(degree(rng));
  std::erase_if(profiles, [&](const auto& p) { return p.ell() < min_ell; });
  std::uniform_int_distribution<std::size_t> pick(0, profiles.size() - 1);
  const auto& profile = profiles[pick(rng)];
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  while (true) {
    std::vector<Complex> zetas;
    for (int i = 0; i < profile.ell(); ++i) zetas.emplace_back(unit(rng), unit(rng));
    try {
      return build_map(profile, zetas, Complex(unit(rng) + 1.5, unit(rng)), DistinctnessTolerance{0.05});
    } catch (const DegenerateConfiguration&) {
    }
  }
}

std::string block_determinant(std::mt19937_64& rng, bool corrupt, bool shifted) {
  for (int trial = 0; trial < 40; ++trial) {
    const auto r = random_block_sizes(rng, 8, 4);
    const auto alpha = distinct_rationals(rng, static_cast<int>(r.size()));
    auto sides = shifted ? shifted_determinant_identity<Rational>(r, alpha) : block_determinant_identity<Rational>(r, alpha);
    if (corrupt) sides.lhs += 1;
    if (!sides.holds()) {
      std::ostringstream os;
      os << "mismatch for " << r.size() << " blocks: " << sides.lhs << " vs " << sides.rhs;
      return os.str();
    }
  }
  return {};
}

std::string similarity(std::mt19937_64& rng, bool corrupt) {
  for (int n = 1; n <= 8; ++n) {
    for (int b = 1; b <= 8; ++b) {
      const Rational alpha = random_rational(rng);
      bool ok = false;
      if (corrupt) {
        const Matrix<Rational> lhs = binomial_block<Rational>(n + 1, 1, b + 1, 1, Rational(alpha + 1));
        const Matrix<Rational> rhs = counting_diagonal<Rational>(n) * binomial_block<Rational>(n, b, alpha) *
                                     counting_diagonal_inverse<Rational>(b);
        ok = exactly_equal<Rational>(lhs, rhs);
      } else {
        ok = similarity_identity<Rational>(n, b, alpha);
      }
      if (!ok) return "fails at n=" + std::to_string(n) + ", b=" + std::to_string(b);
    }
  }
  return {};
}

std::string kernel_annihilation(std::mt19937_64& rng, bool corrupt) {
  for (int d = 3; d <= 8; ++d) {
    for (const auto& profile : profiles_of_degree(d)) {
      const int ell = profile.ell();
      if (ell < 3) continue;
      std::vector<int> reduced;
      for (int p : profile.parts()) reduced.push_back(p - 1);
      const auto alpha = distinct_rationals(rng, ell);
      bool ok = false;
      if (corrupt) {
        // annihilate with a shifted block: must fail for some v
        const int dim = d - 2;
        const Matrix<Rational> map =
            binomial_block<Rational>(ell - 2, dim, Rational(0)) * shifted_nilpotent_product<Rational>(dim, reduced, alpha);
        ok = true;
        for (int v = 0; v < ell; ++v) {
          if (reduced[static_cast<std::size_t>(v)] == 0) continue;
          const Rational shifted = alpha[static_cast<std::size_t>(v)] + 1;
          if (!is_zero_matrix<Rational>(map * binomial_block<Rational>(dim, reduced[static_cast<std::size_t>(v)], shifted)))
            ok = false;
        }
      } else {
        ok = kernel_annihilation_check<Rational>(reduced, alpha, ell);
      }
      if (!ok) return "fails for profile " + profile.to_string();
    }
  }
  return {};
}

std::string index_sum(std::mt19937_64& rng, bool corrupt) {
  for (int trial = 0; trial < 100; ++trial) {
    const auto map = random_map(rng, 8);
    Complex sum(0.0, 0.0);
    double scale = 1.0;
    for (int i = corrupt ? 1 : 0; i < map.profile().ell(); ++i) {
      const Complex v = holomorphic_index(map, i);
      sum += v;
      scale += std::abs(v);
    }
    if (!(std::abs(sum) <= 1e-10 * scale)) {
      std::ostringstream os;
      os << "index sum " << std::abs(sum) << " for profile " << map.profile().to_string();
      return os.str();
    }
  }
  return {};
}

std::string series_vs_contour(std::mt19937_64& rng, bool corrupt) {
  for (int trial = 0; trial < 50; ++trial) {
    const auto map = random_map(rng, 8);
    for (int i = 0; i < map.profile().ell(); ++i) {
      const Complex series = holomorphic_index(map, i);
      const Complex contour = contour_index(map, i, default_contour_radius(map, i), 256, corrupt ? 1 : 0);
      if (!(std::abs(series - contour) <= 1e-8 * std::max(1.0, std::abs(series)))) {
        std::ostringstream os;
        os << "series " << series << " vs contour " << contour << " for profile " << map.profile().to_string();
        return os.str();
      }
    }
  }
  return {};
}

std::string psi_homogeneity(std::mt19937_64& rng, bool corrupt) {
  for (int d = 3; d <= 7; ++d) {
    for (const auto& profile : profiles_of_degree(d)) {
      if (profile.ell() < 3) continue;
      const auto spectrum = random_generic_spectrum(profile, rng());
      auto polys = assemble_psi_polynomials<GaussianRational>(profile.parts(), spectrum.exact_values());
      if (corrupt) polys[0] += SparsePolynomial<GaussianRational>::constant(profile.ell() - 1, GaussianRational(1));
      for (std::size_t k = 0; k < polys.size(); ++k) {
        const int expected = d - profile.ell() + static_cast<int>(k) + 1;
        if (!polys[k].is_homogeneous() || polys[k].total_degree() != expected)
          return "psi_" + std::to_string(k + 1) + " not homogeneous of degree " + std::to_string(expected) + " for " +
                 profile.to_string();
      }
    }
  }
  return {};
}

std::string psi_reference(std::mt19937_64&, bool corrupt) {
  using Poly = SparsePolynomial<GaussianRational>;
  const GaussianRational half(Rational(1, 2));
  {
    const std::vector<int> parts{1, 1, 2};
    const std::vector<GaussianRational> m{1, 2, -3};
    const auto psi = assemble_psi_polynomials<GaussianRational>(parts, m);
    Poly expected = Poly::monomial(2, 0, 2, half) + Poly::monomial(2, 1, 2, GaussianRational(corrupt ? 2 : 1));
    if (psi.size() != 1 || !(psi[0] == expected)) return "profile (1,1,2), m=(1,2,-3) differs from the reference";
  }
  {
    const std::vector<int> parts{1, 1, 1, 1};
    const std::vector<GaussianRational> m{1, -1, 2, -2};
    const auto psi = assemble_psi_polynomials<GaussianRational>(parts, m);
    const Poly p1 = Poly::monomial(3, 0, 1) - Poly::monomial(3, 1, 1) + Poly::monomial(3, 2, 1, GaussianRational(2));
    const Poly p2 = Poly::monomial(3, 0, 2, half) - Poly::monomial(3, 1, 2, half) + Poly::monomial(3, 2, 2);
    if (psi.size() != 2 || !(psi[0] == p1) || !(psi[1] == p2))
      return "profile (1,1,1,1), m=(1,-1,2,-2) differs from the reference";
  }
  return {};
}

std::string aux_recovery(std::mt19937_64& rng, bool corrupt) {
  for (int trial = 0; trial < 30; ++trial) {
    const auto map = random_map(rng, 7, 2);
    std::vector<Complex> zetas(map.zetas().begin(), map.zetas().end());
    if (corrupt) zetas[0] += 0.1;
    try {
      const auto aux = recover_aux(spectrum_of(map), zetas);
      if (!(std::abs(aux.rho - map.rho()) <= 1e-8 * std::abs(map.rho()))) return "recovered rho differs";
    } catch (const InconsistentError& e) {
      return std::string("profile ") + map.profile().to_string() + ": " + e.what();
    }
  }
  return {};
}

std::string generic_counts(std::mt19937_64& rng, bool corrupt) {
  for (int d = 2; d <= 5; ++d) {
    for (const auto& profile : profiles_of_degree(d)) {
      FiberOptions options;
      options.solver.seed = rng();
      const auto report = compute_fiber(random_generic_spectrum(profile, rng()), options);
      const long long expected_mc = report.expected.mc + (corrupt ? 1 : 0);
      if (!report.mp_count || !report.mc_count || *report.mp_count != report.expected.mp || *report.mc_count != expected_mc)
        return "counts differ from the generic values for " + profile.to_string();
    }
  }
  return {};
}

const std::vector<std::pair<std::string, Check>>& rows() {
  static const std::vector<std::pair<std::string, Check>> table{
      {"block-determinant", [](auto& rng, bool c) { return block_determinant(rng, c, false); }},
      {"shifted-determinant", [](auto& rng, bool c) { return block_determinant(rng, c, true); }},
      {"similarity", similarity},
      {"kernel-annihilation", kernel_annihilation},
      {"index-sum", index_sum},
      {"series-vs-contour", series_vs_contour},
      {"psi-homogeneity", psi_homogeneity},
      {"psi-reference", psi_reference},
      {"aux-recovery", aux_recovery},
      {"generic-counts", generic_counts},
  };
  return table;
}

}  // namespace

std::vector<std::string> selftest_row_names() {
  std::vector<std::string> out;
  for (const auto& [name, check] : rows()) out.push_back(name);
  return out;
}

std::vector<SelftestRow> run_selftest(std::uint64_t seed, const std::optional<std::string>& corrupt) {
  if (corrupt) {
    const auto names = selftest_row_names();
    if (std::find(names.begin(), names.end(), *corrupt) == names.end())
      throw ArgumentError("selftest: unknown row '" + *corrupt + "'");
  }
  std::vector<SelftestRow> out;
  std::uint64_t row_seed = seed;
  for (const auto& [name, check] : rows()) {
    std::mt19937_64 rng(row_seed++);
    SelftestRow row;
    row.name = name;
    const auto start = std::chrono::steady_clock::now();
    try {
      row.detail = check(rng, corrupt && *corrupt == name);
      row.passed = row.detail.empty();
    } catch (const std::exception& e) {
      row.detail = std::string("exception: ") + e.what();
    }
    row.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    out.push_back(std::move(row));
  }
  return out;
}

}  // namespace indexfiber
