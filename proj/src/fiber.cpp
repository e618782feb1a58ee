#include "indexfiber/fiber.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>
#include <random>
#include <sstream>

namespace indexfiber {

namespace {

using VecC = Eigen::VectorXcd;

bool same_index(const IndexSpectrum& s, int i, int j) {
  if (s.is_exact()) return s.exact_values()[static_cast<std::size_t>(i)] == s.exact_values()[static_cast<std::size_t>(j)];
  return std::abs(s.value(i) - s.value(j)) <= kInexactZeroTolerance * (1.0 + s.max_abs());
}

long long factorial(int n) {
  long long f = 1;
  for (int k = 2; k <= n; ++k) f *= k;
  return f;
}

// (sigma . v)_{sigma(k)} = v_k
VecC permute(const VecC& v, const Permutation& sigma) {
  VecC out(v.size());
  for (Eigen::Index k = 0; k < v.size(); ++k) out(sigma[static_cast<std::size_t>(k)]) = v(k);
  return out;
}

bool is_identity(const Permutation& sigma) {
  for (std::size_t k = 0; k < sigma.size(); ++k)
    if (sigma[k] != static_cast<int>(k)) return false;
  return true;
}

double coefficient_distance(const VecC& a, const VecC& b) {
  if (a.size() != b.size()) return std::numeric_limits<double>::infinity();
  double worst = 0.0;
  for (Eigen::Index k = 0; k < a.size(); ++k)
    worst = std::max(worst, std::abs(a(k) - b(k)) / std::max(1.0, std::abs(a(k))));
  return worst;
}

// All (d-1)-th roots of rho ordered by argument in (-pi, pi].
std::vector<Complex> roots_of(Complex rho, int n) {
  std::vector<Complex> out;
  const double mag = std::pow(std::abs(rho), 1.0 / n);
  const double base = std::arg(rho) / n;
  for (int k = 0; k < n; ++k) {
    double angle = base + 2.0 * std::numbers::pi * k / n;
    angle = std::remainder(angle, 2.0 * std::numbers::pi);
    if (angle <= -std::numbers::pi) angle += 2.0 * std::numbers::pi;
    out.push_back(std::polar(mag, angle));
  }
  std::sort(out.begin(), out.end(), [](Complex a, Complex b) { return std::arg(a) < std::arg(b); });
  return out;
}

double relative_error(const IndexSpectrum& found, const IndexSpectrum& target) {
  return unordered_distance(found, target) / std::max(1.0, target.max_abs());
}

// Representatives, verification, orbit count and the free-action check.
void lift_and_count(FiberReport& report, const SolveResult& solved, const FiberOptions& options) {
  const auto& profile = report.profile;
  const auto& spectrum = report.spectrum;
  const int d = profile.degree();
  const auto group = stabilizer_elements(report.genericity);

  std::vector<VecC> sigma_points;
  int unliftable = 0;
  for (std::size_t idx = 0; idx < solved.solutions.size(); ++idx) {
    const auto& sol = solved.solutions[idx];
    if (sol.classification != SolutionClass::S) continue;
    VecC lifted = lift_to_sigma(std::span<const Complex>(sol.coords.data(), static_cast<std::size_t>(sol.coords.size())), profile);
    lifted /= lifted.cwiseAbs().maxCoeff();
    AuxiliaryResidueVector aux;
    try {
      aux = recover_aux(spectrum, std::span<const Complex>(lifted.data(), static_cast<std::size_t>(lifted.size())));
    } catch (const InconsistentError& e) {
      ++unliftable;
      report.caveats.push_back(std::string("S point does not lift to a map: ") + e.what());
      continue;
    }
    sigma_points.push_back(lifted);
    for (const Complex a : roots_of(aux.rho, d - 1)) {
      const VecC zetas = a * lifted;
      const PolynomialMap map =
          build_map(profile, std::span<const Complex>(zetas.data(), static_cast<std::size_t>(zetas.size())), 1.0);
      const double err = relative_error(spectrum_of(map), spectrum);
      report.max_verification_error = std::max(report.max_verification_error, err);
      if (!(err <= options.verification_tolerance) || !map.is_monic_centered()) ++report.verification_failures;
      for (const auto& sigma : group) {
        if (is_identity(sigma)) continue;
        if ((permute(zetas, sigma) - zetas).norm() <= options.orbit_tolerance * zetas.norm()) report.free_action = false;
      }
      const bool seen = std::any_of(report.representatives.begin(), report.representatives.end(), [&](const auto& r) {
        return coefficient_distance(r.map.coefficients(), map.coefficients()) <= options.representative_dedup;
      });
      if (!seen) report.representatives.push_back({map, err, static_cast<int>(idx)});
    }
  }

  // orbits of the stabilizer on the sum-zero lifts
  std::vector<int> orbit(sigma_points.size());
  std::iota(orbit.begin(), orbit.end(), 0);
  for (std::size_t i = 0; i < sigma_points.size(); ++i) {
    if (orbit[i] != static_cast<int>(i)) continue;
    for (std::size_t j = i + 1; j < sigma_points.size(); ++j) {
      if (orbit[j] != static_cast<int>(j)) continue;
      for (const auto& sigma : group) {
        if (projective_distance(permute(sigma_points[i], sigma), sigma_points[j]) < options.orbit_tolerance) {
          orbit[j] = static_cast<int>(i);
          break;
        }
      }
    }
  }
  long long orbits = 0;
  for (std::size_t i = 0; i < orbit.size(); ++i)
    if (orbit[i] == static_cast<int>(i)) ++orbits;

  const long long liftable = static_cast<long long>(sigma_points.size());
  report.mp_count = orbits;
  report.mc_count = static_cast<long long>(report.representatives.size());
  const long long stab = report.genericity.stabilizer_order;
  report.count_relation_holds = ((d - 1) * liftable) % stab == 0 && *report.mc_count == (d - 1) * liftable / stab;
  if (unliftable > 0) report.caveats.push_back(std::to_string(unliftable) + " S point(s) excluded from the counts");
}

}  // namespace

GenericityReport genericity(const IndexSpectrum& spectrum, std::size_t partition_limit) {
  GenericityReport r;
  const int ell = spectrum.size();
  const auto& profile = spectrum.profile();
  r.exact = spectrum.is_exact();

  std::vector<bool> placed(static_cast<std::size_t>(ell), false);
  for (int i = 0; i < ell; ++i) {
    if (placed[static_cast<std::size_t>(i)]) continue;
    std::vector<int> cls{i};
    placed[static_cast<std::size_t>(i)] = true;
    for (int j = i + 1; j < ell; ++j) {
      if (placed[static_cast<std::size_t>(j)] || profile.part(i) != profile.part(j) || !same_index(spectrum, i, j)) continue;
      cls.push_back(j);
      placed[static_cast<std::size_t>(j)] = true;
    }
    r.stabilizer_order *= factorial(static_cast<int>(cls.size()));
    for (std::size_t k = 0; k + 1 < cls.size(); ++k) {
      Permutation t(static_cast<std::size_t>(ell));
      std::iota(t.begin(), t.end(), 0);
      std::swap(t[static_cast<std::size_t>(cls[k])], t[static_cast<std::size_t>(cls[k + 1])]);
      r.stabilizer_generators.push_back(std::move(t));
    }
    r.stabilizer_classes.push_back(std::move(cls));
  }

  r.zero_subset_partitions = zero_sum_partitions(spectrum, kInexactZeroTolerance, partition_limit, &r.truncated);
  r.zero_subset_partition_count = r.zero_subset_partitions.size();
  r.is_zero_vector = true;
  for (int i = 0; i < ell; ++i) {
    const int one[] = {i};
    if (!block_sum_vanishes(spectrum, one)) r.is_zero_vector = false;
  }
  r.is_generic = r.stabilizer_order == 1 && r.zero_subset_partitions.empty();
  return r;
}

std::vector<Permutation> stabilizer_elements(const GenericityReport& report) {
  int ell = 0;
  for (const auto& c : report.stabilizer_classes) ell += static_cast<int>(c.size());
  Permutation id(static_cast<std::size_t>(ell));
  std::iota(id.begin(), id.end(), 0);
  std::vector<Permutation> out{id};
  for (const auto& cls : report.stabilizer_classes) {
    if (cls.size() < 2) continue;
    std::vector<int> images(cls);
    std::vector<Permutation> next;
    do {
      for (const auto& base : out) {
        Permutation p(base);
        for (std::size_t k = 0; k < cls.size(); ++k) p[static_cast<std::size_t>(cls[k])] = images[k];
        next.push_back(std::move(p));
      }
    } while (std::next_permutation(images.begin(), images.end()));
    out = std::move(next);
  }
  return out;
}

VecC lift_to_sigma(std::span<const Complex> point, const MultiplicityProfile& profile) {
  const int ell = profile.ell();
  if (static_cast<int>(point.size()) + 1 != ell) throw ArgumentError("lift_to_sigma: dimension mismatch");
  VecC z(ell);
  for (int i = 0; i + 1 < ell; ++i) z(i) = point[static_cast<std::size_t>(i)];
  z(ell - 1) = 0.0;
  Complex b(0.0, 0.0);
  for (int i = 0; i < ell; ++i) b += static_cast<double>(profile.part(i)) * z(i);
  b /= static_cast<double>(profile.degree());
  return z.array() - b;
}

ExpectedCounts expected_counts(int d, int ell) {
  if (ell < 1 || ell > d) throw ArgumentError("expected_counts: need 1 <= ell <= d");
  if (ell == 1) return {1, 1};
  ExpectedCounts c;
  c.mp = 1;
  for (int k = d - ell + 1; k <= d - 2; ++k) c.mp *= k;
  c.mc = c.mp * (d - 1);
  return c;
}

std::string to_string(FiberStatus status) {
  switch (status) {
    case FiberStatus::Generic: return "generic";
    case FiberStatus::NonGeneric: return "non-generic";
    case FiberStatus::Empty: return "empty";
    case FiberStatus::Degenerate: return "degenerate";
  }
  return "degenerate";
}

FiberReport enumerate_mc(const IndexSpectrum& spectrum, const SolveResult& solved, const GenericityReport& generic,
                         const FiberOptions& options) {
  FiberReport report(spectrum);
  report.genericity = generic;
  report.expected = expected_counts(spectrum.profile().degree(), spectrum.profile().ell());
  report.s_count = solved.count(SolutionClass::S);
  report.b_count = solved.count(SolutionClass::B);
  lift_and_count(report, solved, options);
  if (report.verification_failures > 0) {
    std::ostringstream msg;
    msg << "enumerate_mc: " << report.verification_failures
        << " representative(s) fail the index oracle (max relative error " << report.max_verification_error << ")";
    throw VerificationFailure(msg.str());
  }
  report.solve = solved;
  return report;
}

bool has_positive_dimensional_component(const PsiSystem& psi, const GenericityReport& generic, std::uint64_t seed) {
  const int ell = psi.profile().ell();
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> coord(-50, 50);
  for (const auto& part : generic.zero_subset_partitions) {
    if (part.size() < 3) continue;
    bool vanishes = true;
    for (int trial = 0; trial < 2 && vanishes; ++trial) {
      std::vector<GaussianRational> exact(static_cast<std::size_t>(ell - 1));
      std::vector<Complex> approx(static_cast<std::size_t>(ell - 1));
      for (const auto& block : part) {
        const bool pinned = std::find(block.begin(), block.end(), ell - 1) != block.end();
        const GaussianRational v = pinned ? GaussianRational() : GaussianRational(Rational(coord(rng)), Rational(coord(rng)));
        for (int i : block) {
          if (i == ell - 1) continue;
          exact[static_cast<std::size_t>(i)] = v;
          approx[static_cast<std::size_t>(i)] = v.to_complex();
        }
      }
      for (int k = 0; k < psi.size() && vanishes; ++k) {
        if (psi.exact_polys()) {
          vanishes = (*psi.exact_polys())[static_cast<std::size_t>(k)].evaluate<GaussianRational>(exact).is_zero();
        } else {
          const auto& poly = psi.polys()[static_cast<std::size_t>(k)];
          double size = 0.0;
          for (const auto& [e, c] : poly.terms()) {
            double term = std::abs(c);
            for (std::size_t v = 0; v < e.size(); ++v) term *= std::pow(std::abs(approx[v]), e[v]);
            size += term;
          }
          vanishes = std::abs(poly.evaluate<Complex>(approx)) <= 1e-9 * size;
        }
      }
    }
    if (vanishes) return true;
  }
  return false;
}

FiberReport compute_fiber(const IndexSpectrum& spectrum, const FiberOptions& options) {
  FiberReport report(spectrum);
  const auto& profile = report.profile;
  const int d = profile.degree();
  const int ell = profile.ell();
  report.genericity = genericity(spectrum);
  report.expected = expected_counts(d, ell);
  if (!report.genericity.exact)
    report.caveats.push_back("inexact spectrum: stabilizer and zero-sum decisions used a tolerance");
  if (report.genericity.truncated) report.caveats.push_back("zero-sum partition enumeration truncated");

  if (ell == 1) {
    const Complex zero[] = {Complex(0.0, 0.0)};
    const PolynomialMap map = build_map(profile, zero, 1.0);
    report.representatives.push_back({map, 0.0, -1});
    report.mp_count = 1;
    report.mc_count = 1;
    report.status = FiberStatus::Generic;
    return report;
  }
  if (report.genericity.is_zero_vector) {
    report.mp_count = 0;
    report.mc_count = 0;
    report.status = FiberStatus::Empty;
    report.caveats.push_back("zero index vector: the fiber is empty");
    return report;
  }

  const PsiSystem psi = assemble_psi(spectrum);
  try {
    report.solve = solve(psi, options.solver);
  } catch (const IdenticallyZeroPsi& e) {
    report.status = FiberStatus::Degenerate;
    report.caveats.push_back(e.what());
    return report;
  }
  const SolveResult& solved = *report.solve;
  report.s_count = solved.count(SolutionClass::S);
  report.b_count = solved.count(SolutionClass::B);

  bool degenerate = false;
  if (solved.path_failures > 0) {
    degenerate = true;
    report.caveats.push_back(std::to_string(solved.path_failures) + " path failure(s) after " +
                             std::to_string(solved.attempts) + " attempt(s)");
  }
  if (const int amb = solved.count(SolutionClass::Ambiguous); amb > 0) {
    degenerate = true;
    report.caveats.push_back(std::to_string(amb) + " solution(s) with an undecidable coincidence pattern");
  }
  if (has_positive_dimensional_component(psi, report.genericity, options.solver.seed)) {
    degenerate = true;
    report.positive_dimensional = true;
    report.caveats.push_back("the solution set has a positive-dimensional component; no count is reported");
  }
  if (degenerate) {
    report.status = FiberStatus::Degenerate;
    return report;
  }

  lift_and_count(report, solved, options);
  if (report.verification_failures > 0) {
    std::ostringstream msg;
    msg << report.verification_failures << " representative(s) fail the index oracle (max relative error "
        << report.max_verification_error << ")";
    report.caveats.push_back(msg.str());
    degenerate = true;
  }
  if (!report.free_action) {
    report.caveats.push_back("a nontrivial stabilizer element fixes a representative");
    degenerate = true;
  }
  if (!report.count_relation_holds) {
    report.caveats.push_back("representative count disagrees with (d-1) #S / #stabilizer");
    degenerate = true;
  }
  if (*report.mp_count > report.expected.mp || *report.mc_count > report.expected.mc) {
    report.caveats.push_back("counts exceed the generic bound");
    degenerate = true;
  }
  if (report.genericity.is_generic && (*report.mp_count != report.expected.mp || *report.mc_count != report.expected.mc)) {
    report.caveats.push_back("generic spectrum but counts differ from the generic values");
    degenerate = true;
  }
  if (degenerate) {
    report.mp_count.reset();
    report.mc_count.reset();
    report.status = FiberStatus::Degenerate;
    return report;
  }
  if (report.genericity.is_generic) {
    report.status = FiberStatus::Generic;
  } else {
    report.status = FiberStatus::NonGeneric;
    report.caveats.push_back("non-generic spectrum: counts are bounded above by the generic values");
  }
  return report;
}

IndexSpectrum random_generic_spectrum(const MultiplicityProfile& profile, std::uint64_t seed) {
  const int ell = profile.ell();
  if (ell == 1) return IndexSpectrum::exact(profile, {GaussianRational()});
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> numerator(-9, 9);
  std::uniform_int_distribution<int> denominator(1, 5);
  auto draw = [&] { return Rational(numerator(rng), denominator(rng)); };
  for (int tries = 0; tries < 10000; ++tries) {
    std::vector<GaussianRational> m;
    GaussianRational sum;
    for (int i = 0; i + 1 < ell; ++i) {
      m.emplace_back(draw(), draw());
      sum += m.back();
    }
    m.push_back(GaussianRational() - sum);
    auto spectrum = IndexSpectrum::exact(profile, std::move(m));
    if (genericity(spectrum).is_generic) return spectrum;
  }
  throw ArgumentError("random_generic_spectrum: no generic spectrum found");
}

RoundtripResult roundtrip(const MultiplicityProfile& profile, std::uint64_t seed, const FiberOptions& options,
                          double tolerance) {
  RoundtripResult result;
  const int ell = profile.ell();
  const int d = profile.degree();
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  std::uniform_real_distribution<double> angle(0.0, 2.0 * std::numbers::pi);
  std::uniform_real_distribution<double> modulus(0.5, 2.0);

  const double min_separation = 0.5 / std::max(1, ell - 1);
  std::vector<Complex> zetas;
  for (int tries = 0; static_cast<int>(zetas.size()) < ell; ++tries) {
    if (tries > 100000) throw DegenerateConfiguration("roundtrip: could not sample separated fixed points");
    const Complex z(unit(rng), unit(rng));
    if (std::abs(z) > 1.0) continue;
    if (std::all_of(zetas.begin(), zetas.end(), [&](Complex w) { return std::abs(z - w) >= min_separation; }))
      zetas.push_back(z);
  }
  const Complex rho = std::polar(modulus(rng), angle(rng));

  // conjugate to monic centered form: translate by the weighted centroid, scale by a with a^{d-1} = rho
  Complex b(0.0, 0.0);
  for (int i = 0; i < ell; ++i) b += static_cast<double>(profile.part(i)) * zetas[static_cast<std::size_t>(i)];
  b /= static_cast<double>(d);
  const Complex a = d > 1 ? std::pow(rho, 1.0 / (d - 1)) : Complex(1.0, 0.0);
  std::vector<Complex> normalized;
  for (const auto& z : zetas) normalized.push_back(a * (z - b));
  result.original = build_map(profile, normalized, 1.0);

  FiberOptions opts = options;
  opts.solver.seed = seed ^ 0x5DEECE66DULL;
  const FiberReport report = compute_fiber(spectrum_of(result.original), opts);
  if (report.solve) result.solver_attempts = report.solve->attempts;

  result.coefficient_error = std::numeric_limits<double>::infinity();
  for (const auto& rep : report.representatives)
    result.coefficient_error =
        std::min(result.coefficient_error, coefficient_distance(result.original.coefficients(), rep.map.coefficients()));
  result.success = result.coefficient_error <= tolerance;

  std::ostringstream diag;
  diag << "profile " << profile.to_string() << " seed " << seed << ": status " << to_string(report.status) << ", "
       << report.representatives.size() << " representative(s), best coefficient error " << result.coefficient_error;
  for (const auto& c : report.caveats) diag << "; " << c;
  result.diagnostics = diag.str();
  return result;
}

}  // namespace indexfiber
