// One PASS/FAIL line per acceptance criterion; exit status 1 if any fails.

#include <chrono>
#include <cstdio>
#include <functional>
#include <limits>
#include <random>
#include <sstream>
#include <string>

#include <Eigen/LU>

#include "indexfiber/fiber.hpp"
#include "indexfiber/structured_matrices.hpp"

using namespace indexfiber;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

struct Outcome {
  bool pass = true;
  std::string detail;
};

Outcome fail(Outcome& o, const std::string& why) {
  if (o.pass) o.detail = why;
  o.pass = false;
  return o;
}

Rational random_rational(std::mt19937_64& rng) {
  std::uniform_int_distribution<int> num(-20, 20);
  std::uniform_int_distribution<int> den(1, 7);
  return Rational(num(rng), den(rng));
}

std::vector<Rational> distinct_rationals(std::mt19937_64& rng, std::size_t n) {
  std::vector<Rational> out;
  while (out.size() < n) {
    Rational a = random_rational(rng);
    if (std::find(out.begin(), out.end(), a) == out.end()) out.push_back(a);
  }
  return out;
}

PolynomialMap random_map(std::mt19937_64& rng, int max_degree) {
  std::uniform_int_distribution<int> degree(2, max_degree);
  const auto profiles = profiles_of_degree(degree(rng));
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

// Weakly increasing block sizes summing to r, at most max_blocks of them.
void block_patterns(int r, int max_blocks, int min_part, std::vector<int>& prefix, std::vector<std::vector<int>>& out) {
  if (r == 0) {
    out.push_back(prefix);
    return;
  }
  if (static_cast<int>(prefix.size()) == max_blocks) return;
  for (int p = min_part; p <= r; ++p) {
    prefix.push_back(p);
    block_patterns(r - p, max_blocks, p, prefix, out);
    prefix.pop_back();
  }
}

Outcome exact_identities() {
  Outcome o;
  const auto start = Clock::now();
  std::mt19937_64 rng(1);
  int checked = 0;
  for (int r = 1; r <= 8; ++r) {
    std::vector<std::vector<int>> patterns;
    std::vector<int> prefix;
    block_patterns(r, 4, 1, prefix, patterns);
    for (const auto& blocks : patterns) {
      for (int trial = 0; trial < 100; ++trial) {
        const auto alpha = distinct_rationals(rng, blocks.size());
        if (!block_determinant_identity<Rational>(blocks, alpha).holds())
          return fail(o, "block determinant fails for r=" + std::to_string(r));
        if (!shifted_determinant_identity<Rational>(blocks, alpha).holds())
          return fail(o, "shifted determinant fails for r=" + std::to_string(r));
        checked += 2;
      }
    }
  }
  for (int n = 1; n <= 8; ++n)
    for (int b = 1; b <= 8; ++b)
      if (!similarity_identity<Rational>(n, b, random_rational(rng)))
        return fail(o, "similarity fails at n=" + std::to_string(n) + ", b=" + std::to_string(b));
  int kernels = 0;
  for (int d = 3; d <= 9; ++d)
    for (const auto& profile : profiles_of_degree(d)) {
      if (profile.ell() < 3) continue;
      std::vector<int> reduced;
      for (int p : profile.parts()) reduced.push_back(p - 1);
      if (!kernel_annihilation_check<Rational>(reduced, distinct_rationals(rng, reduced.size()), profile.ell()))
        return fail(o, "kernel annihilation fails for " + profile.to_string());
      ++kernels;
    }
  const double t = seconds_since(start);
  std::ostringstream os;
  os << checked << " determinant identities, 64 similarities, " << kernels << " kernel checks in " << t << " s";
  o.detail = os.str();
  if (t >= 30.0) fail(o, "runtime " + std::to_string(t) + " s exceeds 30 s");
  return o;
}

Outcome fixed_point_sum() {
  Outcome o;
  std::mt19937_64 rng(2);
  double worst_sum = 0.0;
  for (int trial = 0; trial < 500; ++trial) {
    const auto f = random_map(rng, 8);
    double scale = 0.0;
    for (int i = 0; i < f.profile().ell(); ++i) scale = std::max(scale, std::abs(holomorphic_index(f, i)));
    const double rel = index_sum_check(f) / std::max(1.0, scale);
    worst_sum = std::max(worst_sum, rel);
    if (!(rel < 1e-10)) return fail(o, "index sum " + std::to_string(rel) + " for " + f.profile().to_string());
  }
  double worst_oracle = 0.0;
  for (int trial = 0; trial < 100; ++trial) {
    const auto f = random_map(rng, 8);
    for (int i = 0; i < f.profile().ell(); ++i) {
      const Complex s = holomorphic_index(f, i);
      const Complex c = contour_index(f, i, default_contour_radius(f, i));
      const double rel = std::abs(s - c) / std::max(1.0, std::abs(s));
      worst_oracle = std::max(worst_oracle, rel);
      if (!(rel < 1e-8)) return fail(o, "series and contour differ by " + std::to_string(rel));
    }
  }
  std::ostringstream os;
  os << "max relative index sum " << worst_sum << " over 500 maps; max series/contour gap " << worst_oracle
     << " over 100 maps";
  o.detail = os.str();
  return o;
}

struct SweepCase {
  MultiplicityProfile profile;
  FiberReport report;
  double seconds;
};

std::vector<SweepCase> generic_sweep() {
  std::vector<SweepCase> out;
  std::uint64_t seed = 3000;
  for (int d = 2; d <= 7; ++d)
    for (const auto& profile : profiles_of_degree(d)) {
      if (profile.ell() < 2) continue;
      FiberOptions options;
      options.solver.seed = seed;
      const auto start = Clock::now();
      auto report = compute_fiber(random_generic_spectrum(profile, seed), options);
      out.push_back({profile, std::move(report), seconds_since(start)});
      ++seed;
    }
  return out;
}

Outcome generic_counts(const std::vector<SweepCase>& sweep, double total_seconds) {
  Outcome o;
  double slowest = 0.0;
  for (const auto& c : sweep) {
    slowest = std::max(slowest, c.seconds);
    const auto& r = c.report;
    if (!r.mp_count || !r.mc_count || *r.mp_count != r.expected.mp || *r.mc_count != r.expected.mc ||
        r.status != FiberStatus::Generic) {
      std::ostringstream os;
      os << c.profile.to_string() << ": status " << to_string(r.status) << ", mp "
         << (r.mp_count ? std::to_string(*r.mp_count) : "null") << "/" << r.expected.mp << ", mc "
         << (r.mc_count ? std::to_string(*r.mc_count) : "null") << "/" << r.expected.mc;
      fail(o, os.str());
    }
    if (c.seconds >= 60.0) fail(o, c.profile.to_string() + " took " + std::to_string(c.seconds) + " s");
  }
  if (total_seconds >= 600.0) fail(o, "sweep took " + std::to_string(total_seconds) + " s");
  if (o.pass) {
    std::ostringstream os;
    os << sweep.size() << " profiles match; slowest " << slowest << " s, total " << total_seconds << " s";
    o.detail = os.str();
  }
  return o;
}

Outcome verification_closure(const std::vector<SweepCase>& sweep) {
  Outcome o;
  std::size_t reps = 0;
  double worst = 0.0;
  for (const auto& c : sweep) {
    const auto& r = c.report;
    if (r.verification_failures != 0) fail(o, c.profile.to_string() + " has verification failures");
    if (r.mc_count && static_cast<long long>(r.representatives.size()) != *r.mc_count)
      fail(o, c.profile.to_string() + ": representative count differs from mc_count");
    const double scale = std::max(1.0, r.spectrum.max_abs());
    for (const auto& rep : r.representatives) {
      ++reps;
      if (!rep.map.is_monic_centered()) fail(o, c.profile.to_string() + ": representative not monic centered");
      const double err = unordered_distance(spectrum_of(rep.map), r.spectrum) / scale;
      worst = std::max(worst, err);
      if (!(err <= 1e-7)) fail(o, c.profile.to_string() + ": spectrum error " + std::to_string(err));
    }
  }
  if (o.pass) {
    std::ostringstream os;
    os << reps << " representatives re-verified, max relative spectrum error " << worst;
    o.detail = os.str();
  }
  return o;
}

Outcome round_trip() {
  Outcome o;
  std::ostringstream os;
  for (const auto& parts : {std::vector<int>{1, 2}, std::vector<int>{1, 1, 2}, std::vector<int>{2, 2},
                            std::vector<int>{1, 1, 1, 1}}) {
    const MultiplicityProfile profile(parts);
    int ok = 0;
    for (int t = 0; t < 20; ++t) ok += roundtrip(profile, 500 + static_cast<std::uint64_t>(t)).success ? 1 : 0;
    os << profile.to_string() << " " << ok << "/20; ";
    if (ok < 19) fail(o, profile.to_string() + " recovered " + std::to_string(ok) + "/20");
  }
  if (o.pass) o.detail = os.str();
  return o;
}

IndexSpectrum exact(std::vector<int> parts, std::initializer_list<int> m) {
  return IndexSpectrum::exact(MultiplicityProfile(std::move(parts)), std::vector<GaussianRational>(m.begin(), m.end()));
}

Outcome non_generic() {
  Outcome o;
  std::ostringstream os;
  {
    const auto s = exact({1, 1, 1, 1}, {1, -1, 2, -2});
    const auto r = compute_fiber(s);
    if (!r.mc_count || !(*r.mc_count < 6)) fail(o, "(1,1,1,1), m=(1,-1,2,-2): mc_count not below 6");
    if (r.b_count < 1) fail(o, "(1,1,1,1), m=(1,-1,2,-2): no B point");
    if (r.solve)
      for (const auto& p : r.solve->solutions) {
        if (p.classification == SolutionClass::Ambiguous) fail(o, "ambiguous solution");
        if (p.classification != SolutionClass::B) continue;
        for (const auto& block : p.coincidence_pattern)
          if (!block_sum_vanishes(s, block)) fail(o, "B point with a nonzero block sum");
      }
    os << "mc " << (r.mc_count ? std::to_string(*r.mc_count) : "null") << " with " << r.b_count << " B point(s); ";
  }
  {
    const auto r = compute_fiber(exact({1, 1, 1}, {1, 1, -2}));
    if (r.mp_count != 1 || r.status != FiberStatus::NonGeneric || r.genericity.is_generic)
      fail(o, "(1,1,1), m=(1,1,-2): expected mp 1 flagged non-generic");
    os << "(1,1,-2) mp " << (r.mp_count ? std::to_string(*r.mp_count) : "null") << " " << to_string(r.status) << "; ";
  }
  {
    const auto r = compute_fiber(exact({1, 1, 2}, {0, 0, 0}));
    if (r.status != FiberStatus::Empty || r.mc_count != 0) fail(o, "m = 0: fiber not empty");
    os << "m=0 " << to_string(r.status);
  }
  if (o.pass) o.detail = os.str();
  return o;
}

Outcome micro_oracles() {
  Outcome o;
  const auto psi = assemble_psi(exact({1, 1, 2}, {1, 2, -3}));
  using Poly = SparsePolynomial<GaussianRational>;
  const Poly expected = Poly::monomial(2, 0, 2, GaussianRational(Rational(1, 2))) + Poly::monomial(2, 1, 2);
  if (psi.size() != 1 || !psi.exact_polys() || !((*psi.exact_polys())[0] == expected))
    fail(o, "psi_1 for (1,1,2), m=(1,2,-3) differs from (z1^2 + 2 z2^2)/2");
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> unit(-2.0, 2.0);
  double worst = 0.0;
  for (int trial = 0; trial < 50; ++trial) {
    const Complex z1(unit(rng), unit(rng));
    const Complex m1(unit(rng), unit(rng));
    const auto aux = recover_aux(IndexSpectrum::numeric(MultiplicityProfile({1, 2}), {m1, -m1}),
                                 std::vector<Complex>{z1, Complex(0)});
    const Complex rho = -1.0 / (z1 * z1 * m1);
    const double e1 = std::abs(aux.rho - rho) / std::abs(rho);
    const double e2 = std::abs(aux.residues[1][1] + z1 * m1) / std::max(1.0, std::abs(z1 * m1));
    worst = std::max({worst, e1, e2});
  }
  if (!(worst <= 1e-12)) fail(o, "recover_aux relative error " + std::to_string(worst));
  if (o.pass) {
    std::ostringstream os;
    os << "psi_1 exact; recover_aux max relative error " << worst << " over 50 draws";
    o.detail = os.str();
  }
  return o;
}

// Partials in the chart where coordinate `chart` is 1, by central differences.
Eigen::MatrixXcd finite_difference_jacobian(const PsiSystem& psi, const Eigen::VectorXcd& coords, int chart) {
  const Eigen::VectorXcd base = coords / coords[chart];
  const int n = static_cast<int>(base.size());
  Eigen::MatrixXcd out(psi.size(), n - 1);
  int col = 0;
  for (int v = 0; v < n; ++v) {
    if (v == chart) continue;
    const double h = 1e-6 * std::max(1.0, std::abs(base[v]));
    Eigen::VectorXcd plus = base;
    Eigen::VectorXcd minus = base;
    plus[v] += h;
    minus[v] -= h;
    const std::vector<Complex> p(plus.data(), plus.data() + n);
    const std::vector<Complex> m(minus.data(), minus.data() + n);
    out.col(col++) = (psi.evaluate(p) - psi.evaluate(m)) / (2.0 * h);
  }
  return out;
}

Outcome jacobian_nonsingular(const std::vector<SweepCase>& sweep) {
  Outcome o;
  double min_det = std::numeric_limits<double>::infinity();
  double worst_fd = 0.0;
  int points = 0;
  for (const auto& c : sweep) {
    if (c.profile.ell() < 3 || !c.report.solve) continue;
    const auto psi = assemble_psi(c.report.spectrum);
    for (const auto& sol : c.report.solve->solutions) {
      if (sol.classification != SolutionClass::S) continue;
      ++points;
      const double det = std::abs(sol.jacobian_det);
      min_det = std::min(min_det, det);
      if (!(det > 1e-8)) fail(o, c.profile.to_string() + ": |det| = " + std::to_string(det));
      const std::vector<Complex> pt(sol.coords.data(), sol.coords.data() + sol.coords.size());
      const Eigen::MatrixXcd analytic = psi.jacobian(pt, sol.jacobian_chart);
      const Eigen::MatrixXcd fd = finite_difference_jacobian(psi, sol.coords, sol.jacobian_chart);
      const double rel = (analytic - fd).norm() / std::max(analytic.norm(), 1e-300);
      worst_fd = std::max(worst_fd, rel);
      if (!(rel <= 1e-6)) fail(o, c.profile.to_string() + ": finite-difference mismatch " + std::to_string(rel));
      const Complex det_check = analytic.determinant();
      if (!(std::abs(det_check - sol.jacobian_det) <= 1e-8 * std::max(1.0, det)))
        fail(o, c.profile.to_string() + ": reported determinant differs from the chart Jacobian");
    }
  }
  if (o.pass) {
    std::ostringstream os;
    os << points << " S points, min |det| " << min_det << ", max finite-difference gap " << worst_fd;
    o.detail = os.str();
  }
  return o;
}

void report(int n, const Outcome& o, bool& all) {
  std::printf("criterion %d: %s  %s\n", n, o.pass ? "PASS" : "FAIL", o.detail.c_str());
  std::fflush(stdout);
  all = all && o.pass;
}

}  // namespace

int main() {
  bool all = true;
  report(1, exact_identities(), all);
  report(2, fixed_point_sum(), all);
  const auto start = Clock::now();
  const auto sweep = generic_sweep();
  const double sweep_seconds = seconds_since(start);
  report(3, generic_counts(sweep, sweep_seconds), all);
  report(4, verification_closure(sweep), all);
  report(5, round_trip(), all);
  report(6, non_generic(), all);
  report(7, micro_oracles(), all);
  report(8, jacobian_nonsingular(sweep), all);
  return all ? 0 : 1;
}
