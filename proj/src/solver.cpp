#include "indexfiber/solver.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <optional>
#include <random>
#include <thread>
#include <tuple>

#include <Eigen/Eigenvalues>
#include <Eigen/LU>
#include <Eigen/QR>
#include <Eigen/SVD>

namespace indexfiber {

namespace {

using VecC = Eigen::VectorXcd;
using MatC = Eigen::MatrixXcd;

std::span<const Complex> as_span(const VecC& v) { return {v.data(), static_cast<std::size_t>(v.size())}; }

Complex random_complex(std::mt19937_64& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  const double re = normal(rng);
  const double im = normal(rng);
  return Complex(re, im) / std::numbers::sqrt2;
}

Complex random_unit(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> angle(0.0, 2.0 * std::numbers::pi);
  return std::polar(1.0, angle(rng));
}

// zeta = p + Q x parametrizes a generic affine chart of P^{l-2}.
struct AffineChart {
  VecC p;
  MatC q;

  VecC point(const VecC& x) const { return p + q * x; }
};

AffineChart random_chart(int n_vars, std::mt19937_64& rng) {
  AffineChart c;
  c.p.resize(n_vars);
  c.q.resize(n_vars, n_vars - 1);
  for (int i = 0; i < n_vars; ++i) c.p(i) = random_complex(rng);
  for (int j = 0; j < n_vars - 1; ++j)
    for (int i = 0; i < n_vars; ++i) c.q(i, j) = random_complex(rng);
  return c;
}

struct PathEnd {
  VecC x;
  bool ok = false;
};

struct TotalDegreeHomotopy {
  const PsiSystem& psi;
  const AffineChart& chart;
  std::vector<int> degrees;
  Complex gamma;

  VecC target(const VecC& x) const { return psi.evaluate(as_span(chart.point(x))); }
  MatC target_jacobian(const VecC& x) const { return psi.gradient(as_span(chart.point(x))) * chart.q; }

  VecC start(const VecC& x) const {
    VecC g(x.size());
    for (int k = 0; k < x.size(); ++k) g(k) = std::pow(x(k), degrees[static_cast<std::size_t>(k)]) - 1.0;
    return g;
  }
  MatC start_jacobian(const VecC& x) const {
    MatC j = MatC::Zero(x.size(), x.size());
    for (int k = 0; k < x.size(); ++k) {
      const int deg = degrees[static_cast<std::size_t>(k)];
      j(k, k) = static_cast<double>(deg) * std::pow(x(k), deg - 1);
    }
    return j;
  }

  VecC value(const VecC& x, double t) const { return (1.0 - t) * gamma * start(x) + t * target(x); }
  MatC dx(const VecC& x, double t) const { return (1.0 - t) * gamma * start_jacobian(x) + t * target_jacobian(x); }
  VecC dt(const VecC& x) const { return target(x) - gamma * start(x); }

  // dx/dt along the path
  VecC tangent(const VecC& x, double t) const { return -dx(x, t).partialPivLu().solve(dt(x)); }
};

bool finite(const VecC& v) { return v.allFinite(); }

VecC newton_endgame(const TotalDegreeHomotopy& h, VecC x, int iterations) {
  for (int it = 0; it < iterations; ++it) {
    const VecC delta = h.target_jacobian(x).partialPivLu().solve(h.target(x));
    if (!finite(delta)) break;
    x -= delta;
    if (delta.norm() <= 1e-15 * (1.0 + x.norm())) break;
  }
  return x;
}

PathEnd track(const TotalDegreeHomotopy& h, VecC x, int endgame_iterations) {
  constexpr double kMaxStep = 0.05;
  constexpr double kMinStep = 1e-13;
  constexpr double kCorrectorTol = 1e-10;
  constexpr double kDivergence = 1e8;
  constexpr int kMaxSteps = 200000;

  double t = 0.0;
  double step = 0.01;
  int streak = 0;
  for (int n = 0; t < 1.0; ++n) {
    if (n > kMaxSteps) return {x, false};
    const double hstep = std::min(step, 1.0 - t);
    // RK4 predictor
    const VecC k1 = h.tangent(x, t);
    const VecC k2 = h.tangent(x + 0.5 * hstep * k1, t + 0.5 * hstep);
    const VecC k3 = h.tangent(x + 0.5 * hstep * k2, t + 0.5 * hstep);
    const VecC k4 = h.tangent(x + hstep * k3, t + hstep);
    VecC y = x + (hstep / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    const double t1 = (hstep == 1.0 - t) ? 1.0 : t + hstep;

    bool converged = false;
    if (finite(y)) {
      for (int it = 0; it < 3; ++it) {
        const VecC delta = h.dx(y, t1).partialPivLu().solve(h.value(y, t1));
        if (!finite(delta)) break;
        y -= delta;
        if (delta.norm() <= kCorrectorTol * (1.0 + y.norm())) {
          converged = true;
          break;
        }
      }
    }
    if (converged) {
      x = y;
      t = t1;
      if (x.norm() > kDivergence) return {x, false};
      if (++streak >= 4) {
        step = std::min(2.0 * step, kMaxStep);
        streak = 0;
      }
    } else {
      step *= 0.5;
      streak = 0;
      if (step < kMinStep) {
        // a singular endpoint stalls the tracker just short of t = 1
        if (t < 0.99) return {x, false};
        break;
      }
    }
  }
  x = newton_endgame(h, x, endgame_iterations);
  return {x, finite(x) && x.norm() <= kDivergence};
}

std::vector<VecC> start_points(const std::vector<int>& degrees) {
  std::vector<VecC> out;
  const int n = static_cast<int>(degrees.size());
  std::vector<int> idx(static_cast<std::size_t>(n), 0);
  while (true) {
    VecC x(n);
    for (int k = 0; k < n; ++k) {
      const int deg = degrees[static_cast<std::size_t>(k)];
      x(k) = std::polar(1.0, 2.0 * std::numbers::pi * idx[static_cast<std::size_t>(k)] / deg);
    }
    out.push_back(std::move(x));
    int k = 0;
    for (; k < n; ++k) {
      if (++idx[static_cast<std::size_t>(k)] < degrees[static_cast<std::size_t>(k)]) break;
      idx[static_cast<std::size_t>(k)] = 0;
    }
    if (k == n) break;
  }
  return out;
}

// Univariate coefficients (ascending) of poly(p + s q).
std::vector<Complex> restrict_to_line(const SparsePolynomial<Complex>& poly, const VecC& p, const VecC& q) {
  const int deg = std::max(poly.total_degree(), 0);
  std::vector<Complex> out(static_cast<std::size_t>(deg + 1), Complex(0.0, 0.0));
  for (const auto& [e, c] : poly.terms()) {
    std::vector<Complex> term{c};
    for (std::size_t v = 0; v < e.size(); ++v) {
      for (int k = 0; k < e[v]; ++k) {
        std::vector<Complex> next(term.size() + 1, Complex(0.0, 0.0));
        for (std::size_t a = 0; a < term.size(); ++a) {
          next[a] += term[a] * p(static_cast<Eigen::Index>(v));
          next[a + 1] += term[a] * q(static_cast<Eigen::Index>(v));
        }
        term = std::move(next);
      }
    }
    for (std::size_t a = 0; a < term.size(); ++a) out[a] += term[a];
  }
  return out;
}

double residual_at(const PsiSystem& psi, const VecC& z) {
  if (psi.size() == 0) return 0.0;
  return psi.evaluate(as_span(z)).cwiseAbs().maxCoeff();
}

// Newton on psi = 0 restricted to the hyperplane <z0, z> = 1 through the normalized start.
VecC refine_projective(const PsiSystem& psi, VecC z, int iterations) {
  if (psi.size() == 0 || z.norm() == 0.0) return z;
  z /= z.norm();
  const VecC c = z.conjugate();
  const int n = psi.n_vars();
  VecC best = z;
  double best_res = residual_at(psi, normalize_projective(z));
  for (int it = 0; it < iterations; ++it) {
    MatC a(n, n);
    a.topRows(n - 1) = psi.gradient(as_span(z));
    a.row(n - 1) = c.transpose();
    VecC r(n);
    r.head(n - 1) = psi.evaluate(as_span(z));
    r(n - 1) = (c.transpose() * z)(0) - 1.0;
    const VecC delta = a.colPivHouseholderQr().solve(r);
    if (!finite(delta)) break;
    z -= delta;
    const double res = residual_at(psi, normalize_projective(z));
    if (res < best_res) {
      best_res = res;
      best = z;
    }
    if (delta.norm() <= 1e-15 * z.norm()) break;
  }
  return best;
}

std::uint64_t attempt_seed(std::uint64_t seed, int attempt) {
  return seed + static_cast<std::uint64_t>(attempt) * 0x9E3779B97F4A7C15ULL;
}

struct Attempt {
  std::vector<VecC> endpoints;  // projective points in C^{l-1}
  int failures = 0;
  int paths = 0;
  Backend backend = Backend::Auto;
};

Attempt run_companion(const PsiSystem& psi, std::mt19937_64& rng) {
  Attempt out;
  out.backend = Backend::Companion;
  const AffineChart chart = random_chart(psi.n_vars(), rng);
  const VecC q = chart.q.col(0);
  const auto coeffs = restrict_to_line(psi.polys()[0], chart.p, q);
  const int deg = static_cast<int>(coeffs.size()) - 1;
  out.paths = static_cast<int>(psi.bezout_number());
  double scale = 0.0;
  for (const auto& c : coeffs) scale = std::max(scale, std::abs(c));
  if (deg < 1 || !(std::abs(coeffs.back()) > 1e-12 * scale)) {
    out.failures = out.paths;
    return out;
  }
  MatC companion = MatC::Zero(deg, deg);
  for (int i = 1; i < deg; ++i) companion(i, i - 1) = 1.0;
  for (int i = 0; i < deg; ++i) companion(i, deg - 1) = -coeffs[static_cast<std::size_t>(i)] / coeffs.back();
  const Eigen::ComplexEigenSolver<MatC> eig(companion, false);
  if (eig.info() != Eigen::Success) {
    out.failures = out.paths;
    return out;
  }
  for (int i = 0; i < deg; ++i) out.endpoints.push_back(chart.p + eig.eigenvalues()(i) * q);
  out.failures = out.paths - deg;
  return out;
}

Attempt run_homotopy(const PsiSystem& psi, std::mt19937_64& rng, const SolverOptions& options) {
  Attempt out;
  out.backend = Backend::Homotopy;
  const AffineChart chart = random_chart(psi.n_vars(), rng);
  const TotalDegreeHomotopy h{psi, chart, psi.degrees(), random_unit(rng)};
  const auto starts = start_points(h.degrees);
  out.paths = static_cast<int>(starts.size());
  std::vector<PathEnd> ends(starts.size());
  const int n_threads = std::max(1, std::min<int>(options.threads, static_cast<int>(starts.size())));
  auto worker = [&](int offset) {
    for (std::size_t i = static_cast<std::size_t>(offset); i < starts.size(); i += static_cast<std::size_t>(n_threads))
      ends[i] = track(h, starts[i], options.endgame_iterations);
  };
  if (n_threads == 1) {
    worker(0);
  } else {
    std::vector<std::thread> pool;
    for (int w = 0; w < n_threads; ++w) pool.emplace_back(worker, w);
    for (auto& th : pool) th.join();
  }
  for (const auto& e : ends) {
    if (e.ok) {
      out.endpoints.push_back(chart.point(e.x));
    } else {
      ++out.failures;
    }
  }
  return out;
}

// Two-block zero-sum partitions give single points of P^{l-2}; returns the one
// within reach of z, if any.
std::optional<VecC> snap_target(const VecC& z, const std::vector<VecC>& anchors) {
  for (const auto& a : anchors)
    if (projective_distance(z, a) < 1e-4) return a;
  return std::nullopt;
}

bool nonsingular(const MatC& jac) {
  if (jac.size() == 0) return true;
  const Eigen::JacobiSVD<MatC> svd(jac);
  const auto& s = svd.singularValues();
  return s(0) > 0.0 && s(s.size() - 1) > 1e-8 * s(0);
}

int jacobian_chart_for(const VecC& coords) {
  const int last = static_cast<int>(coords.size()) - 1;
  const double scale = coords.cwiseAbs().maxCoeff();
  if (std::abs(coords(last)) > 1e-8 * scale) return last;
  Eigen::Index arg = 0;
  coords.cwiseAbs().maxCoeff(&arg);
  return static_cast<int>(arg);
}

}  // namespace

std::string to_string(Backend backend) {
  switch (backend) {
    case Backend::Auto: return "auto";
    case Backend::Companion: return "companion";
    case Backend::Homotopy: return "homotopy";
  }
  return "auto";
}

Backend parse_backend(const std::string& name) {
  if (name == "auto") return Backend::Auto;
  if (name == "companion") return Backend::Companion;
  if (name == "homotopy") return Backend::Homotopy;
  throw ArgumentError("unknown backend '" + name + "' (expected auto, companion or homotopy)");
}

std::string to_string(SolutionClass c) {
  switch (c) {
    case SolutionClass::S: return "S";
    case SolutionClass::B: return "B";
    case SolutionClass::Ambiguous: return "ambiguous";
  }
  return "S";
}

int SolveResult::count(SolutionClass c) const {
  return static_cast<int>(
      std::count_if(solutions.begin(), solutions.end(), [&](const auto& s) { return s.classification == c; }));
}

bool block_sum_vanishes(const IndexSpectrum& spectrum, std::span<const int> block, double inexact_tol) {
  if (spectrum.is_exact()) {
    GaussianRational sum;
    for (int i : block) sum += spectrum.exact_values()[static_cast<std::size_t>(i)];
    return sum.is_zero();
  }
  Complex sum(0.0, 0.0);
  for (int i : block) sum += spectrum.value(i);
  return std::abs(sum) <= inexact_tol * (1.0 + spectrum.max_abs());
}

std::vector<Partition> zero_sum_partitions(const IndexSpectrum& spectrum, double inexact_tol, std::size_t limit,
                                           bool* truncated) {
  const int ell = spectrum.size();
  std::vector<Partition> out;
  if (truncated) *truncated = false;
  Partition current;
  std::vector<bool> used(static_cast<std::size_t>(ell), false);

  // Place the smallest unused label in a new block together with a subset of the later unused labels.
  auto recurse = [&](auto&& self) -> void {
    if (out.size() >= limit) {
      if (truncated) *truncated = true;
      return;
    }
    int first = -1;
    for (int i = 0; i < ell; ++i)
      if (!used[static_cast<std::size_t>(i)]) {
        first = i;
        break;
      }
    if (first < 0) {
      if (current.size() >= 2) out.push_back(current);
      return;
    }
    std::vector<int> rest;
    for (int i = first + 1; i < ell; ++i)
      if (!used[static_cast<std::size_t>(i)]) rest.push_back(i);
    const std::size_t n_sub = std::size_t{1} << rest.size();
    for (std::size_t mask = 0; mask < n_sub; ++mask) {
      std::vector<int> block{first};
      for (std::size_t b = 0; b < rest.size(); ++b)
        if (mask & (std::size_t{1} << b)) block.push_back(rest[b]);
      if (!block_sum_vanishes(spectrum, block, inexact_tol)) continue;
      for (int i : block) used[static_cast<std::size_t>(i)] = true;
      current.push_back(block);
      self(self);
      current.pop_back();
      for (int i : block) used[static_cast<std::size_t>(i)] = false;
      if (out.size() >= limit) return;
    }
  };
  recurse(recurse);
  return out;
}

Partition coincidence_partition(std::span<const Complex> point, double tol_coincide) {
  std::vector<Complex> v(point.begin(), point.end());
  v.emplace_back(0.0, 0.0);
  const int n = static_cast<int>(v.size());
  double diameter = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) diameter = std::max(diameter, std::abs(v[i] - v[j]));
  std::vector<int> parent(static_cast<std::size_t>(n));
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](int i) {
    while (parent[static_cast<std::size_t>(i)] != i) i = parent[static_cast<std::size_t>(i)];
    return i;
  };
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      if (std::abs(v[i] - v[j]) <= tol_coincide * diameter) {
        const int a = find(i);
        const int b = find(j);
        if (a != b) parent[static_cast<std::size_t>(std::max(a, b))] = std::min(a, b);
      }
  Partition blocks;
  std::vector<int> block_of(static_cast<std::size_t>(n), -1);
  for (int i = 0; i < n; ++i) {
    const int r = find(i);
    if (block_of[static_cast<std::size_t>(r)] < 0) {
      block_of[static_cast<std::size_t>(r)] = static_cast<int>(blocks.size());
      blocks.emplace_back();
    }
    blocks[static_cast<std::size_t>(block_of[static_cast<std::size_t>(r)])].push_back(i);
  }
  return blocks;
}

Classification classify(std::span<const Complex> point, const IndexSpectrum& spectrum, double tol_coincide) {
  if (static_cast<int>(point.size()) + 1 != spectrum.size()) throw ArgumentError("classify: dimension mismatch");
  double scale = 0.0;
  for (const auto& z : point) scale = std::max(scale, std::abs(z));
  if (!(scale > 0.0)) throw NumericalAmbiguity("classify: the zero vector is not a projective point");
  Classification out;
  out.pattern = coincidence_partition(point, tol_coincide);
  if (static_cast<int>(out.pattern.size()) == spectrum.size()) {
    out.kind = SolutionClass::S;
    return out;
  }
  for (const auto& block : out.pattern) {
    if (!block_sum_vanishes(spectrum, block)) {
      throw NumericalAmbiguity("classify: coincidence pattern has a block with nonzero index sum");
    }
  }
  out.kind = SolutionClass::B;
  return out;
}

double projective_distance(const VecC& a, const VecC& b) {
  if (a.size() != b.size()) throw ArgumentError("projective_distance: dimension mismatch");
  const double na = a.norm();
  const double nb = b.norm();
  if (na == 0.0 || nb == 0.0) throw ArgumentError("projective_distance: zero vector");
  const VecC u = a / na;
  const VecC v = b / nb;
  const Complex inner = u.dot(v);  // u^H v
  const double mag = std::abs(inner);
  if (mag == 0.0) return std::numbers::sqrt2;
  return (u * (inner / mag) - v).norm();
}

VecC normalize_projective(const VecC& v) {
  if (v.size() == 0) return v;
  const double top = v.cwiseAbs().maxCoeff();
  if (!(top > 0.0)) throw ArgumentError("normalize_projective: zero vector");
  for (Eigen::Index i = 0; i < v.size(); ++i)
    if (std::abs(v(i)) >= top * (1.0 - 1e-12)) return v / v(i);
  return v / top;
}

SolveResult solve(const PsiSystem& psi, const SolverOptions& options) {
  const int ell = psi.profile().ell();
  if (ell < 2) throw ArgumentError("solve: need at least two fixed points");
  if (!psi.zero_components().empty()) throw IdenticallyZeroPsi("solve: a component of the psi-system vanishes identically");

  SolveResult result;
  result.bezout = psi.bezout_number();
  if (ell == 2) {
    ProjectiveSolution s;
    s.coords = VecC::Ones(1);
    s.jacobian_det = Complex(1.0, 0.0);
    s.jacobian_chart = 0;
    s.classification = SolutionClass::S;
    s.coincidence_pattern = coincidence_partition(as_span(s.coords), options.tol_coincide);
    result.solutions.push_back(std::move(s));
    result.paths_tracked = 1;
    result.attempts = 1;
    result.backend_used = Backend::Companion;
    return result;
  }

  const double residual_tol = 1e-10 * (1.0 + psi.coefficient_scale());
  // single points E(I) for two-block zero-sum partitions
  std::vector<VecC> anchors;
  for (const auto& part : zero_sum_partitions(psi.spectrum(), kInexactZeroTolerance, 1000)) {
    if (part.size() != 2) continue;
    const auto& moving = (std::find(part[0].begin(), part[0].end(), ell - 1) == part[0].end()) ? part[0] : part[1];
    VecC e = VecC::Zero(ell - 1);
    for (int i : moving) e(i) = 1.0;
    if (residual_at(psi, e) <= residual_tol) anchors.push_back(e);
  }

  const int attempts = 1 + std::max(0, options.max_retries);
  for (int attempt = 0; attempt < attempts; ++attempt) {
    std::mt19937_64 rng(attempt_seed(options.seed, attempt));
    const bool companion = ell == 3 && options.backend != Backend::Homotopy;
    if (options.backend == Backend::Companion && ell != 3)
      throw ArgumentError("solve: the companion backend needs exactly three fixed points");
    Attempt run = companion ? run_companion(psi, rng) : run_homotopy(psi, rng, options);

    struct Merged {
      VecC z;
      int count;
    };
    std::vector<Merged> merged;
    int failures = run.failures;
    for (auto& raw : run.endpoints) {
      VecC z = refine_projective(psi, raw, std::max(options.endgame_iterations, 8));
      if (!finite(z) || z.norm() == 0.0) {
        ++failures;
        continue;
      }
      z = normalize_projective(z);
      if (auto a = snap_target(z, anchors)) z = *a;
      if (!(residual_at(psi, z) <= residual_tol)) {
        ++failures;
        continue;
      }
      auto it = std::find_if(merged.begin(), merged.end(),
                             [&](const Merged& m) { return projective_distance(m.z, z) < options.tol_dedup; });
      if (it == merged.end()) {
        merged.push_back({z, 1});
      } else {
        ++it->count;
      }
    }

    SolveResult current;
    current.bezout = result.bezout;
    current.paths_tracked = run.paths;
    current.attempts = attempt + 1;
    current.backend_used = run.backend;
    for (const auto& m : merged) {
      ProjectiveSolution s;
      s.coords = m.z;
      s.multiplicity = m.count;
      s.residual = residual_at(psi, m.z);
      s.jacobian_chart = jacobian_chart_for(m.z);
      const MatC jac = psi.jacobian(as_span(m.z), s.jacobian_chart);
      s.jacobian_det = jac.determinant();
      try {
        auto c = classify(as_span(m.z), psi.spectrum(), options.tol_coincide);
        s.classification = c.kind;
        s.coincidence_pattern = std::move(c.pattern);
      } catch (const NumericalAmbiguity&) {
        s.classification = SolutionClass::Ambiguous;
        s.coincidence_pattern = coincidence_partition(as_span(m.z), options.tol_coincide);
      }
      // a regular point reached by two paths means a path jumped
      if (m.count > 1 && nonsingular(jac)) failures += m.count - 1;
      current.solutions.push_back(std::move(s));
    }
    current.path_failures = failures;
    std::sort(current.solutions.begin(), current.solutions.end(), [](const auto& a, const auto& b) {
      auto key = [](const ProjectiveSolution& s) {
        std::vector<long long> k{static_cast<long long>(s.classification)};
        for (Eigen::Index i = 0; i < s.coords.size(); ++i) {
          k.push_back(std::llround(s.coords(i).real() * 1e6));
          k.push_back(std::llround(s.coords(i).imag() * 1e6));
        }
        return k;
      };
      return key(a) < key(b);
    });
    const bool better = attempt == 0 || current.path_failures < result.path_failures;
    if (better) result = std::move(current);
    result.attempts = attempt + 1;
    if (result.path_failures == 0) break;
  }
  return result;
}

}  // namespace indexfiber
