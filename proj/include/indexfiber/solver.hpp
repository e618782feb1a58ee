#pragma once

// Finds every point of the projective solution set T(m) of the psi-system,
// refines it, and splits it into S(m) (zeta_1..zeta_{l-1} and 0 pairwise
// distinct) and B(m) (some coincidence).

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "indexfiber/psi_system.hpp"

namespace indexfiber {

enum class Backend { Auto, Companion, Homotopy };

std::string to_string(Backend backend);
// "auto", "companion" or "homotopy"; throws ArgumentError otherwise.
Backend parse_backend(const std::string& name);

struct SolverOptions {
  std::uint64_t seed = 20240611;
  double tol_dedup = 1e-8;      // projective distance below which endpoints merge
  double tol_coincide = 1e-7;   // relative distance below which coordinates coincide
  int threads = 1;
  Backend backend = Backend::Auto;
  int max_retries = 2;          // extra attempts with a fresh chart and gamma
  int endgame_iterations = 30;
};

enum class SolutionClass { S, B, Ambiguous };

std::string to_string(SolutionClass c);

// Blocks of labels 0..l-1 (label l-1 is the pinned zeta_l = 0), each sorted,
// blocks ordered by their smallest label.
using Partition = std::vector<std::vector<int>>;

struct ProjectiveSolution {
  Eigen::VectorXcd coords;       // l-1 entries, largest-modulus entry scaled to 1
  double residual = 0.0;         // max |psi_k| at coords
  Complex jacobian_det{0.0, 0.0};
  int jacobian_chart = -1;       // coordinate pinned to 1 for jacobian_det
  SolutionClass classification = SolutionClass::S;
  Partition coincidence_pattern;
  int multiplicity = 1;          // number of endpoints merged into this point
};

struct SolveResult {
  std::vector<ProjectiveSolution> solutions;
  long long bezout = 1;
  int paths_tracked = 0;
  int path_failures = 0;         // in the reported attempt; includes suspected path jumps
  int attempts = 0;
  Backend backend_used = Backend::Auto;

  int count(SolutionClass c) const;
};

struct Classification {
  SolutionClass kind = SolutionClass::S;
  Partition pattern;
};

// Tolerance for deciding that an inexact block sum vanishes, relative to 1 + max |m_i|.
inline constexpr double kInexactZeroTolerance = 1e-12;

// Whether sum_{i in block} m_i == 0: exact for exact spectra, otherwise to
// inexact_tol * (1 + max |m_i|).
bool block_sum_vanishes(const IndexSpectrum& spectrum, std::span<const int> block,
                        double inexact_tol = kInexactZeroTolerance);

// Every partition of the labels 0..l-1 into at least two blocks, each with
// vanishing index sum. Stops after `limit` partitions (sets *truncated).
std::vector<Partition> zero_sum_partitions(const IndexSpectrum& spectrum, double inexact_tol = kInexactZeroTolerance,
                                           std::size_t limit = 100000, bool* truncated = nullptr);

// Transitive closure of |v_i - v_j| <= tol * diameter on (point, 0).
Partition coincidence_partition(std::span<const Complex> point, double tol_coincide);

// Non-discrete partitions are B(m) only if every block has vanishing index sum;
// otherwise NumericalAmbiguity is thrown.
Classification classify(std::span<const Complex> point, const IndexSpectrum& spectrum, double tol_coincide = 1e-7);

// Chordal distance between the projective points of a and b (0 when equal, at most sqrt 2).
double projective_distance(const Eigen::VectorXcd& a, const Eigen::VectorXcd& b);

// Scales so that the largest-modulus coordinate (first among ties at 1e-12) becomes 1.
Eigen::VectorXcd normalize_projective(const Eigen::VectorXcd& v);

// Throws IdenticallyZeroPsi when some component vanishes identically.
SolveResult solve(const PsiSystem& psi, const SolverOptions& options = {});

}  // namespace indexfiber
