#pragma once

// Fibers of the index maps: genericity of a spectrum, the sum-zero lift of
// solutions, orbit counting under the stabilizer, and explicit monic centered
// representatives verified by the index oracle.

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "indexfiber/solver.hpp"

namespace indexfiber {

// A permutation of labels 0..l-1 as its image list.
using Permutation = std::vector<int>;

struct GenericityReport {
  long long stabilizer_order = 1;
  // Adjacent transpositions inside each class of equal (d_i, m_i); they generate the stabilizer.
  std::vector<Permutation> stabilizer_generators;
  // Labels grouped by equal (d_i, m_i); singletons included.
  std::vector<std::vector<int>> stabilizer_classes;
  std::vector<Partition> zero_subset_partitions;
  std::size_t zero_subset_partition_count = 0;
  bool truncated = false;
  bool is_zero_vector = false;
  bool is_generic = false;
  // False when decisions used the inexact fallback tolerance.
  bool exact = true;
};

GenericityReport genericity(const IndexSpectrum& spectrum, std::size_t partition_limit = 100000);

// Every element of the stabilizer (product of symmetric groups on the classes).
std::vector<Permutation> stabilizer_elements(const GenericityReport& report);

// Appends zeta_l = 0 and subtracts b = sum d_i zeta_i / d, giving the l-vector
// with sum d_i zeta'_i = 0. The point has l-1 coordinates.
Eigen::VectorXcd lift_to_sigma(std::span<const Complex> point, const MultiplicityProfile& profile);

struct ExpectedCounts {
  long long mp = 1;  // (d-2)!/(d-l)!
  long long mc = 1;  // (d-1)!/(d-l)!
};

// Throws ArgumentError unless 1 <= ell <= d; ell = 1 gives (1, 1).
ExpectedCounts expected_counts(int d, int ell);

enum class FiberStatus { Generic, NonGeneric, Empty, Degenerate };

std::string to_string(FiberStatus status);

struct Representative {
  PolynomialMap map;
  double spectrum_error = 0.0;  // unordered distance of the oracle spectrum to m, relative to max(1, max |m_i|)
  int source_solution = -1;     // index into the solver's solution list
};

struct FiberReport {
  explicit FiberReport(IndexSpectrum s) : profile(s.profile()), spectrum(std::move(s)) {}

  MultiplicityProfile profile;
  IndexSpectrum spectrum;
  GenericityReport genericity;
  std::optional<SolveResult> solve;
  FiberStatus status = FiberStatus::Degenerate;
  std::optional<long long> mp_count;
  std::optional<long long> mc_count;
  ExpectedCounts expected;
  int s_count = 0;
  int b_count = 0;
  bool positive_dimensional = false;
  bool free_action = true;
  bool count_relation_holds = true;  // mc == (d-1) #S / #stabilizer
  std::vector<Representative> representatives;
  double max_verification_error = 0.0;
  int verification_failures = 0;
  std::vector<std::string> caveats;
};

struct FiberOptions {
  SolverOptions solver{};
  double verification_tolerance = 1e-7;
  double representative_dedup = 1e-8;
  double orbit_tolerance = 1e-7;
};

// Lifts the S(m) points of `solved` to monic centered maps, verifies each with
// the index oracle and counts orbits. Throws VerificationFailure when a
// representative's spectrum misses m by more than the verification tolerance.
FiberReport enumerate_mc(const IndexSpectrum& spectrum, const SolveResult& solved, const GenericityReport& generic,
                         const FiberOptions& options = {});

// Whether T(m) contains a whole E(I) of positive dimension (a zero-sum partition
// with at least three blocks on which psi vanishes identically).
bool has_positive_dimensional_component(const PsiSystem& psi, const GenericityReport& generic, std::uint64_t seed);

// Genericity, psi assembly, solve, lift and verification; never throws for
// well-formed spectra, reporting degeneracies through status and caveats.
FiberReport compute_fiber(const IndexSpectrum& spectrum, const FiberOptions& options = {});

// Random exact spectrum (Gaussian rationals with small numerators and
// denominators) satisfying the genericity conditions; (0) when l = 1.
IndexSpectrum random_generic_spectrum(const MultiplicityProfile& profile, std::uint64_t seed);

struct RoundtripResult {
  bool success = false;
  PolynomialMap original;
  double coefficient_error = 0.0;  // best coefficientwise match among the representatives
  int solver_attempts = 0;
  std::string diagnostics;
};

// Random well-separated zeta and rho, normalized to monic centered form; the
// pipeline must recover the map among its representatives within `tolerance`.
RoundtripResult roundtrip(const MultiplicityProfile& profile, std::uint64_t seed, const FiberOptions& options = {},
                          double tolerance = 1e-6);

}  // namespace indexfiber
