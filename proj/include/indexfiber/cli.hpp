#pragma once

// The indexfiber command line, callable in-process.

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "indexfiber/fiber.hpp"

namespace indexfiber {

struct SweepRow {
  MultiplicityProfile profile;
  bool injected_nongeneric = false;
  ExpectedCounts expected;
  std::optional<long long> mp_count;
  std::optional<long long> mc_count;
  int s_count = 0;
  FiberStatus status = FiberStatus::Degenerate;
  int verification_failures = 0;
  double min_abs_jacobian = 0.0;  // over S points; 0 when there are none
  double seconds = 0.0;
  std::vector<std::string> caveats;
  // Generic rows: counts equal the generic values. Injected rows: flagged as
  // non-generic with mc_count strictly below the generic value.
  bool ok = false;
};

// Every profile of degree 2..d_max with a random generic exact spectrum, plus
// (when inject_nongeneric) one spectrum with a zero-sum pair per profile with l >= 3.
std::vector<SweepRow> run_sweep(int d_max, const SolverOptions& options, bool inject_nongeneric);

// argv[0] is the program name. Reads problem specs from `in` when no file is given.
int run_cli(const std::vector<std::string>& args, std::istream& in, std::ostream& out, std::ostream& err);

}  // namespace indexfiber
