#pragma once

// Built-in consistency suite: exact matrix identities, index-oracle cross
// checks and psi-system structure. Any row can be fault-injected by name.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace indexfiber {

struct SelftestRow {
  std::string name;
  bool passed = false;
  std::string detail;
  double seconds = 0.0;
};

std::vector<std::string> selftest_row_names();

// Throws ArgumentError when `corrupt` does not name a row.
std::vector<SelftestRow> run_selftest(std::uint64_t seed, const std::optional<std::string>& corrupt = std::nullopt);

}  // namespace indexfiber
