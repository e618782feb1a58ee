#include "indexfiber/structured_matrices.hpp"

#include <array>

namespace indexfiber {

namespace {

constexpr int kPascalRows = 62;

using PascalTable = std::array<std::array<std::int64_t, kPascalRows>, kPascalRows>;

PascalTable build_pascal() {
  PascalTable t{};
  for (int n = 0; n < kPascalRows; ++n) {
    t[n][0] = 1;
    for (int k = 1; k <= n; ++k) t[n][k] = t[n - 1][k - 1] + (k < n ? t[n - 1][k] : 0);
  }
  return t;
}

}  // namespace

std::int64_t binomial(int n, int k) {
  static const PascalTable table = build_pascal();
  if (n < 0 || k < 0 || k > n) return 0;
  if (n >= kPascalRows) throw ArgumentError("binomial: row out of cached range");
  return table[n][k];
}

}  // namespace indexfiber
