#pragma once

// Problem specifications in and fiber reports out, as JSON or text.

#include <cstdint>
#include <optional>
#include <string>

#include <json.hpp>

#include "indexfiber/fiber.hpp"

namespace indexfiber {

// A parsed input document:
//   {"d": 4, "profile": [1, 1, 2], "indices": [1, 2, -3], "options": {...}}
// Each index is an integer, a "p/q" string, an {"re": .., "im": ..} object or a
// [re, im] pair; components given as integers or strings are exact, floats make
// the whole spectrum numeric. Parts may come in any order; (d_i, m_i) pairs are
// sorted by d_i. Optional "options": seed, tol_dedup, tol_coincide, backend,
// threads, output.
struct ProblemSpec {
  IndexSpectrum spectrum;
  std::optional<std::uint64_t> seed;
  std::optional<double> tol_dedup;
  std::optional<double> tol_coincide;
  std::optional<std::string> backend;
  std::optional<int> threads;
  std::optional<std::string> output;
};

// Throws ArgumentError on malformed documents or a nonzero index sum. With
// complete_last, "indices" holds l-1 entries and m_l = -sum of the others.
ProblemSpec parse_problem_spec(const nlohmann::json& doc, bool complete_last = false);

// 0 generic without caveats, 2 non-generic / empty / any caveat, 3 degenerate.
int exit_code(const FiberReport& report);

nlohmann::json to_json(const FiberReport& report, const SolverOptions& options, bool include_representatives);

// Keys in sorted order, floats with 17 significant digits, non-finite floats as null.
std::string dump_canonical(const nlohmann::json& doc);

std::string format_text(const FiberReport& report, bool include_representatives);

std::string format_complex(Complex z);

}  // namespace indexfiber
