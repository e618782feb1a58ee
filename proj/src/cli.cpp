#include "indexfiber/cli.hpp"

#include <chrono>
#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <random>
#include <sstream>

#include <CLI11.hpp>

#include "indexfiber/report.hpp"
#include "indexfiber/selftest.hpp"

namespace indexfiber {

namespace {

using nlohmann::json;

constexpr const char* kVersion = "0.1.0";

struct CommonFlags {
  std::uint64_t seed = SolverOptions{}.seed;
  double tol_dedup = SolverOptions{}.tol_dedup;
  double tol_coincide = SolverOptions{}.tol_coincide;
  int threads = 1;
  std::string backend = "auto";
  std::string format;
  std::string output;
  CLI::Option* seed_opt = nullptr;
  CLI::Option* dedup_opt = nullptr;
  CLI::Option* coincide_opt = nullptr;
  CLI::Option* threads_opt = nullptr;
  CLI::Option* backend_opt = nullptr;
  CLI::Option* output_opt = nullptr;
};

void add_common(CLI::App* sub, CommonFlags& f, const std::string& default_format) {
  f.format = default_format;
  f.seed_opt = sub->add_option("--seed", f.seed, "RNG seed (falls back to INDEXFIBER_SEED)");
  f.dedup_opt = sub->add_option("--tol-dedup", f.tol_dedup, "projective distance for merging solutions")
                    ->check(CLI::PositiveNumber);
  f.coincide_opt = sub->add_option("--tol-coincide", f.tol_coincide, "relative distance for coincident coordinates")
                       ->check(CLI::PositiveNumber);
  f.threads_opt = sub->add_option("--threads", f.threads, "path-tracking threads")->check(CLI::PositiveNumber);
  f.backend_opt = sub->add_option("--backend", f.backend, "solver backend")
                      ->check(CLI::IsMember({"auto", "companion", "homotopy"}));
  sub->add_option("--format", f.format, "output format")->check(CLI::IsMember({"json", "text"}));
  f.output_opt = sub->add_option("--output", f.output, "write the report to this file");
}

std::optional<std::uint64_t> env_seed() {
  const char* raw = std::getenv("INDEXFIBER_SEED");
  if (!raw || !*raw) return std::nullopt;
  try {
    std::size_t used = 0;
    const unsigned long long v = std::stoull(raw, &used, 0);
    if (used != std::string(raw).size()) throw std::invalid_argument(raw);
    return v;
  } catch (const std::exception&) {
    throw ArgumentError(std::string("INDEXFIBER_SEED is not an integer: '") + raw + "'");
  }
}

// flag > problem spec > environment > default
SolverOptions solver_options(const CommonFlags& f, const ProblemSpec* spec) {
  SolverOptions o;
  if (f.seed_opt->count()) {
    o.seed = f.seed;
  } else if (spec && spec->seed) {
    o.seed = *spec->seed;
  } else if (auto e = env_seed()) {
    o.seed = *e;
  }
  o.tol_dedup = f.dedup_opt->count() || !(spec && spec->tol_dedup) ? f.tol_dedup : *spec->tol_dedup;
  o.tol_coincide = f.coincide_opt->count() || !(spec && spec->tol_coincide) ? f.tol_coincide : *spec->tol_coincide;
  o.threads = f.threads_opt->count() || !(spec && spec->threads) ? f.threads : *spec->threads;
  o.backend = parse_backend(f.backend_opt->count() || !(spec && spec->backend) ? f.backend : *spec->backend);
  return o;
}

void emit(const std::string& text, const std::string& path, std::ostream& out) {
  if (path.empty()) {
    out << text;
    return;
  }
  std::ofstream file(path);
  if (!file) throw ArgumentError("cannot open output file '" + path + "'");
  file << text;
}

json read_document(const std::string& path, std::istream& in) {
  try {
    if (path.empty() || path == "-") return json::parse(in);
    std::ifstream file(path);
    if (!file) throw ArgumentError("cannot open input file '" + path + "'");
    return json::parse(file);
  } catch (const json::parse_error& e) {
    throw ArgumentError(std::string("malformed JSON: ") + e.what());
  }
}

int cmd_fiber(const CommonFlags& f, const std::string& input, bool complete_last, bool enumerate, std::istream& in,
              std::ostream& out) {
  const ProblemSpec spec = parse_problem_spec(read_document(input, in), complete_last);
  const SolverOptions solver = solver_options(f, &spec);
  FiberOptions options;
  options.solver = solver;
  const FiberReport report = compute_fiber(spec.spectrum, options);
  const std::string path = f.output_opt->count() ? f.output : spec.output.value_or("");
  if (f.format == "text") {
    emit(format_text(report, enumerate), path, out);
  } else {
    json doc = to_json(report, solver, enumerate);
    doc["command"] = enumerate ? "enumerate" : "count";
    doc["version"] = kVersion;
    emit(dump_canonical(doc), path, out);
  }
  return exit_code(report);
}

int cmd_selftest(const CommonFlags& f, const std::string& corrupt, std::ostream& out) {
  const SolverOptions solver = solver_options(f, nullptr);
  const auto rows = run_selftest(solver.seed, corrupt.empty() ? std::nullopt : std::optional<std::string>(corrupt));
  bool all = true;
  for (const auto& r : rows) all = all && r.passed;
  std::ostringstream os;
  if (f.format == "json") {
    json doc;
    json list = json::array();
    for (const auto& r : rows) list.push_back(json{{"name", r.name}, {"passed", r.passed}, {"detail", r.detail}, {"seconds", r.seconds}});
    doc["rows"] = list;
    doc["passed"] = all;
    doc["version"] = kVersion;
    os << dump_canonical(doc);
  } else {
    for (const auto& r : rows) {
      os << std::left << std::setw(22) << r.name << (r.passed ? "PASS" : "FAIL") << "  " << std::fixed
         << std::setprecision(2) << r.seconds << "s";
      if (!r.detail.empty()) os << "  " << r.detail;
      os << "\n";
    }
    os << (all ? "all rows passed\n" : "selftest FAILED\n");
  }
  emit(os.str(), f.output, out);
  return all ? 0 : 3;
}

int cmd_roundtrip(const CommonFlags& f, const std::vector<int>& parts, int trials, std::ostream& out) {
  const SolverOptions solver = solver_options(f, nullptr);
  FiberOptions options;
  options.solver = solver;
  const MultiplicityProfile profile(parts);
  int ok = 0;
  json list = json::array();
  std::ostringstream os;
  for (int t = 0; t < trials; ++t) {
    const auto result = roundtrip(profile, solver.seed + static_cast<std::uint64_t>(t), options);
    ok += result.success ? 1 : 0;
    list.push_back(json{{"trial", t}, {"success", result.success}, {"coefficient_error", result.coefficient_error},
                        {"solver_attempts", result.solver_attempts}, {"diagnostics", result.diagnostics}});
    if (f.format == "text") os << (result.success ? "ok   " : "FAIL ") << result.diagnostics << "\n";
  }
  if (f.format == "json") {
    json doc{{"profile", parts}, {"trials", trials}, {"successes", ok}, {"results", list}, {"seed", solver.seed},
             {"version", kVersion}};
    os << dump_canonical(doc);
  } else {
    os << "success " << ok << "/" << trials << "\n";
  }
  emit(os.str(), f.output, out);
  return ok == trials ? 0 : 2;
}

std::string count_text(const std::optional<long long>& c) { return c ? std::to_string(*c) : std::string("-"); }

int cmd_sweep(const CommonFlags& f, int d_max, bool inject, std::ostream& out) {
  const SolverOptions solver = solver_options(f, nullptr);
  const auto rows = run_sweep(d_max, solver, inject);
  bool all = true;
  for (const auto& r : rows) all = all && r.ok;
  std::ostringstream os;
  if (f.format == "json") {
    json list = json::array();
    for (const auto& r : rows) {
      list.push_back(json{{"profile", std::vector<int>(r.profile.parts().begin(), r.profile.parts().end())},
                          {"injected_nongeneric", r.injected_nongeneric},
                          {"expected_mp", r.expected.mp},
                          {"expected_mc", r.expected.mc},
                          {"mp_count", r.mp_count ? json(*r.mp_count) : json(nullptr)},
                          {"mc_count", r.mc_count ? json(*r.mc_count) : json(nullptr)},
                          {"s_count", r.s_count},
                          {"status", to_string(r.status)},
                          {"verification_failures", r.verification_failures},
                          {"min_abs_jacobian", r.min_abs_jacobian},
                          {"seconds", r.seconds},
                          {"caveats", r.caveats},
                          {"ok", r.ok}});
    }
    os << dump_canonical(json{{"rows", list}, {"all_ok", all}, {"d_max", d_max}, {"seed", solver.seed}, {"version", kVersion}});
  } else {
    os << std::left << std::setw(18) << "profile" << std::setw(10) << "kind" << std::setw(12) << "mp exp/obs"
       << std::setw(14) << "mc exp/obs" << std::setw(13) << "status" << std::setw(9) << "seconds"
       << "ok\n";
    for (const auto& r : rows) {
      os << std::left << std::setw(18) << r.profile.to_string() << std::setw(10)
         << (r.injected_nongeneric ? "injected" : "generic") << std::setw(12)
         << (std::to_string(r.expected.mp) + "/" + count_text(r.mp_count)) << std::setw(14)
         << (std::to_string(r.expected.mc) + "/" + count_text(r.mc_count)) << std::setw(13) << to_string(r.status)
         << std::setw(9) << std::fixed << std::setprecision(2) << r.seconds << (r.ok ? "yes" : "NO") << "\n";
    }
    os << (all ? "every row matches\n" : "sweep has mismatching rows\n");
  }
  emit(os.str(), f.output, out);
  return all ? 0 : 3;
}

IndexSpectrum injected_spectrum(const MultiplicityProfile& profile, std::mt19937_64& rng) {
  std::uniform_int_distribution<int> num(1, 9);
  std::uniform_int_distribution<int> den(1, 5);
  const int ell = profile.ell();
  const GaussianRational x(Rational(num(rng), den(rng)), Rational(num(rng), den(rng)));
  std::vector<GaussianRational> m;
  if (ell == 3) {
    // a repeated pair when the first two parts agree, otherwise a zero-sum pair
    if (profile.part(0) == profile.part(1)) {
      m = {x, x, GaussianRational(-2) * x};
    } else {
      m = {x, GaussianRational() - x, GaussianRational()};
    }
    return IndexSpectrum::exact(profile, std::move(m));
  }
  const auto rest = random_generic_spectrum(MultiplicityProfile(std::vector<int>(profile.parts().begin() + 2, profile.parts().end())), rng());
  m = {x, GaussianRational() - x};
  for (const auto& v : rest.exact_values()) m.push_back(v);
  return IndexSpectrum::exact(profile, std::move(m));
}

}  // namespace

std::vector<SweepRow> run_sweep(int d_max, const SolverOptions& options, bool inject_nongeneric) {
  if (d_max < 2 || d_max > 12) throw ArgumentError("sweep: d_max must lie in 2..12");
  std::vector<SweepRow> rows;
  std::mt19937_64 rng(options.seed);
  auto run_row = [&](const MultiplicityProfile& profile, const IndexSpectrum& spectrum, bool injected) {
    SweepRow row;
    row.profile = profile;
    row.injected_nongeneric = injected;
    FiberOptions fo;
    fo.solver = options;
    fo.solver.seed = rng();
    const auto start = std::chrono::steady_clock::now();
    const FiberReport report = compute_fiber(spectrum, fo);
    row.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    row.expected = report.expected;
    row.mp_count = report.mp_count;
    row.mc_count = report.mc_count;
    row.s_count = report.s_count;
    row.status = report.status;
    row.verification_failures = report.verification_failures;
    row.caveats = report.caveats;
    if (report.solve) {
      bool first = true;
      for (const auto& s : report.solve->solutions) {
        if (s.classification != SolutionClass::S || profile.ell() < 3) continue;
        const double v = std::abs(s.jacobian_det);
        row.min_abs_jacobian = first ? v : std::min(row.min_abs_jacobian, v);
        first = false;
      }
    }
    if (injected) {
      row.ok = report.status != FiberStatus::Generic && (!report.mc_count || *report.mc_count < report.expected.mc);
    } else {
      row.ok = report.status == FiberStatus::Generic && report.mp_count == report.expected.mp &&
               report.mc_count == report.expected.mc && report.verification_failures == 0;
    }
    rows.push_back(std::move(row));
  };
  for (int d = 2; d <= d_max; ++d) {
    for (const auto& profile : profiles_of_degree(d)) {
      run_row(profile, random_generic_spectrum(profile, rng()), false);
      if (inject_nongeneric && profile.ell() >= 3) run_row(profile, injected_spectrum(profile, rng), true);
    }
  }
  return rows;
}

int run_cli(const std::vector<std::string>& args, std::istream& in, std::ostream& out, std::ostream& err) {
  CLI::App app{"indexfiber: count and enumerate polynomial maps with prescribed holomorphic fixed-point indices"};
  app.require_subcommand(1);
  app.set_version_flag("--version", kVersion);

  CommonFlags count_flags, enum_flags, self_flags, round_flags, sweep_flags;
  std::string count_input, enum_input;
  bool count_complete = false;
  bool enum_complete = false;

  auto* count = app.add_subcommand("count", "fiber counts for a problem spec (JSON file or stdin)");
  count->add_option("input", count_input, "problem spec file ('-' or omitted: stdin)");
  count->add_flag("--complete-last", count_complete, "infer the last index from the zero sum");
  add_common(count, count_flags, "json");

  auto* enumerate = app.add_subcommand("enumerate", "counts plus all monic centered representatives");
  enumerate->add_option("input", enum_input, "problem spec file ('-' or omitted: stdin)");
  enumerate->add_flag("--complete-last", enum_complete, "infer the last index from the zero sum");
  add_common(enumerate, enum_flags, "json");

  std::string corrupt;
  auto* selftest = app.add_subcommand("selftest", "identity suite and oracle cross-checks");
  selftest->add_option("--corrupt", corrupt, "inject a fault into the named row")
      ->check(CLI::IsMember(selftest_row_names()));
  add_common(selftest, self_flags, "text");

  std::vector<int> parts;
  int trials = 10;
  auto* roundtrip_cmd = app.add_subcommand("roundtrip", "random maps through the full pipeline");
  roundtrip_cmd->add_option("--profile", parts, "multiplicity profile, e.g. 1,1,2")->required()->delimiter(',');
  roundtrip_cmd->add_option("--trials", trials, "number of random maps")->check(CLI::PositiveNumber);
  add_common(roundtrip_cmd, round_flags, "text");

  int d_max = 6;
  bool inject = false;
  auto* sweep = app.add_subcommand("sweep", "observed against generic counts for every profile up to d_max");
  sweep->add_option("--d-max", d_max, "largest degree")->check(CLI::Range(2, 12));
  sweep->add_flag("--inject-nongeneric", inject, "add a non-generic spectrum per profile with l >= 3");
  add_common(sweep, sweep_flags, "text");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  if (!reversed.empty()) reversed.pop_back();  // program name
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : 1;
  }

  try {
    if (*count) return cmd_fiber(count_flags, count_input, count_complete, false, in, out);
    if (*enumerate) return cmd_fiber(enum_flags, enum_input, enum_complete, true, in, out);
    if (*selftest) return cmd_selftest(self_flags, corrupt, out);
    if (*roundtrip_cmd) return cmd_roundtrip(round_flags, parts, trials, out);
    if (*sweep) return cmd_sweep(sweep_flags, d_max, inject, out);
  } catch (const ArgumentError& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 3;
  }
  return 1;
}

}  // namespace indexfiber
