#include "indexfiber/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <sstream>
#include <variant>

namespace indexfiber {

namespace {

using nlohmann::json;

// An exact component, or a float.
using Component = std::variant<Rational, double>;

Component parse_component(const json& j, const std::string& where) {
  if (j.is_number_integer()) return Rational(j.get<long long>());
  if (j.is_number_unsigned()) return Rational(static_cast<long long>(j.get<unsigned long long>()));
  if (j.is_number_float()) return j.get<double>();
  if (j.is_string()) {
    try {
      return GaussianRational::parse_rational(j.get<std::string>());
    } catch (const std::invalid_argument& e) {
      throw ArgumentError(where + ": " + e.what());
    }
  }
  throw ArgumentError(where + ": expected a number or a rational string");
}

double as_double(const Component& c) {
  return std::holds_alternative<double>(c) ? std::get<double>(c) : static_cast<double>(std::get<Rational>(c));
}

struct ParsedIndex {
  Component re;
  Component im;
  bool exact() const { return std::holds_alternative<Rational>(re) && std::holds_alternative<Rational>(im); }
};

ParsedIndex parse_index(const json& j, const std::string& where) {
  if (j.is_object()) {
    if (!j.contains("re")) throw ArgumentError(where + ": complex index needs \"re\"");
    for (const auto& [key, value] : j.items())
      if (key != "re" && key != "im") throw ArgumentError(where + ": unexpected key \"" + key + "\"");
    return {parse_component(j.at("re"), where + ".re"),
            j.contains("im") ? parse_component(j.at("im"), where + ".im") : Component(Rational(0))};
  }
  if (j.is_array()) {
    if (j.size() != 2) throw ArgumentError(where + ": complex pair needs exactly two entries");
    return {parse_component(j[0], where + "[0]"), parse_component(j[1], where + "[1]")};
  }
  return {parse_component(j, where), Component(Rational(0))};
}

json complex_json(Complex z) { return json::array({z.real(), z.imag()}); }

json exact_json(const GaussianRational& z) { return json{{"re", z.real().str()}, {"im", z.imag().str()}}; }

json partition_json(const Partition& p) {
  json out = json::array();
  for (const auto& block : p) out.push_back(block);
  return out;
}

void write_canonical(const json& j, std::ostringstream& os, int depth) {
  auto pad = [&](int level) { os << std::string(static_cast<std::size_t>(2 * level), ' '); };
  auto is_flat = [](const json& a) {
    return std::all_of(a.begin(), a.end(), [](const json& e) { return !e.is_structured(); });
  };
  switch (j.type()) {
    case json::value_t::object: {
      if (j.empty()) {
        os << "{}";
        return;
      }
      os << "{\n";
      std::size_t i = 0;
      for (const auto& [key, value] : j.items()) {  // std::map: sorted keys
        pad(depth + 1);
        os << json(key).dump() << ": ";
        write_canonical(value, os, depth + 1);
        os << (++i < j.size() ? ",\n" : "\n");
      }
      pad(depth);
      os << "}";
      return;
    }
    case json::value_t::array: {
      if (j.empty()) {
        os << "[]";
        return;
      }
      if (is_flat(j)) {
        os << "[";
        for (std::size_t i = 0; i < j.size(); ++i) {
          if (i) os << ", ";
          write_canonical(j[i], os, depth);
        }
        os << "]";
        return;
      }
      os << "[\n";
      for (std::size_t i = 0; i < j.size(); ++i) {
        pad(depth + 1);
        write_canonical(j[i], os, depth + 1);
        os << (i + 1 < j.size() ? ",\n" : "\n");
      }
      pad(depth);
      os << "]";
      return;
    }
    case json::value_t::number_float: {
      const double v = j.get<double>();
      if (!std::isfinite(v)) {
        os << "null";
        return;
      }
      char buf[40];
      std::snprintf(buf, sizeof buf, "%.17g", v);
      os << buf;
      return;
    }
    default:
      os << j.dump();
  }
}

}  // namespace

ProblemSpec parse_problem_spec(const json& doc, bool complete_last) {
  if (!doc.is_object()) throw ArgumentError("problem spec must be a JSON object");
  for (const auto& [key, value] : doc.items())
    if (key != "d" && key != "profile" && key != "indices" && key != "options")
      throw ArgumentError("problem spec: unexpected key \"" + key + "\"");
  if (!doc.contains("profile") || !doc.at("profile").is_array() || doc.at("profile").empty())
    throw ArgumentError("problem spec: \"profile\" must be a nonempty array of positive integers");
  std::vector<int> parts;
  for (const auto& p : doc.at("profile")) {
    if (!p.is_number_integer() || p.get<long long>() < 1 || p.get<long long>() > 60)
      throw ArgumentError("problem spec: profile entries must be positive integers");
    parts.push_back(p.get<int>());
  }
  const int degree = std::accumulate(parts.begin(), parts.end(), 0);
  if (doc.contains("d")) {
    if (!doc.at("d").is_number_integer() || doc.at("d").get<long long>() != degree)
      throw ArgumentError("problem spec: \"d\" must equal the sum of the profile (" + std::to_string(degree) + ")");
  }
  const int ell = static_cast<int>(parts.size());
  if (!doc.contains("indices") || !doc.at("indices").is_array())
    throw ArgumentError("problem spec: \"indices\" must be an array");
  const auto& raw = doc.at("indices");
  const std::size_t expected = static_cast<std::size_t>(complete_last ? ell - 1 : ell);
  if (raw.size() != expected) {
    throw ArgumentError("problem spec: expected " + std::to_string(expected) + " indices, got " +
                        std::to_string(raw.size()) + (complete_last ? " (with --complete-last)" : ""));
  }
  std::vector<ParsedIndex> idx;
  for (std::size_t i = 0; i < raw.size(); ++i) idx.push_back(parse_index(raw[i], "indices[" + std::to_string(i) + "]"));
  const bool exact = std::all_of(idx.begin(), idx.end(), [](const auto& p) { return p.exact(); });

  std::vector<GaussianRational> exact_values;
  std::vector<Complex> numeric_values;
  for (const auto& p : idx) {
    if (exact) {
      exact_values.emplace_back(std::get<Rational>(p.re), std::get<Rational>(p.im));
    } else {
      numeric_values.emplace_back(as_double(p.re), as_double(p.im));
    }
  }
  if (complete_last) {
    if (exact) {
      GaussianRational sum;
      for (const auto& v : exact_values) sum += v;
      exact_values.push_back(GaussianRational() - sum);
    } else {
      Complex sum(0.0, 0.0);
      for (const auto& v : numeric_values) sum += v;
      numeric_values.push_back(-sum);
    }
  }

  // sort (d_i, m_i) pairs by d_i, keeping the given order within equal parts
  std::vector<int> order(static_cast<std::size_t>(ell));
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) { return parts[static_cast<std::size_t>(a)] < parts[static_cast<std::size_t>(b)]; });
  std::vector<int> sorted_parts;
  std::vector<GaussianRational> sorted_exact;
  std::vector<Complex> sorted_numeric;
  for (int k : order) {
    sorted_parts.push_back(parts[static_cast<std::size_t>(k)]);
    if (exact) {
      sorted_exact.push_back(exact_values[static_cast<std::size_t>(k)]);
    } else {
      sorted_numeric.push_back(numeric_values[static_cast<std::size_t>(k)]);
    }
  }
  MultiplicityProfile profile(sorted_parts);
  std::optional<IndexSpectrum> spectrum;
  try {
    spectrum = exact ? IndexSpectrum::exact(profile, std::move(sorted_exact))
                     : IndexSpectrum::numeric(profile, std::move(sorted_numeric));
  } catch (const ArgumentError& e) {
    throw ArgumentError(std::string("problem spec: ") + e.what());
  }

  ProblemSpec spec{*spectrum, {}, {}, {}, {}, {}, {}};
  if (doc.contains("options")) {
    const auto& o = doc.at("options");
    if (!o.is_object()) throw ArgumentError("problem spec: \"options\" must be an object");
    for (const auto& [key, value] : o.items()) {
      if (key == "seed") {
        if (!value.is_number_unsigned() && !value.is_number_integer()) throw ArgumentError("options.seed must be an integer");
        spec.seed = value.get<std::uint64_t>();
      } else if (key == "tol_dedup" || key == "tol_coincide") {
        if (!value.is_number() || !(value.get<double>() > 0.0)) throw ArgumentError("options." + key + " must be positive");
        (key == "tol_dedup" ? spec.tol_dedup : spec.tol_coincide) = value.get<double>();
      } else if (key == "backend") {
        if (!value.is_string()) throw ArgumentError("options.backend must be a string");
        spec.backend = value.get<std::string>();
      } else if (key == "threads") {
        if (!value.is_number_integer() || value.get<long long>() < 1) throw ArgumentError("options.threads must be a positive integer");
        spec.threads = value.get<int>();
      } else if (key == "output") {
        if (!value.is_string()) throw ArgumentError("options.output must be a string");
        spec.output = value.get<std::string>();
      } else {
        throw ArgumentError("problem spec: unknown option \"" + key + "\"");
      }
    }
  }
  return spec;
}

int exit_code(const FiberReport& report) {
  switch (report.status) {
    case FiberStatus::Degenerate: return 3;
    case FiberStatus::Empty:
    case FiberStatus::NonGeneric: return 2;
    case FiberStatus::Generic: return report.caveats.empty() ? 0 : 2;
  }
  return 3;
}

json to_json(const FiberReport& report, const SolverOptions& options, bool include_representatives) {
  json out;
  out["degree"] = report.profile.degree();
  out["profile"] = std::vector<int>(report.profile.parts().begin(), report.profile.parts().end());
  json indices = json::array();
  for (int i = 0; i < report.spectrum.size(); ++i)
    indices.push_back(report.spectrum.is_exact() ? exact_json(report.spectrum.exact_values()[static_cast<std::size_t>(i)])
                                                 : complex_json(report.spectrum.value(i)));
  out["indices"] = indices;
  out["status"] = to_string(report.status);
  out["exit_code"] = exit_code(report);
  out["mp_count"] = report.mp_count ? json(*report.mp_count) : json(nullptr);
  out["mc_count"] = report.mc_count ? json(*report.mc_count) : json(nullptr);
  out["expected_mp"] = report.expected.mp;
  out["expected_mc"] = report.expected.mc;
  out["caveats"] = report.caveats;

  const auto& g = report.genericity;
  json gj;
  gj["stabilizer_order"] = g.stabilizer_order;
  gj["stabilizer_generators"] = g.stabilizer_generators;
  json parts = json::array();
  for (const auto& p : g.zero_subset_partitions) parts.push_back(partition_json(p));
  gj["zero_subset_partitions"] = parts;
  gj["zero_subset_partition_count"] = g.zero_subset_partition_count;
  gj["truncated"] = g.truncated;
  gj["is_zero_vector"] = g.is_zero_vector;
  gj["is_generic"] = g.is_generic;
  gj["exact"] = g.exact;
  out["genericity"] = gj;

  json sj;
  sj["seed"] = options.seed;
  sj["tol_dedup"] = options.tol_dedup;
  sj["tol_coincide"] = options.tol_coincide;
  sj["backend_requested"] = to_string(options.backend);
  sj["s_count"] = report.s_count;
  sj["b_count"] = report.b_count;
  sj["positive_dimensional"] = report.positive_dimensional;
  if (report.solve) {
    const auto& s = *report.solve;
    sj["backend"] = to_string(s.backend_used);
    sj["bezout"] = s.bezout;
    sj["paths_tracked"] = s.paths_tracked;
    sj["path_failures"] = s.path_failures;
    sj["attempts"] = s.attempts;
    json sols = json::array();
    for (const auto& p : s.solutions) {
      json pj;
      json coords = json::array();
      for (Eigen::Index i = 0; i < p.coords.size(); ++i) coords.push_back(complex_json(p.coords(i)));
      pj["coords"] = coords;
      pj["class"] = to_string(p.classification);
      pj["pattern"] = partition_json(p.coincidence_pattern);
      pj["residual"] = p.residual;
      pj["jacobian_det"] = complex_json(p.jacobian_det);
      pj["jacobian_chart"] = p.jacobian_chart;
      pj["multiplicity"] = p.multiplicity;
      sols.push_back(pj);
    }
    sj["solutions"] = sols;
  }
  out["solver"] = sj;

  json vj;
  vj["representatives_checked"] = report.representatives.size();
  vj["max_error"] = report.max_verification_error;
  vj["failures"] = report.verification_failures;
  vj["free_action"] = report.free_action;
  vj["count_relation"] = report.count_relation_holds;
  out["verification"] = vj;

  if (include_representatives) {
    json reps = json::array();
    for (const auto& r : report.representatives) {
      json rj;
      json coeffs = json::array();
      for (Eigen::Index k = 0; k < r.map.coefficients().size(); ++k) coeffs.push_back(complex_json(r.map.coefficients()(k)));
      rj["coefficients"] = coeffs;
      json zetas = json::array();
      for (const auto& z : r.map.zetas()) zetas.push_back(complex_json(z));
      rj["zetas"] = zetas;
      rj["spectrum_error"] = r.spectrum_error;
      rj["source_solution"] = r.source_solution;
      reps.push_back(rj);
    }
    out["representatives"] = reps;
  }
  return out;
}

std::string dump_canonical(const json& doc) {
  std::ostringstream os;
  write_canonical(doc, os, 0);
  os << "\n";
  return os.str();
}

std::string format_complex(Complex z) {
  std::ostringstream os;
  os.precision(12);
  os << z.real() << (std::signbit(z.imag()) ? " - " : " + ") << std::abs(z.imag()) << "i";
  return os.str();
}

std::string format_text(const FiberReport& report, bool include_representatives) {
  std::ostringstream os;
  os << "profile " << report.profile.to_string() << "  degree " << report.profile.degree() << "\n";
  os << "indices";
  for (int i = 0; i < report.spectrum.size(); ++i) {
    os << (i ? ", " : " ");
    if (report.spectrum.is_exact()) {
      os << report.spectrum.exact_values()[static_cast<std::size_t>(i)];
    } else {
      os << format_complex(report.spectrum.value(i));
    }
  }
  os << "\nstatus " << to_string(report.status) << "\n";
  auto count = [](const std::optional<long long>& c) { return c ? std::to_string(*c) : std::string("none"); };
  os << "mp_count " << count(report.mp_count) << " (generic value " << report.expected.mp << ")\n";
  os << "mc_count " << count(report.mc_count) << " (generic value " << report.expected.mc << ")\n";
  os << "stabilizer order " << report.genericity.stabilizer_order << ", zero-sum partitions "
     << report.genericity.zero_subset_partition_count << "\n";
  if (report.solve) {
    os << "S points " << report.s_count << ", B points " << report.b_count << ", paths " << report.solve->paths_tracked
       << ", failures " << report.solve->path_failures << ", attempts " << report.solve->attempts << "\n";
  }
  os << "verification: " << report.representatives.size() << " representative(s), max error "
     << report.max_verification_error << ", failures " << report.verification_failures << "\n";
  for (const auto& c : report.caveats) os << "caveat: " << c << "\n";
  if (include_representatives) {
    for (std::size_t r = 0; r < report.representatives.size(); ++r) {
      const auto& c = report.representatives[r].map.coefficients();
      os << "f" << (r + 1) << "(z) coefficients (z^0..z^" << (c.size() - 1) << "):";
      for (Eigen::Index k = 0; k < c.size(); ++k) os << (k ? "; " : " ") << format_complex(c(k));
      os << "\n";
    }
  }
  return os.str();
}

}  // namespace indexfiber
