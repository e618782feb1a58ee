#include <doctest.h>

#include <random>

#include "indexfiber/fiber.hpp"
#include "indexfiber/solver.hpp"
#include "support.hpp"

using namespace indexfiber;

namespace {

bool same_point_set(const SolveResult& a, const SolveResult& b, double tol) {
  if (a.solutions.size() != b.solutions.size()) return false;
  for (const auto& p : a.solutions) {
    bool found = false;
    for (const auto& q : b.solutions) found = found || projective_distance(p.coords, q.coords) < tol;
    if (!found) return false;
  }
  return true;
}

}  // namespace

TEST_CASE("backend names") {
  CHECK(parse_backend("auto") == Backend::Auto);
  CHECK(parse_backend("homotopy") == Backend::Homotopy);
  CHECK(to_string(Backend::Companion) == "companion");
  CHECK_THROWS_AS(parse_backend("newton"), ArgumentError);
}

TEST_CASE("projective helpers") {
  Eigen::VectorXcd a(2), b(2);
  a << Complex(1, 0), Complex(2, 0);
  b << Complex(0, 3), Complex(0, 6);
  CHECK(projective_distance(a, b) < 1e-15);
  const auto n = normalize_projective(a);
  CHECK(n[1] == Complex(1));
  CHECK(n[0] == Complex(0.5));
  Eigen::VectorXcd e1(2), e2(2);
  e1 << 1, 0;
  e2 << 0, 1;
  CHECK(projective_distance(e1, e2) == doctest::Approx(std::sqrt(2.0)));
}

TEST_CASE("zero-sum partitions and coincidences") {
  const auto s = testing::exact_spectrum({1, 1, 1, 1}, {1, -1, 2, -2});
  const auto parts = zero_sum_partitions(s);
  REQUIRE(parts.size() == 1);
  CHECK(parts[0] == Partition{{0, 1}, {2, 3}});
  CHECK(zero_sum_partitions(testing::exact_spectrum({1, 1, 2}, {1, 2, -3})).empty());
  const std::vector<int> block{0, 1};
  CHECK(block_sum_vanishes(s, block));
  const std::vector<Complex> pt{Complex(1), Complex(1), Complex(0.0)};
  CHECK(coincidence_partition(pt, 1e-7) == Partition{{0, 1}, {2, 3}});
}

TEST_CASE("classification") {
  const auto s = testing::exact_spectrum({1, 1, 1, 1}, {1, -1, 2, -2});
  const std::vector<Complex> distinct{Complex(1), Complex(2), Complex(3)};
  CHECK(classify(distinct, s).kind == SolutionClass::S);
  const std::vector<Complex> b_point{Complex(1), Complex(1), Complex(0)};
  const auto c = classify(b_point, s);
  CHECK(c.kind == SolutionClass::B);
  CHECK(c.pattern == Partition{{0, 1}, {2, 3}});
  const std::vector<Complex> bad{Complex(1), Complex(2), Complex(2)};
  CHECK_THROWS_AS(classify(bad, s), NumericalAmbiguity);
}

TEST_CASE("l = 2: the single point") {
  const auto r = solve(assemble_psi(testing::exact_spectrum({1, 2}, {1, -1})));
  REQUIRE(r.solutions.size() == 1);
  CHECK(r.count(SolutionClass::S) == 1);
}

TEST_CASE("(1,1,2), m=(1,2,-3): two S points z1/z2 = +-i sqrt 2") {
  for (auto backend : {Backend::Companion, Backend::Homotopy}) {
    SolverOptions o;
    o.backend = backend;
    const auto r = solve(assemble_psi(testing::exact_spectrum({1, 1, 2}, {1, 2, -3})), o);
    CHECK(r.path_failures == 0);
    REQUIRE(r.count(SolutionClass::S) == 2);
    for (const auto& p : r.solutions) {
      const Complex ratio = p.coords[0] / p.coords[1];
      CHECK(std::abs(std::abs(ratio.imag()) - std::sqrt(2.0)) < 1e-10);
      CHECK(std::abs(ratio.real()) < 1e-10);
      CHECK(std::abs(p.jacobian_det) > 1e-8);
    }
  }
}

TEST_CASE("companion backend requires l = 3") {
  SolverOptions o;
  o.backend = Backend::Companion;
  CHECK_THROWS_AS(solve(assemble_psi(testing::exact_spectrum({1, 1, 1, 1}, {1, 2, 3, -6})), o), ArgumentError);
}

TEST_CASE("B(m) points are detected with exact zero-sum blocks") {
  const auto s = testing::exact_spectrum({1, 1, 1, 1}, {1, -1, 2, -2});
  const auto r = solve(assemble_psi(s));
  CHECK(r.count(SolutionClass::Ambiguous) == 0);
  REQUIRE(r.count(SolutionClass::B) >= 1);
  for (const auto& p : r.solutions) {
    if (p.classification != SolutionClass::B) continue;
    for (const auto& block : p.coincidence_pattern) CHECK(block_sum_vanishes(s, block));
  }
}

TEST_CASE("companion and homotopy backends agree for l = 3 (property)") {
  for (int d = 3; d <= 7; ++d) {
    for (const auto& profile : profiles_of_degree(d)) {
      if (profile.ell() != 3) continue;
      const auto psi = assemble_psi(random_generic_spectrum(profile, 300 + static_cast<std::uint64_t>(d)));
      SolverOptions a;
      a.backend = Backend::Companion;
      SolverOptions b;
      b.backend = Backend::Homotopy;
      CHECK(same_point_set(solve(psi, a), solve(psi, b), 1e-7));
    }
  }
}

TEST_CASE("solution set is independent of chart, gamma and thread count (property)") {
  for (const auto& profile : {MultiplicityProfile({1, 1, 1, 2}), MultiplicityProfile({1, 1, 1, 1, 1}),
                              MultiplicityProfile({1, 2, 3})}) {
    const auto psi = assemble_psi(random_generic_spectrum(profile, 7));
    SolverOptions a;
    a.seed = 1;
    SolverOptions b;
    b.seed = 99;
    b.threads = 4;
    const auto ra = solve(psi, a);
    const auto rb = solve(psi, b);
    CHECK(ra.path_failures == 0);
    CHECK(rb.path_failures == 0);
    CHECK(same_point_set(ra, rb, 1e-7));
    CHECK(static_cast<long long>(ra.solutions.size()) == psi.bezout_number());
  }
}

TEST_CASE("fixed seed is deterministic across thread counts") {
  const auto psi = assemble_psi(random_generic_spectrum(MultiplicityProfile({1, 1, 1, 1, 2}), 3));
  SolverOptions a;
  SolverOptions b;
  b.threads = 3;
  const auto ra = solve(psi, a);
  const auto rb = solve(psi, b);
  REQUIRE(ra.solutions.size() == rb.solutions.size());
  for (std::size_t i = 0; i < ra.solutions.size(); ++i) CHECK(ra.solutions[i].coords == rb.solutions[i].coords);
}

TEST_CASE("identically vanishing component is reported") {
  // m = 0 makes every psi_k vanish
  const auto s = testing::exact_spectrum({1, 1, 1}, {0, 0, 0});
  CHECK_THROWS_AS(solve(assemble_psi(s)), IdenticallyZeroPsi);
}
