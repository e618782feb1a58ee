#pragma once

#include <algorithm>
#include <map>
#include <span>
#include <type_traits>
#include <vector>

#include "indexfiber/errors.hpp"
#include "indexfiber/gaussian_rational.hpp"

namespace indexfiber {

using Exponents = std::vector<int>;

// Multivariate polynomial stored as an ordered monomial -> coefficient map.
// Zero coefficients are never stored, so is_zero() and degree queries are exact
// for exact scalars.
template <typename Scalar>
class SparsePolynomial {
 public:
  using Terms = std::map<Exponents, Scalar>;

  explicit SparsePolynomial(int n_vars = 0) : n_vars_(n_vars) {}

  static SparsePolynomial constant(int n_vars, const Scalar& c) {
    SparsePolynomial p(n_vars);
    p.add_term(Exponents(static_cast<std::size_t>(n_vars), 0), c);
    return p;
  }

  // c * x_var^power
  static SparsePolynomial monomial(int n_vars, int var, int power, const Scalar& c = Scalar(1)) {
    SparsePolynomial p(n_vars);
    Exponents e(static_cast<std::size_t>(n_vars), 0);
    e.at(static_cast<std::size_t>(var)) = power;
    p.add_term(std::move(e), c);
    return p;
  }

  int n_vars() const { return n_vars_; }
  const Terms& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }

  void add_term(Exponents e, const Scalar& c) {
    if (static_cast<int>(e.size()) != n_vars_) throw ArgumentError("SparsePolynomial: exponent length mismatch");
    if (is_exact_zero(c)) return;
    auto [it, inserted] = terms_.try_emplace(std::move(e), c);
    if (!inserted) {
      it->second += c;
      if (is_exact_zero(it->second)) terms_.erase(it);
    }
  }

  // -1 for the zero polynomial.
  int total_degree() const {
    int deg = -1;
    for (const auto& [e, c] : terms_) deg = std::max(deg, degree_of(e));
    return deg;
  }

  bool is_homogeneous() const {
    if (terms_.empty()) return true;
    const int deg = degree_of(terms_.begin()->first);
    return std::all_of(terms_.begin(), terms_.end(), [&](const auto& t) { return degree_of(t.first) == deg; });
  }

  SparsePolynomial& operator+=(const SparsePolynomial& o) {
    check_vars(o);
    for (const auto& [e, c] : o.terms_) add_term(e, c);
    return *this;
  }
  SparsePolynomial& operator-=(const SparsePolynomial& o) {
    check_vars(o);
    for (const auto& [e, c] : o.terms_) add_term(e, -c);
    return *this;
  }
  SparsePolynomial& operator*=(const Scalar& s) {
    if (is_exact_zero(s)) {
      terms_.clear();
      return *this;
    }
    for (auto& [e, c] : terms_) c *= s;
    return *this;
  }

  friend SparsePolynomial operator+(SparsePolynomial a, const SparsePolynomial& b) { return a += b; }
  friend SparsePolynomial operator-(SparsePolynomial a, const SparsePolynomial& b) { return a -= b; }
  friend SparsePolynomial operator*(SparsePolynomial a, const Scalar& s) { return a *= s; }
  friend SparsePolynomial operator*(const Scalar& s, SparsePolynomial a) { return a *= s; }
  friend SparsePolynomial operator*(const SparsePolynomial& a, const SparsePolynomial& b) {
    a.check_vars(b);
    SparsePolynomial out(a.n_vars_);
    for (const auto& [ea, ca] : a.terms_) {
      for (const auto& [eb, cb] : b.terms_) {
        Exponents e(ea);
        for (std::size_t v = 0; v < e.size(); ++v) e[v] += eb[v];
        out.add_term(std::move(e), ca * cb);
      }
    }
    return out;
  }

  SparsePolynomial derivative(int var) const {
    if (var < 0 || var >= n_vars_) throw ArgumentError("SparsePolynomial: variable out of range");
    SparsePolynomial out(n_vars_);
    for (const auto& [e, c] : terms_) {
      const int p = e[static_cast<std::size_t>(var)];
      if (p == 0) continue;
      Exponents ed(e);
      ed[static_cast<std::size_t>(var)] = p - 1;
      out.add_term(std::move(ed), Scalar(p) * c);
    }
    return out;
  }

  // Evaluation at a point of scalar type T. Coefficients are used as-is when
  // T == Scalar, otherwise converted to Complex.
  template <typename T>
  T evaluate(std::span<const T> point) const {
    if (static_cast<int>(point.size()) != n_vars_) throw ArgumentError("SparsePolynomial: point dimension mismatch");
    const int deg = std::max(total_degree(), 0);
    // powers[v][p] = point[v]^p
    std::vector<std::vector<T>> powers(point.size());
    for (std::size_t v = 0; v < point.size(); ++v) {
      powers[v].assign(static_cast<std::size_t>(deg + 1), T(1));
      for (int p = 1; p <= deg; ++p) powers[v][static_cast<std::size_t>(p)] = powers[v][static_cast<std::size_t>(p - 1)] * point[v];
    }
    T sum(0);
    for (const auto& [e, c] : terms_) {
      T term = coefficient_as<T>(c);
      for (std::size_t v = 0; v < e.size(); ++v)
        if (e[v] != 0) term *= powers[v][static_cast<std::size_t>(e[v])];
      sum += term;
    }
    return sum;
  }

  double max_abs_coefficient() const {
    double m = 0.0;
    for (const auto& [e, c] : terms_) m = std::max(m, std::abs(to_complex(c)));
    return m;
  }

  SparsePolynomial<Complex> to_complex_polynomial() const {
    SparsePolynomial<Complex> out(n_vars_);
    for (const auto& [e, c] : terms_) out.add_term(e, to_complex(c));
    return out;
  }

  friend bool operator==(const SparsePolynomial& a, const SparsePolynomial& b) {
    return a.n_vars_ == b.n_vars_ && a.terms_ == b.terms_;
  }

 private:
  static int degree_of(const Exponents& e) {
    int s = 0;
    for (int x : e) s += x;
    return s;
  }

  template <typename T>
  static T coefficient_as(const Scalar& c) {
    if constexpr (std::is_same_v<T, Scalar>) {
      return c;
    } else {
      return T(to_complex(c));
    }
  }

  void check_vars(const SparsePolynomial& o) const {
    if (o.n_vars_ != n_vars_) throw ArgumentError("SparsePolynomial: variable count mismatch");
  }

  int n_vars_;
  Terms terms_;
};

}  // namespace indexfiber
