#pragma once

#include <complex>
#include <iosfwd>
#include <string>
#include <string_view>

#include <Eigen/Core>
#include <boost/multiprecision/eigen.hpp>
#include <boost/multiprecision/gmp.hpp>

namespace indexfiber {

using Rational = boost::multiprecision::number<boost::multiprecision::gmp_rational, boost::multiprecision::et_off>;
using Complex = std::complex<double>;

// Exact element of Q(i). Used for the identity checks and for exact spectra,
// where subset sums and pair equality must be decided without tolerance.
class GaussianRational {
 public:
  GaussianRational() = default;
  GaussianRational(int value) : re_(value) {}  // NOLINT: implicit like int -> double
  GaussianRational(long long value) : re_(value) {}  // NOLINT
  GaussianRational(Rational re) : re_(std::move(re)) {}  // NOLINT
  GaussianRational(Rational re, Rational im) : re_(std::move(re)), im_(std::move(im)) {}

  // Accepts "p", "p/q" or "-p/q". Throws std::invalid_argument otherwise.
  static Rational parse_rational(std::string_view text);

  const Rational& real() const { return re_; }
  const Rational& imag() const { return im_; }

  bool is_zero() const { return re_ == 0 && im_ == 0; }
  GaussianRational conj() const { return {re_, -im_}; }
  Rational norm() const { return re_ * re_ + im_ * im_; }
  Complex to_complex() const {
    return {static_cast<double>(re_), static_cast<double>(im_)};
  }
  std::string to_string() const;

  GaussianRational& operator+=(const GaussianRational& o) {
    re_ += o.re_;
    im_ += o.im_;
    return *this;
  }
  GaussianRational& operator-=(const GaussianRational& o) {
    re_ -= o.re_;
    im_ -= o.im_;
    return *this;
  }
  GaussianRational& operator*=(const GaussianRational& o) {
    if (o.im_ == 0) {
      re_ *= o.re_;
      im_ *= o.re_;
      return *this;
    }
    Rational re = re_ * o.re_ - im_ * o.im_;
    im_ = re_ * o.im_ + im_ * o.re_;
    re_ = std::move(re);
    return *this;
  }
  // Division by zero throws std::domain_error.
  GaussianRational& operator/=(const GaussianRational& o);

  friend GaussianRational operator+(GaussianRational a, const GaussianRational& b) { return a += b; }
  friend GaussianRational operator-(GaussianRational a, const GaussianRational& b) { return a -= b; }
  friend GaussianRational operator*(GaussianRational a, const GaussianRational& b) { return a *= b; }
  friend GaussianRational operator/(GaussianRational a, const GaussianRational& b) { return a /= b; }
  friend GaussianRational operator-(const GaussianRational& a) { return {-a.re_, -a.im_}; }
  friend GaussianRational operator+(const GaussianRational& a) { return a; }

  friend bool operator==(const GaussianRational& a, const GaussianRational& b) {
    return a.re_ == b.re_ && a.im_ == b.im_;
  }
  friend bool operator!=(const GaussianRational& a, const GaussianRational& b) { return !(a == b); }

  friend std::ostream& operator<<(std::ostream& os, const GaussianRational& z);

 private:
  Rational re_{0};
  Rational im_{0};
};

// Scalar-generic helpers shared by the templated modules.
inline Complex to_complex(const Complex& z) { return z; }
inline Complex to_complex(const GaussianRational& z) { return z.to_complex(); }
inline Complex to_complex(const Rational& q) { return {static_cast<double>(q), 0.0}; }

inline bool is_exact_zero(const Complex& z) { return z == Complex(0.0, 0.0); }
inline bool is_exact_zero(const GaussianRational& z) { return z.is_zero(); }
inline bool is_exact_zero(const Rational& q) { return q == 0; }

template <typename Scalar>
Scalar ipow(const Scalar& base, int exponent) {
  Scalar result(1);
  Scalar b = base;
  while (exponent > 0) {
    if (exponent & 1) result *= b;
    exponent >>= 1;
    if (exponent > 0) b *= b;
  }
  return result;
}

}  // namespace indexfiber

namespace Eigen {

template <>
struct NumTraits<indexfiber::GaussianRational> : GenericNumTraits<indexfiber::GaussianRational> {
  using Real = indexfiber::GaussianRational;
  using NonInteger = indexfiber::GaussianRational;
  using Nested = indexfiber::GaussianRational;
  using Literal = indexfiber::GaussianRational;
  enum {
    IsComplex = 0,
    IsInteger = 0,
    IsSigned = 1,
    RequireInitialization = 1,
    ReadCost = 8,
    AddCost = 16,
    MulCost = 64
  };
  static inline int digits10() { return 0; }
  static inline Real dummy_precision() { return Real(0); }
  static inline Real epsilon() { return Real(0); }
};

}  // namespace Eigen
