#pragma once

// Coefficient rings for forms and chains.
//
// Three scalar types are used:
//   Complex  - floating point, physical coordinates x in [0,1)^n;
//   GaussInt - exact Z[i] with overflow checks (fast exhaustive algebra suites);
//   GaussQ   - exact Q[i] on top of GMP (kernel solving, DSL rationals).
//
// The exact types work in angular coordinates y = 2*pi*x, where
// d(e^{i<m,y>}) = i*m_k e^{i<m,y>} dy^k has integer coefficients. The map
// e^{i<m,y>} dy^I -> (2*pi)^{|I|} e^{2*pi*i<m,x>} dx^I is a DGA isomorphism,
// so every algebraic identity checked exactly transfers verbatim.

#include <complex>
#include <cstdint>
#include <numbers>
#include <stdexcept>
#include <string>

#include <gmpxx.h>

namespace loopchern {

using Complex = std::complex<double>;

class OverflowError : public std::overflow_error {
 public:
  using std::overflow_error::overflow_error;
};

class GaussInt {
 public:
  constexpr GaussInt() = default;
  constexpr GaussInt(std::int64_t re) : re_(re) {}  // NOLINT(google-explicit-constructor)
  constexpr GaussInt(std::int64_t re, std::int64_t im) : re_(re), im_(im) {}

  std::int64_t re() const { return re_; }
  std::int64_t im() const { return im_; }
  bool is_zero() const { return re_ == 0 && im_ == 0; }

  GaussInt operator-() const { return {neg(re_), neg(im_)}; }
  GaussInt& operator+=(const GaussInt& o) {
    re_ = add(re_, o.re_);
    im_ = add(im_, o.im_);
    return *this;
  }
  GaussInt& operator-=(const GaussInt& o) { return *this += -o; }
  GaussInt& operator*=(const GaussInt& o) {
    const auto r = add(mul(re_, o.re_), neg(mul(im_, o.im_)));
    const auto i = add(mul(re_, o.im_), mul(im_, o.re_));
    re_ = r;
    im_ = i;
    return *this;
  }
  friend GaussInt operator+(GaussInt a, const GaussInt& b) { return a += b; }
  friend GaussInt operator-(GaussInt a, const GaussInt& b) { return a -= b; }
  friend GaussInt operator*(GaussInt a, const GaussInt& b) { return a *= b; }
  friend bool operator==(const GaussInt&, const GaussInt&) = default;

  std::string str() const;

 private:
  static std::int64_t add(std::int64_t a, std::int64_t b) {
    std::int64_t r;
    if (__builtin_add_overflow(a, b, &r)) throw OverflowError("GaussInt addition overflow");
    return r;
  }
  static std::int64_t mul(std::int64_t a, std::int64_t b) {
    std::int64_t r;
    if (__builtin_mul_overflow(a, b, &r)) throw OverflowError("GaussInt multiplication overflow");
    return r;
  }
  static std::int64_t neg(std::int64_t a) { return mul(a, -1); }

  std::int64_t re_ = 0;
  std::int64_t im_ = 0;
};

class GaussQ {
 public:
  GaussQ() = default;
  GaussQ(long re) : re_(re) {}  // NOLINT(google-explicit-constructor)
  GaussQ(mpq_class re, mpq_class im) : re_(std::move(re)), im_(std::move(im)) {
    re_.canonicalize();
    im_.canonicalize();
  }
  GaussQ(const GaussInt& z)  // NOLINT(google-explicit-constructor)
      : re_(static_cast<long>(z.re())), im_(static_cast<long>(z.im())) {}

  const mpq_class& re() const { return re_; }
  const mpq_class& im() const { return im_; }
  bool is_zero() const { return sgn(re_) == 0 && sgn(im_) == 0; }

  GaussQ operator-() const { return {-re_, -im_}; }
  GaussQ& operator+=(const GaussQ& o) {
    re_ += o.re_;
    im_ += o.im_;
    return *this;
  }
  GaussQ& operator-=(const GaussQ& o) {
    re_ -= o.re_;
    im_ -= o.im_;
    return *this;
  }
  GaussQ& operator*=(const GaussQ& o) {
    mpq_class r = re_ * o.re_ - im_ * o.im_;
    mpq_class i = re_ * o.im_ + im_ * o.re_;
    re_ = std::move(r);
    im_ = std::move(i);
    return *this;
  }
  GaussQ& operator/=(const GaussQ& o);
  GaussQ inverse() const;

  friend GaussQ operator+(GaussQ a, const GaussQ& b) { return a += b; }
  friend GaussQ operator-(GaussQ a, const GaussQ& b) { return a -= b; }
  friend GaussQ operator*(GaussQ a, const GaussQ& b) { return a *= b; }
  friend GaussQ operator/(GaussQ a, const GaussQ& b) { return a /= b; }
  friend bool operator==(const GaussQ& a, const GaussQ& b) { return a.re_ == b.re_ && a.im_ == b.im_; }

  /// Parses "p/q", "p" or a plain integer string; decimals are rejected.
  static mpq_class parse_rational(const std::string& text);

  Complex to_complex() const { return {re_.get_d(), im_.get_d()}; }
  std::string str() const;

 private:
  mpq_class re_{0};
  mpq_class im_{0};
};

template <class S>
struct ScalarTraits;

template <>
struct ScalarTraits<Complex> {
  static constexpr bool exact = false;
  static Complex zero() { return {0.0, 0.0}; }
  static bool is_zero(const Complex& z) { return z.real() == 0.0 && z.imag() == 0.0; }
  /// Coefficient of dx^k in d(e^{2 pi i <m,x>}).
  static Complex derivative_factor(int m) { return {0.0, 2.0 * std::numbers::pi * m}; }
  static Complex to_complex(const Complex& z) { return z; }
};

template <>
struct ScalarTraits<GaussInt> {
  static constexpr bool exact = true;
  static GaussInt zero() { return {}; }
  static bool is_zero(const GaussInt& z) { return z.is_zero(); }
  static GaussInt derivative_factor(int m) { return {0, m}; }
  static Complex to_complex(const GaussInt& z) {
    return {static_cast<double>(z.re()), static_cast<double>(z.im())};
  }
};

template <>
struct ScalarTraits<GaussQ> {
  static constexpr bool exact = true;
  static GaussQ zero() { return {}; }
  static bool is_zero(const GaussQ& z) { return z.is_zero(); }
  static GaussQ derivative_factor(int m) { return {mpq_class(0), mpq_class(m)}; }
  static Complex to_complex(const GaussQ& z) { return z.to_complex(); }
};

}  // namespace loopchern
