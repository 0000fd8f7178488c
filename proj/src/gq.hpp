#pragma once

#include <gmpxx.h>

#include <random>
#include <stdexcept>
#include <string>

namespace crdeg {

enum class Errc {
  context_mismatch,
  order_mismatch,
  order_exhausted,
  precision,
  singular,
  hypothesis,
  invalid_input,
  internal,
};

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what) : std::runtime_error(what), code_(code) {}
  Errc code() const { return code_; }

 private:
  Errc code_;
};

// Gaussian rational re + i*im. mpq_class keeps both parts canonical.
class GQ {
 public:
  GQ() = default;
  GQ(long r) : re_(r) {}
  GQ(const mpq_class& r) : re_(r) {}
  GQ(const mpq_class& r, const mpq_class& i) : re_(r), im_(i) {}

  static GQ I() { return GQ(0, 1); }
  // "a/b" strings for both parts
  static GQ parse(const std::string& re, const std::string& im);

  const mpq_class& re() const { return re_; }
  const mpq_class& im() const { return im_; }

  bool is_zero() const { return sgn(re_) == 0 && sgn(im_) == 0; }
  bool is_real() const { return sgn(im_) == 0; }
  GQ conj() const { return GQ(re_, -im_); }
  GQ inv() const;

  GQ& operator+=(const GQ& o) {
    re_ += o.re_;
    im_ += o.im_;
    return *this;
  }
  GQ& operator-=(const GQ& o) {
    re_ -= o.re_;
    im_ -= o.im_;
    return *this;
  }
  GQ& operator*=(const GQ& o);
  GQ& operator/=(const GQ& o) { return *this *= o.inv(); }

  friend GQ operator+(GQ a, const GQ& b) { return a += b; }
  friend GQ operator-(GQ a, const GQ& b) { return a -= b; }
  friend GQ operator*(GQ a, const GQ& b) { return a *= b; }
  friend GQ operator/(GQ a, const GQ& b) { return a /= b; }
  GQ operator-() const { return GQ(-re_, -im_); }

  friend bool operator==(const GQ& a, const GQ& b) { return a.re_ == b.re_ && a.im_ == b.im_; }
  friend bool operator!=(const GQ& a, const GQ& b) { return !(a == b); }

  // total order, only for deterministic tie breaking
  friend bool operator<(const GQ& a, const GQ& b) {
    int c = cmp(a.re_, b.re_);
    return c != 0 ? c < 0 : a.im_ < b.im_;
  }

  std::string str() const;

 private:
  mpq_class re_, im_;
};

GQ pow(const GQ& a, unsigned e);
mpz_class factorial(unsigned n);
// small-height Gaussian rational, parts in {-3..3}/{1..3}
GQ random_small(std::mt19937_64& rng);

}  // namespace crdeg
