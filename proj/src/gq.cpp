#include "gq.hpp"

namespace crdeg {

static mpq_class parse_q(const std::string& s) {
  if (s.empty()) return 0;
  mpq_class q;
  if (q.set_str(s, 10) != 0) throw Error(Errc::invalid_input, "bad rational literal '" + s + "'");
  if (q.get_den() == 0) throw Error(Errc::invalid_input, "zero denominator in '" + s + "'");
  q.canonicalize();
  return q;
}

GQ GQ::parse(const std::string& re, const std::string& im) { return GQ(parse_q(re), parse_q(im)); }

GQ GQ::inv() const {
  mpq_class n = re_ * re_ + im_ * im_;
  if (sgn(n) == 0) throw Error(Errc::singular, "division by zero");
  return GQ(re_ / n, -im_ / n);
}

GQ& GQ::operator*=(const GQ& o) {
  if (sgn(im_) == 0 && sgn(o.im_) == 0) {
    re_ *= o.re_;
    return *this;
  }
  mpq_class r = re_ * o.re_ - im_ * o.im_;
  mpq_class i = re_ * o.im_ + im_ * o.re_;
  re_ = std::move(r);
  im_ = std::move(i);
  return *this;
}

std::string GQ::str() const {
  if (sgn(im_) == 0) return re_.get_str();
  std::string s;
  if (sgn(re_) != 0) s = re_.get_str() + (sgn(im_) > 0 ? "+" : "");
  if (im_ == 1)
    s += "i";
  else if (im_ == -1)
    s += "-i";
  else
    s += im_.get_str() + "i";
  return s;
}

GQ pow(const GQ& a, unsigned e) {
  GQ r(1), b = a;
  while (e) {
    if (e & 1) r *= b;
    e >>= 1;
    if (e) b *= b;
  }
  return r;
}

mpz_class factorial(unsigned n) {
  mpz_class r;
  mpz_fac_ui(r.get_mpz_t(), n);
  return r;
}

GQ random_small(std::mt19937_64& rng) {
  auto part = [&]() {
    long num = static_cast<long>(rng() % 7) - 3;
    long den = 1 + static_cast<long>(rng() % 3);
    mpq_class q(num, den);
    q.canonicalize();
    return q;
  };
  mpq_class re = part();
  return GQ(re, part());
}

}  // namespace crdeg
