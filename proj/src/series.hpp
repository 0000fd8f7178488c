#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "gq.hpp"

namespace crdeg {

struct Block {
  std::string name;
  int arity = 0;
  friend bool operator==(const Block&, const Block&) = default;
};

// Ordered named variable blocks; a series lives in exactly one of these.
class Vars {
 public:
  explicit Vars(std::vector<Block> blocks);

  int size() const { return size_; }
  const std::vector<Block>& blocks() const { return blocks_; }
  bool has(const std::string& block) const;
  int offset(const std::string& block) const;
  int arity(const std::string& block) const;
  int var(const std::string& block, int i = 0) const;
  const std::string& name(int v) const { return names_[v]; }

  friend bool operator==(const Vars& a, const Vars& b) { return a.blocks_ == b.blocks_; }

 private:
  std::vector<Block> blocks_;
  std::vector<std::string> names_;
  int size_ = 0;
};

using VarsPtr = std::shared_ptr<const Vars>;

VarsPtr make_vars(std::vector<Block> blocks);
bool same_vars(const VarsPtr& a, const VarsPtr& b);
// first nvars variables; must end on a block boundary
VarsPtr vars_prefix(const VarsPtr& v, int nvars);

// Exponent vector with cached total degree in slot 0.
class Mono {
 public:
  Mono() = default;
  explicit Mono(int nvars) : e_(static_cast<size_t>(nvars) + 1, 0) {}

  int nvars() const { return static_cast<int>(e_.size()) - 1; }
  int deg() const { return e_.empty() ? 0 : e_[0]; }
  int operator[](int i) const { return e_[i + 1]; }
  void set(int i, int v);
  void add(int i, int v) { set(i, (*this)[i] + v); }

  friend Mono operator*(const Mono& a, const Mono& b);
  friend bool operator==(const Mono& a, const Mono& b) { return a.e_ == b.e_; }

  std::string_view bytes() const {
    return {reinterpret_cast<const char*>(e_.data()), e_.size()};
  }

 private:
  friend struct MonoLess;
  std::vector<uint8_t> e_;
};

// graded lexicographic: lower degree first, then the larger exponent on the
// earlier variable first
struct MonoLess {
  bool operator()(const Mono& a, const Mono& b) const {
    if (a.e_[0] != b.e_[0]) return a.e_[0] < b.e_[0];
    return b.e_ < a.e_;
  }
};

struct MonoHash {
  size_t operator()(const Mono& m) const { return std::hash<std::string_view>()(m.bytes()); }
};

using Accum = std::unordered_map<Mono, GQ, MonoHash>;

// Sparse power series truncated at total degree `order`.  exact() means no
// information was lost: the stored terms are the whole series.
class Series {
 public:
  using Terms = std::map<Mono, GQ, MonoLess>;

  Series() = default;
  Series(VarsPtr vars, int order, bool exact = true);

  static Series constant(VarsPtr vars, int order, const GQ& c);
  static Series variable(VarsPtr vars, int order, int v, const GQ& c = GQ(1));
  static Series monomial(VarsPtr vars, int order, const Mono& m, const GQ& c);
  static Series from_accum(VarsPtr vars, int order, bool exact, Accum&& acc);

  const VarsPtr& vars() const { return vars_; }
  int nvars() const { return vars_->size(); }
  int order() const { return order_; }
  bool exact() const { return exact_; }
  void set_exact(bool e) { exact_ = e; }
  const Terms& terms() const { return terms_; }

  bool is_zero() const { return terms_.empty(); }
  size_t size() const { return terms_.size(); }
  GQ coeff(const Mono& m) const;
  GQ constant_term() const;
  // lowest degree carrying a nonzero term; order+1 for the zero series
  int valuation() const;
  int max_degree() const;

  // accumulate; terms above the order are dropped and clear exact()
  void add_term(const Mono& m, const GQ& c);

  Series truncated(int t) const;
  // lower (truncate) or raise the order; raising needs an exact series
  Series at(int t) const;
  Series scaled(const GQ& c) const;
  Series conj() const;
  Series operator-() const { return scaled(GQ(-1)); }

  Series& operator+=(const Series& o);
  Series& operator-=(const Series& o);

  friend bool operator==(const Series& a, const Series& b);

  std::string str() const;

 private:
  VarsPtr vars_;
  int order_ = 0;
  bool exact_ = true;
  Terms terms_;
};

Series operator+(const Series& a, const Series& b);
Series operator-(const Series& a, const Series& b);
Series operator*(const Series& a, const Series& b);

// min of the two orders, then the operation
Series add_lo(const Series& a, const Series& b);
Series sub_lo(const Series& a, const Series& b);
Series mul_lo(const Series& a, const Series& b);

Series differentiate(const Series& a, int v);
Series differentiate(const Series& a, const std::vector<int>& alpha);

// images[i] replaces variable i of a; all images live in target
Series compose(const Series& a, const std::vector<Series>& images, const VarsPtr& target);
// same-context substitution of some variables
Series substitute(const Series& a, const std::map<int, Series>& assignment);
// move variable i to where[i] of target (-1 sets it to zero)
Series remap(const Series& a, const VarsPtr& target, const std::vector<int>& where, int order = -1);

struct EvalResult {
  GQ value;
  bool exact = true;
};
EvalResult evaluate(const Series& a, const std::vector<GQ>& point);

// Phi in (P..., X_1..X_m); X are the trailing m variables.  Returns Psi(P)
// with Phi(P, Psi(P)) = 0 to the working order.
std::vector<Series> implicit_solve(const std::vector<Series>& Phi, int m);
// as above; when Phi is polynomial and the truncated solution satisfies it
// exactly, the solution is returned flagged exact
std::vector<Series> implicit_solve_exact(const std::vector<Series>& Phi, int m);

Series reciprocal(const Series& a);

int min_order(const std::vector<Series>& v);

}  // namespace crdeg
