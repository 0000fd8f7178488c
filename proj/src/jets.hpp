#pragma once

#include <map>
#include <utility>
#include <vector>

#include "series.hpp"

namespace crdeg {

using Multi = std::vector<int>;

int multi_abs(const Multi& a);
// all multiindices of length nvars with |a| <= maxdeg, graded lexicographic
std::vector<Multi> multiindices(int nvars, int maxdeg);
std::string multi_str(const Multi& a);
Mono multi_mono(const Multi& a, int nvars, int offset = 0);

// A family of jet variables Y[beta][c] standing for (shifted) derivatives of
// some vector valued function.  raise[u] is the slot of beta bumped when the
// base variable u is differentiated, -1 when the family does not depend on u.
struct JetFamily {
  std::string name;
  int width = 0;
  std::vector<Multi> betas;
  std::vector<std::vector<GQ>> shift;
  std::vector<int> raise;
};

// Variable context: base block(s), then jet families, then `nx` unknowns X.
class JetSpace {
 public:
  JetSpace(VarsPtr base, std::vector<JetFamily> families, int nx);

  const VarsPtr& vars() const { return vars_; }
  const VarsPtr& prefix() const { return prefix_; }
  const VarsPtr& base() const { return base_; }
  int base_size() const { return base_->size(); }
  int nfamilies() const { return static_cast<int>(fams_.size()); }
  const JetFamily& family(int f) const { return fams_[f]; }

  bool has(int f, const Multi& beta) const;
  int var(int f, const Multi& beta, int c) const;
  int x(int c) const { return xoff_ + c; }
  int nx() const { return nx_; }

  // series of the base context placed into `ctx` (any context starting with the base)
  Series embed(const Series& s, const VarsPtr& ctx) const;
  Series embed(const Series& s) const { return embed(s, vars_); }

  // Total derivative sum_u a_u (d/du + jet prolongation in direction u).
  // coeffs pairs base variable u with a_u in the base context; nullptr = 1.
  Series total_derivative(const Series& phi, const std::vector<std::pair<int, const Series*>>& coeffs) const;

 private:
  VarsPtr base_, vars_, prefix_;
  std::vector<JetFamily> fams_;
  std::vector<int> foff_;
  std::vector<std::map<Multi, int>> index_;
  int xoff_ = 0, nx_ = 0;
};

}  // namespace crdeg
