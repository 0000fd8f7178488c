#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "linalg.hpp"
#include "manifold.hpp"

namespace crdeg {

// Context of `blocks` n-blocks named z, chi1, z1, chi2, z2, ...
VarsPtr segre_vars(int n, int blocks);

// Segre maps with memoized w-parts.  Block a of the context feeds the first
// argument; v^k(a) uses blocks a .. a+k-1.
//   W_1 = 0,  W_{k+1}(a) = Q(blk a, blk a+1, Wbar_k(a+1))
//   Wbar_1 = 0, Wbar_{k+1}(a) = R(blk a+1, W_k(a+1), blk a)
class SegreBuilder {
 public:
  SegreBuilder(const Manifold& M, int blocks);
  const VarsPtr& vars() const { return vars_; }
  int blocks() const { return blocks_; }
  const std::vector<Series>& W(int k, int a);
  const std::vector<Series>& Wbar(int k, int a);
  // (blk a, W_k(a)) and (blk a, Wbar_k(a)), N series each
  std::vector<Series> v(int k, int a);
  std::vector<Series> vbar(int k, int a);

 private:
  const Manifold& M_;
  int blocks_;
  VarsPtr vars_;
  std::map<std::pair<int, int>, std::vector<Series>> W_, Wb_;
};

struct SegreMap {
  int level = 0;
  VarsPtr vars;                // level blocks
  std::vector<Series> v;       // v^k
  std::vector<Series> vbar;    // vbar^k on the same blocks
  int order = 0;
};
SegreMap segre_map(const Manifold& M, int k);

struct SegreVanishing {
  int level = 0;
  bool ok = true;
  int order = 0;
  std::vector<Series> residuals;  // Z-side then zeta-side
};
// rho(v^{k+1}, vbar^k) and, for k >= 1, rho(v^{k-1}(xi'), vbar^k)
SegreVanishing segre_vanishing(const Manifold& M, int k);

// symbolic Jacobian of v^k: N x kn
std::vector<std::vector<Series>> segre_jacobian(const SegreMap& s);

struct ZeroPoint {
  int level = 0;
  std::vector<GQ> point;
  Mat jacobian;
  int rank = 0;
};

struct FiniteType {
  enum Verdict { finite_type, not_finite_type, inconclusive } verdict = inconclusive;
  int k = 0;                        // first level with rank N
  std::vector<int> columns;         // minor columns
  Series minor;                     // the nonzero minor, symbolic
  std::optional<std::vector<GQ>> point;  // exact point where it is nonzero
  GQ value;
  std::optional<Mono> coefficient;  // truncated inputs: a nonzero coefficient
  std::vector<int> levels_zero;     // levels where all minors vanished identically
  int order = 0;
  std::string note;
  std::optional<ZeroPoint> zero_point;
};

struct FiniteTypeOptions {
  int levels = 4;
  int trials = 64;
  uint64_t seed = 0;
  bool zero_point = true;
};
FiniteType finite_type_test(const Manifold& M, const FiniteTypeOptions& opt);

// point with v^level(p) = 0, p != 0, and rank dv^level(p) = N
std::optional<ZeroPoint> zero_point_search(const Manifold& M, int level, int trials, uint64_t seed);
// the same data at a given point; nullopt when v^level(p) != 0
std::optional<ZeroPoint> zero_point_at(const Manifold& M, int level, const std::vector<GQ>& p);

}  // namespace crdeg
