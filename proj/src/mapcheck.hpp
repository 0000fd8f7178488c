#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "linalg.hpp"
#include "manifold.hpp"

namespace crdeg {

using ManifoldPtr = std::shared_ptr<const Manifold>;

// H = (f, g) : (C^N, 0) -> (C^N', 0).  Components live in the source base
// context and only involve (z, w).  The zeta side defaults to the
// coefficient conjugate of H with (z, w) -> (chi, tau); re-centered maps
// carry it explicitly.
class FormalMap {
 public:
  FormalMap(ManifoldPtr src, ManifoldPtr tgt, std::vector<Series> H,
            std::optional<std::vector<Series>> zeta = std::nullopt);

  const Manifold& source() const { return *src_; }
  const Manifold& target() const { return *tgt_; }
  const ManifoldPtr& source_ptr() const { return src_; }
  const ManifoldPtr& target_ptr() const { return tgt_; }
  const std::vector<Series>& H() const { return H_; }
  const std::vector<Series>& Hbar() const { return Hbar_; }
  bool explicit_zeta() const { return explicit_zeta_; }
  int order() const { return order_; }
  bool polynomial() const { return polynomial_; }
  int Nprime() const { return static_cast<int>(H_.size()); }

  // F(Z', zeta') in the target base context -> F(H(Z), Hbar(zeta)) in the source one
  Series pullback(const Series& F) const;
  // d^beta H_c (0), beta over (z, w)
  GQ jet(int c, const Multi& beta) const;
  // d^beta Hbar_c (0), beta over (chi, tau)
  GQ jet_bar(int c, const Multi& beta) const;

  FormalMap truncated(int t) const;

 private:
  ManifoldPtr src_, tgt_;
  std::vector<Series> H_, Hbar_;
  bool explicit_zeta_ = false;
  int order_ = 0;
  bool polynomial_ = true;
};

// rho'_j = w'_j - Q'_j
std::vector<Series> default_generators(const Manifold& tgt);

struct MapsIntoResult {
  bool ok = true;
  int order = 0;
  std::vector<Series> residuals;  // reduced, in (z, w, chi)
};
MapsIntoResult check_maps_into(const FormalMap& H, const std::vector<Series>* gens = nullptr);

struct Transversality {
  Mat gw;  // d' x d
  int rank = 0;
  bool transversal = false;
};
Transversality transversality_check(const FormalMap& H);

struct LeviData {
  std::vector<Mat> B;  // one n x n matrix per component of Q
  bool nondegenerate = false;
  bool epsilon_normalized = false;
  std::vector<int> eps;
};
LeviData levi_data(const Manifold& M);

struct LeviPullback {
  bool holds = false;
  Mat lhs, rhs;
  // immersivity verdict, present only when its hypotheses are machine checked
  std::optional<bool> immersive;
  int jacobian_rank = 0;
  std::string note;
};
LeviPullback levi_pullback_check(const FormalMap& H);

// N' x N matrix dH(0)
Mat jacobian_at_0(const FormalMap& H);

}  // namespace crdeg
