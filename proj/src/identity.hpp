#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "degeneracy.hpp"
#include "json_io.hpp"
#include "segre.hpp"

namespace crdeg {

// Data specific to the N' = N + 1, 1-degenerate construction.
struct OneDegData {
  std::vector<int> pivots;  // z' columns
  int kstar = 0;
  GQ Delta0;                // barred, at 0
  std::vector<GQ> Deltam0;
  GQ D;                     // X-Jacobian determinant of the first N equations
  GQ gw;
  GQ cauchy_binet;          // det(f_z^T diag(eps') conj f_z)
  GQ levi_det;              // det of the source Levi matrix
  bool cb_matches_levi = false;   // cauchy_binet == gw^n det B
  bool D_is_pm_cb = false;        // D == +-cauchy_binet
  bool xlast_absent = false;      // X_{N'} not in Phi_1..Phi_n
  bool upsilon_xlast_zero = false;
  Series Upsilon;                 // the barred relation, in the jet context
};

// H(Z) = Psi(Z, zeta, jets) mod I.  Psi lives in the prefix of `js`
// (source base, then jet families).  Family 0 is Hb: d^beta Hbar(zeta) - d^beta Hbar(0)
// over (chi, tau); family 1 (1-degenerate only) is Hr: d^beta H(0, tau) - d^beta H(0).
class BasicIdentity {
 public:
  enum Kind { nondeg, one_deg };

  Kind kind() const { return kind_; }
  int k0() const { return k0_; }
  int kmax() const { return kmax_; }
  const JetSpace& space() const { return *js_; }
  const std::vector<Series>& Psi() const { return Psi_; }
  const std::vector<RowId>& choices() const { return choices_; }
  const GQ& det() const { return det_; }
  const std::optional<OneDegData>& one_deg_data() const { return one_; }
  const ManifoldPtr& source() const { return src_; }
  const ManifoldPtr& target() const { return tgt_; }

  // Psi_alpha = S^alpha Psi, alpha over (z, w)
  const std::vector<Series>& Psi_alpha(const Multi& alpha);
  // S_j rho_a reduced; all zero when the fields are tangent
  std::vector<Series> s_field_tangency();

  // d^alpha H - Psi_alpha(jets of H), reduced into (z, w, chi)
  std::vector<Series> residual(const FormalMap& H, const Multi& alpha);
  // series of jet-family variables evaluated on H, for compose into the base context
  std::vector<Series> jet_images(const FormalMap& H, int order) const;

  json certificate() const;

 private:
  friend BasicIdentity basic_identity(const FormalMap&, const DegeneracyReport&, int);
  friend BasicIdentity basic_identity_1deg(const FormalMap&, int);
  BasicIdentity() = default;
  void build_s_fields();

  Kind kind_ = nondeg;
  ManifoldPtr src_, tgt_;
  int k0_ = 0, kmax_ = 0;
  std::shared_ptr<JetSpace> js_;
  std::vector<Series> Psi_;
  std::vector<RowId> choices_;
  GQ det_;
  std::vector<std::pair<Multi, std::vector<GQ>>> jets_used_;  // zeta-side shifts, |beta| <= k0
  std::vector<std::pair<Multi, std::vector<GQ>>> jets_used_r_;
  std::optional<OneDegData> one_;
  std::vector<std::vector<Series>> s_coeff_;  // [j over Z][b over tau], base context
  std::map<Multi, std::vector<Series>> Psi_alpha_;
};

// extra: additional jet orders carried for derivative identities (kmax = k0 + extra)
BasicIdentity basic_identity(const FormalMap& H, const DegeneracyReport& rep, int extra = 0);
BasicIdentity basic_identity_1deg(const FormalMap& H, int extra = 0);

// Upsilon_{k,alpha} on the Segre context with k+1 blocks:
//   d^alpha H(v^{k+1}(z, xi)) = Upsilon_{k,alpha}(z, xi)
class UpsilonRecursion {
 public:
  explicit UpsilonRecursion(BasicIdentity& bi);
  const std::vector<Series>& get(int k, const Multi& alpha);
  VarsPtr level_vars(int k) const { return segre_vars(bi_.source()->n(), k + 1); }
  // kmax needed for get(k, alpha)
  static int kmax_needed(int k0, int k, int abs_alpha) { return (k + 1) * k0 + abs_alpha; }

 private:
  BasicIdentity& bi_;
  std::map<std::pair<int, Multi>, std::vector<Series>> memo_;
};

struct UpsilonCheck {
  int k = 0;
  Multi alpha;
  bool ok = false;
  int order = 0;
  std::vector<Series> difference;
};
UpsilonCheck upsilon_check(UpsilonRecursion& ur, const FormalMap& H, int k, const Multi& alpha);

struct JetDetermination {
  enum Mode { nondeg, one_deg } mode = nondeg;
  bool maps_into_1 = false, maps_into_2 = false;
  int threshold = 0;
  int k0 = 0, k1 = 0;
  bool jets_agree = false;
  // first disagreement
  std::optional<Multi> beta;
  int component = 0;
  GQ value1, value2;
  int first_order = 0;
  // when agreeing
  bool determined = false;
  int order = 0;
  // coefficients of H1 - H2 vanish through this order (-1: not compared)
  int equal_through = -1;
  std::string note;
};
JetDetermination jet_determination_check(const FormalMap& H1, const FormalMap& H2, JetDetermination::Mode mode,
                                         const FiniteTypeOptions& ft = {});

// first beta (graded-lex) and component where d^beta H1(0) != d^beta H2(0), |beta| <= t
std::optional<std::pair<Multi, int>> first_jet_difference(const FormalMap& H1, const FormalMap& H2, int t);

}  // namespace crdeg
