#pragma once

#include <optional>
#include <string>
#include <vector>

#include "jets.hpp"
#include "series.hpp"

namespace crdeg {

// contexts (z:n, w:d, chi:n, tau:d) and the parameter space (z, w, chi)
VarsPtr base_vars(int n, int d);

// A generic submanifold in normal coordinates: w = Q(z, chi, tau).
class Manifold {
 public:
  // Q lives in base_vars(n,d) and must not involve w
  static Manifold validate(int n, int d, std::vector<Series> Q, bool check_reality = true);

  int n() const { return n_; }
  int d() const { return d_; }
  int N() const { return n_ + d_; }
  int order() const { return order_; }
  bool polynomial() const { return polynomial_; }
  const VarsPtr& vars() const { return vars_; }
  const VarsPtr& param_vars() const { return pvars_; }
  const std::vector<Series>& Q() const { return Q_; }
  // tau = R(z, w, chi) on the complexification; equals Qbar(chi, z, w) for real M
  const std::vector<Series>& R() const { return R_; }
  bool R_exact() const { return R_exact_; }
  std::optional<bool> real() const { return real_; }

  int z(int i) const { return i; }
  int w(int j) const { return n_ + j; }
  int chi(int i) const { return n_ + d_ + i; }
  int tau(int j) const { return 2 * n_ + d_ + j; }

  Series var(int v, int order = -1) const { return Series::variable(vars_, order < 0 ? order_ : order, v); }
  // rho_j = w_j - Q_j
  Series rho(int j) const;
  // coefficient-conjugate of Q with (z,chi,tau) -> (chi,z,w): Qbar(chi,z,w) in the base context
  Series Qbar(int j) const;

  // phi(z, w, chi, R(z,w,chi)); zero iff phi in I to working order
  Series ideal_reduce(const Series& phi) const;
  bool ideal_member(const Series& phi) const { return ideal_reduce(phi).is_zero(); }

  // coefficient of d/dtau_j in L_k, in the parameter context
  const Series& cr_coeff(int k, int j) const { return Rchi_[k][j]; }
  Series cr_apply(int k, const Series& phi) const;
  Series cr_derivative(const Series& phi, const Multi& alpha) const;
  // restriction (z, w, 0, w)
  Series restrict_zw(const Series& phi) const;
  bool coefficient_extraction_check(const Series& phi, const Multi& alpha) const;

  // w = Q(z0, chi0, tau0) in the convention of this library
  bool on_manifold(const std::vector<GQ>& p) const;

  Manifold truncated(int t) const;

 private:
  Manifold() = default;
  void build_R();

  int n_ = 0, d_ = 0, order_ = 0;
  bool polynomial_ = false, R_exact_ = false;
  std::optional<bool> real_;
  VarsPtr vars_, pvars_;
  std::vector<Series> Q_, R_;
  std::vector<std::vector<Series>> Rchi_;
};

// Result of moving M to a point p: the new manifold together with the
// coordinate changes (in terms of the new coordinates) relating old and new.
struct Recentered {
  Manifold M;
  // old translated w as a function of new (z, w): w_old - w0 = W(z, w_new); base context
  std::vector<Series> W;
  // old translated tau as a function of new (chi, tau): tau_old - tau0 = T(chi, tau_new)
  std::vector<Series> T;
  // P(z,chi,tau) = Q(z0+z, chi0+chi, tau0+tau) - w0
  std::vector<Series> P;
};

// p = (z0, w0, chi0, tau0), must satisfy w0 = Q(z0, chi0, tau0)
Recentered recenter_normalize(const Manifold& M, const std::vector<GQ>& p);

}  // namespace crdeg
