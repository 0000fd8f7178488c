#include "manifold.hpp"

#include <algorithm>

namespace crdeg {

VarsPtr base_vars(int n, int d) { return make_vars({{"z", n}, {"w", d}, {"chi", n}, {"tau", d}}); }

Manifold Manifold::validate(int n, int d, std::vector<Series> Q, bool check_reality) {
  if (n < 0 || d < 1) throw Error(Errc::invalid_input, "manifold needs n >= 0 and d >= 1");
  if (static_cast<int>(Q.size()) != d)
    throw Error(Errc::invalid_input, "expected " + std::to_string(d) + " components of Q, got " + std::to_string(Q.size()));
  Manifold M;
  M.n_ = n;
  M.d_ = d;
  M.vars_ = base_vars(n, d);
  M.pvars_ = vars_prefix(M.vars_, 2 * n + d);
  M.order_ = Q[0].order();
  M.polynomial_ = true;
  for (int j = 0; j < d; ++j) {
    if (!same_vars(Q[j].vars(), M.vars_))
      throw Error(Errc::context_mismatch, "Q" + std::to_string(j + 1) + " is not in the (z,w,chi,tau) context");
    M.order_ = std::min(M.order_, Q[j].order());
    M.polynomial_ = M.polynomial_ && Q[j].exact();
  }
  if (M.order_ < 1) throw Error(Errc::order_exhausted, "truncation order must be at least 1 to state normality");
  for (auto& q : Q) q = q.at(M.order_);

  for (int j = 0; j < d; ++j) {
    const std::string gen = "Q" + std::to_string(j + 1);
    bool has_tau = false;
    for (const auto& [m, c] : Q[j].terms()) {
      int zdeg = 0, cdeg = 0;
      for (int i = 0; i < n; ++i) {
        zdeg += m[M.z(i)];
        cdeg += m[M.chi(i)];
      }
      for (int k = 0; k < d; ++k)
        if (m[M.w(k)]) throw Error(Errc::invalid_input, gen + " depends on w");
      if (zdeg > 0 && cdeg > 0) continue;
      bool is_tau_j = m.deg() == 1 && m[M.tau(j)] == 1;
      if (is_tau_j && c == GQ(1)) {
        has_tau = true;
        continue;
      }
      Series bad = Series::monomial(M.vars_, M.order_, m, c);
      throw Error(Errc::invalid_input, "normality violated in " + gen + ": term " + bad.str() +
                                           (zdeg == 0 ? " survives at z = 0" : " survives at chi = 0"));
    }
    if (!has_tau) throw Error(Errc::invalid_input, "normality violated in " + gen + ": coefficient of tau" +
                                                       std::to_string(j + 1) + " must be 1");
  }
  M.Q_ = std::move(Q);
  M.build_R();
  if (check_reality) {
    bool real = true;
    for (int j = 0; j < d && real; ++j) real = M.ideal_reduce(M.var(M.tau(j)) - M.Qbar(j)).is_zero();
    M.real_ = real;
  }
  return M;
}

void Manifold::build_R() {
  std::vector<Series> Phi;
  for (int j = 0; j < d_; ++j) Phi.push_back(rho(j));
  R_ = implicit_solve_exact(Phi, d_);
  R_exact_ = true;
  for (const auto& r : R_) R_exact_ = R_exact_ && r.exact();
  Rchi_.assign(n_, {});
  for (int k = 0; k < n_; ++k)
    for (int j = 0; j < d_; ++j) Rchi_[k].push_back(differentiate(R_[j], chi(k)));
}

Series Manifold::rho(int j) const { return var(w(j)) - Q_[j]; }

Series Manifold::Qbar(int j) const {
  std::vector<int> where(vars_->size(), -1);
  for (int i = 0; i < n_; ++i) {
    where[z(i)] = chi(i);
    where[chi(i)] = z(i);
  }
  for (int k = 0; k < d_; ++k) where[tau(k)] = w(k);
  return remap(Q_[j].conj(), vars_, where);
}

Series Manifold::ideal_reduce(const Series& phi) const {
  if (!same_vars(phi.vars(), vars_)) throw Error(Errc::context_mismatch, "ideal_reduce: series not in (z,w,chi,tau)");
  std::vector<Series> img;
  const int t = phi.order();
  for (int v = 0; v < 2 * n_ + d_; ++v) img.push_back(Series::variable(pvars_, t, v));
  for (int j = 0; j < d_; ++j) img.push_back(R_[j]);
  return compose(phi, img, pvars_);
}

Series Manifold::cr_apply(int k, const Series& phi) const {
  if (!same_vars(phi.vars(), vars_)) throw Error(Errc::context_mismatch, "CR field applied outside (z,w,chi,tau)");
  Series out = differentiate(phi, chi(k));
  std::vector<int> where;
  for (int v = 0; v < 2 * n_ + d_; ++v) where.push_back(v);
  for (int j = 0; j < d_; ++j) {
    Series dt = differentiate(phi, tau(j));
    if (dt.is_zero() && dt.exact()) continue;
    out = add_lo(out, mul_lo(remap(Rchi_[k][j], vars_, where), dt));
  }
  return out;
}

Series Manifold::cr_derivative(const Series& phi, const Multi& alpha) const {
  if (static_cast<int>(alpha.size()) != n_) throw Error(Errc::invalid_input, "multiindex length must be n");
  if (multi_abs(alpha) > phi.order())
    throw Error(Errc::order_exhausted, "CR derivative of length " + std::to_string(multi_abs(alpha)) +
                                           " exceeds order " + std::to_string(phi.order()));
  Series r = phi;
  for (int k = n_ - 1; k >= 0; --k)
    for (int e = 0; e < alpha[k]; ++e) r = cr_apply(k, r);
  return r;
}

Series Manifold::restrict_zw(const Series& phi) const {
  const int t = phi.order();
  std::vector<Series> img;
  for (int i = 0; i < n_; ++i) img.push_back(Series::variable(vars_, t, z(i)));
  for (int k = 0; k < d_; ++k) img.push_back(Series::variable(vars_, t, w(k)));
  for (int i = 0; i < n_; ++i) img.push_back(Series(vars_, t));
  for (int k = 0; k < d_; ++k) img.push_back(Series::variable(vars_, t, w(k)));
  return compose(phi, img, vars_);
}

bool Manifold::coefficient_extraction_check(const Series& phi, const Multi& alpha) const {
  VarsPtr zw = vars_prefix(vars_, n_ + d_);
  Series red = ideal_reduce(phi);
  Series lhs(zw, std::max(0, red.order() - multi_abs(alpha)), red.exact());
  mpz_class fact = 1;
  for (int a : alpha) fact *= factorial(a);
  for (const auto& [m, c] : red.terms()) {
    bool match = true;
    for (int i = 0; i < n_; ++i) match = match && m[chi(i)] == alpha[i];
    if (!match) continue;
    Mono mm(n_ + d_);
    for (int v = 0; v < n_ + d_; ++v)
      if (m[v]) mm.set(v, m[v]);
    lhs.add_term(mm, c * GQ(mpq_class(fact)));
  }
  Series rhs_full = restrict_zw(cr_derivative(phi, alpha));
  std::vector<int> where(vars_->size(), -1);
  for (int v = 0; v < n_ + d_; ++v) where[v] = v;
  Series rhs = remap(rhs_full, zw, where);
  int t = std::min(lhs.order(), rhs.order());
  return (lhs.truncated(t) - rhs.truncated(t)).is_zero();
}

bool Manifold::on_manifold(const std::vector<GQ>& p) const {
  if (static_cast<int>(p.size()) != 2 * N()) throw Error(Errc::invalid_input, "point must have 2N coordinates");
  if (!polynomial_) throw Error(Errc::precision, "point membership needs a polynomial manifold");
  for (int j = 0; j < d_; ++j)
    if (evaluate(Q_[j], p).value != p[w(j)]) return false;
  return true;
}

Manifold Manifold::truncated(int t) const {
  std::vector<Series> q;
  for (const auto& s : Q_) q.push_back(s.at(t));
  return validate(n_, d_, std::move(q), real_.has_value());
}

Recentered recenter_normalize(const Manifold& M, const std::vector<GQ>& p) {
  if (!M.polynomial()) throw Error(Errc::precision, "re-centering needs a polynomial manifold");
  if (!M.on_manifold(p)) throw Error(Errc::invalid_input, "point is not on the complexified manifold");
  const int n = M.n(), d = M.d(), t = M.order();
  const VarsPtr& B = M.vars();
  const VarsPtr& PB = M.param_vars();

  std::vector<Series> shift;
  for (int v = 0; v < B->size(); ++v) {
    Series s = Series::variable(B, t, v);
    if (v >= M.w(0) && v < M.w(0) + d) shift.push_back(s);  // w unused in Q
    else shift.push_back(s + Series::constant(B, t, p[v]));
  }
  Recentered out{M, {}, {}, {}};
  for (int j = 0; j < d; ++j) out.P.push_back(compose(M.Q()[j], shift, B) - Series::constant(B, t, p[M.w(j)]));

  auto sub = [&](const Series& s, std::vector<Series> img, const VarsPtr& ctx) { return compose(s, img, ctx); };
  auto zero = [&](const VarsPtr& ctx) { return Series(ctx, t); };
  auto var = [&](const VarsPtr& ctx, int v) { return Series::variable(ctx, t, v); };

  // T: P(0, chi, X) = P(0, 0, tauh); w slot carries tauh, tau slot the unknown
  std::vector<Series> PhiT;
  for (int j = 0; j < d; ++j) {
    std::vector<Series> a, b;
    for (int i = 0; i < n; ++i) a.push_back(zero(B)), b.push_back(zero(B));
    for (int k = 0; k < d; ++k) a.push_back(zero(B)), b.push_back(zero(B));
    for (int i = 0; i < n; ++i) a.push_back(var(B, M.chi(i))), b.push_back(zero(B));
    for (int k = 0; k < d; ++k) a.push_back(var(B, M.tau(k))), b.push_back(var(B, M.w(k)));
    PhiT.push_back(sub(out.P[j], a, B) - sub(out.P[j], b, B));
  }
  std::vector<Series> Tp;
  try {
    Tp = implicit_solve_exact(PhiT, d);
  } catch (const Error& e) {
    if (e.code() == Errc::singular) throw Error(Errc::hypothesis, "re-centering needs Q_tau invertible at the point");
    throw;
  }
  std::vector<int> whereT(PB->size(), -1);
  for (int k = 0; k < d; ++k) whereT[M.w(k)] = M.tau(k);
  for (int i = 0; i < n; ++i) whereT[M.chi(i)] = M.chi(i);
  for (const auto& s : Tp) out.T.push_back(remap(s, B, whereT));

  // W(z, w) = P(z, 0, w)
  for (int j = 0; j < d; ++j) {
    std::vector<Series> a;
    for (int i = 0; i < n; ++i) a.push_back(var(B, M.z(i)));
    for (int k = 0; k < d; ++k) a.push_back(zero(B));
    for (int i = 0; i < n; ++i) a.push_back(zero(B));
    for (int k = 0; k < d; ++k) a.push_back(var(B, M.w(k)));
    out.W.push_back(sub(out.P[j], a, B));
  }

  // Qhat: P(z, 0, X) = P(z, chi, T(chi, tau))
  std::vector<Block> bl = B->blocks();
  bl.push_back({"X", d});
  VarsPtr BX = make_vars(bl);
  const int xo = B->size();
  std::vector<int> id(B->size());
  for (int v = 0; v < B->size(); ++v) id[v] = v;
  std::vector<Series> PhiQ;
  for (int j = 0; j < d; ++j) {
    std::vector<Series> a, b;
    for (int i = 0; i < n; ++i) a.push_back(var(BX, M.z(i))), b.push_back(var(BX, M.z(i)));
    for (int k = 0; k < d; ++k) a.push_back(zero(BX)), b.push_back(zero(BX));
    for (int i = 0; i < n; ++i) a.push_back(zero(BX)), b.push_back(var(BX, M.chi(i)));
    for (int k = 0; k < d; ++k) a.push_back(var(BX, xo + k)), b.push_back(remap(out.T[k], BX, id));
    PhiQ.push_back(sub(out.P[j], a, BX) - sub(out.P[j], b, BX));
  }
  std::vector<Series> Qh;
  try {
    Qh = implicit_solve_exact(PhiQ, d);
  } catch (const Error& e) {
    if (e.code() == Errc::singular) throw Error(Errc::hypothesis, "re-centering needs Q_tau invertible at the point");
    throw;
  }
  out.M = Manifold::validate(n, d, Qh, true);

  // translated generators must lie in the new ideal
  for (int j = 0; j < d; ++j) {
    std::vector<Series> b;
    for (int i = 0; i < n; ++i) b.push_back(var(B, M.z(i)));
    for (int k = 0; k < d; ++k) b.push_back(zero(B));
    for (int i = 0; i < n; ++i) b.push_back(var(B, M.chi(i)));
    for (int k = 0; k < d; ++k) b.push_back(out.T[k]);
    Series g = sub_lo(out.W[j], sub(out.P[j], b, B));
    if (!out.M.ideal_reduce(g).is_zero()) throw Error(Errc::internal, "re-centered generators do not reduce to zero");
  }
  return out;
}

}  // namespace crdeg
