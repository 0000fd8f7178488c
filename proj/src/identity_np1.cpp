#include "identity.hpp"

#include <algorithm>

namespace crdeg {

namespace {

JetFamily family(const FormalMap& H, int K, bool zeta_side) {
  const Manifold& M = H.source();
  JetFamily f;
  f.name = zeta_side ? "Hb" : "Hr";
  f.width = H.Nprime();
  f.betas = multiindices(M.N(), K);
  for (const auto& b : f.betas) {
    std::vector<GQ> c;
    for (int j = 0; j < f.width; ++j) c.push_back(zeta_side ? H.jet_bar(j, b) : H.jet(j, b));
    f.shift.push_back(std::move(c));
  }
  f.raise.assign(M.vars()->size(), -1);
  if (zeta_side)
    for (int i = 0; i < M.n(); ++i) f.raise[M.chi(i)] = i;
  for (int j = 0; j < M.d(); ++j) f.raise[M.tau(j)] = M.n() + j;
  return f;
}

}  // namespace

BasicIdentity basic_identity_1deg(const FormalMap& H, int extra) {
  const Manifold& M = H.source();
  const Manifold& T = H.target();
  if (M.d() != 1 || T.d() != 1) throw Error(Errc::hypothesis, "1-degenerate identity needs hypersurfaces (d = d' = 1)");
  if (T.N() != M.N() + 1) throw Error(Errc::hypothesis, "1-degenerate identity needs N' = N + 1");
  LeviData LM = levi_data(M), LT = levi_data(T);
  if (!LM.nondegenerate || !LT.nondegenerate) throw Error(Errc::hypothesis, "both Levi forms must be nondegenerate");
  if (!LM.epsilon_normalized || !LT.epsilon_normalized)
    throw Error(Errc::hypothesis,
                "Levi forms must be epsilon-normalized (Q_{z_j chi_k}(0) = diag(+-1)); supply normalized coordinates");
  Transversality tr = transversality_check(H);
  if (!tr.transversal) throw Error(Errc::hypothesis, "map is not transversal");
  {
    int km = std::min(default_kmax(H), max_kmax(H));
    DegeneracyRows rows = degeneracy_rows(H, km);
    DegeneracyReport rep = degeneracy_at_origin(rows);
    if (rep.s != 1) throw Error(Errc::hypothesis, "map is not 1-degenerate (s = " + std::to_string(rep.s) + ")");
    if (constant_rank_probe(H, rows, rep).verdict != Constancy::constant)
      throw Error(Errc::hypothesis, "map is not constantly 1-degenerate");
  }
  if (std::min({H.order(), M.order(), T.order()}) < 3)
    throw Error(Errc::order_exhausted, "1-degenerate identity needs working order >= 3");

  const int n = M.n(), N = M.N(), np = T.n(), Np = T.N();
  BasicIdentity bi;
  bi.kind_ = BasicIdentity::one_deg;
  bi.src_ = H.source_ptr();
  bi.tgt_ = H.target_ptr();
  bi.k0_ = 1;
  bi.kmax_ = 1 + std::max(0, extra);
  bi.js_ = std::make_shared<JetSpace>(M.vars(), std::vector<JetFamily>{family(H, bi.kmax_, true), family(H, bi.kmax_, false)},
                                      Np);
  const JetSpace& js = *bi.js_;
  const VarsPtr& ctx = js.vars();
  const int t = T.order();
  const Multi b0(N, 0);

  std::vector<std::vector<Series>> crb(n);
  {
    std::vector<int> where(M.param_vars()->size());
    for (size_t v = 0; v < where.size(); ++v) where[v] = static_cast<int>(v);
    for (int k = 0; k < n; ++k) crb[k].push_back(remap(M.cr_coeff(k, 0), M.vars(), where));
  }
  auto L = [&](int k, const Series& s) {
    return js.total_derivative(s, {{M.chi(k), nullptr}, {M.tau(0), &crb[k][0]}});
  };

  // target functions F(z', w', chi', tau') at (X, Hb_0)
  std::vector<Series> img;
  for (int c = 0; c < Np; ++c) img.push_back(Series::variable(ctx, t, js.x(c)));
  for (int c = 0; c < Np; ++c) img.push_back(Series::variable(ctx, t, js.var(0, b0, c)));
  Series Qp = compose(T.Q()[0], img, ctx);

  std::vector<Series> Phi;
  for (int k = 0; k < n; ++k) Phi.push_back(L(k, Qp));

  std::vector<Series> phi;
  for (int j = 0; j < np; ++j) phi.push_back(compose(differentiate(T.Q()[0], j), img, ctx));
  std::vector<std::vector<Series>> rows(n);
  Mat rows0(n);
  for (int k = 0; k < n; ++k)
    for (int j = 0; j < np; ++j) {
      rows[k].push_back(L(k, phi[j]));
      rows0[k].push_back(rows[k].back().constant_term());
    }
  OneDegData od;
  od.pivots = first_nonsingular_columns(rows0);
  if (static_cast<int>(od.pivots.size()) != n) throw Error(Errc::hypothesis, "Delta(0) = 0: L_k Q'_{z'} rows are not of rank n");
  for (int j = 0; j < np; ++j)
    if (std::find(od.pivots.begin(), od.pivots.end(), j) == od.pivots.end()) od.kstar = j;

  // restriction chi -> 0, tau -> w
  auto restrict = [&](const Series& s) {
    std::vector<Series> im;
    for (int v = 0; v < ctx->size(); ++v) im.push_back(Series::variable(ctx, s.order(), v));
    for (int i = 0; i < n; ++i) im[M.chi(i)] = Series(ctx, s.order());
    im[M.tau(0)] = Series::variable(ctx, s.order(), M.w(0));
    return compose(s, im, ctx);
  };
  // conjugation of functions of (Z, zeta): coefficients conjugated, Z <-> zeta, X <-> Hb_0
  std::vector<int> swap_full(ctx->size(), -1), swap_restricted(ctx->size(), -1);
  for (int v = 0; v < N; ++v) {
    swap_full[v] = N + v, swap_full[N + v] = v;
    swap_restricted[v] = N + v, swap_restricted[N + v] = v;
  }
  for (int c = 0; c < Np; ++c) {
    swap_full[js.x(c)] = js.var(0, b0, c);
    swap_full[js.var(0, b0, c)] = js.x(c);
    swap_restricted[js.x(c)] = js.var(0, b0, c);
  }
  // on the restriction Hb_beta stands for d^beta Hbar(0, w): its conjugate is Hr_beta
  for (const auto& b : js.family(0).betas)
    for (int c = 0; c < Np; ++c) swap_restricted[js.var(0, b, c)] = js.var(1, b, c);
  auto bar = [&](const Series& s, const std::vector<int>& where) {
    for (const auto& [m, c] : s.terms())
      for (int v = 0; v < m.nvars(); ++v)
        if (m[v] && where[v] < 0) throw Error(Errc::internal, "conjugation: unexpected variable " + ctx->name(v));
    return remap(s.conj(), ctx, where);
  };

  auto minor_with = [&](int replace_m) {
    std::vector<std::vector<Series>> m;
    for (int k = 0; k < n; ++k) {
      std::vector<Series> r;
      for (int i = 0; i < n; ++i) r.push_back(restrict(rows[k][i == replace_m ? od.kstar : od.pivots[i]]));
      m.push_back(std::move(r));
    }
    return bar(det(m), swap_restricted);
  };
  Series Dbar = minor_with(-1);
  std::vector<Series> Dbar_m;
  for (int m = 0; m < n; ++m) Dbar_m.push_back(minor_with(m));
  od.Delta0 = Dbar.constant_term();
  for (const auto& s : Dbar_m) od.Deltam0.push_back(s.constant_term());

  std::vector<Series> psi;
  for (int j = 0; j < np; ++j) psi.push_back(bar(phi[j], swap_full));
  Series U = mul_lo(Dbar, psi[od.kstar]);
  for (int m = 0; m < n; ++m) U = sub_lo(U, mul_lo(Dbar_m[m], psi[od.pivots[m]]));
  od.Upsilon = U;

  std::vector<Series> sys = Phi;
  sys.push_back(U);
  sys.push_back(sub_lo(Series::variable(ctx, t, js.x(np)), Qp));

  Mat A(Np, Vec(Np));
  for (int i = 0; i < Np; ++i)
    for (int c = 0; c < Np; ++c) {
      Mono m(ctx->size());
      m.set(js.x(c), 1);
      A[i][c] = sys[i].coeff(m);
    }
  Mat Dm(N, Vec(N));
  for (int i = 0; i < N; ++i)
    for (int c = 0; c < N; ++c) Dm[i][c] = A[i][c];
  od.D = det(Dm);
  od.xlast_absent = true;
  for (const auto& s : Phi)
    for (const auto& [m, c] : s.terms()) od.xlast_absent = od.xlast_absent && m[js.x(np)] == 0;
  od.upsilon_xlast_zero = A[n][np].is_zero();

  // Cauchy-Binet side: det(f_z^T diag(eps') conj f_z) and g_w(0)^n det B
  Mat P(n, Vec(n));
  for (int j = 0; j < n; ++j)
    for (int k = 0; k < n; ++k) {
      GQ s;
      for (int r = 0; r < np; ++r) {
        Multi bj(N, 0), bk(N, 0);
        bj[j] = 1, bk[k] = 1;
        s += H.jet(r, bj) * GQ(LT.eps[r]) * H.jet_bar(r, bk);
      }
      P[j][k] = s;
    }
  od.cauchy_binet = det(P);
  od.gw = tr.gw[0][0];
  od.levi_det = det(LM.B[0]);
  od.cb_matches_levi = od.cauchy_binet == pow(od.gw, n) * od.levi_det;
  od.D_is_pm_cb = od.D == od.cauchy_binet || od.D == -od.cauchy_binet;
  if (od.D.is_zero()) throw Error(Errc::hypothesis, "D = 0: inconsistent hypotheses");

  bi.det_ = det(A);
  bi.Psi_ = implicit_solve(sys, Np);
  for (const auto& b : multiindices(N, 1)) {
    std::vector<GQ> vb, vr;
    for (int c = 0; c < Np; ++c) vb.push_back(H.jet_bar(c, b)), vr.push_back(H.jet(c, b));
    bi.jets_used_.push_back({b, vb});
    bi.jets_used_r_.push_back({b, vr});
  }
  bi.one_ = std::move(od);
  return bi;
}

}  // namespace crdeg
