#include "identity.hpp"

#include <algorithm>

namespace crdeg {

namespace {

JetFamily zeta_family(const FormalMap& H, int K) {
  const Manifold& M = H.source();
  JetFamily f;
  f.name = "Hb";
  f.width = H.Nprime();
  f.betas = multiindices(M.N(), K);
  for (const auto& b : f.betas) {
    std::vector<GQ> c;
    for (int j = 0; j < f.width; ++j) c.push_back(H.jet_bar(j, b));
    f.shift.push_back(std::move(c));
  }
  f.raise.assign(M.vars()->size(), -1);
  for (int i = 0; i < M.n(); ++i) f.raise[M.chi(i)] = i;
  for (int j = 0; j < M.d(); ++j) f.raise[M.tau(j)] = M.n() + j;
  return f;
}

Series base_coeff(const Manifold& M, const Series& pv) {
  std::vector<int> where(pv.nvars());
  for (int v = 0; v < pv.nvars(); ++v) where[v] = v;
  return remap(pv, M.vars(), where);
}

// inverse of a square series matrix with invertible constant part
std::vector<std::vector<Series>> series_inverse(const std::vector<std::vector<Series>>& A) {
  const int d = static_cast<int>(A.size());
  Series r = reciprocal(det(A));
  std::vector<std::vector<Series>> out(d, std::vector<Series>(d));
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) {
      // cofactor C_ji
      std::vector<std::vector<Series>> m;
      for (int a = 0; a < d; ++a) {
        if (a == j) continue;
        std::vector<Series> row;
        for (int b = 0; b < d; ++b)
          if (b != i) row.push_back(A[a][b]);
        m.push_back(std::move(row));
      }
      Series c = d == 1 ? Series::constant(A[0][0].vars(), A[0][0].order(), GQ(1)) : det(m);
      if ((i + j) % 2) c = -c;
      out[i][j] = mul_lo(c, r);
    }
  return out;
}

std::vector<int> used_vars(const Series& s) {
  std::vector<int> u;
  std::vector<bool> seen(s.nvars(), false);
  for (const auto& [m, c] : s.terms())
    for (int v = 0; v < m.nvars(); ++v)
      if (m[v] && !seen[v]) seen[v] = true, u.push_back(v);
  std::sort(u.begin(), u.end());
  return u;
}

}  // namespace

std::optional<std::pair<Multi, int>> first_jet_difference(const FormalMap& H1, const FormalMap& H2, int t) {
  for (const auto& b : multiindices(H1.source().N(), t))
    for (int c = 0; c < H1.Nprime(); ++c)
      if (H1.jet(c, b) != H2.jet(c, b)) return std::make_pair(b, c);
  return std::nullopt;
}

BasicIdentity basic_identity(const FormalMap& H, const DegeneracyReport& rep, int extra) {
  const Manifold& M = H.source();
  const Manifold& T = H.target();
  if (rep.s != 0)
    throw Error(Errc::hypothesis, "map is not k0-nondegenerate (s = " + std::to_string(rep.s) +
                                      "); the nondegenerate basic identity needs s = 0");
  const int k0 = rep.k0;
  const int need = 2 * k0 + 2;
  if (std::min({H.order(), M.order(), T.order()}) < need)
    throw Error(Errc::order_exhausted, "basic identity needs working order >= 2 k0 + 2 = " + std::to_string(need));
  BasicIdentity bi;
  bi.kind_ = BasicIdentity::nondeg;
  bi.src_ = H.source_ptr();
  bi.tgt_ = H.target_ptr();
  bi.k0_ = k0;
  bi.kmax_ = k0 + std::max(0, extra);
  bi.js_ = std::make_shared<JetSpace>(M.vars(), std::vector<JetFamily>{zeta_family(H, bi.kmax_)}, H.Nprime());
  const JetSpace& js = *bi.js_;
  const VarsPtr& ctx = js.vars();
  const int Np = H.Nprime(), n = M.n(), d = M.d();

  std::vector<std::vector<Series>> crb(n);
  for (int k = 0; k < n; ++k)
    for (int j = 0; j < d; ++j) crb[k].push_back(base_coeff(M, M.cr_coeff(k, j)));

  // rho'_l(X, Y_0)
  const int t = T.order();
  std::vector<Series> img;
  for (int c = 0; c < Np; ++c) img.push_back(Series::variable(ctx, t, js.x(c)));
  for (int c = 0; c < Np; ++c) img.push_back(Series::variable(ctx, t, js.var(0, Multi(M.N(), 0), c)));
  std::vector<Multi> alphas = multiindices(n, k0);
  std::vector<std::vector<Series>> Phi(alphas.size());
  for (int l = 0; l < T.d(); ++l) Phi[0].push_back(compose(T.rho(l), img, ctx));
  for (size_t a = 1; a < alphas.size(); ++a) {
    int k = 0;
    while (alphas[a][k] == 0) ++k;
    Multi prev = alphas[a];
    prev[k] -= 1;
    size_t pi = std::find(alphas.begin(), alphas.end(), prev) - alphas.begin();
    std::vector<std::pair<int, const Series*>> co{{M.chi(k), nullptr}};
    for (int j = 0; j < d; ++j) co.push_back({M.tau(j), &crb[k][j]});
    for (const auto& s : Phi[pi]) Phi[a].push_back(js.total_derivative(s, co));
  }

  RowSpan span(Np);
  std::vector<Series> chosen;
  Mat A;
  for (size_t a = 0; a < alphas.size(); ++a)
    for (int l = 0; l < T.d(); ++l) {
      Vec row;
      for (int c = 0; c < Np; ++c) {
        Mono m(ctx->size());
        m.set(js.x(c), 1);
        row.push_back(Phi[a][l].coeff(m));
      }
      if (static_cast<int>(chosen.size()) < Np && span.add(row)) {
        bi.choices_.push_back({alphas[a], l});
        chosen.push_back(Phi[a][l]);
        A.push_back(row);
      }
    }
  if (static_cast<int>(chosen.size()) < Np)
    throw Error(Errc::internal, "no valid multiindex choice although s = 0");
  bi.det_ = det(A);
  try {
    bi.Psi_ = implicit_solve(chosen, Np);
  } catch (const Error& e) {
    if (e.code() == Errc::singular) throw Error(Errc::internal, "singular implicit system although s = 0");
    throw;
  }
  for (const auto& b : multiindices(M.N(), k0)) {
    std::vector<GQ> v;
    for (int c = 0; c < Np; ++c) v.push_back(H.jet_bar(c, b));
    bi.jets_used_.push_back({b, v});
  }
  return bi;
}

void BasicIdentity::build_s_fields() {
  if (!s_coeff_.empty()) return;
  const Manifold& M = *src_;
  const int n = M.n(), d = M.d(), N = M.N();
  std::vector<std::vector<Series>> Qt(d, std::vector<Series>(d));
  for (int a = 0; a < d; ++a)
    for (int b = 0; b < d; ++b) Qt[a][b] = differentiate(M.Q()[a], M.tau(b));
  auto Qi = series_inverse(Qt);
  const int t = Qi[0][0].order();
  s_coeff_.assign(N, std::vector<Series>(d));
  for (int j = 0; j < N; ++j)
    for (int b = 0; b < d; ++b) {
      Series s(M.vars(), t);
      for (int a = 0; a < d; ++a) {
        // rho_{a, Z_j}
        Series rz = j < n ? -differentiate(M.Q()[a], M.z(j)) : Series::constant(M.vars(), t, GQ(j - n == a ? 1 : 0));
        s = add_lo(s, mul_lo(Qi[b][a], rz));
      }
      s_coeff_[j][b] = s;
    }
}

std::vector<Series> BasicIdentity::s_field_tangency() {
  build_s_fields();
  const Manifold& M = *src_;
  std::vector<Series> out;
  for (int j = 0; j < M.N(); ++j)
    for (int a = 0; a < M.d(); ++a) {
      Series rho = M.rho(a);
      int zj = j < M.n() ? M.z(j) : M.w(j - M.n());
      Series s = differentiate(rho, zj);
      for (int b = 0; b < M.d(); ++b) s = add_lo(s, mul_lo(s_coeff_[j][b], differentiate(rho, M.tau(b))));
      out.push_back(M.ideal_reduce(s));
    }
  return out;
}

const std::vector<Series>& BasicIdentity::Psi_alpha(const Multi& alpha) {
  const Manifold& M = *src_;
  if (static_cast<int>(alpha.size()) != M.N()) throw Error(Errc::invalid_input, "multiindex length must be N");
  if (multi_abs(alpha) == 0) return Psi_;
  if (auto it = Psi_alpha_.find(alpha); it != Psi_alpha_.end()) return it->second;
  build_s_fields();
  int k = 0;
  while (alpha[k] == 0) ++k;
  Multi prev = alpha;
  prev[k] -= 1;
  std::vector<Series> p = Psi_alpha(prev);
  const int zk = k < M.n() ? M.z(k) : M.w(k - M.n());
  std::vector<std::pair<int, const Series*>> co{{zk, nullptr}};
  for (int b = 0; b < M.d(); ++b) co.push_back({M.tau(b), &s_coeff_[k][b]});
  std::vector<Series> out;
  for (const auto& s : p) out.push_back(js_->total_derivative(s, co));
  return Psi_alpha_[alpha] = std::move(out);
}

std::vector<Series> BasicIdentity::jet_images(const FormalMap& H, int order) const {
  const Manifold& M = *src_;
  const VarsPtr& B = M.vars();
  const VarsPtr& P = js_->prefix();
  std::vector<Series> img(P->size());
  for (int v = 0; v < B->size(); ++v) img[v] = Series::variable(B, order, v);
  for (int f = 0; f < js_->nfamilies(); ++f) {
    const JetFamily& fam = js_->family(f);
    for (size_t bi = 0; bi < fam.betas.size(); ++bi) {
      const Multi& b = fam.betas[bi];
      for (int c = 0; c < fam.width; ++c) {
        int v = js_->var(f, b, c);
        if (multi_abs(b) > H.order()) {
          img[v] = Series(B, 0, false);
          continue;
        }
        Series s;
        if (fam.name == "Hb") {
          Multi full(B->size(), 0);
          for (int i = 0; i < M.N(); ++i) full[M.N() + i] = b[i];
          s = differentiate(H.Hbar()[c], full);
        } else {
          Multi full(B->size(), 0);
          for (int i = 0; i < M.N(); ++i) full[i] = b[i];
          Series dh = differentiate(H.H()[c], full);
          std::vector<Series> at(B->size(), Series(B, dh.order()));
          for (int j = 0; j < M.d(); ++j) at[M.w(j)] = Series::variable(B, dh.order(), M.tau(j));
          s = compose(dh, at, B);
        }
        img[v] = sub_lo(s, Series::constant(B, s.order(), fam.shift[bi][c]));
      }
    }
  }
  return img;
}

std::vector<Series> BasicIdentity::residual(const FormalMap& H, const Multi& alpha) {
  const Manifold& M = *src_;
  const auto& P = Psi_alpha(alpha);
  std::vector<Series> img = jet_images(H, std::max(H.order(), min_order(P)));
  std::vector<Series> out;
  Multi full(M.vars()->size(), 0);
  for (int i = 0; i < M.N(); ++i) full[i] = alpha[i];
  for (int c = 0; c < H.Nprime(); ++c) {
    // skip images of jet variables Psi does not use; they may be beyond H's order
    std::vector<Series> im = img;
    std::vector<bool> used(P[c].nvars(), false);
    for (int v : used_vars(P[c])) used[v] = true;
    for (size_t v = 0; v < im.size(); ++v)
      if (!used[v] && im[v].order() == 0 && !im[v].exact()) im[v] = Series(M.vars(), H.order());
    for (int v = 0; v < P[c].nvars(); ++v)
      if (used[v] && im[v].order() == 0 && !im[v].exact())
        throw Error(Errc::order_exhausted, "map jets do not reach the order Psi uses");
    Series sub = compose(P[c], im, M.vars());
    Series dh = differentiate(H.H()[c], full);
    out.push_back(M.ideal_reduce(sub_lo(dh, sub)));
  }
  return out;
}

json BasicIdentity::certificate() const {
  json j;
  j["kind"] = kind_ == nondeg ? "nondegenerate" : "1-degenerate";
  j["k0"] = k0_;
  json ch = json::array();
  for (const auto& c : choices_) ch.push_back({{"alpha", c.alpha}, {"l", c.l}});
  j["choices"] = ch;
  j["det"] = gq_json(det_);
  auto jets = [](const std::vector<std::pair<Multi, std::vector<GQ>>>& v) {
    json a = json::array();
    for (const auto& [b, vals] : v) {
      json xs = json::array();
      for (const auto& x : vals) xs.push_back(gq_json(x));
      a.push_back({{"beta", b}, {"values", xs}});
    }
    return a;
  };
  j["jets"] = jets(jets_used_);
  if (!jets_used_r_.empty()) j["jets_r"] = jets(jets_used_r_);
  json psi = json::array();
  for (const auto& s : Psi_) psi.push_back(series_json(s));
  j["psi"] = psi;
  j["order"] = min_order(Psi_);
  if (one_) {
    json o;
    o["pivots"] = one_->pivots;
    o["kstar"] = one_->kstar;
    o["Delta0"] = gq_json(one_->Delta0);
    json dm = json::array();
    for (const auto& x : one_->Deltam0) dm.push_back(gq_json(x));
    o["Deltam0"] = dm;
    o["D"] = gq_json(one_->D);
    j["one_degenerate"] = o;
  }
  return j;
}

UpsilonRecursion::UpsilonRecursion(BasicIdentity& bi) : bi_(bi) {}

const std::vector<Series>& UpsilonRecursion::get(int k, const Multi& alpha) {
  auto key = std::make_pair(k, alpha);
  if (auto it = memo_.find(key); it != memo_.end()) return it->second;
  const Manifold& M = *bi_.source();
  const int n = M.n(), N = M.N();
  if (k < 0) throw Error(Errc::invalid_input, "Segre level must be >= 0");
  if (bi_.kind() == BasicIdentity::one_deg && k > 1)
    throw Error(Errc::hypothesis, "the 1-degenerate identity can be iterated only once (second Segre set)");
  if (k >= 2 && M.real() != true)
    throw Error(Errc::hypothesis, "Upsilon recursion beyond the second Segre set needs a real source manifold");
  const auto& P = bi_.Psi_alpha(alpha);
  const JetSpace& js = bi_.space();
  const VarsPtr L = level_vars(k);
  const int t = M.order();
  std::vector<Series> img(js.prefix()->size());
  for (auto& s : img) s = Series(L, t);
  if (k == 0) {
    for (int i = 0; i < n; ++i) img[M.z(i)] = Series::variable(L, t, i);
  } else {
    SegreBuilder sb(M, k + 1);
    auto Z = sb.v(k + 1, 0);
    auto zeta = sb.vbar(k, 1);
    for (int v = 0; v < N; ++v) img[v] = Z[v], img[N + v] = zeta[v];
    // zeta-side jets from the previous level, conjugated and shifted one block
    std::vector<bool> used(js.prefix()->size(), false);
    for (const auto& s : P)
      for (int v : used_vars(s)) used[v] = true;
    const JetFamily& fam = js.family(0);
    std::vector<int> shift(segre_vars(n, k)->size());
    for (size_t v = 0; v < shift.size(); ++v) shift[v] = static_cast<int>(v) + n;
    for (size_t bi = 0; bi < fam.betas.size(); ++bi) {
      bool any = false;
      for (int c = 0; c < fam.width; ++c) any = any || used[js.var(0, fam.betas[bi], c)];
      if (!any) continue;
      const auto& prev = get(k - 1, fam.betas[bi]);
      for (int c = 0; c < fam.width; ++c) {
        Series s = remap(prev[c].conj(), L, shift);
        img[js.var(0, fam.betas[bi], c)] = sub_lo(s, Series::constant(L, s.order(), fam.shift[bi][c]));
      }
    }
    // Hr jets: tau = 0 on the first two Segre sets, where they vanish
  }
  std::vector<Series> out;
  for (const auto& s : P) out.push_back(compose(s, img, L));
  return memo_[key] = std::move(out);
}

UpsilonCheck upsilon_check(UpsilonRecursion& ur, const FormalMap& H, int k, const Multi& alpha) {
  const Manifold& M = H.source();
  UpsilonCheck out;
  out.k = k;
  out.alpha = alpha;
  const auto& U = ur.get(k, alpha);
  SegreBuilder sb(M, k + 1);
  auto Z = sb.v(k + 1, 0);
  const VarsPtr L = sb.vars();
  std::vector<Series> img = Z;
  for (int v = 0; v < M.N(); ++v) img.push_back(Series(L, M.order()));
  Multi full(M.vars()->size(), 0);
  for (int i = 0; i < M.N(); ++i) full[i] = alpha[i];
  out.ok = true;
  out.order = 1 << 20;
  for (int c = 0; c < H.Nprime(); ++c) {
    Series lhs = compose(differentiate(H.H()[c], full), img, L);
    Series diff = sub_lo(lhs, U[c]);
    out.order = std::min(out.order, diff.order());
    out.ok = out.ok && diff.is_zero();
    out.difference.push_back(std::move(diff));
  }
  return out;
}

namespace {

bool same_manifold(const Manifold& a, const Manifold& b) {
  if (a.n() != b.n() || a.d() != b.d()) return false;
  for (int j = 0; j < a.d(); ++j)
    if (!(a.Q()[j] == b.Q()[j])) return false;
  return true;
}

}  // namespace

JetDetermination jet_determination_check(const FormalMap& H1, const FormalMap& H2, JetDetermination::Mode mode,
                                         const FiniteTypeOptions& ft) {
  JetDetermination out;
  out.mode = mode;
  if (!same_manifold(H1.source(), H2.source()) || !same_manifold(H1.target(), H2.target()))
    throw Error(Errc::invalid_input, "the two maps must share source and target");
  out.maps_into_1 = check_maps_into(H1).ok;
  out.maps_into_2 = check_maps_into(H2).ok;
  if (!out.maps_into_1 || !out.maps_into_2) {
    out.note = std::string(out.maps_into_1 ? "second" : "first") + " map rejected by check_maps_into";
    return out;
  }
  const Manifold& M = H1.source();
  auto analyse = [](const FormalMap& H) {
    int km = std::min(default_kmax(H), max_kmax(H));
    return degeneracy_at_origin(degeneracy_rows(H, km));
  };
  DegeneracyReport r1 = analyse(H1);
  std::optional<BasicIdentity> bi;
  int level = 0;
  if (mode == JetDetermination::nondeg) {
    DegeneracyReport r2 = analyse(H2);
    if (r1.s != 0 || r2.s != 0) throw Error(Errc::hypothesis, "nondeg mode needs both maps k0-nondegenerate (s = 0)");
    FiniteType f = finite_type_test(M, ft);
    if (f.verdict != FiniteType::finite_type) throw Error(Errc::hypothesis, "source finite type not verified");
    out.k0 = std::max(r1.k0, r2.k0);
    out.k1 = f.k;
    out.threshold = out.k1 * out.k0;
    level = out.k1 - 1;
  } else {
    out.k0 = r1.k0;
    out.k1 = 2;
    out.threshold = 2 * out.k0;
    level = 1;
  }
  if (auto diff = first_jet_difference(H1, H2, out.threshold)) {
    out.beta = diff->first;
    out.component = diff->second;
    out.value1 = H1.jet(diff->second, diff->first);
    out.value2 = H2.jet(diff->second, diff->first);
    out.first_order = multi_abs(diff->first);
    out.note = "jets differ below the threshold";
    return out;
  }
  out.jets_agree = true;
  if (mode == JetDetermination::nondeg) bi = basic_identity(H1, r1, level * out.k0);
  else bi = basic_identity_1deg(H1, 1);
  UpsilonRecursion ur(*bi);
  Multi zero(M.N(), 0);
  UpsilonCheck c1 = upsilon_check(ur, H1, level, zero);
  UpsilonCheck c2 = upsilon_check(ur, H2, level, zero);
  out.determined = c1.ok && c2.ok;
  out.order = std::min(c1.order, c2.order);
  const int t = std::min(H1.order(), H2.order());
  auto d = first_jet_difference(H1, H2, t);
  out.equal_through = d ? multi_abs(d->first) - 1 : t;
  out.note = out.determined ? "both maps agree with Upsilon on Segre set " + std::to_string(level + 1) + " to order " +
                                  std::to_string(out.order)
                            : "Upsilon mismatch on Segre set " + std::to_string(level + 1);
  return out;
}

}  // namespace crdeg
