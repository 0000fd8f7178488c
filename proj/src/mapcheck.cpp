#include "mapcheck.hpp"

#include <algorithm>

namespace crdeg {

namespace {

void check_support(const Series& s, int lo, int hi, const std::string& what) {
  for (const auto& [m, c] : s.terms())
    for (int v = 0; v < m.nvars(); ++v)
      if (m[v] && (v < lo || v >= hi)) throw Error(Errc::invalid_input, what + " depends on a variable outside its side");
}

mpz_class multi_factorial(const Multi& b) {
  mpz_class f = 1;
  for (int x : b) f *= factorial(x);
  return f;
}

}  // namespace

FormalMap::FormalMap(ManifoldPtr src, ManifoldPtr tgt, std::vector<Series> H,
                     std::optional<std::vector<Series>> zeta)
    : src_(std::move(src)), tgt_(std::move(tgt)), H_(std::move(H)) {
  const Manifold& M = *src_;
  const int Np = tgt_->N();
  if (static_cast<int>(H_.size()) != Np)
    throw Error(Errc::invalid_input, "map needs " + std::to_string(Np) + " components, got " + std::to_string(H_.size()));
  order_ = H_[0].order();
  for (size_t c = 0; c < H_.size(); ++c) {
    const std::string what = "map component " + std::to_string(c + 1);
    if (!same_vars(H_[c].vars(), M.vars())) throw Error(Errc::context_mismatch, what + " is not in the source context");
    if (!H_[c].constant_term().is_zero()) throw Error(Errc::invalid_input, what + " has H(0) != 0");
    check_support(H_[c], 0, M.N(), what);
    order_ = std::min(order_, H_[c].order());
    polynomial_ = polynomial_ && H_[c].exact();
  }
  for (auto& h : H_) h = h.at(order_);
  if (zeta) {
    if (static_cast<int>(zeta->size()) != Np) throw Error(Errc::invalid_input, "zeta side has the wrong length");
    for (size_t c = 0; c < zeta->size(); ++c) {
      const Series& s = (*zeta)[c];
      if (!same_vars(s.vars(), M.vars())) throw Error(Errc::context_mismatch, "zeta side not in the source context");
      if (!s.constant_term().is_zero()) throw Error(Errc::invalid_input, "zeta side does not vanish at 0");
      check_support(s, M.N(), 2 * M.N(), "zeta side component");
      order_ = std::min(order_, s.order());
      polynomial_ = polynomial_ && s.exact();
    }
    for (const auto& s : *zeta) Hbar_.push_back(s.at(order_));
    for (auto& h : H_) h = h.at(order_);
    explicit_zeta_ = true;
  } else {
    std::vector<int> where(M.vars()->size(), -1);
    for (int v = 0; v < M.N(); ++v) where[v] = M.N() + v;
    for (const auto& h : H_) Hbar_.push_back(remap(h.conj(), M.vars(), where));
  }
}

Series FormalMap::pullback(const Series& F) const {
  const Manifold& T = *tgt_;
  if (!same_vars(F.vars(), T.vars())) throw Error(Errc::context_mismatch, "pullback: series not in the target context");
  std::vector<Series> img;
  for (const auto& h : H_) img.push_back(h);
  for (const auto& h : Hbar_) img.push_back(h);
  return compose(F, img, src_->vars());
}

GQ FormalMap::jet(int c, const Multi& beta) const {
  if (multi_abs(beta) > order_) throw Error(Errc::order_exhausted, "jet of order " + std::to_string(multi_abs(beta)) + " beyond the map's order");
  Mono m = multi_mono(beta, src_->vars()->size());
  return H_[c].coeff(m) * GQ(mpq_class(multi_factorial(beta)));
}

GQ FormalMap::jet_bar(int c, const Multi& beta) const {
  if (multi_abs(beta) > order_) throw Error(Errc::order_exhausted, "jet of order " + std::to_string(multi_abs(beta)) + " beyond the map's order");
  Mono m = multi_mono(beta, src_->vars()->size(), src_->N());
  return Hbar_[c].coeff(m) * GQ(mpq_class(multi_factorial(beta)));
}

FormalMap FormalMap::truncated(int t) const {
  std::vector<Series> h;
  for (const auto& s : H_) h.push_back(s.at(t));
  if (!explicit_zeta_) return FormalMap(src_, tgt_, h);
  std::vector<Series> z;
  for (const auto& s : Hbar_) z.push_back(s.at(t));
  return FormalMap(src_, tgt_, h, z);
}

std::vector<Series> default_generators(const Manifold& tgt) {
  std::vector<Series> g;
  for (int j = 0; j < tgt.d(); ++j) g.push_back(tgt.rho(j));
  return g;
}

MapsIntoResult check_maps_into(const FormalMap& H, const std::vector<Series>* gens) {
  std::vector<Series> def;
  if (!gens) {
    def = default_generators(H.target());
    gens = &def;
  }
  MapsIntoResult r;
  r.order = H.order();
  for (const auto& g : *gens) {
    Series red = H.source().ideal_reduce(H.pullback(g));
    r.order = std::min(r.order, red.order());
    r.ok = r.ok && red.is_zero();
    r.residuals.push_back(std::move(red));
  }
  return r;
}

Transversality transversality_check(const FormalMap& H) {
  const Manifold& M = H.source();
  const Manifold& T = H.target();
  Transversality t;
  t.gw.assign(T.d(), Vec(M.d()));
  for (int j = 0; j < T.d(); ++j)
    for (int k = 0; k < M.d(); ++k) {
      Multi b(M.N(), 0);
      b[M.n() + k] = 1;
      t.gw[j][k] = H.jet(T.n() + j, b);
    }
  t.rank = rank(t.gw);
  t.transversal = t.rank == M.d();
  return t;
}

LeviData levi_data(const Manifold& M) {
  if (M.order() < 2) throw Error(Errc::order_exhausted, "Levi form needs order >= 2");
  LeviData L;
  const int n = M.n();
  for (int j = 0; j < M.d(); ++j) {
    Mat B(n, Vec(n));
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b) {
        Mono m(M.vars()->size());
        m.set(M.z(a), 1);
        m.add(M.chi(b), 1);
        B[a][b] = M.Q()[j].coeff(m);
      }
    L.B.push_back(std::move(B));
  }
  if (M.d() == 1) {
    L.nondegenerate = n == 0 || !det(L.B[0]).is_zero();
    bool eps = true;
    for (int a = 0; a < n && eps; ++a)
      for (int b = 0; b < n && eps; ++b) {
        const GQ& x = L.B[0][a][b];
        if (a != b) eps = x.is_zero();
        else eps = x == GQ(1) || x == GQ(-1);
      }
    L.epsilon_normalized = eps;
    if (eps)
      for (int a = 0; a < n; ++a) L.eps.push_back(L.B[0][a][a] == GQ(1) ? 1 : -1);
  }
  return L;
}

Mat jacobian_at_0(const FormalMap& H) {
  const int N = H.source().N();
  Mat J(H.Nprime(), Vec(N));
  for (int c = 0; c < H.Nprime(); ++c)
    for (int v = 0; v < N; ++v) {
      Multi b(N, 0);
      b[v] = 1;
      J[c][v] = H.jet(c, b);
    }
  return J;
}

LeviPullback levi_pullback_check(const FormalMap& H) {
  const Manifold& M = H.source();
  const Manifold& T = H.target();
  if (M.d() != 1 || T.d() != 1) throw Error(Errc::hypothesis, "Levi pullback identity needs hypersurfaces (d = d' = 1)");
  LeviData LM = levi_data(M), LT = levi_data(T);
  const int n = M.n(), np = T.n();
  Multi bw(M.N(), 0);
  bw[n] = 1;
  GQ gw = H.jet(np, bw);
  // f_{r z_j}(0) and the zeta-side partner, which is conj(f_{r z_j}(0)) by default
  Mat fz(np, Vec(n)), fzb(np, Vec(n));
  for (int r = 0; r < np; ++r)
    for (int j = 0; j < n; ++j) {
      Multi b(M.N(), 0);
      b[j] = 1;
      fz[r][j] = H.jet(r, b);
      fzb[r][j] = H.jet_bar(r, b);
    }
  LeviPullback out;
  out.lhs.assign(n, Vec(n));
  out.rhs.assign(n, Vec(n));
  out.holds = true;
  for (int j = 0; j < n; ++j)
    for (int k = 0; k < n; ++k) {
      out.lhs[j][k] = gw * LM.B[0][j][k];
      GQ s;
      for (int r = 0; r < np; ++r)
        for (int q = 0; q < np; ++q) s += LT.B[0][r][q] * fz[r][j] * fzb[q][k];
      out.rhs[j][k] = s;
      out.holds = out.holds && out.lhs[j][k] == s;
    }
  Mat J = jacobian_at_0(H);
  out.jacobian_rank = rank(J);
  Transversality tr = transversality_check(H);
  if (LM.nondegenerate && LT.nondegenerate && tr.transversal) {
    out.immersive = out.jacobian_rank == M.N();
    out.note = "hypotheses checked: both Levi forms nondegenerate, H transversal";
  } else {
    out.note = "immersivity not asserted: hypotheses not met";
  }
  return out;
}

}  // namespace crdeg
