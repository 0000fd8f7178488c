#include "degeneracy.hpp"

#include <algorithm>
#include <map>
#include <random>

namespace crdeg {

const std::vector<Series>& DegeneracyRows::row(const RowId& r) const { return rows[alpha_index(r.alpha)][r.l]; }
const Vec& DegeneracyRows::row0(const RowId& r) const { return at0[alpha_index(r.alpha)][r.l]; }

int DegeneracyRows::alpha_index(const Multi& a) const {
  auto it = std::find(alphas.begin(), alphas.end(), a);
  if (it == alphas.end()) throw Error(Errc::invalid_input, "multiindex " + multi_str(a) + " beyond k_max");
  return static_cast<int>(it - alphas.begin());
}

int max_kmax(const FormalMap& H) { return std::min(H.target().order() - 1, H.order()); }

int default_kmax(const FormalMap& H) {
  return std::max(0, std::min(H.Nprime() - H.target().d(), max_kmax(H)));
}

DegeneracyRows degeneracy_rows(const FormalMap& H, int k_max, const std::vector<Series>* gens) {
  const Manifold& M = H.source();
  const Manifold& T = H.target();
  std::vector<Series> def;
  if (!gens) {
    def = default_generators(T);
    gens = &def;
  }
  if (k_max < 0) throw Error(Errc::invalid_input, "k_max must be >= 0");
  if (k_max > max_kmax(H))
    throw Error(Errc::order_exhausted, "k_max = " + std::to_string(k_max) + " exceeds the order budget; max usable k_max is " +
                                           std::to_string(max_kmax(H)));
  DegeneracyRows R;
  R.k_max = k_max;
  R.Nprime = T.N();
  R.dprime = static_cast<int>(gens->size());
  R.alphas = multiindices(M.n(), k_max);
  for (size_t a = 0; a < R.alphas.size(); ++a) {
    const Multi& al = R.alphas[a];
    std::vector<std::vector<Series>> lrows;
    if (a == 0) {
      for (const auto& g : *gens) {
        std::vector<Series> r;
        for (int c = 0; c < T.N(); ++c) r.push_back(H.pullback(differentiate(g, c)));
        lrows.push_back(std::move(r));
      }
    } else {
      int k = 0;
      while (al[k] == 0) ++k;
      Multi prev = al;
      prev[k] -= 1;
      const auto& pr = R.rows[R.alpha_index(prev)];
      for (const auto& r0 : pr) {
        std::vector<Series> r;
        for (const auto& s : r0) r.push_back(M.cr_apply(k, s));
        lrows.push_back(std::move(r));
      }
    }
    std::vector<Vec> c0;
    for (const auto& r : lrows) {
      Vec v;
      for (const auto& s : r) v.push_back(s.constant_term());
      c0.push_back(std::move(v));
    }
    R.rows.push_back(std::move(lrows));
    R.at0.push_back(std::move(c0));
  }
  return R;
}

DegeneracyReport degeneracy_at_origin(const DegeneracyRows& rows) {
  DegeneracyReport rep;
  rep.Nprime = rows.Nprime;
  rep.dprime = rows.dprime;
  rep.k_max = rows.k_max;
  RowSpan span(rows.Nprime);
  for (int k = 0; k <= rows.k_max; ++k) {
    for (size_t a = 0; a < rows.alphas.size(); ++a) {
      if (multi_abs(rows.alphas[a]) != k) continue;
      for (int l = 0; l < rows.dprime; ++l)
        if (span.add(rows.at0[a][l])) rep.basis.push_back({rows.alphas[a], l});
    }
    rep.dims.push_back(span.rank());
  }
  int mx = rep.dims.back();
  rep.k0 = static_cast<int>(std::find(rep.dims.begin(), rep.dims.end(), mx) - rep.dims.begin());
  rep.s = rows.Nprime - mx;
  if (mx == rows.Nprime) {
    rep.certified = true;
    rep.certificate = "dim E_k(0) reached N'";
  } else {
    rep.certificate = "valid up to k_max = " + std::to_string(rows.k_max);
  }
  return rep;
}

namespace {

// z' part in the sign convention phi^k = Q'_{z'_k} pulled back
std::vector<Series> zpart(const std::vector<Series>& row, int nprime) {
  std::vector<Series> out;
  for (int c = 0; c < nprime; ++c) out.push_back(-row[c]);
  return out;
}

std::vector<RowId> higher_basis(const DegeneracyReport& rep) {
  std::vector<RowId> b;
  for (const auto& r : rep.basis)
    if (multi_abs(r.alpha) > 0) b.push_back(r);
  return b;
}

bool same_row(const RowId& a, const RowId& b) { return a.alpha == b.alpha && a.l == b.l; }

}  // namespace

Constancy constant_rank_probe(const FormalMap& H, const DegeneracyRows& rows, const DegeneracyReport& rep) {
  const Manifold& M = H.source();
  const int np = H.target().n();
  Constancy out;
  out.symbolic_checked = true;
  std::vector<RowId> B = higher_basis(rep);
  const int t = static_cast<int>(B.size());
  if (t > 0) {
    Mat b0;
    for (const auto& r : B) {
      Vec v;
      for (int c = 0; c < np; ++c) v.push_back(-rows.row0(r)[c]);
      b0.push_back(std::move(v));
    }
    out.pivots = first_nonsingular_columns(b0);
  }
  std::vector<std::vector<Series>> Bz;
  for (const auto& r : B) Bz.push_back(zpart(rows.row(r), np));

  bool constant = true;
  for (size_t a = 0; a < rows.alphas.size() && constant; ++a)
    for (int l = 0; l < rows.dprime && constant; ++l) {
      RowId rid{rows.alphas[a], l};
      bool in_basis = false;
      for (const auto& r : B) in_basis = in_basis || same_row(r, rid);
      if (in_basis) continue;
      std::vector<Series> bz = zpart(rows.rows[a][l], np);
      for (int k = 0; k < np && constant; ++k) {
        if (std::find(out.pivots.begin(), out.pivots.end(), k) != out.pivots.end()) continue;
        std::vector<std::vector<Series>> m;
        for (int i = 0; i < t; ++i) {
          std::vector<Series> row;
          for (int p : out.pivots) row.push_back(Bz[i][p]);
          row.push_back(Bz[i][k]);
          m.push_back(std::move(row));
        }
        std::vector<Series> last;
        for (int p : out.pivots) last.push_back(bz[p]);
        last.push_back(bz[k]);
        m.push_back(std::move(last));
        Series red = M.ideal_reduce(det(m));
        ++out.minors_checked;
        if (!red.is_zero()) {
          constant = false;
          out.witness = MinorWitness{rid, k, red};
        }
      }
    }
  out.symbolic_constant = constant;
  out.verdict = constant ? Constancy::constant : Constancy::non_constant;
  if (rep.s == 0) out.note = "s = 0: constant degeneracy is automatic";
  else if (constant) out.note = "all bordered minors lie in I to working order";
  else out.note = "a bordered minor is not in I";
  return out;
}

FormalMap identity_map(const ManifoldPtr& M) {
  std::vector<Series> H;
  for (int v = 0; v < M->N(); ++v) H.push_back(M->var(v));
  return FormalMap(M, M, H);
}

FormalMap transport_map(const FormalMap& H, const std::vector<GQ>& p) {
  const Manifold& S = H.source();
  const Manifold& T = H.target();
  if (!H.polynomial() || !S.polynomial() || !T.polynomial())
    throw Error(Errc::precision, "sampling requested on non-polynomial data");
  Recentered rs = recenter_normalize(S, p);
  std::vector<GQ> pp;
  for (const auto& h : H.H()) pp.push_back(evaluate(h, p).value);
  for (const auto& h : H.Hbar()) pp.push_back(evaluate(h, p).value);
  Recentered rt = recenter_normalize(T, pp);

  const VarsPtr& B = S.vars();
  const int t = H.order();
  const int n = S.n(), d = S.d(), np = T.n(), dp = T.d();
  std::vector<Series> img;
  for (int i = 0; i < n; ++i) img.push_back(Series::variable(B, t, S.z(i)) + Series::constant(B, t, p[S.z(i)]));
  for (int k = 0; k < d; ++k) img.push_back(add_lo(rs.W[k], Series::constant(B, t, p[S.w(k)])));
  for (int i = 0; i < n; ++i) img.push_back(Series::variable(B, t, S.chi(i)) + Series::constant(B, t, p[S.chi(i)]));
  for (int k = 0; k < d; ++k) img.push_back(add_lo(rs.T[k], Series::constant(B, t, p[S.tau(k)])));

  std::vector<Series> fh, gold, ch, told;
  for (int c = 0; c < np; ++c) fh.push_back(sub_lo(compose(H.H()[c], img, B), Series::constant(B, t, pp[c])));
  for (int k = 0; k < dp; ++k) gold.push_back(sub_lo(compose(H.H()[np + k], img, B), Series::constant(B, t, pp[np + k])));
  for (int c = 0; c < np; ++c) ch.push_back(sub_lo(compose(H.Hbar()[c], img, B), Series::constant(B, t, pp[T.N() + c])));
  for (int k = 0; k < dp; ++k)
    told.push_back(sub_lo(compose(H.Hbar()[np + k], img, B), Series::constant(B, t, pp[T.N() + np + k])));

  std::vector<Block> bl = B->blocks();
  bl.push_back({"X", dp});
  VarsPtr BX = make_vars(bl);
  std::vector<int> id(B->size());
  for (int v = 0; v < B->size(); ++v) id[v] = v;
  auto up = [&](const Series& s) { return remap(s, BX, id); };
  const int tx = min_order(fh);
  auto zeroX = [&]() { return Series(BX, tx); };

  // new w': P'(fhat, 0, X) = g_old
  std::vector<Series> Phi;
  for (int k = 0; k < dp; ++k) {
    std::vector<Series> a;
    for (int c = 0; c < np; ++c) a.push_back(up(fh[c]));
    for (int j = 0; j < dp; ++j) a.push_back(zeroX());
    for (int c = 0; c < np; ++c) a.push_back(zeroX());
    for (int j = 0; j < dp; ++j) a.push_back(Series::variable(BX, tx, B->size() + j));
    Phi.push_back(sub_lo(compose(rt.P[k], a, BX), up(gold[k])));
  }
  std::vector<Series> wh = implicit_solve(Phi, dp);

  // new tau': P'(0, 0, X) = P'(0, chi_old, tau_old)
  std::vector<Series> Phib;
  const int tb = std::min(min_order(ch), min_order(told));
  for (int k = 0; k < dp; ++k) {
    std::vector<Series> a, b;
    for (int c = 0; c < np; ++c) a.push_back(Series(BX, tb)), b.push_back(Series(BX, tb));
    for (int j = 0; j < dp; ++j) a.push_back(Series(BX, tb)), b.push_back(Series(BX, tb));
    for (int c = 0; c < np; ++c) a.push_back(Series(BX, tb)), b.push_back(up(ch[c]));
    for (int j = 0; j < dp; ++j) a.push_back(Series::variable(BX, tb, B->size() + j)), b.push_back(up(told[j]));
    Phib.push_back(sub_lo(compose(rt.P[k], a, BX), compose(rt.P[k], b, BX)));
  }
  std::vector<Series> th = implicit_solve(Phib, dp);

  std::vector<Series> Hn = fh, Zn = ch;
  for (auto& s : wh) Hn.push_back(s);
  for (auto& s : th) Zn.push_back(s);
  auto sp = std::make_shared<const Manifold>(rs.M);
  auto tp = std::make_shared<const Manifold>(rt.M);
  return FormalMap(sp, tp, Hn, Zn);
}


void sample_constancy(const FormalMap& H, const DegeneracyReport& rep, const SamplingOptions& opt, Constancy& out) {
  const Manifold& S = H.source();
  if (!H.polynomial() || !S.polynomial() || !H.target().polynomial())
    throw Error(Errc::precision, "sampling requested on non-polynomial data");
  out.sampled = true;
  std::vector<std::vector<GQ>> pts = opt.points;
  std::mt19937_64 rng(opt.seed);
  const bool drawn = pts.empty();
  int attempts = 0;
  size_t want = drawn ? static_cast<size_t>(std::max(0, opt.count)) : pts.size();
  size_t next = 0;
  while (out.points.size() < want) {
    std::vector<GQ> p;
    if (drawn) {
      if (++attempts > 20 * static_cast<int>(want) + 20) throw Error(Errc::hypothesis, "could not draw usable sample points");
      p.assign(2 * S.N(), GQ());
      for (int i = 0; i < S.n(); ++i) p[S.z(i)] = random_small(rng), p[S.chi(i)] = random_small(rng);
      for (int k = 0; k < S.d(); ++k) p[S.tau(k)] = random_small(rng);
    } else {
      p = pts[next++];
      if (static_cast<int>(p.size()) != 2 * S.N()) throw Error(Errc::invalid_input, "sample point must have 2N coordinates");
    }
    for (int k = 0; k < S.d(); ++k) p[S.w(k)] = evaluate(S.Q()[k], p).value;
    int sp;
    try {
      FormalMap Hp = transport_map(H, p);
      int km = std::min(rep.k_max, max_kmax(Hp));
      sp = degeneracy_at_origin(degeneracy_rows(Hp, km)).s;
    } catch (const Error& e) {
      if (drawn && e.code() == Errc::hypothesis) continue;
      throw;
    }
    out.points.push_back(p);
    out.s_at_points.push_back(sp);
    if (sp != rep.s && !out.point_witness) out.point_witness = out.points.size() - 1;
  }
  if (out.point_witness) out.verdict = Constancy::non_constant;
}

DeltaSystem delta_system(const FormalMap& H, const DegeneracyRows& rows, const DegeneracyReport& rep) {
  const Manifold& M = H.source();
  const int np = H.target().n();
  DeltaSystem D;
  std::vector<RowId> B = higher_basis(rep);
  const int t = static_cast<int>(B.size());
  std::vector<std::vector<Series>> Bz;
  for (const auto& r : B) Bz.push_back(zpart(rows.row(r), np));
  if (t > 0) {
    Mat b0;
    for (const auto& r : B) {
      Vec v;
      for (int c = 0; c < np; ++c) v.push_back(-rows.row0(r)[c]);
      b0.push_back(std::move(v));
    }
    D.pivots = first_nonsingular_columns(b0);
  }
  for (int k = 0; k < np; ++k)
    if (std::find(D.pivots.begin(), D.pivots.end(), k) == D.pivots.end()) D.others.push_back(k);

  auto minor_with = [&](int replace_m, int col) {
    std::vector<std::vector<Series>> m;
    for (int i = 0; i < t; ++i) {
      std::vector<Series> row;
      for (int j = 0; j < t; ++j) row.push_back(j == replace_m ? Bz[i][col] : Bz[i][D.pivots[j]]);
      m.push_back(std::move(row));
    }
    return M.restrict_zw(det(m));
  };
  const int t0 = rows.rows[0][0][0].order();
  if (t == 0) D.Delta = Series::constant(M.vars(), t0, GQ(1));
  else D.Delta = minor_with(-1, 0);
  D.Delta0 = D.Delta.constant_term();
  if (D.Delta0.is_zero()) throw Error(Errc::hypothesis, "Delta(0) = 0 contradicts constant degeneracy");
  D.Delta_mk.assign(t, {});
  D.Delta_mk0.assign(t, {});
  for (int m = 0; m < t; ++m)
    for (int k : D.others) {
      Series s = minor_with(m, k);
      D.Delta_mk0[m].push_back(s.constant_term());
      D.Delta_mk[m].push_back(std::move(s));
    }
  D.order = D.Delta.order();
  for (int l = 0; l < rows.dprime; ++l) {
    std::vector<Series> phi = zpart(rows.rows[0][l], np);
    for (size_t ki = 0; ki < D.others.size(); ++ki) {
      Series rel = mul_lo(D.Delta, phi[D.others[ki]]);
      for (int m = 0; m < t; ++m) rel = sub_lo(rel, mul_lo(D.Delta_mk[m][ki], phi[D.pivots[m]]));
      Series red = M.ideal_reduce(rel);
      D.order = std::min(D.order, red.order());
      ++D.relations_checked;
      D.relations_hold = D.relations_hold && red.is_zero();
    }
  }
  return D;
}

HolVF hol_vector_fields(const FormalMap& H, int jet_order, const std::vector<Series>* gens) {
  const Manifold& M = H.source();
  const Manifold& T = H.target();
  std::vector<Series> def;
  if (!gens) {
    def = default_generators(T);
    gens = &def;
  }
  const int Np = T.N(), N = M.N();
  std::vector<std::vector<Series>> G;
  int tg = 1 << 20;
  for (const auto& g : *gens) {
    std::vector<Series> r;
    for (int c = 0; c < Np; ++c) {
      r.push_back(M.ideal_reduce(H.pullback(differentiate(g, c))));
      tg = std::min(tg, r.back().order());
    }
    G.push_back(std::move(r));
  }
  if (jet_order < 0 || jet_order > tg)
    throw Error(Errc::order_exhausted, "jet order " + std::to_string(jet_order) + " exceeds the usable order " + std::to_string(tg));
  HolVF out;
  out.jet_order = jet_order;
  std::vector<Multi> mons = multiindices(N, jet_order);
  const int nm = static_cast<int>(mons.size());
  out.unknowns = Np * nm;
  const int PV = M.param_vars()->size();
  std::vector<std::map<Mono, int, MonoLess>> rowidx(G.size());
  std::vector<std::vector<std::pair<int, GQ>>> cols(out.unknowns);
  int nrows = 0;
  for (size_t l = 0; l < G.size(); ++l)
    for (int c = 0; c < Np; ++c)
      for (int mi = 0; mi < nm; ++mi) {
        Mono sh = multi_mono(mons[mi], PV);
        for (const auto& [m, x] : G[l][c].terms()) {
          if (m.deg() + sh.deg() > jet_order) break;
          auto [it, fresh] = rowidx[l].try_emplace(m * sh, nrows);
          if (fresh) ++nrows;
          cols[c * nm + mi].push_back({it->second, x});
        }
      }
  out.equations = nrows;
  Mat A(out.equations, Vec(out.unknowns));
  for (int u = 0; u < out.unknowns; ++u)
    for (const auto& [r, x] : cols[u]) A[r][u] += x;
  std::vector<Vec> ns = nullspace(A, out.unknowns);
  out.dim = static_cast<int>(ns.size());
  RowSpan span(Np);
  for (const auto& v : ns) {
    Vec x0(Np);
    for (int c = 0; c < Np; ++c) x0[c] = v[c * nm];  // mons[0] is the zero multiindex
    if (span.add(x0)) out.values_at_0.push_back(x0);
  }
  out.dim0 = span.rank();
  return out;
}

std::vector<Diagnostic> bounds_diagnostics(const FormalMap& H, const DegeneracyReport& rep) {
  std::vector<Diagnostic> out;
  const int Np = H.Nprime(), N = H.source().N(), dp = H.target().d();
  Transversality tr = transversality_check(H);
  FormalMap id = identity_map(H.source_ptr());
  int kid = std::min(H.source().n(), max_kmax(id));
  DegeneracyReport rid = degeneracy_at_origin(degeneracy_rows(id, kid));
  bool fin_nondeg = rid.s == 0;
  Diagnostic b1{"s <= N' - N", "", ""};
  if (tr.transversal && fin_nondeg) {
    b1.status = rep.s <= Np - N ? "PASS" : "FAIL";
    b1.detail = "s = " + std::to_string(rep.s) + ", N' - N = " + std::to_string(Np - N) +
                "; H transversal, source " + std::to_string(rid.k0) + "-nondegenerate";
  } else {
    b1.status = "SKIPPED";
    b1.detail = !tr.transversal ? "hypothesis: H not transversal (rank g_w(0) = " + std::to_string(tr.rank) + ")"
                                : "hypothesis: source not finitely nondegenerate up to k = " + std::to_string(kid);
  }
  out.push_back(b1);
  out.push_back({"s <= N' - d'", rep.s <= Np - dp ? "PASS" : "FAIL",
                 "s = " + std::to_string(rep.s) + ", N' - d' = " + std::to_string(Np - dp)});
  Diagnostic g{"k0 <= N' - d' - s (generic)", "", ""};
  g.status = rep.k0 <= Np - dp - rep.s ? "PASS" : "WARN";
  g.detail = "k0 = " + std::to_string(rep.k0) + ", N' - d' - s = " + std::to_string(Np - dp - rep.s) +
             "; holds only off a proper subvariety";
  out.push_back(g);
  return out;
}

DegeneracyAnalysis analyze_degeneracy(const FormalMap& H, const AnalysisOptions& opt) {
  DegeneracyAnalysis A;
  int km = opt.k_max >= 0 ? opt.k_max : default_kmax(H);
  DegeneracyRows rows = degeneracy_rows(H, km);
  A.report = degeneracy_at_origin(rows);
  A.report.order = H.order();
  if (opt.probe) A.report.constancy = constant_rank_probe(H, rows, A.report);
  if (opt.holvf) {
    int J = opt.jet_order >= 0 ? opt.jet_order : std::max(0, std::min(H.order(), H.target().order()) - 1);
    A.holvf = hol_vector_fields(H, J);
  }
  if (opt.sample) sample_constancy(H, A.report, opt.sampling, A.report.constancy);
  if (!A.report.certified && opt.probe && A.report.constancy.symbolic_constant && A.holvf &&
      A.holvf->dim0 == A.report.s) {
    A.report.certified = true;
    A.report.certificate = "squeeze: dim X(0) = N' - dim E_kmax(0) with constant-rank probe passing";
  }
  A.bounds = bounds_diagnostics(H, A.report);
  return A;
}

}  // namespace crdeg
