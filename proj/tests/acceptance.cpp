// Acceptance run: one PASS/FAIL line per criterion, exact comparisons only.

#include <chrono>
#include <cstdio>
#include <functional>
#include <sstream>

#include "laws.hpp"

using namespace crdeg;
using crdeg::test::map_of;

namespace {

struct Outcome {
  bool ok = true;
  std::ostringstream detail;
  void require(bool cond, const std::string& what) {
    if (!cond) {
      if (!ok) detail << "; ";
      else detail.str("");
      ok = false;
      detail << what;
    }
  }
};

const std::vector<std::string> kMaps = {"id",   "balls", "leviflat", "leviflat_map", "mixed",    "bh_z2", "bh_z",
                                        "bh_zw", "eps",  "scale_1i", "scale_2",      "hprime"};

DegeneracyReport origin(const FormalMap& H, const std::vector<Series>* gens = nullptr) {
  return degeneracy_at_origin(degeneracy_rows(H, std::min(default_kmax(H), max_kmax(H)), gens));
}

bool zero(const std::vector<Series>& v) {
  for (const auto& s : v)
    if (!s.is_zero()) return false;
  return true;
}

void c1(Outcome& o) {
  DegeneracyReport id = origin(map_of("id"));
  o.require(id.k0 == 1 && id.s == 0, "identity: (k0,s) = (" + std::to_string(id.k0) + "," + std::to_string(id.s) + ")");
  FormalMap b = map_of("balls");
  DegeneracyReport rb = origin(b);
  o.require(rb.k0 == 1 && rb.s == 1 && rb.s == b.Nprime() - b.source().N(), "balls: wrong (k0,s)");
  for (const char* name : {"leviflat", "leviflat_map"}) {
    FormalMap H = map_of(name);
    o.require(origin(H).s == H.Nprime() - H.target().d(), std::string(name) + ": s != N' - d'");
  }
  if (o.ok) o.detail << "identity (1,0); balls (1,1); Levi-flat targets s = N'-d' = 1";
}

void c2(Outcome& o) {
  std::mt19937_64 rng(2024);
  int trials = 0;
  for (const auto& name : kMaps) {
    FormalMap H = map_of(name);
    DegeneracyReport base = origin(H);
    const Manifold& T = H.target();
    for (int k = 0; k < 20; ++k) {
      std::vector<Series> gens;
      for (const auto& r : default_generators(T)) {
        GQ c = random_small(rng);
        if (c.is_zero()) c = GQ(1);
        Series a = Series::constant(T.vars(), T.order(), c) + test::random_series(rng, T.vars(), T.order(), 4, 1);
        gens.push_back(mul_lo(a, r).truncated(r.order()));
      }
      DegeneracyReport g = origin(H, &gens);
      o.require(g.dims == base.dims && g.k0 == base.k0 && g.s == base.s, name + ": generator change " + std::to_string(k));
      FormalMap L = test::linear_target_change(H, test::random_invertible(rng, T.n()));
      DegeneracyReport l = origin(L);
      o.require(l.dims == base.dims && l.k0 == base.k0 && l.s == base.s, name + ": target change " + std::to_string(k));
      trials += 2;
    }
  }
  if (o.ok) o.detail << trials << " randomized changes over " << kMaps.size() << " maps, 0 failures";
}

void c3(Outcome& o) {
  std::ostringstream d;
  for (const auto& name : kMaps) {
    DegeneracyAnalysis a = analyze_degeneracy(map_of(name), {});
    const int dim0 = a.holvf->dim0, s = a.report.s;
    o.require(dim0 <= s, name + ": dim0 > s");
    if (name == "id" || name == "balls" || name == "bh_z2") {
      o.require(dim0 == s, name + ": dim0 != s");
      d << name << " " << dim0 << "=" << s << " ";
    }
  }
  if (o.ok) o.detail << d.str() << "; dim0 <= s on all " << kMaps.size() << " maps";
}

void c4(Outcome& o) {
  int pass = 0;
  bool edge = false;
  for (const auto& name : kMaps) {
    FormalMap H = map_of(name);
    DegeneracyReport r = origin(H);
    for (const auto& d : bounds_diagnostics(H, r)) {
      if (d.name != "s <= N' - N") continue;
      o.require(d.status != "FAIL", name + ": " + d.detail);
      if (d.status == "PASS") ++pass;
      if (name == "bh_z") edge = d.status == "PASS" && r.s == 2 && r.s == H.Nprime() - H.source().N();
    }
  }
  o.require(edge, "bh_z edge case not exercised");
  o.require(pass >= 8, "too few applicable fixtures");
  if (o.ok) o.detail << pass << " applicable fixtures PASS, bh_z at s = N'-N = 2";
}

void c5(Outcome& o) {
  std::vector<ManifoldPtr> ms;
  for (const char* name : {"hyperquadric", "leviflat", "balls", "mixed", "bh_z2", "eps", "hprime"}) {
    ProblemFile p = test::fixture(name);
    ms.push_back(p.source);
    if (p.target != p.source) ms.push_back(p.target);
  }
  for (const auto& M : ms)
    for (int k = 0; k <= 4; ++k) o.require(segre_vanishing(*M, k).ok, "Segre vanishing failed at k = " + std::to_string(k));
  ManifoldPtr hq = test::fixture("hyperquadric").source;
  FiniteType ft = finite_type_test(*hq, {});
  o.require(ft.verdict == FiniteType::finite_type && ft.k == 2 && ft.point && !ft.value.is_zero(),
            "hyperquadric not FINITE_TYPE at k = 2");
  FiniteType lf = finite_type_test(*test::fixture("leviflat").source, {});
  o.require(lf.verdict == FiniteType::not_finite_type, "Levi-flat not NOT_FINITE_TYPE");
  auto zp = zero_point_at(*hq, 3, {GQ(0), GQ(1), GQ(0)});
  o.require(zp && zp->rank == 2, "no zero point at (0,1,0)");
  if (o.ok)
    o.detail << ms.size() << " manifolds, k <= 4; minor " << ft.value.str() << " at (1,0); v^3(0,1,0) = 0 with rank 2";
}

void c6(Outcome& o) {
  int checks = 0;
  for (const char* name : {"id", "scale_1i", "scale_2"}) {
    FormalMap H = map_of(name);
    BasicIdentity bi = basic_identity(H, origin(H), 0);
    auto r = bi.residual(H, {0, 0});
    o.require(zero(r) && min_order(r) >= 6, std::string(name) + ": nonzero residual");
  }
  {
    FormalMap a = map_of("id"), b = map_of("hprime");
    std::string ca = basic_identity(a, origin(a), 0).certificate().dump();
    std::string cb = basic_identity(b, origin(b), 0).certificate().dump();
    o.require(ca == cb, "certificates differ for equal k0-jets");
  }
  for (const char* name : {"id", "scale_1i", "scale_2", "hprime"}) {
    FormalMap H = map_of(name);
    BasicIdentity bi = basic_identity(H, origin(H), 4);
    UpsilonRecursion ur(bi);
    for (int k = 0; k <= 2; ++k)
      for (const auto& alpha : multiindices(H.source().N(), 2)) {
        UpsilonCheck u = upsilon_check(ur, H, k, alpha);
        o.require(u.ok, std::string(name) + ": Upsilon k=" + std::to_string(k) + " alpha=" + multi_str(alpha));
        ++checks;
      }
  }
  if (o.ok) o.detail << "residuals zero; id/hprime certificates equal; " << checks << " Upsilon checks exact";
}

void c7(Outcome& o) {
  FormalMap H = map_of("eps");
  BasicIdentity bi = basic_identity_1deg(H);
  const OneDegData& od = *bi.one_deg_data();
  const bool pm1 = od.D == GQ(1) || od.D == GQ(-1);
  o.require(pm1 && (od.D == od.gw || od.D == -od.gw), "D != +-g_w(0)");
  o.require(od.cb_matches_levi && od.D_is_pm_cb, "Cauchy-Binet cross-check failed");
  auto r = bi.residual(H, {0, 0});
  o.require(zero(r) && min_order(r) >= 6, "1-degenerate residual not zero to order 6");
  int levi = 0;
  for (const auto& name : kMaps) {
    FormalMap M = map_of(name);
    if (M.source().d() != 1 || M.target().d() != 1) continue;
    o.require(levi_pullback_check(M).holds, name + ": Levi pullback fails");
    ++levi;
  }
  if (o.ok) o.detail << "D = " << od.D.str() << ", g_w(0) = " << od.gw.str() << "; Levi pullback on " << levi
                     << " fixtures; residual zero to order " << min_order(r);
}

void c8(Outcome& o) {
  FormalMap id = map_of("id");
  JetDetermination a = jet_determination_check(id, id, JetDetermination::nondeg);
  o.require(a.determined && a.equal_through == id.order(), "id/id not determined through order t");
  FormalMap e = map_of("eps");
  JetDetermination b = jet_determination_check(e, e, JetDetermination::one_deg);
  o.require(b.determined && b.equal_through == e.order(), "eps/eps not determined through order t");
  JetDetermination c = jet_determination_check(map_of("scale_2"), map_of("scale_1i"), JetDetermination::nondeg);
  o.require(c.beta.has_value() && c.first_order == 1, "scaling pair: first difference not at order 1");
  if (o.ok) o.detail << "equal pairs zero through order " << id.order() << "; scaling pair differs at order 1 ("
                     << c.value1.str() << " vs " << c.value2.str() << ")";
}

void c9(Outcome& o) {
  int total = 0;
  for (const auto& law : test::laws()) {
    int bad = law.run(9, 1000);
    o.require(bad == 0, law.name + ": " + std::to_string(bad) + " failures");
    total += 1000;
  }
  if (o.ok) o.detail << test::laws().size() << " laws x 1000 inputs, 0 failures";
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<void(Outcome&)>>> criteria = {
      {"invariant computation", c1}, {"invariance suite", c2},   {"vector fields vs s", c3},
      {"bound suite", c4},           {"Segre suite", c5},        {"basic identity", c6},
      {"1-degenerate suite", c7},    {"jet determination", c8},  {"kernel laws", c9},
  };
  int failed = 0;
  for (size_t k = 0; k < criteria.size(); ++k) {
    Outcome o;
    auto t0 = std::chrono::steady_clock::now();
    try {
      criteria[k].second(o);
    } catch (const std::exception& e) {
      o.ok = false;
      o.detail.str("");
      o.detail << "exception: " << e.what();
    }
    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    failed += !o.ok;
    std::printf("%s %zu %s: %s [%.2fs]\n", o.ok ? "PASS" : "FAIL", k + 1, criteria[k].first.c_str(),
                o.detail.str().c_str(), secs);
  }
  std::printf("%zu/%zu criteria passed\n", criteria.size() - failed, criteria.size());
  return failed ? 1 : 0;
}
