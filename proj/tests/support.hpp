#pragma once

#include <random>
#include <string>

#include "commands.hpp"
#include "degeneracy.hpp"
#include "identity.hpp"

namespace crdeg::test {

inline const GQ i = GQ::I();

inline ProblemFile fixture(const std::string& name, const Overrides& ov = {}) {
  return parse_problem(std::string(CRDEG_FIXTURES) + "/" + name + ".json", ov);
}

inline FormalMap map_of(const std::string& name) { return *fixture(name).map; }

inline std::string fixture_path(const std::string& name) { return std::string(CRDEG_FIXTURES) + "/" + name + ".json"; }

inline ManifoldPtr make_quadric(int t, const std::vector<int>& signs, const GQ& scale = GQ(2) * GQ::I()) {
  const int n = static_cast<int>(signs.size());
  VarsPtr B = base_vars(n, 1);
  Series Q = Series::variable(B, t, 2 * n + 1);
  for (int j = 0; j < n; ++j)
    Q += (Series::variable(B, t, j) * Series::variable(B, t, n + 1 + j)).scaled(scale * GQ(signs[j]));
  return std::make_shared<const Manifold>(Manifold::validate(n, 1, {Q}));
}

inline ManifoldPtr hyperquadric(int t) { return make_quadric(t, {1}); }

// sparse random series: up to `terms` terms with small Gaussian rational coefficients
inline Series random_series(std::mt19937_64& rng, const VarsPtr& V, int order, int terms, int min_deg = 0) {
  Series s(V, order);
  std::uniform_int_distribution<int> nt(0, terms), var(0, V->size() - 1), deg(min_deg, std::max(min_deg, order));
  const int k = nt(rng);
  for (int a = 0; a < k; ++a) {
    Mono m(V->size());
    const int d = deg(rng);
    for (int e = 0; e < d; ++e) {
      int v = var(rng);
      m.set(v, m[v] + 1);
    }
    s.add_term(m, random_small(rng));
  }
  return s;
}

inline Mat random_invertible(std::mt19937_64& rng, int n) {
  for (;;) {
    Mat A(n, Vec(n));
    for (auto& r : A)
      for (auto& x : r) x = random_small(rng);
    if (!det(A).is_zero()) return A;
  }
}

// target Q'(Linv z', conj(Linv) chi', tau') and the map L*f
inline FormalMap linear_target_change(const FormalMap& H, const Mat& L) {
  const Manifold& T = H.target();
  const int np = T.n(), dp = T.d(), t = T.order();
  Mat Li = inverse(L);
  VarsPtr B = T.vars();
  std::vector<Series> img;
  for (int v = 0; v < B->size(); ++v) img.push_back(Series::variable(B, t, v));
  for (int a = 0; a < np; ++a) {
    Series zs(B, t), cs(B, t);
    for (int b = 0; b < np; ++b) {
      zs += Series::variable(B, t, T.z(b), Li[a][b]);
      cs += Series::variable(B, t, T.chi(b), Li[a][b].conj());
    }
    img[T.z(a)] = zs;
    img[T.chi(a)] = cs;
  }
  std::vector<Series> Q;
  for (int j = 0; j < dp; ++j) Q.push_back(compose(T.Q()[j], img, B));
  auto tgt = std::make_shared<const Manifold>(Manifold::validate(np, dp, Q));
  std::vector<Series> comps = H.H();
  for (int a = 0; a < np; ++a) {
    Series s(comps[0].vars(), H.order());
    for (int b = 0; b < np; ++b) s += H.H()[b].scaled(L[a][b]);
    comps[a] = s;
  }
  return FormalMap(H.source_ptr(), tgt, comps);
}

}  // namespace crdeg::test
