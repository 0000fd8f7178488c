#include <doctest.h>

#include "support.hpp"

using namespace crdeg;
using crdeg::test::i;

namespace {

struct HQ {
  int t;
  ManifoldPtr M;
  VarsPtr B;
  Series z, w, chi, tau;
  explicit HQ(int t_) : t(t_), M(test::hyperquadric(t_)), B(M->vars()) {
    z = M->var(0, t), w = M->var(1, t), chi = M->var(2, t), tau = M->var(3, t);
  }
};

// random normal-form Q for n = 1, d = 1: tau + terms divisible by z*chi
Manifold random_normal(std::mt19937_64& rng, int t) {
  VarsPtr B = base_vars(1, 1);
  Series zc = Series::variable(B, t, 0) * Series::variable(B, t, 2);
  Series g = test::random_series(rng, B, t - 2, 3);
  // drop w from g
  g = substitute(g, {{1, Series(B, t - 2)}});
  g.set_exact(true);
  Series Q = Series::variable(B, t, 3) + zc * g.at(t);
  return Manifold::validate(1, 1, {Q});
}

}  // namespace

TEST_CASE("validate_manifold examples") {
  HQ h(6);
  CHECK(h.M->real() == std::optional<bool>(true));
  CHECK(h.M->ideal_reduce(h.tau) == h.M->R()[0]);

  VarsPtr B = base_vars(1, 1);
  Series z = Series::variable(B, 6, 0), chi = Series::variable(B, 6, 2), tau = Series::variable(B, 6, 3);
  try {
    (void)Manifold::validate(1, 1, {tau + z});
    FAIL("normality should fail");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::invalid_input);
    CHECK(std::string(e.what()).find("Q1") != std::string::npos);
    CHECK(std::string(e.what()).find("z") != std::string::npos);
  }
  Manifold nr = Manifold::validate(1, 1, {tau + z * chi});
  CHECK(nr.real() == std::optional<bool>(false));

  CHECK_THROWS_AS(Manifold::validate(1, 1, {Series(B, 0) + Series::variable(B, 0, 3)}), Error);
}

TEST_CASE("ideal_reduce examples") {
  HQ h(6);
  Series rho = h.w - h.tau - (h.z * h.chi).scaled(GQ(2) * i);
  CHECK(h.M->ideal_reduce(rho).is_zero());
  VarsPtr P = h.M->param_vars();
  Series expect = Series::variable(P, 6, 1) - (Series::variable(P, 6, 0) * Series::variable(P, 6, 2)).scaled(GQ(2) * i);
  CHECK(h.M->ideal_reduce(h.tau) == expect);
  CHECK(h.M->ideal_member(h.z * rho));
}

TEST_CASE("cr_derivative examples") {
  HQ h(6);
  Series d = h.M->cr_derivative(h.chi.scaled(GQ(-2) * i), {1});
  CHECK(d == Series::constant(h.B, d.order(), GQ(-2) * i));
  Series rho = h.w - h.tau - (h.z * h.chi).scaled(GQ(2) * i);
  CHECK(h.M->ideal_member(h.M->cr_derivative(rho, {1})));
  Series phi = h.z * h.tau + h.chi;
  CHECK(h.M->cr_derivative(phi, {0}) == phi);
  CHECK_THROWS_AS(h.M->cr_derivative(h.z, {7}), Error);
}

TEST_CASE("coefficient_extraction_check examples") {
  HQ h(6);
  CHECK(h.M->coefficient_extraction_check(h.tau, {1}));
  CHECK(h.M->coefficient_extraction_check(h.z * h.w + h.w * h.w, {1}));
  CHECK(h.M->coefficient_extraction_check(h.z * h.w + h.w * h.w, {3}));
  CHECK(h.M->coefficient_extraction_check(h.chi * h.tau, {2}));
  // both sides equal -4i z, as the oracle computes
  Series lhs = h.M->restrict_zw(h.M->cr_derivative(h.chi * h.tau, {2}));
  CHECK(lhs == h.z.scaled(GQ(-4) * i).truncated(lhs.order()));
}

TEST_CASE("recenter_normalize examples") {
  HQ h(6);
  Recentered r0 = recenter_normalize(*h.M, {GQ(0), GQ(0), GQ(0), GQ(0)});
  CHECK(r0.M.Q()[0] == h.M->Q()[0]);

  Recentered r = recenter_normalize(*h.M, {GQ(1), GQ(2) * i, GQ(1), GQ(0)});
  CHECK_NOTHROW(Manifold::validate(r.M.n(), r.M.d(), r.M.Q()));
  CHECK_THROWS_AS(recenter_normalize(*h.M, {GQ(1), GQ(0), GQ(1), GQ(0)}), Error);

  VarsPtr B = base_vars(1, 1);
  Manifold flat = Manifold::validate(1, 1, {Series::variable(B, 6, 3)});
  Recentered f = recenter_normalize(flat, {GQ(2), GQ(1) + i, GQ(-1), GQ(1) + i});
  CHECK(f.M.Q()[0] == flat.Q()[0]);

  Manifold trunc = h.M->truncated(5);
  Series q = trunc.Q()[0];
  q.set_exact(false);
  Manifold tm = Manifold::validate(1, 1, {q});
  CHECK_THROWS_AS(recenter_normalize(tm, {GQ(0), GQ(0), GQ(0), GQ(0)}), Error);
}

TEST_CASE("manifold properties on random normal forms") {
  std::mt19937_64 rng(7);
  for (int k = 0; k < 40; ++k) {
    Manifold M = random_normal(rng, 6);
    for (int j = 0; j < M.d(); ++j) {
      for (int c = 0; c < M.n(); ++c) CHECK(M.ideal_member(M.cr_apply(c, M.rho(j))));
      Series g = test::random_series(rng, M.vars(), 6, 4);
      CHECK(M.ideal_member(mul_lo(g, M.rho(j))));
    }
    Series phi = test::random_series(rng, M.vars(), 6, 5);
    CHECK(M.coefficient_extraction_check(phi, {1}));
    CHECK(M.coefficient_extraction_check(phi, {2}));
    // idempotent: reducing a reduced series (lifted back) changes nothing
    Series red = M.ideal_reduce(phi);
    std::vector<int> where;
    for (int v = 0; v < 3; ++v) where.push_back(v);
    CHECK(M.ideal_reduce(remap(red, M.vars(), where)) == red);
    if (M.polynomial()) {
      std::vector<GQ> p = {random_small(rng), GQ(), random_small(rng), random_small(rng)};
      p[1] = evaluate(M.Q()[0], p).value;
      Recentered r = recenter_normalize(M, p);
      CHECK_NOTHROW(Manifold::validate(r.M.n(), r.M.d(), r.M.Q()));
    }
  }
}
