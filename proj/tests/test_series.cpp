#include <doctest.h>

#include "laws.hpp"

using namespace crdeg;
using crdeg::test::i;

namespace {

VarsPtr zw() { return make_vars({{"z", 1}, {"w", 1}}); }

}  // namespace

TEST_CASE("gaussian rationals are canonical") {
  GQ a = GQ::parse("2/4", "-3/6");
  CHECK(a == GQ(mpq_class(1, 2), mpq_class(-1, 2)));
  CHECK(a * a.inv() == GQ(1));
  CHECK(i * i == GQ(-1));
  CHECK_THROWS_AS(GQ().inv(), Error);
}

TEST_CASE("arith examples") {
  VarsPtr V = zw();
  for (int t : {1, 2}) {
    Series z = Series::variable(V, t, 0), w = Series::variable(V, t, 1);
    Series p = (z + w) * (z - w);
    if (t == 2) {
      CHECK(p == z * z - w * w);
      CHECK(p.str() == "z^2 - w^2");
    } else {
      CHECK(p.is_zero());
      CHECK(p.order() == 1);
      CHECK_FALSE(p.exact());
    }
  }
  Series z = Series::variable(V, 2, 0);
  Series one = Series::constant(V, 2, GQ(1));
  CHECK((one + z.scaled(i)) * (one - z.scaled(i)) == one + z * z);
}

TEST_CASE("arith rejects mismatched contexts and orders") {
  VarsPtr V = zw();
  Series a = Series::variable(V, 2, 0), b = Series::variable(V, 3, 0);
  CHECK_THROWS_AS(a + b, Error);
  try {
    (void)(a * b);
  } catch (const Error& e) {
    CHECK(e.code() == Errc::order_mismatch);
  }
  Series c = Series::variable(make_vars({{"z", 1}, {"v", 1}}), 2, 0);
  try {
    (void)(a + c);
    FAIL("expected a context mismatch");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::context_mismatch);
  }
  CHECK(add_lo(a, b).order() == 2);
}

TEST_CASE("differentiate examples") {
  VarsPtr V = zw();
  Series z = Series::variable(V, 4, 0), w = Series::variable(V, 4, 1);
  Series d = differentiate(z * z * w, 0);
  CHECK(d == (z * w).scaled(GQ(2)).truncated(3));
  CHECK(d.order() == 3);

  VarsPtr B = base_vars(1, 1);
  Series zz = Series::variable(B, 3, 0), chi = Series::variable(B, 3, 2), tau = Series::variable(B, 3, 3);
  Series Q = tau + (zz * chi).scaled(GQ(2) * i);
  CHECK(differentiate(Q, 3) == Series::constant(B, 2, GQ(1)));
  Series m = (zz * chi).scaled(GQ(2) * i);
  Series a = differentiate(differentiate(m, 2), 0), b = differentiate(differentiate(m, 0), 2);
  CHECK(a == b);
  CHECK(a == Series::constant(B, 1, GQ(2) * i));

  try {
    (void)differentiate(Series::constant(V, 0, GQ(1)), 0);
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::order_exhausted);
  }
}

TEST_CASE("substitute examples") {
  const int t = 4;
  VarsPtr B = base_vars(1, 1);
  Series z = Series::variable(B, t, 0), w = Series::variable(B, t, 1), chi = Series::variable(B, t, 2),
         tau = Series::variable(B, t, 3);
  Series rho = w - tau - (z * chi).scaled(GQ(2) * i);
  CHECK(substitute(rho, {{3, w - (z * chi).scaled(GQ(2) * i)}}).is_zero());

  VarsPtr Z = make_vars({{"z", 1}});
  Series x = Series::variable(Z, 3, 0);
  CHECK(substitute(x * x, {{0, x + x * x}}) == x * x + (x * x * x).scaled(GQ(2)));

  // phi(z, w, 0, w)
  Series phi = chi * tau + tau * tau + z * w;
  Series r = substitute(phi, {{2, Series(B, t)}, {3, w}});
  CHECK(r == w * w + z * w);

  // constants only go into exact series
  Series trunc = z * chi;
  trunc.set_exact(false);
  CHECK_THROWS_AS(substitute(trunc, {{0, Series::constant(B, t, GQ(1)) + z}}), Error);
  CHECK(substitute(z * chi, {{0, Series::constant(B, t, GQ(1)) + z}}) == chi + z * chi);
}

TEST_CASE("implicit_solve examples") {
  const int t = 8;
  VarsPtr V = make_vars({{"Y", 1}, {"X", 1}});
  Series Y = Series::variable(V, t, 0), X = Series::variable(V, t, 1);
  auto psi = implicit_solve({X - Y - Y * X}, 1);
  REQUIRE(psi.size() == 1);
  CHECK(psi[0].order() == t);
  // the oracle gives 1 for every coefficient of Y/(1-Y) through degree 8
  for (int k = 1; k <= t; ++k) {
    Mono m(1);
    m.set(0, k);
    CHECK(psi[0].coeff(m) == GQ(1));
  }
  CHECK(psi[0].size() == static_cast<size_t>(t));

  auto id = implicit_solve({X - Y}, 1);
  CHECK(id[0] == Series::variable(id[0].vars(), t, 0));

  VarsPtr W = make_vars({{"z", 1}, {"chi", 1}, {"tau", 1}, {"X", 2}});
  Series z = Series::variable(W, t, 0), chi = Series::variable(W, t, 1), tau = Series::variable(W, t, 2),
         X1 = Series::variable(W, t, 3), X2 = Series::variable(W, t, 4);
  auto sol = implicit_solve({X2 - tau - (X1 * chi).scaled(GQ(2) * i), (z - X1).scaled(GQ(2) * i)}, 2);
  VarsPtr P = sol[0].vars();
  Series pz = Series::variable(P, t, 0), pchi = Series::variable(P, t, 1), ptau = Series::variable(P, t, 2);
  CHECK(sol[0] == pz);
  CHECK(sol[1] == ptau + (pz * pchi).scaled(GQ(2) * i));

  try {
    (void)implicit_solve({Y * X + Y}, 1);
    FAIL("expected singular");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::singular);
  }
  CHECK_THROWS_AS(implicit_solve({X - Series::constant(V, t, GQ(1))}, 1), Error);
}

TEST_CASE("evaluate examples") {
  VarsPtr V = zw();
  Series z = Series::variable(V, 4, 0), w = Series::variable(V, 4, 1);
  EvalResult r = evaluate(z * z * w, {GQ(2), GQ(3)});
  CHECK(r.value == GQ(12));
  CHECK(r.exact);
  VarsPtr B = base_vars(1, 1);
  Series s = (Series::variable(B, 2, 0) * Series::variable(B, 2, 2)).scaled(GQ(2) * i);
  CHECK(evaluate(s, {GQ(1), GQ(0), GQ(1), GQ(0)}).value == GQ(2) * i);
  // the Segre minor 2iz at z = 1
  Series minor = Series::variable(V, 3, 0, GQ(2) * i);
  CHECK(evaluate(minor, {GQ(1), GQ(0)}).value == GQ(2) * i);
  Series tr = z;
  tr.set_exact(false);
  CHECK_FALSE(evaluate(tr, {GQ(1), GQ(0)}).exact);
  CHECK_THROWS_AS(evaluate(z, {GQ(1)}), Error);
}

TEST_CASE("series invariants") {
  VarsPtr V = zw();
  Series s(V, 2);
  Mono m(2);
  m.set(0, 3);
  s.add_term(m, GQ(1));
  CHECK(s.is_zero());
  CHECK_FALSE(s.exact());
  Mono one(2);
  one.set(1, 1);
  s.add_term(one, GQ(1));
  s.add_term(one, GQ(-1));
  CHECK(s.size() == 0);
}

TEST_CASE("series laws on 1000 random inputs each") {
  for (const auto& law : crdeg::test::laws()) {
    CAPTURE(law.name);
    CHECK(law.run(1, 1000) == 0);
  }
}
