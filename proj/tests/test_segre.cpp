#include <doctest.h>

#include "support.hpp"

using namespace crdeg;
using crdeg::test::i;

namespace {

Series sv(const SegreMap& s, int v) { return Series::variable(s.vars, s.order, v); }

ManifoldPtr leviflat(int t) {
  VarsPtr B = base_vars(1, 1);
  return std::make_shared<const Manifold>(Manifold::validate(1, 1, {Series::variable(B, t, 3)}));
}

}  // namespace

TEST_CASE("segre maps of the hyperquadric") {
  auto M = test::hyperquadric(8);
  SegreMap s1 = segre_map(*M, 1);
  CHECK(s1.v[0] == sv(s1, 0));
  CHECK(s1.v[1].is_zero());

  SegreMap s2 = segre_map(*M, 2);
  CHECK(s2.v[0] == sv(s2, 0));
  CHECK(s2.v[1] == (sv(s2, 0) * sv(s2, 1)).scaled(GQ(2) * i).truncated(s2.v[1].order()));

  SegreMap s3 = segre_map(*M, 3);
  Series z = sv(s3, 0), x1 = sv(s3, 1), z1 = sv(s3, 2);
  CHECK(s3.v[1] == (x1 * (z - z1)).scaled(GQ(2) * i).truncated(s3.v[1].order()));
}

TEST_CASE("segre maps of the Levi-flat model stay flat") {
  auto M = leviflat(8);
  for (int k = 1; k <= 4; ++k) {
    SegreMap s = segre_map(*M, k);
    CHECK(s.v[0] == sv(s, 0));
    CHECK(s.v[1].is_zero());
  }
}

TEST_CASE("segre vanishing on the shipped manifolds") {
  std::vector<ManifoldPtr> ms = {test::hyperquadric(8), leviflat(8)};
  for (std::string name : {"mixed", "eps", "bh_z2"}) {
    auto p = test::fixture(name);
    ms.push_back(p.source);
    ms.push_back(p.target);
  }
  for (const auto& M : ms) {
    for (int k = 0; k <= 4; ++k) {
      CAPTURE(k);
      SegreVanishing r = segre_vanishing(*M, k);
      CHECK(r.ok);
      for (const auto& s : r.residuals) CHECK(s.is_zero());
    }
  }
}

TEST_CASE("segre jacobian") {
  auto M = test::hyperquadric(8);
  SegreMap s2 = segre_map(*M, 2);
  auto J = segre_jacobian(s2);
  REQUIRE(J.size() == 2);
  Series z = sv(s2, 0), x1 = sv(s2, 1);
  const int t = J[1][0].order();
  CHECK(J[0][0] == Series::constant(s2.vars, J[0][0].order(), GQ(1)));
  CHECK(J[0][1].is_zero());
  CHECK(J[1][0] == x1.scaled(GQ(2) * i).truncated(t));
  CHECK(J[1][1] == z.scaled(GQ(2) * i).truncated(t));
}

TEST_CASE("finite type test") {
  auto M = test::hyperquadric(8);
  FiniteType ft = finite_type_test(*M, {});
  CHECK(ft.verdict == FiniteType::finite_type);
  CHECK(ft.k == 2);
  REQUIRE(ft.point.has_value());
  CHECK(*ft.point == std::vector<GQ>{GQ(1), GQ(0)});
  CHECK(ft.value == GQ(2) * i);
  CHECK(ft.levels_zero == std::vector<int>{1});

  FiniteType flat = finite_type_test(*leviflat(8), {});
  CHECK(flat.verdict == FiniteType::not_finite_type);

  FiniteTypeOptions bad;
  bad.trials = 0;
  CHECK_THROWS_AS(finite_type_test(*M, bad), Error);
  bad = {};
  bad.levels = 0;
  CHECK_THROWS_AS(finite_type_test(*M, bad), Error);

  // once finite type at k, also at every higher level
  for (int L = 2; L <= 4; ++L) {
    FiniteTypeOptions o;
    o.levels = L;
    o.zero_point = false;
    FiniteType f = finite_type_test(*M, o);
    CHECK(f.verdict == FiniteType::finite_type);
    for (int k = f.k; k <= L; ++k) {
      SegreMap s = segre_map(*M, k);
      auto J = segre_jacobian(s);
      // the same point, padded with zeros, keeps the minor nonzero
      std::vector<GQ> p(s.vars->size());
      p[0] = GQ(1);
      Mat Jp(J.size(), Vec(J[0].size()));
      for (size_t r = 0; r < J.size(); ++r)
        for (size_t c = 0; c < J[r].size(); ++c) Jp[r][c] = evaluate(J[r][c], p).value;
      CHECK(rank(Jp) == 2);
    }
  }
}

TEST_CASE("zero point clause") {
  auto M = test::hyperquadric(8);
  auto z3 = zero_point_at(*M, 3, {GQ(0), GQ(1), GQ(0)});
  REQUIRE(z3.has_value());
  CHECK(z3->rank == 2);
  CHECK(z3->jacobian == Mat{{GQ(1), GQ(0), GQ(0)}, {GQ(2) * i, GQ(0), GQ(-2) * i}});
  CHECK_FALSE(zero_point_at(*M, 3, {GQ(1), GQ(1), GQ(0)}).has_value());

  FiniteType ft = finite_type_test(*M, {});
  REQUIRE(ft.zero_point.has_value());
  CHECK(ft.zero_point->level == 4);
  CHECK(ft.zero_point->point == std::vector<GQ>{GQ(0), GQ(0), GQ(0), GQ(1)});
  CHECK(ft.zero_point->rank == 2);
}
