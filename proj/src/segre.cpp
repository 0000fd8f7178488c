#include "segre.hpp"

#include <algorithm>

namespace crdeg {

VarsPtr segre_vars(int n, int blocks) {
  std::vector<Block> bl;
  for (int b = 0; b < blocks; ++b) {
    if (b == 0) bl.push_back({"z", n});
    else if (b % 2) bl.push_back({"chi" + std::to_string((b + 1) / 2), n});
    else bl.push_back({"z" + std::to_string(b / 2), n});
  }
  return make_vars(bl);
}

SegreBuilder::SegreBuilder(const Manifold& M, int blocks) : M_(M), blocks_(blocks), vars_(segre_vars(M.n(), blocks)) {}

namespace {

std::vector<Series> block_vars(const VarsPtr& V, int n, int a, int t) {
  std::vector<Series> out;
  for (int i = 0; i < n; ++i) out.push_back(Series::variable(V, t, a * n + i));
  return out;
}

}  // namespace

const std::vector<Series>& SegreBuilder::W(int k, int a) {
  auto key = std::make_pair(k, a);
  if (auto it = W_.find(key); it != W_.end()) return it->second;
  if (k < 1 || a + k > blocks_) throw Error(Errc::invalid_input, "Segre level out of range for the context");
  const int n = M_.n(), d = M_.d(), t = M_.order();
  std::vector<Series> out;
  if (k == 1) {
    out.assign(d, Series(vars_, t));
  } else {
    std::vector<Series> img = block_vars(vars_, n, a, t);
    for (int j = 0; j < d; ++j) img.push_back(Series(vars_, t));
    for (auto& s : block_vars(vars_, n, a + 1, t)) img.push_back(s);
    for (const auto& s : Wbar(k - 1, a + 1)) img.push_back(s);
    for (const auto& q : M_.Q()) out.push_back(compose(q, img, vars_));
  }
  return W_[key] = std::move(out);
}

const std::vector<Series>& SegreBuilder::Wbar(int k, int a) {
  auto key = std::make_pair(k, a);
  if (auto it = Wb_.find(key); it != Wb_.end()) return it->second;
  if (k < 1 || a + k > blocks_) throw Error(Errc::invalid_input, "Segre level out of range for the context");
  const int n = M_.n(), d = M_.d(), t = M_.order();
  std::vector<Series> out;
  if (k == 1) {
    out.assign(d, Series(vars_, t));
  } else {
    std::vector<Series> img = block_vars(vars_, n, a + 1, t);
    for (const auto& s : W(k - 1, a + 1)) img.push_back(s);
    for (auto& s : block_vars(vars_, n, a, t)) img.push_back(s);
    for (const auto& r : M_.R()) out.push_back(compose(r, img, vars_));
  }
  return Wb_[key] = std::move(out);
}

std::vector<Series> SegreBuilder::v(int k, int a) {
  const int t = M_.order();
  if (k == 0) return std::vector<Series>(M_.N(), Series(vars_, t));
  std::vector<Series> out = block_vars(vars_, M_.n(), a, t);
  for (const auto& s : W(k, a)) out.push_back(s);
  return out;
}

std::vector<Series> SegreBuilder::vbar(int k, int a) {
  const int t = M_.order();
  if (k == 0) return std::vector<Series>(M_.N(), Series(vars_, t));
  std::vector<Series> out = block_vars(vars_, M_.n(), a, t);
  for (const auto& s : Wbar(k, a)) out.push_back(s);
  return out;
}

SegreMap segre_map(const Manifold& M, int k) {
  if (k < 0) throw Error(Errc::invalid_input, "Segre level must be >= 0");
  SegreBuilder b(M, std::max(k, 1));
  SegreMap s;
  s.level = k;
  s.vars = b.vars();
  s.v = b.v(k, 0);
  s.vbar = b.vbar(k, 0);
  s.order = min_order(s.v);
  return s;
}

SegreVanishing segre_vanishing(const Manifold& M, int k) {
  if (k < 0) throw Error(Errc::invalid_input, "Segre level must be >= 0");
  SegreBuilder b(M, k + 1);
  SegreVanishing out;
  out.level = k;
  out.order = M.order();
  auto check = [&](std::vector<Series> Z, const std::vector<Series>& zeta) {
    for (const auto& s : zeta) Z.push_back(s);
    for (int j = 0; j < M.d(); ++j) {
      Series r = compose(M.rho(j), Z, b.vars());
      out.order = std::min(out.order, r.order());
      out.ok = out.ok && r.is_zero();
      out.residuals.push_back(std::move(r));
    }
  };
  check(b.v(k + 1, 0), b.vbar(k, 1));
  if (k >= 1) check(b.v(k - 1, 2), b.vbar(k, 1));
  return out;
}

std::vector<std::vector<Series>> segre_jacobian(const SegreMap& s) {
  std::vector<std::vector<Series>> J;
  for (const auto& c : s.v) {
    std::vector<Series> row;
    for (int v = 0; v < s.vars->size(); ++v) row.push_back(differentiate(c, v));
    J.push_back(std::move(row));
  }
  return J;
}

namespace {

// candidate points: nonzero {0,1} vectors in lex order, then seeded random ones
class PointStream {
 public:
  PointStream(int dim, int trials, uint64_t seed) : dim_(dim), trials_(trials), rng_(seed) {}
  bool next(std::vector<GQ>& p) {
    if (bits_ < cap()) {
      ++bits_;
      p.assign(dim_, GQ());
      for (int i = 0; i < dim_; ++i)
        if ((bits_ >> (dim_ - 1 - i)) & 1) p[i] = GQ(1);
      return true;
    }
    if (drawn_ >= trials_) return false;
    ++drawn_;
    p.clear();
    for (int i = 0; i < dim_; ++i) p.push_back(random_small(rng_));
    return true;
  }

 private:
  uint64_t cap() const { return dim_ >= 6 ? 63 : (uint64_t{1} << dim_) - 1; }
  int dim_, trials_;
  std::mt19937_64 rng_;
  uint64_t bits_ = 0;
  int drawn_ = 0;
};

bool next_combination(std::vector<int>& c, int n) {
  const int k = static_cast<int>(c.size());
  int i = k - 1;
  while (i >= 0 && c[i] == n - k + i) --i;
  if (i < 0) return false;
  ++c[i];
  for (int j = i + 1; j < k; ++j) c[j] = c[j - 1] + 1;
  return true;
}

}  // namespace

std::optional<ZeroPoint> zero_point_at(const Manifold& M, int level, const std::vector<GQ>& p) {
  SegreMap s = segre_map(M, level);
  if (static_cast<int>(p.size()) != s.vars->size()) throw Error(Errc::invalid_input, "point has the wrong dimension");
  for (const auto& c : s.v)
    if (!evaluate(c, p).value.is_zero()) return std::nullopt;
  ZeroPoint z;
  z.level = level;
  z.point = p;
  for (const auto& row : segre_jacobian(s)) {
    Vec r;
    for (const auto& e : row) r.push_back(evaluate(e, p).value);
    z.jacobian.push_back(std::move(r));
  }
  z.rank = rank(z.jacobian);
  return z;
}

std::optional<ZeroPoint> zero_point_search(const Manifold& M, int level, int trials, uint64_t seed) {
  if (!M.polynomial()) throw Error(Errc::precision, "zero-point search needs a polynomial manifold");
  SegreMap s = segre_map(M, level);
  auto J = segre_jacobian(s);
  PointStream ps(s.vars->size(), trials, seed);
  std::vector<GQ> p;
  while (ps.next(p)) {
    bool zero = true;
    for (const auto& c : s.v) zero = zero && evaluate(c, p).value.is_zero();
    if (!zero) continue;
    ZeroPoint z;
    z.level = level;
    z.point = p;
    for (const auto& row : J) {
      Vec r;
      for (const auto& e : row) r.push_back(evaluate(e, p).value);
      z.jacobian.push_back(std::move(r));
    }
    z.rank = rank(z.jacobian);
    if (z.rank == M.N()) return z;
  }
  return std::nullopt;
}

FiniteType finite_type_test(const Manifold& M, const FiniteTypeOptions& opt) {
  if (opt.levels < 1) throw Error(Errc::invalid_input, "levels must be >= 1");
  if (opt.trials < 1) throw Error(Errc::invalid_input, "trials must be >= 1");
  const int N = M.N();
  FiniteType out;
  out.order = M.order();
  bool all_exact_zero = true;
  for (int k = 1; k <= opt.levels; ++k) {
    SegreMap s = segre_map(M, k);
    const int dim = s.vars->size();
    if (dim < N) {
      out.levels_zero.push_back(k);
      continue;
    }
    auto J = segre_jacobian(s);
    std::vector<int> cols(N);
    for (int i = 0; i < N; ++i) cols[i] = i;
    bool level_exact = true;
    do {
      std::vector<std::vector<Series>> m;
      for (const auto& row : J) {
        std::vector<Series> r;
        for (int c : cols) r.push_back(row[c]);
        m.push_back(std::move(r));
      }
      Series mn = det(m);
      out.order = std::min(out.order, mn.order());
      if (mn.is_zero()) {
        level_exact = level_exact && mn.exact();
        continue;
      }
      out.verdict = FiniteType::finite_type;
      out.k = k;
      out.columns = cols;
      out.minor = mn;
      if (mn.exact()) {
        PointStream ps(dim, opt.trials, opt.seed);
        std::vector<GQ> p;
        while (ps.next(p)) {
          GQ v = evaluate(mn, p).value;
          if (!v.is_zero()) {
            out.point = p;
            out.value = v;
            break;
          }
        }
        out.note = out.point ? "nonzero minor at an exact point" : "nonzero minor polynomial; no point found within trials";
      } else {
        out.coefficient = mn.terms().begin()->first;
        out.value = mn.terms().begin()->second;
        out.note = "truncated input: nonzero minor coefficient below the working order";
      }
      if (opt.zero_point && M.polynomial()) out.zero_point = zero_point_search(M, 2 * k, opt.trials, opt.seed);
      return out;
    } while (next_combination(cols, dim));
    if (level_exact) out.levels_zero.push_back(k);
    all_exact_zero = all_exact_zero && level_exact;
  }
  if (all_exact_zero && opt.levels >= M.d() + 1) {
    out.verdict = FiniteType::not_finite_type;
    out.k = opt.levels;
    out.note = "all N x N minors vanish identically for every level up to " + std::to_string(opt.levels);
  } else {
    out.verdict = FiniteType::inconclusive;
    out.note = all_exact_zero ? "levels < d + 1" : "minors vanish only to the working order";
  }
  return out;
}

}  // namespace crdeg
