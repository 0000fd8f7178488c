#include "series.hpp"

#include <algorithm>
#include <sstream>

#include "linalg.hpp"

namespace crdeg {

Vars::Vars(std::vector<Block> blocks) : blocks_(std::move(blocks)) {
  for (size_t b = 0; b < blocks_.size(); ++b) {
    const auto& bl = blocks_[b];
    if (bl.arity < 0) throw Error(Errc::invalid_input, "negative arity for block " + bl.name);
    for (size_t c = 0; c < b; ++c)
      if (blocks_[c].name == bl.name) throw Error(Errc::invalid_input, "duplicate block " + bl.name);
    for (int i = 0; i < bl.arity; ++i)
      names_.push_back(bl.arity == 1 ? bl.name : bl.name + std::to_string(i + 1));
    size_ += bl.arity;
  }
}

bool Vars::has(const std::string& block) const {
  for (const auto& b : blocks_)
    if (b.name == block) return true;
  return false;
}

int Vars::offset(const std::string& block) const {
  int off = 0;
  for (const auto& b : blocks_) {
    if (b.name == block) return off;
    off += b.arity;
  }
  throw Error(Errc::context_mismatch, "no variable block " + block);
}

int Vars::arity(const std::string& block) const {
  for (const auto& b : blocks_)
    if (b.name == block) return b.arity;
  throw Error(Errc::context_mismatch, "no variable block " + block);
}

int Vars::var(const std::string& block, int i) const {
  if (i < 0 || i >= arity(block)) throw Error(Errc::context_mismatch, "index out of range in block " + block);
  return offset(block) + i;
}

VarsPtr make_vars(std::vector<Block> blocks) { return std::make_shared<const Vars>(std::move(blocks)); }

bool same_vars(const VarsPtr& a, const VarsPtr& b) { return a == b || (a && b && *a == *b); }

VarsPtr vars_prefix(const VarsPtr& v, int nvars) {
  std::vector<Block> bl;
  int acc = 0;
  for (const auto& b : v->blocks()) {
    if (acc == nvars) break;
    bl.push_back(b);
    acc += b.arity;
  }
  if (acc != nvars) throw Error(Errc::context_mismatch, "prefix does not end on a block boundary");
  return make_vars(std::move(bl));
}

void Mono::set(int i, int v) {
  int d = e_[0] - e_[i + 1] + v;
  if (v < 0 || v > 250 || d > 250) throw Error(Errc::internal, "exponent out of range");
  e_[i + 1] = static_cast<uint8_t>(v);
  e_[0] = static_cast<uint8_t>(d);
}

Mono operator*(const Mono& a, const Mono& b) {
  Mono r = a;
  if (a.deg() + b.deg() > 250) throw Error(Errc::internal, "exponent out of range");
  for (size_t i = 0; i < r.e_.size(); ++i) r.e_[i] = static_cast<uint8_t>(r.e_[i] + b.e_[i]);
  return r;
}

Series::Series(VarsPtr vars, int order, bool exact) : vars_(std::move(vars)), order_(order), exact_(exact) {
  if (order_ < 0) throw Error(Errc::order_exhausted, "negative truncation order");
}

Series Series::constant(VarsPtr vars, int order, const GQ& c) {
  Series s(vars, order);
  if (!c.is_zero()) s.terms_.emplace(Mono(vars->size()), c);
  return s;
}

Series Series::variable(VarsPtr vars, int order, int v, const GQ& c) {
  Mono m(vars->size());
  m.set(v, 1);
  return monomial(vars, order, m, c);
}

Series Series::monomial(VarsPtr vars, int order, const Mono& m, const GQ& c) {
  Series s(vars, order);
  s.add_term(m, c);
  return s;
}

Series Series::from_accum(VarsPtr vars, int order, bool exact, Accum&& acc) {
  Series s(std::move(vars), order, exact);
  for (auto& [m, c] : acc)
    if (!c.is_zero()) s.terms_.emplace(m, std::move(c));
  return s;
}

GQ Series::coeff(const Mono& m) const {
  auto it = terms_.find(m);
  return it == terms_.end() ? GQ(0) : it->second;
}

GQ Series::constant_term() const {
  if (terms_.empty()) return GQ(0);
  const auto& [m, c] = *terms_.begin();
  return m.deg() == 0 ? c : GQ(0);
}

int Series::valuation() const { return terms_.empty() ? order_ + 1 : terms_.begin()->first.deg(); }

int Series::max_degree() const { return terms_.empty() ? -1 : terms_.rbegin()->first.deg(); }

void Series::add_term(const Mono& m, const GQ& c) {
  if (c.is_zero()) return;
  if (m.nvars() != vars_->size()) throw Error(Errc::context_mismatch, "monomial length does not match context");
  if (m.deg() > order_) {
    exact_ = false;
    return;
  }
  auto [it, ins] = terms_.emplace(m, c);
  if (!ins) {
    it->second += c;
    if (it->second.is_zero()) terms_.erase(it);
  }
}

Series Series::truncated(int t) const {
  if (t >= order_) return *this;
  Series r(vars_, t, exact_);
  for (const auto& [m, c] : terms_) {
    if (m.deg() > t) {
      r.exact_ = false;
      break;
    }
    r.terms_.emplace_hint(r.terms_.end(), m, c);
  }
  return r;
}

Series Series::at(int t) const {
  if (t <= order_) return truncated(t);
  if (!exact_) throw Error(Errc::precision, "cannot raise the order of a truncated series");
  Series r = *this;
  r.order_ = t;
  return r;
}

Series Series::scaled(const GQ& c) const {
  Series r(vars_, order_, exact_);
  if (c.is_zero()) return r;
  for (const auto& [m, x] : terms_) r.terms_.emplace_hint(r.terms_.end(), m, x * c);
  return r;
}

Series Series::conj() const {
  Series r(vars_, order_, exact_);
  for (const auto& [m, x] : terms_) r.terms_.emplace_hint(r.terms_.end(), m, x.conj());
  return r;
}

static void check_compatible(const Series& a, const Series& b) {
  if (!same_vars(a.vars(), b.vars())) throw Error(Errc::context_mismatch, "variable context mismatch");
  if (a.order() != b.order())
    throw Error(Errc::order_mismatch,
                "order mismatch (" + std::to_string(a.order()) + " vs " + std::to_string(b.order()) + ")");
}

Series& Series::operator+=(const Series& o) {
  check_compatible(*this, o);
  for (const auto& [m, c] : o.terms_) add_term(m, c);
  exact_ = exact_ && o.exact_;
  return *this;
}

Series& Series::operator-=(const Series& o) {
  check_compatible(*this, o);
  for (const auto& [m, c] : o.terms_) add_term(m, -c);
  exact_ = exact_ && o.exact_;
  return *this;
}

bool operator==(const Series& a, const Series& b) {
  return same_vars(a.vars_, b.vars_) && a.order_ == b.order_ && a.terms_ == b.terms_;
}

std::string Series::str() const {
  std::ostringstream os;
  bool first = true;
  for (const auto& [m, c] : terms_) {
    std::string cs = c.str();
    bool compound = !c.is_real() && sgn(c.re()) != 0;
    std::string mon;
    for (int v = 0; v < m.nvars(); ++v) {
      if (m[v] == 0) continue;
      if (!mon.empty()) mon += "*";
      mon += vars_->name(v);
      if (m[v] > 1) mon += "^" + std::to_string(m[v]);
    }
    std::string term;
    if (mon.empty())
      term = compound ? "(" + cs + ")" : cs;
    else if (c == GQ(1))
      term = mon;
    else if (c == GQ(-1))
      term = "-" + mon;
    else
      term = (compound ? "(" + cs + ")" : cs) + "*" + mon;
    if (!first) {
      if (term[0] == '-')
        os << " - " << term.substr(1);
      else
        os << " + " << term;
    } else {
      os << term;
    }
    first = false;
  }
  if (first) os << "0";
  if (!exact_) os << " + O(" << order_ + 1 << ")";
  return os.str();
}

Series operator+(const Series& a, const Series& b) {
  Series r = a;
  r += b;
  return r;
}

Series operator-(const Series& a, const Series& b) {
  Series r = a;
  r -= b;
  return r;
}

Series operator*(const Series& a, const Series& b) {
  check_compatible(a, b);
  const int t = a.order();
  bool exact = a.exact() && b.exact();
  Accum acc;
  for (const auto& [ma, ca] : a.terms()) {
    if (ma.deg() > t) break;
    for (const auto& [mb, cb] : b.terms()) {
      if (ma.deg() + mb.deg() > t) {
        exact = false;
        break;
      }
      auto [it, ins] = acc.try_emplace(ma * mb, ca);
      if (ins)
        it->second *= cb;
      else
        it->second += ca * cb;
    }
  }
  return Series::from_accum(a.vars(), t, exact, std::move(acc));
}

Series add_lo(const Series& a, const Series& b) {
  int t = std::min(a.order(), b.order());
  return a.at(t) + b.at(t);
}

Series sub_lo(const Series& a, const Series& b) {
  int t = std::min(a.order(), b.order());
  return a.at(t) - b.at(t);
}

Series mul_lo(const Series& a, const Series& b) {
  int t = std::min(a.order(), b.order());
  return a.at(t) * b.at(t);
}

Series differentiate(const Series& a, int v) {
  if (v < 0 || v >= a.nvars()) throw Error(Errc::context_mismatch, "variable index out of range");
  if (a.order() == 0) throw Error(Errc::order_exhausted, "cannot differentiate a series of order 0");
  Series r(a.vars(), a.order() - 1, a.exact());
  for (const auto& [m, c] : a.terms()) {
    int e = m[v];
    if (e == 0) continue;
    Mono mm = m;
    mm.set(v, e - 1);
    r.add_term(mm, c * GQ(e));
  }
  return r;
}

Series differentiate(const Series& a, const std::vector<int>& alpha) {
  Series r = a;
  for (size_t v = 0; v < alpha.size(); ++v)
    for (int k = 0; k < alpha[v]; ++k) r = differentiate(r, static_cast<int>(v));
  return r;
}

namespace {

// images that are a bare variable become exponent shifts
int simple_target(const Series& s) {
  if (s.size() != 1 || !s.exact()) return -1;
  const auto& [m, c] = *s.terms().begin();
  if (m.deg() != 1 || c != GQ(1)) return -1;
  for (int v = 0; v < m.nvars(); ++v)
    if (m[v] == 1) return v;
  return -1;
}

}  // namespace

Series compose(const Series& a, const std::vector<Series>& images, const VarsPtr& target) {
  const int V = a.nvars();
  if (static_cast<int>(images.size()) != V) throw Error(Errc::context_mismatch, "compose: image count mismatch");
  std::vector<bool> used(V, false);
  for (const auto& [m, c] : a.terms())
    for (int v = 0; v < V; ++v)
      if (m[v]) used[v] = true;

  int T = a.order();
  bool exact = a.exact();
  std::vector<int> simple(V, -1);
  for (int v = 0; v < V; ++v) {
    if (!used[v]) continue;
    const Series& im = images[v];
    if (!same_vars(im.vars(), target)) throw Error(Errc::context_mismatch, "compose: image in wrong context");
    T = std::min(T, im.order());
    exact = exact && im.exact();
    if (!im.constant_term().is_zero() && !a.exact())
      throw Error(Errc::precision, "substituting a series with nonzero constant term into a truncated series");
    simple[v] = simple_target(im);
  }

  // group terms of a by the exponents on non-simple variables
  std::map<Mono, Accum, MonoLess> groups;
  const int TV = target->size();
  for (const auto& [m, c] : a.terms()) {
    Mono key(V), shift(TV);
    for (int v = 0; v < V; ++v) {
      if (!m[v]) continue;
      if (simple[v] >= 0)
        shift.add(simple[v], m[v]);
      else
        key.set(v, m[v]);
    }
    auto& g = groups[key];
    auto [it, ins] = g.try_emplace(shift, c);
    if (!ins) it->second += c;
  }

  std::vector<std::vector<Series>> powc(V);
  auto power = [&](int v, int e) -> const Series& {
    auto& p = powc[v];
    if (p.empty()) p.push_back(Series::constant(target, T, GQ(1)));
    while (static_cast<int>(p.size()) <= e) p.push_back(p.back() * images[v].at(T));
    return p[e];
  };

  Accum out;
  for (auto& [key, poly] : groups) {
    Series prod = Series::constant(target, T, GQ(1));
    bool dropped = false;
    for (int v = 0; v < V && !prod.is_zero(); ++v)
      if (key[v]) prod = prod * power(v, key[v]);
    if (!prod.exact()) exact = false;
    if (prod.is_zero()) continue;
    int val = prod.valuation();
    for (auto& [sm, sc] : poly) {
      if (sc.is_zero()) continue;
      if (sm.deg() + val > T) {
        dropped = true;
        continue;
      }
      for (const auto& [pm, pc] : prod.terms()) {
        if (sm.deg() + pm.deg() > T) {
          dropped = true;
          break;
        }
        auto [it, ins] = out.try_emplace(sm * pm, sc);
        if (ins)
          it->second *= pc;
        else
          it->second += sc * pc;
      }
    }
    if (dropped) exact = false;
  }
  return Series::from_accum(target, T, exact, std::move(out));
}

Series substitute(const Series& a, const std::map<int, Series>& assignment) {
  std::vector<Series> images;
  images.reserve(a.nvars());
  for (int v = 0; v < a.nvars(); ++v) {
    auto it = assignment.find(v);
    if (it != assignment.end())
      images.push_back(it->second);
    else
      images.push_back(Series::variable(a.vars(), a.order(), v));
  }
  return compose(a, images, a.vars());
}

Series remap(const Series& a, const VarsPtr& target, const std::vector<int>& where, int order) {
  if (static_cast<int>(where.size()) != a.nvars()) throw Error(Errc::context_mismatch, "remap: size mismatch");
  int t = order < 0 ? a.order() : order;
  Series r(target, t, a.exact());
  if (t > a.order() && !a.exact()) throw Error(Errc::precision, "remap: cannot raise order of truncated series");
  for (const auto& [m, c] : a.terms()) {
    Mono nm(target->size());
    bool zero = false;
    for (int v = 0; v < a.nvars(); ++v) {
      if (!m[v]) continue;
      if (where[v] < 0) {
        zero = true;
        break;
      }
      nm.add(where[v], m[v]);
    }
    if (!zero) r.add_term(nm, c);
  }
  return r;
}

EvalResult evaluate(const Series& a, const std::vector<GQ>& point) {
  const int V = a.nvars();
  if (static_cast<int>(point.size()) != V) throw Error(Errc::context_mismatch, "evaluate: point length mismatch");
  std::vector<std::vector<GQ>> pw(V);
  GQ sum;
  for (const auto& [m, c] : a.terms()) {
    GQ t = c;
    for (int v = 0; v < V && !t.is_zero(); ++v) {
      int e = m[v];
      if (!e) continue;
      auto& p = pw[v];
      if (p.empty()) p.push_back(GQ(1));
      while (static_cast<int>(p.size()) <= e) p.push_back(p.back() * point[v]);
      t *= p[e];
    }
    sum += t;
  }
  return {sum, a.exact()};
}

int min_order(const std::vector<Series>& v) {
  if (v.empty()) throw Error(Errc::internal, "min_order of empty vector");
  int t = v[0].order();
  for (const auto& s : v) t = std::min(t, s.order());
  return t;
}

std::vector<Series> implicit_solve(const std::vector<Series>& Phi, int m) {
  if (static_cast<int>(Phi.size()) != m || m == 0) throw Error(Errc::invalid_input, "implicit_solve: need m equations");
  const VarsPtr& ctx = Phi[0].vars();
  for (const auto& f : Phi)
    if (!same_vars(f.vars(), ctx)) throw Error(Errc::context_mismatch, "implicit_solve: mixed contexts");
  const int V = ctx->size(), P = V - m;
  if (P < 0) throw Error(Errc::invalid_input, "implicit_solve: too many unknowns");
  VarsPtr pctx = vars_prefix(ctx, P);

  for (const auto& f : Phi)
    if (!f.constant_term().is_zero()) throw Error(Errc::invalid_input, "implicit_solve: Phi(0) is not zero");

  Mat A(m, Vec(m));
  for (int i = 0; i < m; ++i)
    for (int k = 0; k < m; ++k) {
      Mono mono(V);
      mono.set(P + k, 1);
      A[i][k] = Phi[i].coeff(mono);
    }
  Mat Ainv;
  try {
    Ainv = inverse(A);
  } catch (const Error&) {
    throw Error(Errc::singular, "implicit_solve: Jacobian with respect to the unknowns is singular at 0");
  }

  const int T = min_order(Phi);
  std::vector<Series> psi(m, Series(pctx, T, false));
  for (int k = 1; k <= T; ++k) {
    std::vector<Series> img;
    img.reserve(V);
    for (int v = 0; v < P; ++v) img.push_back(Series::variable(pctx, k, v));
    for (int j = 0; j < m; ++j) img.push_back(psi[j].truncated(k));
    std::vector<Series> E;
    E.reserve(m);
    for (int i = 0; i < m; ++i) E.push_back(compose(Phi[i].truncated(k), img, pctx));
    for (int j = 0; j < m; ++j) {
      Series corr(pctx, k);
      for (int i = 0; i < m; ++i)
        if (!Ainv[j][i].is_zero()) corr += E[i].at(k).scaled(Ainv[j][i]);
      Series upd = psi[j].truncated(k) - corr;
      // keep what was already fixed above degree k (nothing yet), then raise
      Series full(pctx, T, false);
      for (const auto& [mm, c] : upd.terms()) full.add_term(mm, c);
      psi[j] = full;
    }
  }
  return psi;
}

std::vector<Series> implicit_solve_exact(const std::vector<Series>& Phi, int m) {
  std::vector<Series> psi = implicit_solve(Phi, m);
  int dphi = 0, dpsi = 1;
  for (const auto& f : Phi) {
    if (!f.exact()) return psi;
    dphi = std::max(dphi, f.max_degree());
  }
  for (const auto& s : psi) dpsi = std::max(dpsi, s.max_degree());
  const int big = std::max(Phi[0].order(), dphi * dpsi) + 1;
  if (big > 64) return psi;
  const VarsPtr& ctx = Phi[0].vars();
  const int P = ctx->size() - m;
  std::vector<Series> cand;
  for (const auto& s : psi) {
    Series c = s;
    c.set_exact(true);
    cand.push_back(c.at(big));
  }
  std::vector<Series> img;
  for (int v = 0; v < P; ++v) img.push_back(Series::variable(cand[0].vars(), big, v));
  for (const auto& c : cand) img.push_back(c);
  for (const auto& f : Phi) {
    Series r = compose(f.at(big), img, cand[0].vars());
    if (!r.is_zero() || !r.exact()) return psi;
  }
  for (auto& s : psi) s.set_exact(true);
  return psi;
}

Series reciprocal(const Series& a) {
  GQ c = a.constant_term();
  if (c.is_zero()) throw Error(Errc::singular, "reciprocal of a series without constant term");
  const int T = a.order();
  GQ ci = c.inv();
  Series u = a.scaled(ci) - Series::constant(a.vars(), T, GQ(1));
  Series term = Series::constant(a.vars(), T, GQ(1));
  Series sum = term;
  Series negu = -u;
  for (int k = 1; k <= T && !term.is_zero(); ++k) {
    term = term * negu;
    sum += term;
  }
  Series r = sum.scaled(ci);
  r.set_exact(a.exact() && u.is_zero());
  return r;
}

}  // namespace crdeg
