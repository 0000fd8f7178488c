#include "jets.hpp"

#include <algorithm>
#include <functional>

namespace crdeg {

int multi_abs(const Multi& a) {
  int s = 0;
  for (int x : a) s += x;
  return s;
}

std::vector<Multi> multiindices(int nvars, int maxdeg) {
  std::vector<Multi> out;
  Multi cur(nvars, 0);
  // within one degree, larger exponent on the earlier slot comes first
  std::function<void(int, int)> rec = [&](int slot, int left) {
    if (slot == nvars - 1) {
      cur[slot] = left;
      out.push_back(cur);
      return;
    }
    for (int e = left; e >= 0; --e) {
      cur[slot] = e;
      rec(slot + 1, left - e);
    }
    cur[slot] = 0;
  };
  if (nvars == 0) return {Multi{}};
  for (int d = 0; d <= maxdeg; ++d) rec(0, d);
  return out;
}

std::string multi_str(const Multi& a) {
  std::string s = "[";
  for (size_t i = 0; i < a.size(); ++i) s += (i ? "," : "") + std::to_string(a[i]);
  return s + "]";
}

Mono multi_mono(const Multi& a, int nvars, int offset) {
  Mono m(nvars);
  for (size_t i = 0; i < a.size(); ++i)
    if (a[i]) m.set(offset + static_cast<int>(i), a[i]);
  return m;
}

JetSpace::JetSpace(VarsPtr base, std::vector<JetFamily> families, int nx)
    : base_(std::move(base)), fams_(std::move(families)), nx_(nx) {
  std::vector<Block> bl = base_->blocks();
  int off = base_->size();
  for (const auto& f : fams_) {
    if (static_cast<int>(f.raise.size()) != base_->size())
      throw Error(Errc::internal, "jet family " + f.name + ": raise table has wrong length");
    foff_.push_back(off);
    std::map<Multi, int> idx;
    for (size_t i = 0; i < f.betas.size(); ++i) {
      idx[f.betas[i]] = static_cast<int>(i);
      bl.push_back({f.name + multi_str(f.betas[i]), f.width});
    }
    index_.push_back(std::move(idx));
    off += static_cast<int>(f.betas.size()) * f.width;
  }
  xoff_ = off;
  prefix_ = make_vars(bl);
  if (nx > 0) bl.push_back({"X", nx});
  vars_ = nx > 0 ? make_vars(bl) : prefix_;
}

bool JetSpace::has(int f, const Multi& beta) const { return index_[f].count(beta) > 0; }

int JetSpace::var(int f, const Multi& beta, int c) const {
  auto it = index_[f].find(beta);
  if (it == index_[f].end())
    throw Error(Errc::order_exhausted, "jet " + fams_[f].name + multi_str(beta) + " not available");
  return foff_[f] + it->second * fams_[f].width + c;
}

Series JetSpace::embed(const Series& s, const VarsPtr& ctx) const {
  if (!same_vars(s.vars(), base_) && !same_vars(s.vars(), vars_prefix(base_, s.nvars())))
    throw Error(Errc::context_mismatch, "embed: series not in the base context");
  std::vector<int> where(s.nvars());
  for (int i = 0; i < s.nvars(); ++i) where[i] = i;
  return remap(s, ctx, where);
}

Series JetSpace::total_derivative(const Series& phi,
                                  const std::vector<std::pair<int, const Series*>>& coeffs) const {
  const VarsPtr& ctx = phi.vars();
  if (phi.order() == 0) throw Error(Errc::order_exhausted, "cannot differentiate a series of order 0");
  std::vector<bool> used(ctx->size(), false);
  for (const auto& [m, c] : phi.terms())
    for (int v = 0; v < m.nvars(); ++v)
      if (m[v]) used[v] = true;

  const int t1 = phi.order() - 1;
  Series out(ctx, t1, phi.exact());
  for (const auto& [u, a] : coeffs) {
    Series term(ctx, t1, phi.exact());
    if (used[u]) term += differentiate(phi, u);
    for (size_t f = 0; f < fams_.size(); ++f) {
      int slot = fams_[f].raise[u];
      if (slot < 0) continue;
      const auto& fam = fams_[f];
      for (size_t bi = 0; bi < fam.betas.size(); ++bi)
        for (int c = 0; c < fam.width; ++c) {
          int v = foff_[f] + static_cast<int>(bi) * fam.width + c;
          if (v >= ctx->size() || !used[v]) continue;
          Multi nb = fam.betas[bi];
          nb[slot] += 1;
          int nv = var(static_cast<int>(f), nb, c);
          if (nv >= ctx->size()) throw Error(Errc::order_exhausted, "jet variable outside context");
          auto ni = index_[f].at(nb);
          Series y = Series::variable(ctx, t1, nv) + Series::constant(ctx, t1, fam.shift[ni][c]);
          term += differentiate(phi, v) * y;
        }
    }
    if (a == nullptr) {
      out += term;
    } else {
      Series ae = embed(*a, ctx);
      out = add_lo(out, mul_lo(ae, term));
    }
  }
  return out;
}

}  // namespace crdeg
