#include "linalg.hpp"

#include <functional>

#include "series.hpp"

namespace crdeg {

namespace {

// in-place row echelon form, returns pivot columns
std::vector<int> echelon(Mat& m, GQ* detv = nullptr) {
  std::vector<int> piv;
  if (m.empty()) return piv;
  const size_t rows = m.size(), cols = m[0].size();
  GQ d(1);
  size_t r = 0;
  for (size_t c = 0; c < cols && r < rows; ++c) {
    size_t p = r;
    while (p < rows && m[p][c].is_zero()) ++p;
    if (p == rows) continue;
    if (p != r) {
      std::swap(m[p], m[r]);
      d = -d;
    }
    GQ inv = m[r][c].inv();
    d *= m[r][c];
    for (size_t i = r + 1; i < rows; ++i) {
      if (m[i][c].is_zero()) continue;
      GQ f = m[i][c] * inv;
      for (size_t j = c; j < cols; ++j)
        if (!m[r][j].is_zero()) m[i][j] -= f * m[r][j];
    }
    piv.push_back(static_cast<int>(c));
    ++r;
  }
  if (detv) *detv = (r == rows && rows == cols) ? d : GQ(0);
  return piv;
}

}  // namespace

int rank(Mat m) { return static_cast<int>(echelon(m).size()); }

GQ det(Mat m) {
  if (m.empty()) return GQ(1);
  if (m.size() != m[0].size()) throw Error(Errc::internal, "det of non-square matrix");
  GQ d;
  echelon(m, &d);
  return d;
}

Mat inverse(const Mat& m) {
  const size_t n = m.size();
  Mat a(n, Vec(2 * n));
  for (size_t i = 0; i < n; ++i) {
    for (size_t j = 0; j < n; ++j) a[i][j] = m[i][j];
    a[i][n + i] = GQ(1);
  }
  for (size_t c = 0; c < n; ++c) {
    size_t p = c;
    while (p < n && a[p][c].is_zero()) ++p;
    if (p == n) throw Error(Errc::singular, "singular matrix");
    std::swap(a[p], a[c]);
    GQ inv = a[c][c].inv();
    for (auto& x : a[c]) x *= inv;
    for (size_t i = 0; i < n; ++i) {
      if (i == c || a[i][c].is_zero()) continue;
      GQ f = a[i][c];
      for (size_t j = 0; j < 2 * n; ++j)
        if (!a[c][j].is_zero()) a[i][j] -= f * a[c][j];
    }
  }
  Mat r(n, Vec(n));
  for (size_t i = 0; i < n; ++i)
    for (size_t j = 0; j < n; ++j) r[i][j] = a[i][n + j];
  return r;
}

Mat mat_mul(const Mat& a, const Mat& b) {
  if (a.empty()) return {};
  const size_t n = a.size(), k = b.size(), m = b.empty() ? 0 : b[0].size();
  Mat r(n, Vec(m));
  for (size_t i = 0; i < n; ++i)
    for (size_t l = 0; l < k; ++l) {
      if (a[i][l].is_zero()) continue;
      for (size_t j = 0; j < m; ++j) r[i][j] += a[i][l] * b[l][j];
    }
  return r;
}

Mat transpose(const Mat& a) {
  if (a.empty()) return {};
  Mat t(a[0].size(), Vec(a.size()));
  for (size_t i = 0; i < a.size(); ++i)
    for (size_t j = 0; j < a[0].size(); ++j) t[j][i] = a[i][j];
  return t;
}

std::vector<Vec> nullspace(Mat m, int ncols) {
  std::vector<int> piv = echelon(m);
  // back substitution to reduced form
  for (int r = static_cast<int>(piv.size()) - 1; r >= 0; --r) {
    int c = piv[r];
    GQ inv = m[r][c].inv();
    for (auto& x : m[r]) x *= inv;
    for (int i = 0; i < r; ++i) {
      if (m[i][c].is_zero()) continue;
      GQ f = m[i][c];
      for (int j = c; j < ncols; ++j)
        if (!m[r][j].is_zero()) m[i][j] -= f * m[r][j];
    }
  }
  std::vector<bool> is_piv(ncols, false);
  for (int c : piv) is_piv[c] = true;
  std::vector<Vec> basis;
  for (int f = 0; f < ncols; ++f) {
    if (is_piv[f]) continue;
    Vec v(ncols);
    v[f] = GQ(1);
    for (size_t r = 0; r < piv.size(); ++r) v[piv[r]] = -m[r][f];
    basis.push_back(std::move(v));
  }
  return basis;
}

Vec RowSpan::reduce(Vec row) const {
  for (size_t i = 0; i < rows_.size(); ++i) {
    int c = pivots_[i];
    if (row[c].is_zero()) continue;
    GQ f = row[c];  // stored rows are normalised to 1 at the pivot
    for (int j = 0; j < ncols_; ++j)
      if (!rows_[i][j].is_zero()) row[j] -= f * rows_[i][j];
  }
  return row;
}

bool RowSpan::contains(const Vec& row) const {
  Vec r = reduce(row);
  for (const auto& x : r)
    if (!x.is_zero()) return false;
  return true;
}

bool RowSpan::add(const Vec& row) {
  Vec r = reduce(row);
  int c = 0;
  while (c < ncols_ && r[c].is_zero()) ++c;
  if (c == ncols_) return false;
  GQ inv = r[c].inv();
  for (auto& x : r) x *= inv;
  for (size_t i = 0; i < rows_.size(); ++i) {
    if (rows_[i][c].is_zero()) continue;
    GQ f = rows_[i][c];
    for (int j = 0; j < ncols_; ++j)
      if (!r[j].is_zero()) rows_[i][j] -= f * r[j];
  }
  rows_.push_back(std::move(r));
  pivots_.push_back(c);
  return true;
}

Series det(const std::vector<std::vector<Series>>& m) {
  const size_t n = m.size();
  if (n == 0) throw Error(Errc::internal, "det of empty series matrix");
  if (n == 1) return m[0][0];
  int t = m[0][0].order();
  bool ex = true;
  for (const auto& row : m)
    for (const auto& x : row) {
      t = std::min(t, x.order());
      ex = ex && x.exact();
    }
  Series acc(m[0][0].vars(), t);
  for (size_t j = 0; j < n; ++j) {
    if (m[0][j].is_zero()) continue;
    std::vector<std::vector<Series>> minor;
    for (size_t i = 1; i < n; ++i) {
      std::vector<Series> row;
      for (size_t k = 0; k < n; ++k)
        if (k != j) row.push_back(m[i][k]);
      minor.push_back(std::move(row));
    }
    Series term = mul_lo(m[0][j], det(minor)).at(t);
    if (j % 2) acc -= term;
    else acc += term;
  }
  if (!ex) acc.set_exact(false);
  return acc;
}

std::vector<int> first_nonsingular_columns(const Mat& rows) {
  const int k = static_cast<int>(rows.size());
  if (k == 0) return {};
  const int n = static_cast<int>(rows[0].size());
  std::vector<int> pick;
  std::vector<int> found;
  std::function<bool(int)> rec = [&](int start) -> bool {
    if (static_cast<int>(pick.size()) == k) {
      Mat sub(k, Vec(k));
      for (int i = 0; i < k; ++i)
        for (int j = 0; j < k; ++j) sub[i][j] = rows[i][pick[j]];
      if (!det(sub).is_zero()) {
        found = pick;
        return true;
      }
      return false;
    }
    for (int c = start; c < n; ++c) {
      pick.push_back(c);
      if (rec(c + 1)) return true;
      pick.pop_back();
    }
    return false;
  };
  if (!rec(0)) throw Error(Errc::singular, "rows are linearly dependent");
  return found;
}

}  // namespace crdeg
