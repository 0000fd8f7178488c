#pragma once

#include <vector>

#include "gq.hpp"

namespace crdeg {

class Series;

using Vec = std::vector<GQ>;
using Mat = std::vector<Vec>;

int rank(Mat m);
GQ det(Mat m);
Mat inverse(const Mat& m);
Mat mat_mul(const Mat& a, const Mat& b);
Mat transpose(const Mat& a);
// basis of {x : m x = 0}; ncols needed when m has no rows
std::vector<Vec> nullspace(Mat m, int ncols);

// Keeps a reduced basis; add() reports whether the row enlarged the span.
class RowSpan {
 public:
  explicit RowSpan(int ncols) : ncols_(ncols) {}
  bool add(const Vec& row);
  bool contains(const Vec& row) const;
  int rank() const { return static_cast<int>(rows_.size()); }

 private:
  Vec reduce(Vec row) const;
  int ncols_;
  std::vector<Vec> rows_;
  std::vector<int> pivots_;
};

// Laplace expansion; fine for the small matrices used here
Series det(const std::vector<std::vector<Series>>& m);

// lexicographically first k-subset of columns with nonzero k x k minor
std::vector<int> first_nonsingular_columns(const Mat& rows);

}  // namespace crdeg
