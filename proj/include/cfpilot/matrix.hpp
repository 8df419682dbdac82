#pragma once

#include <cassert>
#include <cstddef>
#include <vector>

namespace cfpilot {

// Dense row-major matrix. Sized for desk-scale simulations (M, K in the
// hundreds); no linear algebra needed beyond element access.
struct Mat {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<double> a;

  Mat() = default;
  Mat(std::size_t r, std::size_t c, double fill = 0.0) : rows(r), cols(c), a(r * c, fill) {}

  double& operator()(std::size_t i, std::size_t j) {
    assert(i < rows && j < cols);
    return a[i * cols + j];
  }
  double operator()(std::size_t i, std::size_t j) const {
    assert(i < rows && j < cols);
    return a[i * cols + j];
  }

  bool same_shape(const Mat& o) const { return rows == o.rows && cols == o.cols; }

  friend bool operator==(const Mat& x, const Mat& y) {
    return x.rows == y.rows && x.cols == y.cols && x.a == y.a;
  }
};

}  // namespace cfpilot
