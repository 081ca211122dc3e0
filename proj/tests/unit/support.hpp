#pragma once

#include <cmath>
#include <initializer_list>
#include <numbers>

#include "oil/numlin.hpp"
#include "oil/subspace.hpp"

namespace testing {

using oil::Complex;
using oil::Index;
using oil::Matrix;

inline Matrix mat(std::initializer_list<std::initializer_list<double>> rows) {
  const Index m = static_cast<Index>(rows.size());
  const Index n = m ? static_cast<Index>(rows.begin()->size()) : 0;
  Matrix a(m, n);
  Index i = 0;
  for (const auto& r : rows) {
    Index k = 0;
    for (double v : r) a(i, k++) = v;
    ++i;
  }
  return a;
}

inline Matrix diag(std::initializer_list<double> d) {
  Matrix a = Matrix::Zero(static_cast<Index>(d.size()), static_cast<Index>(d.size()));
  Index i = 0;
  for (double v : d) a(i, i) = v, ++i;
  return a;
}

inline Matrix col(std::initializer_list<double> v) {
  Matrix a(static_cast<Index>(v.size()), 1);
  Index i = 0;
  for (double x : v) a(i++, 0) = x;
  return a;
}

inline oil::Subspace span(const Matrix& vectors) { return oil::Subspace::from_spanning_set(vectors); }

inline oil::Subspace line(std::initializer_list<double> v) { return span(col(v)); }

inline double dist(const Matrix& a, const Matrix& b) { return oil::numlin::op_norm(a - b); }

}  // namespace testing
