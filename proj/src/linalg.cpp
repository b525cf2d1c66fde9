#include "dergm/detail/linalg.hpp"

#include <algorithm>
#include <numeric>

namespace dergm::detail {

bool cholesky_solve(Matrix m, std::vector<double> b, std::vector<double>& x) {
  const std::size_t n = m.rows;
  if (m.cols != n || b.size() != n) return false;
  // In-place lower-triangular factorization.
  for (std::size_t j = 0; j < n; ++j) {
    double d = m.at(j, j);
    for (std::size_t k = 0; k < j; ++k) d -= m.at(j, k) * m.at(j, k);
    if (d <= 0.0) return false;
    d = std::sqrt(d);
    m.at(j, j) = d;
    for (std::size_t i = j + 1; i < n; ++i) {
      double s = m.at(i, j);
      for (std::size_t k = 0; k < j; ++k) s -= m.at(i, k) * m.at(j, k);
      m.at(i, j) = s / d;
    }
  }
  // Forward substitution L y = b.
  for (std::size_t i = 0; i < n; ++i) {
    double s = b[i];
    for (std::size_t k = 0; k < i; ++k) s -= m.at(i, k) * b[k];
    b[i] = s / m.at(i, i);
  }
  // Back substitution L^T x = y.
  x.assign(n, 0.0);
  for (std::size_t ii = n; ii-- > 0;) {
    double s = b[ii];
    for (std::size_t k = ii + 1; k < n; ++k) s -= m.at(k, ii) * x[k];
    x[ii] = s / m.at(ii, ii);
  }
  return true;
}

RankResult rank_and_null_direction(const Matrix& a, double rel_tol) {
  Matrix u = a;
  const std::size_t rows = u.rows, cols = u.cols;
  std::vector<std::size_t> col_of(cols);
  std::iota(col_of.begin(), col_of.end(), 0);

  double largest_pivot = 0.0;
  std::size_t rank = 0;
  for (std::size_t step = 0; step < std::min(rows, cols); ++step) {
    // Full pivot search in the trailing submatrix.
    std::size_t pr = step, pc = step;
    double best = 0.0;
    for (std::size_t i = step; i < rows; ++i)
      for (std::size_t j = step; j < cols; ++j)
        if (std::abs(u.at(i, j)) > best) {
          best = std::abs(u.at(i, j));
          pr = i;
          pc = j;
        }
    largest_pivot = std::max(largest_pivot, best);
    if (best <= rel_tol * std::max(largest_pivot, 1e-300)) break;
    // Swap into place (columns tracked for the null-space read-off).
    if (pr != step)
      for (std::size_t j = 0; j < cols; ++j) std::swap(u.at(pr, j), u.at(step, j));
    if (pc != step) {
      for (std::size_t i = 0; i < rows; ++i) std::swap(u.at(i, pc), u.at(i, step));
      std::swap(col_of[pc], col_of[step]);
    }
    const double pivot = u.at(step, step);
    for (std::size_t i = step + 1; i < rows; ++i) {
      double f = u.at(i, step) / pivot;
      u.at(i, step) = 0.0;
      for (std::size_t j = step + 1; j < cols; ++j) u.at(i, j) -= f * u.at(step, j);
    }
    ++rank;
  }

  RankResult out;
  out.rank = rank;
  if (rank < cols) {
    // One null vector: set the first free (permuted) column to 1 and back-
    // substitute through the triangular leading block.
    std::vector<double> y(cols, 0.0);
    y[rank] = 1.0;
    for (std::size_t ii = rank; ii-- > 0;) {
      double s = 0.0;
      for (std::size_t j = ii + 1; j <= rank; ++j) s += u.at(ii, j) * y[j];
      y[ii] = -s / u.at(ii, ii);
    }
    std::vector<double> dir(cols, 0.0);
    for (std::size_t j = 0; j < cols; ++j) dir[col_of[j]] = y[j];
    // Normalize: first nonzero component +1.
    for (double v : dir) {
      if (std::abs(v) > 1e-12) {
        for (double& w : dir) w /= v;
        break;
      }
    }
    out.null_direction = std::move(dir);
  }
  return out;
}

}  // namespace dergm::detail
