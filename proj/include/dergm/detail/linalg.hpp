#pragma once

#include <cmath>
#include <cstddef>
#include <optional>
#include <vector>

namespace dergm::detail {

// Dense row-major matrix, just big enough for the block-design systems
// (dimensions are counts of blocks, never nodes).
struct Matrix {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<double> a;

  Matrix() = default;
  Matrix(std::size_t r, std::size_t c) : rows(r), cols(c), a(r * c, 0.0) {}
  double& at(std::size_t i, std::size_t j) { return a[i * cols + j]; }
  double at(std::size_t i, std::size_t j) const { return a[i * cols + j]; }
};

// Solves the SPD system M x = b by Cholesky; false if M is not positive
// definite to working precision.
bool cholesky_solve(Matrix m, std::vector<double> b, std::vector<double>& x);

struct RankResult {
  std::size_t rank = 0;
  // A unit-ish vector in the null space when rank < cols, normalized so the
  // first nonzero component is +1.
  std::optional<std::vector<double>> null_direction;
};

// Rank of A via Gaussian elimination with full pivoting; pivots below
// rel_tol * |largest pivot| count as zero.
RankResult rank_and_null_direction(const Matrix& a, double rel_tol);

}  // namespace dergm::detail
