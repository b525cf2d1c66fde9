#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace dergm {

// A sufficient statistic sitting at the edge of its achievable range.
// `index` holds the node id for nodal statistics or the block pair (k,l)
// for block statistics; `lo`/`hi` are the achievable extremes.
struct BoundaryViolation {
  std::string stat;
  std::vector<std::size_t> index;
  double value = 0.0;
  double lo = 0.0;
  double hi = 0.0;
};

std::string describe(const BoundaryViolation& v);

// Thrown when the likelihood has no finite maximizer: boundary statistics
// detected up front, or parameters escaping past the divergence bound.
class NonexistentMleError : public std::runtime_error {
 public:
  NonexistentMleError(const std::string& what,
                      std::vector<BoundaryViolation> violations,
                      std::vector<std::size_t> diverged = {});

  const std::vector<BoundaryViolation>& violations() const noexcept { return violations_; }
  const std::vector<std::size_t>& diverged_indices() const noexcept { return diverged_; }

 private:
  std::vector<BoundaryViolation> violations_;
  std::vector<std::size_t> diverged_;
};

// Thrown when the sufficient-statistic design is rank deficient, so some
// parameter direction never touches the likelihood.
class UnidentifiableError : public std::runtime_error {
 public:
  UnidentifiableError(const std::string& what, std::vector<double> null_direction);

  // One null direction of the design, normalized so the first nonzero
  // component is +1. Laid out over the family's flat parameter vector.
  const std::vector<double>& null_direction() const noexcept { return null_direction_; }

 private:
  std::vector<double> null_direction_;
};

}  // namespace dergm
