#include "dergm/errors.hpp"

namespace dergm {

std::string describe(const BoundaryViolation& v) {
  std::string s = v.stat;
  if (!v.index.empty()) {
    s += "[";
    for (std::size_t t = 0; t < v.index.size(); ++t) {
      if (t) s += ",";
      s += std::to_string(v.index[t]);
    }
    s += "]";
  }
  s += " = " + std::to_string(v.value) + " at boundary of [" + std::to_string(v.lo) + ", " +
       std::to_string(v.hi) + "]";
  return s;
}

NonexistentMleError::NonexistentMleError(const std::string& what,
                                         std::vector<BoundaryViolation> violations,
                                         std::vector<std::size_t> diverged)
    : std::runtime_error(what), violations_(std::move(violations)), diverged_(std::move(diverged)) {}

UnidentifiableError::UnidentifiableError(const std::string& what,
                                         std::vector<double> null_direction)
    : std::runtime_error(what), null_direction_(std::move(null_direction)) {}

}  // namespace dergm
