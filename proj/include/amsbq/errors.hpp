#ifndef AMSBQ_ERRORS_HPP
#define AMSBQ_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace amsbq {

// Gram factorization failed even after the jitter escalation ladder.
class IllConditionedError : public std::runtime_error {
 public:
  explicit IllConditionedError(const std::string& what) : std::runtime_error(what) {}
};

// Candidate batch whose noise-corrected covariance is singular (e.g. the
// same noiseless point listed twice).
class DegenerateCandidateError : public std::runtime_error {
 public:
  explicit DegenerateCandidateError(const std::string& what) : std::runtime_error(what) {}
};

// Numerical value left its mathematically valid range by more than
// round-off allows; indicates a bug rather than noise.
class DiagnosticsError : public std::runtime_error {
 public:
  explicit DiagnosticsError(const std::string& what) : std::runtime_error(what) {}
};

// Black-box source evaluation failed mid-loop.
class QueryError : public std::runtime_error {
 public:
  explicit QueryError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace amsbq

#endif
