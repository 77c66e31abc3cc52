#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace lbgraph {

// Bad arguments or malformed inputs. The CLI maps this to exit code 2.
class invalid_input : public std::runtime_error {
 public:
  explicit invalid_input(const std::string& what) : std::runtime_error(what) {}
};

// Iterative eigensolver failed to reach the requested tolerance.
// Carries the best residuals seen so far. CLI exit code 3.
class solver_failure : public std::runtime_error {
 public:
  solver_failure(const std::string& what, std::vector<double> residuals)
      : std::runtime_error(what), best_residuals(std::move(residuals)) {}

  std::vector<double> best_residuals;
};

}  // namespace lbgraph
