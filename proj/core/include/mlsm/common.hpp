#pragma once

#include <Eigen/Core>

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace mlsm {

using Vec2 = Eigen::Vector2d;

/// Base class of all errors raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Invalid input geometry or parameters.
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

/// A support whose basis matrix cannot determine the requested operators.
class IllConditionedStencil : public Error {
 public:
  IllConditionedStencil(std::size_t node, std::vector<std::size_t> support, const std::string& what)
      : Error(what), node_(node), support_(std::move(support)) {}

  std::size_t node() const { return node_; }
  const std::vector<std::size_t>& support() const { return support_; }

 private:
  std::size_t node_;
  std::vector<std::size_t> support_;
};

/// The iterative solver broke down or ran out of iterations.
class NonConvergence : public Error {
 public:
  NonConvergence(const std::string& what, std::vector<double> history)
      : Error(what), history_(std::move(history)) {}

  /// Relative residual after each iteration.
  const std::vector<double>& residual_history() const { return history_; }

 private:
  std::vector<double> history_;
};

}  // namespace mlsm
