#pragma once

#include <Eigen/Dense>
#include <stdexcept>
#include <string>

namespace possets {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

/// Thrown when an input violates a documented precondition
/// (nonpositive nominal value, dimension mismatch, bad quantile, ...).
class domain_error : public std::invalid_argument {
 public:
  explicit domain_error(const std::string& what) : std::invalid_argument(what) {}
};

/// Thrown when a numerical routine cannot produce a usable result
/// (singular shape matrix, indefinite covariance, ...).
class numerical_error : public std::runtime_error {
 public:
  explicit numerical_error(const std::string& what) : std::runtime_error(what) {}
};

inline void require(bool cond, const std::string& msg) {
  if (!cond) throw domain_error(msg);
}

}  // namespace possets
