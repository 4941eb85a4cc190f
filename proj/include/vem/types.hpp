#pragma once

#include <Eigen/Dense>

#include <stdexcept>
#include <string>
#include <vector>

namespace vem {

using Point = Eigen::Vector2d;
using Vec2 = Eigen::Vector2d;
using Mat2 = Eigen::Matrix2d;
using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

// Small flattened tensors (value, jacobian or hessian of a field with at
// most four components) without heap allocation.
using SmallVec = Eigen::Matrix<double, Eigen::Dynamic, 1, 0, 8, 1>;
using SmallMat = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, 0, 8, 8>;

class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

class GeometryError : public Error {
public:
  using Error::Error;
};

class FormatError : public Error {
public:
  using Error::Error;
};

class TopologyError : public Error {
public:
  using Error::Error;
};

class ConfigError : public Error {
public:
  using Error::Error;
};

class ConditioningError : public Error {
public:
  using Error::Error;
};

class UnisolvencyError : public Error {
public:
  using Error::Error;
};

class CLSRankError : public Error {
public:
  CLSRankError(const std::string& what, int constraint_rank, int stacked_rank)
      : Error(what), constraint_rank(constraint_rank), stacked_rank(stacked_rank) {}
  int constraint_rank;
  int stacked_rank;
};

class SolverError : public Error {
public:
  SolverError(const std::string& what, std::vector<double> history = {})
      : Error(what), residual_history(std::move(history)) {}
  std::vector<double> residual_history;
};

class IOError : public Error {
public:
  using Error::Error;
};

/// Rotate a vector by -90 degrees: (x, y) -> (y, -x).
inline Vec2 perp(const Vec2& v) { return {v.y(), -v.x()}; }

inline double cross(const Vec2& a, const Vec2& b) { return a.x() * b.y() - a.y() * b.x(); }

}  // namespace vem
