#ifndef IPDP_EMA_HPP_
#define IPDP_EMA_HPP_

#include <cmath>
#include <cstdint>

#include <Eigen/Core>

#include "ipdp/error.hpp"

namespace ipdp {

template <typename Scalar>
void CheckSmoothing(Scalar alpha) {
  if (!(alpha > Scalar(0) && alpha < Scalar(1))) {
    throw ConfigError("smoothing parameter alpha must lie in (0, 1)");
  }
}

// (1 - alpha) * prev + alpha * value
template <typename Scalar>
Scalar EmaUpdate(Scalar prev, Scalar value, Scalar alpha) {
  CheckSmoothing(alpha);
  if (!std::isfinite(prev) || !std::isfinite(value)) {
    throw InvalidValueError("non-finite input to exponential moving average");
  }
  return (Scalar(1) - alpha) * prev + alpha * value;
}

// Point-estimate recursion: averages one ICE value into the running estimate.
template <typename Scalar>
Scalar UpdateEstimate(Scalar prev, Scalar ice_value, Scalar alpha) {
  return EmaUpdate(prev, ice_value, alpha);
}

// Grid-point recursion: averages the current evaluation point into the grid.
template <typename Scalar>
Scalar UpdateGridPoint(Scalar prev, Scalar eval_point, Scalar alpha) {
  return EmaUpdate(prev, eval_point, alpha);
}

// Coefficient-wise EMA over a whole curve.
template <typename Derived, typename OtherDerived>
void EmaUpdateInPlace(Eigen::DenseBase<Derived>& state,
                      const Eigen::DenseBase<OtherDerived>& values,
                      typename Derived::Scalar alpha) {
  using Scalar = typename Derived::Scalar;
  CheckSmoothing(alpha);
  if (!values.derived().allFinite()) {
    throw InvalidValueError("non-finite input to exponential moving average");
  }
  state.derived() = (Scalar(1) - alpha) * state.derived() + alpha * values.derived();
}

// 1 - (1 - alpha)^t, the total weight an EMA started at zero has collected
// after t updates.
template <typename Scalar>
Scalar DebiasFactor(Scalar alpha, std::int64_t t) {
  CheckSmoothing(alpha);
  if (t < 1) throw InvalidValueError("debiasing is undefined before the first update");
  return Scalar(1) - std::pow(Scalar(1) - alpha, static_cast<Scalar>(t));
}

template <typename Scalar>
Scalar Debias(Scalar value, Scalar alpha, std::int64_t t) {
  return value / DebiasFactor(alpha, t);
}

// m equidistant points from range_min to range_max, endpoints exact.
template <typename Scalar>
Eigen::Matrix<Scalar, Eigen::Dynamic, 1> EvalPoints(Scalar range_min,
                                                    Scalar range_max,
                                                    Eigen::Index m) {
  if (m < 2) throw ConfigError("at least two grid points are required");
  if (!std::isfinite(range_min) || !std::isfinite(range_max)) {
    throw InvalidValueError("evaluation range must be finite");
  }
  if (range_min > range_max) {
    throw InvalidValueError("evaluation range is inverted");
  }
  return Eigen::Matrix<Scalar, Eigen::Dynamic, 1>::LinSpaced(m, range_min,
                                                             range_max);
}

// Sample standard deviation of a PD curve: the spread of the curve around its
// own mean, used as a scalar importance score.
template <typename Derived>
typename Derived::Scalar PdpImportance(const Eigen::DenseBase<Derived>& estimates) {
  using Scalar = typename Derived::Scalar;
  const Eigen::Index m = estimates.size();
  if (m < 2) throw ConfigError("importance needs at least two grid points");
  const Scalar mean = estimates.derived().mean();
  const Scalar ss = (estimates.derived().array() - mean).square().sum();
  return std::sqrt(ss / static_cast<Scalar>(m - 1));
}

}  // namespace ipdp

#endif  // IPDP_EMA_HPP_
