#pragma once

#include <cmath>
#include <complex>
#include <cstddef>
#include <functional>
#include <numbers>
#include <vector>

#include <Eigen/Dense>

#include "fdid/fdid.hpp"

namespace fdid::test {

inline constexpr double kPi = std::numbers::pi;

// Multisine with tones at non-integer multiples of 1/T (not periodic on [0, T)).
inline ForcingSpec test_multisine(std::size_t channels, std::uint64_t seed, std::size_t tones = 6, double f_min = 1.3,
                                  double f_max = 9.7) {
  return multisine(tones, f_min, f_max, channels, seed);
}

inline Signal signal_from(double T, std::size_t N, const std::function<std::complex<double>(double)>& s) {
  Eigen::MatrixXcd v(1, static_cast<Eigen::Index>(N));
  for (std::size_t j = 0; j < N; ++j) v(0, static_cast<Eigen::Index>(j)) = s(T * static_cast<double>(j) / static_cast<double>(N));
  return Signal(T, std::move(v), Eigen::VectorXcd::Constant(1, s(T)));
}

inline double rel_err(const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b) { return (a - b).norm() / b.norm(); }

}  // namespace fdid::test
