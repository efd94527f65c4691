#pragma once

#include <complex>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace fqe {

using cplx = std::complex<double>;
using CVector = Eigen::VectorXcd;
using CMatrix = Eigen::MatrixXcd;
using IntVec = std::vector<int>;
using Momentum = std::vector<double>;

inline constexpr double kTwoPi = 6.283185307179586476925286766559;

/// Largest ν N^d handled by sparse/fiber code paths.
inline constexpr std::size_t kFiberCap = 20000;
/// Largest ν N^d handled by dense diagonalization.
inline constexpr std::size_t kDenseCap = 4000;

/// Malformed graph input or a graph that fails a structural requirement.
class GraphError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Problem size above a configured cap.
class CapacityError : public std::length_error {
 public:
  using std::length_error::length_error;
};

/// Eigensolver or other numerical failure.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Neumaier-compensated accumulator.
template <class T>
class CompensatedSum {
 public:
  void add(T x) {
    T t = sum_ + x;
    if (std::abs(sum_) >= std::abs(x)) {
      comp_ += (sum_ - t) + x;
    } else {
      comp_ += (x - t) + sum_;
    }
    sum_ = t;
  }
  T value() const { return sum_ + comp_; }

 private:
  T sum_{};
  T comp_{};
};

template <>
class CompensatedSum<cplx> {
 public:
  void add(cplx x) {
    re_.add(x.real());
    im_.add(x.imag());
  }
  cplx value() const { return {re_.value(), im_.value()}; }

 private:
  CompensatedSum<double> re_;
  CompensatedSum<double> im_;
};

}  // namespace fqe
