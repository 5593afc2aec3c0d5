#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <complex>
#include <cstddef>
#include <limits>

namespace detvar {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;

/// Relative rank tolerance. The cut is tau = rel_eps * max(rows, cols) * sigma_max.
struct RankPolicy {
  double rel_eps = 1e-10;
};

struct RankInfo {
  int rank = 0;
  double threshold = 0.0;
  /// sigma_rank / sigma_{rank+1} at the cut; tau replaces the missing neighbour
  /// at either end of the spectrum. Infinite when the part below the cut is exactly zero.
  double margin = std::numeric_limits<double>::infinity();
  RealVector singular_values;
};

namespace detail {

inline double cut_margin(const RealVector& s, int rank, double tau) {
  constexpr double inf = std::numeric_limits<double>::infinity();
  const int len = static_cast<int>(s.size());
  if (len == 0) return inf;
  if (rank == 0) return s(0) == 0.0 ? inf : tau / s(0);
  if (rank == len) return tau == 0.0 ? inf : s(rank - 1) / tau;
  return s(rank) == 0.0 ? inf : s(rank - 1) / s(rank);
}

}  // namespace detail

/// `reference_scale` raises sigma_max in the cut to at least that value, so a
/// matrix that is small relative to its source problem can have rank 0.
template <typename Derived>
RankInfo numerical_rank(const Eigen::MatrixBase<Derived>& mat, const RankPolicy& policy = {},
                        double reference_scale = 0.0) {
  RankInfo info;
  if (mat.size() == 0) return info;
  using Plain = typename Derived::PlainObject;
  Eigen::JacobiSVD<Plain> svd(mat.eval());
  info.singular_values = svd.singularValues().template cast<double>();
  const RealVector& s = info.singular_values;
  const double sigma_max = std::max(s.size() > 0 ? static_cast<double>(s(0)) : 0.0, reference_scale);
  info.threshold =
      policy.rel_eps * static_cast<double>(std::max(mat.rows(), mat.cols())) * sigma_max;
  int rank = 0;
  for (Eigen::Index i = 0; i < s.size(); ++i) {
    if (s(i) > info.threshold) ++rank;
  }
  info.rank = rank;
  info.margin = detail::cut_margin(s, rank, info.threshold);
  return info;
}

/// Largest absolute entry; 0 for an empty matrix.
template <typename Derived>
double max_abs(const Eigen::MatrixBase<Derived>& mat) {
  return mat.size() == 0 ? 0.0 : static_cast<double>(mat.cwiseAbs().maxCoeff());
}

template <typename DerivedA, typename DerivedB>
auto kron(const Eigen::MatrixBase<DerivedA>& a, const Eigen::MatrixBase<DerivedB>& b) {
  using Scalar = typename DerivedA::Scalar;
  Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> out(a.rows() * b.rows(),
                                                            a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

}  // namespace detvar
