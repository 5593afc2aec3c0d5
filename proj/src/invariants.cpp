#include "detvar/invariants.hpp"

#include <cmath>
#include <limits>
#include <string>

namespace detvar {

namespace {

void require_unitary(const ComplexMatrix& u, const char* name) {
  if (u.rows() != u.cols() || u.rows() == 0) {
    throw Error(ErrorKind::ShapeMismatch, std::string(name) + " must be square and nonempty");
  }
  const double err = max_abs(u * u.adjoint() - ComplexMatrix::Identity(u.rows(), u.cols()));
  if (err > kUnitaryTol) {
    throw Error(ErrorKind::InvalidArgument, std::string(name) + " is not unitary, max|UU^dagger - I| = " +
                                                std::to_string(err));
  }
}

MembershipResult membership_from_matrix(const ComplexMatrix& mat, double scale, int k, const RankPolicy& policy) {
  const RankInfo info = numerical_rank(mat, policy, scale);
  return MembershipResult{info.rank <= k, info.rank, info.margin, k};
}

}  // namespace

LocalUnitary::LocalUnitary(ComplexMatrix u_a, ComplexMatrix u_b) : u_a_(std::move(u_a)), u_b_(std::move(u_b)) {
  require_unitary(u_a_, "U_A");
  require_unitary(u_b_, "U_B");
}

LocalUnitary LocalUnitary::identity(int m, int n) {
  return LocalUnitary(ComplexMatrix::Identity(m, m), ComplexMatrix::Identity(n, n));
}

LocalUnitary LocalUnitary::haar(int m, int n, std::uint64_t seed) {
  return LocalUnitary(haar_unitary(m, derive_seed(seed, 0)), haar_unitary(n, derive_seed(seed, 1)));
}

MembershipResult member_VA(const DensityMatrix& rho, const ProjectivePoint& r, int k, const RankPolicy& policy) {
  if (k < 0 || k > rho.dim_b() - 1) {
    throw Error(ErrorKind::KOutOfRange,
                "k = " + std::to_string(k) + " outside 0.." + std::to_string(rho.dim_b() - 1));
  }
  return membership_from_matrix(eval_M(rho, r), pencil_scale(rho, r), k, policy);
}

MembershipResult member_VB(const DensityMatrix& rho, const ProjectivePoint& r, int k, const RankPolicy& policy) {
  if (k < 0 || k > rho.dim_a() - 1) {
    throw Error(ErrorKind::KOutOfRange,
                "k = " + std::to_string(k) + " outside 0.." + std::to_string(rho.dim_a() - 1));
  }
  return membership_from_matrix(eval_M_B(rho, r), pencil_scale(rho, r), k, policy);
}

SchmidtReport schmidt_number(const PureState& v, const RankPolicy& policy) {
  SchmidtReport report;
  const bool swap = v.dim_a() > v.dim_b();
  const PureState oriented = swap ? swap_factors(v) : v;
  const RankInfo info = numerical_rank(pure_coefficients(oriented), policy);
  const int m = oriented.dim_a();
  report.d = info.rank;
  report.swapped = swap;
  report.dim_a = m;
  // JacobiSVD returns singular values sorted descending.
  report.coefficients = info.singular_values.head(info.rank);
  if (report.d < m) report.v0_dim = m - 1 - report.d;
  return report;
}

std::vector<ProjectivePoint> v0_kernel_basis(const PureState& v, const RankPolicy& policy) {
  const ComplexMatrix c = pure_coefficients(v);
  Eigen::JacobiSVD<ComplexMatrix> svd(c, Eigen::ComputeFullV);
  const RealVector& s = svd.singularValues();
  const double tau = policy.rel_eps * static_cast<double>(std::max(c.rows(), c.cols())) *
                     (s.size() > 0 ? s(0) : 0.0);
  int rank = 0;
  for (Eigen::Index i = 0; i < s.size(); ++i) {
    if (s(i) > tau) ++rank;
  }
  std::vector<ProjectivePoint> basis;
  for (Eigen::Index col = rank; col < c.cols(); ++col) basis.emplace_back(svd.matrixV().col(col));
  return basis;
}

std::optional<ProductFactors> product_factors(const PureState& v, const RankPolicy& policy) {
  const ComplexMatrix c = pure_coefficients(v);
  if (numerical_rank(c, policy).rank != 1) return std::nullopt;
  // c = sigma u w^dagger with c(j, i) = a_i b_j, so b = u and a = sigma conj(w).
  Eigen::JacobiSVD<ComplexMatrix> svd(c, Eigen::ComputeThinU | Eigen::ComputeThinV);
  ProductFactors out;
  out.b = svd.matrixU().col(0);
  out.a = svd.singularValues()(0) * svd.matrixV().col(0).conjugate();
  const double norm_a = out.a.norm();
  out.a /= norm_a;
  const ComplexVector rebuilt = kron(out.a, out.b);
  out.fidelity = std::norm(rebuilt.dot(v.amplitudes()));
  return out;
}

DensityMatrix transform_local(const DensityMatrix& rho, const LocalUnitary& t) {
  if (t.u_a().rows() != rho.dim_a() || t.u_b().rows() != rho.dim_b()) {
    throw Error(ErrorKind::ShapeMismatch, "local unitary dimensions do not match the state");
  }
  const ComplexMatrix full = t.full();
  ComplexMatrix out = full * rho.matrix() * full.adjoint();
  out = 0.5 * (out + out.adjoint()).eval();
  return validate_density(out, rho.dim_a(), rho.dim_b());
}

ProjectivePoint pushforward_point(const ProjectivePoint& r, const ComplexMatrix& u_a) {
  if (u_a.rows() != r.dim() || u_a.cols() != r.dim()) {
    throw Error(ErrorKind::ShapeMismatch, "U_A does not match the point dimension");
  }
  return ProjectivePoint(u_a.transpose() * r.coords()).canonical();
}

CovarianceReport check_covariance_at(const DensityMatrix& rho, const LocalUnitary& t, int k,
                                     const std::vector<ProjectivePoint>& points,
                                     const CovarianceOptions& options) {
  const DensityMatrix transformed = transform_local(rho, t);
  struct Outcome {
    bool agree;
    bool near;
    double margin;
  };
  std::vector<Outcome> outcomes(points.size());
  const auto count = static_cast<std::ptrdiff_t>(points.size());
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t s = 0; s < count; ++s) {
    const ProjectivePoint& r = points[static_cast<std::size_t>(s)];
    const MembershipResult lhs = member_VA(transformed, r, k, options.policy);
    const MembershipResult rhs = member_VA(rho, pushforward_point(r, t.u_a()), k, options.policy);
    const double margin = std::min(lhs.margin, rhs.margin);
    outcomes[static_cast<std::size_t>(s)] = {lhs.member == rhs.member, margin < options.near_threshold_band,
                                             margin};
  }
  CovarianceReport report;
  report.min_margin = std::numeric_limits<double>::infinity();
  for (const Outcome& o : outcomes) {
    report.min_margin = std::min(report.min_margin, o.margin);
    if (o.near) {
      ++report.near_threshold;
    } else if (o.agree) {
      ++report.agree;
    } else {
      ++report.disagree;
    }
  }
  return report;
}

CovarianceReport check_covariance(const DensityMatrix& rho, const LocalUnitary& t, int k, int samples,
                                  std::uint64_t seed, const CovarianceOptions& options) {
  if (samples < 1) throw Error(ErrorKind::InvalidArgument, "samples must be >= 1");
  std::vector<ProjectivePoint> points;
  points.reserve(static_cast<std::size_t>(samples));
  for (int s = 0; s < samples; ++s) {
    Rng rng = make_rng(seed, static_cast<std::uint64_t>(s));
    points.push_back(random_point(rho.dim_a(), rng));
  }
  return check_covariance_at(rho, t, k, points, options);
}

}  // namespace detvar
