#pragma once

#include <optional>

#include "detvar/pencil.hpp"

namespace detvar {

/// T = U_A (x) U_B.
class LocalUnitary {
 public:
  LocalUnitary(ComplexMatrix u_a, ComplexMatrix u_b);

  static LocalUnitary identity(int m, int n);
  static LocalUnitary haar(int m, int n, std::uint64_t seed);

  const ComplexMatrix& u_a() const { return u_a_; }
  const ComplexMatrix& u_b() const { return u_b_; }
  ComplexMatrix full() const { return kron(u_a_, u_b_); }

 private:
  ComplexMatrix u_a_;
  ComplexMatrix u_b_;
};

inline constexpr double kUnitaryTol = 1e-12;

struct MembershipResult {
  bool member = false;
  int rank = 0;
  double margin = 0.0;
  int k = 0;
};

/// Is r in V_A^k(rho), i.e. rank M(r) <= k?
MembershipResult member_VA(const DensityMatrix& rho, const ProjectivePoint& r, int k,
                           const RankPolicy& policy = {});

/// Is r' in V_B^k(rho)? r' has n coordinates and k ranges over 0..m-1.
MembershipResult member_VB(const DensityMatrix& rho, const ProjectivePoint& r, int k,
                           const RankPolicy& policy = {});

struct SchmidtReport {
  int d = 0;
  /// Projective dimension of V_A^0, empty when the variety is empty (d = m).
  std::optional<int> v0_dim;
  /// Nonzero Schmidt coefficients, descending.
  RealVector coefficients;
  /// True when m > n and the factors were exchanged before reading off V_A^0.
  bool swapped = false;
  int dim_a = 0;
};

SchmidtReport schmidt_number(const PureState& v, const RankPolicy& policy = {});

/// Orthonormal basis of the kernel of the coefficient matrix, i.e. of the
/// linear space whose projectivization is V_A^0(P_v).
std::vector<ProjectivePoint> v0_kernel_basis(const PureState& v, const RankPolicy& policy = {});

struct ProductFactors {
  ComplexVector a;
  ComplexVector b;
  double fidelity = 0.0;
};

/// Recovers v = a (x) b from a rank-one coefficient matrix; nullopt when d != 1.
std::optional<ProductFactors> product_factors(const PureState& v, const RankPolicy& policy = {});

/// (U_A (x) U_B) rho (U_A (x) U_B)^dagger.
DensityMatrix transform_local(const DensityMatrix& rho, const LocalUnitary& t);

/// r'_l = sum_i r_i u_il, canonically normalized.
ProjectivePoint pushforward_point(const ProjectivePoint& r, const ComplexMatrix& u_a);

struct CovarianceReport {
  int agree = 0;
  int disagree = 0;
  int near_threshold = 0;
  double min_margin = 0.0;
};

struct CovarianceOptions {
  RankPolicy policy{};
  /// Samples whose margin on either side falls below this ratio are set aside.
  double near_threshold_band = 10.0;
};

/// Compares r in V_A^k(T(rho)) with pushforward(r) in V_A^k(rho) at the given points.
CovarianceReport check_covariance_at(const DensityMatrix& rho, const LocalUnitary& t, int k,
                                     const std::vector<ProjectivePoint>& points,
                                     const CovarianceOptions& options = {});

/// Same check at `samples` random points; point s is drawn from derive_seed(seed, s).
CovarianceReport check_covariance(const DensityMatrix& rho, const LocalUnitary& t, int k, int samples,
                                  std::uint64_t seed, const CovarianceOptions& options = {});

}  // namespace detvar
