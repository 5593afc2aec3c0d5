#include <gtest/gtest.h>

#include <cmath>

#include "detvar/invariants.hpp"
#include "support/oracles.hpp"

using namespace detvar;

namespace {

ComplexVector vec(std::initializer_list<Complex> xs) {
  ComplexVector v(static_cast<Eigen::Index>(xs.size()));
  Eigen::Index i = 0;
  for (Complex x : xs) v(i++) = x;
  return v;
}

DensityMatrix bell_density() {
  ComplexVector v = ComplexVector::Zero(4);
  v(0) = v(3) = 1.0 / std::sqrt(2.0);
  return validate_density(v * v.adjoint(), 2, 2);
}

PureState pure_from_matrix(const ComplexMatrix& amp) {
  const int m = static_cast<int>(amp.rows());
  const int n = static_cast<int>(amp.cols());
  ComplexVector v(m * n);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < n; ++j) v(i * n + j) = amp(i, j);
  return PureState(m, n, v / v.norm());
}

}  // namespace

TEST(Membership, BellStateHasEmptyZeroVariety) {
  const DensityMatrix rho = bell_density();
  Rng rng(1);
  for (int trial = 0; trial < 20; ++trial) {
    const ProjectivePoint r = random_point(2, rng);
    const MembershipResult zero = member_VA(rho, r, 0);
    EXPECT_FALSE(zero.member);
    EXPECT_EQ(zero.rank, 1);
    EXPECT_TRUE(member_VA(rho, r, 1).member);
  }
}

TEST(Membership, ProductStateRootIsTheOnlyZeroPoint) {
  const ComplexVector a = vec({0.6, Complex(0.0, 0.8)});
  const ComplexVector b = vec({1.0, 0.0});
  const ComplexVector v = kron(a, b);
  const DensityMatrix rho = validate_density(v * v.adjoint(), 2, 2);
  const ProjectivePoint root(vec({a(1), -a(0)}));
  const MembershipResult hit = member_VA(rho, root, 0);
  EXPECT_TRUE(hit.member);
  EXPECT_EQ(hit.rank, 0);
  EXPECT_FALSE(member_VA(rho, basis_point(2, 0), 0).member);
  EXPECT_FALSE(member_VA(rho, ProjectivePoint(vec({1.0, 1.0})), 0).member);
}

TEST(Membership, KOutOfRange) {
  const DensityMatrix rho = maximally_mixed(2, 3);
  EXPECT_THROW(member_VA(rho, basis_point(2, 0), 3), Error);
  EXPECT_THROW(member_VA(rho, basis_point(2, 0), -1), Error);
  EXPECT_THROW(member_VB(rho, basis_point(3, 0), 2), Error);
  EXPECT_NO_THROW(member_VB(rho, basis_point(3, 0), 1));
  try {
    member_VA(rho, basis_point(2, 0), 3);
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::KOutOfRange);
  }
}

TEST(Membership, MaximallyMixedHasNoRankDrop) {
  Rng rng(2);
  const DensityMatrix rho = maximally_mixed(3, 3);
  for (int trial = 0; trial < 20; ++trial) {
    const ProjectivePoint r = random_point(3, rng);
    for (int k = 0; k < 3; ++k) {
      const MembershipResult res = member_VA(rho, r, k);
      EXPECT_FALSE(res.member);
      EXPECT_EQ(res.rank, 3);
    }
  }
}

TEST(Membership, PlantedPointsAreMembersAndScaleInvariant) {
  Rng rng(3);
  for (int trial = 0; trial < 40; ++trial) {
    const ProjectivePoint at = random_point(3, rng);
    const DensityMatrix rho = density_from_ensemble(oracle::planted_ensemble(3, 3, 4, at.coords(), 1, rng));
    EXPECT_TRUE(member_VA(rho, at, 1).member);
    EXPECT_FALSE(member_VA(rho, at, 0).member);
    const Complex lambda(0.3, 2.0);
    EXPECT_EQ(member_VA(rho, at.scaled(lambda), 1).member, member_VA(rho, at, 1).member);
    const ProjectivePoint generic = random_point(3, rng);
    EXPECT_EQ(member_VA(rho, generic.scaled(lambda), 1).member, member_VA(rho, generic, 1).member);
  }
}

TEST(Membership, SeparableStateVBHasProductRoots) {
  // For sum_l p_l |a_l><a_l| (x) |b_l><b_l| on 2 (x) 2 with two terms,
  // M_B(s) = sum_l p_l |<conj s, b_l>|^2 a_l a_l^dagger loses rank where s kills b_l.
  Rng rng(4);
  const ProductEnsemble pe = random_product_ensemble(2, 2, 2, rng);
  const DensityMatrix rho = density_from_ensemble(product_ensemble_to_ensemble(pe));
  for (int l = 0; l < 2; ++l) {
    const ComplexVector& b = pe.factors_b().col(l);
    const ProjectivePoint s(vec({b(1), -b(0)}));
    const MembershipResult res = member_VB(rho, s, 1);
    EXPECT_TRUE(res.member);
    EXPECT_EQ(res.rank, 1);
  }
  EXPECT_FALSE(member_VB(rho, random_point(2, rng), 1).member);
}

TEST(Schmidt, Examples) {
  const PureState bell = pure_from_matrix(ComplexMatrix::Identity(2, 2));
  const SchmidtReport b = schmidt_number(bell);
  EXPECT_EQ(b.d, 2);
  EXPECT_FALSE(b.v0_dim.has_value());
  EXPECT_NEAR(b.coefficients(0), 1.0 / std::sqrt(2.0), 1e-15);

  ComplexMatrix prod = ComplexMatrix::Zero(3, 3);
  prod(0, 0) = 1.0;
  const SchmidtReport p = schmidt_number(pure_from_matrix(prod));
  EXPECT_EQ(p.d, 1);
  ASSERT_TRUE(p.v0_dim.has_value());
  EXPECT_EQ(*p.v0_dim, 1);

  ComplexMatrix three = ComplexMatrix::Zero(4, 4);
  three(0, 0) = 1.0;
  three(1, 1) = 1.0;
  three(2, 2) = 1.0;
  const SchmidtReport t = schmidt_number(pure_from_matrix(three));
  EXPECT_EQ(t.d, 3);
  ASSERT_TRUE(t.v0_dim.has_value());
  EXPECT_EQ(*t.v0_dim, 0);
}

TEST(Schmidt, WideStatesAreOrientedFirst) {
  Rng rng(5);
  const PureState v = random_pure_state_with_rank(4, 2, 2, rng);
  const SchmidtReport r = schmidt_number(v);
  EXPECT_TRUE(r.swapped);
  EXPECT_EQ(r.d, 2);
  EXPECT_FALSE(r.v0_dim.has_value());
}

TEST(Schmidt, AgreesWithIndependentSvd) {
  Rng rng(6);
  for (int trial = 0; trial < 100; ++trial) {
    std::uniform_int_distribution<int> dim(2, 5);
    const int m = dim(rng);
    const int n = dim(rng);
    std::uniform_int_distribution<int> rank(1, std::min(m, n));
    const int d = rank(rng);
    const PureState v = random_pure_state_with_rank(m, n, d, rng);
    const SchmidtReport r = schmidt_number(v);
    EXPECT_EQ(r.d, d);
    EXPECT_EQ(r.d, oracle::svd_rank(oracle::amplitude_matrix(v)));
    EXPECT_NEAR(r.coefficients.squaredNorm(), 1.0, 1e-12);
  }
}

TEST(Schmidt, ZeroVarietyIsTheCoefficientKernel) {
  Rng rng(7);
  for (int trial = 0; trial < 30; ++trial) {
    const PureState v = random_pure_state_with_rank(4, 5, 2, rng);
    const std::vector<ProjectivePoint> basis = v0_kernel_basis(v);
    ASSERT_EQ(basis.size(), 2u);
    const DensityMatrix rho = density_from_pure(v);
    for (const ProjectivePoint& r : basis) {
      EXPECT_LT((pure_coefficients(v) * r.coords()).norm(), 1e-12);
      EXPECT_TRUE(member_VA(rho, r, 0).member);
    }
    const ComplexVector mix = basis[0].coords() + Complex(0.5, -1.0) * basis[1].coords();
    EXPECT_TRUE(member_VA(rho, ProjectivePoint(mix), 0).member);
  }
}

TEST(ProductFactors, RecoversFactorsUpToPhase) {
  Rng rng(8);
  for (int trial = 0; trial < 50; ++trial) {
    const ComplexVector a = random_unit_vector(3, rng);
    const ComplexVector b = random_unit_vector(4, rng);
    const PureState v(3, 4, kron(a, b));
    const auto f = product_factors(v);
    ASSERT_TRUE(f.has_value());
    EXPECT_GE(f->fidelity, 1.0 - 1e-12);
    EXPECT_NEAR(std::abs(a.dot(f->a)), 1.0, 1e-12);
    EXPECT_NEAR(std::abs(b.dot(f->b)), 1.0, 1e-12);
  }
  EXPECT_FALSE(product_factors(pure_from_matrix(ComplexMatrix::Identity(2, 2))).has_value());
}

TEST(LocalTransform, MatchesBlockwiseDoubleSum) {
  Rng rng(9);
  for (int trial = 0; trial < 20; ++trial) {
    const DensityMatrix rho = random_density(3, 2, 3, rng);
    const LocalUnitary t = LocalUnitary::haar(3, 2, static_cast<std::uint64_t>(trial));
    const DensityMatrix out = transform_local(rho, t);
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j)
        EXPECT_LT(max_abs(block(out, i, j) - oracle::transformed_block(rho, t.u_a(), t.u_b(), i, j)), 1e-14);
  }
}

TEST(LocalTransform, RejectsNonUnitary) {
  EXPECT_THROW(LocalUnitary(2.0 * ComplexMatrix::Identity(2, 2), ComplexMatrix::Identity(2, 2)), Error);
}

TEST(LocalTransform, PencilTransformsCovariantly) {
  // M_{T rho}(r) = U_B M_rho(U_A^T r) U_B^dagger.
  Rng rng(10);
  const DensityMatrix rho = random_density(3, 3, 4, rng);
  const LocalUnitary t = LocalUnitary::haar(3, 3, 77);
  const DensityMatrix out = transform_local(rho, t);
  for (int trial = 0; trial < 10; ++trial) {
    const ProjectivePoint r = random_point(3, rng);
    const ProjectivePoint pulled(t.u_a().transpose() * r.coords());
    const ComplexMatrix expected = t.u_b() * eval_M(rho, pulled) * t.u_b().adjoint();
    EXPECT_LT(max_abs(eval_M(out, r) - expected), 1e-14);
  }
}

TEST(Pushforward, IdentityAndBasisPermutation) {
  Rng rng(11);
  const ProjectivePoint r = random_point(3, rng);
  EXPECT_LT(projective_distance(pushforward_point(r, ComplexMatrix::Identity(3, 3)), r), 1e-7);
  ComplexMatrix swap = ComplexMatrix::Zero(2, 2);
  swap(0, 1) = swap(1, 0) = 1.0;
  EXPECT_LT(projective_distance(pushforward_point(basis_point(2, 0), swap), basis_point(2, 1)), 1e-7);
}

TEST(Covariance, IdentityTransformAgreesEverywhere) {
  Rng rng(12);
  const DensityMatrix rho = random_density(2, 3, 3, rng);
  const CovarianceReport r = check_covariance(rho, LocalUnitary::identity(2, 3), 1, 50, 5);
  EXPECT_EQ(r.disagree, 0);
  EXPECT_EQ(r.agree + r.near_threshold, 50);
}

TEST(Covariance, MaximallyMixedAndBell) {
  const CovarianceReport mm = check_covariance(maximally_mixed(3, 3), LocalUnitary::haar(3, 3, 1), 2, 40, 2);
  EXPECT_EQ(mm.disagree, 0);
  EXPECT_EQ(mm.agree, 40);
  const CovarianceReport bell = check_covariance(bell_density(), LocalUnitary::haar(2, 2, 3), 0, 40, 4);
  EXPECT_EQ(bell.disagree, 0);
  EXPECT_EQ(bell.agree, 40);
}

TEST(Covariance, PlantedPointsMoveWithTheTransform) {
  Rng rng(13);
  for (int trial = 0; trial < 30; ++trial) {
    const ProjectivePoint at = random_point(3, rng);
    const DensityMatrix rho = density_from_ensemble(oracle::planted_ensemble(3, 2, 3, at.coords(), 1, rng));
    const LocalUnitary t = LocalUnitary::haar(3, 2, static_cast<std::uint64_t>(100 + trial));
    // The image of `at` under the inverse pullback lies on the transformed variety.
    const ProjectivePoint image(t.u_a().conjugate() * at.coords());
    EXPECT_TRUE(member_VA(transform_local(rho, t), image, 1).member);
    const CovarianceReport r = check_covariance_at(rho, t, 1, {image, random_point(3, rng)});
    EXPECT_EQ(r.disagree, 0);
    EXPECT_EQ(r.agree, 2);
  }
}

TEST(Covariance, FactorSwapExchangesVarieties) {
  Rng rng(14);
  const DensityMatrix rho = random_density(2, 3, 2, rng);
  const DensityMatrix swapped = swap_factors(rho);
  for (int trial = 0; trial < 20; ++trial) {
    const ProjectivePoint s = random_point(3, rng);
    EXPECT_LT(max_abs(eval_M_B(rho, s) - eval_M(swapped, s)), 1e-16);
    EXPECT_EQ(member_VB(rho, s, 1).member, member_VA(swapped, s, 1).member);
  }
}
