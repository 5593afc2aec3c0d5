#include <gtest/gtest.h>

#include <cmath>

#include "detvar/pencil.hpp"
#include "support/oracles.hpp"

using namespace detvar;

namespace {

ComplexMatrix via_ensemble(const PencilBlocks& pb, const ProjectivePoint& r) {
  const ComplexMatrix h = eval_holomorphic_pencil(pb, r);
  return h * pb.weights.cast<Complex>().asDiagonal() * h.adjoint();
}

ComplexVector vec(std::initializer_list<Complex> xs) {
  ComplexVector v(static_cast<Eigen::Index>(xs.size()));
  Eigen::Index i = 0;
  for (Complex x : xs) v(i++) = x;
  return v;
}

}  // namespace

TEST(ProjectivePoint, RejectsDegenerateCoordinates) {
  EXPECT_THROW(ProjectivePoint(ComplexVector::Zero(3)), Error);
  EXPECT_THROW(ProjectivePoint{ComplexVector()}, Error);
  ComplexVector bad = ComplexVector::Ones(2);
  bad(1) = Complex(std::nan(""), 0.0);
  EXPECT_THROW(ProjectivePoint{bad}, Error);
}

TEST(ProjectivePoint, CanonicalFormIsScaleInvariant) {
  Rng rng(12);
  const ProjectivePoint r = random_point(4, rng);
  const ProjectivePoint s = r.scaled(Complex(-2.5, 0.7));
  EXPECT_LT((r.canonical().coords() - s.canonical().coords()).norm(), 1e-14);
  EXPECT_LT(projective_distance(r, s), 1e-7);
  EXPECT_NEAR(projective_distance(basis_point(2, 0), basis_point(2, 1)), std::acos(0.0), 1e-15);
}

TEST(EvalM, BasisPointsGiveDiagonalBlocks) {
  Rng rng(1);
  const DensityMatrix rho = random_density(3, 2, 3, rng);
  for (int i = 0; i < 3; ++i) {
    EXPECT_LT(max_abs(eval_M(rho, basis_point(3, i)) - block(rho, i, i)), 1e-16);
  }
}

TEST(EvalM, MaximallyMixedIsScaledIdentity) {
  Rng rng(2);
  const DensityMatrix rho = maximally_mixed(2, 3);
  for (int trial = 0; trial < 10; ++trial) {
    const ProjectivePoint r = random_point(2, rng);
    const ComplexMatrix expected = ComplexMatrix::Identity(3, 3) * (r.coords().squaredNorm() / 6.0);
    EXPECT_LT(max_abs(eval_M(rho, r) - expected), 1e-16);
  }
}

TEST(EvalM, BellStateIsRankOneEverywhere) {
  // For (|11> + |22>)/sqrt2 the blocks are E_ij / 2, so M(r) = r r^dagger / 2.
  ComplexVector bell = ComplexVector::Zero(4);
  bell(0) = bell(3) = 1.0 / std::sqrt(2.0);
  const DensityMatrix rho = validate_density(bell * bell.adjoint(), 2, 2);
  Rng rng(3);
  for (int trial = 0; trial < 20; ++trial) {
    const ProjectivePoint r = random_point(2, rng);
    const ComplexMatrix expected = 0.5 * r.coords() * r.coords().adjoint();
    EXPECT_LT(max_abs(eval_M(rho, r) - expected), 1e-15);
    EXPECT_EQ(numerical_rank(eval_M(rho, r)).rank, 1);
  }
}

TEST(EvalM, ProductVectorVanishesOnAHyperplane) {
  // |a (x) b><a (x) b| gives M(r) = |sum_i r_i a_i|^2 b b^dagger.
  const ComplexVector a = vec({0.6, Complex(0.0, 0.8)});
  const ComplexVector b = vec({Complex(0.0, 1.0) / std::sqrt(2.0), 1.0 / std::sqrt(2.0)});
  const ComplexVector v = kron(a, b);
  const DensityMatrix rho = validate_density(v * v.adjoint(), 2, 2);
  Rng rng(4);
  for (int trial = 0; trial < 10; ++trial) {
    const ProjectivePoint r = random_point(2, rng);
    const double lin = std::norm(r.coords().cwiseProduct(a).sum());
    EXPECT_LT(max_abs(eval_M(rho, r) - lin * b * b.adjoint()), 1e-15);
  }
  const ProjectivePoint root(vec({a(1), -a(0)}));
  EXPECT_LT(max_abs(eval_M(rho, root)), 1e-16);
}

TEST(EvalM, ShapeMismatch) {
  EXPECT_THROW(eval_M(maximally_mixed(2, 2), basis_point(3, 0)), Error);
}

TEST(Pencil, EnsembleFactorizationIdentity) {
  Rng rng(5);
  for (int trial = 0; trial < 100; ++trial) {
    std::uniform_int_distribution<int> dim(1, 4);
    const int m = dim(rng);
    const int n = dim(rng);
    std::uniform_int_distribution<int> terms(1, m * n);
    const Ensemble e = random_ensemble(m, n, terms(rng), rng);
    const DensityMatrix rho = density_from_ensemble(e);
    const PencilBlocks pb = pencil_blocks(e);
    for (int s = 0; s < 5; ++s) {
      const ProjectivePoint r = random_point(m, rng);
      const ComplexMatrix lhs = eval_M(rho, r);
      EXPECT_LE(max_abs(lhs - via_ensemble(pb, r)), 1e-12);
      EXPECT_EQ(numerical_rank(lhs).rank, numerical_rank(eval_holomorphic_pencil(pb, r)).rank);
    }
  }
}

TEST(Pencil, RankDropsAtPlantedPoints) {
  Rng rng(6);
  for (int trial = 0; trial < 50; ++trial) {
    const ProjectivePoint at = random_point(3, rng);
    const Ensemble e = oracle::planted_ensemble(3, 3, 3, at.coords(), 1, rng);
    const DensityMatrix rho = density_from_ensemble(e);
    EXPECT_EQ(numerical_rank(eval_holomorphic_pencil(pencil_blocks(e), at)).rank, 1);
    EXPECT_EQ(numerical_rank(eval_M(rho, at)).rank, 1);
    EXPECT_EQ(oracle::svd_rank(eval_M(rho, at)), 1);
  }
}

TEST(Pencil, RankDoesNotDependOnTheEnsemble) {
  Rng rng(7);
  for (int trial = 0; trial < 30; ++trial) {
    const ProjectivePoint at = random_point(2, rng);
    const Ensemble e = oracle::planted_ensemble(2, 3, 3, at.coords(), 2, rng);
    const DensityMatrix rho = density_from_ensemble(e);
    const Ensemble eig = eigen_ensemble(rho);
    const Ensemble mixed = remix_ensemble(eig, haar_unitary(eig.size(), rng));
    for (const ProjectivePoint& r : {at, random_point(2, rng)}) {
      const int expected = numerical_rank(eval_M(rho, r)).rank;
      EXPECT_EQ(numerical_rank(eval_holomorphic_pencil(pencil_blocks(e), r)).rank, expected);
      EXPECT_EQ(numerical_rank(eval_holomorphic_pencil(pencil_blocks(eig), r)).rank, expected);
      EXPECT_EQ(numerical_rank(eval_holomorphic_pencil(pencil_blocks(mixed), r)).rank, expected);
    }
  }
}

TEST(Pencil, ScalingThePointScalesM) {
  Rng rng(8);
  const DensityMatrix rho = random_density(3, 3, 5, rng);
  const ProjectivePoint r = random_point(3, rng);
  const Complex lambda(1.3, -0.4);
  const ComplexMatrix base = eval_M(rho, r);
  EXPECT_LT(max_abs(eval_M(rho, r.scaled(lambda)) - std::norm(lambda) * base), 1e-14);
  EXPECT_EQ(numerical_rank(eval_M(rho, r.scaled(lambda))).rank, numerical_rank(base).rank);
}

TEST(Pencil, PureStateIsOuterProductOfCoefficientColumn) {
  Rng rng(9);
  const PureState v = random_pure_state(3, 4, rng);
  const DensityMatrix rho = density_from_pure(v);
  const ComplexMatrix c = pure_coefficients(v);
  EXPECT_LT(max_abs(c - oracle::amplitude_matrix(v).transpose()), 1e-16);
  for (int trial = 0; trial < 10; ++trial) {
    const ProjectivePoint r = random_point(3, rng);
    const ComplexVector w = c * r.coords();
    EXPECT_LT(max_abs(eval_M(rho, r) - w * w.adjoint()), 1e-15);
  }
}

TEST(EvalMB, ProductAndMaximallyMixed) {
  const ComplexVector a = vec({0.6, Complex(0.0, 0.8)});
  const ComplexVector b = vec({1.0 / std::sqrt(3.0), Complex(0.0, 1.0) / std::sqrt(3.0), 1.0 / std::sqrt(3.0)});
  const ComplexVector v = kron(a, b);
  const DensityMatrix rho = validate_density(v * v.adjoint(), 2, 3);
  Rng rng(10);
  for (int trial = 0; trial < 10; ++trial) {
    const ProjectivePoint s = random_point(3, rng);
    const double lin = std::norm(s.coords().cwiseProduct(b).sum());
    EXPECT_LT(max_abs(eval_M_B(rho, s) - lin * a * a.adjoint()), 1e-15);
    const ComplexMatrix mm = eval_M_B(maximally_mixed(2, 3), s);
    EXPECT_LT(max_abs(mm - ComplexMatrix::Identity(2, 2) * (s.coords().squaredNorm() / 6.0)), 1e-16);
  }
}
