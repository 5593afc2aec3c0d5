#pragma once

#include "detvar/statecore.hpp"

namespace detvar {

/// A representative (r_1, ..., r_m) of a point of CP^{m-1}. Coordinates are
/// stored as given; canonical() rescales so the first largest-modulus entry is 1.
class ProjectivePoint {
 public:
  explicit ProjectivePoint(ComplexVector coords);

  int dim() const { return static_cast<int>(coords_.size()); }
  const ComplexVector& coords() const { return coords_; }
  Complex operator[](int i) const { return coords_(i); }

  ProjectivePoint canonical() const;
  ProjectivePoint scaled(Complex lambda) const;

 private:
  ComplexVector coords_;
};

/// Fubini-Study distance (angle in [0, pi/2]) between the lines through a and b.
double projective_distance(const ProjectivePoint& a, const ProjectivePoint& b);

/// Complex-Gaussian coordinates then canonical normalization.
ProjectivePoint random_point(int dim, Rng& rng);

ProjectivePoint basis_point(int dim, int index);

/// The m blocks A_w (n x t) of the ensemble matrix, w = 0..m-1.
struct PencilBlocks {
  int dim_a = 0;
  int dim_b = 0;
  std::vector<ComplexMatrix> blocks;
  RealVector weights;

  int terms() const { return static_cast<int>(weights.size()); }
};

PencilBlocks pencil_blocks(const Ensemble& e);

/// sum_i r_i A_i (n x t).
ComplexMatrix eval_holomorphic_pencil(const PencilBlocks& pb, const ProjectivePoint& r);

/// Relative bound on the anti-Hermitian part of M(r) before it is symmetrized.
inline constexpr double kPencilHermitianTol = 1e-10;

/// M(r) = sum_{ij} r_i conj(r_j) rho_ij, Hermitized.
ComplexMatrix eval_M(const DensityMatrix& rho, const ProjectivePoint& r);

/// ||rho||_F * ||r||^2: bounds ||M(r)|| and is invariant under local unitaries.
double pencil_scale(const DensityMatrix& rho, const ProjectivePoint& r);

/// The same form with the roles of A and B exchanged; r has n coordinates.
ComplexMatrix eval_M_B(const DensityMatrix& rho, const ProjectivePoint& r);

/// n x m matrix with entry (j, i) = a_ij, so (entries * r)_j is the j-th
/// linear form a_1j r_1 + ... + a_mj r_m of the pure-state pencil.
ComplexMatrix pure_coefficients(const PureState& v);

}  // namespace detvar
