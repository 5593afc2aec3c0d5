#include "detvar/pencil.hpp"

#include <cmath>
#include <string>

namespace detvar {

ProjectivePoint::ProjectivePoint(ComplexVector coords) : coords_(std::move(coords)) {
  if (coords_.size() == 0) throw Error(ErrorKind::ShapeMismatch, "projective point needs >= 1 coordinate");
  if (!coords_.allFinite()) throw Error(ErrorKind::NonFinite, "projective point has NaN/Inf coordinates");
  if (coords_.cwiseAbs().maxCoeff() == 0.0) {
    throw Error(ErrorKind::InvalidArgument, "projective point coordinates are all zero");
  }
}

ProjectivePoint ProjectivePoint::canonical() const {
  Eigen::Index pivot = 0;
  coords_.cwiseAbs().maxCoeff(&pivot);
  ComplexVector c = coords_ / coords_(pivot);
  c(pivot) = Complex(1.0, 0.0);
  return ProjectivePoint(std::move(c));
}

ProjectivePoint ProjectivePoint::scaled(Complex lambda) const { return ProjectivePoint(coords_ * lambda); }

double projective_distance(const ProjectivePoint& a, const ProjectivePoint& b) {
  if (a.dim() != b.dim()) throw Error(ErrorKind::ShapeMismatch, "points live in different spaces");
  const double overlap = std::abs(a.coords().dot(b.coords())) / (a.coords().norm() * b.coords().norm());
  return std::acos(std::min(1.0, overlap));
}

ProjectivePoint random_point(int dim, Rng& rng) {
  return ProjectivePoint(random_gaussian_vector(dim, rng)).canonical();
}

ProjectivePoint basis_point(int dim, int index) {
  if (index < 0 || index >= dim) throw Error(ErrorKind::IndexOutOfRange, "basis index out of range");
  ComplexVector c = ComplexVector::Zero(dim);
  c(index) = 1.0;
  return ProjectivePoint(std::move(c));
}

PencilBlocks pencil_blocks(const Ensemble& e) {
  const int m = e.dim_a();
  const int n = e.dim_b();
  PencilBlocks pb;
  pb.dim_a = m;
  pb.dim_b = n;
  pb.weights = e.weights();
  pb.blocks.reserve(m);
  for (int w = 0; w < m; ++w) {
    pb.blocks.push_back(e.vectors().middleRows(static_cast<Eigen::Index>(w) * n, n));
  }
  return pb;
}

ComplexMatrix eval_holomorphic_pencil(const PencilBlocks& pb, const ProjectivePoint& r) {
  if (r.dim() != pb.dim_a) {
    throw Error(ErrorKind::ShapeMismatch,
                "point has " + std::to_string(r.dim()) + " coordinates, pencil has " + std::to_string(pb.dim_a));
  }
  ComplexMatrix out = ComplexMatrix::Zero(pb.dim_b, pb.terms());
  for (int i = 0; i < pb.dim_a; ++i) out += r[i] * pb.blocks[i];
  return out;
}

ComplexMatrix eval_M(const DensityMatrix& rho, const ProjectivePoint& r) {
  const int m = rho.dim_a();
  const int n = rho.dim_b();
  if (r.dim() != m) {
    throw Error(ErrorKind::ShapeMismatch,
                "point has " + std::to_string(r.dim()) + " coordinates, expected " + std::to_string(m));
  }
  ComplexMatrix out = ComplexMatrix::Zero(n, n);
  const ComplexMatrix& mat = rho.matrix();
  for (int i = 0; i < m; ++i) {
    for (int j = 0; j < m; ++j) {
      out += (r[i] * std::conj(r[j])) * mat.block(static_cast<Eigen::Index>(i) * n,
                                                  static_cast<Eigen::Index>(j) * n, n, n);
    }
  }
  const double residue = max_abs(out - out.adjoint()) / 2.0;
  if (residue > kPencilHermitianTol * std::max(1.0, max_abs(out))) {
    throw Error(ErrorKind::NotHermitian, "anti-Hermitian residue of M(r) is " + std::to_string(residue));
  }
  return 0.5 * (out + out.adjoint());
}

double pencil_scale(const DensityMatrix& rho, const ProjectivePoint& r) {
  return rho.matrix().norm() * r.coords().squaredNorm();
}

ComplexMatrix eval_M_B(const DensityMatrix& rho, const ProjectivePoint& r) {
  return eval_M(swap_factors(rho), r);
}

ComplexMatrix pure_coefficients(const PureState& v) {
  const int m = v.dim_a();
  const int n = v.dim_b();
  ComplexMatrix c(n, m);
  for (int i = 0; i < m; ++i) {
    for (int j = 0; j < n; ++j) c(j, i) = v.amplitude(i, j);
  }
  return c;
}

}  // namespace detvar
