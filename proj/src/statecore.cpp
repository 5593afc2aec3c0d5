#include "detvar/statecore.hpp"

#include <cmath>
#include <sstream>

namespace detvar {

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::ShapeMismatch: return "ShapeMismatch";
    case ErrorKind::NotHermitian: return "NotHermitian";
    case ErrorKind::NotPositive: return "NotPositive";
    case ErrorKind::TraceNotOne: return "TraceNotOne";
    case ErrorKind::NotNormalized: return "NotNormalized";
    case ErrorKind::NonPositiveWeight: return "NonPositiveWeight";
    case ErrorKind::NonFinite: return "NonFinite";
    case ErrorKind::IndexOutOfRange: return "IndexOutOfRange";
    case ErrorKind::KOutOfRange: return "KOutOfRange";
    case ErrorKind::CombinatorialBlowup: return "CombinatorialBlowup";
    case ErrorKind::DegreeZero: return "DegreeZero";
    case ErrorKind::EnsembleMismatch: return "EnsembleMismatch";
    case ErrorKind::NotPure: return "NotPure";
    case ErrorKind::ParseError: return "ParseError";
    case ErrorKind::InvalidArgument: return "InvalidArgument";
  }
  return "Unknown";
}

namespace {

std::string fmt_double(double x) {
  std::ostringstream os;
  os.precision(3);
  os << std::scientific << x;
  return os.str();
}

void require_finite(const ComplexMatrix& mat, const char* what) {
  if (!mat.allFinite()) throw Error(ErrorKind::NonFinite, std::string(what) + " has NaN/Inf entries");
}

void require_dims(int m, int n) {
  if (m < 1 || n < 1) {
    throw Error(ErrorKind::ShapeMismatch,
                "subsystem dimensions must be >= 1, got " + std::to_string(m) + "x" + std::to_string(n));
  }
}

}  // namespace

Ensemble::Ensemble(int m, int n, RealVector weights, ComplexMatrix vectors)
    : m_(m), n_(n), weights_(std::move(weights)), vectors_(std::move(vectors)) {
  require_dims(m, n);
  if (vectors_.rows() != static_cast<Eigen::Index>(m) * n) {
    throw Error(ErrorKind::ShapeMismatch, "ensemble vectors have length " +
                                              std::to_string(vectors_.rows()) + ", expected " +
                                              std::to_string(m * n));
  }
  if (vectors_.cols() != weights_.size() || weights_.size() == 0) {
    throw Error(ErrorKind::ShapeMismatch, "ensemble needs one weight per vector and at least one term");
  }
  require_finite(vectors_, "ensemble vectors");
  if (!weights_.allFinite()) throw Error(ErrorKind::NonFinite, "ensemble weights have NaN/Inf");
  for (Eigen::Index l = 0; l < weights_.size(); ++l) {
    if (weights_(l) <= kMinWeight) {
      throw Error(ErrorKind::NonPositiveWeight,
                  "weight " + std::to_string(l) + " = " + fmt_double(weights_(l)) + " is not strictly positive");
    }
    const double norm_err = std::abs(vectors_.col(l).norm() - 1.0);
    if (norm_err > kNormTol) {
      throw Error(ErrorKind::NotNormalized,
                  "vector " + std::to_string(l) + " norm deviates from 1 by " + fmt_double(norm_err));
    }
  }
  if (weights_.sum() > 1.0 + kTraceTol) {
    throw Error(ErrorKind::TraceNotOne, "weights sum to " + fmt_double(weights_.sum()) + " > 1");
  }
}

ProductEnsemble::ProductEnsemble(RealVector weights, ComplexMatrix factors_a, ComplexMatrix factors_b)
    : weights_(std::move(weights)), factors_a_(std::move(factors_a)), factors_b_(std::move(factors_b)) {
  if (factors_a_.cols() != weights_.size() || factors_b_.cols() != weights_.size() ||
      weights_.size() == 0 || factors_a_.rows() < 1 || factors_b_.rows() < 1) {
    throw Error(ErrorKind::ShapeMismatch, "product ensemble needs s weights and s factors on each side");
  }
  require_finite(factors_a_, "factorsA");
  require_finite(factors_b_, "factorsB");
  for (Eigen::Index u = 0; u < weights_.size(); ++u) {
    if (!(weights_(u) > kMinWeight)) {
      throw Error(ErrorKind::NonPositiveWeight,
                  "weight " + std::to_string(u) + " = " + fmt_double(weights_(u)) + " is not strictly positive");
    }
    for (const ComplexMatrix* f : {&factors_a_, &factors_b_}) {
      const double err = std::abs(f->col(u).norm() - 1.0);
      if (err > kNormTol) {
        throw Error(ErrorKind::NotNormalized,
                    "factor " + std::to_string(u) + " norm deviates from 1 by " + fmt_double(err));
      }
    }
  }
  if (weights_.sum() > 1.0 + kTraceTol) {
    throw Error(ErrorKind::TraceNotOne, "weights sum to " + fmt_double(weights_.sum()) + " > 1");
  }
}

PureState::PureState(int m, int n, ComplexVector amplitudes) : m_(m), n_(n), amp_(std::move(amplitudes)) {
  require_dims(m, n);
  if (amp_.size() != static_cast<Eigen::Index>(m) * n) {
    throw Error(ErrorKind::ShapeMismatch, "pure state has " + std::to_string(amp_.size()) +
                                              " amplitudes, expected " + std::to_string(m * n));
  }
  if (!amp_.allFinite()) throw Error(ErrorKind::NonFinite, "amplitudes have NaN/Inf");
  const double err = std::abs(amp_.squaredNorm() - 1.0);
  if (err > kNormTol) {
    throw Error(ErrorKind::NotNormalized, "sum |a_ij|^2 deviates from 1 by " + fmt_double(err));
  }
}

DensityMatrix validate_density(const ComplexMatrix& mat, int m, int n) {
  require_dims(m, n);
  const Eigen::Index dim = static_cast<Eigen::Index>(m) * n;
  if (mat.rows() != dim || mat.cols() != dim) {
    throw Error(ErrorKind::ShapeMismatch, "matrix is " + std::to_string(mat.rows()) + "x" +
                                              std::to_string(mat.cols()) + ", expected " +
                                              std::to_string(dim) + "x" + std::to_string(dim));
  }
  require_finite(mat, "density matrix");
  const double scale = max_abs(mat);
  const double herm_err = max_abs(mat - mat.adjoint());
  if (herm_err > kHermitianRelTol * scale) {
    throw Error(ErrorKind::NotHermitian, "max|rho - rho^dagger| = " + fmt_double(herm_err));
  }
  const Complex tr = mat.trace();
  const double tr_err = std::abs(tr - Complex(1.0, 0.0));
  if (tr_err > kTraceTol) {
    throw Error(ErrorKind::TraceNotOne, "trace deviates from 1 by " + fmt_double(tr_err));
  }
  const ComplexMatrix herm = 0.5 * (mat + mat.adjoint());
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(herm, Eigen::EigenvaluesOnly);
  const double min_eig = es.eigenvalues()(0);
  if (min_eig < -kPsdTol) {
    throw Error(ErrorKind::NotPositive, "minimum eigenvalue " + fmt_double(min_eig));
  }
  return DensityMatrix(m, n, mat);
}

DensityMatrix density_from_ensemble(const Ensemble& e) {
  const ComplexMatrix& a = e.vectors();
  ComplexMatrix rho = a * e.weights().cast<Complex>().asDiagonal() * a.adjoint();
  rho = 0.5 * (rho + rho.adjoint()).eval();
  return validate_density(rho, e.dim_a(), e.dim_b());
}

DensityMatrix density_from_pure(const PureState& v) {
  return validate_density(v.amplitudes() * v.amplitudes().adjoint(), v.dim_a(), v.dim_b());
}

ComplexMatrix block(const DensityMatrix& rho, int i, int j) {
  const int m = rho.dim_a();
  const int n = rho.dim_b();
  if (i < 0 || i >= m || j < 0 || j >= m) {
    throw Error(ErrorKind::IndexOutOfRange, "block (" + std::to_string(i) + ", " + std::to_string(j) +
                                                ") outside 0.." + std::to_string(m - 1));
  }
  return rho.matrix().block(static_cast<Eigen::Index>(i) * n, static_cast<Eigen::Index>(j) * n, n, n);
}

Ensemble product_ensemble_to_ensemble(const ProductEnsemble& pe) {
  const int m = pe.dim_a();
  const int n = pe.dim_b();
  ComplexMatrix vectors(static_cast<Eigen::Index>(m) * n, pe.size());
  for (int u = 0; u < pe.size(); ++u) {
    vectors.col(u) = kron(pe.factors_a().col(u), pe.factors_b().col(u));
  }
  return Ensemble(m, n, pe.weights(), std::move(vectors));
}

Ensemble pure_to_ensemble(const PureState& v) {
  return Ensemble(v.dim_a(), v.dim_b(), RealVector::Ones(1), v.amplitudes());
}

Ensemble eigen_ensemble(const DensityMatrix& rho, const RankPolicy& policy) {
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(rho.matrix());
  const RealVector& evals = es.eigenvalues();
  const double top = evals(evals.size() - 1);
  const double cut = policy.rel_eps * static_cast<double>(evals.size()) * top;
  std::vector<Eigen::Index> keep;
  for (Eigen::Index l = evals.size() - 1; l >= 0; --l) {
    if (evals(l) > cut && evals(l) > kMinWeight) keep.push_back(l);
  }
  RealVector weights(static_cast<Eigen::Index>(keep.size()));
  ComplexMatrix vectors(evals.size(), static_cast<Eigen::Index>(keep.size()));
  for (std::size_t c = 0; c < keep.size(); ++c) {
    weights(c) = evals(keep[c]);
    vectors.col(c) = es.eigenvectors().col(keep[c]).normalized();
  }
  // Dropped eigenvalues are below the rank cut; renormalize so the mixture stays unit trace.
  weights /= weights.sum();
  return Ensemble(rho.dim_a(), rho.dim_b(), std::move(weights), std::move(vectors));
}

Ensemble remix_ensemble(const Ensemble& e, const ComplexMatrix& unitary) {
  if (unitary.rows() != e.size() || unitary.cols() != e.size()) {
    throw Error(ErrorKind::ShapeMismatch, "remixing unitary must be t x t");
  }
  const ComplexMatrix scaled = e.vectors() * e.weights().cwiseSqrt().cast<Complex>().asDiagonal();
  const ComplexMatrix mixed = scaled * unitary;
  RealVector weights(e.size());
  ComplexMatrix vectors(mixed.rows(), mixed.cols());
  for (int l = 0; l < e.size(); ++l) {
    const double norm = mixed.col(l).norm();
    weights(l) = norm * norm;
    vectors.col(l) = mixed.col(l) / norm;
  }
  return Ensemble(e.dim_a(), e.dim_b(), std::move(weights), std::move(vectors));
}

namespace {

// Basis permutation sending index i*n + j to j*m + i.
Eigen::PermutationMatrix<Eigen::Dynamic> swap_permutation(int m, int n) {
  Eigen::PermutationMatrix<Eigen::Dynamic> perm(m * n);
  for (int i = 0; i < m; ++i) {
    for (int j = 0; j < n; ++j) perm.indices()(i * n + j) = j * m + i;
  }
  return perm;
}

}  // namespace

DensityMatrix swap_factors(const DensityMatrix& rho) {
  const auto perm = swap_permutation(rho.dim_a(), rho.dim_b());
  ComplexMatrix swapped = perm * rho.matrix() * perm.transpose();
  return validate_density(swapped, rho.dim_b(), rho.dim_a());
}

PureState swap_factors(const PureState& v) {
  const auto perm = swap_permutation(v.dim_a(), v.dim_b());
  return PureState(v.dim_b(), v.dim_a(), perm * v.amplitudes());
}

bool image_rank_check(const Ensemble& e, const RankPolicy& policy) {
  const DensityMatrix rho = density_from_ensemble(e);
  return numerical_rank(rho.matrix(), policy).rank == numerical_rank(e.vectors(), policy).rank;
}

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(index), static_cast<std::uint32_t>(index >> 32)};
  std::uint32_t out[2];
  seq.generate(out, out + 2);
  return (static_cast<std::uint64_t>(out[0]) << 32) | out[1];
}

Rng make_rng(std::uint64_t seed, std::uint64_t index) { return Rng(derive_seed(seed, index)); }

ComplexVector random_gaussian_vector(int dim, Rng& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  ComplexVector v(dim);
  for (int i = 0; i < dim; ++i) {
    const double re = normal(rng);
    const double im = normal(rng);
    v(i) = Complex(re, im) / std::sqrt(2.0);
  }
  return v;
}

ComplexVector random_unit_vector(int dim, Rng& rng) {
  ComplexVector v = random_gaussian_vector(dim, rng);
  return v / v.norm();
}

ComplexMatrix haar_unitary(int dim, Rng& rng) {
  if (dim < 1) throw Error(ErrorKind::InvalidArgument, "unitary dimension must be >= 1");
  ComplexMatrix z(dim, dim);
  for (int c = 0; c < dim; ++c) z.col(c) = random_gaussian_vector(dim, rng);
  Eigen::HouseholderQR<ComplexMatrix> qr(z);
  ComplexMatrix q = qr.householderQ() * ComplexMatrix::Identity(dim, dim);
  const ComplexMatrix& r = qr.matrixQR();
  for (int c = 0; c < dim; ++c) {
    const Complex d = r(c, c);
    const double mod = std::abs(d);
    q.col(c) *= mod == 0.0 ? Complex(1.0) : d / mod;
  }
  // One Gram-Schmidt sweep pulls the columns back to orthonormal at machine precision.
  for (int c = 0; c < dim; ++c) {
    for (int p = 0; p < c; ++p) q.col(c) -= q.col(p).dot(q.col(c)) * q.col(p);
    q.col(c).normalize();
  }
  return q;
}

ComplexMatrix haar_unitary(int dim, std::uint64_t seed) {
  Rng rng(seed);
  return haar_unitary(dim, rng);
}

RealVector random_weights(int count, Rng& rng) {
  std::uniform_real_distribution<double> uni(0.05, 1.0);
  RealVector w(count);
  for (int l = 0; l < count; ++l) w(l) = uni(rng);
  return w / w.sum();
}

Ensemble random_ensemble(int m, int n, int t, Rng& rng) {
  ComplexMatrix vectors(static_cast<Eigen::Index>(m) * n, t);
  for (int l = 0; l < t; ++l) vectors.col(l) = random_unit_vector(m * n, rng);
  return Ensemble(m, n, random_weights(t, rng), std::move(vectors));
}

DensityMatrix random_density(int m, int n, int rank, Rng& rng) {
  if (rank < 1 || rank > m * n) throw Error(ErrorKind::InvalidArgument, "rank must be in 1..mn");
  return density_from_ensemble(random_ensemble(m, n, rank, rng));
}

ProductEnsemble random_product_ensemble(int m, int n, int s, Rng& rng) {
  ComplexMatrix fa(m, s);
  ComplexMatrix fb(n, s);
  for (int u = 0; u < s; ++u) {
    fa.col(u) = random_unit_vector(m, rng);
    fb.col(u) = random_unit_vector(n, rng);
  }
  return ProductEnsemble(random_weights(s, rng), std::move(fa), std::move(fb));
}

PureState random_pure_state(int m, int n, Rng& rng) { return PureState(m, n, random_unit_vector(m * n, rng)); }

PureState random_pure_state_with_rank(int m, int n, int schmidt_rank, Rng& rng) {
  if (schmidt_rank < 1 || schmidt_rank > std::min(m, n)) {
    throw Error(ErrorKind::InvalidArgument, "Schmidt rank must be in 1..min(m, n)");
  }
  const ComplexMatrix ua = haar_unitary(m, rng);
  const ComplexMatrix ub = haar_unitary(n, rng);
  std::uniform_real_distribution<double> uni(0.05, 1.0);
  RealVector coeffs(schmidt_rank);
  for (int i = 0; i < schmidt_rank; ++i) coeffs(i) = uni(rng);
  coeffs /= coeffs.norm();
  ComplexVector amp = ComplexVector::Zero(static_cast<Eigen::Index>(m) * n);
  for (int i = 0; i < schmidt_rank; ++i) amp += coeffs(i) * kron(ua.col(i), ub.col(i));
  amp /= amp.norm();
  return PureState(m, n, std::move(amp));
}

DensityMatrix maximally_mixed(int m, int n) {
  const int dim = m * n;
  return validate_density(ComplexMatrix::Identity(dim, dim) / static_cast<double>(dim), m, n);
}

ComplexMatrix partial_transpose_b(const DensityMatrix& rho) {
  const int m = rho.dim_a();
  const int n = rho.dim_b();
  ComplexMatrix out(m * n, m * n);
  for (int i = 0; i < m; ++i) {
    for (int k = 0; k < m; ++k) out.block(i * n, k * n, n, n) = block(rho, i, k).transpose();
  }
  return out;
}

}  // namespace detvar
