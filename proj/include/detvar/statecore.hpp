#pragma once

// Bipartite states on C^m (x) C^n. Basis order is |11>,...,|1n>,...,|m1>,...,|mn>,
// i.e. basis index i*n + j for 0-based (i, j).

#include <cstdint>
#include <random>
#include <vector>

#include "detvar/error.hpp"
#include "detvar/linalg.hpp"

namespace detvar {

/// Validated mixed state. Construct through validate_density or density_from_ensemble.
class DensityMatrix {
 public:
  int dim_a() const { return m_; }
  int dim_b() const { return n_; }
  const ComplexMatrix& matrix() const { return mat_; }

 private:
  friend DensityMatrix validate_density(const ComplexMatrix&, int, int);
  DensityMatrix(int m, int n, ComplexMatrix mat) : m_(m), n_(n), mat_(std::move(mat)) {}

  int m_ = 0;
  int n_ = 0;
  ComplexMatrix mat_;
};

/// rho = A P A^dagger with A the mn x t matrix of unit columns and P = diag(weights).
class Ensemble {
 public:
  Ensemble(int m, int n, RealVector weights, ComplexMatrix vectors);

  int dim_a() const { return m_; }
  int dim_b() const { return n_; }
  int size() const { return static_cast<int>(weights_.size()); }
  const RealVector& weights() const { return weights_; }
  /// Column l is v_l.
  const ComplexMatrix& vectors() const { return vectors_; }

 private:
  int m_;
  int n_;
  RealVector weights_;
  ComplexMatrix vectors_;
};

/// Separable decomposition rho = sum_u q_u P_{a_u (x) b_u}; column u of factors_a / factors_b.
class ProductEnsemble {
 public:
  ProductEnsemble(RealVector weights, ComplexMatrix factors_a, ComplexMatrix factors_b);

  int dim_a() const { return static_cast<int>(factors_a_.rows()); }
  int dim_b() const { return static_cast<int>(factors_b_.rows()); }
  int size() const { return static_cast<int>(weights_.size()); }
  const RealVector& weights() const { return weights_; }
  const ComplexMatrix& factors_a() const { return factors_a_; }
  const ComplexMatrix& factors_b() const { return factors_b_; }

 private:
  RealVector weights_;
  ComplexMatrix factors_a_;
  ComplexMatrix factors_b_;
};

class PureState {
 public:
  PureState(int m, int n, ComplexVector amplitudes);

  int dim_a() const { return m_; }
  int dim_b() const { return n_; }
  const ComplexVector& amplitudes() const { return amp_; }
  Complex amplitude(int i, int j) const { return amp_(i * n_ + j); }

 private:
  int m_;
  int n_;
  ComplexVector amp_;
};

inline constexpr double kHermitianRelTol = 1e-12;
inline constexpr double kPsdTol = 1e-10;
inline constexpr double kTraceTol = 1e-10;
inline constexpr double kNormTol = 1e-10;
inline constexpr double kMinWeight = 1e-14;

DensityMatrix validate_density(const ComplexMatrix& mat, int m, int n);
DensityMatrix density_from_ensemble(const Ensemble& e);
DensityMatrix density_from_pure(const PureState& v);

/// n x n block rho_ij (0-based).
ComplexMatrix block(const DensityMatrix& rho, int i, int j);

Ensemble product_ensemble_to_ensemble(const ProductEnsemble& pe);
Ensemble pure_to_ensemble(const PureState& v);

/// Eigen-decomposition ensemble keeping eigenvalues above the rank cut.
Ensemble eigen_ensemble(const DensityMatrix& rho, const RankPolicy& policy = {});

/// Re-mixes sqrt(p_l) v_l by a t x t unitary; the result realizes the same rho.
Ensemble remix_ensemble(const Ensemble& e, const ComplexMatrix& unitary);

/// Exchanges the tensor factors: |ij> -> |ji>.
DensityMatrix swap_factors(const DensityMatrix& rho);
PureState swap_factors(const PureState& v);

bool image_rank_check(const Ensemble& e, const RankPolicy& policy = {});

// ---------------------------------------------------------------------------
// Random objects. Every generator takes an explicit engine; derive_seed gives
// per-task streams so parallel loops stay reproducible.

using Rng = std::mt19937_64;

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index);
Rng make_rng(std::uint64_t seed, std::uint64_t index = 0);

ComplexVector random_gaussian_vector(int dim, Rng& rng);
ComplexVector random_unit_vector(int dim, Rng& rng);

/// Haar unitary: QR of a complex Ginibre matrix with the phase of diag(R) removed.
ComplexMatrix haar_unitary(int dim, std::uint64_t seed);
ComplexMatrix haar_unitary(int dim, Rng& rng);

RealVector random_weights(int count, Rng& rng);
Ensemble random_ensemble(int m, int n, int t, Rng& rng);
DensityMatrix random_density(int m, int n, int rank, Rng& rng);
ProductEnsemble random_product_ensemble(int m, int n, int s, Rng& rng);
PureState random_pure_state(int m, int n, Rng& rng);
/// Pure state with exactly `schmidt_rank` nonzero Schmidt coefficients, each >= 0.05 before normalization.
PureState random_pure_state_with_rank(int m, int n, int schmidt_rank, Rng& rng);

DensityMatrix maximally_mixed(int m, int n);

/// Partial transpose over factor B.
ComplexMatrix partial_transpose_b(const DensityMatrix& rho);

}  // namespace detvar
