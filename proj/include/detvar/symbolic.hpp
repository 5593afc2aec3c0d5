#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "detvar/invariants.hpp"
#include "detvar/multipoly.hpp"

namespace detvar {

struct MinorCaps {
  long long max_minors = 10000;
  int max_order = 4;
  int max_vars = 5;
};

/// One (k+1) x (k+1) minor of sum_i r_i A_i, rows and columns 0-based and ascending.
struct MinorPoly {
  std::vector<int> rows;
  std::vector<int> cols;
  MultiPoly poly;
};

/// All (k+1) x (k+1) minors of the holomorphic pencil by exact cofactor
/// expansion over linear-form entries; lexicographic in (rows, cols).
/// Empty when k + 1 exceeds the number of ensemble terms (no minors exist).
std::vector<MinorPoly> pencil_minor_polys(const PencilBlocks& pb, int k, const MinorCaps& caps = {});

/// Determinant of a square grid of polynomials by cofactor expansion along the first row.
MultiPoly cofactor_determinant(const std::vector<std::vector<MultiPoly>>& grid);

/// Largest |minor(r)| over `minors`, and the vanishing tolerance at r implied by
/// the rank cut: tau_rank * s^k with s = max(sigma_max, ||r|| ||A||_F) for the pencil value at r.
double max_minor_value(const std::vector<MinorPoly>& minors, const ProjectivePoint& r);
double minor_vanishing_tolerance(const PencilBlocks& pb, const ProjectivePoint& r, int k,
                                 const RankPolicy& policy = {});

// ---------------------------------------------------------------------------
// Separable structure: every minor of B G over column set S equals
// det(B[rows, S]) * prod_{u in S} l_u(r) with l_u(r) = sum_i r_i a_u^i.

struct StructureViolation {
  std::vector<int> rows;
  std::vector<int> cols;
  double residual = 0.0;
};

struct StructureReport {
  int minors_checked = 0;
  double max_residual = 0.0;
  std::vector<StructureViolation> violations;
};

inline constexpr double kStructureRelTol = 1e-10;

StructureReport separable_minor_structure(const ProductEnsemble& pe, int k, const MinorCaps& caps = {});

// ---------------------------------------------------------------------------
// Linear factorization.

enum class FactorStatus { Factored, NotProductOfLinearForms, Inconclusive };

std::string_view to_string(FactorStatus status);

/// Evidence that a binary-form root on one plane has no consistent lift:
/// for planes span(p1, q), span(pj, q), span(p1 + pj, q) the root values
/// satisfy alpha_1 + alpha_j = alpha_1j for every linear factor, and here no
/// combination comes within `gap` (relative) of doing so.
struct LiftCertificate {
  ComplexVector base;
  ComplexVector direction_1;
  ComplexVector direction_j;
  Complex root_value = 0.0;
  double gap = 0.0;
};

struct FactorizationResult {
  FactorStatus status = FactorStatus::Inconclusive;
  Complex constant = 0.0;
  std::vector<LinearForm> factors;
  double residual = 0.0;
  /// Present for NotProductOfLinearForms: one certificate per independent frame.
  std::vector<LiftCertificate> certificates;
  /// Candidate linear forms rejected by division with remainder.
  int rejected_candidates = 0;
};

struct FactorOptions {
  std::uint64_t seed = 42;
  /// Root-value agreement needed to pair roots across planes.
  double match_tol = 1e-6;
  /// Minimum mismatch for a failed lift to count as a certificate.
  double certificate_gap = 1e-3;
  /// Independent frames that must each produce a certificate.
  int certificate_frames = 2;
  double division_tol = 1e-7;
  double residual_tol = 1e-9;
};

FactorizationResult factor_into_linear_forms(const MultiPoly& p, const FactorOptions& options = {});

// ---------------------------------------------------------------------------
// Linearity diagnostic.

enum class LinearityVerdict { ConsistentWithSeparable, NonlinearVarietyWitness, Inconclusive };

std::string_view to_string(LinearityVerdict verdict);

/// p and q lie on V, q is a local continuation of p; x is on the complex line
/// through p and q but off V, and y (the projection of x back onto V) is on V.
struct VarietyWitness {
  ProjectivePoint p;
  ProjectivePoint q;
  ProjectivePoint x;
  ProjectivePoint y;
  MembershipResult at_x;
  double minor_value_at_x = 0.0;
  /// The minor that failed to factor and its certificate.
  MinorPoly minor;
  FactorizationResult factorization;
};

struct LinearityReport {
  LinearityVerdict verdict = LinearityVerdict::Inconclusive;
  int k = 0;
  int ensemble_terms = 0;
  RealVector ensemble_weights;
  int minors_total = 0;
  int zero_minors = 0;
  int factored = 0;
  int not_product = 0;
  int inconclusive = 0;
  std::optional<VarietyWitness> witness;
};

struct LinearityOptions {
  RankPolicy policy{};
  MinorCaps caps{};
  FactorOptions factor{};
  double near_threshold_band = 10.0;
};

inline constexpr double kEnsembleMatchTol = 1e-10;

LinearityReport linearity_diagnostic(const DensityMatrix& rho, const Ensemble& ensemble, int k, int trials,
                                     std::uint64_t seed, const LinearityOptions& options = {});

/// Gauss-Newton projection of `start` onto the common zero set of `minors`
/// in the affine chart through `start`; nullopt if it does not converge.
std::optional<ProjectivePoint> project_onto_variety(const std::vector<MinorPoly>& minors,
                                                    const ProjectivePoint& start);

}  // namespace detvar
