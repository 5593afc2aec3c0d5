#include <cmath>

#include "detvar/symbolic.hpp"

namespace detvar {

std::string_view to_string(LinearityVerdict verdict) {
  switch (verdict) {
    case LinearityVerdict::ConsistentWithSeparable: return "ConsistentWithSeparable";
    case LinearityVerdict::NonlinearVarietyWitness: return "NonlinearVarietyWitness";
    case LinearityVerdict::Inconclusive: return "Inconclusive";
  }
  return "Unknown";
}

namespace {

struct System {
  std::vector<MultiPoly> equations;  // scaled to unit max coefficient
  std::vector<std::vector<MultiPoly>> gradients;
};

System build_system(const std::vector<MinorPoly>& minors) {
  System sys;
  for (const MinorPoly& mp : minors) {
    if (mp.poly.is_zero()) continue;
    MultiPoly eq = mp.poly * Complex(1.0 / mp.poly.max_coeff());
    std::vector<MultiPoly> grad;
    for (int i = 0; i < eq.num_vars(); ++i) grad.push_back(eq.derivative(i));
    sys.equations.push_back(std::move(eq));
    sys.gradients.push_back(std::move(grad));
  }
  return sys;
}

double residual(const System& sys, const ComplexVector& r) {
  double worst = 0.0;
  for (const MultiPoly& eq : sys.equations) worst = std::max(worst, std::abs(eq.evaluate(r)));
  return worst;
}

std::optional<ProjectivePoint> newton_project(const System& sys, const ProjectivePoint& start) {
  ComplexVector r = start.coords() / start.coords().norm();
  if (sys.equations.empty()) return ProjectivePoint(r);
  const int m = static_cast<int>(r.size());
  // Affine chart h . r = 1 through the starting point.
  const ComplexVector h = r.conjugate();
  const int rows = static_cast<int>(sys.equations.size()) + 1;
  constexpr double kTol = 1e-13;
  for (int iter = 0; iter < 60; ++iter) {
    ComplexVector f(rows);
    ComplexMatrix jac(rows, m);
    for (int e = 0; e + 1 < rows; ++e) {
      f(e) = sys.equations[e].evaluate(r);
      for (int i = 0; i < m; ++i) jac(e, i) = sys.gradients[e][i].evaluate(r);
    }
    f(rows - 1) = h.cwiseProduct(r).sum() - 1.0;
    jac.row(rows - 1) = h.transpose();
    const ComplexVector step = jac.completeOrthogonalDecomposition().solve(-f);
    r += step;
    if (!r.allFinite()) return std::nullopt;
    if (step.norm() < 1e-15 * r.norm() || (residual(sys, r / r.norm()) < kTol && step.norm() < 1e-10)) break;
  }
  r /= r.norm();
  if (residual(sys, r) > 1e-11) return std::nullopt;
  return ProjectivePoint(r);
}

ComplexVector unit(const ProjectivePoint& p) { return p.coords() / p.coords().norm(); }

bool on_variety(const DensityMatrix& rho, const ProjectivePoint& p, int k, const LinearityOptions& options) {
  const MembershipResult res = member_VA(rho, p, k, options.policy);
  return res.member && res.margin >= options.near_threshold_band;
}

std::optional<VarietyWitness> search_witness(const DensityMatrix& rho, const System& sys, int k, Rng& rng,
                                             const LinearityOptions& options) {
  const int m = rho.dim_a();
  const auto p = newton_project(sys, random_point(m, rng));
  if (!p || !on_variety(rho, *p, k, options)) return std::nullopt;

  constexpr double kStep = 1e-2;
  const ComplexVector pu = unit(*p);
  const ComplexVector nudge = random_unit_vector(m, rng);
  const auto q = newton_project(sys, ProjectivePoint(pu + kStep * nudge));
  if (!q || !on_variety(rho, *q, k, options)) return std::nullopt;
  const double separation = projective_distance(*p, *q);
  // q must be a local continuation of p, not a jump to a distant branch.
  if (separation < 1e-6 || separation > 10.0 * kStep) return std::nullopt;

  ComplexVector qu = unit(*q);
  const Complex overlap = pu.dot(qu);
  qu *= std::conj(overlap) / std::abs(overlap);
  const ComplexVector direction = (qu - pu).normalized();
  const ProjectivePoint x(pu + 0.5 * direction);
  const MembershipResult at_x = member_VA(rho, x, k, options.policy);
  if (at_x.member || at_x.margin < options.near_threshold_band) return std::nullopt;
  const double value_x = residual(sys, unit(x));
  if (value_x < 1e-6) return std::nullopt;

  const auto y = newton_project(sys, x);
  if (!y || !on_variety(rho, *y, k, options)) return std::nullopt;

  return VarietyWitness{*p, *q, x, *y, at_x, value_x, MinorPoly{{}, {}, MultiPoly(m, 0)}, FactorizationResult{}};
}

}  // namespace

std::optional<ProjectivePoint> project_onto_variety(const std::vector<MinorPoly>& minors,
                                                    const ProjectivePoint& start) {
  return newton_project(build_system(minors), start);
}

LinearityReport linearity_diagnostic(const DensityMatrix& rho, const Ensemble& ensemble, int k, int trials,
                                     std::uint64_t seed, const LinearityOptions& options) {
  if (ensemble.dim_a() != rho.dim_a() || ensemble.dim_b() != rho.dim_b()) {
    throw Error(ErrorKind::EnsembleMismatch, "ensemble dimensions differ from the state");
  }
  const ComplexMatrix& a = ensemble.vectors();
  const ComplexMatrix realized = a * ensemble.weights().cast<Complex>().asDiagonal() * a.adjoint();
  const double mismatch = max_abs(realized - rho.matrix());
  if (mismatch > kEnsembleMatchTol) {
    throw Error(ErrorKind::EnsembleMismatch, "ensemble realizes a state at max distance " + std::to_string(mismatch));
  }

  LinearityReport report;
  report.k = k;
  report.ensemble_terms = ensemble.size();
  report.ensemble_weights = ensemble.weights();

  const std::vector<MinorPoly> minors = pencil_minor_polys(pencil_blocks(ensemble), k, options.caps);
  report.minors_total = static_cast<int>(minors.size());

  std::optional<std::size_t> uncertified;
  FactorizationResult uncertified_result;
  for (std::size_t idx = 0; idx < minors.size(); ++idx) {
    const MinorPoly& mp = minors[idx];
    if (mp.poly.is_zero()) {
      ++report.zero_minors;
      continue;
    }
    FactorOptions fo = options.factor;
    fo.seed = derive_seed(seed, 1000000 + idx);
    FactorizationResult res = factor_into_linear_forms(mp.poly, fo);
    switch (res.status) {
      case FactorStatus::Factored: ++report.factored; break;
      case FactorStatus::Inconclusive: ++report.inconclusive; break;
      case FactorStatus::NotProductOfLinearForms:
        ++report.not_product;
        if (!uncertified) {
          uncertified = idx;
          uncertified_result = std::move(res);
        }
        break;
    }
  }

  if (report.not_product == 0) {
    report.verdict = report.inconclusive == 0 ? LinearityVerdict::ConsistentWithSeparable
                                              : LinearityVerdict::Inconclusive;
    return report;
  }

  const System sys = build_system(minors);
  for (int trial = 0; trial < trials; ++trial) {
    Rng rng = make_rng(seed, static_cast<std::uint64_t>(trial));
    auto witness = search_witness(rho, sys, k, rng, options);
    if (witness) {
      witness->minor = minors[*uncertified];
      witness->factorization = uncertified_result;
      report.witness = std::move(witness);
      report.verdict = LinearityVerdict::NonlinearVarietyWitness;
      return report;
    }
  }
  report.verdict = LinearityVerdict::Inconclusive;
  return report;
}

}  // namespace detvar
