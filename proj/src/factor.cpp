#include <unsupported/Eigen/Polynomials>

#include <cmath>
#include <limits>

#include "detvar/symbolic.hpp"

namespace detvar {

std::string_view to_string(FactorStatus status) {
  switch (status) {
    case FactorStatus::Factored: return "Factored";
    case FactorStatus::NotProductOfLinearForms: return "NotProductOfLinearForms";
    case FactorStatus::Inconclusive: return "Inconclusive";
  }
  return "Unknown";
}

namespace {

Complex horner(const std::vector<Complex>& ascending, Complex x) {
  Complex acc(0.0);
  for (auto it = ascending.rbegin(); it != ascending.rend(); ++it) acc = acc * x + *it;
  return acc;
}

/// Roots of sum_j c_j x^j; the leading coefficient must be nonzero.
std::vector<Complex> univariate_roots(const std::vector<Complex>& ascending) {
  const int degree = static_cast<int>(ascending.size()) - 1;
  if (degree <= 0) return {};
  if (degree == 1) return {-ascending[0] / ascending[1]};
  ComplexVector poly(degree + 1);
  for (int j = 0; j <= degree; ++j) poly(j) = ascending[j];
  Eigen::PolynomialSolver<Complex, Eigen::Dynamic> solver(poly);
  std::vector<Complex> roots(solver.roots().data(), solver.roots().data() + degree);

  std::vector<Complex> deriv(degree);
  for (int j = 1; j <= degree; ++j) deriv[j - 1] = ascending[j] * static_cast<double>(j);
  for (Complex& z : roots) {
    for (int iter = 0; iter < 8; ++iter) {
      const Complex f = horner(ascending, z);
      const Complex df = horner(deriv, z);
      if (df == Complex(0.0)) break;
      const Complex next = z - f / df;
      if (!(std::abs(horner(ascending, next)) < std::abs(f))) break;
      z = next;
    }
  }
  return roots;
}

FactorizationResult finish(const MultiPoly& p, Complex constant, std::vector<LinearForm> factors,
                           const FactorOptions& options) {
  FactorizationResult out;
  out.constant = constant;
  out.factors = std::move(factors);
  out.residual = relative_coeff_distance(expand_product(p.num_vars(), constant, out.factors), p);
  out.status = out.residual <= options.residual_tol ? FactorStatus::Factored : FactorStatus::Inconclusive;
  return out;
}

FactorizationResult factor_binary(const MultiPoly& p, const FactorOptions& options) {
  const int degree = p.degree();
  std::vector<Complex> c(degree + 1);
  int top = -1;
  int bottom = degree + 1;
  for (int j = 0; j <= degree; ++j) {
    c[j] = p.coeff({j, degree - j});
    if (c[j] != Complex(0.0)) {
      top = std::max(top, j);
      bottom = std::min(bottom, j);
    }
  }
  // p = c_top * r1^bottom * r2^(degree - top) * prod_z (r1 - z r2)
  std::vector<LinearForm> factors;
  Complex constant = c[top];
  for (int i = 0; i < degree - top; ++i) factors.emplace_back(ComplexVector::Unit(2, 1));
  for (int i = 0; i < bottom; ++i) factors.emplace_back(ComplexVector::Unit(2, 0));
  const std::vector<Complex> reduced(c.begin() + bottom, c.begin() + top + 1);
  for (const Complex& z : univariate_roots(reduced)) {
    Complex scale;
    factors.emplace_back(ComplexVector{{Complex(1.0), -z}}, &scale);
    constant *= scale;
  }
  return finish(p, constant, std::move(factors), options);
}

/// Restriction p(s a + t b) as a binary form in (s, t).
MultiPoly restrict_to_plane(const MultiPoly& p, const ComplexVector& a, const ComplexVector& b) {
  std::vector<MultiPoly> images;
  images.reserve(a.size());
  for (Eigen::Index i = 0; i < a.size(); ++i) images.push_back(MultiPoly::linear(ComplexVector{{a(i), b(i)}}));
  return p.compose(images);
}

/// Values l(a)/l(b) over the linear factors l of the restriction to span(a, b),
/// i.e. minus the roots of p(a + x b). Empty if p(b) is too small for a stable root count.
std::optional<std::vector<Complex>> plane_root_values(const MultiPoly& p, const ComplexVector& a,
                                                      const ComplexVector& b) {
  const MultiPoly f = restrict_to_plane(p, a, b);
  const int degree = p.degree();
  std::vector<Complex> g(degree + 1);
  double largest = 0.0;
  for (int j = 0; j <= degree; ++j) {
    g[j] = f.coeff({degree - j, j});
    largest = std::max(largest, std::abs(g[j]));
  }
  if (largest == 0.0 || std::abs(g[degree]) < 1e-6 * largest) return std::nullopt;
  std::vector<Complex> values = univariate_roots(g);
  for (Complex& v : values) v = -v;
  return values;
}

struct FrameOutcome {
  std::optional<LinearForm> factor;
  std::optional<MultiPoly> quotient;
  std::optional<LiftCertificate> certificate;
  int rejected = 0;
};

double mismatch(Complex x, Complex y, Complex target) {
  return std::abs(x + y - target) / (1.0 + std::abs(x) + std::abs(y));
}

FrameOutcome try_frame(const MultiPoly& p, Rng& rng, const FactorOptions& options) {
  FrameOutcome outcome;
  const int m = p.num_vars();
  const ComplexVector q = random_unit_vector(m, rng);
  std::vector<ComplexVector> dirs;
  for (int j = 0; j < m - 1; ++j) dirs.push_back(random_unit_vector(m, rng));

  ComplexMatrix frame(m, m);
  frame.col(0) = q;
  for (int j = 0; j < m - 1; ++j) frame.col(j + 1) = dirs[j];
  Eigen::FullPivLU<ComplexMatrix> lu(frame);
  if (!lu.isInvertible()) return outcome;
  const ComplexMatrix frame_inv = lu.inverse();

  std::vector<std::vector<Complex>> alpha(m - 1);
  std::vector<std::vector<Complex>> beta(m - 1);
  for (int j = 0; j < m - 1; ++j) {
    auto values = plane_root_values(p, dirs[j], q);
    if (!values) return outcome;
    alpha[j] = std::move(*values);
    if (j >= 1) {
      auto sums = plane_root_values(p, dirs[0] + dirs[j], q);
      if (!sums) return outcome;
      beta[j] = std::move(*sums);
    }
  }

  double best_gap = 0.0;
  std::optional<LiftCertificate> certificate;
  for (const Complex& a1 : alpha[0]) {
    // Partners of a1 on each further plane, consistent with the sum plane.
    std::vector<std::vector<Complex>> partners(m - 1);
    partners[0] = {a1};
    bool liftable = true;
    for (int j = 1; j < m - 1 && liftable; ++j) {
      double closest = std::numeric_limits<double>::infinity();
      for (const Complex& aj : alpha[j]) {
        double best = std::numeric_limits<double>::infinity();
        for (const Complex& bj : beta[j]) best = std::min(best, mismatch(a1, aj, bj));
        closest = std::min(closest, best);
        if (best <= options.match_tol) partners[j].push_back(aj);
      }
      if (partners[j].empty()) {
        liftable = false;
        if (closest > best_gap) {
          best_gap = closest;
          certificate = LiftCertificate{q, dirs[0], dirs[j], a1, closest};
        }
      }
    }
    if (!liftable) continue;

    // Enumerate partner combinations (bounded) and test each by division.
    std::vector<std::size_t> pick(m - 1, 0);
    int budget = 64;
    while (budget-- > 0) {
      ComplexVector values(m);
      values(0) = 1.0;
      for (int j = 0; j < m - 1; ++j) values(j + 1) = partners[j][pick[j]];
      const ComplexVector coeffs = (values.transpose() * frame_inv).transpose();
      if (coeffs.cwiseAbs().maxCoeff() > 0.0) {
        const LinearForm candidate(coeffs);
        Division div = divide(p, candidate);
        if (div.remainder.max_coeff() <= options.division_tol * p.max_coeff()) {
          outcome.factor = candidate;
          outcome.quotient = std::move(div.quotient);
          return outcome;
        }
        ++outcome.rejected;
      }
      int pos = m - 2;
      while (pos >= 0 && ++pick[pos] == partners[pos].size()) pick[pos--] = 0;
      if (pos < 0) break;
    }
  }
  if (certificate && certificate->gap >= options.certificate_gap) outcome.certificate = certificate;
  return outcome;
}

}  // namespace

FactorizationResult factor_into_linear_forms(const MultiPoly& p, const FactorOptions& options) {
  if (p.degree() < 1) throw Error(ErrorKind::DegreeZero, "cannot factor a degree-0 polynomial");
  const int m = p.num_vars();
  if (p.is_zero()) {
    FactorizationResult out;
    out.status = FactorStatus::Factored;
    return out;
  }
  if (m == 1) {
    return finish(p, p.coeff({p.degree()}),
                  std::vector<LinearForm>(static_cast<std::size_t>(p.degree()), LinearForm(ComplexVector::Ones(1))),
                  options);
  }
  if (m == 2) return factor_binary(p, options);

  Rng rng(options.seed);
  MultiPoly current = p;
  std::vector<LinearForm> factors;
  int rejected = 0;
  constexpr int kFramesPerLevel = 6;
  while (current.degree() >= 2) {
    std::vector<LiftCertificate> certificates;
    bool found = false;
    for (int attempt = 0; attempt < kFramesPerLevel && !found; ++attempt) {
      FrameOutcome outcome = try_frame(current, rng, options);
      rejected += outcome.rejected;
      if (outcome.factor) {
        factors.push_back(*outcome.factor);
        current = std::move(*outcome.quotient);
        found = true;
      } else if (outcome.certificate) {
        certificates.push_back(*outcome.certificate);
        if (static_cast<int>(certificates.size()) >= options.certificate_frames) break;
      }
    }
    if (!found) {
      FactorizationResult out;
      out.rejected_candidates = rejected;
      out.factors = std::move(factors);
      if (static_cast<int>(certificates.size()) >= options.certificate_frames) {
        out.status = FactorStatus::NotProductOfLinearForms;
        out.certificates = std::move(certificates);
      }
      return out;
    }
  }
  Complex constant;
  if (current.degree() == 1) {
    ComplexVector coeffs = ComplexVector::Zero(m);
    for (const auto& [e, c] : current.terms()) {
      for (int i = 0; i < m; ++i) {
        if (e[i] == 1) coeffs(i) = c;
      }
    }
    factors.emplace_back(coeffs, &constant);
  } else {
    constant = current.coeff(Exponents(m, 0));
  }
  FactorizationResult out = finish(p, constant, std::move(factors), options);
  out.rejected_candidates = rejected;
  return out;
}

}  // namespace detvar
