#include "detvar/multipoly.hpp"

#include <cmath>
#include <numeric>
#include <string>

#include "detvar/error.hpp"

namespace detvar {

MultiPoly::MultiPoly(int num_vars, int degree) : num_vars_(num_vars), degree_(degree) {
  if (num_vars < 1) throw Error(ErrorKind::ShapeMismatch, "polynomial needs at least one variable");
  if (degree < 0) throw Error(ErrorKind::InvalidArgument, "negative degree");
}

MultiPoly MultiPoly::constant(int num_vars, Complex c) {
  MultiPoly p(num_vars, 0);
  if (c != Complex(0.0)) p.terms_[Exponents(num_vars, 0)] = c;
  return p;
}

MultiPoly MultiPoly::variable(int num_vars, int index) {
  MultiPoly p(num_vars, 1);
  Exponents e(num_vars, 0);
  e.at(index) = 1;
  p.terms_[e] = 1.0;
  return p;
}

MultiPoly MultiPoly::linear(const ComplexVector& coeffs) {
  MultiPoly p(static_cast<int>(coeffs.size()), 1);
  for (Eigen::Index i = 0; i < coeffs.size(); ++i) {
    if (coeffs(i) == Complex(0.0)) continue;
    Exponents e(coeffs.size(), 0);
    e[i] = 1;
    p.terms_[e] = coeffs(i);
  }
  return p;
}

MultiPoly MultiPoly::from_terms(int num_vars, int degree, const Terms& terms) {
  MultiPoly p(num_vars, degree);
  for (const auto& [e, c] : terms) p.add_term(e, c);
  return p;
}

double MultiPoly::max_coeff() const {
  double best = 0.0;
  for (const auto& [e, c] : terms_) best = std::max(best, std::abs(c));
  return best;
}

Complex MultiPoly::coeff(const Exponents& e) const {
  const auto it = terms_.find(e);
  return it == terms_.end() ? Complex(0.0) : it->second;
}

void MultiPoly::add_term(const Exponents& e, Complex c) {
  if (static_cast<int>(e.size()) != num_vars_) {
    throw Error(ErrorKind::ShapeMismatch, "exponent vector has " + std::to_string(e.size()) +
                                              " entries, expected " + std::to_string(num_vars_));
  }
  int total = 0;
  for (int x : e) {
    if (x < 0) throw Error(ErrorKind::InvalidArgument, "negative exponent");
    total += x;
  }
  if (total != degree_) {
    throw Error(ErrorKind::InvalidArgument, "term of degree " + std::to_string(total) +
                                                " in a homogeneous polynomial of degree " + std::to_string(degree_));
  }
  if (!std::isfinite(c.real()) || !std::isfinite(c.imag())) {
    throw Error(ErrorKind::NonFinite, "non-finite polynomial coefficient");
  }
  Complex& slot = terms_[e];
  slot += c;
  if (slot == Complex(0.0)) terms_.erase(e);
}

void MultiPoly::prune(double reference) {
  const double cut = kPruneRelTol * std::max(reference, max_coeff());
  for (auto it = terms_.begin(); it != terms_.end();) {
    if (std::abs(it->second) <= cut) {
      it = terms_.erase(it);
    } else {
      ++it;
    }
  }
}

namespace {

void require_compatible(const MultiPoly& a, const MultiPoly& b) {
  if (a.num_vars() != b.num_vars()) throw Error(ErrorKind::ShapeMismatch, "polynomials in different rings");
  if (a.degree() != b.degree() && !a.is_zero() && !b.is_zero()) {
    throw Error(ErrorKind::InvalidArgument, "sum of homogeneous polynomials of different degree");
  }
}

}  // namespace

MultiPoly MultiPoly::operator+(const MultiPoly& other) const {
  require_compatible(*this, other);
  const int deg = is_zero() ? other.degree_ : degree_;
  MultiPoly out(num_vars_, deg);
  out.terms_ = terms_;
  for (const auto& [e, c] : other.terms_) out.terms_[e] += c;
  out.prune(std::max(max_coeff(), other.max_coeff()));
  return out;
}

MultiPoly MultiPoly::operator-(const MultiPoly& other) const { return *this + other * Complex(-1.0); }

MultiPoly MultiPoly::operator*(const MultiPoly& other) const {
  if (num_vars_ != other.num_vars_) throw Error(ErrorKind::ShapeMismatch, "polynomials in different rings");
  MultiPoly out(num_vars_, degree_ + other.degree_);
  Exponents e(num_vars_);
  for (const auto& [ea, ca] : terms_) {
    for (const auto& [eb, cb] : other.terms_) {
      for (int i = 0; i < num_vars_; ++i) e[i] = ea[i] + eb[i];
      out.terms_[e] += ca * cb;
    }
  }
  out.prune(max_coeff() * other.max_coeff());
  return out;
}

MultiPoly MultiPoly::operator*(Complex s) const {
  MultiPoly out(num_vars_, degree_);
  if (s == Complex(0.0)) return out;
  for (const auto& [e, c] : terms_) out.terms_[e] = c * s;
  out.prune(0.0);
  return out;
}

Complex MultiPoly::evaluate(const ComplexVector& r) const {
  if (r.size() != num_vars_) {
    throw Error(ErrorKind::ShapeMismatch, "point has " + std::to_string(r.size()) + " coordinates, polynomial has " +
                                              std::to_string(num_vars_) + " variables");
  }
  Complex total(0.0);
  for (const auto& [e, c] : terms_) {
    Complex mono = c;
    for (int i = 0; i < num_vars_; ++i) {
      for (int p = 0; p < e[i]; ++p) mono *= r(i);
    }
    total += mono;
  }
  return total;
}

MultiPoly MultiPoly::derivative(int var) const {
  if (var < 0 || var >= num_vars_) throw Error(ErrorKind::IndexOutOfRange, "no such variable");
  MultiPoly out(num_vars_, std::max(0, degree_ - 1));
  for (const auto& [e, c] : terms_) {
    if (e[var] == 0) continue;
    Exponents d = e;
    d[var] -= 1;
    out.terms_[d] += c * static_cast<double>(e[var]);
  }
  out.prune(0.0);
  return out;
}

MultiPoly MultiPoly::compose(const std::vector<MultiPoly>& images) const {
  if (static_cast<int>(images.size()) != num_vars_) {
    throw Error(ErrorKind::ShapeMismatch, "compose needs one image per variable");
  }
  const int target_vars = images.front().num_vars();
  const int image_degree = images.front().degree();
  MultiPoly out(target_vars, degree_ * image_degree);
  // powers[i][p] = images[i]^p
  std::vector<std::vector<MultiPoly>> powers(num_vars_);
  for (int i = 0; i < num_vars_; ++i) {
    powers[i].push_back(MultiPoly::constant(target_vars, 1.0));
    for (int p = 1; p <= degree_; ++p) powers[i].push_back(powers[i].back() * images[i]);
  }
  for (const auto& [e, c] : terms_) {
    MultiPoly mono = MultiPoly::constant(target_vars, c);
    for (int i = 0; i < num_vars_; ++i) {
      if (e[i] > 0) mono = mono * powers[i][e[i]];
    }
    out = out + mono;
  }
  return out;
}

LinearForm::LinearForm(const ComplexVector& coeffs, Complex* scale) {
  if (coeffs.size() == 0 || coeffs.cwiseAbs().maxCoeff() == 0.0) {
    throw Error(ErrorKind::InvalidArgument, "linear form with all coefficients zero");
  }
  Eigen::Index pivot = 0;
  coeffs.cwiseAbs().maxCoeff(&pivot);
  const Complex s = coeffs(pivot);
  coeffs_ = coeffs / s;
  coeffs_(pivot) = 1.0;
  pivot_ = static_cast<int>(pivot);
  if (scale != nullptr) *scale = s;
}

Division divide(const MultiPoly& p, const LinearForm& form) {
  const int m = p.num_vars();
  if (form.coefficients().size() != m) throw Error(ErrorKind::ShapeMismatch, "divisor in a different ring");
  const int c = form.pivot();
  MultiPoly::Terms rem = p.terms();
  MultiPoly::Terms quot;
  const double reference = p.max_coeff();
  // Eliminate the pivot variable from the highest power down; each step
  // replaces a term with exponent e_c by terms with exponent e_c - 1.
  for (int power = p.degree(); power >= 1; --power) {
    std::vector<std::pair<Exponents, Complex>> layer;
    for (const auto& [e, coef] : rem) {
      if (e[c] == power) layer.emplace_back(e, coef);
    }
    for (const auto& [e, coef] : layer) {
      Exponents q = e;
      q[c] -= 1;
      quot[q] += coef;
      rem.erase(e);
      for (int i = 0; i < m; ++i) {
        if (i == c || form.coefficients()(i) == Complex(0.0)) continue;
        Exponents t = q;
        t[i] += 1;
        rem[t] -= coef * form.coefficients()(i);
      }
    }
  }
  Division out{MultiPoly(m, std::max(0, p.degree() - 1)), MultiPoly(m, p.degree())};
  for (const auto& [e, coef] : quot) {
    if (coef != Complex(0.0)) out.quotient.add_term(e, coef);
  }
  for (const auto& [e, coef] : rem) {
    if (coef != Complex(0.0)) out.remainder.add_term(e, coef);
  }
  out.quotient.prune(reference);
  out.remainder.prune(reference);
  return out;
}

Complex eval_poly(const MultiPoly& p, const ComplexVector& r) { return p.evaluate(r); }

MultiPoly expand_product(int num_vars, Complex constant, const std::vector<LinearForm>& factors) {
  MultiPoly out = MultiPoly::constant(num_vars, constant);
  for (const LinearForm& f : factors) out = out * f.as_poly();
  if (out.is_zero()) return MultiPoly::zero(num_vars, static_cast<int>(factors.size()));
  return out;
}

double relative_coeff_distance(const MultiPoly& a, const MultiPoly& b) {
  const double scale = std::max(a.max_coeff(), b.max_coeff());
  if (scale == 0.0) return 0.0;
  double worst = 0.0;
  for (const auto& [e, c] : a.terms()) worst = std::max(worst, std::abs(c - b.coeff(e)));
  for (const auto& [e, c] : b.terms()) {
    if (a.terms().count(e) == 0) worst = std::max(worst, std::abs(c));
  }
  return worst / scale;
}

}  // namespace detvar
