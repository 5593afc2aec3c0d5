#pragma once

#include <map>
#include <vector>

#include "detvar/linalg.hpp"

namespace detvar {

using Exponents = std::vector<int>;

/// Coefficients below this fraction of the operands' largest coefficient are dropped.
inline constexpr double kPruneRelTol = 1e-14;

/// Sparse homogeneous polynomial in r_1..r_m with complex coefficients.
///
/// Every stored coefficient is nonzero and every exponent vector sums to
/// degree(). Arithmetic results are pruned relative to the magnitude of the
/// operands, so cancellation down to rounding dust yields an exact zero.
class MultiPoly {
 public:
  using Terms = std::map<Exponents, Complex>;

  MultiPoly(int num_vars, int degree);

  static MultiPoly zero(int num_vars, int degree) { return MultiPoly(num_vars, degree); }
  static MultiPoly constant(int num_vars, Complex c);
  static MultiPoly variable(int num_vars, int index);
  /// sum_i coeffs(i) r_i.
  static MultiPoly linear(const ComplexVector& coeffs);
  static MultiPoly from_terms(int num_vars, int degree, const Terms& terms);

  int num_vars() const { return num_vars_; }
  int degree() const { return degree_; }
  const Terms& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  double max_coeff() const;
  Complex coeff(const Exponents& e) const;

  /// Accumulates c into the coefficient of r^e; e must have num_vars() entries summing to degree().
  void add_term(const Exponents& e, Complex c);

  MultiPoly operator+(const MultiPoly& other) const;
  MultiPoly operator-(const MultiPoly& other) const;
  MultiPoly operator*(const MultiPoly& other) const;
  MultiPoly operator*(Complex s) const;

  Complex evaluate(const ComplexVector& r) const;
  MultiPoly derivative(int var) const;
  /// Substitutes r_i -> images[i]; all images must share one degree and variable count.
  MultiPoly compose(const std::vector<MultiPoly>& images) const;

  void prune(double reference);

 private:
  int num_vars_;
  int degree_;
  Terms terms_;
};

/// Linear form sum_i c_i r_i scaled so its first largest-modulus coefficient is exactly 1.
class LinearForm {
 public:
  /// `scale` receives the factor removed by canonical scaling: input = scale * form.
  explicit LinearForm(const ComplexVector& coeffs, Complex* scale = nullptr);

  const ComplexVector& coefficients() const { return coeffs_; }
  int pivot() const { return pivot_; }
  Complex evaluate(const ComplexVector& r) const { return coeffs_.cwiseProduct(r).sum(); }
  MultiPoly as_poly() const { return MultiPoly::linear(coeffs_); }

 private:
  ComplexVector coeffs_;
  int pivot_ = 0;
};

struct Division {
  MultiPoly quotient;
  MultiPoly remainder;
};

/// p = form * quotient + remainder, with the remainder free of the form's pivot variable.
Division divide(const MultiPoly& p, const LinearForm& form);

/// Direct monomial sum.
Complex eval_poly(const MultiPoly& p, const ComplexVector& r);

/// constant * prod(factors), expanded.
MultiPoly expand_product(int num_vars, Complex constant, const std::vector<LinearForm>& factors);

/// max coefficient difference divided by max(|a|, |b|) coefficient; 0 when both are zero.
double relative_coeff_distance(const MultiPoly& a, const MultiPoly& b);

}  // namespace detvar
