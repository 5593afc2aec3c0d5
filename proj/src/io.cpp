#include "detvar/io.hpp"

#include <cmath>
#include <fstream>
#include <limits>

namespace detvar {

namespace {

[[noreturn]] void parse_fail(const std::string& what) { throw Error(ErrorKind::ParseError, what); }

const Json& field(const Json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) parse_fail(std::string("missing field \"") + key + "\"");
  return j.at(key);
}

int dim_field(const Json& j, const char* key) {
  const Json& v = field(j, key);
  if (!v.is_number_integer() || v.get<long long>() < 1) {
    parse_fail(std::string("field \"") + key + "\" must be a positive integer");
  }
  return v.get<int>();
}

double real_value(const Json& j) {
  if (!j.is_number()) parse_fail("expected a number, got " + j.dump());
  return j.get<double>();
}

ComplexVector complex_array(const Json& j, const char* what) {
  if (!j.is_array()) parse_fail(std::string(what) + " must be an array of [re, im] pairs");
  ComplexVector v(static_cast<Eigen::Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i) v(static_cast<Eigen::Index>(i)) = complex_from_json(j[i]);
  return v;
}

/// Array of equal-length complex arrays; each inner array becomes a column.
ComplexMatrix columns_from_json(const Json& j, const char* what) {
  if (!j.is_array() || j.empty()) parse_fail(std::string(what) + " must be a nonempty array of arrays");
  const ComplexVector first = complex_array(j[0], what);
  ComplexMatrix out(first.size(), static_cast<Eigen::Index>(j.size()));
  out.col(0) = first;
  for (std::size_t c = 1; c < j.size(); ++c) {
    const ComplexVector col = complex_array(j[c], what);
    if (col.size() != first.size()) parse_fail(std::string(what) + " rows have unequal lengths");
    out.col(static_cast<Eigen::Index>(c)) = col;
  }
  return out;
}

RealVector real_array(const Json& j, const char* what) {
  if (!j.is_array()) parse_fail(std::string(what) + " must be an array of numbers");
  RealVector v(static_cast<Eigen::Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i) v(static_cast<Eigen::Index>(i)) = real_value(j[i]);
  return v;
}

Json columns_to_json(const ComplexMatrix& mat) {
  Json out = Json::array();
  for (Eigen::Index c = 0; c < mat.cols(); ++c) {
    Json col = Json::array();
    for (Eigen::Index r = 0; r < mat.rows(); ++r) col.push_back(to_json(mat(r, c)));
    out.push_back(std::move(col));
  }
  return out;
}

Json vector_to_json(const ComplexVector& v) {
  Json out = Json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(to_json(v(i)));
  return out;
}

Json real_to_json(const RealVector& v) {
  Json out = Json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(v(i));
  return out;
}

/// JSON has no infinity; an unbounded margin is written as null.
Json finite_or_null(double x) { return std::isfinite(x) ? Json(x) : Json(nullptr); }

void check_dims(int m, int n, Eigen::Index length, const char* what) {
  if (length != static_cast<Eigen::Index>(m) * n) {
    throw Error(ErrorKind::ShapeMismatch, std::string(what) + " has length " + std::to_string(length) +
                                              ", expected m*n = " + std::to_string(m * n));
  }
}

}  // namespace

Json to_json(Complex z) { return Json::array({z.real(), z.imag()}); }

Complex complex_from_json(const Json& j) {
  if (!j.is_array() || j.size() != 2) parse_fail("complex scalar must be [re, im], got " + j.dump());
  return {real_value(j[0]), real_value(j[1])};
}

Json to_json(const DensityMatrix& rho) {
  // Rows of the matrix; columns_to_json of the transpose lists rows.
  return Json{{"m", rho.dim_a()}, {"n", rho.dim_b()}, {"matrix", columns_to_json(rho.matrix().transpose())}};
}

Json to_json(const Ensemble& e) {
  return Json{{"m", e.dim_a()},
              {"n", e.dim_b()},
              {"weights", real_to_json(e.weights())},
              {"vectors", columns_to_json(e.vectors())}};
}

Json to_json(const ProductEnsemble& pe) {
  return Json{{"m", pe.dim_a()},
              {"n", pe.dim_b()},
              {"weights", real_to_json(pe.weights())},
              {"factorsA", columns_to_json(pe.factors_a())},
              {"factorsB", columns_to_json(pe.factors_b())}};
}

Json to_json(const PureState& v) {
  return Json{{"m", v.dim_a()}, {"n", v.dim_b()}, {"amplitudes", vector_to_json(v.amplitudes())}};
}

Json to_json(const ProjectivePoint& p) { return Json{{"coords", vector_to_json(p.coords())}}; }

Json to_json(const MultiPoly& p) {
  Json terms = Json::array();
  for (const auto& [e, c] : p.terms()) terms.push_back(Json{{"exps", e}, {"coef", to_json(c)}});
  return Json{{"vars", p.num_vars()}, {"degree", p.degree()}, {"terms", std::move(terms)}};
}

DensityMatrix density_from_json(const Json& j) {
  const int m = dim_field(j, "m");
  const int n = dim_field(j, "n");
  const ComplexMatrix rows = columns_from_json(field(j, "matrix"), "matrix");
  const ComplexMatrix mat = rows.transpose();
  if (mat.rows() != mat.cols()) throw Error(ErrorKind::ShapeMismatch, "matrix is not square");
  check_dims(m, n, mat.rows(), "matrix");
  return validate_density(mat, m, n);
}

Ensemble ensemble_from_json(const Json& j) {
  const int m = dim_field(j, "m");
  const int n = dim_field(j, "n");
  RealVector weights = real_array(field(j, "weights"), "weights");
  ComplexMatrix vectors = columns_from_json(field(j, "vectors"), "vectors");
  check_dims(m, n, vectors.rows(), "ensemble vector");
  return Ensemble(m, n, std::move(weights), std::move(vectors));
}

ProductEnsemble product_ensemble_from_json(const Json& j) {
  const int m = dim_field(j, "m");
  const int n = dim_field(j, "n");
  RealVector weights = real_array(field(j, "weights"), "weights");
  ComplexMatrix fa = columns_from_json(field(j, "factorsA"), "factorsA");
  ComplexMatrix fb = columns_from_json(field(j, "factorsB"), "factorsB");
  if (fa.rows() != m || fb.rows() != n) {
    throw Error(ErrorKind::ShapeMismatch, "factor lengths do not match (m, n) = (" + std::to_string(m) + ", " +
                                              std::to_string(n) + ")");
  }
  return ProductEnsemble(std::move(weights), std::move(fa), std::move(fb));
}

PureState pure_state_from_json(const Json& j) {
  const int m = dim_field(j, "m");
  const int n = dim_field(j, "n");
  ComplexVector amp = complex_array(field(j, "amplitudes"), "amplitudes");
  check_dims(m, n, amp.size(), "amplitudes");
  return PureState(m, n, std::move(amp));
}

ProjectivePoint point_from_json(const Json& j) {
  if (j.is_object()) return ProjectivePoint(complex_array(field(j, "coords"), "coords"));
  return ProjectivePoint(complex_array(j, "coords"));
}

MultiPoly multipoly_from_json(const Json& j) {
  const int vars = dim_field(j, "vars");
  const Json& deg = field(j, "degree");
  if (!deg.is_number_integer() || deg.get<int>() < 0) parse_fail("\"degree\" must be a nonnegative integer");
  MultiPoly p(vars, deg.get<int>());
  const Json& terms = field(j, "terms");
  if (!terms.is_array()) parse_fail("\"terms\" must be an array");
  for (const Json& t : terms) {
    const Json& exps = field(t, "exps");
    if (!exps.is_array()) parse_fail("\"exps\" must be an array");
    Exponents e;
    for (const Json& x : exps) {
      if (!x.is_number_integer()) parse_fail("exponents must be integers");
      e.push_back(x.get<int>());
    }
    p.add_term(e, complex_from_json(field(t, "coef")));
  }
  return p;
}

Json to_json(const MembershipResult& r) {
  return Json{{"member", r.member}, {"rank", r.rank}, {"margin", finite_or_null(r.margin)}, {"k", r.k}};
}

Json to_json(const SchmidtReport& r) {
  Json out{{"d", r.d}};
  out["v0_dim"] = r.v0_dim ? Json(*r.v0_dim) : Json("EMPTY");
  out["schmidt_coefficients"] = real_to_json(r.coefficients);
  out["swapped"] = r.swapped;
  return out;
}

Json to_json(const CovarianceReport& r) {
  return Json{{"agree", r.agree},
              {"disagree", r.disagree},
              {"near_threshold", r.near_threshold},
              {"min_margin", finite_or_null(r.min_margin)}};
}

Json to_json(const StructureReport& r) {
  Json violations = Json::array();
  for (const auto& v : r.violations) {
    violations.push_back(Json{{"rows", v.rows}, {"cols", v.cols}, {"residual", v.residual}});
  }
  return Json{{"minors_checked", r.minors_checked},
              {"max_residual", r.max_residual},
              {"violations", std::move(violations)}};
}

Json to_json(const FactorizationResult& r) {
  Json factors = Json::array();
  for (const LinearForm& f : r.factors) factors.push_back(vector_to_json(f.coefficients()));
  Json certs = Json::array();
  for (const LiftCertificate& c : r.certificates) {
    certs.push_back(Json{{"base", vector_to_json(c.base)},
                         {"direction_1", vector_to_json(c.direction_1)},
                         {"direction_j", vector_to_json(c.direction_j)},
                         {"root_value", to_json(c.root_value)},
                         {"gap", c.gap}});
  }
  return Json{{"status", std::string(to_string(r.status))},
              {"constant", to_json(r.constant)},
              {"factors", std::move(factors)},
              {"residual", r.residual},
              {"rejected_candidates", r.rejected_candidates},
              {"certificates", std::move(certs)}};
}

Json to_json(const LinearityReport& r) {
  Json out{{"verdict", std::string(to_string(r.verdict))},
           {"k", r.k},
           {"ensemble_terms", r.ensemble_terms},
           {"ensemble_weights", real_to_json(r.ensemble_weights)},
           {"minors_total", r.minors_total},
           {"zero_minors", r.zero_minors},
           {"factored", r.factored},
           {"not_product", r.not_product},
           {"inconclusive", r.inconclusive}};
  if (r.witness) {
    const VarietyWitness& w = *r.witness;
    Json minor = to_json(w.minor.poly);
    minor["rows"] = w.minor.rows;
    minor["cols"] = w.minor.cols;
    out["witness"] = Json{{"p", to_json(w.p)},
                          {"q", to_json(w.q)},
                          {"x", to_json(w.x)},
                          {"y", to_json(w.y)},
                          {"membership_at_x", to_json(w.at_x)},
                          {"minor_value_at_x", w.minor_value_at_x},
                          {"minor", std::move(minor)},
                          {"division_certificate", to_json(w.factorization)}};
  }
  return out;
}

StateFile state_from_json(const Json& j) {
  if (!j.is_object()) parse_fail("state file must hold a JSON object");
  if (j.contains("factorsA") || j.contains("factorsB")) return StateFile{product_ensemble_from_json(j), std::nullopt};
  if (j.contains("vectors")) {
    StateFile out{ensemble_from_json(j), std::nullopt};
    if (j.contains("matrix")) out.claimed = density_from_json(j);
    return out;
  }
  if (j.contains("amplitudes")) return StateFile{pure_state_from_json(j), std::nullopt};
  if (j.contains("matrix")) return StateFile{density_from_json(j), std::nullopt};
  parse_fail("unrecognized state file: expected matrix, vectors, factorsA/factorsB or amplitudes");
}

Json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) parse_fail("cannot open " + path);
  try {
    return Json::parse(in);
  } catch (const Json::exception& e) {
    parse_fail(path + ": " + e.what());
  }
}

StateFile read_state_file(const std::string& path) {
  const Json j = read_json_file(path);
  try {
    return state_from_json(j);
  } catch (const Json::exception& e) {
    parse_fail(path + ": " + e.what());
  }
}

DensityMatrix as_density(const StateFile& f) {
  if (f.claimed) return *f.claimed;
  return std::visit(
      [](const auto& s) -> DensityMatrix {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, DensityMatrix>) {
          return s;
        } else if constexpr (std::is_same_v<T, Ensemble>) {
          return density_from_ensemble(s);
        } else if constexpr (std::is_same_v<T, ProductEnsemble>) {
          return density_from_ensemble(product_ensemble_to_ensemble(s));
        } else {
          return density_from_pure(s);
        }
      },
      f.state);
}

Ensemble as_ensemble(const StateFile& f, const RankPolicy& policy) {
  return std::visit(
      [&](const auto& s) -> Ensemble {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, DensityMatrix>) {
          return eigen_ensemble(s, policy);
        } else if constexpr (std::is_same_v<T, Ensemble>) {
          return s;
        } else if constexpr (std::is_same_v<T, ProductEnsemble>) {
          return product_ensemble_to_ensemble(s);
        } else {
          return pure_to_ensemble(s);
        }
      },
      f.state);
}

PureState as_pure(const StateFile& f, const RankPolicy& policy) {
  if (const auto* v = std::get_if<PureState>(&f.state)) return *v;
  const DensityMatrix rho = as_density(f);
  const RankInfo info = numerical_rank(rho.matrix(), policy);
  if (info.rank != 1) {
    throw Error(ErrorKind::NotPure, "state has rank " + std::to_string(info.rank) + ", expected 1");
  }
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(rho.matrix());
  ComplexVector v = es.eigenvectors().col(es.eigenvectors().cols() - 1);
  Eigen::Index pivot = 0;
  v.cwiseAbs().maxCoeff(&pivot);
  v *= std::abs(v(pivot)) / v(pivot);
  v.normalize();
  return PureState(rho.dim_a(), rho.dim_b(), std::move(v));
}

}  // namespace detvar
