#include <cmath>
#include <string>

#include "detvar/symbolic.hpp"

namespace detvar {

namespace {

long long binomial(int n, int r) {
  if (r < 0 || r > n) return 0;
  long long out = 1;
  for (int i = 1; i <= r; ++i) out = out * (n - r + i) / i;
  return out;
}

std::vector<std::vector<int>> combinations(int n, int r) {
  std::vector<std::vector<int>> out;
  if (r > n || r < 0) return out;
  std::vector<int> idx(r);
  for (int i = 0; i < r; ++i) idx[i] = i;
  while (true) {
    out.push_back(idx);
    int pos = r - 1;
    while (pos >= 0 && idx[pos] == n - r + pos) --pos;
    if (pos < 0) break;
    ++idx[pos];
    for (int i = pos + 1; i < r; ++i) idx[i] = idx[i - 1] + 1;
  }
  return out;
}

}  // namespace

MultiPoly cofactor_determinant(const std::vector<std::vector<MultiPoly>>& grid) {
  const std::size_t size = grid.size();
  if (size == 0) throw Error(ErrorKind::InvalidArgument, "determinant of an empty grid");
  if (size == 1) return grid[0][0];
  const int vars = grid[0][0].num_vars();
  MultiPoly total(vars, 0);
  for (std::size_t col = 0; col < size; ++col) {
    if (grid[0][col].is_zero()) continue;
    std::vector<std::vector<MultiPoly>> sub;
    sub.reserve(size - 1);
    for (std::size_t row = 1; row < size; ++row) {
      std::vector<MultiPoly> line;
      line.reserve(size - 1);
      for (std::size_t c = 0; c < size; ++c) {
        if (c != col) line.push_back(grid[row][c]);
      }
      sub.push_back(std::move(line));
    }
    MultiPoly term = grid[0][col] * cofactor_determinant(sub);
    if (col % 2 == 1) term = term * Complex(-1.0);
    total = total + term;
  }
  if (total.is_zero()) {
    int degree = 0;
    for (const auto& row : grid) degree += row.front().degree();
    return MultiPoly::zero(vars, degree);
  }
  return total;
}

std::vector<MinorPoly> pencil_minor_polys(const PencilBlocks& pb, int k, const MinorCaps& caps) {
  const int m = pb.dim_a;
  const int n = pb.dim_b;
  const int t = pb.terms();
  if (k < 0 || k > n - 1) {
    throw Error(ErrorKind::KOutOfRange, "k = " + std::to_string(k) + " outside 0.." + std::to_string(n - 1));
  }
  const int order = k + 1;
  if (order > t) return {};
  if (order > caps.max_order) {
    throw Error(ErrorKind::CombinatorialBlowup,
                "minor order " + std::to_string(order) + " exceeds cap " + std::to_string(caps.max_order));
  }
  if (m > caps.max_vars) {
    throw Error(ErrorKind::CombinatorialBlowup,
                std::to_string(m) + " variables exceed cap " + std::to_string(caps.max_vars));
  }
  const long long count = binomial(n, order) * binomial(t, order);
  if (count > caps.max_minors) {
    throw Error(ErrorKind::CombinatorialBlowup,
                std::to_string(count) + " minors exceed cap " + std::to_string(caps.max_minors));
  }

  // entries[j][l] = sum_i A_i(j, l) r_i
  std::vector<std::vector<MultiPoly>> entries(n);
  for (int j = 0; j < n; ++j) {
    for (int l = 0; l < t; ++l) {
      ComplexVector coeffs(m);
      for (int i = 0; i < m; ++i) coeffs(i) = pb.blocks[i](j, l);
      entries[j].push_back(MultiPoly::linear(coeffs));
    }
  }

  std::vector<MinorPoly> out;
  out.reserve(static_cast<std::size_t>(count));
  const auto row_sets = combinations(n, order);
  const auto col_sets = combinations(t, order);
  for (const auto& rows : row_sets) {
    for (const auto& cols : col_sets) {
      std::vector<std::vector<MultiPoly>> grid;
      grid.reserve(order);
      for (int r : rows) {
        std::vector<MultiPoly> line;
        line.reserve(order);
        for (int c : cols) line.push_back(entries[r][c]);
        grid.push_back(std::move(line));
      }
      out.push_back(MinorPoly{rows, cols, cofactor_determinant(grid)});
    }
  }
  return out;
}

double max_minor_value(const std::vector<MinorPoly>& minors, const ProjectivePoint& r) {
  double best = 0.0;
  for (const MinorPoly& mp : minors) best = std::max(best, std::abs(eval_poly(mp.poly, r.coords())));
  return best;
}

double minor_vanishing_tolerance(const PencilBlocks& pb, const ProjectivePoint& r, int k, const RankPolicy& policy) {
  double frob2 = 0.0;
  for (const ComplexMatrix& blk : pb.blocks) frob2 += blk.squaredNorm();
  // ||r|| * ||A||_F bounds the pencil norm, so a root that is only zero up to
  // rounding still counts as a rank drop.
  const double reference = std::sqrt(frob2) * r.coords().norm();
  const RankInfo info = numerical_rank(eval_holomorphic_pencil(pb, r), policy, reference);
  const double sigma_max = std::max(info.singular_values.size() > 0 ? info.singular_values(0) : 0.0, reference);
  // Cauchy-Binet: every (k+1)-minor is bounded by sigma_1 ... sigma_{k+1} <= sigma_max^k * sigma_{k+1}.
  return info.threshold * std::pow(sigma_max, k);
}

StructureReport separable_minor_structure(const ProductEnsemble& pe, int k, const MinorCaps& caps) {
  const int m = pe.dim_a();
  const PencilBlocks pb = pencil_blocks(product_ensemble_to_ensemble(pe));
  const std::vector<MinorPoly> minors = pencil_minor_polys(pb, k, caps);
  const ComplexMatrix& b = pe.factors_b();
  const ComplexMatrix& a = pe.factors_a();

  StructureReport report;
  for (const MinorPoly& minor : minors) {
    const int order = static_cast<int>(minor.rows.size());
    ComplexMatrix sub(order, order);
    double bound = 1.0;
    for (int x = 0; x < order; ++x) {
      for (int y = 0; y < order; ++y) sub(x, y) = b(minor.rows[x], minor.cols[y]);
    }
    MultiPoly expected = MultiPoly::constant(m, sub.determinant());
    for (int u : minor.cols) {
      expected = expected * MultiPoly::linear(a.col(u));
      bound *= a.col(u).cwiseAbs().maxCoeff() * b.col(u).cwiseAbs().maxCoeff();
    }
    double diff = 0.0;
    for (const auto& [e, c] : minor.poly.terms()) diff = std::max(diff, std::abs(c - expected.coeff(e)));
    for (const auto& [e, c] : expected.terms()) {
      if (minor.poly.terms().count(e) == 0) diff = std::max(diff, std::abs(c));
    }
    const double scale = std::max({minor.poly.max_coeff(), expected.max_coeff(), bound});
    const double residual = scale > 0.0 ? diff / scale : 0.0;
    ++report.minors_checked;
    report.max_residual = std::max(report.max_residual, residual);
    if (residual > kStructureRelTol) report.violations.push_back({minor.rows, minor.cols, residual});
  }
  return report;
}

}  // namespace detvar
