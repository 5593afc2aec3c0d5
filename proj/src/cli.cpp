#include "detvar/cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <numbers>
#include <sstream>

#include "detvar/io.hpp"

namespace detvar::cli {

namespace {

constexpr double kPptTol = 1e-10;

void emit(const RunConfig& cfg, std::ostream& out, const std::string& text) {
  if (cfg.output_path.empty()) {
    out << text;
    return;
  }
  std::ofstream file(cfg.output_path);
  if (!file) throw Error(ErrorKind::InvalidArgument, "cannot write " + cfg.output_path);
  file << text;
}

std::string dump(const Json& j) { return j.dump(2) + "\n"; }

Json parse_inline_json(const std::string& text, const char* option) {
  if (text.empty()) throw Error(ErrorKind::ParseError, std::string(option) + " is required for this command");
  try {
    return Json::parse(text);
  } catch (const Json::exception& e) {
    throw Error(ErrorKind::ParseError, std::string(option) + ": " + e.what());
  }
}

RankPolicy policy_of(const RunConfig& cfg) { return RankPolicy{cfg.rel_eps}; }

int cmd_schmidt(const StateFile& f, const RunConfig& cfg, std::ostream& out) {
  const SchmidtReport report = schmidt_number(as_pure(f, policy_of(cfg)), policy_of(cfg));
  emit(cfg, out, dump(to_json(report)));
  return kOk;
}

int cmd_membership(const StateFile& f, const RunConfig& cfg, std::ostream& out) {
  const DensityMatrix rho = as_density(f);
  const ProjectivePoint r = point_from_json(parse_inline_json(cfg.point_json, "--point"));
  const MembershipResult res = cfg.side == "B" ? member_VB(rho, r, cfg.k, policy_of(cfg))
                                               : member_VA(rho, r, cfg.k, policy_of(cfg));
  Json j = to_json(res);
  j["side"] = cfg.side;
  emit(cfg, out, dump(j));
  return kOk;
}

int cmd_covariance(const StateFile& f, const RunConfig& cfg, std::ostream& out) {
  const DensityMatrix rho = as_density(f);
  const LocalUnitary t = LocalUnitary::haar(rho.dim_a(), rho.dim_b(), derive_seed(cfg.seed, 0));
  CovarianceOptions options;
  options.policy = policy_of(cfg);
  const CovarianceReport report = check_covariance(rho, t, cfg.k, cfg.samples, derive_seed(cfg.seed, 1), options);
  emit(cfg, out, dump(to_json(report)));
  return report.disagree > 0 ? kViolation : kOk;
}

int cmd_minors(const StateFile& f, const RunConfig& cfg, std::ostream& out) {
  const Ensemble e = as_ensemble(f, policy_of(cfg));
  const std::vector<MinorPoly> minors = pencil_minor_polys(pencil_blocks(e), cfg.k);
  Json list = Json::array();
  int zeros = 0;
  for (const MinorPoly& mp : minors) {
    if (mp.poly.is_zero()) {
      ++zeros;
      continue;
    }
    Json j = to_json(mp.poly);
    j["rows"] = mp.rows;
    j["cols"] = mp.cols;
    list.push_back(std::move(j));
  }
  Json doc{{"k", cfg.k},
           {"vars", e.dim_a()},
           {"total", static_cast<int>(minors.size())},
           {"zero_omitted", zeros},
           {"minors", std::move(list)}};
  int code = kOk;
  if (const auto* pe = std::get_if<ProductEnsemble>(&f.state)) {
    const StructureReport structure = separable_minor_structure(*pe, cfg.k);
    doc["structure"] = to_json(structure);
    if (!structure.violations.empty()) code = kViolation;
  }
  emit(cfg, out, dump(doc));
  return code;
}

int cmd_linearity(const StateFile& f, const RunConfig& cfg, std::ostream& out) {
  const DensityMatrix rho = as_density(f);
  const Ensemble e = as_ensemble(f, policy_of(cfg));
  LinearityOptions options;
  options.policy = policy_of(cfg);
  options.factor.seed = cfg.seed;
  const LinearityReport report = linearity_diagnostic(rho, e, cfg.k, cfg.trials, cfg.seed, options);
  emit(cfg, out, dump(to_json(report)));
  return kOk;
}

int cmd_ppt(const StateFile& f, const RunConfig& cfg, std::ostream& out) {
  const DensityMatrix rho = as_density(f);
  const ComplexMatrix pt = partial_transpose_b(rho);
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(0.5 * (pt + pt.adjoint()), Eigen::EigenvaluesOnly);
  const double min_eig = es.eigenvalues()(0);
  const int dims = rho.dim_a() * rho.dim_b();
  Json j{{"verdict", min_eig < -kPptTol ? "NPT" : "PPT"},
         {"min_eigenvalue", min_eig},
         {"ppt_equivalent_to_separable", dims <= 6}};
  emit(cfg, out, dump(j));
  return kOk;
}

std::string format_number(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12e", x);
  return buf;
}

int cmd_slice(const StateFile& f, const RunConfig& cfg, std::ostream& out) {
  const DensityMatrix rho = as_density(f);
  const Json line = parse_inline_json(cfg.line_json, "--line");
  if (!line.is_object() || !line.contains("p") || !line.contains("q")) {
    throw Error(ErrorKind::ParseError, "--line must be {\"p\": [...], \"q\": [...], \"phi\": x}");
  }
  const ProjectivePoint p = point_from_json(line.at("p"));
  const ProjectivePoint q = point_from_json(line.at("q"));
  if (p.dim() != rho.dim_a() || q.dim() != rho.dim_a()) {
    throw Error(ErrorKind::ShapeMismatch, "line endpoints must have m coordinates");
  }
  double phi = 0.0;
  if (line.contains("phi")) {
    if (!line.at("phi").is_number()) throw Error(ErrorKind::ParseError, "\"phi\" must be a number");
    phi = line.at("phi").get<double>();
  }
  const ComplexVector pu = p.coords() / p.coords().norm();
  const ComplexVector qu = q.coords() / q.coords().norm();
  const Complex rot = std::polar(1.0, phi);
  std::ostringstream csv;
  csv << "theta,min_eigenvalue,rank\n";
  for (int s = 0; s < cfg.samples; ++s) {
    const double theta = cfg.samples == 1 ? 0.0 : (std::numbers::pi / 2.0) * s / (cfg.samples - 1);
    ComplexVector r = std::cos(theta) * pu + std::sin(theta) * rot * qu;
    const double norm = r.norm();
    if (norm == 0.0) continue;
    r /= norm;
    const ComplexMatrix mat = eval_M(rho, ProjectivePoint(r));
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(mat, Eigen::EigenvaluesOnly);
    const int rank = numerical_rank(mat, policy_of(cfg), pencil_scale(rho, ProjectivePoint(r))).rank;
    csv << format_number(theta) << ',' << format_number(es.eigenvalues()(0)) << ',' << rank << '\n';
  }
  emit(cfg, out, csv.str());
  return kOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Determinantal-variety invariants of bipartite quantum states", "detvar"};
  RunConfig cfg;
  std::string command;
  std::string file;
  const std::vector<std::string> commands{"schmidt", "membership", "covariance", "minors",
                                          "linearity", "ppt", "slice"};
  app.add_option("command", command, "Analysis to run")->required()->check(CLI::IsMember(commands));
  app.add_option("file", file, "State file (JSON)")->required();
  app.add_option("--k", cfg.k, "Rank bound k")->check(CLI::NonNegativeNumber);
  app.add_option("--seed", cfg.seed, "Random seed");
  app.add_option("--samples", cfg.samples, "Sample count")->check(CLI::PositiveNumber);
  app.add_option("--rel-eps", cfg.rel_eps, "Relative rank tolerance")
      ->check(CLI::Validator(
          [](std::string& s) -> std::string {
            double x = 0.0;
            try {
              x = std::stod(s);
            } catch (const std::exception&) {
              return "--rel-eps must be a number";
            }
            return (x > 0.0 && x <= 1e-2) ? std::string() : std::string("--rel-eps must be in (0, 1e-2]");
          },
          "(0, 1e-2]"));
  app.add_option("--trials", cfg.trials, "Witness search trials (linearity)")->check(CLI::PositiveNumber);
  app.add_option("--out", cfg.output_path, "Write the result here instead of stdout");
  app.add_option("--point", cfg.point_json, "Projective point as JSON (membership)");
  app.add_option("--line", cfg.line_json, "Line {\"p\",\"q\",\"phi\"} as JSON (slice)");
  app.add_option("--side", cfg.side, "Factor whose variety is queried (membership)")
      ->check(CLI::IsMember({"A", "B"}));

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kInvalidInput;
  }

  try {
    const StateFile f = read_state_file(file);
    if (command == "schmidt") return cmd_schmidt(f, cfg, out);
    if (command == "membership") return cmd_membership(f, cfg, out);
    if (command == "covariance") return cmd_covariance(f, cfg, out);
    if (command == "minors") return cmd_minors(f, cfg, out);
    if (command == "linearity") return cmd_linearity(f, cfg, out);
    if (command == "ppt") return cmd_ppt(f, cfg, out);
    return cmd_slice(f, cfg, out);
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kInvalidInput;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << "\n";
    return kInternal;
  }
}

}  // namespace detvar::cli
