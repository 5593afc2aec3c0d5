#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>

#include "detvar/io.hpp"
#include "support/oracles.hpp"

using namespace detvar;

namespace {

std::string fixture(const std::string& name) { return std::string(DETVAR_FIXTURES_DIR) + "/" + name; }

ErrorKind kind_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.kind();
  }
  ADD_FAILURE() << "expected an exception";
  return ErrorKind::InvalidArgument;
}

}  // namespace

TEST(Json, ComplexAndDensityRoundTrip) {
  EXPECT_EQ(complex_from_json(to_json(Complex(1.5, -2.0))), Complex(1.5, -2.0));
  Rng rng(1);
  const DensityMatrix rho = random_density(2, 3, 3, rng);
  const DensityMatrix back = density_from_json(Json::parse(to_json(rho).dump()));
  EXPECT_EQ(back.matrix(), rho.matrix());
  EXPECT_EQ(back.dim_a(), 2);
}

TEST(Json, EnsemblesAndPureStatesRoundTrip) {
  Rng rng(2);
  const Ensemble e = random_ensemble(3, 2, 4, rng);
  const Ensemble e2 = ensemble_from_json(Json::parse(to_json(e).dump()));
  EXPECT_EQ(e2.vectors(), e.vectors());
  EXPECT_EQ(e2.weights(), e.weights());

  const ProductEnsemble pe = random_product_ensemble(2, 3, 2, rng);
  const ProductEnsemble pe2 = product_ensemble_from_json(to_json(pe));
  EXPECT_EQ(pe2.factors_a(), pe.factors_a());
  EXPECT_EQ(pe2.factors_b(), pe.factors_b());

  const PureState v = random_pure_state(2, 2, rng);
  EXPECT_EQ(pure_state_from_json(to_json(v)).amplitudes(), v.amplitudes());
}

TEST(Json, MultiPolyRoundTrip) {
  const MultiPoly x = MultiPoly::variable(3, 0);
  const MultiPoly z = MultiPoly::variable(3, 2);
  const MultiPoly p = x * z * Complex(2.0, 1.0) - z * z;
  const MultiPoly back = multipoly_from_json(Json::parse(to_json(p).dump()));
  EXPECT_EQ(back.terms(), p.terms());
  EXPECT_EQ(multipoly_from_json(to_json(MultiPoly::zero(2, 3))).degree(), 3);
}

TEST(Json, PointsAcceptObjectOrArray) {
  const ProjectivePoint a = point_from_json(Json::parse(R"({"coords": [[1, 0], [0, 1]]})"));
  const ProjectivePoint b = point_from_json(Json::parse(R"([[1, 0], [0, 1]])"));
  EXPECT_EQ(a.coords(), b.coords());
  EXPECT_EQ(a[1], Complex(0.0, 1.0));
}

TEST(Json, NamedErrors) {
  EXPECT_EQ(kind_of([] { complex_from_json(Json::parse("[1]")); }), ErrorKind::ParseError);
  EXPECT_EQ(kind_of([] { density_from_json(Json::parse(R"({"m": 2, "matrix": []})")); }), ErrorKind::ParseError);
  EXPECT_EQ(kind_of([] { density_from_json(Json::parse(R"({"m": 1, "n": 1, "matrix": [[[2, 0]]]})")); }),
            ErrorKind::TraceNotOne);
  EXPECT_EQ(kind_of([] { density_from_json(Json::parse(R"({"m": 1, "n": 2, "matrix": [[[1, 0]]]})")); }),
            ErrorKind::ShapeMismatch);
  EXPECT_EQ(kind_of([] { pure_state_from_json(Json::parse(R"({"m": 1, "n": 1, "amplitudes": [[2, 0]]})")); }),
            ErrorKind::NotNormalized);
  EXPECT_EQ(kind_of([] { point_from_json(Json::parse("[[0, 0], [0, 0]]")); }), ErrorKind::InvalidArgument);
  EXPECT_EQ(kind_of([] { state_from_json(Json::parse(R"({"m": 1, "n": 1})")); }), ErrorKind::ParseError);
  EXPECT_EQ(kind_of([] { read_state_file("/nonexistent/state.json"); }), ErrorKind::ParseError);
}

TEST(StateFile, FixturesLoadAsTheRightKind) {
  EXPECT_TRUE(std::holds_alternative<DensityMatrix>(read_state_file(fixture("bell_density.json")).state));
  EXPECT_TRUE(std::holds_alternative<PureState>(read_state_file(fixture("bell_pure.json")).state));
  EXPECT_TRUE(std::holds_alternative<Ensemble>(read_state_file(fixture("entangled_ensemble_3x2.json")).state));
  EXPECT_TRUE(std::holds_alternative<ProductEnsemble>(read_state_file(fixture("separable_2x2.json")).state));
  const StateFile bell = read_state_file(fixture("bell_density.json"));
  const StateFile bell_pure = read_state_file(fixture("bell_pure.json"));
  EXPECT_LT(max_abs(as_density(bell).matrix() - as_density(bell_pure).matrix()), 1e-12);
}

TEST(StateFile, PureConversion) {
  const PureState v = as_pure(read_state_file(fixture("bell_density.json")));
  EXPECT_LT(max_abs(density_from_pure(v).matrix() - as_density(read_state_file(fixture("bell_density.json"))).matrix()),
            1e-12);
  EXPECT_EQ(kind_of([] { as_pure(read_state_file(fixture("maximally_mixed_2x2.json"))); }), ErrorKind::NotPure);
}

TEST(StateFile, EnsembleOfADensityRealizesIt) {
  const StateFile f = read_state_file(fixture("rank2_2x3.json"));
  const Ensemble e = as_ensemble(f);
  EXPECT_EQ(e.size(), 2);
  EXPECT_LT(max_abs(oracle::density_by_terms(e) - as_density(f).matrix()), 1e-12);
}

TEST(Reports, MembershipMarginInfinityIsNull) {
  MembershipResult r;
  r.margin = std::numeric_limits<double>::infinity();
  EXPECT_TRUE(to_json(r)["margin"].is_null());
  SchmidtReport s;
  s.d = 2;
  EXPECT_EQ(to_json(s)["v0_dim"], "EMPTY");
  s.v0_dim = 0;
  EXPECT_EQ(to_json(s)["v0_dim"], 0);
}
