#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <fstream>

#include "bvbfv/adm.hpp"
#include "bvbfv/io.hpp"

namespace bvbfv {
namespace {

ErrorKind kind_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.kind();
  }
  ADD_FAILURE() << "no error thrown";
  return ErrorKind::ConfigMismatch;
}

std::filesystem::path scratch_dir() {
  auto p = std::filesystem::temp_directory_path() / "bvbfv_io_test";
  std::filesystem::create_directories(p);
  return p;
}

TEST(Scenario, FlatPresetInThreeDimensions) {
  const Scenario sc = parse_scenario(R"({"d": 3, "grid": 16, "preset": "flat"})");
  const BVState s = instantiate(sc);
  EXPECT_EQ(s.d(), 3);
  EXPECT_EQ(s.size(), 16u * 16u * 16u);
  for (double v : s.adm.eta.body()) EXPECT_EQ(v, 1.0);
  for (int a = 0; a < 3; ++a)
    for (int b = a; b < 3; ++b) EXPECT_EQ(s.adm.gamma(a, b).max_abs(), a == b ? 1.0 : 0.0);
  EXPECT_EQ(s.adm.J.max_abs(), 0.0);
  EXPECT_EQ(s.xi_n.max_abs() + s.gd_nn.max_abs() + s.chi_n.max_abs() + s.gd.max_abs(), 0.0);
  for (const auto& x : s.xi) EXPECT_TRUE(x.is_zero());
}

// gamma = psi^4 delta, psi = 1 + M / (2 r), from the mesh coordinates.
TEST(Scenario, SchwarzschildClosedForm) {
  const Scenario sc = parse_scenario(
      R"({"d": 3, "grid": 12, "preset": {"name": "schwarzschild_isotropic", "mass": 1.0, "lo": 2.0, "hi": 3.0}})");
  const BVState s = instantiate(sc);
  const Mesh& m = *s.adm.mesh;
  const auto x = m.coordinate(0), y = m.coordinate(1), z = m.coordinate(2);
  const auto g00 = s.adm.gamma(0, 0).body(), g11 = s.adm.gamma(1, 1).body(), g22 = s.adm.gamma(2, 2).body();
  double err = 0.0;
  for (std::size_t i = 0; i < m.size(); ++i) {
    const double r = std::sqrt(x[i] * x[i] + y[i] * y[i] + z[i] * z[i]);
    const double psi4 = std::pow(1.0 + 0.5 / r, 4);
    err = std::max({err, std::abs(g00[i] - psi4), std::abs(g11[i] - psi4), std::abs(g22[i] - psi4)});
  }
  EXPECT_LT(err, 1e-14);
  EXPECT_EQ(s.adm.gamma(0, 1).max_abs() + s.adm.gamma(1, 2).max_abs(), 0.0);
  EXPECT_EQ(s.adm.J.max_abs(), 0.0);
  for (double v : s.adm.eta.body()) EXPECT_EQ(v, 1.0);
  for (const auto& b : s.adm.beta) EXPECT_EQ(b.max_abs(), 0.0);
}

TEST(Scenario, RandomPresetIsDeterministic) {
  const char* text = R"({"d": 2, "grid": 16, "seed": 42, "preset": {"name": "random_smooth", "amplitude": 0.05}})";
  const BVState a = instantiate(parse_scenario(text));
  const BVState b = instantiate(parse_scenario(text));
  EXPECT_EQ(encode_archive(a), encode_archive(b));
  const BVState c = instantiate(parse_scenario(
      R"({"d": 2, "grid": 16, "seed": 43, "preset": {"name": "random_smooth", "amplitude": 0.05}})"));
  EXPECT_NE(encode_archive(a), encode_archive(c));
}

TEST(Scenario, BulkPatchScenario) {
  const BVState s = instantiate(parse_scenario(R"({"d": 2, "grid": 8, "layers": 9, "preset": "random_bv"})"));
  EXPECT_TRUE(s.adm.on_bulk());
  EXPECT_EQ(s.size(), 9u * 8u * 8u);
  EXPECT_FALSE(s.xi_n.is_zero());
}

TEST(Scenario, SchemaErrors) {
  auto bad = [](const char* text) { return kind_of([&] { parse_scenario(text); }); };
  EXPECT_EQ(bad("{"), ErrorKind::SchemaError);
  EXPECT_EQ(bad("[1, 2]"), ErrorKind::SchemaError);
  EXPECT_EQ(bad(R"({"d": 2})"), ErrorKind::SchemaError);
  EXPECT_EQ(bad(R"({"d": 2, "preset": "flat", "archive": "a.arch"})"), ErrorKind::SchemaError);
  EXPECT_EQ(bad(R"({"d": 2, "preset": "nope"})"), ErrorKind::SchemaError);
  EXPECT_EQ(bad(R"({"d": 2, "preset": {"name": "flat", "mass": 1}})"), ErrorKind::SchemaError);
  EXPECT_EQ(bad(R"({"d": 2, "preset": "flat", "colour": 1})"), ErrorKind::SchemaError);
  EXPECT_EQ(bad(R"({"d": "two", "preset": "flat"})"), ErrorKind::SchemaError);
  EXPECT_EQ(bad(R"({"d": 2, "eps": 0, "preset": "flat"})"), ErrorKind::SchemaError);
  EXPECT_EQ(bad(R"({"d": 2, "generators": 11, "preset": "flat"})"), ErrorKind::SchemaError);
  EXPECT_EQ(bad(R"({"d": 1, "preset": "flat"})"), ErrorKind::DimensionUnsupported);
  EXPECT_EQ(bad(R"({"d": 4, "preset": "flat"})"), ErrorKind::DimensionUnsupported);
}

TEST(Scenario, DegeneratePresetParameters) {
  auto inst = [](const char* text) { return kind_of([&] { instantiate(parse_scenario(text)); }); };
  EXPECT_EQ(inst(R"({"d": 3, "grid": 8, "preset": {"name": "schwarzschild_isotropic", "lo": -1.0, "hi": 1.0}})"),
            ErrorKind::SingularMetric);
  EXPECT_EQ(inst(R"({"d": 2, "grid": 16, "preset": {"name": "random_smooth", "amplitude": 50.0}})"),
            ErrorKind::SingularMetric);
  EXPECT_EQ(inst(R"({"d": 3, "grid": 8, "preset": "conformal2d"})"), ErrorKind::SchemaError);
}

// ---- archives ----

TEST(Archive, RoundTripIsByteIdentical) {
  for (const char* text : {R"({"d": 2, "grid": 12, "eps": -1, "lambda": 0.3, "seed": 5, "preset": "random_bv"})",
                           R"({"d": 3, "grid": 8, "layers": 7, "seed": 6, "preset": "random_bv"})",
                           R"({"d": 3, "grid": 8, "preset": "flat"})"}) {
    const BVState s = instantiate(parse_scenario(text));
    const std::string bytes = encode_archive(s);
    const Archive a = decode_archive(bytes);
    ASSERT_EQ(a.kind, ArchiveKind::BV);
    EXPECT_EQ(encode_archive(a.bv), bytes);
    EXPECT_EQ(max_abs_diff(a.bv, s), 0.0);
    EXPECT_EQ(a.bv.adm.eps, s.adm.eps);
    EXPECT_EQ(a.bv.adm.lambda, s.adm.lambda);
    EXPECT_EQ(*a.bv.adm.mesh, *s.adm.mesh);
    EXPECT_EQ(*config_of(a.bv), *config_of(s));
  }
  const DarbouxState ds = reduce_bv(instantiate(parse_scenario(R"({"d": 2, "grid": 12, "preset": "random_bv"})")));
  const std::string bytes = encode_archive(ds);
  const Archive a = decode_archive(bytes);
  ASSERT_EQ(a.kind, ArchiveKind::Darboux);
  EXPECT_EQ(encode_archive(a.darboux), bytes);
  EXPECT_EQ(max_abs_diff(a.darboux, ds), 0.0);
}

TEST(Archive, HeaderLayout) {
  const std::string bytes = encode_archive(instantiate(parse_scenario(R"({"d": 2, "grid": 8, "preset": "flat"})")));
  EXPECT_EQ(bytes.substr(0, 8), "BVBFVARC");
  EXPECT_EQ(static_cast<unsigned char>(bytes[8]), kArchiveVersion);  // little-endian u32
  EXPECT_EQ(bytes[9] | bytes[10] | bytes[11], 0);
  EXPECT_EQ(static_cast<unsigned char>(bytes[12]), 1u);  // BV kind
}

TEST(Archive, CorruptInputRejected) {
  const std::string good = encode_archive(instantiate(parse_scenario(R"({"d": 2, "grid": 8, "preset": "flat"})")));
  auto err = [](std::string b) { return kind_of([&] { decode_archive(b); }); };
  EXPECT_EQ(err(""), ErrorKind::SchemaError);
  EXPECT_EQ(err("NOTANARC" + good.substr(8)), ErrorKind::SchemaError);
  std::string v = good;
  v[8] = 9;  // version
  EXPECT_EQ(err(v), ErrorKind::SchemaError);
  EXPECT_EQ(err(good.substr(0, good.size() - 3)), ErrorKind::SchemaError);
  EXPECT_EQ(err(good + "x"), ErrorKind::SchemaError);
}

TEST(Archive, ScenarioFromArchiveFile) {
  const auto dir = scratch_dir();
  const BVState s = instantiate(parse_scenario(R"({"d": 2, "grid": 8, "seed": 3, "preset": "random_bv"})"));
  save_archive((dir / "state.arch").string(), encode_archive(s));
  {
    std::ofstream f(dir / "from_archive.json");
    f << R"({"d": 2, "archive": "state.arch"})";
  }
  const Scenario sc = load_scenario_file((dir / "from_archive.json").string());
  const BVState t = instantiate(sc);
  EXPECT_EQ(encode_archive(t), encode_archive(s));
  const std::string again = read_file((dir / "state.arch").string());
  EXPECT_EQ(encode_archive(load_archive((dir / "state.arch").string()).bv), again);
  {
    std::ofstream f(dir / "wrong_d.json");
    f << R"({"d": 3, "archive": "state.arch"})";
  }
  EXPECT_EQ(kind_of([&] { instantiate(load_scenario_file((dir / "wrong_d.json").string())); }),
            ErrorKind::SchemaError);
}

}  // namespace
}  // namespace bvbfv
