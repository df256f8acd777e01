#include <gtest/gtest.h>

#include <random>

#include "bvbfv/functional.hpp"
#include "bvbfv/presets.hpp"

namespace bvbfv {
namespace {

MeshPtr torus(int d, int n) { return std::make_shared<const Mesh>(periodic_grid(d, n)); }

TEST(DirectionalDerivative, LinearAndQuadraticExamples) {
  auto cfg = make_field_config();
  auto mesh = torus(2, 8);
  auto adm = preset_flat(mesh, 0, cfg);
  adm.eta = Field::constant(adm.size(), 2.0, cfg);

  auto x = zero_like(adm);
  x.gamma(0, 0) = Field::constant(adm.size(), 0.3, cfg);
  auto lin = [&](const ADMBlock& s) { return mesh->integrate(s.gamma(0, 0)); };
  EXPECT_NEAR(directional_derivative(lin, adm, x).body(), 0.3, 1e-15);

  auto y = zero_like(adm);
  y.eta = Field::constant(adm.size(), 1.0, cfg);
  auto quad = [&](const ADMBlock& s) { return mesh->integrate(s.eta * s.eta); };
  const GradedScalar exact = directional_derivative(quad, adm, y);
  EXPECT_NEAR(exact.body(), 4.0, 1e-14);
  EXPECT_EQ(exact.terms().size(), 1u);
  EXPECT_NEAR(directional_derivative(quad, adm, y, DerivativeMode::CentralDifference).body(), 4.0, 1e-8);
}

TEST(DirectionalDerivative, OddDirectionIsExact) {
  auto cfg = make_field_config();
  auto mesh = torus(2, 8);
  auto s = preset_random_bv(mesh, 0, cfg, 3, 0.1);
  std::mt19937_64 rng(1);
  auto dir = random_direction(s, *mesh, rng, 1.0, false);
  auto x = zero_like(s);
  x.xi_n = dir.xi_n;
  auto F = [&](const BVState& p) { return mesh->integrate(p.xi_n * p.chi_n); };
  const GradedScalar got = directional_derivative(F, s, x);
  const GradedScalar expect = mesh->integrate(x.xi_n * s.chi_n);
  EXPECT_LT(max_abs_diff(got, expect), 1e-15);
  EXPECT_FALSE(expect.is_zero());
}

TEST(DirectionalDerivative, CentralDifferenceRejectsOddDirections) {
  auto cfg = make_field_config();
  auto mesh = torus(2, 8);
  auto s = preset_random_bv(mesh, 0, cfg, 3, 0.1);
  std::mt19937_64 rng(2);
  auto x = random_direction(s, *mesh, rng, 1.0, false);
  auto F = [&](const BVState& p) { return mesh->integrate(p.adm.eta); };
  try {
    (void)directional_derivative(F, s, x, DerivativeMode::CentralDifference);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::GradeMismatch);
  }
}

TEST(DirectionalDerivative, LinearInTheDirection) {
  auto cfg = make_field_config();
  auto mesh = torus(2, 16);
  auto adm = preset_random_smooth(mesh, 0, cfg, 9, 0.1);
  std::mt19937_64 rng(5);
  auto x = random_direction(adm, *mesh, rng, 1.0, false);
  auto y = random_direction(adm, *mesh, rng, 1.0, false);
  auto F = [&](const ADMBlock& s) {
    return mesh->integrate(s.eta * s.gamma(0, 1) * s.gamma(0, 1) + s.beta[0] * s.J(1, 1));
  };
  auto sum = x;
  axpy(sum, 2.5, y);
  const double lhs = directional_derivative(F, adm, sum).body();
  const double rhs = directional_derivative(F, adm, x).body() + 2.5 * directional_derivative(F, adm, y).body();
  EXPECT_NEAR(lhs, rhs, 1e-13);
}

TEST(Bracket, ConstantAndQuadraticFields) {
  auto cfg = make_field_config();
  auto mesh = torus(2, 8);
  auto adm = preset_random_smooth(mesh, 0, cfg, 4, 0.1);
  auto v = zero_like(adm);
  v.eta = Field::constant(adm.size(), 0.7, cfg);
  VectorField<ADMBlock> X = constant_field(v);
  VectorField<ADMBlock> Y = [](const ADMBlock& s) {
    auto out = zero_like(s);
    out.eta = s.eta * s.eta;
    return out;
  };
  auto br = bracket(X, Y, adm);
  EXPECT_LT(max_abs_diff(br.eta, adm.eta * 1.4), 1e-14);
  EXPECT_LT(br.gamma.max_abs(), 1e-15);
  EXPECT_LT(sup_norm(bracket(X, X, adm)), 1e-15);
}

TEST(ScratchGenerators, PairsAreDisjointFromUsedMasks) {
  auto cfg = make_field_config();
  const AuxPair p = free_pair(cfg, 0);
  EXPECT_EQ(p.first, cfg->aux_begin);
  EXPECT_EQ(cfg->tag(p.first) + cfg->tag(p.second), 0);
  const Mask used = (Mask{1} << p.first);
  const AuxPair q = free_pair(cfg, used);
  EXPECT_NE(q.first, p.first);
  const int k = free_shift(cfg, 0);
  EXPECT_EQ(cfg->tag(k), -1);
  EXPECT_GE(k, cfg->aux_begin + 2 * kAuxPairs);
  Mask all = 0;
  for (int i = 0; i < cfg->num_generators; ++i) all |= Mask{1} << i;
  try {
    (void)free_pair(cfg, all);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::ConfigMismatch);
  }
}

}  // namespace
}  // namespace bvbfv
