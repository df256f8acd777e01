#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "bvbfv/adm.hpp"
#include "bvbfv/functional.hpp"
#include "bvbfv/presets.hpp"

namespace bvbfv {
namespace {

using Profile = Field::Profile;
using Matrix = std::vector<std::vector<double>>;

constexpr double kTwoPi = 2.0 * std::numbers::pi;

MeshPtr torus(int d, int n) { return std::make_shared<const Mesh>(periodic_grid(d, n)); }

MeshPtr patch(int d, int n, int layers = 9, double hn = 0.02) {
  return std::make_shared<const Mesh>(BulkPatchGrid(periodic_grid(d, n), layers, hn).bulk);
}

double sup(const Profile& p) {
  double m = 0.0;
  for (double v : p) m = std::max(m, std::abs(v));
  return m;
}

double sup_diff(const Profile& a, const Profile& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

// Plain-double helpers for the oracles below.

double determinant(Matrix m) {
  const std::size_t n = m.size();
  double det = 1.0;
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t p = c;
    for (std::size_t r = c + 1; r < n; ++r) {
      if (std::abs(m[r][c]) > std::abs(m[p][c])) p = r;
    }
    if (p != c) {
      std::swap(m[p], m[c]);
      det = -det;
    }
    det *= m[c][c];
    for (std::size_t r = c + 1; r < n; ++r) {
      const double f = m[r][c] / m[c][c];
      for (std::size_t k = c; k < n; ++k) m[r][k] -= f * m[c][k];
    }
  }
  return det;
}

Matrix invert(Matrix m) {
  const std::size_t n = m.size();
  Matrix inv(n, std::vector<double>(n, 0.0));
  for (std::size_t i = 0; i < n; ++i) inv[i][i] = 1.0;
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t p = c;
    for (std::size_t r = c + 1; r < n; ++r) {
      if (std::abs(m[r][c]) > std::abs(m[p][c])) p = r;
    }
    std::swap(m[p], m[c]);
    std::swap(inv[p], inv[c]);
    const double piv = m[c][c];
    for (std::size_t k = 0; k < n; ++k) {
      m[c][k] /= piv;
      inv[c][k] /= piv;
    }
    for (std::size_t r = 0; r < n; ++r) {
      if (r == c) continue;
      const double f = m[r][c];
      for (std::size_t k = 0; k < n; ++k) {
        m[r][k] -= f * m[c][k];
        inv[r][k] -= f * inv[c][k];
      }
    }
  }
  return inv;
}

// Body profiles of a symmetric tensor as a full d x d table.
std::vector<std::vector<Profile>> table(const Sym& s) {
  const int d = s.dim();
  std::vector<std::vector<Profile>> t(d, std::vector<Profile>(d));
  for (int a = 0; a < d; ++a)
    for (int b = 0; b < d; ++b) t[a][b] = s(a, b).body();
  return t;
}

Matrix at(const std::vector<std::vector<Profile>>& t, std::size_t i) {
  Matrix m(t.size(), std::vector<double>(t.size()));
  for (std::size_t a = 0; a < t.size(); ++a)
    for (std::size_t b = 0; b < t.size(); ++b) m[a][b] = t[a][b][i];
  return m;
}

// Scalar curvature contracted from the fully covariant Riemann tensor, built
// from second derivatives of the metric rather than derivatives of Gamma.
Profile scalar_curvature_oracle(const Sym& g, const Mesh& mesh, int offset) {
  const int n = g.dim();
  const auto G = table(g);
  const std::size_t np = mesh.size();
  // dg[c][a][b], ddg[c][e][a][b]
  std::vector<std::vector<std::vector<Profile>>> dg(n, std::vector<std::vector<Profile>>(n, std::vector<Profile>(n)));
  std::vector<std::vector<std::vector<std::vector<Profile>>>> ddg(
      n,
      std::vector<std::vector<std::vector<Profile>>>(n, std::vector<std::vector<Profile>>(n, std::vector<Profile>(n))));
  for (int c = 0; c < n; ++c)
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b) dg[c][a][b] = mesh.derivative(G[a][b], c + offset);
  for (int c = 0; c < n; ++c)
    for (int e = 0; e < n; ++e)
      for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b) ddg[c][e][a][b] = mesh.derivative(dg[e][a][b], c + offset);

  Profile R(np, 0.0);
  for (std::size_t i = 0; i < np; ++i) {
    const Matrix gi = invert(at(G, i));
    auto first = [&](int a, int b, int c) {  // Gamma_{a bc}
      return 0.5 * (dg[b][a][c][i] + dg[c][a][b][i] - dg[a][b][c][i]);
    };
    // Riemann R_{abcd} = 1/2 (d_b d_c g_ad + d_a d_d g_bc - d_a d_c g_bd - d_b d_d g_ac)
    //                   + g^{ef} (Gamma_{e bc} Gamma_{f ad} - Gamma_{e bd} Gamma_{f ac})
    double r = 0.0;
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b)
        for (int c = 0; c < n; ++c)
          for (int d = 0; d < n; ++d) {
            const double w = gi[a][c] * gi[b][d];
            if (w == 0.0) continue;
            double riem = 0.5 * (ddg[b][c][a][d][i] + ddg[a][d][b][c][i] - ddg[a][c][b][d][i] - ddg[b][d][a][c][i]);
            for (int e = 0; e < n; ++e)
              for (int f = 0; f < n; ++f) {
                riem += gi[e][f] * (first(e, b, c) * first(f, a, d) - first(e, b, d) * first(f, a, c));
              }
            r += w * riem;
          }
    R[i] = r;
  }
  return R;
}

// ---- spacetime metric ----

TEST(SpacetimeMetric, FlatDataGivesMinkowski) {
  auto cfg = make_field_config();
  auto adm = preset_flat(torus(3, 8), 0, cfg);
  auto m = assemble_spacetime_metric(adm);
  const double expect[4] = {-1.0, 1.0, 1.0, 1.0};
  for (int mu = 0; mu < 4; ++mu)
    for (int nu = 0; nu < 4; ++nu) {
      const double e = mu == nu ? expect[mu] : 0.0;
      EXPECT_LT(sup_diff(m.g(mu, nu).body(), Profile(adm.size(), e)), 1e-15);
      EXPECT_LT(sup_diff(m.g_inv(mu, nu).body(), Profile(adm.size(), e)), 1e-15);
    }
}

TEST(SpacetimeMetric, DeterminantAndInverseMatchDenseOracle) {
  auto cfg = make_field_config();
  for (int eps : {1, -1}) {
    for (int d : {2, 3}) {
      auto mesh = torus(d, 8);
      auto adm = preset_random_smooth(mesh, 0, cfg, 11 + d, 0.2, eps);
      auto m = assemble_spacetime_metric(adm);
      const auto g = table(m.g), gi = table(m.g_inv);
      const auto sg = m.sqrt_minus_g.body();
      for (std::size_t i = 0; i < adm.size(); ++i) {
        const Matrix gm = at(g, i);
        EXPECT_NEAR(std::sqrt(std::abs(determinant(gm))), sg[i], 1e-10);
        const Matrix inv = invert(gm);
        for (int a = 0; a <= d; ++a)
          for (int b = 0; b <= d; ++b) EXPECT_NEAR(inv[a][b], gi[a][b][i], 1e-10);
      }
    }
  }
}

TEST(SpacetimeMetric, AdmFieldsRoundTrip) {
  auto cfg = make_field_config();
  auto adm = preset_random_smooth(torus(2, 8), 0, cfg, 5, 0.2, -1);
  auto m = assemble_spacetime_metric(adm);
  const double eps = adm.eps;
  for (int a = 0; a < 2; ++a) {
    EXPECT_LT(max_abs_diff(m.g(0, a + 1) * eps, adm.beta[a]), 1e-14);
    for (int b = 0; b < 2; ++b) EXPECT_LT(max_abs_diff(m.g(a + 1, b + 1) * eps, adm.gamma(a, b)), 1e-14);
  }
  // eta^2 = -eps g_nn + beta_a beta^a
  auto bup = raise(inverse(adm.gamma), adm.beta);
  Field eta2 = m.g(0, 0) * -eps + dot(adm.beta, bup);
  EXPECT_LT(max_abs_diff(eta2, adm.eta * adm.eta), 1e-13);
}

TEST(SpacetimeMetric, DegenerateLapseRejected) {
  auto cfg = make_field_config();
  auto adm = preset_flat(torus(2, 8), 0, cfg);
  adm.beta[0] = Field::constant(adm.size(), 2.0, cfg);
  try {
    (void)assemble_spacetime_metric(adm);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::SingularMetric);
  }
}

TEST(Validation, GuardsDimensionSignAndMetric) {
  auto cfg = make_field_config();
  auto one = preset_flat(torus(1, 8), 0, cfg);
  try {
    validate(one);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::DimensionUnsupported);
  }
  auto bad = preset_flat(torus(2, 8), 0, cfg);
  bad.eps = 0;
  try {
    validate(bad);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::SchemaError);
  }
  auto indefinite = preset_flat(torus(2, 8), 0, cfg);
  indefinite.gamma(1, 1) = Field::constant(indefinite.size(), -1.0, cfg);
  EXPECT_FALSE(positive_definite(indefinite.gamma));
  try {
    validate(indefinite);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::SingularMetric);
  }
}

// ---- extrinsic curvature ----

TEST(ExtrinsicCurvature, PureJetGivesMinusHalfJOverEta) {
  auto cfg = make_field_config();
  auto adm = preset_flat(torus(3, 8), 0, cfg);
  adm.eta = Field::constant(adm.size(), 2.0, cfg);
  adm.J = Sym::identity(3, adm.size(), 0.8, cfg);
  auto ext = extrinsic_curvature(adm);
  for (int a = 0; a < 3; ++a)
    for (int b = 0; b < 3; ++b)
      EXPECT_LT(sup_diff(ext.K(a, b).body(), Profile(adm.size(), a == b ? -0.2 : 0.0)), 1e-15);
  EXPECT_LT(sup_diff(ext.trK.body(), Profile(adm.size(), -0.6)), 1e-15);
}

TEST(ExtrinsicCurvature, MatchesIndependentChristoffelOracle) {
  auto cfg = make_field_config();
  for (int d : {2, 3}) {
    auto mesh = torus(d, d == 2 ? 24 : 12);
    auto adm = preset_random_smooth(mesh, 0, cfg, 3, 0.2);
    auto ext = extrinsic_curvature(adm);
    const auto g = table(adm.gamma), J = table(adm.J);
    std::vector<Profile> beta, dbeta_store;
    std::vector<std::vector<Profile>> db(d, std::vector<Profile>(d));
    std::vector<std::vector<std::vector<Profile>>> dg(d, std::vector<std::vector<Profile>>(d, std::vector<Profile>(d)));
    for (int a = 0; a < d; ++a) beta.push_back(adm.beta[a].body());
    for (int c = 0; c < d; ++c) {
      for (int a = 0; a < d; ++a) {
        db[c][a] = mesh->derivative(beta[a], c);
        for (int b = 0; b < d; ++b) dg[c][a][b] = mesh->derivative(g[a][b], c);
      }
    }
    const auto eta = adm.eta.body();
    for (std::size_t i = 0; i < adm.size(); ++i) {
      const Matrix gi = invert(at(g, i));
      for (int a = 0; a < d; ++a)
        for (int b = 0; b < d; ++b) {
          // nabla_a beta_b = d_a beta_b - Gamma^c_ab beta_c
          double nab = db[a][b][i] + db[b][a][i];
          for (int c = 0; c < d; ++c)
            for (int e = 0; e < d; ++e) {
              const double gam = 0.5 * gi[c][e] * (dg[a][e][b][i] + dg[b][e][a][i] - dg[e][a][b][i]);
              nab -= 2.0 * gam * beta[c][i];
            }
          const double K = (nab - J[a][b][i]) / (2.0 * eta[i]);
          EXPECT_NEAR(ext.K(a, b).body()[i], K, 1e-8);
        }
    }
  }
}

// ---- curvature ----

TEST(BoundaryCurvature, FlatMetricHasZeroScalarCurvature) {
  auto mesh = torus(3, 8);
  Sym g = Sym::identity(3, mesh->size());
  EXPECT_EQ(sup(boundary_ricci_scalar(g, Partial{mesh.get(), 0}).body()), 0.0);
}

TEST(BoundaryCurvature, ConformallyFlatTorus) {
  auto cfg = make_field_config();
  auto mesh = torus(2, 32);
  const double amp = 0.2;
  auto adm = preset_conformal2d(mesh, cfg, amp);
  const Profile phi = conformal2d_phi(*mesh, amp);
  const Profile lap_x = mesh->derivative(mesh->derivative(phi, 0), 0);
  const Profile lap_y = mesh->derivative(mesh->derivative(phi, 1), 1);
  Profile expect(phi.size());
  for (std::size_t i = 0; i < phi.size(); ++i) expect[i] = -2.0 * std::exp(-2.0 * phi[i]) * (lap_x[i] + lap_y[i]);
  const Profile R = boundary_ricci_scalar(adm.gamma, adm.partial()).body();
  EXPECT_LT(sup_diff(R, expect), 1e-7);
}

TEST(BoundaryCurvature, SchwarzschildSliceConvergesToScalarFlat) {
  auto cfg = make_field_config();
  double prev = 1e300;
  for (int n : {16, 24, 32}) {
    auto box = schwarzschild_mesh(2.0, 3.0, n);
    auto adm = preset_schwarzschild(box, cfg, 1.0);
    const double r = sup(boundary_ricci_scalar(adm.gamma, adm.partial()).body());
    EXPECT_LT(r, prev);
    prev = r;
  }
  EXPECT_LT(prev, 1e-4);
}

TEST(BulkCurvature, MinkowskiAndCosmologicalConstant) {
  auto cfg = make_field_config();
  auto bulk = patch(2, 8);
  auto flat = preset_flat(bulk, 1, cfg);
  EXPECT_EQ(sup(bulk_eh_density(flat).body()), 0.0);
  EXPECT_EQ(sup(adm_lagrangian_density(flat).body()), 0.0);
  auto lam = preset_flat(bulk, 1, cfg, 1, 0.7);
  EXPECT_LT(sup_diff(bulk_eh_density(lam).body(), Profile(bulk->size(), -1.4)), 1e-14);
  EXPECT_LT(sup_diff(adm_lagrangian_density(lam).body(), Profile(bulk->size(), -1.4)), 1e-14);
}

TEST(BulkCurvature, FlrwScalarCurvature) {
  auto cfg = make_field_config();
  for (int d : {2, 3}) {
    // periodic normal axis: the scale factor is a full period in x^n
    auto bulk = torus(d + 1, d == 2 ? 32 : 16);
    auto adm = preset_flrw(bulk, cfg, 0.1);
    const Profile R = flrw_ricci_scalar(*bulk, d, 0.1);
    const Profile sg = assemble_spacetime_metric(adm).sqrt_minus_g.body();
    Profile expect(R.size());
    for (std::size_t i = 0; i < R.size(); ++i) expect[i] = R[i] * sg[i];
    EXPECT_LT(sup_diff(bulk_eh_density(adm).body(), expect), 1e-6);
  }
}

TEST(BulkCurvature, MatchesSecondDerivativeOracle) {
  auto cfg = make_field_config();
  for (int eps : {1, -1}) {
    auto bulk = torus(3, 24);
    auto adm = preset_random_smooth(bulk, 1, cfg, 21, 0.05, eps);
    auto m = assemble_spacetime_metric(adm);
    const Profile R = scalar_curvature_oracle(m.g, *bulk, 0);
    const Profile sg = m.sqrt_minus_g.body();
    Profile expect(R.size());
    for (std::size_t i = 0; i < R.size(); ++i) expect[i] = R[i] * sg[i];
    EXPECT_LT(sup_diff(bulk_eh_density(adm).body(), expect), 1e-7);
  }
}

// ---- rewriting of the bulk density ----

TEST(Rewriting, ResidualVanishesOnMinkowskiAndNormalLapse) {
  auto cfg = make_field_config();
  auto bulk = patch(2, 16);
  EXPECT_LT(sup(ghy_decomposition_residual(preset_flat(bulk, 1, cfg)).body()), 1e-13);
  auto adm = preset_flat(bulk, 1, cfg);
  const auto t = bulk->coordinate(0);
  Profile eta(t.size());
  for (std::size_t i = 0; i < t.size(); ++i) eta[i] = 1.0 + 0.5 * t[i] * t[i];
  adm.eta = Field::from_profile(eta, cfg);
  EXPECT_LT(sup(ghy_decomposition_residual(adm).body()), 1e-10);
}

TEST(Rewriting, RandomStatesConvergeAtFourthOrder) {
  auto cfg = make_field_config();
  for (int seed = 1; seed <= 5; ++seed) {
    const double coarse =
        sup(ghy_decomposition_residual(preset_random_smooth(patch(2, 32), 1, cfg, seed, 0.05)).body());
    const double fine =
        sup(ghy_decomposition_residual(preset_random_smooth(patch(2, 32, 17, 0.01), 1, cfg, seed, 0.05)).body());
    EXPECT_LT(coarse, 1e-5);
    EXPECT_GE(std::log2(coarse / fine), 3.5);
  }
}

TEST(Rewriting, NegativeSignatureFlag) {
  auto cfg = make_field_config();
  EXPECT_LT(sup(ghy_decomposition_residual(preset_flat(patch(2, 16), 1, cfg, -1)).body()), 1e-13);
  for (int seed = 6; seed <= 7; ++seed) {
    const double coarse =
        sup(ghy_decomposition_residual(preset_random_smooth(patch(2, 32), 1, cfg, seed, 0.05, -1, 0.3)).body());
    EXPECT_LT(coarse, 1e-5);
  }
}

// ---- classical constraints ----

TEST(Constraints, FlatDataVanishExactly) {
  auto cfg = make_field_config();
  for (int d : {2, 3}) {
    auto c = classical_constraints(preset_flat(torus(d, 8), 0, cfg));
    EXPECT_EQ(sup(c.G_eta.body()), 0.0);
    for (const auto& f : c.G_beta) EXPECT_EQ(sup(f.body()), 0.0);
    EXPECT_FALSE(c.has_G_gamma);
  }
}

TEST(Constraints, IsotropicJet) {
  auto cfg = make_field_config();
  for (int eps : {1, -1}) {
    auto adm = preset_flat(torus(3, 8), 0, cfg, eps);
    const double c = 0.6;
    adm.J = Sym::identity(3, adm.size(), c, cfg);
    auto cc = classical_constraints(adm);
    EXPECT_LT(sup_diff(cc.G_eta.body(), Profile(adm.size(), 1.5 * eps * c * c)), 1e-14);
  }
}

TEST(Constraints, SchwarzschildHamiltonianConstraintConverges) {
  auto cfg = make_field_config();
  double prev = 1e300;
  for (int n : {24, 48}) {
    auto adm = preset_schwarzschild(schwarzschild_mesh(2.0, 3.0, n), cfg, 1.0);
    const double h = sup(classical_constraints(adm).G_eta.body());
    EXPECT_LT(h, prev);
    prev = h;
  }
  EXPECT_LT(prev, 1e-4);
}

// Relative deviation of G_beta from c * 2 eps H^a, c fitted by least squares.
std::pair<double, double> momentum_factor(const ADMBlock& adm) {
  auto cc = classical_constraints(adm);
  auto H = momentum_constraint_covariant(adm.gamma, extrinsic_curvature(adm).K, adm.partial());
  double num = 0.0, den = 0.0, scale = 0.0;
  for (int a = 0; a < adm.d(); ++a) {
    const auto g = cc.G_beta[a].body();
    const auto h = H[a].body();
    for (std::size_t i = 0; i < g.size(); ++i) {
      num += g[i] * 2.0 * adm.eps * h[i];
      den += 4.0 * h[i] * h[i];
    }
    scale = std::max(scale, 2.0 * sup(h));
  }
  const double c = num / den;
  double dev = 0.0;
  for (int a = 0; a < adm.d(); ++a) {
    dev = std::max(dev, sup_diff(cc.G_beta[a].body(), (H[a] * (2.0 * adm.eps * c)).body()));
  }
  return {c, dev / scale};
}

TEST(Constraints, MomentumConstraintIsCovariantUpToUnitFactor) {
  auto cfg = make_field_config();
  for (int seed = 1; seed <= 20; ++seed) {
    const int d = seed % 2 ? 2 : 3;
    const double amp = d == 2 ? 0.05 : 0.01;
    auto adm = preset_random_smooth(torus(d, d == 2 ? 32 : 16), 0, cfg, seed, amp, seed % 4 < 2 ? 1 : -1, 0.1);
    auto [c, dev] = momentum_factor(adm);
    EXPECT_NEAR(c, 1.0, 1e-9);
    EXPECT_LT(dev, 1e-7);
  }
}

TEST(Constraints, HamiltonianConstraintIsLapseDerivative) {
  auto cfg = make_field_config();
  for (int eps : {1, -1}) {
    auto mesh = torus(2, 32);
    auto adm = preset_random_smooth(mesh, 0, cfg, 17, 0.1, eps, 0.3);
    std::mt19937_64 rng(4);
    auto x = zero_like(adm);
    x.eta = Field::from_profile(smooth_random_profile(*mesh, rng, 1.0), cfg);
    auto S = [&](const ADMBlock& s) { return mesh->integrate(adm_lagrangian_density(s)); };
    const double lhs = directional_derivative(S, adm, x).body();
    const double rhs = mesh->integrate(classical_constraints(adm).G_eta * x.eta).body();
    EXPECT_NEAR(lhs, rhs, 1e-10 * (1.0 + std::abs(rhs)));
  }
}

// G_beta carries the opposite sign of the shift derivative of the action.
TEST(Constraints, MomentumConstraintIsMinusShiftDerivative) {
  auto cfg = make_field_config();
  for (int eps : {1, -1}) {
    auto mesh = torus(2, 32);
    auto adm = preset_random_smooth(mesh, 0, cfg, 19, 0.1, eps, 0.3);
    std::mt19937_64 rng(8);
    auto x = zero_like(adm);
    for (auto& b : x.beta) b = Field::from_profile(smooth_random_profile(*mesh, rng, 1.0), cfg);
    auto S = [&](const ADMBlock& s) { return mesh->integrate(adm_lagrangian_density(s)); };
    const double lhs = directional_derivative(S, adm, x).body();
    const auto cc = classical_constraints(adm);
    double rhs = 0.0;
    for (int a = 0; a < 2; ++a) rhs += mesh->integrate(cc.G_beta[a] * x.beta[a]).body();
    EXPECT_GT(std::abs(rhs), 1e-4);
    EXPECT_NEAR(lhs, -rhs, 1e-10);
  }
}

// ---- Euler-Lagrange derivative of the bulk density ----

TEST(EulerLagrange, AdmComponentsAreFunctionalDerivatives) {
  auto cfg = make_field_config();
  for (int eps : {1, -1}) {
    // periodic normal axis so that no boundary terms appear
    auto bulk = torus(3, 12);
    auto adm = preset_random_smooth(bulk, 1, cfg, 23, 0.05, eps, 0.2);
    const auto el = adm_euler_lagrange(adm);
    auto S = [&](const ADMBlock& s) { return bulk->integrate(bulk_eh_density(s)); };
    std::mt19937_64 rng(12);
    auto x = random_direction(adm, *bulk, rng, 1.0, false);
    const double lhs = directional_derivative(S, adm, x).body();
    Field pair = el.d_eta * x.eta;
    for (int a = 0; a < 2; ++a) pair += el.d_beta[a] * x.beta[a];
    for (int a = 0; a < 2; ++a)
      for (int b = 0; b < 2; ++b) pair += el.d_gamma(a, b) * x.gamma(a, b);
    const double rhs = bulk->integrate(pair).body();
    EXPECT_NEAR(lhs, rhs, 1e-8 * (1.0 + std::abs(rhs)));
  }
}

TEST(EulerLagrange, VanishesOnFlrwOnlyWithMatter) {
  // FLRW vacuum is not a solution: E^{mu nu} must be nonzero, while Minkowski gives zero.
  auto cfg = make_field_config();
  auto bulk = torus(3, 12);
  EXPECT_LT(adm_euler_lagrange(preset_flat(bulk, 1, cfg)).E.max_abs(), 1e-14);
  EXPECT_GT(adm_euler_lagrange(preset_flrw(bulk, cfg, 0.1)).E.max_abs(), 1e-2);
}

}  // namespace
}  // namespace bvbfv
