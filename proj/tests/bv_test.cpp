#include <gtest/gtest.h>

#include <numbers>
#include <random>

#include "bvbfv/bv.hpp"
#include "bvbfv/presets.hpp"

namespace bvbfv {
namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

MeshPtr torus(std::vector<int> n) { return std::make_shared<const Mesh>(periodic_grid(std::move(n))); }
MeshPtr patch(int d, int n) { return std::make_shared<const Mesh>(BulkPatchGrid(periodic_grid(d, n), 9, 0.02).bulk); }

double rel(const GradedScalar& a, const GradedScalar& b) { return max_abs_diff(a, b) / (1e-300 + b.max_abs()); }

BVState flat_bv(MeshPtr bulk, ConfigPtr cfg, double lambda = 0.0) {
  return bv_from_adm(preset_flat(std::move(bulk), 1, cfg, 1, lambda));
}

// ---- examples ----

TEST(ApplyQ, ConstantGhostsOnFlatMetric) {
  auto cfg = make_field_config();
  auto bulk = patch(2, 8);
  auto s = flat_bv(bulk, cfg);
  s.xi_n = Field::odd(cfg, 0, Field::Profile(s.size(), 0.3));
  s.xi[0] = Field::odd(cfg, 1, Field::Profile(s.size(), -1.1));
  s.xi[1] = Field::odd(cfg, 2, Field::Profile(s.size(), 0.7));
  auto q = apply_Q_bulk(s);
  EXPECT_EQ(q.adm.gamma.max_abs(), 0.0);
  EXPECT_EQ(q.xi_n.max_abs(), 0.0);
  for (const auto& x : q.xi) EXPECT_EQ(x.max_abs(), 0.0);
  const auto r = q_square_residual(s);
  EXPECT_EQ(r.eta + r.beta + r.gamma + r.xi, 0.0);
}

TEST(ApplyQ, TangentialGhostOnFlatMetricIsKillingOperator) {
  auto cfg = make_field_config();
  auto bulk = patch(2, 16);
  auto s = flat_bv(bulk, cfg);
  const auto x = bulk->coordinate(1), y = bulk->coordinate(2);
  Field::Profile v0(s.size()), v1(s.size());
  for (std::size_t i = 0; i < v0.size(); ++i) {
    v0[i] = std::sin(kTwoPi * x[i]) * std::cos(kTwoPi * y[i]);
    v1[i] = 0.5 * std::cos(kTwoPi * x[i]);
  }
  s.xi[0] = Field::odd(cfg, 0, v0);
  s.xi[1] = Field::odd(cfg, 0, v1);
  auto q = apply_Q_bulk(s);
  const Field::Profile* vs[2] = {&v0, &v1};
  for (int a = 0; a < 2; ++a) {
    for (int b = a; b < 2; ++b) {
      Field::Profile e(s.size());
      const auto da = bulk->derivative(*vs[b], a + 1), db = bulk->derivative(*vs[a], b + 1);
      for (std::size_t i = 0; i < e.size(); ++i) e[i] = da[i] + db[i];
      EXPECT_LT(max_abs_diff(q.adm.gamma(a, b), Field::odd(cfg, 0, e)), 1e-10);
    }
  }
}

TEST(BVAction, FlatValues) {
  auto cfg = make_field_config();
  auto bulk = patch(2, 8);
  EXPECT_EQ(bv_action(flat_bv(bulk, cfg)).max_abs(), 0.0);
  const double vol = 0.02 * 8;
  EXPECT_NEAR(bv_action(flat_bv(bulk, cfg, 0.4)).body(), -0.8 * vol, 1e-14);

  auto s = flat_bv(bulk, cfg);
  s.xi_n = Field::odd(cfg, 0, Field::Profile(s.size(), 0.3));
  s.xi[1] = Field::odd(cfg, 1, Field::Profile(s.size(), 0.2));
  s.gd_nn = Field::odd(cfg, 4, Field::Profile(s.size(), 1.0));
  s.gd(0, 1) = Field::odd(cfg, 5, Field::Profile(s.size(), -2.0));
  EXPECT_EQ(bv_action(s).max_abs(), 0.0);
}

TEST(BVDerivatives, VanishWithoutGhostsAndAntifields) {
  auto cfg = make_field_config();
  auto s = bv_from_adm(preset_random_smooth(patch(2, 8), 1, cfg, 2, 0.1));
  auto der = bv_derivatives(s);
  double m = 0.0;
  for (const Field* f : {&der.d_eta, &der.d_gd_nn, &der.d_xi_n, &der.d_chi_n}) m = std::max(m, f->max_abs());
  for (const Vec* v : {&der.d_beta, &der.d_gd_n, &der.d_xi, &der.d_chi})
    for (const auto& f : *v) m = std::max(m, f.max_abs());
  m = std::max({m, der.d_gamma.max_abs(), der.d_gd.max_abs()});
  EXPECT_EQ(m, 0.0);
}

TEST(BVDerivatives, ChiDerivativeVanishesForConstantGhosts) {
  auto cfg = make_field_config();
  auto s = preset_random_bv(patch(2, 8), 1, cfg, 2, 0.1);
  s.xi_n = Field::odd(cfg, 0, Field::Profile(s.size(), 0.3));
  for (auto& x : s.xi) x = Field::odd(cfg, 1, Field::Profile(s.size(), 0.6));
  auto der = bv_derivatives(s);
  EXPECT_EQ(der.d_chi_n.max_abs(), 0.0);
  for (const auto& f : der.d_chi) EXPECT_EQ(f.max_abs(), 0.0);
}

TEST(BVDerivatives, RejectBoundaryStates) {
  auto cfg = make_field_config();
  auto s = preset_random_bv(std::make_shared<const Mesh>(periodic_grid(2, 8)), 0, cfg, 2, 0.1);
  try {
    (void)bv_derivatives(s);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::MissingJets);
  }
}

// ---- oracle: every derivative against the exact functional derivative ----

// Pairing of one slot of a direction with the matching derivative.
Field slot_pairing(int slot, const BVState& x, const BVDerivatives& der, int d) {
  Field p(x.size());
  switch (slot) {
    case 0: p = x.adm.eta * der.d_eta; break;
    case 1: for (int a = 0; a < d; ++a) p += x.adm.beta[a] * der.d_beta[a]; break;
    case 2:
      for (int a = 0; a < d; ++a)
        for (int b = 0; b < d; ++b) p += x.adm.gamma(a, b) * der.d_gamma(a, b);
      break;
    case 3: p = x.gd_nn * der.d_gd_nn; break;
    case 4: for (int a = 0; a < d; ++a) p += x.gd_n[a] * der.d_gd_n[a] * 2.0; break;
    case 5:
      for (int a = 0; a < d; ++a)
        for (int b = 0; b < d; ++b) p += x.gd(a, b) * der.d_gd(a, b);
      break;
    case 6: p = x.xi_n * der.d_xi_n; break;
    case 7: for (int a = 0; a < d; ++a) p += x.xi[a] * der.d_xi[a]; break;
    case 8: p = x.chi_n * der.d_chi_n; break;
    default: for (int a = 0; a < d; ++a) p += x.chi[a] * der.d_chi[a]; break;
  }
  return p;
}

BVState slot_direction(int slot, const BVState& s, const BVState& dir) {
  BVState x = zero_like(s);
  switch (slot) {
    case 0: x.adm.eta = dir.adm.eta; break;
    case 1: x.adm.beta = dir.adm.beta; break;
    case 2: x.adm.gamma = dir.adm.gamma; break;
    case 3: x.gd_nn = dir.gd_nn; break;
    case 4: x.gd_n = dir.gd_n; break;
    case 5: x.gd = dir.gd; break;
    case 6: x.xi_n = dir.xi_n; break;
    case 7: x.xi = dir.xi; break;
    case 8: x.chi_n = dir.chi_n; break;
    default: x.chi = dir.chi; break;
  }
  return x;
}

TEST(BVDerivatives, MatchFunctionalDerivativeOfTheAction) {
  auto cfg = make_field_config();
  for (int eps : {1, -1}) {
    for (int d : {2, 3}) {
      // periodic normal axis: no boundary terms
      auto bulk = torus(std::vector<int>(d + 1, d == 2 ? 12 : 8));
      auto s = preset_random_bv(bulk, 1, cfg, 5 + d, 0.05, eps, 0.2);
      auto S_bv = [&](const BVState& p) {
        return bulk->integrate(bv_action_density(p) - adm_lagrangian_density(p.adm));
      };
      const auto der = bv_derivatives(s);
      std::mt19937_64 rng(31 + d);
      const auto dir = random_direction(s, *bulk, rng, 1.0, false);
      for (int slot = 0; slot < 10; ++slot) {
        const BVState x = slot_direction(slot, s, dir);
        const GradedScalar lhs = directional_derivative(S_bv, s, x);
        const GradedScalar rhs = bulk->integrate(slot_pairing(slot, x, der, d));
        EXPECT_GT(rhs.max_abs(), 1e-6) << "slot " << slot;
        EXPECT_LT(rel(lhs, rhs), 1e-12) << "slot " << slot << " eps " << eps << " d " << d;
      }
    }
  }
}

// ---- the derivatives written out in ADM variables ----

struct AdmView {
  const BVState& s;
  const Mesh& mesh;
  int d;
  double eps;
  Vec beta_up;
  Field lapse;  // -eta^2 + beta.beta
  Field dn(const Field& f) const { return mesh.derivative(f, 0); }
  Field da(const Field& f, int a) const { return mesh.derivative(f, a + 1); }
  // d_rho for rho = 0 (normal) .. d
  Field dr(const Field& f, int rho) const { return mesh.derivative(f, rho); }
  const Field& xi(int rho) const { return rho == 0 ? s.xi_n : s.xi[rho - 1]; }
  const Field& chi(int rho) const { return rho == 0 ? s.chi_n : s.chi[rho - 1]; }
  // g+^{n rho}
  const Field& gdn(int rho) const { return rho == 0 ? s.gd_nn : s.gd_n[rho - 1]; }
};

AdmView view(const BVState& s) {
  const Vec bu = raise(inverse(s.adm.gamma), s.adm.beta);
  Field lapse = dot(s.adm.beta, bu) - s.adm.eta * s.adm.eta;
  return AdmView{s, *s.adm.mesh, s.d(), static_cast<double>(s.adm.eps), bu, lapse};
}

// d_rho xi^rho g+^{nn} + xi^rho d_rho g+^{nn} - 2 d_rho xi^n g+^{n rho}
Field transport_nn(const AdmView& v) {
  Field t(v.s.size());
  for (int r = 0; r <= v.d; ++r) {
    t += v.dr(v.xi(r), r) * v.s.gd_nn + v.xi(r) * v.dr(v.s.gd_nn, r) - v.dr(v.s.xi_n, r) * v.gdn(r) * 2.0;
  }
  return t;
}

TEST(BVDerivatives, AgreeWithAdmForms) {
  auto cfg = make_field_config();
  for (int eps : {1, -1}) {
    auto bulk = torus({24, 24, 24});
    auto s = preset_random_bv(bulk, 1, cfg, 13, 0.1, eps, 0.0);
    const auto der = bv_derivatives(s);
    const AdmView v = view(s);
    const int d = 2;
    const auto& g = s.adm.gamma;
    const auto& beta = s.adm.beta;

    // d/deta = -2 eps eta (transport of g+^{nn})
    EXPECT_LT(max_abs_diff(der.d_eta, s.adm.eta * transport_nn(v) * (-2.0 * eps)), 1e-12);

    for (int a = 0; a < d; ++a) {
      // d/dbeta_a = 2 eps (d_rho xi^rho g+^{an} + xi^rho d_rho g+^{an} - d_rho xi^a g+^{n rho} - d_rho xi^n g+^{a rho})
      //           + 2 eps beta^a (transport of g+^{nn})
      Field t(s.size());
      for (int r = 0; r <= d; ++r) {
        const Field& gar = r == 0 ? s.gd_n[a] : s.gd(a, r - 1);
        t += v.dr(v.xi(r), r) * s.gd_n[a] + v.xi(r) * v.dr(s.gd_n[a], r) - v.dr(s.xi[a], r) * v.gdn(r) -
             v.dr(s.xi_n, r) * gar;
      }
      const Field expect = t * (2.0 * eps) + v.beta_up[a] * transport_nn(v) * (2.0 * eps);
      EXPECT_LT(max_abs_diff(der.d_beta[a], expect), 1e-12);

      // d/dg+^{na} = eps (xi^rho d_rho beta_a + d_n xi^n beta_a + d_n xi^b gamma_ab
      //                  + d_a xi^n (-eta^2 + beta.beta) + d_a xi^b beta_b)
      Field q(s.size());
      for (int r = 0; r <= d; ++r) q += v.xi(r) * v.dr(beta[a], r);
      q += v.dn(s.xi_n) * beta[a] + v.da(s.xi_n, a) * v.lapse;
      for (int b = 0; b < d; ++b) q += v.dn(s.xi[b]) * g(a, b) + v.da(s.xi[b], a) * beta[b];
      EXPECT_LT(max_abs_diff(der.d_gd_n[a], q * eps), 1e-12);
    }

    // d/dxi^n
    {
      Field m(s.size());
      m += v.dn(v.lapse) * s.gd_nn + v.lapse * v.dn(s.gd_nn) * 2.0;
      for (int a = 0; a < d; ++a) {
        m += v.da(v.lapse, a) * s.gd_n[a] * 2.0 + beta[a] * v.dn(s.gd_n[a]) * 2.0 + v.lapse * v.da(s.gd_n[a], a) * 2.0;
        for (int b = 0; b < d; ++b) {
          m += v.da(beta[b], a) * s.gd(a, b) * 2.0 + beta[b] * v.da(s.gd(a, b), a) * 2.0;
          m -= v.dn(g(a, b)) * s.gd(a, b);
        }
      }
      Field c(s.size());
      for (int r = 0; r <= d; ++r) {
        c += v.xi(r) * v.dr(s.chi_n, r) + v.dr(v.xi(r), r) * s.chi_n + v.dn(v.xi(r)) * v.chi(r);
      }
      // d_n(-eta^2 + beta.beta) expanded by the product rule: spectral accuracy only
      EXPECT_LT(max_abs_diff(der.d_xi_n, m * eps + c), 1e-7);
    }

    // d/dxi^a, with "beta_a d_n g+^{nn} + beta_a d_b g+^{nb}" and "d_a beta_c g+^{cn}"
    for (int a = 0; a < d; ++a) {
      Field m(s.size());
      m += v.dn(beta[a]) * s.gd_nn * 2.0 + beta[a] * v.dn(s.gd_nn) * 2.0;
      m -= v.da(v.lapse, a) * s.gd_nn;
      for (int b = 0; b < d; ++b) {
        m += v.dn(g(a, b)) * s.gd_n[b] * 2.0 + v.da(beta[a], b) * s.gd_n[b] * 2.0;
        m += beta[a] * v.da(s.gd_n[b], b) * 2.0 + g(a, b) * v.dn(s.gd_n[b]) * 2.0;
        m -= v.da(beta[b], a) * s.gd_n[b] * 2.0;
        for (int c = 0; c < d; ++c) {
          m += (v.da(g(c, a), b) + v.da(g(b, a), c)) * s.gd(b, c);
          m += (g(a, b) * v.da(s.gd(b, c), c) + g(a, c) * v.da(s.gd(b, c), b));
          m -= v.da(g(b, c), a) * s.gd(b, c);
        }
      }
      Field c(s.size());
      for (int r = 0; r <= d; ++r) {
        c += v.dr(v.xi(r), r) * s.chi[a] + v.xi(r) * v.dr(s.chi[a], r) + v.da(v.xi(r), a) * v.chi(r);
      }
      EXPECT_LT(max_abs_diff(der.d_xi[a], m * eps + c), 1e-11);
    }
  }
}

// ---- Q ----

TEST(ApplyQ, RaisesGradeByOne) {
  auto cfg = make_field_config();
  auto s = preset_random_bv(patch(2, 8), 1, cfg, 3, 0.1);
  auto q = apply_Q_bulk(s);
  EXPECT_NO_THROW(require_grades(q, 1, "Q"));
}

TEST(ApplyQ, MetricComponentsAreLieDerivative) {
  auto cfg = make_field_config();
  for (int eps : {1, -1}) {
    auto bulk = torus({24, 24, 24});
    auto s = preset_random_bv(bulk, 1, cfg, 4, 0.1, eps);
    auto q = apply_Q_bulk(s);
    auto f = spacetime_fields(s);
    auto L = lie_derivative_metric(f.g, f.xi, Partial{bulk.get(), 0});
    for (int a = 0; a < 2; ++a) {
      EXPECT_LT(max_abs_diff(q.adm.beta[a], L(0, a + 1) * eps), 1e-12);
      for (int b = a; b < 2; ++b) EXPECT_LT(max_abs_diff(q.adm.gamma(a, b), L(a + 1, b + 1) * eps), 1e-12);
    }
    // g_nn = eps (-eta^2 + beta.beta)
    const auto bu = raise(inverse(s.adm.gamma), s.adm.beta);
    Field qlapse(s.size());
    for (int a = 0; a < 2; ++a) {
      qlapse += bu[a] * q.adm.beta[a] * 2.0;
      for (int b = 0; b < 2; ++b) qlapse -= bu[a] * bu[b] * q.adm.gamma(a, b);
    }
    qlapse -= s.adm.eta * q.adm.eta * 2.0;
    EXPECT_LT(max_abs_diff(qlapse * eps, L(0, 0)), 1e-8);
  }
}

TEST(ApplyQ, AntifieldComponentsAreMetricGradient) {
  auto cfg = make_field_config();
  auto bulk = torus({24, 24, 24});
  auto s = preset_random_bv(bulk, 1, cfg, 6, 0.05, -1, 0.3);
  auto q = apply_Q_bulk(s);
  const auto el = adm_euler_lagrange(s.adm);
  // Q g+^{mu nu} - E^{mu nu} is the BV part: d_rho(xi^rho g+) - 2 d_rho xi^(mu g+^nu)rho
  const auto f = spacetime_fields(s);
  const Partial D{bulk.get(), 0};
  for (int mu = 0; mu < 3; ++mu) {
    for (int nu = mu; nu < 3; ++nu) {
      Field g(s.size());
      for (int r = 0; r < 3; ++r) {
        g += D(f.xi[r] * f.gd(mu, nu), r) - D(f.xi[mu], r) * f.gd(nu, r) - D(f.xi[nu], r) * f.gd(mu, r);
      }
      const Field& got = mu == 0 ? (nu == 0 ? q.gd_nn : q.gd_n[nu - 1]) : q.gd(mu - 1, nu - 1);
      EXPECT_LT(max_abs_diff(got, el.E(mu, nu) + g), 1e-9);
    }
  }
}

TEST(ApplyQ, SquaresToZeroOnPeriodicBulk) {
  auto cfg = make_field_config();
  auto bulk = torus({24, 32, 32});
  for (int seed = 1; seed <= 3; ++seed) {
    const auto r = q_square_residual(preset_random_bv(bulk, 1, cfg, seed, 0.05, seed == 2 ? -1 : 1));
    EXPECT_LT(r.eta, 1e-8);
    EXPECT_LT(r.beta, 1e-8);
    EXPECT_LT(r.gamma, 1e-8);
    EXPECT_LT(r.xi, 1e-10);
  }
}

TEST(ApplyQ, NormalJetComponent) {
  auto cfg = make_field_config();
  auto bulk = torus({24, 24, 24});
  auto s = preset_random_bv(bulk, 1, cfg, 8, 0.1);
  const Sym qj = q_normal_jet(s);
  // d_n xi^rho d_rho gamma_ab + xi^rho d_rho J_ab + 2 d_(a d_n xi^rho g_b)rho
  //   + 2 d_(a xi^c J_b)c + 2 d_(a xi^n d_n beta_b)
  const AdmView v = view(s);
  const Sym J = normal_jet(s.adm);
  for (int a = 0; a < 2; ++a) {
    for (int b = a; b < 2; ++b) {
      Field e(s.size());
      for (int r = 0; r <= 2; ++r) e += v.dn(v.xi(r)) * v.dr(s.adm.gamma(a, b), r) + v.xi(r) * v.dr(J(a, b), r);
      e += v.da(v.dn(s.xi_n), a) * s.adm.beta[b] + v.da(v.dn(s.xi_n), b) * s.adm.beta[a];
      e += v.da(s.xi_n, a) * v.dn(s.adm.beta[b]) + v.da(s.xi_n, b) * v.dn(s.adm.beta[a]);
      for (int c = 0; c < 2; ++c) {
        e += v.da(v.dn(s.xi[c]), a) * s.adm.gamma(b, c) + v.da(v.dn(s.xi[c]), b) * s.adm.gamma(a, c);
        e += v.da(s.xi[c], a) * J(b, c) + v.da(s.xi[c], b) * J(a, c);
      }
      EXPECT_LT(max_abs_diff(qj(a, b), e), 1e-9);
    }
  }
  const auto pb = pre_boundary_Q(preset_random_bv(patch(2, 16), 1, cfg, 8, 0.1),
                                 std::make_shared<const Mesh>(periodic_grid(2, 16)));
  EXPECT_EQ(pb.adm.J.dim(), 2);
  EXPECT_EQ(pb.size(), 256u);
  EXPECT_FALSE(pb.adm.on_bulk());
}

}  // namespace
}  // namespace bvbfv
