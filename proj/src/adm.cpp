#include "bvbfv/adm.hpp"

#include <cmath>

namespace bvbfv {

namespace {

std::size_t idx(int a) { return static_cast<std::size_t>(a); }

// sqrt|x| for a field whose body has one sign everywhere.
Field sqrt_abs(const Field& x) {
  const auto body = x.body();
  const double s = body.empty() || body.front() >= 0.0 ? 1.0 : -1.0;
  return sqrt(x * s);
}

Field d_normal(const ADMBlock& adm, const Field& f) {
  if (!adm.on_bulk()) throw Error(ErrorKind::MissingJets, "normal derivative needs a bulk patch");
  return adm.mesh->derivative(f, 0);
}

}  // namespace

bool positive_definite(const Sym& gamma) {
  const int d = gamma.dim();
  std::vector<Field::Profile> body;
  for (const auto& c : gamma.components()) body.push_back(c.body());
  std::vector<double> m(idx(d * d));
  for (std::size_t p = 0; p < gamma.size(); ++p) {
    for (int a = 0; a < d; ++a) {
      for (int b = 0; b < d; ++b) m[idx(a * d + b)] = body[idx(sym_index(a, b, d))][p];
    }
    for (int j = 0; j < d; ++j) {
      double s = m[idx(j * d + j)];
      for (int k = 0; k < j; ++k) s -= m[idx(j * d + k)] * m[idx(j * d + k)];
      if (!(s > 0.0)) return false;
      const double l = std::sqrt(s);
      m[idx(j * d + j)] = l;
      for (int i = j + 1; i < d; ++i) {
        double t = m[idx(i * d + j)];
        for (int k = 0; k < j; ++k) t -= m[idx(i * d + k)] * m[idx(j * d + k)];
        m[idx(i * d + j)] = t / l;
      }
    }
  }
  return true;
}

void validate(const ADMBlock& adm) {
  const int d = adm.d();
  if (d == 1) throw Error(ErrorKind::DimensionUnsupported, "d = 1 is excluded");
  if (d < 1 || d > 3) throw Error(ErrorKind::DimensionUnsupported, "d must be 2 or 3");
  if (adm.eps != 1 && adm.eps != -1) throw Error(ErrorKind::SchemaError, "eps must be +1 or -1");
  if (!adm.mesh) throw Error(ErrorKind::SchemaError, "ADM block has no mesh");
  if (adm.mesh->rank() != d + adm.axis_offset) {
    throw Error(ErrorKind::ConfigMismatch, "mesh rank does not match the field dimension");
  }
  for (double v : adm.eta.body()) {
    if (!(v > 0.0)) throw Error(ErrorKind::SingularMetric, "eta must be positive");
  }
  if (!positive_definite(adm.gamma)) throw Error(ErrorKind::SingularMetric, "gamma is not positive-definite");
  adm.visit([](const Field& f, int g) { require_grade(f, g, "ADM field"); });
}

Sym normal_jet(const ADMBlock& adm) {
  if (adm.on_bulk()) {
    Sym J(adm.d(), adm.size());
    for (std::size_t i = 0; i < J.components().size(); ++i) {
      J.components()[i] = adm.mesh->derivative(adm.gamma.components()[i], 0);
    }
    return J;
  }
  if (adm.J.dim() != adm.d()) throw Error(ErrorKind::MissingJets, "boundary state carries no normal jet J");
  return adm.J;
}

SpacetimeMetric assemble_spacetime_metric(const ADMBlock& adm) {
  const int d = adm.d();
  const std::size_t n = adm.size();
  const double eps = adm.eps;
  const Sym ginv_s = inverse(adm.gamma);
  const Vec beta_up = raise(ginv_s, adm.beta);
  const Field bb = dot(adm.beta, beta_up);
  const Field eta2 = adm.eta * adm.eta;
  const Field lapse2 = eta2 - bb;
  for (double v : lapse2.body()) {
    if (!(v > 0.0)) throw Error(ErrorKind::SingularMetric, "eta^2 - beta.beta must stay positive");
  }
  const Field inv_eta2 = inverse(eta2);

  SpacetimeMetric out{Sym(d + 1, n), Sym(d + 1, n), Field(n)};
  out.g(0, 0) = lapse2 * (-eps);
  out.g_inv(0, 0) = inv_eta2 * (-eps);
  for (int a = 0; a < d; ++a) {
    out.g(0, a + 1) = adm.beta[idx(a)] * eps;
    out.g_inv(0, a + 1) = inv_eta2 * beta_up[idx(a)] * eps;
    for (int b = a; b < d; ++b) {
      out.g(a + 1, b + 1) = adm.gamma(a, b) * eps;
      out.g_inv(a + 1, b + 1) = (ginv_s(a, b) - inv_eta2 * beta_up[idx(a)] * beta_up[idx(b)]) * eps;
    }
  }
  out.sqrt_minus_g = adm.eta * sqrt(det(adm.gamma));
  return out;
}

SpatialGeometry spatial_geometry(const Sym& gamma, const Partial& d) {
  SpatialGeometry geo;
  const Field detg = det(gamma);
  geo.gamma_inv = inverse(gamma, detg);
  geo.sqrt_gamma = sqrt(detg);
  geo.christoffel = christoffel(gamma, geo.gamma_inv, d);
  return geo;
}

ExtrinsicCurvature extrinsic_curvature(const ADMBlock& adm, const SpatialGeometry& geo) {
  ExtrinsicCurvature out;
  out.T = sym_covariant_derivative(adm.beta, geo.christoffel, adm.partial()) - normal_jet(adm);
  out.K = (inverse(adm.eta) * 0.5) * out.T;
  out.trK = trace(geo.gamma_inv, out.K);
  out.K_up = raise(geo.gamma_inv, out.K);
  return out;
}

ExtrinsicCurvature extrinsic_curvature(const ADMBlock& adm) {
  return extrinsic_curvature(adm, spatial_geometry(adm.gamma, adm.partial()));
}

Field boundary_ricci_scalar(const Sym& gamma, const Partial& d) {
  for (double v : det(gamma).body()) {
    if (v == 0.0) throw Error(ErrorKind::SingularMetric, "degenerate boundary metric");
  }
  return ricci_scalar(gamma, inverse(gamma), d);
}

Field adm_lagrangian_density(const ADMBlock& adm) {
  const auto geo = spatial_geometry(adm.gamma, adm.partial());
  const auto ext = extrinsic_curvature(adm, geo);
  // curvature of the induced metric eps gamma
  const Field R = ricci_scalar(adm.gamma, geo.gamma_inv, adm.partial()) * static_cast<double>(adm.eps);
  const Field kin = contract(ext.K_up, ext.K) - ext.trK * ext.trK;
  Field bracket = kin * static_cast<double>(adm.eps) + R;
  bracket += Field::constant(adm.size(), -2.0 * adm.lambda);
  return adm.eta * geo.sqrt_gamma * bracket;
}

Field bulk_eh_density(const Sym& g, const Sym& g_inv, const Partial& d, double lambda) {
  Field R = ricci_scalar(g, g_inv, d);
  R += Field::constant(g.size(), -2.0 * lambda);
  return R * sqrt_abs(det(g));
}

Field bulk_eh_density(const ADMBlock& bulk) {
  const auto m = assemble_spacetime_metric(bulk);
  return bulk_eh_density(m.g, m.g_inv, Partial{bulk.mesh.get(), 0}, bulk.lambda);
}

ClassicalConstraints classical_constraints(const ADMBlock& adm) {
  const int d = adm.d();
  const std::size_t n = adm.size();
  const double eps = adm.eps;
  const Partial D = adm.partial();
  const auto geo = spatial_geometry(adm.gamma, D);
  const auto ext = extrinsic_curvature(adm, geo);
  const Field R = ricci_scalar(adm.gamma, geo.gamma_inv, D) * eps;
  const Field& sg = geo.sqrt_gamma;

  ClassicalConstraints out;
  Field curv = R + Field::constant(n, -2.0 * adm.lambda);
  out.G_eta = sg * curv + sg * (ext.trK * ext.trK - contract(ext.K_up, ext.K)) * eps;

  // 2 eps gamma^{ba} [d_c(sqrt(gamma) gamma^{cd} K_da) + sqrt(gamma)/2 d_a gamma^{cd} K_cd - sqrt(gamma) d_a K]
  Vec bracket(idx(d), Field(n));
  std::vector<Sym> dginv;
  for (int a = 0; a < d; ++a) {
    Sym s(d, n);
    for (std::size_t i = 0; i < s.components().size(); ++i) s.components()[i] = D(geo.gamma_inv.components()[i], a);
    dginv.push_back(std::move(s));
  }
  for (int a = 0; a < d; ++a) {
    Field acc(n);
    for (int c = 0; c < d; ++c) {
      Field flux(n);
      for (int e = 0; e < d; ++e) flux += geo.gamma_inv(c, e) * ext.K(e, a);
      acc += D(sg * flux, c);
    }
    acc += sg * contract(dginv[idx(a)], ext.K) * 0.5;
    acc -= sg * D(ext.trK, a);
    bracket[idx(a)] = std::move(acc);
  }
  out.G_beta = raise(geo.gamma_inv, bracket);
  for (auto& f : out.G_beta) f *= 2.0 * eps;

  if (adm.on_bulk()) {
    // eps sqrt(gamma) (d_n K_ab - beta^k d_k K_ab - 2 K_k(a d_b) beta^k)
    const Vec beta_up = raise(geo.gamma_inv, adm.beta);
    out.G_gamma = Sym(d, n);
    for (int a = 0; a < d; ++a) {
      for (int b = a; b < d; ++b) {
        Field t = d_normal(adm, ext.K(a, b));
        for (int k = 0; k < d; ++k) {
          t -= beta_up[idx(k)] * D(ext.K(a, b), k);
          t -= ext.K(k, a) * D(beta_up[idx(k)], b) + ext.K(k, b) * D(beta_up[idx(k)], a);
        }
        out.G_gamma(a, b) = sg * t * eps;
      }
    }
    out.has_G_gamma = true;
  }
  return out;
}

Vec momentum_constraint_covariant(const Sym& gamma, const Sym& K, const Partial& D) {
  const int d = gamma.dim();
  const std::size_t n = gamma.size();
  const auto geo = spatial_geometry(gamma, D);
  const auto& G = geo.christoffel;
  const Field trK = trace(geo.gamma_inv, K);
  Vec v(idx(d), Field(n));
  for (int a = 0; a < d; ++a) {
    Field acc = -D(trK, a);
    for (int c = 0; c < d; ++c) {
      for (int e = 0; e < d; ++e) {
        // nabla_c K_ea = d_c K_ea - Gamma^f_ce K_fa - Gamma^f_ca K_ef
        Field cov = D(K(e, a), c);
        for (int f = 0; f < d; ++f) {
          cov -= G[idx(f)](c, e) * K(f, a) + G[idx(f)](c, a) * K(e, f);
        }
        acc += geo.gamma_inv(c, e) * cov;
      }
    }
    v[idx(a)] = geo.sqrt_gamma * acc;
  }
  return raise(geo.gamma_inv, v);
}

Field ghy_decomposition_residual(const ADMBlock& bulk) {
  if (!bulk.on_bulk()) throw Error(ErrorKind::MissingJets, "the rewriting residual needs a bulk patch");
  const int d = bulk.d();
  const Partial D = bulk.partial();
  const auto geo = spatial_geometry(bulk.gamma, D);
  const auto ext = extrinsic_curvature(bulk, geo);
  const Vec beta_up = raise(geo.gamma_inv, bulk.beta);
  const Field sgK = geo.sqrt_gamma * ext.trK;

  // the divergence terms scale with the metric like the curvature: g -> eps g
  Field div = d_normal(bulk, sgK) * 2.0;
  for (int a = 0; a < d; ++a) {
    Field flux = sgK * beta_up[idx(a)];
    for (int b = 0; b < d; ++b) flux -= geo.sqrt_gamma * geo.gamma_inv(a, b) * D(bulk.eta, b);
    div -= D(flux, a) * 2.0;
  }
  return bulk_eh_density(bulk) - adm_lagrangian_density(bulk) + div * static_cast<double>(bulk.eps);
}

Sym einstein_euler_lagrange(const Sym& g, const Sym& g_inv, const Partial& d, double lambda) {
  const Sym ric = ricci_tensor(g, g_inv, d);
  const Field R = contract(g_inv, ric);
  const Field sg = sqrt_abs(det(g));
  Sym E = raise(g_inv, ric);
  Field coef = R * -0.5 + Field::constant(g.size(), lambda);
  E += coef * g_inv;
  return (sg * -1.0) * E;
}

ADMEulerLagrange adm_euler_lagrange(const ADMBlock& bulk) {
  const int d = bulk.d();
  const std::size_t n = bulk.size();
  const double eps = bulk.eps;
  const auto m = assemble_spacetime_metric(bulk);
  ADMEulerLagrange out;
  out.E = einstein_euler_lagrange(m.g, m.g_inv, Partial{bulk.mesh.get(), 0}, bulk.lambda);
  const Vec beta_up = raise(inverse(bulk.gamma), bulk.beta);
  const Field& Enn = out.E(0, 0);
  out.d_eta = bulk.eta * Enn * (-2.0 * eps);
  out.d_beta.assign(idx(d), Field(n));
  out.d_gamma = Sym(d, n);
  for (int a = 0; a < d; ++a) {
    out.d_beta[idx(a)] = (out.E(0, a + 1) + beta_up[idx(a)] * Enn) * (2.0 * eps);
    for (int b = a; b < d; ++b) {
      out.d_gamma(a, b) = (out.E(a + 1, b + 1) - beta_up[idx(a)] * beta_up[idx(b)] * Enn) * eps;
    }
  }
  return out;
}

}  // namespace bvbfv
