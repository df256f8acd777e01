#include "bvbfv/bv.hpp"

#include "bvbfv/presets.hpp"

namespace bvbfv {

namespace {

std::size_t idx(int a) { return static_cast<std::size_t>(a); }

void require_bulk(const BVState& s, const char* what) {
  if (!s.adm.on_bulk()) throw Error(ErrorKind::MissingJets, std::string(what) + " needs a bulk patch");
}

Partial spacetime_partial(const BVState& s) { return Partial{s.adm.mesh.get(), 0}; }

// -eta^2 + beta_c beta^c
Field minus_lapse_norm(const ADMBlock& adm, const Vec& beta_up) {
  return dot(adm.beta, beta_up) - adm.eta * adm.eta;
}

// Metric and ghost components of Q: eta, beta, gamma, xi.
BVState q_metric_ghost(const BVState& s) {
  require_bulk(s, "Q");
  const ADMBlock& adm = s.adm;
  const int d = adm.d();
  const std::size_t n = adm.size();
  const Partial D = spacetime_partial(s);
  const Vec beta_up = raise(inverse(adm.gamma), adm.beta);
  const Field lapse = minus_lapse_norm(adm, beta_up);

  Vec xi{s.xi_n};
  for (const auto& x : s.xi) xi.push_back(x);
  // dxi[mu][rho] = d_mu xi^rho
  std::vector<Vec> dxi(idx(d + 1));
  for (int mu = 0; mu <= d; ++mu) {
    for (int rho = 0; rho <= d; ++rho) dxi[idx(mu)].push_back(D(xi[idx(rho)], mu));
  }
  auto transport = [&](const Field& f) {
    Field out(n);
    for (int rho = 0; rho <= d; ++rho) out += xi[idx(rho)] * D(f, rho);
    return out;
  };

  BVState q = zero_like(s);
  q.adm.J = Sym();

  // xi^rho d_rho eta + d_n xi^n eta - eta beta^a d_a xi^n
  q.adm.eta = transport(adm.eta) + dxi[0][0] * adm.eta;
  for (int a = 0; a < d; ++a) q.adm.eta -= dxi[idx(a + 1)][0] * beta_up[idx(a)] * adm.eta;

  for (int a = 0; a < d; ++a) {
    // xi^rho d_rho beta_a + d_n xi^n beta_a + d_n xi^b gamma_ab + d_a xi^n (-eta^2 + beta.beta) + d_a xi^b beta_b
    Field qb = transport(adm.beta[idx(a)]) + dxi[0][0] * adm.beta[idx(a)] + dxi[idx(a + 1)][0] * lapse;
    for (int b = 0; b < d; ++b) {
      qb += dxi[0][idx(b + 1)] * adm.gamma(a, b) + dxi[idx(a + 1)][idx(b + 1)] * adm.beta[idx(b)];
    }
    q.adm.beta[idx(a)] = std::move(qb);
    for (int b = a; b < d; ++b) {
      // xi^rho d_rho gamma_ab + 2 d_(a xi^n beta_b) + 2 d_(a xi^c gamma_b)c
      Field qg = transport(adm.gamma(a, b)) + dxi[idx(a + 1)][0] * adm.beta[idx(b)] +
                 dxi[idx(b + 1)][0] * adm.beta[idx(a)];
      for (int c = 0; c < d; ++c) {
        qg += dxi[idx(a + 1)][idx(c + 1)] * adm.gamma(b, c) + dxi[idx(b + 1)][idx(c + 1)] * adm.gamma(a, c);
      }
      q.adm.gamma(a, b) = std::move(qg);
    }
  }

  // xi^sigma d_sigma xi^rho
  q.xi_n = transport(s.xi_n);
  for (int a = 0; a < d; ++a) q.xi[idx(a)] = transport(s.xi[idx(a)]);
  return q;
}

// Metric gradient of the BV term, G^{mu nu} = d_rho(xi^rho g+^{mu nu}) - 2 d_rho xi^(mu g+^nu)rho.
Sym bv_metric_gradient(const SpacetimeFields& f, const Partial& D) {
  const int m = f.g.dim();
  const std::size_t n = f.g.size();
  Sym out(m, n);
  for (int mu = 0; mu < m; ++mu) {
    for (int nu = mu; nu < m; ++nu) {
      Field acc(n);
      for (int rho = 0; rho < m; ++rho) {
        acc += D(f.xi[idx(rho)] * f.gd(mu, nu), rho);
        acc -= D(f.xi[idx(mu)], rho) * f.gd(nu, rho) + D(f.xi[idx(nu)], rho) * f.gd(mu, rho);
      }
      out(mu, nu) = std::move(acc);
    }
  }
  return out;
}

// Chain rule from a metric gradient G^{mu nu} to (eta, beta_a, gamma_ab).
struct AdmGradient {
  Field eta;
  Vec beta;
  Sym gamma;
};
AdmGradient to_adm(const Sym& G, const ADMBlock& adm) {
  const int d = adm.d();
  const double eps = adm.eps;
  const Vec beta_up = raise(inverse(adm.gamma), adm.beta);
  AdmGradient out;
  out.eta = adm.eta * G(0, 0) * (-2.0 * eps);
  out.gamma = Sym(d, adm.size());
  for (int a = 0; a < d; ++a) {
    out.beta.push_back((G(0, a + 1) + beta_up[idx(a)] * G(0, 0)) * (2.0 * eps));
    for (int b = a; b < d; ++b) out.gamma(a, b) = (G(a + 1, b + 1) - beta_up[idx(a)] * beta_up[idx(b)] * G(0, 0)) * eps;
  }
  return out;
}

}  // namespace

SpacetimeFields spacetime_fields(const BVState& s) {
  const int d = s.d();
  const std::size_t n = s.size();
  SpacetimeFields f;
  f.g = assemble_spacetime_metric(s.adm).g;
  f.xi.push_back(s.xi_n);
  f.chi.push_back(s.chi_n);
  for (int a = 0; a < d; ++a) {
    f.xi.push_back(s.xi[idx(a)]);
    f.chi.push_back(s.chi[idx(a)]);
  }
  f.gd = Sym(d + 1, n);
  f.gd(0, 0) = s.gd_nn;
  for (int a = 0; a < d; ++a) {
    f.gd(0, a + 1) = s.gd_n[idx(a)];
    for (int b = a; b < d; ++b) f.gd(a + 1, b + 1) = s.gd(a, b);
  }
  return f;
}

Sym lie_derivative_metric(const Sym& g, const Vec& xi, const Partial& D) {
  const int m = g.dim();
  const std::size_t n = g.size();
  std::vector<Vec> dxi(idx(m));
  for (int mu = 0; mu < m; ++mu) {
    for (int rho = 0; rho < m; ++rho) dxi[idx(mu)].push_back(D(xi[idx(rho)], mu));
  }
  Sym out(m, n);
  for (int mu = 0; mu < m; ++mu) {
    for (int nu = mu; nu < m; ++nu) {
      Field acc(n);
      for (int rho = 0; rho < m; ++rho) {
        acc += xi[idx(rho)] * D(g(mu, nu), rho);
        acc += dxi[idx(mu)][idx(rho)] * g(rho, nu) + dxi[idx(nu)][idx(rho)] * g(mu, rho);
      }
      out(mu, nu) = std::move(acc);
    }
  }
  return out;
}

Field bv_action_density(const BVState& s) {
  require_bulk(s, "the BV action");
  const Partial D = spacetime_partial(s);
  const SpacetimeFields f = spacetime_fields(s);
  const int m = f.g.dim();
  const Sym L = lie_derivative_metric(f.g, f.xi, D);
  Field out = adm_lagrangian_density(s.adm);
  for (int mu = 0; mu < m; ++mu) {
    for (int nu = 0; nu < m; ++nu) out -= L(mu, nu) * f.gd(mu, nu);
  }
  for (int rho = 0; rho < m; ++rho) {
    for (int mu = 0; mu < m; ++mu) out += f.xi[idx(rho)] * D(f.xi[idx(mu)], rho) * f.chi[idx(mu)];
  }
  return out;
}

GradedScalar bv_action(const BVState& s) { return s.adm.mesh->integrate(bv_action_density(s)); }

BVDerivatives bv_derivatives(const BVState& s) {
  require_bulk(s, "BV derivatives");
  const int d = s.d();
  const std::size_t n = s.size();
  const Partial D = spacetime_partial(s);
  const SpacetimeFields f = spacetime_fields(s);
  const int m = d + 1;

  BVDerivatives out;
  const AdmGradient ag = to_adm(bv_metric_gradient(f, D), s.adm);
  out.d_eta = ag.eta;
  out.d_beta = ag.beta;
  out.d_gamma = ag.gamma;

  const Sym L = lie_derivative_metric(f.g, f.xi, D);
  out.d_gd_nn = L(0, 0);
  out.d_gd = Sym(d, n);
  for (int a = 0; a < d; ++a) {
    out.d_gd_n.push_back(L(0, a + 1));
    for (int b = a; b < d; ++b) out.d_gd(a, b) = L(a + 1, b + 1);
  }

  // d/dxi^rho: -d_rho g_{mu nu} g+^{mu nu} + 2 d_mu(g_{rho nu} g+^{mu nu})
  //            + d_sigma(xi^sigma chi_rho) + d_rho xi^sigma chi_sigma
  Vec dxi(idx(m));
  for (int rho = 0; rho < m; ++rho) {
    Field acc(n);
    for (int mu = 0; mu < m; ++mu) {
      Field flux(n);
      for (int nu = 0; nu < m; ++nu) {
        acc -= D(f.g(mu, nu), rho) * f.gd(mu, nu);
        flux += f.g(rho, nu) * f.gd(mu, nu);
      }
      acc += D(flux, mu) * 2.0;
      acc += D(f.xi[idx(mu)] * f.chi[idx(rho)], mu) + D(f.xi[idx(mu)], rho) * f.chi[idx(mu)];
    }
    dxi[idx(rho)] = std::move(acc);
  }
  out.d_xi_n = dxi[0];
  out.d_xi.assign(dxi.begin() + 1, dxi.end());

  // d/dchi_mu: xi^rho d_rho xi^mu
  Vec dchi(idx(m), Field(n));
  for (int mu = 0; mu < m; ++mu) {
    for (int rho = 0; rho < m; ++rho) dchi[idx(mu)] += f.xi[idx(rho)] * D(f.xi[idx(mu)], rho);
  }
  out.d_chi_n = dchi[0];
  out.d_chi.assign(dchi.begin() + 1, dchi.end());
  return out;
}

BVState apply_Q_bulk(const BVState& s) {
  BVState q = q_metric_ghost(s);
  const ADMBlock& adm = s.adm;
  const int d = adm.d();
  const double eps = adm.eps;
  const BVDerivatives bv = bv_derivatives(s);
  const ADMEulerLagrange el = adm_euler_lagrange(adm);
  const Vec beta_up = raise(inverse(adm.gamma), adm.beta);

  // Full action gradients in ADM variables, reordered into g+ coordinates.
  const Field dS_eta = el.d_eta + bv.d_eta;
  q.gd_nn = inverse(adm.eta) * dS_eta * (-0.5 * eps);
  for (int a = 0; a < d; ++a) {
    const Field dS_beta = el.d_beta[idx(a)] + bv.d_beta[idx(a)];
    q.gd_n[idx(a)] = dS_beta * (0.5 * eps) - beta_up[idx(a)] * q.gd_nn;
    for (int b = a; b < d; ++b) {
      const Field dS_gamma = el.d_gamma(a, b) + bv.d_gamma(a, b);
      q.gd(a, b) = dS_gamma * eps + beta_up[idx(a)] * beta_up[idx(b)] * q.gd_nn;
    }
  }
  q.chi_n = bv.d_xi_n;
  q.chi = bv.d_xi;
  return q;
}

Sym q_normal_jet(const BVState& bulk) {
  const BVState q = q_metric_ghost(bulk);
  Sym out(bulk.d(), bulk.size());
  for (std::size_t i = 0; i < out.components().size(); ++i) {
    out.components()[i] = bulk.adm.mesh->derivative(q.adm.gamma.components()[i], 0);
  }
  return out;
}

PreBoundaryState pre_boundary_Q(const BVState& bulk, MeshPtr boundary) {
  BVState q = apply_Q_bulk(bulk);
  q.adm.J = q_normal_jet(bulk);
  const Mesh& bm = *bulk.adm.mesh;
  q.visit([&](Field& f, int) { f = boundary_slice(bm, f); });
  q.adm.mesh = std::move(boundary);
  q.adm.axis_offset = 0;
  return q;
}

GradedScalar bv_symplectic_form(const BVState& s, const BVState& X, const BVState& Y) {
  const int d = s.d();
  const double eps = s.adm.eps;
  const Vec bu = raise(inverse(s.adm.gamma), s.adm.beta);
  // variation of g_nn, times eps
  auto gnn = [&](const BVState& v) {
    Field t = s.adm.eta * v.adm.eta * -2.0;
    for (int a = 0; a < d; ++a) {
      t += bu[a] * v.adm.beta[a] * 2.0;
      for (int b = 0; b < d; ++b) t -= bu[a] * bu[b] * v.adm.gamma(a, b);
    }
    return t * eps;
  };
  Field w = gnn(Y) * X.gd_nn - Y.gd_nn * gnn(X);
  for (int a = 0; a < d; ++a) w += (Y.adm.beta[a] * X.gd_n[a] - Y.gd_n[a] * X.adm.beta[a]) * (2.0 * eps);
  for (int a = 0; a < d; ++a)
    for (int b = 0; b < d; ++b) w += (Y.adm.gamma(a, b) * X.gd(a, b) - Y.gd(a, b) * X.adm.gamma(a, b)) * eps;
  w += Y.chi_n * X.xi_n - Y.xi_n * X.chi_n;
  for (int a = 0; a < d; ++a) w += Y.chi[a] * X.xi[a] - Y.xi[a] * X.chi[a];
  return s.adm.mesh->integrate(w);
}

QSquare q_square_residual(const BVState& bulk) {
  const BVState q = q_metric_ghost(bulk);
  const BVState qq = apply_Q_to([](const BVState& p) { return q_metric_ghost(p); }, bulk, q);
  QSquare out;
  out.eta = qq.adm.eta.max_abs();
  for (const auto& f : qq.adm.beta) out.beta = std::max(out.beta, f.max_abs());
  out.gamma = qq.adm.gamma.max_abs();
  out.xi = qq.xi_n.max_abs();
  for (const auto& f : qq.xi) out.xi = std::max(out.xi, f.max_abs());
  return out;
}

}  // namespace bvbfv
