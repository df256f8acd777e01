#include "bvbfv/boundary.hpp"

#include <string>

namespace bvbfv {

namespace {

void require_jets(const ADMBlock& adm, const char* what) {
  if (adm.on_bulk() || adm.J.dim() != adm.d()) {
    throw Error(ErrorKind::MissingJets, std::string(what) + " needs a boundary state with J");
  }
}

void require_d(int d, const char* what) {
  if (d < 2) throw Error(ErrorKind::DimensionUnsupported, std::string(what) + " needs d >= 2");
}

struct Geometry {
  SpatialGeometry geo;
  Vec beta_up;
  Field lapse;  // g_nn = -eta^2 + beta.beta
  ExtrinsicCurvature K;
};

Geometry geometry(const ADMBlock& adm) {
  Geometry G{spatial_geometry(adm.gamma, adm.partial()), {}, {}, {}};
  G.beta_up = raise(G.geo.gamma_inv, adm.beta);
  G.lapse = dot(G.beta_up, adm.beta) - adm.eta * adm.eta;
  G.K = extrinsic_curvature(adm, G.geo);
  return G;
}

// The kernel and reduction formulas below are written for antifields and
// antighosts normalized as g+ -> -eps g+, chi -> eps chi relative to the
// coordinates of the action.  The map is an involution.
BVState to_chart(BVState s) {
  const double eps = s.adm.eps;
  s.gd_nn *= -eps;
  for (auto& x : s.gd_n) x *= -eps;
  s.gd *= -eps;
  s.chi_n *= eps;
  for (auto& x : s.chi) x *= eps;
  return s;
}

// Pairing of the classical part: int d(sqrt g) trK + (sqrt g / 2) d(gamma^{ab}) K_ab, times 2 eps.
Field classical_density(const ADMBlock& adm, const Geometry& G, const Sym& X_gamma) {
  const Sym& gi = G.geo.gamma_inv;
  const Sym dgu = raise(gi, X_gamma) * -1.0;
  const Field dsg = G.geo.sqrt_gamma * contract(gi, X_gamma) * 0.5;
  return (dsg * G.K.trK + G.geo.sqrt_gamma * contract(dgu, G.K.K) * 0.5) * (2.0 * adm.eps);
}

// Reduced J with the antifield corrections, in chart coordinates.
Sym reduced_J(const BVState& c, const Geometry& G) {
  const int d = c.d();
  const double eps = c.adm.eps;
  const double k = 1.0 / (d - 1);
  const Sym& gm = c.adm.gamma;
  const Field ei = inverse(c.adm.eta);
  const Field isg = inverse(G.geo.sqrt_gamma);
  const Sym nb = sym_covariant_derivative(c.adm.beta, G.geo.christoffel, c.adm.partial());
  const Field bb = dot(G.beta_up, c.adm.beta);
  Sym Jt(d, c.size());
  for (int l = 0; l < d; ++l)
    for (int m = l; m < d; ++m) {
      Field u(c.size()), w(c.size());
      for (int a = 0; a < d; ++a)
        for (int b = 0; b < d; ++b) u += (gm(a, l) * gm(b, m) - gm(l, m) * gm(a, b) * k) * c.gd(a, b) * c.xi_n;
      for (int b = 0; b < d; ++b)
        w += ((c.adm.beta[l] * gm(m, b) + c.adm.beta[m] * gm(l, b)) * 0.5 - gm(l, m) * c.adm.beta[b] * k) * c.gd_n[b] *
             c.xi_n;
      const Field z = (c.adm.beta[l] * c.adm.beta[m] - gm(l, m) * bb * k) * c.gd_nn * c.xi_n;
      Jt(l, m) = ei * (c.adm.J(l, m) - nb(l, m)) - isg * (u * 2.0 + w * 4.0 + z * 2.0) * eps;
    }
  return Jt;
}

// Kernel vectors in chart coordinates.
BVState chart_kernel(const BVState& s, BVKernel fam, const KernelParams& p) {
  const int d = s.d();
  const double eps = s.adm.eps;
  const double k = 1.0 / (d - 1);
  const Geometry G = geometry(s.adm);
  const Sym& gi = G.geo.gamma_inv;
  const Sym& gm = s.adm.gamma;
  const Field ei = inverse(s.adm.eta);
  const Field ei2 = ei * ei, ei3 = ei2 * ei;
  const Field isg = inverse(G.geo.sqrt_gamma);
  const std::size_t n = s.size();
  BVState X = zero_like(s);
  switch (fam) {
    case BVKernel::NormalGhost:
      X.chi_n = p.x_chi_n;
      X.gd_nn = ei2 * p.x_chi_n * s.xi_n * (-eps / 2);
      for (int b = 0; b < d; ++b) X.gd_n[b] = G.beta_up[b] * ei2 * p.x_chi_n * s.xi_n * (eps / 2);
      break;
    case BVKernel::TangentialGhost:
      X.chi = p.x_chi;
      for (int a = 0; a < d; ++a) X.gd_nn += ei2 * G.beta_up[a] * p.x_chi[a] * s.xi_n * (eps / 2);
      for (int b = 0; b < d; ++b)
        for (int a = 0; a < d; ++a)
          X.gd_n[b] -= (ei2 * G.beta_up[b] * G.beta_up[a] - gi(b, a)) * p.x_chi[a] * s.xi_n * (eps / 2);
      break;
    case BVKernel::Shift: {
      X.adm.beta = p.x_beta;
      for (int b = 0; b < d; ++b)
        for (int a = 0; a < d; ++a) X.xi[b] -= gi(a, b) * p.x_beta[a] * s.xi_n;
      for (int a = 0; a < d; ++a)
        for (int b = 0; b < d; ++b) X.gd_nn += ei2 * gi(a, b) * p.x_beta[a] * s.chi[b] * s.xi_n * (eps / 2);
      const Sym nb = sym_covariant_derivative(p.x_beta, G.geo.christoffel, s.adm.partial());
      for (int l = 0; l < d; ++l)
        for (int m = l; m < d; ++m) {
          Field u(n);
          for (int a = 0; a < d; ++a)
            u += ((p.x_beta[l] * gm(m, a) + p.x_beta[m] * gm(l, a)) * 0.5 - gm(l, m) * p.x_beta[a] * k) * s.gd_n[a] *
                 s.xi_n;
          X.adm.J(l, m) = nb(l, m) + isg * s.adm.eta * u * (4 * eps);
        }
      for (int b = 0; b < d; ++b) {
        for (int c = 0; c < d; ++c)
          for (int e = 0; e < d; ++e)
            X.gd_n[b] -= ei2 * G.beta_up[b] * gi(c, e) * p.x_beta[c] * s.chi[e] * s.xi_n * (eps / 2);
        for (int a = 0; a < d; ++a) X.gd_n[b] -= gi(a, b) * p.x_beta[a] * s.gd_nn;
      }
      break;
    }
    case BVKernel::Antifield:
      X.gd = p.x_gd;
      for (int l = 0; l < d; ++l)
        for (int m = l; m < d; ++m) {
          Field u(n);
          for (int a = 0; a < d; ++a)
            for (int b = 0; b < d; ++b) u += (gm(a, l) * gm(b, m) - gm(l, m) * gm(a, b) * k) * p.x_gd(a, b) * s.xi_n;
          X.adm.J(l, m) = isg * s.adm.eta * u * (2 * eps);
        }
      break;
    case BVKernel::Lapse: {
      const Field& e = p.x_eta;
      X.adm.eta = e;
      X.xi_n = ei * e * s.xi_n * -1.0;
      for (int a = 0; a < d; ++a) X.xi[a] = G.beta_up[a] * ei * e * s.xi_n;
      Field bchi(n);
      for (int a = 0; a < d; ++a) bchi += G.beta_up[a] * s.chi[a];
      X.gd_nn = ei * e * s.gd_nn * -1.0 - ei3 * (bchi - s.chi_n) * e * s.xi_n * eps;
      for (int b = 0; b < d; ++b) {
        Field t = ei3 * G.beta_up[b] * (s.chi_n - bchi) * eps;
        for (int a = 0; a < d; ++a) t += ei * gi(b, a) * s.chi[a] * (eps / 2);
        X.gd_n[b] = t * e * s.xi_n * -1.0 + ei * G.beta_up[b] * e * s.gd_nn;
      }
      const Sym nb = sym_covariant_derivative(s.adm.beta, G.geo.christoffel, s.adm.partial());
      for (int l = 0; l < d; ++l)
        for (int m = l; m < d; ++m) {
          Field u(n), w(n);
          for (int a = 0; a < d; ++a) {
            u += ((s.adm.beta[l] * gm(m, a) + s.adm.beta[m] * gm(l, a)) * 0.5 - gm(l, m) * s.adm.beta[a] * k) *
                 s.gd_n[a] * s.xi_n;
            for (int b = 0; b < d; ++b) w += (gm(l, a) * gm(b, m) - gm(l, m) * gm(a, b) * k) * s.gd(a, b) * s.xi_n;
          }
          X.adm.J(l, m) = isg * e * (u * 4.0 + w * 2.0) * -eps + ei * e * (s.adm.J(l, m) - nb(l, m));
        }
      break;
    }
  }
  return X;
}

template <class S>
S rk4(const S& s0, const VectorField<S>& X, int steps) {
  const double h = 1.0 / steps;
  S s = s0;
  for (int i = 0; i < steps; ++i) {
    const S k1 = X(s);
    S t = s;
    axpy(t, h / 2, k1);
    const S k2 = X(t);
    t = s;
    axpy(t, h / 2, k2);
    const S k3 = X(t);
    t = s;
    axpy(t, h, k3);
    const S k4 = X(t);
    axpy(s, h / 6, k1);
    axpy(s, h / 3, k2);
    axpy(s, h / 3, k3);
    axpy(s, h / 6, k4);
  }
  return s;
}

// (1/2)(X_ab + X_ba) for a non-symmetric array.
Sym symmetrize(const std::vector<std::vector<Field>>& x) {
  const int d = static_cast<int>(x.size());
  Sym out(d, x[0][0].size());
  for (int a = 0; a < d; ++a)
    for (int b = a; b < d; ++b) out(a, b) = (x[a][b] + x[b][a]) * 0.5;
  return out;
}

}  // namespace

// ---- pre-boundary forms ----

GradedScalar alpha_tilde_classical(const ADMBlock& adm, const ADMBlock& X) {
  require_jets(adm, "alpha_tilde_classical");
  const Geometry G = geometry(adm);
  return adm.mesh->integrate(classical_density(adm, G, X.gamma));
}

GradedScalar alpha_tilde_bv(const PreBoundaryState& s, const BVState& X) {
  require_jets(s.adm, "alpha_tilde_bv");
  require_grades(X, 0, "alpha_tilde_bv direction");
  const int d = s.d();
  const double eps = s.adm.eps;
  const Geometry G = geometry(s.adm);
  const Field cl = classical_density(s.adm, G, X.adm.gamma);

  // xi^n times the antifield pairing with the metric variation
  Field x_lapse = s.adm.eta * X.adm.eta * -2.0;
  for (int a = 0; a < d; ++a) {
    x_lapse += G.beta_up[a] * X.adm.beta[a] * 2.0;
    for (int b = 0; b < d; ++b) x_lapse -= G.beta_up[a] * G.beta_up[b] * X.adm.gamma(a, b);
  }
  Field pair = x_lapse * s.gd_nn;
  for (int a = 0; a < d; ++a) pair += X.adm.beta[a] * s.gd_n[a] * 2.0;
  for (int a = 0; a < d; ++a)
    for (int b = 0; b < d; ++b) pair += X.adm.gamma(a, b) * s.gd(a, b);
  const Field f1 = s.xi_n * pair * -eps;

  // ghost variations against g_{n mu} g+^{n mu}
  Field b2 = G.lapse * X.xi_n * s.gd_nn;
  for (int a = 0; a < d; ++a) {
    b2 += s.adm.beta[a] * X.xi_n * s.gd_n[a] + s.adm.beta[a] * X.xi[a] * s.gd_nn;
    for (int b = 0; b < d; ++b) b2 += s.adm.gamma(a, b) * X.xi[a] * s.gd_n[b];
  }
  const Field f2 = b2 * (-2.0 * eps);

  Field b3 = X.xi_n * s.chi_n;
  for (int a = 0; a < d; ++a) b3 += X.xi[a] * s.chi[a];
  const Field f3 = s.xi_n * b3;
  return s.adm.mesh->integrate(cl + f1 + f2 + f3);
}

GradedScalar omega_tilde(const PreBoundaryState& s, const BVState& X, const BVState& Y) {
  require_grades(X, 0, "omega_tilde X");
  require_grades(Y, 0, "omega_tilde Y");
  auto ay = [&](const BVState& p) { return alpha_tilde_bv(p, Y); };
  auto ax = [&](const BVState& p) { return alpha_tilde_bv(p, X); };
  return directional_derivative(ay, s, X, DerivativeMode::Exact, used_generators(Y)) -
         directional_derivative(ax, s, Y, DerivativeMode::Exact, used_generators(X));
}

GradedScalar omega_tilde_classical(const ADMBlock& adm, const ADMBlock& X, const ADMBlock& Y) {
  auto ay = [&](const ADMBlock& p) { return alpha_tilde_classical(p, Y); };
  auto ax = [&](const ADMBlock& p) { return alpha_tilde_classical(p, X); };
  return directional_derivative(ay, adm, X, DerivativeMode::Exact, used_generators(Y)) -
         directional_derivative(ax, adm, Y, DerivativeMode::Exact, used_generators(X));
}

GradedScalar omega_tilde(const PreBoundaryState& s, const VectorField<BVState>& X, const VectorField<BVState>& Y) {
  const BVState xv = X(s), yv = Y(s);
  auto ay = [&](const BVState& p) { return alpha_tilde_bv(p, Y(p)); };
  auto ax = [&](const BVState& p) { return alpha_tilde_bv(p, X(p)); };
  return directional_derivative(ay, s, xv, DerivativeMode::Exact, used_generators(yv)) -
         directional_derivative(ax, s, yv, DerivativeMode::Exact, used_generators(xv)) -
         alpha_tilde_bv(s, bracket(X, Y, s));
}

// ---- kernel ----

const char* to_string(ClassicalKernel k) {
  switch (k) {
    case ClassicalKernel::InverseLapse: return "inverse_lapse";
    case ClassicalKernel::Shift: return "shift";
  }
  return "?";
}

const char* to_string(BVKernel k) {
  switch (k) {
    case BVKernel::NormalGhost: return "normal_ghost";
    case BVKernel::TangentialGhost: return "tangential_ghost";
    case BVKernel::Shift: return "shift";
    case BVKernel::Antifield: return "antifield";
    case BVKernel::Lapse: return "lapse";
  }
  return "?";
}

ADMBlock kernel_generator_classical(const ADMBlock& adm, ClassicalKernel family, const KernelParams& p) {
  require_jets(adm, "kernel_generator_classical");
  require_d(adm.d(), "kernel_generator_classical");
  const SpatialGeometry geo = spatial_geometry(adm.gamma, adm.partial());
  ADMBlock X = zero_like(adm);
  if (family == ClassicalKernel::InverseLapse) {
    X.eta = adm.eta * adm.eta * p.x_eta_inv * -1.0;
    const Sym nb = sym_covariant_derivative(adm.beta, geo.christoffel, adm.partial());
    const Field c = adm.eta * p.x_eta_inv;
    for (std::size_t i = 0; i < X.J.components().size(); ++i)
      X.J.components()[i] = c * (nb.components()[i] - adm.J.components()[i]);
  } else {
    X.beta = p.x_beta;
    X.J = sym_covariant_derivative(p.x_beta, geo.christoffel, adm.partial());
  }
  return X;
}

BVState kernel_generator_bv(const PreBoundaryState& s, BVKernel family, const KernelParams& p) {
  require_jets(s.adm, "kernel_generator_bv");
  require_d(s.d(), "kernel_generator_bv");
  const double eps = s.adm.eps;
  KernelParams q = p;
  // chart parameters that map back onto p
  if (family == BVKernel::NormalGhost) q.x_chi_n = p.x_chi_n * eps;
  if (family == BVKernel::TangentialGhost)
    for (auto& x : q.x_chi) x *= eps;
  if (family == BVKernel::Antifield) q.x_gd = p.x_gd * -eps;
  BVState X = chart_kernel(to_chart(s), family, q);
  return to_chart(X);
}

VectorField<BVState> kernel_field_bv(BVKernel family, KernelParams p) {
  return [family, p = std::move(p)](const BVState& s) { return kernel_generator_bv(s, family, p); };
}

VectorField<ADMBlock> kernel_field_classical(ClassicalKernel family, KernelParams p) {
  return [family, p = std::move(p)](const ADMBlock& a) { return kernel_generator_classical(a, family, p); };
}

// ---- reduction ----

ReducedClassical reduce_classical(const ADMBlock& adm) {
  require_jets(adm, "reduce_classical");
  require_d(adm.d(), "reduce_classical");
  const SpatialGeometry geo = spatial_geometry(adm.gamma, adm.partial());
  const Sym nb = sym_covariant_derivative(adm.beta, geo.christoffel, adm.partial());
  const Field ei = inverse(adm.eta);
  ReducedClassical out{adm.gamma, adm.J - nb};
  for (auto& c : out.J.components()) c = ei * c;
  return out;
}

DarbouxState reduce_bv(const PreBoundaryState& s0, int chi_sign) {
  require_jets(s0.adm, "reduce_bv");
  require_d(s0.d(), "reduce_bv");
  const BVState s = to_chart(s0);
  const int d = s.d();
  const double eps = s.adm.eps;
  const Geometry G = geometry(s.adm);
  const Sym& gi = G.geo.gamma_inv;
  const Sym& gm = s.adm.gamma;
  const Sym Jt = reduced_J(s, G);
  const Field trJ = contract(gi, Jt);

  DarbouxState ds;
  ds.mesh = s.adm.mesh;
  ds.eps = s.adm.eps;
  ds.lambda = s.adm.lambda;
  ds.gamma_up = gi;
  ds.Pi = Sym(d, s.size());
  for (int l = 0; l < d; ++l)
    for (int m = l; m < d; ++m) ds.Pi(l, m) = G.geo.sqrt_gamma * (Jt(l, m) - gm(l, m) * trJ) * 0.5;

  Field bchi(s.size());
  for (int a = 0; a < d; ++a) bchi += G.beta_up[a] * s.chi[a];
  ds.phi_n = (s.adm.eta * s.gd_nn - inverse(s.adm.eta) * (bchi - s.chi_n) * s.xi_n * (eps / 2)) * -2.0;
  ds.phi.assign(d, Field(s.size()));
  for (int a = 0; a < d; ++a) {
    Field t = s.adm.beta[a] * s.gd_nn;
    for (int b = 0; b < d; ++b) t += gm(a, b) * s.gd_n[b];
    t -= s.chi[a] * s.xi_n * (chi_sign * eps / 2);
    ds.phi[a] = t * 2.0;
  }
  ds.xi_n = s.adm.eta * s.xi_n;
  ds.xi.assign(d, Field(s.size()));
  for (int b = 0; b < d; ++b) ds.xi[b] = s.xi[b] + G.beta_up[b] * s.xi_n;
  return ds;
}

DarbouxState pushforward(const PreBoundaryState& s, const BVState& X) {
  return directional_derivative([](const BVState& p) { return reduce_bv(p); }, s, X);
}

// ---- boundary symplectic data ----

GradedScalar alpha_boundary(const DarbouxState& ds, const DarbouxState& X) {
  require_grades(X, 0, "alpha_boundary direction");
  Field f = contract(X.gamma_up, ds.Pi) * -static_cast<double>(ds.eps);
  f -= ds.phi_n * X.xi_n;
  for (int a = 0; a < ds.d(); ++a) f -= ds.phi[a] * X.xi[a];
  return ds.mesh->integrate(f);
}

GradedScalar omega_boundary(const DarbouxState& ds, const DarbouxState& X, const DarbouxState& Y) {
  require_grades(X, 0, "omega_boundary X");
  require_grades(Y, 0, "omega_boundary Y");
  Field f = (contract(X.gamma_up, Y.Pi) - contract(Y.gamma_up, X.Pi)) * static_cast<double>(ds.eps);
  f += Y.phi_n * X.xi_n - X.phi_n * Y.xi_n;
  for (int a = 0; a < ds.d(); ++a) f += Y.phi[a] * X.xi[a] - X.phi[a] * Y.xi[a];
  return ds.mesh->integrate(f);
}

namespace {

struct BoundaryTerms {
  Sym g;      // gamma_ab
  Field sg;   // sqrt(gamma)
  Field kin;  // -(eps / sqrt g)(Pi.Pi - Pi^2/(d-1))
  Field pot;  // sqrt g (eps R[gamma] - 2 Lambda)
  Vec mom;    // 2 eps (d_c(gamma^{cd} Pi_da) + (1/2)(d_a gamma^{cd}) Pi_cd)
};

BoundaryTerms boundary_terms(const DarbouxState& ds) {
  require_d(ds.d(), "boundary action");
  const int d = ds.d();
  const double eps = ds.eps;
  const std::size_t n = ds.size();
  const Partial D = ds.partial();
  const Sym& gi = ds.gamma_up;
  BoundaryTerms t;
  t.g = inverse(gi);
  t.sg = sqrt(det(t.g));
  const Field tr = contract(gi, ds.Pi);
  t.kin = (contract(raise(gi, ds.Pi), ds.Pi) - tr * tr * (1.0 / (d - 1))) * inverse(t.sg) * -eps;
  t.pot = t.sg * (ricci_scalar(t.g, gi, D) * eps + Field::constant(n, -2.0 * ds.lambda));
  t.mom.assign(d, Field(n));
  for (int a = 0; a < d; ++a) {
    for (int c = 0; c < d; ++c) {
      Field flux(n);
      for (int e = 0; e < d; ++e) flux += gi(c, e) * ds.Pi(e, a);
      t.mom[a] += D(flux, c);
      for (int e = 0; e < d; ++e) t.mom[a] += D(gi(c, e), a) * ds.Pi(c, e) * 0.5;
    }
    t.mom[a] *= 2.0 * eps;
  }
  return t;
}

}  // namespace

GradedScalar boundary_action(const DarbouxState& ds) {
  const BoundaryTerms t = boundary_terms(ds);
  const int d = ds.d();
  const Partial D = ds.partial();
  const Sym& gi = ds.gamma_up;
  Field hn = t.kin + t.pot;
  for (int a = 0; a < d; ++a) {
    hn -= D(ds.xi[a] * ds.phi_n, a);
    for (int b = 0; b < d; ++b) hn += gi(a, b) * ds.phi[b] * D(ds.xi_n, a);
  }
  Field f = hn * ds.xi_n;
  for (int a = 0; a < d; ++a) {
    Field ha = t.mom[a];
    for (int c = 0; c < d; ++c) ha -= D(ds.xi[c] * ds.phi[a], c);
    f += ha * ds.xi[a];
  }
  return ds.mesh->integrate(f);
}

BoundaryConstraints boundary_constraints(const DarbouxState& ds) {
  BoundaryTerms t = boundary_terms(ds);
  return {t.kin + t.pot, std::move(t.mom)};
}

DarbouxState boundary_Q(const DarbouxState& ds) {
  const BoundaryTerms t = boundary_terms(ds);
  const int d = ds.d();
  const double eps = ds.eps;
  const double k = 1.0 / (d - 1);
  const std::size_t n = ds.size();
  const Partial D = ds.partial();
  const Sym& gi = ds.gamma_up;
  const Sym& Pi = ds.Pi;
  const Field isg = inverse(t.sg);
  const Field tr = contract(gi, Pi);
  const Sym Pu = raise(gi, Pi);
  const Field& xn = ds.xi_n;
  const Vec& xa = ds.xi;

  DarbouxState q = zero_like(ds);

  // ghosts
  for (int c = 0; c < d; ++c) q.xi_n += xa[c] * D(xn, c);
  for (int a = 0; a < d; ++a) {
    for (int b = 0; b < d; ++b) q.xi[a] += xn * gi(a, b) * D(xn, b);
    for (int c = 0; c < d; ++c) q.xi[a] += xa[c] * D(xa[a], c);
  }

  // inverse metric: -(2/sqrt g)(Pi^{ab} - gamma^{ab} Pi/(d-1)) xi^n + L_xi gamma^{ab}
  for (int a = 0; a < d; ++a)
    for (int b = a; b < d; ++b) {
      Field v = (Pu(a, b) - gi(a, b) * tr * k) * isg * xn * -2.0;
      for (int c = 0; c < d; ++c) v += xa[c] * D(gi(a, b), c) - gi(c, a) * D(xa[b], c) - gi(c, b) * D(xa[a], c);
      q.gamma_up(a, b) = v;
    }

  // momentum: Q Pi = -eps dS/dgamma^{ab}
  {
    const Field P = contract(Pu, Pi) - tr * tr * k;
    const Sym ric = ricci_tensor(t.g, gi, D);
    const Field R = ricci_scalar(t.g, gi, D);
    const std::vector<Sym> chr = christoffel(t.g, gi, D);
    Vec dxn(d);
    for (int c = 0; c < d; ++c) dxn[c] = D(xn, c);
    Field lap(n);  // laplacian of xi^n
    std::vector<std::vector<Field>> hess(d, std::vector<Field>(d, Field(n)));
    for (int a = 0; a < d; ++a)
      for (int b = 0; b < d; ++b) {
        Field h = D(dxn[b], a);
        for (int c = 0; c < d; ++c) h -= chr[c](a, b) * dxn[c];
        hess[a][b] = h;
      }
    for (int a = 0; a < d; ++a)
      for (int b = 0; b < d; ++b) lap += gi(a, b) * hess[a][b];

    std::vector<std::vector<Field>> cpart(d, std::vector<Field>(d, Field(n)));
    std::vector<std::vector<Field>> mpart(d, std::vector<Field>(d, Field(n)));
    for (int a = 0; a < d; ++a)
      for (int b = 0; b < d; ++b) {
        cpart[a][b] = ds.phi[b] * dxn[a] * xn;
        for (int c = 0; c < d; ++c) mpart[a][b] += Pi(b, c) * D(xa[c], a);
      }
    const Sym csym = symmetrize(cpart);
    const Sym msym = symmetrize(mpart);
    for (int a = 0; a < d; ++a)
      for (int b = a; b < d; ++b) {
        Field ppp(n);
        for (int c = 0; c < d; ++c)
          for (int e = 0; e < d; ++e) ppp += Pi(a, c) * gi(c, e) * Pi(e, b);
        Field grad = (t.g(a, b) * P * 0.5 + (ppp - Pi(a, b) * tr * k) * 2.0) * isg * xn * -eps;
        grad += t.sg * ((ric(a, b) - t.g(a, b) * R * 0.5) * eps + t.g(a, b) * ds.lambda) * xn;
        grad += t.sg * (t.g(a, b) * lap - hess[a][b]) * eps;
        grad += csym(a, b);
        grad -= msym(a, b) * (2.0 * eps);
        Field div(n);
        for (int c = 0; c < d; ++c) div += D(Pi(a, b) * xa[c], c);
        grad -= div * eps;
        q.Pi(a, b) = grad * -eps;
      }
  }

  // antighosts: Q phi = -dS/dxi (left derivative)
  {
    Field dn = t.kin + t.pot;
    for (int a = 0; a < d; ++a) {
      dn -= D(xa[a] * ds.phi_n, a);
      for (int b = 0; b < d; ++b) {
        dn += D(gi(a, b) * ds.phi[b] * xn, a);
        dn += gi(a, b) * ds.phi[b] * D(xn, a);
      }
    }
    q.phi_n = dn * -1.0;
    for (int a = 0; a < d; ++a) {
      Field da = t.mom[a] + ds.phi_n * D(xn, a);
      for (int b = 0; b < d; ++b) da += ds.phi[b] * D(xa[b], a);
      for (int c = 0; c < d; ++c) da -= D(xa[c] * ds.phi[a], c);
      q.phi[a] = da * -1.0;
    }
  }
  return q;
}

// ---- Euler contraction ----

BVState euler_vector(const PreBoundaryState& s) {
  BVState e = zero_like(s);
  e.xi_n = s.xi_n;
  e.xi = s.xi;
  e.gd_nn = s.gd_nn * -1.0;
  for (int a = 0; a < s.d(); ++a) e.gd_n[a] = s.gd_n[a] * -1.0;
  e.gd = s.gd * -1.0;
  e.chi_n = s.chi_n * -2.0;
  for (int a = 0; a < s.d(); ++a) e.chi[a] = s.chi[a] * -2.0;
  return e;
}

GradedScalar euler_contraction_action(const PreBoundaryState& s, const PreBoundaryState& q) {
  require_jets(s.adm, "euler_contraction_action");
  require_d(s.d(), "euler_contraction_action");
  const ConfigPtr cfg = merge_configs(config_of(s), config_of(q));
  const int tau = free_shift(cfg, used_generators(s) | used_generators(q));
  BVState tq = zero_like(q);
  add_scaled(tq, GradedScalar::generator(cfg, tau), q);
  const GradedScalar v = left_derive(omega_tilde(s, tq, euler_vector(s)), tau);
  const GhostGrade g = ghost_grade(v);
  if (!g.admits(1)) throw Error(ErrorKind::GradeMismatch, "euler contraction is not of ghost number 1");
  return v;
}

GradedScalar euler_contraction_action(const BVState& bulk, MeshPtr boundary) {
  return euler_contraction_action(restrict_to_boundary(bulk, boundary), pre_boundary_Q(bulk, boundary));
}

// ---- flows ----

BVState flow_bv(const PreBoundaryState& s, const VectorField<BVState>& X, int steps) { return rk4(s, X, steps); }

ADMBlock flow_classical(const ADMBlock& adm, const VectorField<ADMBlock>& X, int steps) {
  return rk4(adm, X, steps);
}

}  // namespace bvbfv
