#include "bvbfv/verify.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <limits>
#include <random>
#include <sstream>

#include "bvbfv/adm.hpp"
#include "bvbfv/error.hpp"

namespace bvbfv {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

ConfigPtr field_config(const SuiteConfig& c) {
  const int k = (c.generators - 2 * kAuxPairs - kAuxShifts) / 2;
  return make_field_config(k, k);
}

// Wave-number bound of random states: products of d = 3 states stay resolved
// on 16^3 only with single-mode profiles.
int modes(const SuiteConfig& c) { return c.d == 2 ? 2 : 1; }

MeshPtr torus(int d, int n) { return std::make_shared<const Mesh>(periodic_grid(d, n)); }
MeshPtr torus(std::vector<int> n) { return std::make_shared<const Mesh>(periodic_grid(std::move(n))); }

struct Patch {
  MeshPtr bulk;
  MeshPtr boundary;
};
Patch patch(int d, int n, int layers, double h) {
  BulkPatchGrid g(periodic_grid(d, n), layers, h);
  return {std::make_shared<const Mesh>(g.bulk), std::make_shared<const Mesh>(g.boundary)};
}

double rel(double diff, double scale) { return diff / (1e-300 + scale); }

std::uint64_t mix(std::uint64_t seed, std::uint64_t salt) { return seed * 0x9E3779B97F4A7C15ull + salt; }

// `n` constant then `n` smooth random directions.
template <class S>
std::vector<S> battery(const S& like, const Mesh& mesh, std::uint64_t seed, int n, double amp = 1.0) {
  std::mt19937_64 rng(seed);
  std::vector<S> out;
  for (int k = 0; k < 2 * n; ++k) out.push_back(random_direction(like, mesh, rng, amp, k < n));
  return out;
}

KernelParams params_from(const BVState& P) {
  KernelParams p;
  p.x_eta_inv = P.adm.eta;
  p.x_eta = P.adm.eta;
  p.x_beta = P.adm.beta;
  p.x_chi_n = P.chi_n;
  p.x_chi = P.chi;
  p.x_gd = P.gd;
  return p;
}

KernelParams params_from(const ADMBlock& P) {
  KernelParams p;
  p.x_eta_inv = P.eta;
  p.x_eta = P.eta;
  p.x_beta = P.beta;
  return p;
}

// Kernel parameters: smooth, of unit size for the algebraic checks.
template <class S>
KernelParams random_params(const S& like, const Mesh& mesh, std::uint64_t seed, double amp) {
  std::mt19937_64 rng(seed);
  return params_from(random_direction(like, mesh, rng, amp, false));
}

// Loop over eps x seeds.
template <class Fn>
double over_states(const SuiteConfig& c, Fn&& fn) {
  double r = 0.0;
  for (int eps : c.eps)
    for (std::uint64_t seed : c.seeds) r = std::max(r, fn(eps, seed));
  return r;
}

double sym_diff(const Sym& a, const Sym& b) {
  double r = 0.0;
  for (std::size_t i = 0; i < a.components().size(); ++i)
    r = std::max(r, max_abs_diff(a.components()[i], b.components()[i]));
  return r;
}

double sup(const Field& f) { return f.max_abs(); }
double sup(const Vec& v) {
  double r = 0.0;
  for (const auto& f : v) r = std::max(r, f.max_abs());
  return r;
}

// ---------------------------------------------------------------- classical

ADMBlock classical_state(const SuiteConfig& c, MeshPtr m, int eps, std::uint64_t seed) {
  return preset_random_smooth(std::move(m), 0, field_config(c), seed, c.amplitude, eps, c.lambda, modes(c));
}

double flat_vacuum(const SuiteConfig& c) {
  const ConfigPtr cfg = field_config(c);
  double r = 0.0;
  for (int eps : c.eps) {
    auto m = torus(c.d, c.grid);
    const ADMBlock adm = preset_flat(m, 0, cfg, eps, 0.0);
    const auto cc = classical_constraints(adm);
    r = std::max({r, sup(cc.G_eta), sup(cc.G_beta), sup(adm_lagrangian_density(adm))});
    const auto bc = boundary_constraints(reduce_bv(bv_from_adm(adm)));
    r = std::max({r, sup(bc.H), sup(bc.H_a)});
    const KernelParams p = random_params(adm, *m, 7, 1.0);
    for (auto fam : {ClassicalKernel::InverseLapse, ClassicalKernel::Shift}) {
      const ADMBlock X = kernel_generator_classical(adm, fam, p);
      for (const auto& Y : battery(adm, *m, 11, 2)) r = std::max(r, omega_tilde_classical(adm, X, Y).max_abs());
      r = std::max(r, alpha_tilde_classical(adm, X).max_abs());
    }
    const Patch pt = patch(c.d, c.grid, c.layers, c.normal_spacing);
    r = std::max(r, sup(ghy_decomposition_residual(preset_flat(pt.bulk, 1, cfg, eps, 0.0))));
  }
  return r;
}

double classical_kernel(const SuiteConfig& c, ClassicalKernel fam) {
  auto m = torus(c.d, c.grid);
  return over_states(c, [&](int eps, std::uint64_t seed) {
    const ADMBlock adm = classical_state(c, m, eps, seed);
    const ADMBlock X = kernel_generator_classical(adm, fam, random_params(adm, *m, mix(seed, 1), 1.0));
    double r = 0.0;
    for (const auto& Y : battery(adm, *m, mix(seed, 2), c.directions))
      r = std::max(r, omega_tilde_classical(adm, X, Y).max_abs());
    return r;
  });
}

double classical_horizontality(const SuiteConfig& c, ClassicalKernel fam) {
  auto m = torus(c.d, c.grid);
  return over_states(c, [&](int eps, std::uint64_t seed) {
    const ADMBlock adm = classical_state(c, m, eps, seed);
    const ADMBlock X = kernel_generator_classical(adm, fam, random_params(adm, *m, mix(seed, 1), 1.0));
    return alpha_tilde_classical(adm, X).max_abs();
  });
}

// Flows are costly: half resolution, first two seeds.
SuiteConfig flow_config(const SuiteConfig& c) {
  SuiteConfig f = c;
  f.grid = std::max(8, c.grid / 2);
  if (f.seeds.size() > 2) f.seeds.resize(2);
  return f;
}

double classical_flow(const SuiteConfig& c0, ClassicalKernel fam) {
  const SuiteConfig c = flow_config(c0);
  auto m = torus(c.d, c.grid);
  return over_states(c, [&](int eps, std::uint64_t seed) {
    const ADMBlock adm = classical_state(c, m, eps, seed);
    const KernelParams p = random_params(adm, *m, mix(seed, 3), 0.5);
    const ADMBlock end = flow_classical(adm, kernel_field_classical(fam, p));
    const ReducedClassical a = reduce_classical(adm), b = reduce_classical(end);
    return std::max(sym_diff(a.gamma, b.gamma), sym_diff(a.J, b.J));
  });
}

// alpha_tilde against the reduced one-form on metric variations.
double classical_pullback(const SuiteConfig& c) {
  auto m = torus(c.d, c.grid);
  double diff = 0.0, scale = 0.0;
  over_states(c, [&](int eps, std::uint64_t seed) {
    const ADMBlock adm = classical_state(c, m, eps, seed);
    const BVState s = bv_from_adm(adm);
    const DarbouxState ds = reduce_bv(s);
    for (const auto& Y : battery(adm, *m, mix(seed, 4), 1)) {
      BVState X = zero_like(s);
      X.adm = Y;
      const GradedScalar a = alpha_tilde_classical(adm, Y);
      diff = std::max(diff, max_abs_diff(a, alpha_boundary(ds, pushforward(s, X))));
      scale = std::max(scale, a.max_abs());
    }
    return 0.0;
  });
  return rel(diff, scale);
}

// Relative deviation of G_beta from c 2 eps H^a with the factor c fitted;
// |c - 1| enters as well.
double momentum_covariance(const SuiteConfig& c) {
  const double amp = c.d == 2 ? c.amplitude : std::min(c.amplitude, 0.01);
  auto m = torus(c.d, c.grid);
  return over_states(c, [&](int eps, std::uint64_t seed) {
    const ADMBlock adm = preset_random_smooth(m, 0, field_config(c), seed, amp, eps, c.lambda, modes(c));
    const auto cc = classical_constraints(adm);
    const Vec H = momentum_constraint_covariant(adm.gamma, extrinsic_curvature(adm).K, adm.partial());
    double num = 0.0, den = 0.0, scale = 0.0;
    for (int a = 0; a < adm.d(); ++a) {
      const auto g = cc.G_beta[a].body();
      const auto h = H[a].body();
      for (std::size_t i = 0; i < g.size(); ++i) {
        num += g[i] * 2.0 * eps * h[i];
        den += 4.0 * h[i] * h[i];
      }
      scale = std::max(scale, 2.0 * H[a].max_abs());
    }
    const double f = num / den;
    double dev = 0.0;
    for (int a = 0; a < adm.d(); ++a) dev = std::max(dev, max_abs_diff(cc.G_beta[a], H[a] * (2.0 * eps * f)));
    return std::max(rel(dev, scale), std::abs(f - 1.0));
  });
}

// |H| over the local curvature scale sqrt(gamma) |Ric| on the isotropic
// Schwarzschild slice; +inf unless the finer grid improves.
double schwarzschild_constraint(const SuiteConfig& c) {
  const ConfigPtr cfg = field_config(c);
  double prev = kInf;
  for (int n : {24, 48}) {
    const ADMBlock adm = preset_schwarzschild(schwarzschild_mesh(2.0, 3.0, n), cfg, 1.0);
    const Field H = classical_constraints(adm).G_eta;
    const SpatialGeometry g = spatial_geometry(adm.gamma, adm.partial());
    const Sym ric = ricci_tensor(adm.gamma, g.gamma_inv, adm.partial());
    const Sym ric_up = raise(g.gamma_inv, ric);
    const auto rr = contract(ric_up, ric).body();
    const auto sg = g.sqrt_gamma.body();
    double scale = 0.0;
    for (std::size_t i = 0; i < rr.size(); ++i) scale = std::max(scale, sg[i] * std::sqrt(std::abs(rr[i])));
    const double r = rel(H.max_abs(), scale);
    if (!(r < prev) && n == 48) return kInf;
    prev = r;
  }
  return prev;
}

// Number of guarded entry points that fail to reject d = 1.
double dimension_guard(const SuiteConfig& c) {
  const ConfigPtr cfg = field_config(c);
  auto m = torus(1, 8);
  ADMBlock adm = preset_flat(m, 0, cfg);
  adm.J = Sym(1, m->size());
  const BVState s = bv_from_adm(adm);
  const KernelParams p = params_from(s);
  int missed = 0;
  auto expect = [&](auto&& f) {
    try {
      f();
      ++missed;
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::DimensionUnsupported) ++missed;
    }
  };
  expect([&] { (void)kernel_generator_classical(adm, ClassicalKernel::InverseLapse, p); });
  expect([&] { (void)kernel_generator_classical(adm, ClassicalKernel::Shift, p); });
  expect([&] { (void)kernel_generator_bv(s, BVKernel::Lapse, p); });
  expect([&] { (void)reduce_bv(s); });
  return missed;
}

// ---------------------------------------------------------------------- bv

// Relative mismatch of bv_derivatives against the exact functional
// derivative of the BV part of the action, slot by slot, on a periodic bulk.
double bv_derivative_check(const SuiteConfig& c) {
  const ConfigPtr cfg = field_config(c);
  auto bulk = torus(std::vector<int>(c.d + 1, c.d == 2 ? 12 : 8));
  return over_states(c, [&](int eps, std::uint64_t seed) {
    const BVState s = preset_random_bv(bulk, 1, cfg, seed, c.amplitude, eps, c.lambda, modes(c));
    auto S_bv = [&](const BVState& p) { return bulk->integrate(bv_action_density(p) - adm_lagrangian_density(p.adm)); };
    const BVDerivatives der = bv_derivatives(s);
    std::mt19937_64 rng(mix(seed, 5));
    const BVState dir = random_direction(s, *bulk, rng, 1.0, false);
    const int d = c.d;
    double r = 0.0;
    for (int slot = 0; slot < 10; ++slot) {
      BVState x = zero_like(s);
      Field p(s.size());
      switch (slot) {
        case 0: x.adm.eta = dir.adm.eta; p = x.adm.eta * der.d_eta; break;
        case 1:
          x.adm.beta = dir.adm.beta;
          for (int a = 0; a < d; ++a) p += x.adm.beta[a] * der.d_beta[a];
          break;
        case 2:
          x.adm.gamma = dir.adm.gamma;
          for (int a = 0; a < d; ++a)
            for (int b = 0; b < d; ++b) p += x.adm.gamma(a, b) * der.d_gamma(a, b);
          break;
        case 3: x.gd_nn = dir.gd_nn; p = x.gd_nn * der.d_gd_nn; break;
        case 4:
          x.gd_n = dir.gd_n;
          for (int a = 0; a < d; ++a) p += x.gd_n[a] * der.d_gd_n[a] * 2.0;
          break;
        case 5:
          x.gd = dir.gd;
          for (int a = 0; a < d; ++a)
            for (int b = 0; b < d; ++b) p += x.gd(a, b) * der.d_gd(a, b);
          break;
        case 6: x.xi_n = dir.xi_n; p = x.xi_n * der.d_xi_n; break;
        case 7:
          x.xi = dir.xi;
          for (int a = 0; a < d; ++a) p += x.xi[a] * der.d_xi[a];
          break;
        case 8: x.chi_n = dir.chi_n; p = x.chi_n * der.d_chi_n; break;
        default:
          x.chi = dir.chi;
          for (int a = 0; a < d; ++a) p += x.chi[a] * der.d_chi[a];
          break;
      }
      const GradedScalar lhs = directional_derivative(S_bv, s, x);
      const GradedScalar rhs = bulk->integrate(p);
      r = std::max(r, rel(max_abs_diff(lhs, rhs), rhs.max_abs()));
    }
    return r;
  });
}

// Antifield components of Q against the Euler-Lagrange expression plus the
// ghost transport of the antifields.
double q_antifield_gradient(const SuiteConfig& c) {
  const ConfigPtr cfg = field_config(c);
  const int d = c.d;
  auto bulk = torus(std::vector<int>(d + 1, d == 2 ? 24 : 12));
  const double amp = d == 2 ? c.amplitude : std::min(c.amplitude, 0.01);
  double r = 0.0;
  for (int eps : c.eps) {
    const BVState s = preset_random_bv(bulk, 1, cfg, c.seeds.front(), amp, eps, c.lambda, modes(c));
    const BVState q = apply_Q_bulk(s);
    const auto el = adm_euler_lagrange(s.adm);
    const auto f = spacetime_fields(s);
    const Partial D{bulk.get(), 0};
    for (int mu = 0; mu <= d; ++mu) {
      for (int nu = mu; nu <= d; ++nu) {
        Field g(s.size());
        for (int k = 0; k <= d; ++k)
          g += D(f.xi[k] * f.gd(mu, nu), k) - D(f.xi[mu], k) * f.gd(nu, k) - D(f.xi[nu], k) * f.gd(mu, k);
        const Field& got = mu == 0 ? (nu == 0 ? q.gd_nn : q.gd_n[nu - 1]) : q.gd(mu - 1, nu - 1);
        r = std::max(r, max_abs_diff(got, el.E(mu, nu) + g));
      }
    }
  }
  return r;
}

double bulk_q_square(const SuiteConfig& c) {
  const ConfigPtr cfg = field_config(c);
  auto bulk = c.d == 2 ? torus({24, 32, 32}) : torus(std::vector<int>(4, 16));
  const double amp = c.d == 2 ? c.amplitude : std::min(c.amplitude, 0.01);
  double r = 0.0;
  for (int eps : c.eps) {
    const BVState s = preset_random_bv(bulk, 1, cfg, c.seeds.front(), amp, eps, c.lambda, modes(c));
    const QSquare q = q_square_residual(s);
    r = std::max({r, q.eta, q.beta, q.gamma, q.xi});
  }
  return r;
}

// ---------------------------------------------------------------- boundary

BVState pre_state(const SuiteConfig& c, MeshPtr m, int eps, std::uint64_t seed) {
  return preset_random_bv(std::move(m), 0, field_config(c), seed, c.amplitude, eps, c.lambda, modes(c));
}

double bv_kernel(const SuiteConfig& c, BVKernel fam) {
  auto m = torus(c.d, c.grid);
  return over_states(c, [&](int eps, std::uint64_t seed) {
    const BVState s = pre_state(c, m, eps, seed);
    const BVState X = kernel_generator_bv(s, fam, random_params(s, *m, mix(seed, 1), 1.0));
    double r = 0.0;
    for (const auto& Y : battery(s, *m, mix(seed, 2), c.directions)) r = std::max(r, omega_tilde(s, X, Y).max_abs());
    return r;
  });
}

double bv_horizontality(const SuiteConfig& c, BVKernel fam) {
  auto m = torus(c.d, c.grid);
  return over_states(c, [&](int eps, std::uint64_t seed) {
    const BVState s = pre_state(c, m, eps, seed);
    const BVState X = kernel_generator_bv(s, fam, random_params(s, *m, mix(seed, 1), 1.0));
    return alpha_tilde_bv(s, X).max_abs();
  });
}

double darboux_diff(const DarbouxState& a, const DarbouxState& b) { return max_abs_diff(a, b); }

double bv_flow(const SuiteConfig& c0, BVKernel fam) {
  const SuiteConfig c = flow_config(c0);
  auto m = torus(c.d, c.grid);
  return over_states(c, [&](int eps, std::uint64_t seed) {
    const BVState s = pre_state(c, m, eps, seed);
    const KernelParams p = random_params(s, *m, mix(seed, 3), 0.5);
    const BVState end = flow_bv(s, kernel_field_bv(fam, p));
    return darboux_diff(reduce_bv(s), reduce_bv(end));
  });
}

// (state, variation) pairs: one constant and one smooth direction per state.
double pullback_alpha(const SuiteConfig& c, int chi_sign) {
  auto m = torus(c.d, c.grid);
  double diff = 0.0, scale = 0.0;
  over_states(c, [&](int eps, std::uint64_t seed) {
    const BVState s = pre_state(c, m, eps, seed);
    const DarbouxState ds = reduce_bv(s, chi_sign);
    for (const auto& X : battery(s, *m, mix(seed, 4), 1)) {
      const GradedScalar a = alpha_tilde_bv(s, X);
      diff = std::max(diff, max_abs_diff(a, alpha_boundary(ds, pushforward(s, X))));
      scale = std::max(scale, a.max_abs());
    }
    return 0.0;
  });
  return rel(diff, scale);
}

double pullback_omega(const SuiteConfig& c) {
  auto m = torus(c.d, c.grid);
  double diff = 0.0, scale = 0.0;
  over_states(c, [&](int eps, std::uint64_t seed) {
    const BVState s = pre_state(c, m, eps, seed);
    const DarbouxState ds = reduce_bv(s);
    const auto dirs = battery(s, *m, mix(seed, 6), 1);
    for (std::size_t k = 0; k + 1 < dirs.size() + 1; ++k) {
      const BVState& X = dirs[k];
      const BVState& Y = dirs[(k + 1) % dirs.size()];
      const GradedScalar w = omega_tilde(s, X, Y);
      diff = std::max(diff, max_abs_diff(w, omega_boundary(ds, pushforward(s, X), pushforward(s, Y))));
      scale = std::max(scale, w.max_abs());
    }
    return 0.0;
  });
  return rel(diff, scale);
}

// omega_bd against the constant pairing written out slot by slot.
double darboux_pairing(const SuiteConfig& c) {
  auto m = torus(c.d, c.grid);
  const ConfigPtr cfg = field_config(c);
  const int d = c.d;
  double diff = 0.0, scale = 0.0;
  for (int eps : c.eps) {
    for (std::uint64_t seed : c.seeds) {
      const DarbouxState ds = preset_random_darboux(m, cfg, seed, c.amplitude, eps, c.lambda, modes(c));
      std::mt19937_64 rng(mix(seed, 7));
      const DarbouxState X = random_direction(ds, *m, rng, 1.0, true);
      const DarbouxState Y = random_direction(ds, *m, rng, 1.0, true);
      const double vol = m->integrate(Field::constant(m->size(), 1.0).body());
      GradedScalar e;
      for (int a = 0; a < d; ++a) {
        for (int b = 0; b < d; ++b) {
          const GradedScalar xg = X.gamma_up(a, b).at(0), yg = Y.gamma_up(a, b).at(0);
          const GradedScalar xp = X.Pi(a, b).at(0), yp = Y.Pi(a, b).at(0);
          e += (xg * yp - yg * xp) * (eps * vol);
        }
      }
      e += (Y.phi_n.at(0) * X.xi_n.at(0) - X.phi_n.at(0) * Y.xi_n.at(0)) * vol;
      for (int a = 0; a < d; ++a) e += (Y.phi[a].at(0) * X.xi[a].at(0) - X.phi[a].at(0) * Y.xi[a].at(0)) * vol;
      const GradedScalar w = omega_boundary(ds, X, Y);
      diff = std::max(diff, max_abs_diff(w, e));
      scale = std::max(scale, e.max_abs());
    }
  }
  return rel(diff, scale);
}

// Contraction of Q and the Euler field against the boundary action of the
// reduced restriction; two states per (eps, seed).
double euler_contraction(const SuiteConfig& c) {
  const Patch pt = patch(c.d, c.grid, c.layers, 0.005);
  const ConfigPtr cfg = field_config(c);
  return over_states(c, [&](int eps, std::uint64_t seed) {
    double r = 0.0;
    for (std::uint64_t sd : {seed, mix(seed, 8)}) {
      const BVState b = preset_random_bv(pt.bulk, 1, cfg, sd, 2.0 * c.amplitude, eps, c.lambda, modes(c));
      const GradedScalar lhs = euler_contraction_action(b, pt.boundary);
      const GradedScalar rhs = boundary_action(reduce_bv(restrict_to_boundary(b, pt.boundary)));
      r = std::max(r, rel(max_abs_diff(lhs, rhs), rhs.max_abs()));
    }
    return r;
  });
}

DarbouxState darboux_state(const SuiteConfig& c, MeshPtr m, int eps, std::uint64_t seed) {
  return preset_random_darboux(std::move(m), field_config(c), seed, c.amplitude, eps, c.lambda, modes(c));
}

// Number of states whose boundary action is not purely of ghost number one.
double action_grade(const SuiteConfig& c) {
  auto m = torus(c.d, c.grid);
  double bad = 0.0;
  over_states(c, [&](int eps, std::uint64_t seed) {
    const GradedScalar S = boundary_action(reduce_bv(pre_state(c, m, eps, seed)));
    if (S.is_zero() || !ghost_grade(S).admits(1)) bad += 1.0;
    const GradedScalar S2 = boundary_action(darboux_state(c, m, eps, seed));
    if (S2.is_zero() || !ghost_grade(S2).admits(1)) bad += 1.0;
    return 0.0;
  });
  return bad;
}

// omega_bd(Q, Y) = D_Y S_bd on a battery of directions, relative.
double q_hamiltonian(const SuiteConfig& c) {
  auto m = torus(c.d, c.grid);
  return over_states(c, [&](int eps, std::uint64_t seed) {
    const DarbouxState ds = darboux_state(c, m, eps, seed);
    const DarbouxState q = boundary_Q(ds);
    double diff = 0.0, scale = 0.0;
    for (const auto& Y : battery(ds, *m, mix(seed, 9), std::max(1, c.directions / 2))) {
      const ConfigPtr cfg = config_of(ds);
      const int tau = free_shift(cfg, used_generators(ds) | used_generators(q) | used_generators(Y));
      DarbouxState tq = zero_like(q);
      add_scaled(tq, GradedScalar::generator(cfg, tau), q);
      const GradedScalar lhs = left_derive(omega_boundary(ds, tq, Y), tau);
      const GradedScalar rhs =
          directional_derivative([](const DarbouxState& p) { return boundary_action(p); }, ds, Y);
      diff = std::max(diff, max_abs_diff(lhs, rhs));
      scale = std::max(scale, rhs.max_abs());
    }
    return rel(diff, scale);
  });
}

double q_square(const SuiteConfig& c) {
  auto m = torus(c.d, c.grid);
  return over_states(c, [&](int eps, std::uint64_t seed) {
    const DarbouxState ds = darboux_state(c, m, eps, seed);
    const DarbouxState q = boundary_Q(ds);
    return sup_norm(apply_boundary_Q_to([](const DarbouxState& p) { return boundary_Q(p); }, ds, q));
  });
}

// Coefficients of single ghost monomials in S_bd.  With xi^n = theta_0 f and
// xi^a = theta_1 g^a no other term of the action carries exactly one ghost
// generator, so the coefficient of theta_0 is int f H and that of theta_1 is
// int g.H_a.
double constraint_extraction(const SuiteConfig& c) {
  auto m = torus(c.d, c.grid);
  const ConfigPtr cfg = field_config(c);
  return over_states(c, [&](int eps, std::uint64_t seed) {
    DarbouxState ds = darboux_state(c, m, eps, seed);
    std::mt19937_64 rng(mix(seed, 10));
    const Field::Profile f = smooth_random_profile(*m, rng, 1.0);
    ds.xi_n = Field::odd(cfg, 0, f);
    Vec g(c.d);
    for (int a = 0; a < c.d; ++a) {
      g[a] = Field::from_profile(smooth_random_profile(*m, rng, 1.0), cfg);
      ds.xi[a] = Field::odd(cfg, 1, g[a].body());
    }
    const GradedScalar S = boundary_action(ds);
    const BoundaryConstraints bc = boundary_constraints(ds);
    const double hn = m->integrate(bc.H * Field::from_profile(f, cfg)).body();
    double ha = 0.0;
    for (int a = 0; a < c.d; ++a) ha += m->integrate(bc.H_a[a] * g[a]).body();
    const double e0 = std::abs(S.coefficient(Mask{1} << 0, 1) - hn);
    const double e1 = std::abs(S.coefficient(Mask{1} << 1, 1) - ha);
    return std::max(rel(e0, std::abs(hn)), rel(e1, std::abs(ha)));
  });
}

double flat_constraints(const SuiteConfig& c) {
  const ConfigPtr cfg = field_config(c);
  double r = 0.0;
  for (int eps : c.eps) {
    const ADMBlock adm = preset_flat(torus(c.d, c.grid), 0, cfg, eps, 0.0);
    const auto bc = boundary_constraints(reduce_bv(bv_from_adm(adm)));
    r = std::max({r, sup(bc.H), sup(bc.H_a)});
  }
  return r;
}

// Second derivative of S_bd along two antighost-momentum directions.
double antighost_linearity(const SuiteConfig& c) {
  auto m = torus(c.d, c.grid);
  return over_states(c, [&](int eps, std::uint64_t seed) {
    const DarbouxState ds = darboux_state(c, m, eps, seed);
    std::mt19937_64 rng(mix(seed, 11));
    auto phi_only = [&](bool constant) {
      const DarbouxState r = random_direction(ds, *m, rng, 1.0, constant);
      DarbouxState x = zero_like(ds);
      x.phi_n = r.phi_n;
      x.phi = r.phi;
      return x;
    };
    double r = 0.0;
    for (bool constant : {true, false}) {
      const DarbouxState y1 = phi_only(constant), y2 = phi_only(!constant);
      auto first = [&](const DarbouxState& p) {
        return directional_derivative([](const DarbouxState& q) { return boundary_action(q); }, p, y2,
                                      DerivativeMode::Exact, used_generators(y1));
      };
      r = std::max(r, directional_derivative(first, ds, y1, DerivativeMode::Exact, used_generators(y2)).max_abs());
    }
    return r;
  });
}

// -------------------------------------------------------------------- bulk

Patch base_patch(const SuiteConfig& c) { return patch(c.d, c.grid, c.layers, c.normal_spacing); }
Patch fine_patch(const SuiteConfig& c) { return patch(c.d, c.grid, 2 * c.layers - 1, c.normal_spacing / 2); }

double ghy_residual(const SuiteConfig& c, MeshPtr bulk, int eps, std::uint64_t seed) {
  return sup(ghy_decomposition_residual(
      preset_random_smooth(std::move(bulk), 1, field_config(c), seed, c.amplitude, eps, c.lambda, modes(c))));
}

double rewriting(const SuiteConfig& c) {
  const Patch p = base_patch(c);
  return over_states(c, [&](int eps, std::uint64_t seed) { return ghy_residual(c, p.bulk, eps, seed); });
}

// Smallest observed order under halving of the normal spacing.
double rewriting_order(const SuiteConfig& c) {
  const Patch p = base_patch(c), q = fine_patch(c);
  double order = kInf;
  for (int eps : c.eps) {
    for (std::uint64_t seed : c.seeds) {
      order = std::min(order, std::log2(ghy_residual(c, p.bulk, eps, seed) / ghy_residual(c, q.bulk, eps, seed)));
    }
  }
  return order;
}

enum class DirectionClass { Interior, Antifield, Classical, Generic };

double fundamental(const SuiteConfig& c, DirectionClass cls) {
  const Patch p = base_patch(c);
  const ConfigPtr cfg = field_config(c);
  double r = 0.0;
  for (int eps : c.eps) {
    const std::uint64_t seed = c.seeds.front();
    const double amp = 2.0 * c.amplitude;
    const BVState s = cls == DirectionClass::Classical
                          ? bv_from_adm(preset_random_smooth(p.bulk, 1, cfg, seed, amp, eps, c.lambda, modes(c)))
                          : preset_random_bv(p.bulk, 1, cfg, seed, amp, eps, c.lambda, modes(c));
    std::vector<BVState> dirs;
    std::mt19937_64 rng(mix(seed, 12));
    for (int k = 0; k < 2; ++k) {
      BVState y = random_direction(s, *p.bulk, rng, 1.0, false);
      y.adm.J = Sym();
      switch (cls) {
        case DirectionClass::Interior: y = interior_direction(s, mix(seed, 13 + k)); break;
        case DirectionClass::Antifield: {
          BVState a = zero_like(y);
          a.gd_nn = y.gd_nn;
          a.gd_n = y.gd_n;
          a.gd = y.gd;
          y = a;
          break;
        }
        case DirectionClass::Classical: {
          BVState a = zero_like(y);
          a.adm.eta = y.adm.eta;
          a.adm.beta = y.adm.beta;
          a.adm.gamma = y.adm.gamma;
          y = a;
          break;
        }
        case DirectionClass::Generic: break;
      }
      dirs.push_back(std::move(y));
    }
    r = std::max(r, check_fundamental_formula(s, dirs));
  }
  return r;
}

// ------------------------------------------------------------------ tables

struct Family {
  const char* id;
  BVKernel k;
};
constexpr Family kBVFamilies[] = {{"normal_ghost", BVKernel::NormalGhost},
                                  {"tangential_ghost", BVKernel::TangentialGhost},
                                  {"shift", BVKernel::Shift},
                                  {"antifield", BVKernel::Antifield},
                                  {"lapse", BVKernel::Lapse}};

std::vector<Check> classical_checks() {
  std::vector<Check> v;
  v.push_back({"classical.flat_vacuum", "flat data: constraints, action, kernel and rewriting vanish", 1e-12,
               Compare::Below, flat_vacuum});
  using Named = std::pair<const char*, ClassicalKernel>;
  for (auto [id, k] : {Named{"inverse_lapse", ClassicalKernel::InverseLapse}, Named{"shift", ClassicalKernel::Shift}}) {
    const std::string s = id;
    v.push_back({"classical.kernel." + s, "contraction of the kernel generator with the pre-boundary two-form", 1e-7,
                 Compare::Below, [k](const SuiteConfig& c) { return classical_kernel(c, k); }});
    v.push_back({"classical.horizontality." + s, "contraction of the kernel generator with the pre-boundary one-form",
                 1e-7, Compare::Below, [k](const SuiteConfig& c) { return classical_horizontality(c, k); }});
    v.push_back({"classical.flow." + s, "reduced fields constant along the integrated kernel flow", 1e-6,
                 Compare::Below, [k](const SuiteConfig& c) { return classical_flow(c, k); }});
  }
  v.push_back({"classical.pullback", "pre-boundary one-form equals the pulled-back reduced one-form (relative)", 1e-7,
               Compare::Below, classical_pullback});
  v.push_back({"classical.momentum_covariance", "momentum constraint against its covariant form, fitted factor", 1e-7,
               Compare::Below, momentum_covariance});
  v.push_back({"classical.schwarzschild_constraint",
               "isotropic slice: |H| over curvature scale at 48^3, decreasing from 24^3", 1e-4, Compare::Below,
               schwarzschild_constraint});
  v.push_back({"classical.dimension_guard", "d = 1 rejected with DimensionUnsupported", 0.0, Compare::Below,
               dimension_guard});
  return v;
}

std::vector<Check> bv_checks() {
  return {
      {"bv.derivatives", "BV action derivatives against exact functional derivatives (relative)", 1e-10,
       Compare::Below, bv_derivative_check},
      {"bv.q_antifield_gradient", "antifield components of Q: Euler-Lagrange plus ghost transport", 1e-9,
       Compare::Below, q_antifield_gradient},
      {"bv.q_square", "Q^2 on metric and ghost sectors, periodic bulk", 1e-8, Compare::Below, bulk_q_square},
  };
}

std::vector<Check> boundary_checks() {
  std::vector<Check> v;
  for (const Family& f : kBVFamilies) {
    const std::string s = f.id;
    const BVKernel k = f.k;
    v.push_back({"boundary.kernel." + s, "contraction of the kernel generator with the pre-boundary two-form", 1e-7,
                 Compare::Below, [k](const SuiteConfig& c) { return bv_kernel(c, k); }});
    v.push_back({"boundary.horizontality." + s, "contraction of the kernel generator with the pre-boundary one-form",
                 1e-7, Compare::Below, [k](const SuiteConfig& c) { return bv_horizontality(c, k); }});
    v.push_back({"boundary.flow." + s, "reduced fields constant along the integrated kernel flow", 1e-6,
                 Compare::Below, [k](const SuiteConfig& c) { return bv_flow(c, k); }});
  }
  v.push_back({"boundary.pullback_alpha", "pre-boundary one-form equals the pulled-back boundary one-form (relative)",
               1e-7, Compare::Below, [](const SuiteConfig& c) { return pullback_alpha(c, kChiSign); }});
  v.push_back({"boundary.pullback_omega", "pre-boundary two-form equals the pulled-back boundary two-form (relative)",
               1e-7, Compare::Below, pullback_omega});
  v.push_back({"boundary.chi_sign_mutation", "flipped antighost sign in the reduction breaks the pullback", 1e-7,
               Compare::Above, [](const SuiteConfig& c) { return pullback_alpha(c, -kChiSign); }});
  v.push_back({"boundary.darboux_pairing", "boundary two-form is the constant Darboux pairing (relative)", 1e-13,
               Compare::Below, darboux_pairing});
  v.push_back({"boundary.euler_contraction", "Q and Euler contraction of the pre-boundary two-form (relative)", 1e-6,
               Compare::Below, euler_contraction});
  v.push_back({"boundary.action_grade", "boundary action has ghost number one", 0.0, Compare::Below, action_grade});
  v.push_back({"boundary.q_hamiltonian", "boundary Q is Hamiltonian for the boundary action (relative)", 1e-6,
               Compare::Below, q_hamiltonian});
  v.push_back({"boundary.q_square", "boundary Q squares to zero", 1e-7, Compare::Below, q_square});
  v.push_back({"boundary.constraint_extraction", "single-ghost coefficients of the action are the constraints", 1e-9,
               Compare::Below, constraint_extraction});
  v.push_back({"boundary.flat_constraints", "flat data at zero cosmological constant", 0.0, Compare::Below,
               flat_constraints});
  v.push_back({"boundary.antighost_linearity", "second antighost-momentum derivative of the action", 0.0,
               Compare::Below, antighost_linearity});
  return v;
}

std::vector<Check> bulk_checks() {
  return {
      {"bulk.rewriting", "ADM action minus Einstein-Hilbert minus the normal total derivative", 1e-5, Compare::Below,
       rewriting},
      {"bulk.rewriting_order", "observed convergence order of the rewriting residual", 3.5, Compare::Above,
       rewriting_order},
      {"bulk.fundamental.interior", "bulk-boundary formula, directions vanishing near both faces", 1e-5,
       Compare::Below, [](const SuiteConfig& c) { return fundamental(c, DirectionClass::Interior); }},
      {"bulk.fundamental.antifield", "bulk-boundary formula, pure antifield directions", 1e-10, Compare::Below,
       [](const SuiteConfig& c) { return fundamental(c, DirectionClass::Antifield); }},
      {"bulk.fundamental.classical", "bulk-boundary formula, metric directions at zero ghosts", 1e-5, Compare::Below,
       [](const SuiteConfig& c) { return fundamental(c, DirectionClass::Classical); }},
      {"bulk.fundamental.generic", "bulk-boundary formula, generic directions", 1e-5, Compare::Below,
       [](const SuiteConfig& c) { return fundamental(c, DirectionClass::Generic); }},
  };
}

std::string config_string(const SuiteConfig& c) {
  std::ostringstream o;
  o.precision(17);
  o << "d=" << c.d << ";grid=" << c.grid << ";layers=" << c.layers << ";h=" << c.normal_spacing << ";eps=";
  for (int e : c.eps) o << e << ',';
  o << ";lambda=" << c.lambda << ";amp=" << c.amplitude << ";gens=" << c.generators << ";seeds=";
  for (auto s : c.seeds) o << s << ',';
  o << ";dirs=" << c.directions << ";scale=" << c.tol_scale;
  return o.str();
}

std::string fnv1a(const std::string& s) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char ch : s) {
    h ^= ch;
    h *= 0x100000001b3ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace

void validate(const SuiteConfig& c) {
  auto fail = [](const std::string& w) { throw Error(ErrorKind::SchemaError, w); };
  const auto names = suite_names();
  if (std::find(names.begin(), names.end(), c.suite) == names.end()) fail("unknown suite '" + c.suite + "'");
  if (c.seeds.empty()) fail("seed list is empty");
  if (c.eps.empty()) fail("eps list is empty");
  for (int e : c.eps)
    if (e != 1 && e != -1) fail("eps must be +1 or -1");
  if (c.grid < 8) fail("grid must have at least 8 points per axis");
  if (c.layers < 7) fail("bulk patch needs at least 7 normal layers");
  if (!(c.normal_spacing > 0.0)) fail("normal spacing must be positive");
  if (!(c.amplitude > 0.0)) fail("amplitude must be positive");
  if (c.directions < 1) fail("at least one test direction");
  if (c.generators < 2 * kAuxPairs + kAuxShifts + 2 || c.generators % 2 != 0 || c.generators > 32)
    fail("generator count must be even, between 10 and 32");
  if (!(c.tol_scale > 0.0)) fail("tolerance scale must be positive");
  if (c.tol_scale > 1.0 && !c.force) fail("tolerances can only be loosened with force");
}

std::vector<std::string> suite_names() { return {"classical", "bv", "boundary", "bulk", "all"}; }

std::vector<Check> suite_checks(const std::string& suite) {
  if (suite == "classical") return classical_checks();
  if (suite == "bv") return bv_checks();
  if (suite == "boundary") return boundary_checks();
  if (suite == "bulk") return bulk_checks();
  if (suite == "all") {
    std::vector<Check> v;
    for (const char* s : {"classical", "bv", "boundary", "bulk"}) {
      auto part = suite_checks(s);
      v.insert(v.end(), part.begin(), part.end());
    }
    return v;
  }
  throw Error(ErrorKind::SchemaError, "unknown suite '" + suite + "'");
}

const Check& find_check(const std::string& id) {
  static const std::vector<Check> all = suite_checks("all");
  for (const Check& c : all)
    if (c.id == id) return c;
  throw Error(ErrorKind::SchemaError, "unknown check '" + id + "'");
}

CheckRecord run_check(const Check& check, const SuiteConfig& cfg) {
  CheckRecord r;
  r.id = check.id;
  r.description = check.description;
  r.digest = fnv1a(check.id + '|' + config_string(cfg));
  r.compare = check.compare;
  r.tolerance = check.compare == Compare::Below ? check.tolerance * cfg.tol_scale : check.tolerance / cfg.tol_scale;
  const auto t0 = std::chrono::steady_clock::now();
  try {
    r.residual = check.run(cfg);
    r.pass = check.compare == Compare::Below ? r.residual <= r.tolerance : r.residual > r.tolerance;
  } catch (const std::exception& e) {
    r.residual = kInf;
    r.pass = false;
    r.error = e.what();
  }
  r.wall_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
  return r;
}

std::vector<CheckRecord> run_suite(const SuiteConfig& cfg) {
  validate(cfg);
  std::vector<CheckRecord> out;
  if (cfg.d != 2 && cfg.d != 3) {
    CheckRecord r;
    r.id = cfg.suite + ".dimension";
    r.description = "requested dimension";
    r.digest = fnv1a(r.id + '|' + config_string(cfg));
    r.residual = kInf;
    r.error = Error(ErrorKind::DimensionUnsupported, "d = " + std::to_string(cfg.d) + " (supported: 2, 3)").what();
    out.push_back(r);
    return out;
  }
  for (const Check& c : suite_checks(cfg.suite)) out.push_back(run_check(c, cfg));
  std::stable_sort(out.begin(), out.end(), [](const CheckRecord& a, const CheckRecord& b) { return a.id < b.id; });
  return out;
}

std::string format_report(const std::vector<CheckRecord>& records, bool with_times) {
  std::ostringstream o;
  char buf[512];
  for (const auto& r : records) {
    std::snprintf(buf, sizeof buf, "%s  %-36s residual=%-10.3e %s%-9.3e digest=%s", r.pass ? "PASS" : "FAIL",
                  r.id.c_str(), r.residual, r.compare == Compare::Below ? "tol<=" : "tol> ", r.tolerance,
                  r.digest.c_str());
    o << buf;
    if (with_times) {
      std::snprintf(buf, sizeof buf, "  ms=%.0f", r.wall_ms);
      o << buf;
    }
    o << "  " << r.description;
    if (!r.error.empty()) o << "  error: " << r.error;
    o << '\n';
  }
  return o.str();
}

bool all_pass(const std::vector<CheckRecord>& records) {
  return !records.empty() &&
         std::all_of(records.begin(), records.end(), [](const CheckRecord& r) { return r.pass; });
}

// ------------------------------------------------------- fundamental formula

BVState restrict_layer(const BVState& bulk, const BVState& field, int k, MeshPtr boundary) {
  const Mesh& m = *bulk.adm.mesh;
  BVState out = field;
  out.adm.J = Sym();
  out.visit([&](Field& x, int) { x = m.slice(x, 0, k); });
  Sym J(bulk.d(), boundary->size());
  for (std::size_t i = 0; i < J.components().size(); ++i)
    J.components()[i] = m.slice(m.derivative(field.adm.gamma.components()[i], 0), 0, k);
  out.adm.J = std::move(J);
  out.adm.mesh = std::move(boundary);
  out.adm.axis_offset = 0;
  out.adm.eps = bulk.adm.eps;
  out.adm.lambda = bulk.adm.lambda;
  return out;
}

BVState interior_direction(const BVState& bulk, std::uint64_t seed) {
  const Mesh& m = *bulk.adm.mesh;
  std::mt19937_64 rng(seed);
  BVState y = random_direction(bulk, m, rng, 1.0, false);
  y.adm.J = Sym();
  const Axis& ax = m.axis(0);
  const double L = ax.length;
  const auto t = m.coordinate(0);
  Field::Profile w(t.size());
  for (std::size_t i = 0; i < t.size(); ++i) {
    const double u = (t[i] - ax.origin) * (L - (t[i] - ax.origin)) / (L * L);
    w[i] = 16.0 * u * u * u * u;
  }
  y.visit([&](Field& x, int) { x = x.scaled(w); });
  return y;
}

double check_fundamental_formula(const BVState& bulk, const std::vector<BVState>& directions) {
  if (!bulk.adm.on_bulk() || bulk.adm.mesh->rank() < 2 || bulk.adm.mesh->axis(0).periodic)
    throw Error(ErrorKind::MissingJets, "fundamental formula needs a state on a bulk patch");
  const Mesh& m = *bulk.adm.mesh;
  const MeshPtr bm = std::make_shared<const Mesh>(m.drop_axis(0));
  const int last = m.axis(0).n - 1;

  const BVState q = apply_Q_bulk(bulk);
  Mask used = used_generators(bulk) | used_generators(q);
  for (const auto& y : directions) used |= used_generators(y);
  const ConfigPtr cfg = config_of(bulk);
  const int tau = free_shift(cfg, used);
  BVState tq = zero_like(q);
  add_scaled(tq, GradedScalar::generator(cfg, tau), q);

  const BVState s0 = restrict_layer(bulk, bulk, 0, bm), sL = restrict_layer(bulk, bulk, last, bm);
  const DarbouxState d0 = reduce_bv(s0), dL = reduce_bv(sL);
  auto S = [](const BVState& p) { return bv_action(p); };

  double r = 0.0;
  for (const BVState& y : directions) {
    const GradedScalar A = left_derive(bv_symplectic_form(bulk, tq, y), tau);
    const GradedScalar B = directional_derivative(S, bulk, y);
    const GradedScalar C = alpha_boundary(d0, pushforward(s0, restrict_layer(bulk, y, 0, bm))) -
                           alpha_boundary(dL, pushforward(sL, restrict_layer(bulk, y, last, bm)));
    r = std::max(r, (A - B - C).max_abs());
  }
  return r;
}

}  // namespace bvbfv
