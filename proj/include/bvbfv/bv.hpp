#pragma once

// BV extension of the ADM theory on a bulk patch: the action
//   S = int L_ADM - int (L_xi g)_{mu nu} g+^{mu nu} + int xi^rho d_rho xi^mu chi_mu,
// its derivatives, and the cohomological vector field Q.
//
// Spacetime indices run over (n, 1..d), index 0 being the normal axis of the
// bulk mesh.  Derivatives with respect to symmetric fields are gradients for
// the full index sum, so the pairing with a variation of g+^{na} counts the
// na and an entries separately (factor 2 on the stored component).
// Odd derivatives are left derivatives.

#include "bvbfv/adm.hpp"

namespace bvbfv {

// The multiplet in covariant form.
struct SpacetimeFields {
  Sym g;    // g_{mu nu}
  Vec xi;   // xi^mu
  Sym gd;   // g+^{mu nu}
  Vec chi;  // chi_mu
};
SpacetimeFields spacetime_fields(const BVState& s);

// (L_xi g)_{mu nu} = xi^rho d_rho g_{mu nu} + d_mu xi^rho g_{rho nu} + d_nu xi^rho g_{mu rho}
Sym lie_derivative_metric(const Sym& g, const Vec& xi, const Partial& d);

Field bv_action_density(const BVState& s);
GradedScalar bv_action(const BVState& s);

// Derivatives of the BV part of the action (without the ADM term).
struct BVDerivatives {
  Field d_eta;
  Vec d_beta;
  Sym d_gamma;
  Field d_gd_nn;
  Vec d_gd_n;
  Sym d_gd;
  Field d_xi_n;
  Vec d_xi;
  Field d_chi_n;
  Vec d_chi;
};
BVDerivatives bv_derivatives(const BVState& s);

// Q on a bulk state.  Components of the result hold (Q phi) with grade of phi
// plus one; J is left empty.  The antifield components are the metric
// gradient of the full action reordered into g+ coordinates.
BVState apply_Q_bulk(const BVState& s);

// Q on the normal jet: d_n (Q gamma_ab).
Sym q_normal_jet(const BVState& bulk);

// Q restricted to the boundary layer, with (Q J) supplied from q_normal_jet.
PreBoundaryState pre_boundary_Q(const BVState& bulk, MeshPtr boundary);

// Field/antifield pairing on the bulk patch for degree-0 directions,
//   Omega(X, Y) = int Y_g X_g+ - Y_g+ X_g - Y_xi X_chi + Y_chi X_xi,
// with the metric variation written through (eta, beta, gamma) at s.
GradedScalar bv_symplectic_form(const BVState& s, const BVState& X, const BVState& Y);

// Q applied twice, per sector.
struct QSquare {
  double eta = 0.0;
  double beta = 0.0;
  double gamma = 0.0;
  double xi = 0.0;
};
QSquare q_square_residual(const BVState& bulk);

// Q(F) for a functional F of the state: the degree-1 field is shifted to
// degree 0 by a scratch generator and the coefficient is read back.
template <class Fn>
auto apply_Q_to(Fn&& F, const BVState& s, const BVState& q);

}  // namespace bvbfv

#include "bvbfv/functional.hpp"

namespace bvbfv {

template <class Fn>
auto apply_Q_to(Fn&& F, const BVState& s, const BVState& q) {
  const ConfigPtr cfg = merge_configs(config_of(s), config_of(q));
  const int tau = free_shift(cfg, used_generators(s) | used_generators(q));
  const GradedScalar t = GradedScalar::generator(cfg, tau);
  BVState x = zero_like(q);
  add_scaled(x, t, q);
  const Mask extra = Mask{1} << tau;
  auto dv = directional_derivative(F, s, x, DerivativeMode::Exact, extra);
  if constexpr (std::is_same_v<decltype(dv), GradedScalar> || std::is_same_v<decltype(dv), Field>) {
    return left_derive(dv, tau);
  } else {
    return left_derive_state(dv, tau);
  }
}

}  // namespace bvbfv
