#pragma once

// Boundary structure of the BV ADM theory: the pre-boundary one-form and its
// differential, the kernel generators, the reduction to Darboux fields, the
// boundary action with its cohomological vector field, and the Euler
// contraction that recovers the boundary action from the pre-boundary data.
//
// Tangent vectors are states of the same type holding the variations.  Odd
// vector fields (Q) enter the two-forms shifted to degree 0 by a scratch
// generator, as in apply_Q_to.

#include "bvbfv/bv.hpp"
#include "bvbfv/presets.hpp"

namespace bvbfv {

// ---- pre-boundary forms ----

// 2 eps int { d(sqrt(gamma)) trK + (sqrt(gamma)/2) d(gamma^{ab}) K_ab }
GradedScalar alpha_tilde_classical(const ADMBlock& adm, const ADMBlock& X);

// Boundary term of the variation of the BV action,
//   delta S = (bulk) + alpha(layer 0) - alpha(far layer),
// evaluated on the boundary restriction.  For a degree-0 direction the value
// has ghost number 0.
GradedScalar alpha_tilde_bv(const PreBoundaryState& s, const BVState& X);

// d alpha for constant degree-0 directions.
GradedScalar omega_tilde(const PreBoundaryState& s, const BVState& X, const BVState& Y);
GradedScalar omega_tilde_classical(const ADMBlock& adm, const ADMBlock& X, const ADMBlock& Y);

// d alpha for state-dependent degree-0 vector fields:
// X(alpha(Y)) - Y(alpha(X)) - alpha([X, Y]).
GradedScalar omega_tilde(const PreBoundaryState& s, const VectorField<BVState>& X, const VectorField<BVState>& Y);

// ---- kernel of omega_tilde ----

// Free components of a kernel generator.  Each family reads only its own
// slot: inverse lapse / lapse, shift, chi_n, chi_a, or g+^{ab}.
struct KernelParams {
  Field x_eta_inv;  // classical inverse-lapse generator
  Field x_eta;      // BV lapse generator
  Vec x_beta;
  Field x_chi_n;
  Vec x_chi;
  Sym x_gd;
};

enum class ClassicalKernel { InverseLapse, Shift };
enum class BVKernel { NormalGhost, TangentialGhost, Shift, Antifield, Lapse };

const char* to_string(ClassicalKernel k);
const char* to_string(BVKernel k);

ADMBlock kernel_generator_classical(const ADMBlock& adm, ClassicalKernel family, const KernelParams& p);
// Vector value at s.  Free slots equal the parameters exactly; the remaining
// components carry the corrections that keep the vector in the kernel.
BVState kernel_generator_bv(const PreBoundaryState& s, BVKernel family, const KernelParams& p);

VectorField<BVState> kernel_field_bv(BVKernel family, KernelParams p);
VectorField<ADMBlock> kernel_field_classical(ClassicalKernel family, KernelParams p);

// ---- reduction ----

struct ReducedClassical {
  Sym gamma;
  Sym J;  // eta^{-1} (J - 2 nabla_(l beta_m))
};
ReducedClassical reduce_classical(const ADMBlock& adm);

// Sign of the chi_a xi^n term in phi_a.  +1 makes the pullback identity hold;
// the other value is kept for the mutation check.
inline constexpr int kChiSign = 1;

DarbouxState reduce_bv(const PreBoundaryState& s, int chi_sign = kChiSign);

// D pi . X
DarbouxState pushforward(const PreBoundaryState& s, const BVState& X);

// ---- boundary symplectic data ----

// -eps int X_gamma^{ab} Pi_ab - int phi_rho X_xi^rho
GradedScalar alpha_boundary(const DarbouxState& ds, const DarbouxState& X);
// d alpha_boundary; constant coefficients.
GradedScalar omega_boundary(const DarbouxState& ds, const DarbouxState& X, const DarbouxState& Y);

// S_bd = int { -(eps/sqrt g)(Pi.Pi - Pi^2/(d-1)) + sqrt g (R - 2 Lambda)
//              - d_a(xi^a phi_n) + gamma^{ab} phi_b d_a xi^n } xi^n
//      + int { 2 eps (d_c(gamma^{cd} Pi_da) + (1/2)(d_a gamma^{cd}) Pi_cd) - d_c(xi^c phi_a) } xi^a
// with R = eps R[gamma], the curvature of the induced metric.
GradedScalar boundary_action(const DarbouxState& ds);

struct BoundaryConstraints {
  Field H;   // coefficient of xi^n at ghost number 0
  Vec H_a;   // coefficient of xi^a at ghost number 0
};
BoundaryConstraints boundary_constraints(const DarbouxState& ds);

// Hamiltonian vector field of S_bd: omega_bd(tau Q, Y) = tau D_Y S_bd.
// The gamma and xi components are the projections of the bulk Q.
DarbouxState boundary_Q(const DarbouxState& ds);

// Q applied to any functional of a Darboux state.
template <class Fn>
auto apply_boundary_Q_to(Fn&& F, const DarbouxState& ds, const DarbouxState& q);

// ---- Euler contraction ----

// Grading vector field on pre-boundary fields: xi -> xi, g+ -> -g+, chi -> -2 chi.
BVState euler_vector(const PreBoundaryState& s);
// iota_Q iota_E omega_tilde for the restriction of the bulk Q; contractions of
// an odd and an even vector field commute in the graded sense, so this is
// omega_tilde(tau Q, E) read off at tau.
GradedScalar euler_contraction_action(const BVState& bulk, MeshPtr boundary);
GradedScalar euler_contraction_action(const PreBoundaryState& s, const PreBoundaryState& q);

// ---- kernel flows ----

// Classical RK4 on t in [0, 1] along a state-dependent kernel field.
BVState flow_bv(const PreBoundaryState& s, const VectorField<BVState>& X, int steps = 64);
ADMBlock flow_classical(const ADMBlock& adm, const VectorField<ADMBlock>& X, int steps = 64);

}  // namespace bvbfv

namespace bvbfv {

template <class Fn>
auto apply_boundary_Q_to(Fn&& F, const DarbouxState& ds, const DarbouxState& q) {
  const ConfigPtr cfg = merge_configs(config_of(ds), config_of(q));
  const int tau = free_shift(cfg, used_generators(ds) | used_generators(q));
  DarbouxState x = zero_like(q);
  add_scaled(x, GradedScalar::generator(cfg, tau), q);
  auto dv = directional_derivative(F, ds, x, DerivativeMode::Exact, Mask{1} << tau);
  if constexpr (std::is_same_v<decltype(dv), GradedScalar> || std::is_same_v<decltype(dv), Field>) {
    return left_derive(dv, tau);
  } else {
    return left_derive_state(dv, tau);
  }
}

}  // namespace bvbfv
