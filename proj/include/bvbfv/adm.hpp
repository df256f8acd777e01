#pragma once

// Degree-0 geometry of the ADM split: reconstruction of the spacetime metric,
// extrinsic curvature, boundary curvature, Lagrangian densities and the
// classical constraints.
//
// Spacetime indices are ordered (n, 1..d), matching the bulk mesh axes.

#include "bvbfv/state.hpp"

namespace bvbfv {

// Throws DimensionUnsupported for d = 1 (or d > 3), SingularMetric if eta or
// gamma are degenerate, SchemaError for a bad sign.
void validate(const ADMBlock& adm);

// Normal jet of gamma: the stored J on a boundary grid, the normal derivative
// on a bulk patch.  MissingJets if neither is available.
Sym normal_jet(const ADMBlock& adm);

struct SpacetimeMetric {
  Sym g;
  Sym g_inv;
  Field sqrt_minus_g;  // eta sqrt(gamma)
};

// g_nn = -eps (eta^2 - beta_a beta^a), g_na = eps beta_a, g_ab = eps gamma_ab and
// the closed-form inverse.  SingularMetric if eta^2 - beta.beta <= 0.
SpacetimeMetric assemble_spacetime_metric(const ADMBlock& adm);

// Boundary-metric data shared by most formulas.
struct SpatialGeometry {
  Sym gamma_inv;
  Field sqrt_gamma;
  std::vector<Sym> christoffel;  // Gamma^c_ab of gamma
};
SpatialGeometry spatial_geometry(const Sym& gamma, const Partial& d);

struct ExtrinsicCurvature {
  Sym T;     // 2 nabla_(a beta_b) - J_ab
  Sym K;     // T / (2 eta)
  Field trK;
  Sym K_up;  // K^{ab}
};
ExtrinsicCurvature extrinsic_curvature(const ADMBlock& adm, const SpatialGeometry& geo);
ExtrinsicCurvature extrinsic_curvature(const ADMBlock& adm);

// Scalar curvature of gamma.  The induced boundary metric is eps gamma, whose
// curvature is eps times this.
Field boundary_ricci_scalar(const Sym& gamma, const Partial& d);

// eta sqrt(gamma) (eps (K_ab K^ab - K^2) + eps R[gamma] - 2 Lambda)
Field adm_lagrangian_density(const ADMBlock& adm);

// (R[g] - 2 Lambda) sqrt|g| for a (d+1)-metric on a bulk mesh.
Field bulk_eh_density(const Sym& g, const Sym& g_inv, const Partial& d, double lambda);
Field bulk_eh_density(const ADMBlock& bulk);

struct ClassicalConstraints {
  Field G_eta;
  Vec G_beta;    // upper index
  Sym G_gamma;   // upper indices; only on a bulk patch
  bool has_G_gamma = false;
};
ClassicalConstraints classical_constraints(const ADMBlock& adm);

// sqrt(gamma) gamma^{ba} (gamma^{cd} nabla_c K_da - nabla_a K), upper index b.
Vec momentum_constraint_covariant(const Sym& gamma, const Sym& K, const Partial& d);

// sqrt|g|(R - 2 Lambda) - L_ADM + 2 d_n(sqrt(gamma) K)
//   - 2 d_a(sqrt(gamma) K beta^a - sqrt(gamma) gamma^{ab} d_b eta)
Field ghy_decomposition_residual(const ADMBlock& bulk);

// Euler-Lagrange derivative E^{mu nu} = dS/dg_{mu nu} of the Einstein-Hilbert
// density, -sqrt|g| (R^{mu nu} - R g^{mu nu}/2 + Lambda g^{mu nu}).
Sym einstein_euler_lagrange(const Sym& g, const Sym& g_inv, const Partial& d, double lambda);

// The same derivative expressed in ADM variables:
// dS/deta, dS/dbeta_a (upper), dS/dgamma_ab (upper), with pairings summed
// over all index values.
struct ADMEulerLagrange {
  Field d_eta;
  Vec d_beta;
  Sym d_gamma;
  Sym E;  // E^{mu nu}
};
ADMEulerLagrange adm_euler_lagrange(const ADMBlock& bulk);

// Pointwise body test of positive-definiteness by Cholesky.
bool positive_definite(const Sym& gamma);

}  // namespace bvbfv
