#pragma once

// Deterministic field presets used by tests, suites and the CLI.

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "bvbfv/state.hpp"

namespace bvbfv {

// Smooth random profile: a few low Fourier modes on periodic axes and slow
// cosines on bounded axes, scaled to roughly `amplitude`.
Field::Profile smooth_random_profile(const Mesh& mesh, std::mt19937_64& rng, double amplitude, int modes = 2);

// Layer-0 slice of a bulk profile or field.
Field boundary_slice(const Mesh& bulk, const Field& f);

// eta = 1, beta = 0, gamma = delta, J = 0.
ADMBlock preset_flat(MeshPtr mesh, int axis_offset, ConfigPtr cfg, int eps = 1, double lambda = 0.0);

// gamma = exp(2 phi) delta on a 2d torus, phi = amp sin(2 pi x) cos(2 pi y) + amp/2 cos(2 pi x).
ADMBlock preset_conformal2d(MeshPtr mesh, ConfigPtr cfg, double amp);
Field::Profile conformal2d_phi(const Mesh& mesh, double amp);

// Time-symmetric Schwarzschild slice gamma = psi^4 delta, psi = 1 + M/(2r), on
// the box [lo, hi]^3 (bounded axes).  J = 0, eta = 1, beta = 0.
MeshPtr schwarzschild_mesh(double lo, double hi, int n);
ADMBlock preset_schwarzschild(MeshPtr box, ConfigPtr cfg, double mass);

// Bulk patch with eta = 1, beta = 0, gamma = a(x^n)^2 delta,
// a = 1 + amp sin(2 pi x^n).
ADMBlock preset_flrw(MeshPtr bulk, ConfigPtr cfg, double amp);
// Closed-form scalar curvature of the metric above (eps = +1).
Field::Profile flrw_ricci_scalar(const Mesh& bulk, int d, double amp);

// Smooth random perturbation of flat data.  On a bulk patch the fields also
// depend on x^n and J is left empty.
ADMBlock preset_random_smooth(MeshPtr mesh, int axis_offset, ConfigPtr cfg, std::uint64_t seed, double amplitude,
                              int eps = 1, double lambda = 0.0, int modes = 2);

// Random BV state around a random ADM block: every ghost component is
// sum_k theta_k f_k(x) over the ghost generators, every antifield the same over
// the antifield generators, antighosts are body profiles of grade -2.
BVState preset_random_bv(MeshPtr mesh, int axis_offset, ConfigPtr cfg, std::uint64_t seed, double amplitude,
                         int eps = 1, double lambda = 0.0, int modes = 2);

// Darboux state on a boundary grid: gamma^{ab} = delta + O(amplitude), Pi of
// order one, ghosts and antighosts summed over their generators.  `modes`
// bounds the wave numbers of every profile.
DarbouxState preset_random_darboux(MeshPtr mesh, ConfigPtr cfg, std::uint64_t seed, double amplitude, int eps = 1,
                                   double lambda = 0.0, int modes = 2);

// BV state with ghosts and antifields set to zero.
BVState bv_from_adm(ADMBlock adm);

// Layer-0 restriction of a bulk BV state; J is the normal derivative of gamma.
PreBoundaryState restrict_to_boundary(const BVState& bulk, MeshPtr boundary);

// Random direction with the layout of `like`.  Constant directions have
// spatially constant profiles; odd slots use the matching generators.
template <class S>
S random_direction(const S& like, const Mesh& mesh, std::mt19937_64& rng, double amplitude, bool constant);

std::vector<std::string> preset_names();

}  // namespace bvbfv
