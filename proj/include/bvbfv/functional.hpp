#pragma once

// Field-space calculus: directional derivatives of functionals of a state and
// the Lie bracket of state-dependent vector fields.
//
// The exact derivative evaluates F(phi + t1 t2 X) where t1 t2 is a product of
// two unused scratch generators.  (t1 t2)^2 = 0, so the t1 t2 coefficient is
// exactly D_X F for any direction, even or odd.

#include <functional>
#include <type_traits>

#include "bvbfv/state.hpp"

namespace bvbfv {

enum class DerivativeMode { Exact, CentralDifference };

struct AuxPair {
  int first = -1;
  int second = -1;
};

// First scratch pair (tags +1, -1) with neither generator in `used`.
AuxPair free_pair(const ConfigPtr& cfg, Mask used);
// First scratch generator of tag -1 not in `used`; shifts a degree +1
// vector field to degree 0.
int free_shift(const ConfigPtr& cfg, Mask used);

inline Mask used_generators(const GradedScalar& s) {
  Mask m = 0;
  for (const auto& [k, v] : s.terms()) m |= k.mask;
  return m;
}
inline Mask used_generators(const Field& f) {
  Mask m = 0;
  for (const auto& [k, v] : f.terms()) m |= k.mask;
  return m;
}

// Left derivative by theta_k, applied slot-wise.
template <class S>
S left_derive_state(const S& s, int k) {
  S out = s;
  out.visit([&](Field& f, int) { f = left_derive(f, k); });
  return out;
}

namespace detail {

inline GradedScalar extract(const GradedScalar& v, AuxPair p) { return left_derive(left_derive(v, p.first), p.second); }
inline Field extract(const Field& v, AuxPair p) { return left_derive(left_derive(v, p.first), p.second); }
template <class S>
S extract(const S& v, AuxPair p) {
  return left_derive_state(left_derive_state(v, p.first), p.second);
}

inline GradedScalar difference(const GradedScalar& a, const GradedScalar& b, double scale) { return (a - b) * scale; }
inline Field difference(const Field& a, const Field& b, double scale) { return (a - b) * scale; }
template <class S>
S difference(const S& a, const S& b, double scale) {
  S out = a;
  axpy(out, -1.0, b);
  return bvbfv::scaled(out, scale);
}

}  // namespace detail

// D_X F at phi.  `extra_used` lists generators captured inside F that must
// not be reused as scratch.
template <class S, class Fn>
auto directional_derivative(Fn&& F, const S& phi, const S& x, DerivativeMode mode = DerivativeMode::Exact,
                            Mask extra_used = 0) {
  const ConfigPtr cfg = merge_configs(config_of(phi), config_of(x));
  if (mode == DerivativeMode::CentralDifference) {
    x.visit([](const Field& f, int) {
      if (!f.is_body_only()) {
        throw Error(ErrorKind::GradeMismatch, "central differences need a body-valued direction");
      }
    });
    const double h = 1e-6 * (1.0 + sup_norm(phi));
    S plus = phi, minus = phi;
    axpy(plus, h, x);
    axpy(minus, -h, x);
    return detail::difference(F(plus), F(minus), 0.5 / h);
  }
  if (!cfg) throw Error(ErrorKind::ConfigMismatch, "state carries no Grassmann configuration");
  const AuxPair p = free_pair(cfg, used_generators(phi) | used_generators(x) | extra_used);
  const GradedScalar t = gr_mul(GradedScalar::generator(cfg, p.first), GradedScalar::generator(cfg, p.second));
  S shifted = phi;
  add_scaled(shifted, t, x);
  return detail::extract(F(shifted), p);
}

template <class S>
using VectorField = std::function<S(const S&)>;

// [X, Y](phi) = D_X Y - D_Y X for degree-0 vector fields.
template <class S>
S bracket(const VectorField<S>& X, const VectorField<S>& Y, const S& phi) {
  const S xv = X(phi);
  const S yv = Y(phi);
  S out = directional_derivative(Y, phi, xv);
  axpy(out, -1.0, directional_derivative(X, phi, yv));
  return out;
}

// Vector field with the same value everywhere.
template <class S>
VectorField<S> constant_field(S v) {
  return [v = std::move(v)](const S&) { return v; };
}

}  // namespace bvbfv
