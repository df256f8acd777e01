#pragma once

// Field multiplets.  A tangent vector of a state is represented by the same
// type with its components holding the variations; the scalars (eps, lambda,
// mesh) are then ignored.

#include <memory>

#include "bvbfv/tensor.hpp"

namespace bvbfv {

using MeshPtr = std::shared_ptr<const Mesh>;

// Degree-0 multiplet (eta, beta_a, gamma_ab, J_ab).  On a boundary grid
// axis_offset is 0 and J carries the normal jet; on a bulk patch axis 0 is
// the normal direction, axis_offset is 1 and J is recomputed from gamma.
struct ADMBlock {
  MeshPtr mesh;
  int axis_offset = 0;
  int eps = 1;
  double lambda = 0.0;

  Field eta;
  Vec beta;
  Sym gamma;
  Sym J;

  int d() const { return gamma.dim(); }
  std::size_t size() const { return eta.size(); }
  bool on_bulk() const { return axis_offset == 1; }
  Partial partial() const { return Partial{mesh.get(), axis_offset}; }

  template <class F>
  void visit(F&& f) {
    f(eta, 0);
    for (auto& b : beta) f(b, 0);
    for (auto& c : gamma.components()) f(c, 0);
    for (auto& c : J.components()) f(c, 0);
  }
  template <class F>
  void visit(F&& f) const {
    const_cast<ADMBlock*>(this)->visit([&](Field& x, int g) { f(static_cast<const Field&>(x), g); });
  }
};

// BV multiplet: ADM fields, ghosts xi^n, xi^a (grade 1), antifields
// g+^{nn}, g+^{an}, g+^{ab} (grade -1) and antighosts chi_n, chi_a (grade -2).
struct BVState {
  ADMBlock adm;
  Field xi_n;
  Vec xi;
  Field gd_nn;
  Vec gd_n;
  Sym gd;
  Field chi_n;
  Vec chi;

  int d() const { return adm.d(); }
  std::size_t size() const { return adm.size(); }

  template <class F>
  void visit(F&& f) {
    adm.visit(f);
    f(xi_n, 1);
    for (auto& x : xi) f(x, 1);
    f(gd_nn, -1);
    for (auto& x : gd_n) f(x, -1);
    for (auto& c : gd.components()) f(c, -1);
    f(chi_n, -2);
    for (auto& x : chi) f(x, -2);
  }
  template <class F>
  void visit(F&& f) const {
    const_cast<BVState*>(this)->visit([&](Field& x, int g) { f(static_cast<const Field&>(x), g); });
  }
};

// Restriction of a BVState to the boundary grid, with J supplied.
using PreBoundaryState = BVState;

// Reduced boundary fields.  The metric coordinate is the inverse metric
// gamma^{ab}, the one paired with Pi_ab in the symplectic form.
struct DarbouxState {
  MeshPtr mesh;
  int eps = 1;
  double lambda = 0.0;

  Sym gamma_up;
  Sym Pi;
  Field xi_n;
  Vec xi;
  Field phi_n;
  Vec phi;

  int d() const { return gamma_up.dim(); }
  std::size_t size() const { return xi_n.size(); }
  Partial partial() const { return Partial{mesh.get(), 0}; }

  template <class F>
  void visit(F&& f) {
    for (auto& c : gamma_up.components()) f(c, 0);
    for (auto& c : Pi.components()) f(c, 0);
    f(xi_n, 1);
    for (auto& x : xi) f(x, 1);
    f(phi_n, -1);
    for (auto& x : phi) f(x, -1);
  }
  template <class F>
  void visit(F&& f) const {
    const_cast<DarbouxState*>(this)->visit([&](Field& x, int g) { f(static_cast<const Field&>(x), g); });
  }
};

// ---- generic slot arithmetic ----

// Same layout as `s` with every component zero.
template <class S>
S zero_like(const S& s) {
  S out = s;
  out.visit([](Field& f, int) { f = Field(f.size(), f.config()); });
  return out;
}

// y += a * x, slot by slot.
template <class S>
void axpy(S& y, double a, const S& x) {
  std::vector<const Field*> xs;
  x.visit([&](const Field& f, int) { xs.push_back(&f); });
  std::size_t i = 0;
  y.visit([&](Field& f, int) { f.axpy(a, *xs[i++]); });
}

// y += g * x for a graded scalar coefficient g placed on the left.
template <class S>
void add_scaled(S& y, const GradedScalar& g, const S& x) {
  std::vector<const Field*> xs;
  x.visit([&](const Field& f, int) { xs.push_back(&f); });
  std::size_t i = 0;
  y.visit([&](Field& f, int) { f += g * *xs[i++]; });
}

template <class S>
S scaled(const S& x, double a) {
  S out = x;
  out.visit([&](Field& f, int) { f *= a; });
  return out;
}

// Largest sup-norm over all slots.
template <class S>
double sup_norm(const S& s) {
  double m = 0.0;
  s.visit([&](const Field& f, int) { m = std::max(m, f.max_abs()); });
  return m;
}

template <class S>
double max_abs_diff(const S& a, const S& b) {
  std::vector<const Field*> bs;
  b.visit([&](const Field& f, int) { bs.push_back(&f); });
  std::size_t i = 0;
  double m = 0.0;
  a.visit([&](const Field& f, int) { m = std::max(m, max_abs_diff(f, *bs[i++])); });
  return m;
}

// Union of the monomial masks used anywhere in the state.
template <class S>
Mask used_generators(const S& s) {
  Mask m = 0;
  s.visit([&](const Field& f, int) {
    for (const auto& [k, v] : f.terms()) m |= k.mask;
  });
  return m;
}

// Throws GradeMismatch if a slot holds a value of the wrong ghost number.
// `shift` is added to every slot grade (tangent vectors of degree k).
template <class S>
void require_grades(const S& s, int shift, const char* what) {
  s.visit([&](const Field& f, int g) { require_grade(f, g + shift, what); });
}

template <class S>
ConfigPtr config_of(const S& s) {
  ConfigPtr cfg;
  s.visit([&](const Field& f, int) { cfg = merge_configs(cfg, f.config()); });
  return cfg;
}

}  // namespace bvbfv
