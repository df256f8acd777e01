#pragma once

// Small dense tensors of fields: covectors and symmetric 2-tensors, plus the
// metric algebra needed by the geometry modules.  Everything is written over
// Field so that Grassmann-valued (nilpotent) perturbations pass through exactly.

#include <functional>
#include <vector>

#include "bvbfv/field.hpp"
#include "bvbfv/mesh.hpp"

namespace bvbfv {

inline int sym_size(int d) { return d * (d + 1) / 2; }

inline int sym_index(int a, int b, int d) {
  if (a > b) std::swap(a, b);
  return a * d - a * (a - 1) / 2 + (b - a);
}

using Vec = std::vector<Field>;

// Symmetric rank-2 tensor, upper triangle stored.
class Sym {
 public:
  Sym() = default;
  Sym(int d, std::size_t npts, ConfigPtr cfg = nullptr);

  static Sym identity(int d, std::size_t npts, double scale = 1.0, ConfigPtr cfg = nullptr);

  int dim() const { return d_; }
  std::size_t size() const { return c_.empty() ? 0 : c_.front().size(); }

  Field& operator()(int a, int b) { return c_[static_cast<std::size_t>(sym_index(a, b, d_))]; }
  const Field& operator()(int a, int b) const { return c_[static_cast<std::size_t>(sym_index(a, b, d_))]; }

  std::vector<Field>& components() { return c_; }
  const std::vector<Field>& components() const { return c_; }

  Sym& operator+=(const Sym& o);
  Sym& operator-=(const Sym& o);
  Sym& operator*=(double s);
  friend Sym operator+(Sym a, const Sym& b) { return a += b; }
  friend Sym operator-(Sym a, const Sym& b) { return a -= b; }
  friend Sym operator*(Sym a, double s) { return a *= s; }
  friend Sym operator*(double s, Sym a) { return a *= s; }

  double max_abs() const;

 private:
  int d_ = 0;
  std::vector<Field> c_;
};

Sym operator*(const Field& f, const Sym& s);

// Index-based partial derivative: i runs over the tensor indices, mapped onto
// mesh axes by an offset (1 for boundary indices on a bulk patch).
struct Partial {
  const Mesh* mesh = nullptr;
  int axis_offset = 0;
  Field operator()(const Field& f, int i) const { return mesh->derivative(f, i + axis_offset); }
};

Field det(const Sym& g);
// Inverse through the adjugate; throws SingularMetric if the body of the
// determinant vanishes anywhere.
Sym inverse(const Sym& g);
// Inverse when det(g) is already known.
Sym inverse(const Sym& g, const Field& detg);

Field trace(const Sym& ginv, const Sym& t);
// t^{ab} = ginv^{ac} ginv^{bd} t_cd
Sym raise(const Sym& ginv, const Sym& t);
Vec raise(const Sym& ginv, const Vec& v);
Vec lower(const Sym& g, const Vec& v);
// sum_{ab} s^{ab} t_ab
Field contract(const Sym& s, const Sym& t);
Field dot(const Vec& a, const Vec& b);

// Christoffel symbols of the first kind G_{c,ab} = (d_a g_cb + d_b g_ca - d_c g_ab)/2,
// laid out as [c][sym(a,b)].
std::vector<Sym> christoffel_first(const Sym& g, const Partial& d);
// Second kind: Gamma^c_{ab}, laid out as [c][sym(a,b)].
std::vector<Sym> christoffel(const Sym& ginv, const std::vector<Sym>& first);
std::vector<Sym> christoffel(const Sym& g, const Sym& ginv, const Partial& d);

// Ricci scalar from Christoffels:
// R = g^{ab}(d_c G^c_ab - d_b G^c_ac + G^c_cd G^d_ab - G^c_bd G^d_ac).
Field ricci_scalar(const Sym& g, const Sym& ginv, const Partial& d);
Sym ricci_tensor(const Sym& g, const Sym& ginv, const Partial& d);

// 2 nabla_(a v_b) = d_a v_b + d_b v_a - 2 Gamma^c_ab v_c
Sym sym_covariant_derivative(const Vec& v, const std::vector<Sym>& gamma2, const Partial& d);

}  // namespace bvbfv
