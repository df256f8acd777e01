#pragma once

// Structured meshes: products of periodic and bounded axes.
//
// Points are stored row-major with axis 0 slowest.  Periodic axes cover
// [origin, origin + length) with spacing length / n; bounded axes cover
// [origin, origin + length] with spacing length / (n - 1).

#include <cstddef>
#include <memory>
#include <vector>

#include "bvbfv/field.hpp"

namespace bvbfv {

enum class Scheme { Spectral, FD4, OneSided };

struct Axis {
  int n = 8;
  double origin = 0.0;
  double length = 1.0;
  bool periodic = true;

  double spacing() const { return periodic ? length / n : length / (n - 1); }
  double coordinate(int i) const { return origin + i * spacing(); }
};

class Mesh {
 public:
  Mesh() = default;
  explicit Mesh(std::vector<Axis> axes);

  int rank() const { return static_cast<int>(axes_.size()); }
  const Axis& axis(int a) const { return axes_.at(static_cast<std::size_t>(a)); }
  const std::vector<Axis>& axes() const { return axes_; }
  std::size_t size() const { return npts_; }
  std::size_t stride(int a) const { return strides_.at(static_cast<std::size_t>(a)); }

  // Coordinate of every point along axis a.
  std::vector<double> coordinate(int a) const;
  // Multi-index of a flat point index.
  std::vector<int> unflatten(std::size_t idx) const;

  // Default scheme: spectral on periodic axes, 4th-order stencils otherwise.
  Scheme default_scheme(int a) const { return axis(a).periodic ? Scheme::Spectral : Scheme::OneSided; }

  Field::Profile derivative(const Field::Profile& f, int a, Scheme s) const;
  Field::Profile derivative(const Field::Profile& f, int a) const { return derivative(f, a, default_scheme(a)); }

  Field derivative(const Field& f, int a, Scheme s) const;
  Field derivative(const Field& f, int a) const { return derivative(f, a, default_scheme(a)); }

  // Quadrature weights (product rule; trapezoid on periodic axes, 4th-order
  // Gregory end corrections on bounded axes).
  const std::vector<double>& weights() const { return weights_; }
  GradedScalar integrate(const Field& density) const;
  double integrate(const Field::Profile& density) const;

  // Mesh with axis a removed, and the slice of a field at index k along a.
  Mesh drop_axis(int a) const;
  Field slice(const Field& f, int a, int k) const;
  Field::Profile slice(const Field::Profile& f, int a, int k) const;

  bool operator==(const Mesh& o) const;

 private:
  struct Operator;
  const Operator& op(int a, Scheme s) const;

  std::vector<Axis> axes_;
  std::vector<std::size_t> strides_;
  std::size_t npts_ = 0;
  std::vector<double> weights_;
  mutable std::vector<std::shared_ptr<const Operator>> ops_;
};

// Boundary torus T^d with n points per axis.
Mesh periodic_grid(int d, int n);
Mesh periodic_grid(std::vector<int> n);

// Thin patch [0, h_n (n_normal - 1)] x T^d, axis 0 normal; layer 0 is the boundary.
struct BulkPatchGrid {
  Mesh boundary;
  Mesh bulk;
  int n_normal = 9;
  double normal_spacing = 0.02;

  BulkPatchGrid() = default;
  BulkPatchGrid(Mesh boundary_mesh, int layers, double h_n);
  int d() const { return boundary.rank(); }
};

}  // namespace bvbfv
