#include "bvbfv/mesh.hpp"

#include <cmath>
#include <numbers>

namespace bvbfv {

struct Mesh::Operator {
  int n = 0;
  std::vector<double> matrix;  // row-major n x n
};

namespace {

constexpr int kSchemes = 3;

int scheme_index(Scheme s) { return static_cast<int>(s); }

std::vector<double> spectral_matrix(int n, double length) {
  std::vector<double> m(static_cast<std::size_t>(n * n), 0.0);
  const double pi = std::numbers::pi;
  const double scale = 2.0 * pi / length;
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      if (i == j) continue;
      const int k = i - j;
      const double sgn = (k % 2 == 0) ? 1.0 : -1.0;
      const double arg = pi * k / n;
      const double v = (n % 2 == 0) ? 0.5 * sgn / std::tan(arg) : 0.5 * sgn / std::sin(arg);
      m[static_cast<std::size_t>(i * n + j)] = scale * v;
    }
  }
  return m;
}

std::vector<double> periodic_fd4_matrix(int n, double h) {
  std::vector<double> m(static_cast<std::size_t>(n * n), 0.0);
  const double c1 = 8.0 / (12.0 * h), c2 = 1.0 / (12.0 * h);
  auto at = [&](int i, int j) -> double& { return m[static_cast<std::size_t>(i * n + ((j % n) + n) % n)]; };
  for (int i = 0; i < n; ++i) {
    at(i, i + 1) += c1;
    at(i, i - 1) -= c1;
    at(i, i + 2) -= c2;
    at(i, i - 2) += c2;
  }
  return m;
}

std::vector<double> bounded_fd4_matrix(int n, double h) {
  std::vector<double> m(static_cast<std::size_t>(n * n), 0.0);
  auto row = [&](int i, int j0, std::initializer_list<double> c) {
    int j = j0;
    for (double v : c) m[static_cast<std::size_t>(i * n + j++)] = v / (12.0 * h);
  };
  row(0, 0, {-25.0, 48.0, -36.0, 16.0, -3.0});
  row(1, 0, {-3.0, -10.0, 18.0, -6.0, 1.0});
  for (int i = 2; i < n - 2; ++i) row(i, i - 2, {1.0, -8.0, 0.0, 8.0, -1.0});
  row(n - 2, n - 5, {-1.0, 6.0, -18.0, 10.0, 3.0});
  row(n - 1, n - 5, {3.0, -16.0, 36.0, -48.0, 25.0});
  return m;
}

std::vector<double> axis_weights(const Axis& ax) {
  const double h = ax.spacing();
  std::vector<double> w(static_cast<std::size_t>(ax.n), h);
  if (ax.periodic) return w;
  const double c[3] = {3.0 / 8.0, 7.0 / 6.0, 23.0 / 24.0};
  for (int i = 0; i < 3; ++i) {
    w[static_cast<std::size_t>(i)] = c[i] * h;
    w[static_cast<std::size_t>(ax.n - 1 - i)] = c[i] * h;
  }
  return w;
}

}  // namespace

Mesh::Mesh(std::vector<Axis> axes) : axes_(std::move(axes)) {
  if (axes_.empty()) throw Error(ErrorKind::DimensionUnsupported, "mesh needs at least one axis");
  strides_.assign(axes_.size(), 1);
  npts_ = 1;
  for (int a = rank() - 1; a >= 0; --a) {
    const Axis& ax = axes_[static_cast<std::size_t>(a)];
    if (ax.n < (ax.periodic ? 4 : 6)) {
      throw Error(ErrorKind::SchemaError, "too few points on axis " + std::to_string(a));
    }
    strides_[static_cast<std::size_t>(a)] = npts_;
    npts_ *= static_cast<std::size_t>(ax.n);
  }

  weights_.assign(npts_, 1.0);
  for (int a = 0; a < rank(); ++a) {
    const auto w = axis_weights(axis(a));
    for (std::size_t i = 0; i < npts_; ++i) {
      weights_[i] *= w[(i / stride(a)) % static_cast<std::size_t>(axis(a).n)];
    }
  }

  ops_.resize(axes_.size() * kSchemes);
  for (int a = 0; a < rank(); ++a) {
    const Axis& ax = axis(a);
    auto make = [&](std::vector<double> m) {
      auto o = std::make_shared<Operator>();
      o->n = ax.n;
      o->matrix = std::move(m);
      return std::shared_ptr<const Operator>(std::move(o));
    };
    auto slot = [&](Scheme s) -> auto& { return ops_[static_cast<std::size_t>(a * kSchemes + scheme_index(s))]; };
    if (ax.periodic) {
      slot(Scheme::Spectral) = make(spectral_matrix(ax.n, ax.length));
      slot(Scheme::FD4) = make(periodic_fd4_matrix(ax.n, ax.spacing()));
    } else {
      auto fd = make(bounded_fd4_matrix(ax.n, ax.spacing()));
      slot(Scheme::FD4) = fd;
      slot(Scheme::OneSided) = fd;
    }
  }
}

const Mesh::Operator& Mesh::op(int a, Scheme s) const {
  if (a < 0 || a >= rank()) throw Error(ErrorKind::SchemeUnsupported, "axis out of range");
  const auto& o = ops_[static_cast<std::size_t>(a * kSchemes + scheme_index(s))];
  if (!o) {
    throw Error(ErrorKind::SchemeUnsupported,
                axis(a).periodic ? "one-sided stencils only apply to bounded axes"
                                 : "spectral differentiation needs a periodic axis");
  }
  return *o;
}

std::vector<double> Mesh::coordinate(int a) const {
  std::vector<double> x(npts_);
  const Axis& ax = axis(a);
  for (std::size_t i = 0; i < npts_; ++i) {
    x[i] = ax.coordinate(static_cast<int>((i / stride(a)) % static_cast<std::size_t>(ax.n)));
  }
  return x;
}

std::vector<int> Mesh::unflatten(std::size_t idx) const {
  std::vector<int> out(axes_.size());
  for (int a = 0; a < rank(); ++a) {
    out[static_cast<std::size_t>(a)] = static_cast<int>((idx / stride(a)) % static_cast<std::size_t>(axis(a).n));
  }
  return out;
}

Field::Profile Mesh::derivative(const Field::Profile& f, int a, Scheme s) const {
  const Operator& o = op(a, s);
  const std::size_t n = static_cast<std::size_t>(o.n);
  const std::size_t st = stride(a);
  const std::size_t block = st * n;
  Field::Profile out(npts_, 0.0);
  std::vector<double> line(n);
  for (std::size_t base = 0; base < npts_; base += block) {
    for (std::size_t off = 0; off < st; ++off) {
      const std::size_t start = base + off;
      for (std::size_t j = 0; j < n; ++j) line[j] = f[start + j * st];
      for (std::size_t i = 0; i < n; ++i) {
        const double* row = &o.matrix[i * n];
        // differences against the centre make constants map to exactly zero
        double acc = 0.0;
        for (std::size_t j = 0; j < n; ++j) acc += row[j] * (line[j] - line[i]);
        out[start + i * st] = acc;
      }
    }
  }
  return out;
}

Field Mesh::derivative(const Field& f, int a, Scheme s) const {
  if (f.size() != npts_) throw Error(ErrorKind::GradeMismatch, "field does not live on this mesh");
  return f.map_profiles([&](const Field::Profile& p) { return derivative(p, a, s); });
}

GradedScalar Mesh::integrate(const Field& density) const {
  if (density.size() != npts_) throw Error(ErrorKind::GradeMismatch, "field does not live on this mesh");
  GradedScalar out(0.0, density.config());
  for (const auto& [k, v] : density.terms()) out.add_term(k, integrate(v));
  return out;
}

double Mesh::integrate(const Field::Profile& density) const {
  double s = 0.0;
  for (std::size_t i = 0; i < npts_; ++i) s += weights_[i] * density[i];
  return s;
}

Mesh Mesh::drop_axis(int a) const {
  std::vector<Axis> rest;
  for (int b = 0; b < rank(); ++b) {
    if (b != a) rest.push_back(axis(b));
  }
  return Mesh(std::move(rest));
}

Field::Profile Mesh::slice(const Field::Profile& f, int a, int k) const {
  const std::size_t st = stride(a);
  const std::size_t n = static_cast<std::size_t>(axis(a).n);
  Field::Profile out;
  out.reserve(npts_ / n);
  for (std::size_t base = 0; base < npts_; base += st * n) {
    for (std::size_t off = 0; off < st; ++off) out.push_back(f[base + static_cast<std::size_t>(k) * st + off]);
  }
  return out;
}

Field Mesh::slice(const Field& f, int a, int k) const {
  Field out(npts_ / static_cast<std::size_t>(axis(a).n), f.config());
  for (const auto& [key, v] : f.terms()) out.add_term(key, slice(v, a, k));
  out.prune();
  return out;
}

bool Mesh::operator==(const Mesh& o) const {
  if (axes_.size() != o.axes_.size()) return false;
  for (std::size_t i = 0; i < axes_.size(); ++i) {
    const Axis &x = axes_[i], &y = o.axes_[i];
    if (x.n != y.n || x.origin != y.origin || x.length != y.length || x.periodic != y.periodic) return false;
  }
  return true;
}

Mesh periodic_grid(int d, int n) { return periodic_grid(std::vector<int>(static_cast<std::size_t>(d), n)); }

Mesh periodic_grid(std::vector<int> n) {
  std::vector<Axis> axes;
  for (int ni : n) {
    if (ni < 8) throw Error(ErrorKind::SchemaError, "periodic grids need at least 8 points per axis");
    axes.push_back({ni, 0.0, 1.0, true});
  }
  return Mesh(std::move(axes));
}

BulkPatchGrid::BulkPatchGrid(Mesh boundary_mesh, int layers, double h_n)
    : boundary(std::move(boundary_mesh)), n_normal(layers), normal_spacing(h_n) {
  if (layers < 7) throw Error(ErrorKind::SchemaError, "bulk patch needs at least 7 normal layers");
  std::vector<Axis> axes{{layers, 0.0, h_n * (layers - 1), false}};
  for (const Axis& ax : boundary.axes()) axes.push_back(ax);
  bulk = Mesh(std::move(axes));
}

}  // namespace bvbfv
