#include "bvbfv/tensor.hpp"

#include <algorithm>
#include <cmath>

namespace bvbfv {

Sym::Sym(int d, std::size_t npts, ConfigPtr cfg) : d_(d) {
  c_.assign(static_cast<std::size_t>(sym_size(d)), Field(npts, cfg));
}

Sym Sym::identity(int d, std::size_t npts, double scale, ConfigPtr cfg) {
  Sym s(d, npts, cfg);
  for (int a = 0; a < d; ++a) s(a, a) = Field::constant(npts, scale, cfg);
  return s;
}

Sym& Sym::operator+=(const Sym& o) {
  for (std::size_t i = 0; i < c_.size(); ++i) c_[i] += o.c_[i];
  return *this;
}

Sym& Sym::operator-=(const Sym& o) {
  for (std::size_t i = 0; i < c_.size(); ++i) c_[i] -= o.c_[i];
  return *this;
}

Sym& Sym::operator*=(double s) {
  for (auto& f : c_) f *= s;
  return *this;
}

double Sym::max_abs() const {
  double m = 0.0;
  for (const auto& f : c_) m = std::max(m, f.max_abs());
  return m;
}

Sym operator*(const Field& f, const Sym& s) {
  Sym out = s;
  for (auto& c : out.components()) c = f * c;
  return out;
}

namespace {

using Matrix = std::vector<std::vector<const Field*>>;

Field det_rec(const Matrix& m, std::size_t npts, const ConfigPtr& cfg) {
  const std::size_t n = m.size();
  if (n == 1) return *m[0][0];
  if (n == 2) return (*m[0][0]) * (*m[1][1]) - (*m[0][1]) * (*m[1][0]);
  Field out(npts, cfg);
  for (std::size_t j = 0; j < n; ++j) {
    if (m[0][j]->is_zero()) continue;
    Matrix minor;
    for (std::size_t i = 1; i < n; ++i) {
      std::vector<const Field*> row;
      for (std::size_t k = 0; k < n; ++k) {
        if (k != j) row.push_back(m[i][k]);
      }
      minor.push_back(std::move(row));
    }
    Field term = (*m[0][j]) * det_rec(minor, npts, cfg);
    out.axpy((j % 2 == 0) ? 1.0 : -1.0, term);
  }
  return out;
}

Matrix full(const Sym& g) {
  const int d = g.dim();
  Matrix m(static_cast<std::size_t>(d), std::vector<const Field*>(static_cast<std::size_t>(d)));
  for (int a = 0; a < d; ++a) {
    for (int b = 0; b < d; ++b) m[static_cast<std::size_t>(a)][static_cast<std::size_t>(b)] = &g(a, b);
  }
  return m;
}

ConfigPtr config_of(const Sym& g) {
  ConfigPtr cfg;
  for (const auto& c : g.components()) cfg = merge_configs(cfg, c.config());
  return cfg;
}

}  // namespace

Field det(const Sym& g) { return det_rec(full(g), g.size(), config_of(g)); }

Sym inverse(const Sym& g) { return inverse(g, det(g)); }

Sym inverse(const Sym& g, const Field& detg) {
  const int d = g.dim();
  const std::size_t npts = g.size();
  const ConfigPtr cfg = config_of(g);
  Field::Profile body = detg.body();
  for (double v : body) {
    if (v == 0.0 || !std::isfinite(v)) throw Error(ErrorKind::SingularMetric, "metric determinant vanishes");
  }
  // 1/det for either sign of the body
  double sign = body.front() > 0 ? 1.0 : -1.0;
  for (double v : body) {
    if (v * sign <= 0.0) throw Error(ErrorKind::SingularMetric, "metric determinant changes sign");
  }
  const Field inv_det = inverse(detg * sign) * sign;
  Sym out(d, npts, cfg);
  if (d == 1) {
    out(0, 0) = inv_det;
    return out;
  }
  const Matrix m = full(g);
  for (int a = 0; a < d; ++a) {
    for (int b = a; b < d; ++b) {
      // cofactor of entry (b, a)
      Matrix minor;
      for (int i = 0; i < d; ++i) {
        if (i == b) continue;
        std::vector<const Field*> row;
        for (int k = 0; k < d; ++k) {
          if (k != a) row.push_back(m[static_cast<std::size_t>(i)][static_cast<std::size_t>(k)]);
        }
        minor.push_back(std::move(row));
      }
      const double s = ((a + b) % 2 == 0) ? 1.0 : -1.0;
      out(a, b) = det_rec(minor, npts, cfg) * inv_det * s;
    }
  }
  return out;
}

Field contract(const Sym& s, const Sym& t) {
  const int d = s.dim();
  Field out(s.size());
  for (int a = 0; a < d; ++a) {
    for (int b = 0; b < d; ++b) out += s(a, b) * t(a, b);
  }
  return out;
}

Field trace(const Sym& ginv, const Sym& t) { return contract(ginv, t); }

Sym raise(const Sym& ginv, const Sym& t) {
  const int d = t.dim();
  // first raise one index: m^a_d = ginv^{ac} t_cd (not symmetric)
  std::vector<Field> mixed(static_cast<std::size_t>(d * d), Field(t.size()));
  for (int a = 0; a < d; ++a) {
    for (int e = 0; e < d; ++e) {
      Field acc(t.size());
      for (int c = 0; c < d; ++c) acc += ginv(a, c) * t(c, e);
      mixed[static_cast<std::size_t>(a * d + e)] = std::move(acc);
    }
  }
  Sym out(d, t.size());
  for (int a = 0; a < d; ++a) {
    for (int b = a; b < d; ++b) {
      Field acc(t.size());
      for (int e = 0; e < d; ++e) acc += mixed[static_cast<std::size_t>(a * d + e)] * ginv(e, b);
      out(a, b) = std::move(acc);
    }
  }
  return out;
}

Vec raise(const Sym& ginv, const Vec& v) {
  const int d = ginv.dim();
  Vec out(static_cast<std::size_t>(d), Field(ginv.size()));
  for (int a = 0; a < d; ++a) {
    for (int b = 0; b < d; ++b) out[static_cast<std::size_t>(a)] += ginv(a, b) * v[static_cast<std::size_t>(b)];
  }
  return out;
}

Vec lower(const Sym& g, const Vec& v) { return raise(g, v); }

Field dot(const Vec& a, const Vec& b) {
  Field out(a.front().size());
  for (std::size_t i = 0; i < a.size(); ++i) out += a[i] * b[i];
  return out;
}

std::vector<Sym> christoffel_first(const Sym& g, const Partial& d) {
  const int n = g.dim();
  const std::size_t npts = g.size();
  // dg[c][sym(a,b)] = d_c g_ab
  std::vector<Sym> dg(static_cast<std::size_t>(n), Sym(n, npts));
  for (int c = 0; c < n; ++c) {
    for (int a = 0; a < n; ++a) {
      for (int b = a; b < n; ++b) dg[static_cast<std::size_t>(c)](a, b) = d(g(a, b), c);
    }
  }
  std::vector<Sym> out(static_cast<std::size_t>(n), Sym(n, npts));
  for (int c = 0; c < n; ++c) {
    for (int a = 0; a < n; ++a) {
      for (int b = a; b < n; ++b) {
        Field v = dg[static_cast<std::size_t>(a)](c, b) + dg[static_cast<std::size_t>(b)](c, a) -
                  dg[static_cast<std::size_t>(c)](a, b);
        out[static_cast<std::size_t>(c)](a, b) = v * 0.5;
      }
    }
  }
  return out;
}

std::vector<Sym> christoffel(const Sym& ginv, const std::vector<Sym>& first) {
  const int n = ginv.dim();
  std::vector<Sym> out(static_cast<std::size_t>(n), Sym(n, ginv.size()));
  for (int c = 0; c < n; ++c) {
    for (int a = 0; a < n; ++a) {
      for (int b = a; b < n; ++b) {
        Field acc(ginv.size());
        for (int e = 0; e < n; ++e) acc += ginv(c, e) * first[static_cast<std::size_t>(e)](a, b);
        out[static_cast<std::size_t>(c)](a, b) = std::move(acc);
      }
    }
  }
  return out;
}

std::vector<Sym> christoffel(const Sym& g, const Sym& ginv, const Partial& d) {
  return christoffel(ginv, christoffel_first(g, d));
}

Sym ricci_tensor(const Sym& g, const Sym& ginv, const Partial& d) {
  const int n = g.dim();
  const std::size_t npts = g.size();
  const auto G = christoffel(g, ginv, d);
  auto Gm = [&](int c, int a, int b) -> const Field& { return G[static_cast<std::size_t>(c)](a, b); };
  // contracted Gamma^c_{ca}
  Vec tr(static_cast<std::size_t>(n), Field(npts));
  for (int a = 0; a < n; ++a) {
    for (int c = 0; c < n; ++c) tr[static_cast<std::size_t>(a)] += Gm(c, c, a);
  }
  Sym out(n, npts);
  for (int a = 0; a < n; ++a) {
    for (int b = a; b < n; ++b) {
      Field r(npts);
      for (int c = 0; c < n; ++c) r += d(Gm(c, a, b), c);
      r -= d(tr[static_cast<std::size_t>(a)], b);
      for (int c = 0; c < n; ++c) {
        r += tr[static_cast<std::size_t>(c)] * Gm(c, a, b);
        for (int e = 0; e < n; ++e) r -= Gm(c, b, e) * Gm(e, a, c);
      }
      out(a, b) = std::move(r);
    }
  }
  return out;
}

Field ricci_scalar(const Sym& g, const Sym& ginv, const Partial& d) { return contract(ginv, ricci_tensor(g, ginv, d)); }

Sym sym_covariant_derivative(const Vec& v, const std::vector<Sym>& gamma2, const Partial& d) {
  const int n = static_cast<int>(v.size());
  const std::size_t npts = v.front().size();
  Sym out(n, npts);
  for (int a = 0; a < n; ++a) {
    for (int b = a; b < n; ++b) {
      Field t = d(v[static_cast<std::size_t>(b)], a) + d(v[static_cast<std::size_t>(a)], b);
      for (int c = 0; c < n; ++c) {
        const auto uc = static_cast<std::size_t>(c);
        t -= (gamma2[uc](a, b) * v[uc]) * 2.0;
      }
      out(a, b) = std::move(t);
    }
  }
  return out;
}

}  // namespace bvbfv
