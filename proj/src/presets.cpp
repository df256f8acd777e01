#include "bvbfv/presets.hpp"

#include "bvbfv/adm.hpp"

#include <cmath>
#include <numbers>

namespace bvbfv {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

std::size_t idx(int a) { return static_cast<std::size_t>(a); }

Field constant_field(std::size_t n, double c, const ConfigPtr& cfg) { return Field::constant(n, c, cfg); }

Field body_field(Field::Profile p, const ConfigPtr& cfg, int ghost = 0) {
  return Field::from_profile(std::move(p), cfg, ghost);
}

void check_offset(const Mesh& mesh, int axis_offset) {
  if (axis_offset != 0 && axis_offset != 1) throw Error(ErrorKind::SchemaError, "axis offset must be 0 or 1");
  if (mesh.rank() - axis_offset < 1) throw Error(ErrorKind::DimensionUnsupported, "mesh has no boundary axes");
}

std::vector<int> generators_with_tag(const ConfigPtr& cfg, int tag) {
  std::vector<int> out;
  for (int k = 0; k < cfg->aux_begin; ++k) {
    if (cfg->tag(k) == tag) out.push_back(k);
  }
  return out;
}

// sum_k theta_k f_k(x) over the generators of the given tag.
Field odd_random(const Mesh& mesh, const ConfigPtr& cfg, int tag, std::mt19937_64& rng, double amp, bool constant,
                 int modes = 2) {
  Field f(mesh.size(), cfg);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int k : generators_with_tag(cfg, tag)) {
    Field::Profile p =
        constant ? Field::Profile(mesh.size(), amp * u(rng)) : smooth_random_profile(mesh, rng, amp, modes);
    f += Field::odd(cfg, k, std::move(p));
  }
  return f;
}

Field even_random(const Mesh& mesh, const ConfigPtr& cfg, int ghost, std::mt19937_64& rng, double amp, bool constant,
                  int modes = 2) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  Field::Profile p =
      constant ? Field::Profile(mesh.size(), amp * u(rng)) : smooth_random_profile(mesh, rng, amp, modes);
  return body_field(std::move(p), cfg, ghost);
}

Field random_slot(const Mesh& mesh, const ConfigPtr& cfg, int grade, std::mt19937_64& rng, double amp, bool constant) {
  if (grade % 2 != 0) return odd_random(mesh, cfg, grade > 0 ? 1 : -1, rng, amp, constant);
  return even_random(mesh, cfg, grade, rng, amp, constant);
}

}  // namespace

Field::Profile smooth_random_profile(const Mesh& mesh, std::mt19937_64& rng, double amplitude, int modes) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::uniform_real_distribution<double> phase(0.0, kTwoPi);
  std::uniform_int_distribution<int> wave(0, std::max(modes, 0));
  Field::Profile out(mesh.size(), 0.0);
  std::vector<Field::Profile> coords;
  for (int a = 0; a < mesh.rank(); ++a) coords.push_back(mesh.coordinate(a));
  const int terms = 3;
  for (int t = 0; t < terms; ++t) {
    const double c = amplitude * u(rng) / terms;
    std::vector<double> freq(idx(mesh.rank())), ph(idx(mesh.rank()));
    for (int a = 0; a < mesh.rank(); ++a) {
      const Axis& ax = mesh.axis(a);
      freq[idx(a)] = ax.periodic ? kTwoPi * wave(rng) / ax.length : 0.5 * std::numbers::pi * (u(rng) + 1.0);
      ph[idx(a)] = phase(rng);
    }
    for (std::size_t i = 0; i < out.size(); ++i) {
      double v = c;
      for (int a = 0; a < mesh.rank(); ++a) {
        v *= std::cos(freq[idx(a)] * (coords[idx(a)][i] - mesh.axis(a).origin) + ph[idx(a)]);
      }
      out[i] += v;
    }
  }
  return out;
}

Field boundary_slice(const Mesh& bulk, const Field& f) { return bulk.slice(f, 0, 0); }

ADMBlock preset_flat(MeshPtr mesh, int axis_offset, ConfigPtr cfg, int eps, double lambda) {
  check_offset(*mesh, axis_offset);
  const int d = mesh->rank() - axis_offset;
  const std::size_t n = mesh->size();
  ADMBlock adm;
  adm.mesh = mesh;
  adm.axis_offset = axis_offset;
  adm.eps = eps;
  adm.lambda = lambda;
  adm.eta = constant_field(n, 1.0, cfg);
  adm.beta.assign(idx(d), Field(n, cfg));
  adm.gamma = Sym::identity(d, n, 1.0, cfg);
  if (axis_offset == 0) adm.J = Sym(d, n, cfg);
  return adm;
}

Field::Profile conformal2d_phi(const Mesh& mesh, double amp) {
  const auto x = mesh.coordinate(0), y = mesh.coordinate(1);
  Field::Profile phi(mesh.size());
  for (std::size_t i = 0; i < phi.size(); ++i) {
    phi[i] = amp * std::sin(kTwoPi * x[i]) * std::cos(kTwoPi * y[i]) + 0.5 * amp * std::cos(kTwoPi * x[i]);
  }
  return phi;
}

ADMBlock preset_conformal2d(MeshPtr mesh, ConfigPtr cfg, double amp) {
  if (mesh->rank() != 2) throw Error(ErrorKind::DimensionUnsupported, "conformal2d needs a 2d boundary grid");
  ADMBlock adm = preset_flat(mesh, 0, cfg);
  Field::Profile e2phi = conformal2d_phi(*mesh, amp);
  for (double& v : e2phi) v = std::exp(2.0 * v);
  adm.gamma(0, 0) = body_field(e2phi, cfg);
  adm.gamma(1, 1) = body_field(e2phi, cfg);
  return adm;
}

MeshPtr schwarzschild_mesh(double lo, double hi, int n) {
  std::vector<Axis> axes(3, Axis{n, lo, hi - lo, false});
  return std::make_shared<const Mesh>(std::move(axes));
}

ADMBlock preset_schwarzschild(MeshPtr box, ConfigPtr cfg, double mass) {
  if (box->rank() != 3) throw Error(ErrorKind::DimensionUnsupported, "the Schwarzschild slice needs d = 3");
  ADMBlock adm = preset_flat(box, 0, cfg);
  const auto x = box->coordinate(0), y = box->coordinate(1), z = box->coordinate(2);
  Field::Profile psi4(box->size());
  for (std::size_t i = 0; i < psi4.size(); ++i) {
    const double r = std::sqrt(x[i] * x[i] + y[i] * y[i] + z[i] * z[i]);
    if (!(r > 0.0) || mass / (2.0 * r) > 1e6) throw Error(ErrorKind::SingularMetric, "patch touches r = 0");
    psi4[i] = std::pow(1.0 + mass / (2.0 * r), 4);
  }
  for (int a = 0; a < 3; ++a) adm.gamma(a, a) = body_field(psi4, cfg);
  return adm;
}

ADMBlock preset_flrw(MeshPtr bulk, ConfigPtr cfg, double amp) {
  ADMBlock adm = preset_flat(bulk, 1, cfg);
  const auto t = bulk->coordinate(0);
  Field::Profile a2(bulk->size());
  for (std::size_t i = 0; i < a2.size(); ++i) {
    const double a = 1.0 + amp * std::sin(kTwoPi * t[i]);
    a2[i] = a * a;
  }
  for (int a = 0; a < adm.d(); ++a) adm.gamma(a, a) = body_field(a2, cfg);
  return adm;
}

Field::Profile flrw_ricci_scalar(const Mesh& bulk, int d, double amp) {
  const auto t = bulk.coordinate(0);
  Field::Profile R(bulk.size());
  for (std::size_t i = 0; i < R.size(); ++i) {
    const double a = 1.0 + amp * std::sin(kTwoPi * t[i]);
    const double da = amp * kTwoPi * std::cos(kTwoPi * t[i]);
    const double dda = -amp * kTwoPi * kTwoPi * std::sin(kTwoPi * t[i]);
    R[i] = 2.0 * d * dda / a + d * (d - 1.0) * da * da / (a * a);
  }
  return R;
}

ADMBlock preset_random_smooth(MeshPtr mesh, int axis_offset, ConfigPtr cfg, std::uint64_t seed, double amplitude,
                              int eps, double lambda, int modes) {
  ADMBlock adm = preset_flat(mesh, axis_offset, cfg, eps, lambda);
  std::mt19937_64 rng(seed);
  const int d = adm.d();
  adm.eta += body_field(smooth_random_profile(*mesh, rng, amplitude, modes), cfg);
  for (int a = 0; a < d; ++a) adm.beta[idx(a)] = body_field(smooth_random_profile(*mesh, rng, amplitude, modes), cfg);
  for (auto& c : adm.gamma.components()) c += body_field(smooth_random_profile(*mesh, rng, amplitude, modes), cfg);
  for (auto& c : adm.J.components()) c = body_field(smooth_random_profile(*mesh, rng, amplitude, modes), cfg);
  return adm;
}

BVState bv_from_adm(ADMBlock adm) {
  const int d = adm.d();
  const std::size_t n = adm.size();
  const ConfigPtr cfg = adm.eta.config();
  BVState s;
  s.adm = std::move(adm);
  s.xi_n = Field(n, cfg);
  s.xi.assign(idx(d), Field(n, cfg));
  s.gd_nn = Field(n, cfg);
  s.gd_n.assign(idx(d), Field(n, cfg));
  s.gd = Sym(d, n, cfg);
  s.chi_n = Field(n, cfg);
  s.chi.assign(idx(d), Field(n, cfg));
  return s;
}

BVState preset_random_bv(MeshPtr mesh, int axis_offset, ConfigPtr cfg, std::uint64_t seed, double amplitude, int eps,
                         double lambda, int modes) {
  BVState s = bv_from_adm(preset_random_smooth(mesh, axis_offset, cfg, seed, amplitude, eps, lambda, modes));
  std::mt19937_64 rng(seed ^ 0x9e3779b97f4a7c15ULL);
  const Mesh& m = *mesh;
  s.xi_n = odd_random(m, cfg, 1, rng, 1.0, false, modes);
  for (auto& x : s.xi) x = odd_random(m, cfg, 1, rng, 1.0, false, modes);
  s.gd_nn = odd_random(m, cfg, -1, rng, 1.0, false, modes);
  for (auto& x : s.gd_n) x = odd_random(m, cfg, -1, rng, 1.0, false, modes);
  for (auto& c : s.gd.components()) c = odd_random(m, cfg, -1, rng, 1.0, false, modes);
  s.chi_n = even_random(m, cfg, -2, rng, 1.0, false, modes);
  for (auto& x : s.chi) x = even_random(m, cfg, -2, rng, 1.0, false, modes);
  return s;
}

DarbouxState preset_random_darboux(MeshPtr mesh, ConfigPtr cfg, std::uint64_t seed, double amplitude, int eps,
                                   double lambda, int modes) {
  check_offset(*mesh, 0);
  const int d = mesh->rank();
  const std::size_t n = mesh->size();
  std::mt19937_64 rng(seed);
  DarbouxState ds;
  ds.mesh = mesh;
  ds.eps = eps;
  ds.lambda = lambda;
  ds.gamma_up = Sym::identity(d, n, 1.0, cfg);
  for (auto& c : ds.gamma_up.components()) c += body_field(smooth_random_profile(*mesh, rng, amplitude, modes), cfg);
  ds.Pi = Sym(d, n, cfg);
  for (auto& c : ds.Pi.components()) c = body_field(smooth_random_profile(*mesh, rng, 1.0, modes), cfg);
  ds.xi_n = odd_random(*mesh, cfg, 1, rng, 1.0, false, modes);
  ds.xi.assign(idx(d), Field(n, cfg));
  for (auto& x : ds.xi) x = odd_random(*mesh, cfg, 1, rng, 1.0, false, modes);
  ds.phi_n = odd_random(*mesh, cfg, -1, rng, 1.0, false, modes);
  ds.phi.assign(idx(d), Field(n, cfg));
  for (auto& x : ds.phi) x = odd_random(*mesh, cfg, -1, rng, 1.0, false, modes);
  return ds;
}

PreBoundaryState restrict_to_boundary(const BVState& bulk, MeshPtr boundary) {
  if (!bulk.adm.on_bulk()) throw Error(ErrorKind::MissingJets, "restriction needs a bulk state");
  const Mesh& bm = *bulk.adm.mesh;
  BVState out = bulk;
  out.adm.J = Sym();
  out.visit([&](Field& f, int) { f = boundary_slice(bm, f); });
  Sym J = normal_jet(bulk.adm);
  out.adm.J = Sym(bulk.d(), boundary->size());
  for (std::size_t i = 0; i < J.components().size(); ++i) {
    out.adm.J.components()[i] = boundary_slice(bm, J.components()[i]);
  }
  out.adm.mesh = std::move(boundary);
  out.adm.axis_offset = 0;
  return out;
}

template <class S>
S random_direction(const S& like, const Mesh& mesh, std::mt19937_64& rng, double amplitude, bool constant) {
  const ConfigPtr cfg = config_of(like);
  S out = like;
  out.visit([&](Field& f, int g) { f = random_slot(mesh, cfg, g, rng, amplitude, constant); });
  return out;
}

template BVState random_direction(const BVState&, const Mesh&, std::mt19937_64&, double, bool);
template ADMBlock random_direction(const ADMBlock&, const Mesh&, std::mt19937_64&, double, bool);
template DarbouxState random_direction(const DarbouxState&, const Mesh&, std::mt19937_64&, double, bool);

std::vector<std::string> preset_names() {
  return {"flat", "conformal2d", "schwarzschild_isotropic", "flrw", "random_smooth", "random_bv"};
}

}  // namespace bvbfv
