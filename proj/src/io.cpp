#include "bvbfv/io.hpp"

#include <bit>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "bvbfv/adm.hpp"

namespace bvbfv {

namespace {

using nlohmann::json;

[[noreturn]] void schema(const std::string& what) { throw Error(ErrorKind::SchemaError, what); }

template <class T>
T get(const json& j, const char* key, T fallback) {
  if (!j.contains(key)) return fallback;
  try {
    return j.at(key).get<T>();
  } catch (const json::exception&) {
    schema(std::string("bad value for '") + key + "'");
  }
}

const std::map<std::string, std::set<std::string>>& preset_params() {
  static const std::map<std::string, std::set<std::string>> p = {
      {"flat", {}},
      {"conformal2d", {"amp"}},
      {"schwarzschild_isotropic", {"mass", "lo", "hi"}},
      {"flrw", {"amp"}},
      {"random_smooth", {"amplitude", "modes"}},
      {"random_bv", {"amplitude", "modes"}},
  };
  return p;
}

double param(const PresetSpec& p, const char* key, double fallback) {
  auto it = p.params.find(key);
  return it == p.params.end() ? fallback : it->second;
}

}  // namespace

Scenario parse_scenario(std::string_view text, const std::string& base_dir) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    schema(std::string("scenario is not valid JSON: ") + e.what());
  }
  if (!j.is_object()) schema("scenario must be a JSON object");
  static const std::set<std::string> keys = {"d",      "grid",       "layers", "normal_spacing", "eps",    "lambda",
                                             "generators", "seed", "preset", "archive"};
  for (const auto& [k, v] : j.items())
    if (!keys.count(k)) schema("unknown scenario key '" + k + "'");

  Scenario sc;
  sc.d = get(j, "d", sc.d);
  sc.grid = get(j, "grid", sc.grid);
  sc.layers = get(j, "layers", sc.layers);
  sc.normal_spacing = get(j, "normal_spacing", sc.normal_spacing);
  sc.eps = get(j, "eps", sc.eps);
  sc.lambda = get(j, "lambda", sc.lambda);
  sc.generators = get(j, "generators", sc.generators);
  sc.seed = get<std::uint64_t>(j, "seed", sc.seed);

  if (sc.d == 1 || sc.d < 1 || sc.d > 3) throw Error(ErrorKind::DimensionUnsupported, "d must be 2 or 3");
  if (sc.eps != 1 && sc.eps != -1) schema("eps must be +1 or -1");
  if (sc.grid < 8) schema("grid must be at least 8");
  if (sc.layers != 0 && sc.layers < 7) schema("bulk patches need at least 7 layers");
  if (!(sc.normal_spacing > 0.0)) schema("normal_spacing must be positive");
  config_for_generators(sc.generators);

  const bool has_preset = j.contains("preset"), has_archive = j.contains("archive");
  if (has_preset == has_archive) schema("exactly one of 'preset' and 'archive' is required");
  if (has_archive) {
    const auto a = get<std::string>(j, "archive", "");
    if (a.empty()) schema("empty archive path");
    const std::filesystem::path p(a);
    sc.archive = p.is_absolute() || base_dir.empty() ? a : (std::filesystem::path(base_dir) / p).string();
    return sc;
  }

  PresetSpec ps;
  const json& pj = j.at("preset");
  if (pj.is_string()) {
    ps.name = pj.get<std::string>();
  } else if (pj.is_object()) {
    ps.name = get<std::string>(pj, "name", "");
    for (const auto& [k, v] : pj.items()) {
      if (k == "name") continue;
      if (!v.is_number()) schema("preset parameter '" + k + "' must be a number");
      ps.params[k] = v.get<double>();
    }
  } else {
    schema("'preset' must be a name or an object");
  }
  auto known = preset_params().find(ps.name);
  if (known == preset_params().end()) schema("unknown preset '" + ps.name + "'");
  for (const auto& [k, v] : ps.params)
    if (!known->second.count(k)) schema("preset '" + ps.name + "' has no parameter '" + k + "'");
  sc.preset = std::move(ps);
  return sc;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) schema("cannot read '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Scenario load_scenario_file(const std::string& path) {
  return parse_scenario(read_file(path), std::filesystem::path(path).parent_path().string());
}

ConfigPtr config_for_generators(int generators) {
  if (generators % 2 != 0 || generators < 10 || generators > 32) {
    schema("generators must be even and within [10, 32]");
  }
  const int k = (generators - 8) / 2;
  return make_field_config(k, k);
}

BVState instantiate(const Scenario& sc) {
  const ConfigPtr cfg = config_for_generators(sc.generators);
  if (!sc.archive.empty()) {
    Archive a = load_archive(sc.archive);
    if (a.kind != ArchiveKind::BV) schema("scenario archive must hold a BV state");
    if (a.bv.d() != sc.d) schema("archive dimension does not match the scenario");
    validate(a.bv.adm);
    return a.bv;
  }
  const PresetSpec& ps = *sc.preset;
  const bool bulk = sc.layers > 0;
  const int off = bulk ? 1 : 0;
  MeshPtr mesh;
  if (bulk) {
    mesh = std::make_shared<const Mesh>(BulkPatchGrid(periodic_grid(sc.d, sc.grid), sc.layers, sc.normal_spacing).bulk);
  } else {
    mesh = std::make_shared<const Mesh>(periodic_grid(sc.d, sc.grid));
  }

  ADMBlock adm;
  const int modes = static_cast<int>(param(ps, "modes", 2));
  const double amplitude = param(ps, "amplitude", 0.05);
  if (ps.name == "flat") {
    adm = preset_flat(mesh, off, cfg, sc.eps, sc.lambda);
  } else if (ps.name == "conformal2d") {
    if (sc.d != 2 || bulk) schema("conformal2d is a d = 2 boundary preset");
    adm = preset_conformal2d(mesh, cfg, param(ps, "amp", 0.1));
  } else if (ps.name == "schwarzschild_isotropic") {
    if (sc.d != 3 || bulk) schema("schwarzschild_isotropic is a d = 3 boundary preset");
    const double lo = param(ps, "lo", 2.0), hi = param(ps, "hi", 3.0), mass = param(ps, "mass", 1.0);
    if (!(hi > lo)) schema("schwarzschild box needs hi > lo");
    if (lo <= 0.0 && hi >= 0.0) throw Error(ErrorKind::SingularMetric, "schwarzschild box contains r = 0");
    adm = preset_schwarzschild(schwarzschild_mesh(lo, hi, sc.grid), cfg, mass);
  } else if (ps.name == "flrw") {
    if (!bulk) schema("flrw is a bulk preset (set layers)");
    adm = preset_flrw(mesh, cfg, param(ps, "amp", 0.1));
  } else if (ps.name == "random_smooth") {
    adm = preset_random_smooth(mesh, off, cfg, sc.seed, amplitude, sc.eps, sc.lambda, modes);
  } else if (ps.name == "random_bv") {
    BVState s = preset_random_bv(mesh, off, cfg, sc.seed, amplitude, sc.eps, sc.lambda, modes);
    validate(s.adm);
    return s;
  }
  adm.eps = sc.eps;
  adm.lambda = sc.lambda;
  validate(adm);
  return bv_from_adm(std::move(adm));
}

// ---- archives ----

namespace {

constexpr char kMagic[8] = {'B', 'V', 'B', 'F', 'V', 'A', 'R', 'C'};

class Writer {
 public:
  void u32(std::uint32_t v) {
    for (int i = 0; i < 4; ++i) out_.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
  }
  void i32(std::int32_t v) { u32(static_cast<std::uint32_t>(v)); }
  void u64(std::uint64_t v) {
    for (int i = 0; i < 8; ++i) out_.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
  }
  void f64(double v) { u64(std::bit_cast<std::uint64_t>(v)); }
  void str(const std::string& s) {
    u32(static_cast<std::uint32_t>(s.size()));
    out_ += s;
  }
  void raw(const char* p, std::size_t n) { out_.append(p, n); }
  std::string take() { return std::move(out_); }

 private:
  std::string out_;
};

class Reader {
 public:
  explicit Reader(std::string_view in) : in_(in) {}
  std::uint32_t u32() {
    need(4);
    std::uint32_t v = 0;
    for (int i = 0; i < 4; ++i) v |= static_cast<std::uint32_t>(static_cast<unsigned char>(in_[pos_++])) << (8 * i);
    return v;
  }
  std::int32_t i32() { return static_cast<std::int32_t>(u32()); }
  std::uint64_t u64() {
    need(8);
    std::uint64_t v = 0;
    for (int i = 0; i < 8; ++i) v |= static_cast<std::uint64_t>(static_cast<unsigned char>(in_[pos_++])) << (8 * i);
    return v;
  }
  double f64() { return std::bit_cast<double>(u64()); }
  std::string str() {
    const std::uint32_t n = u32();
    need(n);
    std::string s(in_.substr(pos_, n));
    pos_ += n;
    return s;
  }
  std::string_view raw(std::size_t n) {
    need(n);
    auto s = in_.substr(pos_, n);
    pos_ += n;
    return s;
  }
  bool done() const { return pos_ == in_.size(); }

 private:
  void need(std::size_t n) const {
    if (in_.size() - pos_ < n) schema("archive truncated");
  }
  std::string_view in_;
  std::size_t pos_ = 0;
};

std::string idx(int a) { return std::string(1, static_cast<char>('0' + a)); }

std::vector<std::string> sym_names(const std::string& base, int d) {
  std::vector<std::string> out(static_cast<std::size_t>(sym_size(d)));
  for (int a = 0; a < d; ++a)
    for (int b = a; b < d; ++b) out[static_cast<std::size_t>(sym_index(a, b, d))] = base + "_" + idx(a) + idx(b);
  return out;
}
std::vector<std::string> vec_names(const std::string& base, int d) {
  std::vector<std::string> out;
  for (int a = 0; a < d; ++a) out.push_back(base + "_" + idx(a));
  return out;
}

// Slot names in visit order.
std::vector<std::string> slot_names(const BVState& s) {
  const int d = s.d();
  std::vector<std::string> n = {"eta"};
  auto add = [&](std::vector<std::string> v) { n.insert(n.end(), v.begin(), v.end()); };
  add(vec_names("beta", d));
  add(sym_names("gamma", d));
  add(sym_names("J", s.adm.J.dim()));
  n.push_back("xi_n");
  add(vec_names("xi", d));
  n.push_back("gd_nn");
  add(vec_names("gd_n", d));
  add(sym_names("gd", d));
  n.push_back("chi_n");
  add(vec_names("chi", d));
  return n;
}
std::vector<std::string> slot_names(const DarbouxState& s) {
  const int d = s.d();
  std::vector<std::string> n;
  auto add = [&](std::vector<std::string> v) { n.insert(n.end(), v.begin(), v.end()); };
  add(sym_names("gamma_up", d));
  add(sym_names("Pi", d));
  n.push_back("xi_n");
  add(vec_names("xi", d));
  n.push_back("phi_n");
  add(vec_names("phi", d));
  return n;
}

void write_mesh(Writer& w, const Mesh& m) {
  w.u32(static_cast<std::uint32_t>(m.rank()));
  for (const Axis& a : m.axes()) {
    w.i32(a.n);
    w.u32(a.periodic ? 1 : 0);
    w.f64(a.origin);
    w.f64(a.length);
  }
}
MeshPtr read_mesh(Reader& r) {
  const std::uint32_t rank = r.u32();
  if (rank < 1 || rank > 4) schema("archive mesh rank out of range");
  std::vector<Axis> axes(rank);
  for (Axis& a : axes) {
    a.n = r.i32();
    const std::uint32_t p = r.u32();
    if (a.n < 2 || a.n > 4096 || p > 1) schema("archive axis header invalid");
    a.periodic = p == 1;
    a.origin = r.f64();
    a.length = r.f64();
    if (!(a.length > 0.0)) schema("archive axis length must be positive");
  }
  return std::make_shared<const Mesh>(std::move(axes));
}

void write_config(Writer& w, const ConfigPtr& cfg) {
  if (!cfg) throw Error(ErrorKind::ConfigMismatch, "state has no Grassmann configuration");
  w.i32(cfg->num_generators);
  for (int t : cfg->ghost_tags) w.i32(t);
  w.i32(cfg->aux_begin);
}
ConfigPtr read_config(Reader& r) {
  const int n = r.i32();
  if (n < 1 || n > kMaxGenerators) schema("archive generator count out of range");
  std::vector<int> tags(static_cast<std::size_t>(n));
  for (int& t : tags) t = r.i32();
  GrassmannConfig c(n, std::move(tags));
  c.aux_begin = r.i32();
  if (c.aux_begin < 0 || c.aux_begin > n) schema("archive aux_begin out of range");
  return std::make_shared<const GrassmannConfig>(std::move(c));
}

template <class S>
void write_slots(Writer& w, const S& s) {
  const auto names = slot_names(s);
  w.u32(static_cast<std::uint32_t>(names.size()));
  std::size_t i = 0;
  s.visit([&](const Field& f, int grade) {
    w.str(names[i++]);
    w.i32(grade);
    w.u32(static_cast<std::uint32_t>(f.terms().size()));
    for (const auto& [key, prof] : f.terms()) {
      w.u32(key.mask);
      w.i32(key.ghost);
      for (double v : prof) w.f64(v);
    }
  });
}

template <class S>
void read_slots(Reader& r, S& s, const ConfigPtr& cfg, std::size_t npts) {
  const auto names = slot_names(s);
  if (r.u32() != names.size()) schema("archive slot count does not match its header");
  std::size_t i = 0;
  s.visit([&](Field& f, int grade) {
    if (r.str() != names[i]) schema("archive slot " + names[i] + " out of order");
    if (r.i32() != grade) schema("archive slot " + names[i] + " has the wrong grade");
    ++i;
    f = Field(npts, cfg);
    const std::uint32_t nterms = r.u32();
    Field::Profile prof(npts);
    for (std::uint32_t t = 0; t < nterms; ++t) {
      MonomialKey key;
      key.mask = r.u32();
      key.ghost = r.i32();
      if (key.mask >> cfg->num_generators) schema("archive monomial uses an unknown generator");
      if (f.find(key)) schema("archive repeats a monomial");
      for (double& v : prof) v = r.f64();
      f.add_term(key, prof);
    }
  });
}

void header(Writer& w, ArchiveKind kind) {
  w.raw(kMagic, sizeof kMagic);
  w.u32(kArchiveVersion);
  w.u32(static_cast<std::uint32_t>(kind));
}

}  // namespace

std::string encode_archive(const BVState& s) {
  Writer w;
  header(w, ArchiveKind::BV);
  write_mesh(w, *s.adm.mesh);
  write_config(w, config_of(s));
  w.i32(s.d());
  w.i32(s.adm.axis_offset);
  w.i32(s.adm.J.dim());
  w.i32(s.adm.eps);
  w.f64(s.adm.lambda);
  write_slots(w, s);
  return w.take();
}

std::string encode_archive(const DarbouxState& s) {
  Writer w;
  header(w, ArchiveKind::Darboux);
  write_mesh(w, *s.mesh);
  write_config(w, config_of(s));
  w.i32(s.d());
  w.i32(s.eps);
  w.f64(s.lambda);
  write_slots(w, s);
  return w.take();
}

Archive decode_archive(std::string_view bytes) {
  Reader r(bytes);
  if (r.raw(sizeof kMagic) != std::string_view(kMagic, sizeof kMagic)) schema("not a field archive");
  const std::uint32_t version = r.u32();
  if (version != kArchiveVersion) schema("unsupported archive version " + std::to_string(version));
  Archive a;
  const std::uint32_t kind = r.u32();
  if (kind != 1 && kind != 2) schema("unknown archive kind");
  a.kind = static_cast<ArchiveKind>(kind);
  const MeshPtr mesh = read_mesh(r);
  const ConfigPtr cfg = read_config(r);
  const int d = r.i32();
  if (d < 1 || d > 3) throw Error(ErrorKind::DimensionUnsupported, "archive dimension out of range");
  const std::size_t n = mesh->size();

  if (a.kind == ArchiveKind::BV) {
    BVState& s = a.bv;
    s.adm.mesh = mesh;
    s.adm.axis_offset = r.i32();
    const int jdim = r.i32();
    s.adm.eps = r.i32();
    s.adm.lambda = r.f64();
    if (s.adm.axis_offset != 0 && s.adm.axis_offset != 1) schema("archive axis offset must be 0 or 1");
    if (mesh->rank() != d + s.adm.axis_offset) schema("archive mesh rank does not match d");
    if (jdim != 0 && jdim != d) schema("archive jet dimension invalid");
    const auto ud = static_cast<std::size_t>(d);
    s.adm.beta.assign(ud, Field());
    s.adm.gamma = Sym(d, n);
    s.adm.J = jdim ? Sym(d, n) : Sym();
    s.xi.assign(ud, Field());
    s.gd_n.assign(ud, Field());
    s.gd = Sym(d, n);
    s.chi.assign(ud, Field());
    read_slots(r, s, cfg, n);
  } else {
    DarbouxState& s = a.darboux;
    s.mesh = mesh;
    s.eps = r.i32();
    s.lambda = r.f64();
    if (mesh->rank() != d) schema("archive mesh rank does not match d");
    const auto ud = static_cast<std::size_t>(d);
    s.gamma_up = Sym(d, n);
    s.Pi = Sym(d, n);
    s.xi.assign(ud, Field());
    s.phi.assign(ud, Field());
    read_slots(r, s, cfg, n);
  }
  if (!r.done()) schema("trailing bytes after archive payload");
  return a;
}

void save_archive(const std::string& path, const std::string& bytes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) schema("cannot write '" + path + "'");
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!out) schema("write failed for '" + path + "'");
}

Archive load_archive(const std::string& path) { return decode_archive(read_file(path)); }

}  // namespace bvbfv
