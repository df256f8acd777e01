#include "bvbfv/graded.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace bvbfv {

GrassmannConfig::GrassmannConfig(int n, int default_tag)
    : GrassmannConfig(n, std::vector<int>(static_cast<std::size_t>(std::max(n, 0)), default_tag)) {}

GrassmannConfig::GrassmannConfig(int n, std::vector<int> tags)
    : num_generators(n), ghost_tags(std::move(tags)), aux_begin(n) {
  if (n < 1 || n > kMaxGenerators) {
    throw Error(ErrorKind::ConfigMismatch, "num_generators out of range: " + std::to_string(n));
  }
  if (ghost_tags.size() != static_cast<std::size_t>(n)) {
    throw Error(ErrorKind::ConfigMismatch, "ghost tag count does not match num_generators");
  }
  for (int t : ghost_tags) {
    if ((t & 1) == 0) {
      throw Error(ErrorKind::GradeMismatch, "odd generator needs an odd ghost tag");
    }
  }
}

ConfigPtr make_config(int n, std::vector<int> tags) {
  return std::make_shared<const GrassmannConfig>(n, std::move(tags));
}

ConfigPtr make_field_config(int ghost_gens, int antifield_gens) {
  if (ghost_gens < 1 || antifield_gens < 1) {
    throw Error(ErrorKind::ConfigMismatch, "field states need at least one ghost and one antifield generator");
  }
  std::vector<int> tags(static_cast<std::size_t>(ghost_gens), 1);
  tags.insert(tags.end(), static_cast<std::size_t>(antifield_gens), -1);
  const int aux = static_cast<int>(tags.size());
  for (int p = 0; p < kAuxPairs; ++p) {
    tags.push_back(1);
    tags.push_back(-1);
  }
  tags.insert(tags.end(), kAuxShifts, -1);
  GrassmannConfig c(static_cast<int>(tags.size()), tags);
  c.aux_begin = aux;
  return std::make_shared<const GrassmannConfig>(std::move(c));
}

ConfigPtr merge_configs(const ConfigPtr& a, const ConfigPtr& b) {
  if (!a) return b;
  if (!b || a == b) return a;
  if (*a != *b) throw Error(ErrorKind::ConfigMismatch, "operands use different Grassmann configs");
  return a;
}

int merge_sign(Mask a, Mask b) {
  if (a & b) return 0;
  int swaps = 0;
  Mask rest = b;
  while (rest) {
    int j = std::countr_zero(rest);
    rest &= rest - 1;
    // generators of a with index above j must be passed by theta_j
    swaps += std::popcount(a >> (j + 1));
  }
  return (swaps & 1) ? -1 : 1;
}

std::string to_string(const GhostGrade& g) {
  switch (g.kind) {
    case GhostGrade::Kind::Pure: return std::to_string(g.value);
    case GhostGrade::Kind::PureZero: return "PureZero";
    case GhostGrade::Kind::Mixed: return "Mixed";
  }
  return "?";
}

GradedScalar::GradedScalar(double body, ConfigPtr cfg, int ghost) : cfg_(std::move(cfg)) {
  if (ghost & 1) throw Error(ErrorKind::GradeMismatch, "even body with odd ghost number");
  if (body != 0.0) terms_[{0, ghost}] = body;
}

GradedScalar GradedScalar::generator(const ConfigPtr& cfg, int k, double coeff) {
  if (!cfg || k < 0 || k >= cfg->num_generators) {
    throw Error(ErrorKind::ConfigMismatch, "generator index out of range");
  }
  return monomial(cfg, Mask{1} << k, cfg->tag(k), coeff);
}

GradedScalar GradedScalar::monomial(const ConfigPtr& cfg, Mask mask, int ghost, double coeff) {
  if (((parity(mask) ^ ghost) & 1) != 0) {
    throw Error(ErrorKind::GradeMismatch, "monomial parity disagrees with ghost number");
  }
  if (cfg && (mask >> cfg->num_generators) != 0) {
    throw Error(ErrorKind::ConfigMismatch, "monomial uses generators outside the config");
  }
  GradedScalar s;
  s.cfg_ = cfg;
  if (coeff != 0.0) s.terms_[{mask, ghost}] = coeff;
  return s;
}

double GradedScalar::coefficient(Mask mask, int ghost) const {
  auto it = terms_.find({mask, ghost});
  return it == terms_.end() ? 0.0 : it->second;
}

double GradedScalar::coefficient(Mask mask) const {
  double c = 0.0;
  for (const auto& [k, v] : terms_) {
    if (k.mask == mask) c += v;
  }
  return c;
}

double GradedScalar::max_abs() const {
  double m = 0.0;
  for (const auto& [k, v] : terms_) m = std::max(m, std::abs(v));
  return m;
}

double GradedScalar::l1() const {
  double s = 0.0;
  for (const auto& [k, v] : terms_) s += std::abs(v);
  return s;
}

void GradedScalar::add_term(MonomialKey key, double coeff) {
  if (coeff == 0.0) return;
  auto [it, inserted] = terms_.try_emplace(key, coeff);
  if (!inserted) {
    it->second += coeff;
    if (it->second == 0.0) terms_.erase(it);
  }
}

GradedScalar& GradedScalar::operator+=(const GradedScalar& o) {
  cfg_ = merge_configs(cfg_, o.cfg_);
  for (const auto& [k, v] : o.terms_) add_term(k, v);
  return *this;
}

GradedScalar& GradedScalar::operator-=(const GradedScalar& o) {
  cfg_ = merge_configs(cfg_, o.cfg_);
  for (const auto& [k, v] : o.terms_) add_term(k, -v);
  return *this;
}

GradedScalar& GradedScalar::operator*=(double s) {
  if (s == 0.0) {
    terms_.clear();
    return *this;
  }
  for (auto& [k, v] : terms_) v *= s;
  return *this;
}

void GradedScalar::prune() {
  std::erase_if(terms_, [](const auto& kv) { return kv.second == 0.0; });
}

std::string GradedScalar::str() const {
  if (terms_.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (const auto& [k, v] : terms_) {
    if (!first) os << " + ";
    first = false;
    os << v;
    for (Mask m = k.mask; m; m &= m - 1) os << "*t" << std::countr_zero(m);
    if (k.ghost != 0) os << "[gh" << k.ghost << "]";
  }
  return os.str();
}

GradedScalar gr_mul(const GradedScalar& a, const GradedScalar& b) {
  GradedScalar out(0.0, merge_configs(a.config(), b.config()));
  for (const auto& [ka, va] : a.terms()) {
    for (const auto& [kb, vb] : b.terms()) {
      int s = merge_sign(ka.mask, kb.mask);
      if (s == 0) continue;
      out.add_term({ka.mask | kb.mask, ka.ghost + kb.ghost}, s * va * vb);
    }
  }
  return out;
}

GradedScalar left_derive(const GradedScalar& a, int k) {
  const auto& cfg = a.config();
  if (cfg && (k < 0 || k >= cfg->num_generators)) {
    throw Error(ErrorKind::ConfigMismatch, "left_derive: generator index out of range");
  }
  const int tag = cfg ? cfg->tag(k) : 1;
  const Mask bit = Mask{1} << k;
  GradedScalar out(0.0, cfg);
  for (const auto& [key, v] : a.terms()) {
    if (!(key.mask & bit)) continue;
    out.add_term({key.mask & ~bit, key.ghost - tag}, front_sign(key.mask, k) * v);
  }
  return out;
}

GhostGrade ghost_grade(const GradedScalar& a) {
  if (a.is_zero()) return GhostGrade::zero();
  const int g = a.terms().begin()->first.ghost;
  for (const auto& [k, v] : a.terms()) {
    if (k.ghost != g) return GhostGrade::mixed();
  }
  return GhostGrade::pure(g);
}

int grassmann_parity(const GradedScalar& a) {
  if (a.is_zero()) return 0;
  const int p = parity(a.terms().begin()->first.mask);
  for (const auto& [k, v] : a.terms()) {
    if (parity(k.mask) != p) return -1;
  }
  return p;
}

double max_abs_diff(const GradedScalar& a, const GradedScalar& b) { return (a - b).max_abs(); }

}  // namespace bvbfv
