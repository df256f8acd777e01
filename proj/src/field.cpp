#include "bvbfv/field.hpp"

#include <algorithm>
#include <cmath>

namespace bvbfv {

Field Field::constant(std::size_t npts, double c, ConfigPtr cfg, int ghost) {
  Field f(npts, std::move(cfg));
  if (ghost & 1) throw Error(ErrorKind::GradeMismatch, "even constant with odd ghost number");
  if (c != 0.0) f.terms_[{0, ghost}] = Profile(npts, c);
  return f;
}

Field Field::from_profile(Profile values, ConfigPtr cfg, int ghost) {
  if (ghost & 1) throw Error(ErrorKind::GradeMismatch, "even profile with odd ghost number");
  Field f(values.size(), std::move(cfg));
  f.terms_[{0, ghost}] = std::move(values);
  f.prune();
  return f;
}

Field Field::odd(const ConfigPtr& cfg, int k, Profile values) {
  if (!cfg || k < 0 || k >= cfg->num_generators) {
    throw Error(ErrorKind::ConfigMismatch, "generator index out of range");
  }
  return from_term(cfg, {Mask{1} << k, cfg->tag(k)}, std::move(values));
}

Field Field::from_term(const ConfigPtr& cfg, MonomialKey key, Profile values) {
  if (((parity(key.mask) ^ key.ghost) & 1) != 0) {
    throw Error(ErrorKind::GradeMismatch, "monomial parity disagrees with ghost number");
  }
  Field f(values.size(), cfg);
  f.terms_[key] = std::move(values);
  f.prune();
  return f;
}

const Field::Profile* Field::find(MonomialKey key) const {
  auto it = terms_.find(key);
  return it == terms_.end() ? nullptr : &it->second;
}

Field::Profile Field::body() const {
  if (const Profile* p = find({0, 0})) return *p;
  return Profile(npts_, 0.0);
}

Field::Profile Field::coefficient(Mask mask) const {
  Profile out(npts_, 0.0);
  for (const auto& [k, v] : terms_) {
    if (k.mask != mask) continue;
    for (std::size_t i = 0; i < npts_; ++i) out[i] += v[i];
  }
  return out;
}

bool Field::is_body_only() const {
  for (const auto& [k, v] : terms_) {
    if (k.mask != 0 || k.ghost != 0) return false;
  }
  return true;
}

GradedScalar Field::at(std::size_t i) const {
  GradedScalar s(0.0, cfg_);
  for (const auto& [k, v] : terms_) s.add_term(k, v[i]);
  return s;
}

void Field::check_size(const Field& o) const {
  if (o.npts_ != npts_) {
    throw Error(ErrorKind::GradeMismatch,
                "field size mismatch: " + std::to_string(npts_) + " vs " + std::to_string(o.npts_));
  }
}

void Field::add_term(MonomialKey key, std::span<const double> values, double scale) {
  if (values.size() != npts_) throw Error(ErrorKind::GradeMismatch, "profile size mismatch");
  if (scale == 0.0) return;
  auto [it, inserted] = terms_.try_emplace(key);
  Profile& dst = it->second;
  if (inserted) {
    dst.resize(npts_);
    for (std::size_t i = 0; i < npts_; ++i) dst[i] = scale * values[i];
  } else {
    for (std::size_t i = 0; i < npts_; ++i) dst[i] += scale * values[i];
  }
}

Field& Field::operator+=(const Field& o) { return axpy(1.0, o); }
Field& Field::operator-=(const Field& o) { return axpy(-1.0, o); }

Field& Field::axpy(double a, const Field& x) {
  if (npts_ == 0 && terms_.empty()) npts_ = x.npts_;
  check_size(x);
  cfg_ = merge_configs(cfg_, x.cfg_);
  for (const auto& [k, v] : x.terms_) add_term(k, v, a);
  prune();
  return *this;
}

Field& Field::operator*=(double s) {
  if (s == 0.0) {
    terms_.clear();
    return *this;
  }
  for (auto& [k, v] : terms_) {
    for (double& x : v) x *= s;
  }
  return *this;
}

Field Field::scaled(std::span<const double> w) const {
  if (w.size() != npts_) throw Error(ErrorKind::GradeMismatch, "weight size mismatch");
  Field out = *this;
  for (auto& [k, v] : out.terms_) {
    for (std::size_t i = 0; i < npts_; ++i) v[i] *= w[i];
  }
  out.prune();
  return out;
}

Field Field::map_profiles(const std::function<Profile(const Profile&)>& op) const {
  Field out(npts_, cfg_);
  for (const auto& [k, v] : terms_) out.terms_[k] = op(v);
  out.prune();
  return out;
}

double Field::max_abs() const {
  double m = 0.0;
  for (std::size_t i = 0; i < npts_; ++i) {
    double s = 0.0;
    for (const auto& [k, v] : terms_) s += std::abs(v[i]);
    m = std::max(m, s);
  }
  return m;
}

void Field::prune() {
  std::erase_if(terms_, [](const auto& kv) {
    return std::all_of(kv.second.begin(), kv.second.end(), [](double x) { return x == 0.0; });
  });
}

Field operator*(const Field& a, const Field& b) {
  if (a.size() != b.size()) throw Error(ErrorKind::GradeMismatch, "field size mismatch in product");
  const std::size_t n = a.size();
  Field out(n, merge_configs(a.config(), b.config()));
  Field::Profile tmp(n);
  for (const auto& [ka, va] : a.terms()) {
    for (const auto& [kb, vb] : b.terms()) {
      const int s = merge_sign(ka.mask, kb.mask);
      if (s == 0) continue;
      for (std::size_t i = 0; i < n; ++i) tmp[i] = va[i] * vb[i];
      out.add_term({ka.mask | kb.mask, ka.ghost + kb.ghost}, tmp, s);
    }
  }
  out.prune();
  return out;
}

Field operator*(const GradedScalar& s, const Field& f) {
  Field out(f.size(), merge_configs(s.config(), f.config()));
  for (const auto& [ks, c] : s.terms()) {
    for (const auto& [kf, v] : f.terms()) {
      const int sign = merge_sign(ks.mask, kf.mask);
      if (sign == 0) continue;
      out.add_term({ks.mask | kf.mask, ks.ghost + kf.ghost}, v, sign * c);
    }
  }
  out.prune();
  return out;
}

Field operator*(const Field& f, const GradedScalar& s) {
  Field out(f.size(), merge_configs(s.config(), f.config()));
  for (const auto& [kf, v] : f.terms()) {
    for (const auto& [ks, c] : s.terms()) {
      const int sign = merge_sign(kf.mask, ks.mask);
      if (sign == 0) continue;
      out.add_term({ks.mask | kf.mask, ks.ghost + kf.ghost}, v, sign * c);
    }
  }
  out.prune();
  return out;
}

Field left_derive(const Field& f, int k) {
  const auto& cfg = f.config();
  if (!cfg || k < 0 || k >= cfg->num_generators) {
    throw Error(ErrorKind::ConfigMismatch, "left_derive: generator index out of range");
  }
  const Mask bit = Mask{1} << k;
  Field out(f.size(), cfg);
  for (const auto& [key, v] : f.terms()) {
    if (!(key.mask & bit)) continue;
    out.add_term({key.mask & ~bit, key.ghost - cfg->tag(k)}, v, front_sign(key.mask, k));
  }
  out.prune();
  return out;
}

GhostGrade ghost_grade(const Field& f) {
  if (f.is_zero()) return GhostGrade::zero();
  const int g = f.terms().begin()->first.ghost;
  for (const auto& [k, v] : f.terms()) {
    if (k.ghost != g) return GhostGrade::mixed();
  }
  return GhostGrade::pure(g);
}

void require_grade(const Field& f, int grade, const char* what) {
  const GhostGrade g = ghost_grade(f);
  if (!g.admits(grade)) {
    throw Error(ErrorKind::GradeMismatch, std::string(what) + ": expected ghost grade " +
                                              std::to_string(grade) + ", got " + to_string(g));
  }
}

Field power(const Field& f, double p) {
  const std::size_t n = f.size();
  Field::Profile base = f.body();
  for (double b : base) {
    if (!(b > 0.0)) throw Error(ErrorKind::SingularMetric, "power of a field with non-positive body");
  }
  Field soul = f;
  soul -= Field::from_profile(base, f.config());
  for (const auto& [k, v] : soul.terms()) {
    if (k.mask == 0) throw Error(ErrorKind::GradeMismatch, "power: body carries a ghost label");
  }
  // sum_k binom(p, k) b^{p-k} soul^k, soul nilpotent
  Field::Profile coef(n);
  for (std::size_t i = 0; i < n; ++i) coef[i] = std::pow(base[i], p);
  Field out = Field::from_profile(coef, f.config());
  Field soul_pow = Field::constant(n, 1.0, f.config());
  double binom = 1.0;
  for (int k = 1; !soul.is_zero(); ++k) {
    soul_pow = soul_pow * soul;
    if (soul_pow.is_zero()) break;
    binom *= (p - (k - 1)) / k;
    for (std::size_t i = 0; i < n; ++i) coef[i] = binom * std::pow(base[i], p - k);
    out += soul_pow.scaled(coef);
  }
  return out;
}

double max_abs_diff(const Field& a, const Field& b) { return (a - b).max_abs(); }

}  // namespace bvbfv
