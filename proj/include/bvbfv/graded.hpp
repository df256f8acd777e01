#pragma once

// Finite Grassmann algebra with a ghost-number label carried per monomial.
//
// A monomial is a squarefree product of odd generators theta_i, stored as a
// bit mask in increasing index order.  The ghost number is an additive label
// attached to each term independently of the mask, so that an even quantity of
// ghost number -2 (the antighost) can still be a plain number.

#include <bit>
#include <compare>
#include <cstdint>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "bvbfv/error.hpp"

namespace bvbfv {

using Mask = std::uint32_t;

inline constexpr int kMaxGenerators = 30;

struct GrassmannConfig {
  int num_generators = 8;
  std::vector<int> ghost_tags;  // one per generator, must be odd
  // Generators with index >= aux_begin never appear in field values; they are
  // scratch generators for exact directional derivatives and degree shifts.
  int aux_begin = 8;

  GrassmannConfig() : GrassmannConfig(8) {}
  explicit GrassmannConfig(int n, int default_tag = 1);
  GrassmannConfig(int n, std::vector<int> tags);

  int tag(int k) const { return ghost_tags.at(static_cast<std::size_t>(k)); }
  bool operator==(const GrassmannConfig&) const = default;
};

using ConfigPtr = std::shared_ptr<const GrassmannConfig>;

ConfigPtr make_config(int n, std::vector<int> tags);

// Layout used for field states: ghost_gens generators of tag +1, then
// antifield_gens of tag -1, then kAuxPairs (+1, -1) pairs and kAuxShifts
// generators of tag -1 reserved as scratch.
inline constexpr int kAuxPairs = 3;
inline constexpr int kAuxShifts = 2;
ConfigPtr make_field_config(int ghost_gens = 4, int antifield_gens = 4);

// Throws ConfigMismatch unless the two configs are compatible.  A null config
// is compatible with everything (pure numbers).
ConfigPtr merge_configs(const ConfigPtr& a, const ConfigPtr& b);

struct MonomialKey {
  Mask mask = 0;
  int ghost = 0;
  auto operator<=>(const MonomialKey&) const = default;
};

inline int parity(Mask m) { return std::popcount(m) & 1; }

// Sign of theta_a * theta_b after sorting into canonical order; 0 if they
// share a generator.
int merge_sign(Mask a, Mask b);

// Sign picked up when theta_k is commuted to the front of monomial m.
inline int front_sign(Mask m, int k) {
  Mask below = m & ((Mask{1} << k) - 1);
  return (std::popcount(below) & 1) ? -1 : 1;
}

struct GhostGrade {
  enum class Kind { Pure, PureZero, Mixed };
  Kind kind = Kind::PureZero;
  int value = 0;

  static GhostGrade pure(int g) { return {Kind::Pure, g}; }
  static GhostGrade zero() { return {Kind::PureZero, 0}; }
  static GhostGrade mixed() { return {Kind::Mixed, 0}; }

  bool is_pure() const { return kind == Kind::Pure; }
  bool is_zero() const { return kind == Kind::PureZero; }
  bool is_mixed() const { return kind == Kind::Mixed; }
  // True if the value is compatible with grade g (zero is every grade).
  bool admits(int g) const { return is_zero() || (is_pure() && value == g); }
  bool operator==(const GhostGrade&) const = default;
};

std::string to_string(const GhostGrade& g);

class GradedScalar {
 public:
  using Terms = std::map<MonomialKey, double>;

  GradedScalar() = default;
  explicit GradedScalar(double body, ConfigPtr cfg = nullptr, int ghost = 0);

  static GradedScalar generator(const ConfigPtr& cfg, int k, double coeff = 1.0);
  static GradedScalar monomial(const ConfigPtr& cfg, Mask mask, int ghost, double coeff);

  const ConfigPtr& config() const { return cfg_; }
  const Terms& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }

  double coefficient(Mask mask, int ghost) const;
  double coefficient(Mask mask) const;  // summed over ghost labels
  double body() const { return coefficient(0); }
  double max_abs() const;
  // Sum of |coefficient|, used for relative error scales.
  double l1() const;

  void add_term(MonomialKey key, double coeff);

  GradedScalar& operator+=(const GradedScalar& o);
  GradedScalar& operator-=(const GradedScalar& o);
  GradedScalar& operator*=(double s);

  friend GradedScalar operator+(GradedScalar a, const GradedScalar& b) { return a += b; }
  friend GradedScalar operator-(GradedScalar a, const GradedScalar& b) { return a -= b; }
  friend GradedScalar operator*(GradedScalar a, double s) { return a *= s; }
  friend GradedScalar operator*(double s, GradedScalar a) { return a *= s; }
  GradedScalar operator-() const { return *this * -1.0; }

  bool operator==(const GradedScalar& o) const { return terms_ == o.terms_; }

  std::string str() const;

 private:
  void prune();

  ConfigPtr cfg_;
  Terms terms_;
};

GradedScalar gr_mul(const GradedScalar& a, const GradedScalar& b);
inline GradedScalar operator*(const GradedScalar& a, const GradedScalar& b) { return gr_mul(a, b); }

// Left derivative with respect to theta_k.
GradedScalar left_derive(const GradedScalar& a, int k);

GhostGrade ghost_grade(const GradedScalar& a);

// Grassmann parity if all terms agree, -1 if mixed, 0 for zero.
int grassmann_parity(const GradedScalar& a);

// Largest coefficient magnitude of a - b.
double max_abs_diff(const GradedScalar& a, const GradedScalar& b);

}  // namespace bvbfv
