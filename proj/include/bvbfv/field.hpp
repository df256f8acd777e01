#pragma once

// Grassmann-valued fields on a mesh.
//
// A field is stored term-wise: for every monomial (mask, ghost) one real
// profile over all mesh points.  Linear spatial operators act on each profile
// independently; products combine profiles pointwise with the Koszul sign of
// the monomial merge.

#include <cstddef>
#include <functional>
#include <map>
#include <span>
#include <vector>

#include "bvbfv/graded.hpp"

namespace bvbfv {

class Field {
 public:
  using Profile = std::vector<double>;
  using Terms = std::map<MonomialKey, Profile>;

  Field() = default;
  explicit Field(std::size_t npts, ConfigPtr cfg = nullptr) : npts_(npts), cfg_(std::move(cfg)) {}

  static Field constant(std::size_t npts, double c, ConfigPtr cfg = nullptr, int ghost = 0);
  static Field from_profile(Profile values, ConfigPtr cfg = nullptr, int ghost = 0);
  // theta_k * profile, with the generator's ghost tag.
  static Field odd(const ConfigPtr& cfg, int k, Profile values);
  static Field from_term(const ConfigPtr& cfg, MonomialKey key, Profile values);

  std::size_t size() const { return npts_; }
  const ConfigPtr& config() const { return cfg_; }
  const Terms& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }

  const Profile* find(MonomialKey key) const;
  // Profile of the plain (mask 0, ghost 0) part, zeros if absent.
  Profile body() const;
  // Profile of monomial `mask` summed over ghost labels.
  Profile coefficient(Mask mask) const;
  bool is_body_only() const;

  GradedScalar at(std::size_t i) const;

  void add_term(MonomialKey key, std::span<const double> values, double scale = 1.0);
  void set_config(ConfigPtr cfg) { cfg_ = std::move(cfg); }

  Field& operator+=(const Field& o);
  Field& operator-=(const Field& o);
  Field& operator*=(double s);
  Field& axpy(double a, const Field& x);

  friend Field operator+(Field a, const Field& b) { return a += b; }
  friend Field operator-(Field a, const Field& b) { return a -= b; }
  friend Field operator*(Field a, double s) { return a *= s; }
  friend Field operator*(double s, Field a) { return a *= s; }
  Field operator-() const { return *this * -1.0; }

  // Pointwise multiplication by a real profile (even, ghost 0).
  Field scaled(std::span<const double> w) const;

  // Apply a real linear operator to every term profile.
  Field map_profiles(const std::function<Profile(const Profile&)>& op) const;

  double max_abs() const;
  // Maximum over points of the l1 norm of the coefficients.
  double sup_norm() const { return max_abs(); }

  // Drop terms whose profile is identically zero.
  void prune();

 private:
  void check_size(const Field& o) const;

  std::size_t npts_ = 0;
  ConfigPtr cfg_;
  Terms terms_;
};

Field operator*(const Field& a, const Field& b);
Field operator*(const GradedScalar& s, const Field& f);
Field operator*(const Field& f, const GradedScalar& s);

// Left derivative with respect to theta_k, pointwise.
Field left_derive(const Field& f, int k);

GhostGrade ghost_grade(const Field& f);

// Throws GradeMismatch unless the field's ghost grade admits `grade`.
void require_grade(const Field& f, int grade, const char* what);

// f^p for a field with positive body; the nilpotent part is handled by a
// terminating Taylor series, so Grassmann-valued arguments are exact.
Field power(const Field& f, double p);
inline Field inverse(const Field& f) { return power(f, -1.0); }
inline Field sqrt(const Field& f) { return power(f, 0.5); }

double max_abs_diff(const Field& a, const Field& b);

}  // namespace bvbfv
