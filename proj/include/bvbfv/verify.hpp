#pragma once

// Identity suites.  Every check is a plain function of a SuiteConfig that
// returns one record; suites are ordered lists of checks.  Errors raised by a
// check become a failed record carrying the error text.

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "bvbfv/boundary.hpp"

namespace bvbfv {

struct SuiteConfig {
  std::string suite = "boundary";  // classical | bv | boundary | bulk | all
  int d = 2;
  int grid = 32;             // boundary points per axis
  int layers = 9;            // normal layers of the bulk patch
  double normal_spacing = 0.02;
  std::vector<int> eps = {1, -1};
  double lambda = 0.3;
  double amplitude = 0.05;
  int generators = 16;
  std::vector<std::uint64_t> seeds = {1, 2, 3, 4, 5};
  int directions = 5;        // constant and as many smooth directions per generator / state
  double tol_scale = 1.0;    // > 1 only with force
  bool force = false;
};

// Throws SchemaError for an inconsistent config (empty seeds, loosened
// tolerances without force).  d outside {2, 3} is reported by run_suite.
void validate(const SuiteConfig& cfg);

enum class Compare { Below, Above };

struct CheckRecord {
  std::string id;
  std::string description;
  std::string digest;  // hash of the inputs
  double residual = 0.0;
  double tolerance = 0.0;
  Compare compare = Compare::Below;  // Above: the check passes when residual exceeds tolerance
  bool pass = false;
  double wall_ms = 0.0;
  std::string error;
};

struct Check {
  std::string id;
  std::string description;
  double tolerance;
  Compare compare;
  // returns the measured residual
  std::function<double(const SuiteConfig&)> run;
};

std::vector<std::string> suite_names();
std::vector<Check> suite_checks(const std::string& suite);
const Check& find_check(const std::string& id);

CheckRecord run_check(const Check& check, const SuiteConfig& cfg);
std::vector<CheckRecord> run_suite(const SuiteConfig& cfg);

// One line per record: status, id, residual, tolerance, digest, wall time, description.
std::string format_report(const std::vector<CheckRecord>& records, bool with_times = true);
bool all_pass(const std::vector<CheckRecord>& records);

// ---- building blocks shared with the tests ----

// Largest residual of Omega(Q, Y) - D_Y S - (alpha_bd(D pi Y) at the near face
// minus the same at the far face) over the given directions.  The bulk state
// must live on a patch with a bounded normal axis.
double check_fundamental_formula(const BVState& bulk, const std::vector<BVState>& directions);

// Restriction of a direction (or state) at bulk layer k; J is the normal
// derivative of the gamma slot.
BVState restrict_layer(const BVState& bulk, const BVState& field, int k, MeshPtr boundary);

// Directions whose normal profile vanishes to third order at both faces.
BVState interior_direction(const BVState& bulk, std::uint64_t seed);

}  // namespace bvbfv
