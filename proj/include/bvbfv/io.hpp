#pragma once

// Scenario files (JSON) and binary field archives.

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>

#include "bvbfv/boundary.hpp"

namespace bvbfv {

struct PresetSpec {
  std::string name;
  std::map<std::string, double> params;  // amplitude, mass, lo, hi, ...
};

// Exactly one of `preset` and `archive` is set.
struct Scenario {
  int d = 2;
  int grid = 32;      // boundary points per axis
  int layers = 0;     // > 0: bulk patch with this many normal layers
  double normal_spacing = 0.02;
  int eps = 1;
  double lambda = 0.0;
  int generators = 16;
  std::uint64_t seed = 0;
  std::optional<PresetSpec> preset;
  std::string archive;  // resolved against the scenario file's directory
};

// Throws SchemaError for malformed input or unknown keys and
// DimensionUnsupported for d outside {2, 3}.
Scenario parse_scenario(std::string_view json_text, const std::string& base_dir = "");
Scenario load_scenario_file(const std::string& path);

// Field configuration for a generator count: (n - 8) / 2 ghost and antifield
// generators plus the scratch block.
ConfigPtr config_for_generators(int generators);

// The state a scenario describes.  Boundary scenarios give a pre-boundary
// state with J; bulk scenarios a state on the patch.  Preset states are
// validated (SingularMetric for degenerate parameters).
BVState instantiate(const Scenario& sc);

// ---- archives ----
//
// Little-endian: magic "BVBFVARC", u32 version, u32 kind, the mesh axes, the
// Grassmann configuration, eps, lambda, then one record per slot (name, grade,
// terms as (mask, ghost, npts doubles) in row-major point order).

inline constexpr std::uint32_t kArchiveVersion = 1;
enum class ArchiveKind : std::uint32_t { BV = 1, Darboux = 2 };

struct Archive {
  ArchiveKind kind = ArchiveKind::BV;
  BVState bv;
  DarbouxState darboux;
};

std::string encode_archive(const BVState& s);
std::string encode_archive(const DarbouxState& s);
Archive decode_archive(std::string_view bytes);

void save_archive(const std::string& path, const std::string& bytes);
Archive load_archive(const std::string& path);
std::string read_file(const std::string& path);

}  // namespace bvbfv
