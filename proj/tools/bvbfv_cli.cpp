// bvbfv: scenario reports, reduction to Darboux archives and the identity suites.
//
// Exit codes: 0 success / all checks pass, 1 a check failed, 2 configuration error.

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "bvbfv/adm.hpp"
#include "bvbfv/io.hpp"
#include "bvbfv/verify.hpp"

namespace {

using namespace bvbfv;

constexpr int kOk = 0, kFailed = 1, kConfig = 2;
constexpr const char* kReportDirEnv = "BVBFV_REPORT_DIR";

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12e", v);
  return buf;
}

double sup(const Field& f) { return f.max_abs(); }
double sup(const Vec& v) {
  double m = 0.0;
  for (const auto& f : v) m = std::max(m, f.max_abs());
  return m;
}

// Boundary view of a scenario state.
PreBoundaryState boundary_view(const BVState& s) {
  if (!s.adm.on_bulk()) return s;
  const Mesh& m = *s.adm.mesh;
  return restrict_to_boundary(s, std::make_shared<const Mesh>(m.drop_axis(0)));
}

// --out wins; otherwise the report directory from the environment, if set.
void emit(const std::string& text, const std::string& out, const std::string& default_name) {
  std::cout << text;
  std::string path = out;
  if (path.empty()) {
    if (const char* dir = std::getenv(kReportDirEnv); dir && *dir) {
      std::filesystem::create_directories(dir);
      path = (std::filesystem::path(dir) / default_name).string();
    }
  }
  if (path.empty()) return;
  std::ofstream f(path, std::ios::trunc);
  if (!f) throw Error(ErrorKind::SchemaError, "cannot write '" + path + "'");
  f << text;
}

std::string header(const Scenario& sc, const BVState& s) {
  std::ostringstream o;
  o << "d " << sc.d << "\n";
  o << "points " << s.size() << "\n";
  o << "eps " << s.adm.eps << "\n";
  o << "lambda " << num(s.adm.lambda) << "\n";
  o << "source " << (sc.preset ? "preset:" + sc.preset->name : "archive:" + sc.archive) << "\n";
  return o.str();
}

std::string adm_report(const Scenario& sc, const BVState& state) {
  const PreBoundaryState s = boundary_view(state);
  const ADMBlock& adm = s.adm;
  const Mesh& m = *adm.mesh;
  const ExtrinsicCurvature ext = extrinsic_curvature(adm);
  const ClassicalConstraints cc = classical_constraints(adm);
  const Field L = adm_lagrangian_density(adm);
  const Field R = boundary_ricci_scalar(adm.gamma, adm.partial());
  std::ostringstream o;
  o << header(sc, state);
  o << "L_adm.integral " << num(m.integrate(L.body())) << "\n";
  o << "L_adm.sup " << num(sup(L)) << "\n";
  o << "K.sup " << num(ext.K.max_abs()) << "\n";
  o << "trK.integral " << num(m.integrate(ext.trK.body())) << "\n";
  o << "R_boundary.integral " << num(m.integrate(R.body())) << "\n";
  o << "R_boundary.sup " << num(sup(R)) << "\n";
  o << "G_eta.sup " << num(sup(cc.G_eta)) << "\n";
  o << "G_beta.sup " << num(sup(cc.G_beta)) << "\n";
  return o.str();
}

std::string constraints_report(const Scenario& sc, const BVState& state) {
  const PreBoundaryState s = boundary_view(state);
  const ClassicalConstraints cc = classical_constraints(s.adm);
  const BoundaryConstraints bc = boundary_constraints(reduce_bv(s));
  const Mesh& m = *s.adm.mesh;
  std::ostringstream o;
  o << header(sc, state);
  o << "G_eta.sup " << num(sup(cc.G_eta)) << "\n";
  o << "G_beta.sup " << num(sup(cc.G_beta)) << "\n";
  o << "H.sup " << num(sup(bc.H)) << "\n";
  o << "H.integral " << num(m.integrate(bc.H.body())) << "\n";
  o << "H_a.sup " << num(sup(bc.H_a)) << "\n";
  return o.str();
}

std::vector<std::uint64_t> parse_seeds(const std::string& text) {
  std::vector<std::uint64_t> out;
  if (text.find(',') == std::string::npos) {
    const long n = std::stol(text);
    if (n < 1) throw Error(ErrorKind::SchemaError, "--seeds needs a positive count");
    for (long i = 1; i <= n; ++i) out.push_back(static_cast<std::uint64_t>(i));
    return out;
  }
  std::stringstream ss(text);
  for (std::string item; std::getline(ss, item, ',');) {
    if (!item.empty()) out.push_back(std::stoull(item));
  }
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Graded-field checks for the boundary structure of ADM gravity"};
  app.require_subcommand(1);

  std::string scenario_path, out_path;

  auto* adm = app.add_subcommand("adm", "ADM quantities of a scenario");
  adm->require_subcommand(1);
  auto* adm_rep = adm->add_subcommand("report", "L_ADM, extrinsic curvature, boundary curvature, constraints");
  adm_rep->add_option("--scenario", scenario_path, "scenario JSON file")->required();
  adm_rep->add_option("--out", out_path, "report file");

  auto* cons = app.add_subcommand("constraints", "classical and reduced boundary constraints");
  cons->add_option("--scenario", scenario_path, "scenario JSON file")->required();
  cons->add_option("--out", out_path, "report file");

  auto* red = app.add_subcommand("reduce", "reduce a scenario state to a Darboux archive");
  red->add_option("--scenario", scenario_path, "scenario JSON file")->required();
  red->add_option("--out", out_path, "archive file")->required();

  SuiteConfig vc;
  std::string seeds_text;
  auto* ver = app.add_subcommand("verify", "run an identity suite");
  ver->add_option("--suite", vc.suite, "classical | bv | boundary | bulk | all");
  ver->add_option("--scenario", scenario_path, "take d, grid, eps, lambda and generators from a scenario");
  ver->add_option("--d", vc.d, "boundary dimension");
  ver->add_option("--grid", vc.grid, "boundary points per axis");
  ver->add_option("--seeds", seeds_text, "seed count N (seeds 1..N) or a comma list");
  ver->add_option("--tol-scale", vc.tol_scale, "tolerance multiplier (> 1 requires --force)");
  ver->add_flag("--force", vc.force, "allow loosened tolerances");
  ver->add_option("--out", out_path, "report file");

  auto* pre = app.add_subcommand("presets", "preset catalogue");
  pre->require_subcommand(1);
  auto* pre_list = pre->add_subcommand("list", "list preset names");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kOk : kConfig;
  }

  try {
    if (*pre_list) {
      for (const auto& n : preset_names()) std::cout << n << "\n";
      return kOk;
    }
    if (*ver) {
      if (!scenario_path.empty()) {
        const Scenario sc = load_scenario_file(scenario_path);
        vc.d = sc.d;
        vc.grid = sc.grid;
        vc.eps = {sc.eps};
        vc.lambda = sc.lambda;
        vc.generators = sc.generators;
        if (sc.layers > 0) vc.layers = sc.layers;
        vc.normal_spacing = sc.normal_spacing;
        // explicit flags still win
        if (ver->count("--d")) vc.d = std::stoi(ver->get_option("--d")->as<std::string>());
        if (ver->count("--grid")) vc.grid = std::stoi(ver->get_option("--grid")->as<std::string>());
      }
      if (!seeds_text.empty()) vc.seeds = parse_seeds(seeds_text);
      const bool bad_dim = vc.d != 2 && vc.d != 3;
      if (!bad_dim) validate(vc);
      const auto records = run_suite(vc);
      const std::string name = vc.suite + "-d" + std::to_string(vc.d) + "-n" + std::to_string(vc.grid) + ".txt";
      emit(format_report(records), out_path, name);
      if (bad_dim) return kConfig;
      return all_pass(records) ? kOk : kFailed;
    }

    const Scenario sc = load_scenario_file(scenario_path);
    const BVState state = instantiate(sc);
    const std::string stem = std::filesystem::path(scenario_path).stem().string();
    if (*adm_rep) {
      emit(adm_report(sc, state), out_path, stem + "-adm.txt");
    } else if (*cons) {
      emit(constraints_report(sc, state), out_path, stem + "-constraints.txt");
    } else if (*red) {
      save_archive(out_path, encode_archive(reduce_bv(boundary_view(state))));
      std::cout << "wrote " << out_path << "\n";
    }
    return kOk;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kConfig;
  }
}
