#pragma once

#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "isingops/formfactors.hpp"
#include "isingops/grid.hpp"
#include "isingops/locality.hpp"
#include "isingops/report.hpp"

namespace isingops {

struct Tolerances {
  double algebraic = 1e-10;   // exact identities in floating point
  double invariance = 1e-12;  // permutation/periodicity/reduction invariance
  double residue = 1e-6;      // extrapolated residues
  double boundary = 1e-8;     // delta-extrapolated boundary values
  double locality = 1e-6;     // commutator relative to its scale
  double bookkeeping = 1e-6;  // eps-regularized integrals
  double norm_oracle = 0.05;  // grid norm against the refined-grid oracle
};

struct RunConfig {
  int nodes = 32;
  double cutoff = 4.0;
  int nmax = 4;
  double mu = 1.0;
  unsigned long seed = 1;
  bool parallel = false;
  std::string out_dir = "reports";
  Tolerances tol;
  // Defaults (when empty): odd family P = 1 and even k = 1 energy-density family, both with a
  // spline g of half-width 0.5 and order 8 at the origin.
  std::vector<CoefficientFamily> families;

  // random-sample counts
  int identity_samples = 100;   // per case for the algebraic identities
  int pairing_samples = 1000;   // per n for the pairing identity
  int bound_samples = 10000;    // real-bound samples
  int envelope_samples = 400;   // per (family, k) for the growth envelope

  LocalityConfig locality;      // nodes/coarse_nodes/cutoff/top sectors/pairs/width/thresholds
  std::optional<TestFunction2D> wedge_f;  // replaces the automatically placed spacelike f
  double wedge_half_width = 0.5;
  double wedge_gap = 0.1;

  int sum_nodes = 24;
  double sum_cutoff = 4.0;
  Indicatrix omega = Indicatrix::power_type(0.5);
  int m_max = 7;
  double epsilon = 0.4;
  int summable2_nodes = 16;
  int summable2_max = 5;
  int oracle_nodes = 64;  // coth-kernel norm against the doubled grid

  int kga_nodes = 8;
  double kga_cutoff = 4.0;
  int kga_max_mn = 4;
  int kga_max_l = 4;

  int rs_nodes = 32;
  double rs_cutoff = 4.0;
  int rs_in_ball = 8;
  std::vector<int> rs_degrees = {1, 3, 5, 7};
  std::vector<int> rs_translates = {1, 4, 9};
  double rs_step = 0.5;

  std::vector<std::pair<int, int>> bookkeeping_pairs = {{1, 2}, {2, 1}, {2, 3}};

  ModelParams model() const;
  std::vector<CoefficientFamily> effective_families() const;
  void validate() const;
  nlohmann::json to_json() const;
};

// Parses JSON or "key = value" text (dotted keys for nested sections, '#' comments, values
// read as JSON where possible). Throws InvalidArgument on unknown keys or invalid values.
RunConfig parse_config_text(const std::string& text);
RunConfig parse_config_json(const nlohmann::json& j);
RunConfig load_config(const std::string& path);

const std::vector<std::string>& suite_names();  // without "all"

// Individual verification blocks; each returns the checks it produced and may append tables.
// The acceptance driver calls the same functions.
std::vector<Check> criterion_pairing_identity(const RunConfig& cfg);
std::vector<Check> criterion_residue_recursion(const RunConfig& cfg);
std::vector<Check> criterion_real_bound(const RunConfig& cfg);
std::vector<Check> criterion_j_polynomials(const RunConfig& cfg);
std::vector<Check> criterion_i_recursion(const RunConfig& cfg);
std::vector<Check> criterion_zf_car(const RunConfig& cfg);
std::vector<Check> criterion_formfactor_axioms(const RunConfig& cfg);
std::vector<Check> criterion_locality(const RunConfig& cfg, Report* rep = nullptr);
std::vector<Check> criterion_summability(const RunConfig& cfg, Report* rep = nullptr);
std::vector<Check> criterion_reeh_schlieder(const RunConfig& cfg, Report* rep = nullptr);
std::vector<Check> criterion_kernel_bounds(const RunConfig& cfg, Report* rep = nullptr);
std::vector<Check> criterion_boundary_decomposition(const RunConfig& cfg);

// Builds the report of one suite (not "all").
Report run_suite_report(const RunConfig& cfg, const std::string& suite);

// Runs a suite (or "all"), writes its reports to cfg.out_dir and returns the exit status:
// 0 when every check passes, 1 otherwise.
int run_suite(const RunConfig& cfg, const std::string& suite);

}  // namespace isingops
