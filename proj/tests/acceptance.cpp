// Acceptance driver: one PASS/FAIL line per criterion, default configuration.
// Optional arguments select criteria by number, e.g. `acceptance 1 4 12`.
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <set>
#include <string>
#include <vector>

#include <omp.h>

#include "isingops/suites.hpp"

using namespace isingops;

namespace {

struct Criterion {
  int id;
  std::string title;
  double limit_s;
  std::function<std::vector<Check>(const RunConfig&)> run;
};

}  // namespace

int main(int argc, char** argv) {
  std::set<int> only;
  for (int i = 1; i < argc; ++i) only.insert(std::atoi(argv[i]));

  RunConfig cfg;  // default configuration
  cfg.parallel = true;
  omp_set_num_threads(omp_get_num_procs());

  const std::vector<Criterion> criteria = {
      {1, "pairing identity", 10.0, criterion_pairing_identity},
      {2, "residue recursion", 5.0, criterion_residue_recursion},
      {3, "real bound", 5.0, criterion_real_bound},
      {4, "J-polynomials", 5.0, criterion_j_polynomials},
      {5, "I-recursion and reduction invariance", 5.0, criterion_i_recursion},
      {6, "ZF/CAR relations", 30.0, criterion_zf_car},
      {7, "form-factor axioms", 60.0, criterion_formfactor_axioms},
      {8, "locality commutator", 300.0, [](const RunConfig& c) { return criterion_locality(c); }},
      {9, "summability", 600.0, [](const RunConfig& c) { return criterion_summability(c); }},
      {10, "Reeh-Schlieder rank", 300.0, [](const RunConfig& c) { return criterion_reeh_schlieder(c); }},
      {11, "singular-kernel norm bounds", 120.0, [](const RunConfig& c) { return criterion_kernel_bounds(c); }},
      {12, "boundary decomposition", 60.0, criterion_boundary_decomposition},
  };

  int failed = 0;
  for (const auto& cr : criteria) {
    if (!only.empty() && !only.count(cr.id)) continue;
    const auto t0 = std::chrono::steady_clock::now();
    std::vector<Check> checks;
    std::string error;
    try {
      checks = cr.run(cfg);
    } catch (const std::exception& e) {
      error = e.what();
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

    int bad = 0, graded = 0;
    double worst = 0.0;
    std::string worst_name;
    for (const auto& c : checks) {
      if (c.status == "info") continue;
      ++graded;
      if (c.failed()) {
        ++bad;
        if (worst_name.empty()) worst_name = c.name;
      }
      const bool lower_bound = c.detail.is_object() && c.detail.contains("comparison");
      if (!lower_bound && c.tolerance > 0.0 && c.residual / c.tolerance > worst) worst = c.residual / c.tolerance;
    }
    const bool in_time = secs < cr.limit_s;
    const bool ok = error.empty() && graded > 0 && bad == 0 && in_time;
    if (!ok) ++failed;
    std::printf("%s %2d %-38s checks=%d failed=%d worst_residual/tol=%.2e time=%.1fs limit=%.0fs", ok ? "PASS" : "FAIL",
                cr.id, cr.title.c_str(), graded, bad, worst, secs, cr.limit_s);
    if (!error.empty()) std::printf(" error=\"%s\"", error.c_str());
    if (!worst_name.empty()) std::printf(" first_failure=%s", worst_name.c_str());
    if (!in_time) std::printf(" (over time limit)");
    std::printf("\n");
    std::fflush(stdout);
  }
  return failed == 0 ? 0 : 1;
}
