// Runs every acceptance criterion at full scale and prints one
// "PASS|FAIL <criterion> <detail>" line each.
//
//   acceptance [--strict] [--seed N] [--phase-csv PATH]
//
// Exit status is 0 once every criterion has been evaluated; with --strict it is
// 1 when any criterion fails.

#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <string>
#include <utility>

#include "xcsbm/verify.hpp"

using namespace xcsbm;

int main(int argc, char** argv) {
  bool strict = false;
  VerifyOptions opts;
  opts.scale = Scale::full;
  for (int i = 1; i < argc; ++i) {
    if (!std::strcmp(argv[i], "--strict")) {
      strict = true;
    } else if (!std::strcmp(argv[i], "--seed") && i + 1 < argc) {
      opts.seed = std::strtoull(argv[++i], nullptr, 10);
    } else if (!std::strcmp(argv[i], "--phase-csv") && i + 1 < argc) {
      opts.phase_csv = argv[++i];
    } else {
      std::fprintf(stderr, "usage: %s [--strict] [--seed N] [--phase-csv PATH]\n", argv[0]);
      return 2;
    }
  }

  const std::pair<const char*, const char*> criteria[] = {
      {"bayes_floor", "bayes-floor"},
      {"zeta_oracle", "zeta-oracle"},
      {"placement_equivalence", "placement-equivalence"},
      {"closed_form_oracle", "closed-form-oracle"},
      {"loss_formula", "loss-formula"},
      {"variance_reduction", "variance-reduction"},
      {"concentration", "concentration"},
      {"first_layer_collapse", "first-layer-collapse"},
      {"phase_diagram", "phase-diagram"},
      {"gradient_checks", "gradient-checks"},
  };
  int failed = 0, evaluated = 0;
  for (const auto& [check, label] : criteria) {
    const CheckResult r = run_check(check, opts);
    ++evaluated;
    failed += !r.passed;
    std::printf("%s %-22s %s\n", r.passed ? "PASS" : "FAIL", label, r.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("acceptance: %d criteria evaluated, %d passed, %d failed\n", evaluated,
              evaluated - failed, failed);
  return strict && failed ? 1 : 0;
}
