// Acceptance gate: runs the numbered verification criteria and prints one
// PASS/FAIL line per check. Exit status 0 iff every executed check passed.
//
//   acceptance                  run all criteria
//   acceptance --criterion N    run a single criterion
//   acceptance --seed S         override the Monte Carlo seed

#include <cyclefv/verification.hpp>

#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <string>

int main(int argc, char** argv) {
  int criterion = 0;  // 0 = all
  cyclefv::VerifyOptions opts;
  for (int i = 1; i < argc; ++i) {
    const std::string arg = argv[i];
    if (arg == "--criterion" && i + 1 < argc) {
      criterion = std::atoi(argv[++i]);
    } else if (arg == "--seed" && i + 1 < argc) {
      opts.seed = std::strtoull(argv[++i], nullptr, 10);
    } else {
      std::fprintf(stderr, "usage: acceptance [--criterion N] [--seed S]\n");
      return 2;
    }
  }
  if (criterion < 0 || criterion > cyclefv::criterion_count) {
    std::fprintf(stderr, "criterion must be in 1..%d\n", cyclefv::criterion_count);
    return 2;
  }

  const int first = criterion == 0 ? 1 : criterion;
  const int last = criterion == 0 ? cyclefv::criterion_count : criterion;
  bool all_pass = true;
  for (int c = first; c <= last; ++c) {
    const auto checks = cyclefv::run_criterion(c, opts);
    bool crit_pass = true;
    for (const auto& chk : checks) crit_pass = crit_pass && chk.pass;
    all_pass = all_pass && crit_pass;
    std::printf("criterion %2d %s\n", c, crit_pass ? "PASS" : "FAIL");
    for (const auto& chk : checks)
      std::printf("    %-34s %s  residual %.6g vs threshold %.3g\n", chk.check_id.c_str(),
                  chk.pass ? "pass" : "FAIL", chk.residual, chk.threshold);
  }
  return all_pass ? 0 : 1;
}
