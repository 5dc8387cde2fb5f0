// Runs the ten acceptance criteria in full mode and prints one line per
// criterion. Exit status is the number of failures, so CTest treats any
// red criterion as a failed test.
#include <cstdio>
#include <vector>

#include "qcfa/verify.hpp"

int main() {
  qcfa::VerifyOptions opt;  // full radii, 1e5 trials, pinned default seed
  qcfa::VerifyContext ctx(opt);

  using Fn = qcfa::CriterionResult (*)(qcfa::VerifyContext&);
  const Fn criteria[] = {
      qcfa::criterion1, qcfa::criterion2, qcfa::criterion3, qcfa::criterion4,
      qcfa::criterion5, qcfa::criterion6, qcfa::criterion7, qcfa::criterion8,
      qcfa::criterion9, qcfa::criterion10};

  int failures = 0;
  for (Fn fn : criteria) {
    qcfa::CriterionResult r = fn(ctx);
    std::printf("%s criterion %2d: %-28s %7.2fs  %s\n",
                r.pass ? "PASS" : "FAIL", r.number, r.name.c_str(), r.seconds,
                r.details.c_str());
    std::fflush(stdout);
    if (!r.pass) ++failures;
  }
  return failures;
}
