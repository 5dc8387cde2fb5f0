#include <cmath>
#include <vector>

#include "doctest.h"
#include "qcfa/dfr.hpp"
#include "qcfa/machine.hpp"
#include "qcfa/montecarlo.hpp"
#include "qcfa/scans.hpp"
#include "qcfa/words.hpp"

using namespace qcfa;

namespace {

QcfaMachine z_loop_machine() {
  Dfr f = dfr_z_algebraic();
  CertifyReport rep = certify_dfr(f, 20);
  apply_certification(f, rep);
  return assemble_poly_machine(f, 0.125);
}

}  // namespace

TEST_CASE("summary arithmetic") {
  AcceptanceStats s = finalize_stats(100, 40, 60, 0, 5000, 251000.0L);
  CHECK(s.trials == 100);
  CHECK(s.accept_freq == doctest::Approx(0.4));
  CHECK(s.reject_freq == doctest::Approx(0.6));
  CHECK(s.mean_steps == doctest::Approx(50.0));
  // sample variance (251000 - 100 * 50^2) / 99
  CHECK(s.steps_stddev == doctest::Approx(std::sqrt(1000.0 / 99.0)));
  CHECK(s.accept_ci == doctest::Approx(1.96 * std::sqrt(0.24 / 100.0)));

  AcceptanceStats empty = finalize_stats(0, 0, 0, 0, 0, 0.0L);
  CHECK(empty.accept_freq == 0.0);
  CHECK(empty.mean_steps == 0.0);
  CHECK(empty.accept_ci == 0.0);
}

TEST_CASE("fixed seeds reproduce, thread count does not matter") {
  QcfaMachine m = z_loop_machine();
  Word w = parse_word("a,a,-a", {"a"});

  McOptions opt;
  opt.trials = 2000;
  opt.seed = 7;
  AcceptanceStats s1 = run_machine_mc(m, w, opt);
  AcceptanceStats s2 = run_machine_mc(m, w, opt);
  CHECK(s1.accepted == s2.accepted);
  CHECK(s1.rejected == s2.rejected);
  CHECK(s1.cutoff == s2.cutoff);
  CHECK(s1.mean_steps == s2.mean_steps);
  CHECK(s1.steps_stddev == s2.steps_stddev);

  opt.threads = 4;
  AcceptanceStats s4 = run_machine_mc(m, w, opt);
  CHECK(s4.accepted == s1.accepted);
  CHECK(s4.rejected == s1.rejected);
  CHECK(s4.mean_steps == s1.mean_steps);

  opt.threads = 1;
  opt.seed = 8;
  AcceptanceStats s3 = run_machine_mc(m, w, opt);
  CHECK(s3.accepted != s1.accepted);  // different seed, different sample
}

TEST_CASE("identity words always accept") {
  QcfaMachine m = z_loop_machine();
  McOptions opt;
  opt.trials = 500;
  opt.seed = 3;
  AcceptanceStats s = run_machine_mc(m, parse_word("a,a,-a,-a", {"a"}), opt);
  CHECK(s.accepted == s.trials);
  CHECK(s.rejected == 0);
  CHECK(s.cutoff == 0);
  CHECK(s.mean_steps > 0.0);
}

TEST_CASE("step limit turns undecided trials into cutoffs") {
  QcfaMachine m = z_loop_machine();
  McOptions opt;
  opt.trials = 200;
  opt.seed = 1;
  opt.step_limit = 1;
  AcceptanceStats s = run_machine_mc(m, parse_word("a", {"a"}), opt);
  CHECK(s.cutoff == s.trials);
  CHECK(s.accepted == 0);
  CHECK(s.rejected == 0);
  CHECK(s.mean_steps == 0.0);
}

TEST_CASE("walk coin frequencies match the closed form") {
  // one walk, one fair flip, four symbols: success chance 1/10, 53 steps
  QcfaMachine m = build_coin_machine_walk(1, 1, {"a"});
  McOptions opt;
  opt.trials = 20000;
  opt.seed = 11;
  AcceptanceStats s = run_machine_mc(m, parse_word("a,a,a,a", {"a"}), opt);
  CHECK(s.cutoff == 0);
  double sigma = std::sqrt(0.1 * 0.9 / s.trials);
  CHECK(std::abs(s.accept_freq - 0.1) < 3 * sigma);
  CHECK(std::abs(s.mean_steps - 53.0) < 1.0);
}

TEST_CASE("one-way sampler agrees with the commutator rejection rate") {
  Mo1qfa m = build_mo1qfa(dfr_f2());
  McOptions opt;
  opt.trials = 20000;
  opt.seed = 5;
  Word w = parse_word("a,b,-a,-b", {"a", "b"});
  AcceptanceStats s = run_mo1qfa_mc(m, w, opt);
  CHECK(s.cutoff == 0);
  double sigma = std::sqrt(0.04 * 0.96 / s.trials);
  CHECK(std::abs(s.reject_freq - 0.04) < 3 * sigma);
  // the reader makes one pass and halts: word length plus the end markers
  CHECK(s.mean_steps == doctest::Approx(6.0));
  CHECK(s.steps_stddev == doctest::Approx(0.0));

  AcceptanceStats again = run_mo1qfa_mc(m, w, opt);
  CHECK(again.accepted == s.accepted);
}
