#include <vector>

#include "doctest.h"
#include "qcfa/analyze.hpp"
#include "qcfa/dfr.hpp"
#include "qcfa/machine.hpp"
#include "qcfa/scans.hpp"

using namespace qcfa;

namespace {

Scalar rat(long p, long q) { return Scalar::from_rational(Rational(p, q)); }

QcfaMachine z_loop_machine() {
  Dfr f = dfr_z_algebraic();
  apply_certification(f, certify_dfr(f, 20));
  return assemble_poly_machine(f, 0.125);
}

QcfaMachine f2_exp_machine() {
  Dfr f = dfr_f2();
  apply_certification(f, certify_dfr(f, 6));
  return assemble_exp_machine(f, 0.125);
}

}  // namespace

TEST_CASE("loop analysis of the rotation machine on a generator") {
  QcfaMachine m = z_loop_machine();
  RoundAnalysis a = analyze_machine(m, parse_word("a", {"a"}));
  CHECK(a.exact);
  CHECK(a.p_rej.same_as(rat(1, 5)));
  CHECK(a.p_acc.same_as(rat(1, 1280)));
  CHECK(a.p_halt.same_as(rat(257, 1280)));
  CHECK(a.overall_accept.same_as(rat(1, 257)));
  CHECK(a.expected_iterations.same_as(rat(1280, 257)));
  CHECK(a.expected_steps.same_as(rat(41472, 257)));
  REQUIRE(a.phase_continue.size() == 2);
  CHECK(a.phase_continue[0].same_as(rat(4, 5)));
  CHECK(a.phase_continue[1].same_as(rat(1023, 1024)));
  REQUIRE(a.phase_steps.size() == 2);
  CHECK(a.phase_steps[0].same_as(Scalar::from_int(6)));   // 2n + 4
  CHECK(a.phase_steps[1].same_as(Scalar::from_int(33)));  // walk on 5 symbols
}

TEST_CASE("identity words accept with certainty") {
  QcfaMachine m = z_loop_machine();
  RoundAnalysis a = analyze_machine(m, parse_word("a,a,-a,-a", {"a"}));
  CHECK(a.exact);
  CHECK(a.p_rej.same_as(Scalar::zero()));
  CHECK(a.p_acc.same_as(rat(1, 6400)));
  CHECK(a.overall_accept.same_as(Scalar::one()));
  CHECK(a.expected_iterations.same_as(Scalar::from_int(6400)));
  CHECK(a.phase_steps[0].same_as(Scalar::from_int(12)));
  CHECK(a.phase_steps[1].same_as(Scalar::from_int(117)));
}

TEST_CASE("coin-only machines have closed-form success rates") {
  std::vector<std::string> ab = {"a"};
  QcfaMachine w11 = build_coin_machine_walk(1, 1, ab);
  RoundAnalysis a4 = analyze_machine(w11, parse_word("a,a,a,a", ab));
  CHECK(a4.exact);
  CHECK(a4.overall_accept.same_as(rat(1, 10)));
  CHECK(a4.expected_iterations.same_as(Scalar::one()));
  CHECK(a4.expected_steps.same_as(Scalar::from_int(53)));

  Word a10(10, GeneratorSymbol{0, 1});
  CHECK(analyze_machine(w11, a10).overall_accept.same_as(rat(1, 22)));

  QcfaMachine w23 = build_coin_machine_walk(2, 3, ab);
  Word a20(20, GeneratorSymbol{0, 1});
  RoundAnalysis a20r = analyze_machine(w23, a20);
  CHECK(a20r.overall_accept.same_as(rat(1, 3528)));
  CHECK(a20r.expected_steps.same_as(Scalar::from_int(1771)));

  QcfaMachine s101 = build_coin_machine_scan(1, 0, 1, ab);
  RoundAnalysis s4 = analyze_machine(s101, parse_word("a,a,a,a", ab));
  CHECK(s4.overall_accept.same_as(rat(1, 32)));
  CHECK(s4.expected_steps.same_as(Scalar::from_int(21)));

  QcfaMachine s110 = build_coin_machine_scan(1, 1, 0, ab);
  RoundAnalysis s2 = analyze_machine(s110, parse_word("a,a", ab));
  CHECK(s2.overall_accept.same_as(rat(1, 100)));
  CHECK(s2.expected_steps.same_as(Scalar::from_int(15)));
}

TEST_CASE("coset rewriting feeds the base machine") {
  CosetTable t = index_two_z_table();
  auto [c_odd, w_odd] = rewrite_through_table(t, parse_word("a,a,a", {"a"}));
  CHECK(c_odd == 1);
  REQUIRE(w_odd.size() == 1);
  CHECK(w_odd[0] == GeneratorSymbol{0, 1});
  auto [c_even, w_even] = rewrite_through_table(t, parse_word("a,a", {"a"}));
  CHECK(c_even == 0);
  CHECK(w_even.size() == 1);
}

TEST_CASE("overgroup machine on the index-two embedding") {
  QcfaMachine over = transform_overgroup(z_loop_machine(), index_two_z_table());

  // odd translations land outside the base group and die in the round
  RoundAnalysis odd = analyze_machine(over, parse_word("a", {"a"}));
  CHECK(odd.exact);
  CHECK(odd.overall_accept.same_as(Scalar::zero()));
  CHECK(odd.p_rej.same_as(Scalar::one()));
  CHECK(odd.expected_steps.same_as(Scalar::from_int(6)));

  // a^2 maps to the base generator, so the walk runs on the longer tape
  RoundAnalysis even = analyze_machine(over, parse_word("a,a", {"a"}));
  CHECK(even.exact);
  CHECK(even.p_rej.same_as(rat(1, 5)));
  CHECK(even.p_acc.same_as(rat(1, 2880)));
  CHECK(even.overall_accept.same_as(rat(1, 577)));
  CHECK(even.expected_steps.same_as(rat(145152, 577)));
  CHECK(even.phase_steps[0].same_as(Scalar::from_int(8)));
  CHECK(even.phase_steps[1].same_as(Scalar::from_int(53)));
}

TEST_CASE("multipass analysis distinguishes the two free generators") {
  QcfaMachine m = f2_exp_machine();
  std::vector<std::string> ab = {"a", "b"};

  RoundAnalysis a = analyze_machine(m, parse_word("a", ab));
  CHECK(a.exact);
  REQUIRE(a.phase_continue.size() == 4);
  // the diagonal image is caught by the trace pass
  CHECK(a.phase_continue[0].same_as(rat(4, 5)));
  CHECK(a.phase_continue[1].same_as(Scalar::one()));
  CHECK(a.phase_continue[2].same_as(Scalar::one()));
  CHECK(a.p_rej.same_as(rat(1, 5)));
  CHECK(a.p_acc.same_as(rat(1, 16000)));
  CHECK(a.overall_accept.same_as(rat(1, 3201)));
  CHECK(a.phase_steps[3].same_as(Scalar::from_int(27)));

  // the rotation fixes the uniform state, so only the basis passes see it
  RoundAnalysis b = analyze_machine(m, parse_word("b", ab));
  CHECK(b.phase_continue[0].same_as(Scalar::one()));
  CHECK(b.phase_continue[1].same_as(rat(4, 5)));
  CHECK(b.phase_continue[2].same_as(rat(4, 5)));
  CHECK(b.p_rej.same_as(rat(9, 25)));
  CHECK(b.overall_accept.same_as(rat(1, 7201)));

  RoundAnalysis id = analyze_machine(m, parse_word("a,b,-b,-a", ab));
  CHECK(id.overall_accept.same_as(Scalar::one()));
}

TEST_CASE("one-shot analysis of the unbounded-error machine") {
  Dfr f = dfr_shalen_z_free_zr(1);
  QcfaMachine m = assemble_unbounded_machine(f);
  std::vector<std::string> yx = {"y", "x1"};

  RoundAnalysis id = analyze_machine(m, parse_word("y,-y", yx));
  CHECK_FALSE(id.exact);  // the twist is a transcendental phase
  CHECK(std::abs(id.overall_accept.to_big_complex().re.convert_to<double>() - 1.0) <
        1e-40);

  RoundAnalysis y = analyze_machine(m, parse_word("y", yx));
  CHECK(y.expected_iterations.same_as(Scalar::one()));
  // each of the three passes keeps 9/25 of the mass
  double acc = y.overall_accept.to_big_complex().re.convert_to<double>();
  CHECK(acc == doctest::Approx(0.046656).epsilon(1e-12));
  double steps = y.expected_steps.to_big_complex().re.convert_to<double>();
  CHECK(steps == doctest::Approx(8.9376).epsilon(1e-12));
}

TEST_CASE("analysis needs assembler metadata") {
  QcfaMachine m = z_loop_machine();
  m.structure = MachineStructure{};
  CHECK_THROWS_AS(analyze_machine(m, parse_word("a", {"a"})), AnalysisUnavailable);
}

TEST_CASE("one-way analysis in the exact field") {
  Mo1qfa m = build_mo1qfa(dfr_f2());
  std::vector<std::string> ab = {"a", "b"};

  Mo1qfaAnalysis comm = analyze_mo1qfa(m, parse_word("a,b,-a,-b", ab));
  CHECK(comm.exact);
  CHECK(comm.p_rej.same_as(rat(1, 25)));
  CHECK(comm.steps == 6);

  Mo1qfaAnalysis id = analyze_mo1qfa(m, Word{});
  CHECK(id.p_rej.same_as(Scalar::zero()));
  CHECK(id.steps == 2);

  // (1 - 2/sqrt(5)) / 2 for a single generator
  Mo1qfaAnalysis a = analyze_mo1qfa(m, parse_word("a", ab));
  Scalar expect = (Scalar::one() - Scalar::from_int(2) * sqrt_scalar(Rational(1, 5))) *
                  rat(1, 2);
  CHECK(a.p_rej.same_as(expect));
  CHECK(a.p_rej.to_big_complex().re.convert_to<double>() ==
        doctest::Approx(0.05278640450004206).epsilon(1e-12));
}
