#include <vector>

#include "doctest.h"
#include "qcfa/dfr.hpp"
#include "qcfa/machine.hpp"
#include "qcfa/scans.hpp"

using namespace qcfa;

namespace {

Dfr certified_z() {
  Dfr f = dfr_z_algebraic();
  CertifyReport rep = certify_dfr(f, 20);
  apply_certification(f, rep);
  return f;
}

Dfr certified_f2() {
  Dfr f = dfr_f2();
  CertifyReport rep = certify_dfr(f, 6);
  apply_certification(f, rep);
  return f;
}

}  // namespace

TEST_CASE("loop parameters for the algebraic rotation family") {
  Dfr f = certified_z();
  CHECK(f.certified);
  CHECK(f.tau.kind == TauKind::Calibrated);
  CHECK(f.tau.shape == TauShape::Poly);

  PolyParams p = poly_params(f, 0.125);
  CHECK(p.rounds == 1);
  // calibrated exponent lands near 1.53, so two walk repetitions
  CHECK(p.walks == 2);
  CHECK(p.flips == 8);

  CHECK_THROWS_AS(poly_params(f, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(poly_params(f, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(poly_params(f, -0.5), std::invalid_argument);

  // declared-only tau has no constants to plug in
  CHECK_THROWS_AS(poly_params(dfr_z_algebraic(), 0.125), CertificationError);
  // the free-group family is not diagonal
  CHECK_THROWS_AS(poly_params(dfr_f2(), 0.125), CertificationError);
  // and once calibrated its tau is exponential, which this assembly rejects
  CHECK_THROWS_AS(poly_params(certified_f2(), 0.125), CertificationError);
}

TEST_CASE("finite cyclic families assemble without a certification pass") {
  Dfr f = dfr_zm(5);
  CHECK(f.tau.has_constants);
  PolyParams p = poly_params(f, 0.125);
  CHECK(p.rounds == 1);
  CHECK(p.walks == 1);  // constant tau, no length dependence
  CHECK(p.flips == 6);
  QcfaMachine m = assemble_poly_machine(f, 0.125);
  CHECK_NOTHROW(validate_machine(m));
}

TEST_CASE("single-measurement machine structure") {
  Dfr f = certified_z();
  QcfaMachine m = assemble_poly_machine(f, 0.125);
  CHECK_NOTHROW(validate_machine(m));

  CHECK(m.quantum_dim == 2);
  CHECK(m.generator_labels == std::vector<std::string>{"a"});
  CHECK(m.generator_count() == 1);
  CHECK(m.symbol_count() == 4);
  CHECK(m.left_marker() == 2);
  CHECK(m.right_marker() == 3);
  CHECK(m.amplitude_class == AmplitudeClass::AlgebraicExact);

  const MachineStructure& st = m.structure;
  CHECK(st.kind == MachineStructure::Kind::Loop);
  CHECK(st.eps == doctest::Approx(0.125));
  CHECK_FALSE(st.overgroup);
  CHECK(st.base_generator_count == 1);
  REQUIRE(st.phases.size() == 2);
  CHECK(st.phases[0].kind == MachinePhase::Kind::Round);
  CHECK(st.phases[1].kind == MachinePhase::Kind::CoinWalk);
  CHECK(st.phases[1].walk.walks == 2);
  CHECK(st.phases[1].walk.flips == 8);

  const RoundPhase& r = st.phases[0].round;
  CHECK(r.rep_tag == 0);
  REQUIRE(r.symbol_unitary.size() == 2);  // generator and its inverse
  CHECK(m.unitaries[static_cast<size_t>(r.prep)].dim() == 2);
  CHECK(m.unitaries[static_cast<size_t>(r.final_op)].dim() == 2);
  CHECK(m.partitions[static_cast<size_t>(r.partition)].dim == 2);
}

TEST_CASE("multipass parameters for the free-group family") {
  Dfr f = certified_f2();
  CHECK(f.tau.shape == TauShape::Exp);
  CHECK(f.tau.c1 == doctest::Approx(4.73606798).epsilon(1e-6));
  CHECK(f.tau.c2 == doctest::Approx(0.5));

  ExpParams p = exp_params(f, 0.125, 2);
  // base^2 is about 22.4; the next 2^a 5^b above that is 25
  CHECK(p.half == 0);
  CHECK(p.fifth == 2);
  CHECK(p.coin_den == 25);
  CHECK(p.flips == 9);  // log2(4 d^4 / eps) with d = 2

  CHECK_THROWS_AS(exp_params(f, 0.125, 0), std::invalid_argument);
  CHECK_THROWS_AS(exp_params(f, 0.0, 2), std::invalid_argument);
  CHECK_THROWS_AS(exp_params(certified_z(), 0.125, 2), CertificationError);
  CHECK_THROWS_AS(exp_params(dfr_f2(), 0.125, 2), CertificationError);
}

TEST_CASE("multipass machine structure") {
  Dfr f = certified_f2();
  QcfaMachine m = assemble_exp_machine(f, 0.125);
  CHECK_NOTHROW(validate_machine(m));
  CHECK(m.quantum_dim == 2);
  CHECK((m.generator_labels == std::vector<std::string>{"a", "b"}));
  CHECK(m.symbol_count() == 6);

  const MachineStructure& st = m.structure;
  CHECK(st.kind == MachineStructure::Kind::Loop);
  // d+1 passes per representation plus the trailing coin
  REQUIRE(st.phases.size() == 4);
  for (int j = 0; j < 3; ++j)
    CHECK(st.phases[static_cast<size_t>(j)].kind == MachinePhase::Kind::Round);
  CHECK(st.phases[3].kind == MachinePhase::Kind::CoinScan);
  CHECK(st.phases[3].scan.half == 0);
  CHECK(st.phases[3].scan.fifth == 2);
  CHECK(st.phases[3].scan.flips == 9);
}

TEST_CASE("one-shot machine for the unbounded-error family") {
  Dfr f = dfr_shalen_z_free_zr(1);
  QcfaMachine m = assemble_unbounded_machine(f);
  CHECK_NOTHROW(validate_machine(m));
  CHECK((m.generator_labels == std::vector<std::string>{"y", "x1"}));
  CHECK(m.amplitude_class == AmplitudeClass::CTildeNumeric);

  const MachineStructure& st = m.structure;
  CHECK(st.kind == MachineStructure::Kind::OneShot);
  REQUIRE(st.phases.size() == 3);
  for (const auto& ph : st.phases) CHECK(ph.kind == MachinePhase::Kind::Round);

  // a rational twist keeps everything algebraic
  Dfr fr = dfr_shalen_z_free_zr(1, ShalenAlpha::rational(Rational(1, 4)));
  QcfaMachine mr = assemble_unbounded_machine(fr);
  CHECK_NOTHROW(validate_machine(mr));
  CHECK(mr.amplitude_class == AmplitudeClass::AlgebraicExact);
}

TEST_CASE("standalone coin machines") {
  QcfaMachine walk = build_coin_machine_walk(2, 3, {"a"});
  CHECK_NOTHROW(validate_machine(walk));
  CHECK(walk.structure.kind == MachineStructure::Kind::OneShot);
  REQUIRE(walk.structure.phases.size() == 1);
  CHECK(walk.structure.phases[0].kind == MachinePhase::Kind::CoinWalk);
  CHECK(walk.structure.phases[0].walk.walks == 2);
  CHECK(walk.structure.phases[0].walk.flips == 3);
  CHECK(walk.quantum_dim == 2);

  QcfaMachine scan = build_coin_machine_scan(1, 1, 4, {"a", "b"});
  CHECK_NOTHROW(validate_machine(scan));
  REQUIRE(scan.structure.phases.size() == 1);
  CHECK(scan.structure.phases[0].kind == MachinePhase::Kind::CoinScan);
  CHECK(scan.structure.phases[0].scan.half == 1);
  CHECK(scan.structure.phases[0].scan.fifth == 1);
  CHECK(scan.structure.phases[0].scan.flips == 4);
}

TEST_CASE("overgroup transform rebuilds the machine on the coset table") {
  Dfr f = certified_z();
  QcfaMachine base = assemble_poly_machine(f, 0.125);
  CosetTable table = index_two_z_table();
  QcfaMachine over = transform_overgroup(base, table);
  CHECK_NOTHROW(validate_machine(over));

  CHECK(over.generator_labels == table.labels);
  CHECK(over.quantum_dim == base.quantum_dim);
  CHECK(over.structure.kind == base.structure.kind);
  CHECK(over.structure.overgroup);
  CHECK(over.structure.base_generator_count == base.generator_count());
  CHECK(over.structure.table.cosets == table.cosets);
  REQUIRE(over.structure.phases.size() == base.structure.phases.size());
  for (size_t j = 0; j < over.structure.phases.size(); ++j)
    CHECK(over.structure.phases[j].kind == base.structure.phases[j].kind);

  // stacking a second table on top is refused
  CHECK_THROWS_AS(transform_overgroup(over, table), std::invalid_argument);
  // alphabet mismatch: the table covers a one-generator base
  QcfaMachine m2 = assemble_exp_machine(certified_f2(), 0.125);
  CHECK_THROWS_AS(transform_overgroup(m2, table), std::invalid_argument);
  // stripped metadata leaves nothing to transform
  QcfaMachine bare = base;
  bare.structure = MachineStructure{};
  CHECK_THROWS_AS(transform_overgroup(bare, table), AnalysisUnavailable);

  QcfaMachine dih = transform_overgroup(base, dihedral_over_z_table());
  CHECK_NOTHROW(validate_machine(dih));
  CHECK((dih.generator_labels == std::vector<std::string>{"t", "s"}));
}

TEST_CASE("one-way automaton from the free-group family") {
  Mo1qfa m = build_mo1qfa(dfr_f2());
  CHECK(m.dim == 8);
  CHECK(m.block == 4);
  CHECK((m.generator_labels == std::vector<std::string>{"a", "b"}));
  REQUIRE(m.symbol_unitaries.size() == 4);
  for (const auto& u : m.symbol_unitaries) CHECK(u.dim() == 8);
  CHECK(m.final_op.dim() == 8);
  CHECK(m.start.dim() == 8);
  CHECK(m.start.all_exact());
  CHECK(m.start.norm_sq().same_as(Scalar::one()));

  Dfr bad = dfr_f2();
  bad.reps[0].projective = true;
  CHECK_THROWS_AS(build_mo1qfa(bad), std::invalid_argument);
}
