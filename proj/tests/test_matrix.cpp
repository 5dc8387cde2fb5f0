#include <vector>

#include "doctest.h"
#include "qcfa/common.hpp"
#include "qcfa/matrix.hpp"

using namespace qcfa;

namespace {

// random unit vector with exact rational-complex amplitudes
StateVector random_state(int dim, SplitMix64& rng) {
  std::vector<Rational> re(dim), im(dim);
  Rational norm(0);
  for (int i = 0; i < dim; ++i) {
    re[i] = Rational(static_cast<long>(rng.next() % 9) - 4);
    im[i] = Rational(static_cast<long>(rng.next() % 9) - 4);
    norm += re[i] * re[i] + im[i] * im[i];
  }
  if (norm == 0) { re[0] = 1; norm = 1; }
  // divide by the norm in the sqrt-extended field
  Scalar inv_len = sqrt_scalar(Rational(1) / norm);
  std::vector<Scalar> amps;
  for (int i = 0; i < dim; ++i)
    amps.push_back(Scalar::gauss(re[i], im[i]) * inv_len);
  return StateVector::make(std::move(amps));
}

}  // namespace

TEST_CASE("unitary products and adjoints") {
  UnitaryMatrix h = dft_matrix(2);
  CHECK((h * h.dagger()).same_as(UnitaryMatrix::identity(2)));
  CHECK((h * h).same_as(UnitaryMatrix::identity(2)));
  CHECK(h.trace().same_as(Scalar::zero()));
  for (int d : {2, 3, 4}) {
    // d = 3 falls back to the float backend, so compare against eps
    UnitaryMatrix f = dft_matrix(d);
    CHECK(f.unitarity_defect() < eps_num());
    CHECK((f * f.dagger()).same_as(UnitaryMatrix::identity(d)));
  }
}

TEST_CASE("construction rejects non-unitary entries") {
  std::vector<Scalar> bad = {Scalar::one(), Scalar::one(), Scalar::zero(),
                             Scalar::one()};
  CHECK_THROWS_AS(UnitaryMatrix::make(2, bad, AmplitudeClass::AlgebraicExact),
                  std::invalid_argument);
  CHECK_THROWS_AS(StateVector::make({Scalar::one(), Scalar::one()}),
                  std::invalid_argument);
}

TEST_CASE("permutation matrices bring the chosen column to the front") {
  // v = 1 keeps the order; v = 2 swaps the first two basis states
  CHECK(permutation_matrix(4, 1).same_as(UnitaryMatrix::identity(4)));
  UnitaryMatrix p = permutation_matrix(4, 2);
  StateVector e1 = StateVector::basis(4, 1);
  CHECK(p.apply(e1).amplitudes()[0].same_as(Scalar::one()));
  CHECK((p * p).same_as(UnitaryMatrix::identity(4)));
  CHECK(p.unitarity_defect() == BigFloat(0));
  CHECK_THROWS_AS(permutation_matrix(4, 5), std::invalid_argument);
}

TEST_CASE("kron and direct sum compose dimensions") {
  UnitaryMatrix a = dft_matrix(2), b = permutation_matrix(3, 1);
  CHECK(a.kron(b).dim() == 6);
  CHECK(a.direct_sum(b).dim() == 5);
  CHECK(a.kron(b).unitarity_defect() == BigFloat(0));
  CHECK(a.direct_sum(b).trace().same_as(a.trace() + b.trace()));
}

TEST_CASE("measurement probabilities sum to one") {
  SplitMix64 rng(99);
  for (int dim : {2, 3, 4, 8}) {
    MeasurementPartition part = MeasurementPartition::round_blocks(dim);
    for (int rep = 0; rep < 5; ++rep) {
      StateVector st = random_state(dim, rng);
      Scalar total = Scalar::zero();
      for (const MeasureOutcome& out : measure(st, part)) {
        CHECK(out.prob.sign_real() >= 0);
        total = total + out.prob;
      }
      CHECK(total.same_as(Scalar::one()));
    }
  }
}

TEST_CASE("partition blocks cover every state exactly once") {
  MeasurementPartition part =
      MeasurementPartition::make(5, {{0, 2}, {1}, {3, 4}});
  CHECK(part.block_of(0) == 0);
  CHECK(part.block_of(2) == 0);
  CHECK(part.block_of(1) == 1);
  CHECK(part.block_of(4) == 2);
  CHECK_THROWS_AS(MeasurementPartition::make(3, {{0, 1}}),
                  std::invalid_argument);
  CHECK_THROWS_AS(MeasurementPartition::make(3, {{0, 1}, {1, 2}}),
                  std::invalid_argument);
}

TEST_CASE("transfer unitary maps source onto target") {
  SplitMix64 rng(123);
  for (int rep = 0; rep < 4; ++rep) {
    StateVector from = random_state(4, rng);
    StateVector to = random_state(4, rng);
    UnitaryMatrix u = transfer_unitary(from, to);
    CHECK(u.unitarity_defect() < eps_num());
    StateVector got = u.apply(from);
    for (int i = 0; i < 4; ++i)
      CHECK(got.amplitudes()[i].same_as(to.amplitudes()[i]));
  }
  // real overlap keeps the exact backend exact (1/sqrt(4) is rational)
  StateVector a = StateVector::basis(4, 0);
  StateVector b = StateVector::uniform(4);
  UnitaryMatrix h = transfer_unitary(a, b);
  CHECK(h.all_exact());
  CHECK(h.apply(a).amplitudes()[0].same_as(b.amplitudes()[0]));
}

TEST_CASE("amplitude classes join to the wider one") {
  CHECK(join(AmplitudeClass::AlgebraicExact, AmplitudeClass::GenericNumeric) ==
        AmplitudeClass::GenericNumeric);
  CHECK(join(AmplitudeClass::CTildeNumeric, AmplitudeClass::AlgebraicNumeric) ==
        AmplitudeClass::CTildeNumeric);
  CHECK(amplitude_class_from_string("algebraic-exact") ==
        AmplitudeClass::AlgebraicExact);
  CHECK(amplitude_class_from_string(to_string(AmplitudeClass::CTildeNumeric)) ==
        AmplitudeClass::CTildeNumeric);
  CHECK_THROWS_AS(amplitude_class_from_string("imaginary"),
                  std::invalid_argument);
}
