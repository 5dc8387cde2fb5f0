#pragma once

// Closed-form analysis of assembled machines. Every phase starts and ends at
// the left marker and its expected step count does not depend on its outcome,
// so an iteration decomposes into a chain of phases with known continue
// probabilities. For looping machines the iteration count is geometric in the
// per-iteration halting probability and Wald's identity gives the expected
// total. Probabilities stay in the scalar field, so they are exact whenever
// the machine is.
//
// The step-count formulas here mirror the emitters in machine.hpp.

#include <map>

#include "qcfa/machine.hpp"

namespace qcfa {

struct RoundAnalysis {
  Scalar p_acc;                 // per-iteration accept probability
  Scalar p_rej;                 // per-iteration reject probability
  Scalar p_halt;                // p_acc + p_rej
  Scalar overall_accept;        // probability the machine ever accepts
  Scalar expected_iterations;   // 1 / p_halt for loops, 1 for one-shot runs
  Scalar expected_steps;
  std::vector<Scalar> phase_continue;  // per-phase continue probability
  std::vector<Scalar> phase_steps;     // per-phase expected step count
  bool exact = false;
};

namespace detail {

struct PhaseEffect {
  Scalar cont = Scalar::zero();
  Scalar acc = Scalar::zero();
  Scalar rej = Scalar::zero();
  Scalar steps = Scalar::zero();
};

inline Scalar rational_power(long base, int exp) {
  Integer v = 1;
  for (int i = 0; i < exp; ++i) v *= base;
  return Scalar::from_rational(Rational(Integer(1), v));
}

// |<q1| final P prep |q1>|^2 for the word product P
inline Scalar round_pass_probability(const QcfaMachine& m, const RoundPhase& ph,
                                     const UnitaryMatrix& word_product) {
  const UnitaryMatrix& prep = m.unitaries[ph.prep];
  const UnitaryMatrix& fin = m.unitaries[ph.final_op];
  StateVector v = StateVector::basis(m.quantum_dim, 0);
  v = prep.apply(v);
  v = word_product.apply(v);
  v = fin.apply(v);
  return v[0].norm_sq();
}

}  // namespace detail

// coset and rewritten base word for an overgroup machine input, scanning
// right to left exactly as the fed rounds do
inline std::pair<int, Word> rewrite_through_table(const CosetTable& table,
                                                 const Word& w) {
  int coset = 0;
  std::vector<const Word*> pieces;
  for (auto it = w.rbegin(); it != w.rend(); ++it) {
    int f = CosetTable::flat_symbol(*it);
    pieces.push_back(&table.beta_hat.at(f).at(coset));
    coset = table.alpha.at(f).at(coset);
  }
  Word base;
  for (auto it = pieces.rbegin(); it != pieces.rend(); ++it)
    base.insert(base.end(), (*it)->begin(), (*it)->end());
  return {coset, base};
}

inline RoundAnalysis analyze_machine(const QcfaMachine& m, const Word& w) {
  const MachineStructure& st = m.structure;
  if (st.kind == MachineStructure::Kind::None)
    throw AnalysisUnavailable("no assembler metadata on this machine");
  check_symbols(w, m.generator_count());
  long n = static_cast<long>(w.size());
  long N = n + 1;
  bool loop = (st.kind == MachineStructure::Kind::Loop);

  // overgroup machines scan a rewritten word and pay per-symbol feed costs
  int coset = 0;
  Word scan_word = w;
  Scalar round_steps = Scalar::from_int(2 * n + 4);
  if (st.overgroup) {
    auto [c, base] = rewrite_through_table(st.table, w);
    coset = c;
    scan_word = std::move(base);
    long feed = 0;
    {
      int cur = 0;
      for (auto it = w.rbegin(); it != w.rend(); ++it) {
        int f = CosetTable::flat_symbol(*it);
        long len = static_cast<long>(st.table.beta_hat.at(f).at(cur).size());
        feed += std::max(1L, len);
        cur = st.table.alpha.at(f).at(cur);
      }
    }
    round_steps = Scalar::from_int(n + 4 + feed);
  }

  // word products per representation tag
  std::map<int, UnitaryMatrix> products;
  auto product_for = [&](const RoundPhase& ph) -> const UnitaryMatrix& {
    auto it = products.find(ph.rep_tag);
    if (it != products.end()) return it->second;
    UnitaryMatrix p = UnitaryMatrix::identity(m.quantum_dim);
    for (const auto& s : scan_word)
      p = p * m.unitaries[ph.symbol_unitary.at(CosetTable::flat_symbol(s))];
    return products.emplace(ph.rep_tag, std::move(p)).first->second;
  };

  std::vector<detail::PhaseEffect> effects;
  for (const auto& ph : st.phases) {
    detail::PhaseEffect e;
    switch (ph.kind) {
      case MachinePhase::Kind::Round: {
        Scalar p = detail::round_pass_probability(m, ph.round, product_for(ph.round));
        if (st.overgroup && coset != 0) {
          e.cont = Scalar::zero();
          e.rej = Scalar::one();
        } else {
          e.cont = p;
          e.rej = Scalar::one() - p;
        }
        e.steps = round_steps;
        break;
      }
      case MachinePhase::Kind::CoinWalk: {
        const auto& c = ph.walk;
        Scalar succ = detail::rational_power(N, c.walks) *
                      detail::rational_power(2, c.flips);
        e.acc = succ;
        if (loop) e.cont = Scalar::one() - succ;
        else e.rej = Scalar::one() - succ;
        // m W + (m-1)(N+1) + 2y + N + 2 with W = (N-1)(2N+1)
        Rational W = Rational(N - 1) * Rational(2 * N + 1);
        Rational total = Rational(c.walks) * W +
                         Rational(c.walks - 1) * Rational(N + 1) +
                         Rational(2 * c.flips) + Rational(N + 2);
        e.steps = Scalar::from_rational(total);
        break;
      }
      case MachinePhase::Kind::CoinScan: {
        const auto& c = ph.scan;
        Scalar succ = detail::rational_power(2, c.half * static_cast<int>(n)) *
                      detail::rational_power(5, c.fifth * static_cast<int>(n)) *
                      detail::rational_power(2, c.flips);
        e.acc = succ;
        if (loop) e.cont = Scalar::one() - succ;
        else e.rej = Scalar::one() - succ;
        // 1 + n(2(a+b) + 1) + 2y + N + 1, deterministic
        long per = 2L * (c.half + c.fifth) + 1;
        e.steps = Scalar::from_int(1 + n * per + 2L * c.flips + N + 1);
        break;
      }
    }
    effects.push_back(std::move(e));
  }

  RoundAnalysis out;
  out.exact = (m.amplitude_class == AmplitudeClass::AlgebraicExact);
  Scalar reach = Scalar::one();
  Scalar p_acc = Scalar::zero(), p_rej = Scalar::zero(), steps = Scalar::zero();
  for (const auto& e : effects) {
    p_acc = p_acc + reach * e.acc;
    p_rej = p_rej + reach * e.rej;
    steps = steps + reach * e.steps;
    out.phase_continue.push_back(e.cont);
    out.phase_steps.push_back(e.steps);
    reach = reach * e.cont;
  }
  if (!loop) {
    // surviving every phase of a one-shot machine accepts
    p_acc = p_acc + reach;
    out.p_acc = p_acc;
    out.p_rej = p_rej;
    out.p_halt = Scalar::one();
    out.overall_accept = p_acc;
    out.expected_iterations = Scalar::one();
    out.expected_steps = steps;
    return out;
  }
  Scalar p_halt = p_acc + p_rej;
  if (p_halt.sign_real() <= 0)
    throw AnalysisUnavailable("the machine never halts on this input");
  Scalar inv_halt = Scalar::one() / p_halt;
  out.p_acc = p_acc;
  out.p_rej = p_rej;
  out.p_halt = p_halt;
  out.overall_accept = p_acc * inv_halt;
  out.expected_iterations = inv_halt;
  out.expected_steps = steps * inv_halt;
  return out;
}

struct Mo1qfaAnalysis {
  Scalar p_acc;
  Scalar p_rej;
  long steps = 0;
  bool exact = false;
};

inline Mo1qfaAnalysis analyze_mo1qfa(const Mo1qfa& m, const Word& w) {
  check_symbols(w, static_cast<int>(m.generator_labels.size()));
  StateVector v = m.start;
  for (const auto& s : w)
    v = m.symbol_unitaries[CosetTable::flat_symbol(s)].apply(v);
  v = m.final_op.apply(v);
  Scalar p = Scalar::zero();
  for (int i = 0; i < m.block; ++i) p = p + v[i].norm_sq();
  Mo1qfaAnalysis out;
  out.p_acc = p;
  out.p_rej = Scalar::one() - p;
  out.steps = static_cast<long>(w.size()) + 2;
  out.exact = (m.amplitude_class == AmplitudeClass::AlgebraicExact);
  return out;
}

}  // namespace qcfa
