#pragma once

// Sampling interpreter for assembled machines: runs the transition table
// step by step on a double-precision register. Used to cross-check the
// closed-form analysis; trials are reproducible for a fixed seed and thread
// count does not change the outcome.

#include <complex>

#include "qcfa/common.hpp"
#include "qcfa/machine.hpp"

namespace qcfa {

struct McOptions {
  long trials = 100000;
  std::uint64_t seed = 0;
  long step_limit = 100000000;
  unsigned threads = 1;
};

struct AcceptanceStats {
  long trials = 0;
  long accepted = 0;
  long rejected = 0;
  long cutoff = 0;  // undecided at the step limit; never counted as a verdict
  double accept_freq = 0.0;
  double reject_freq = 0.0;
  double mean_steps = 0.0;    // over decided trials
  double steps_stddev = 0.0;
  double accept_ci = 0.0;     // 1.96 * binomial standard error
};

inline AcceptanceStats finalize_stats(long trials, long accepted, long rejected,
                                      long cutoff, unsigned long long step_sum,
                                      long double step_sq_sum) {
  AcceptanceStats s;
  s.trials = trials;
  s.accepted = accepted;
  s.rejected = rejected;
  s.cutoff = cutoff;
  s.accept_freq = trials ? static_cast<double>(accepted) / trials : 0.0;
  s.reject_freq = trials ? static_cast<double>(rejected) / trials : 0.0;
  long decided = accepted + rejected;
  if (decided > 0) {
    long double mean = static_cast<long double>(step_sum) / decided;
    s.mean_steps = static_cast<double>(mean);
    if (decided > 1) {
      long double var = (step_sq_sum - decided * mean * mean) / (decided - 1);
      if (var < 0) var = 0;
      s.steps_stddev = static_cast<double>(sqrtl(var));
    }
  }
  double p = s.accept_freq;
  if (trials > 0)
    s.accept_ci = 1.96 * std::sqrt(std::max(p * (1 - p), 0.0) / trials);
  return s;
}

struct CompiledMachine {
  int dim = 0;
  std::vector<std::vector<std::complex<double>>> unitaries;
  std::vector<std::vector<int>> block_of;   // partition -> basis state -> block
  std::vector<int> block_count;
};

inline CompiledMachine compile_machine(const QcfaMachine& m) {
  CompiledMachine c;
  c.dim = m.quantum_dim;
  for (const auto& u : m.unitaries) c.unitaries.push_back(u.to_double_matrix());
  for (const auto& p : m.partitions) {
    std::vector<int> map(p.dim, -1);
    for (size_t r = 0; r < p.blocks.size(); ++r)
      for (int q : p.blocks[r]) map[q] = static_cast<int>(r);
    c.block_of.push_back(std::move(map));
    c.block_count.push_back(static_cast<int>(p.blocks.size()));
  }
  return c;
}

inline std::vector<int> word_to_tape(const QcfaMachine& m, const Word& w) {
  check_symbols(w, m.generator_count());
  std::vector<int> tape;
  tape.push_back(m.left_marker());
  for (const auto& s : w) tape.push_back(CosetTable::flat_symbol(s));
  tape.push_back(m.right_marker());
  return tape;
}

// single trial; returns +steps on accept, -steps on reject, 0 on cutoff
inline long run_trial(const QcfaMachine& m, const CompiledMachine& c,
                      const std::vector<int>& tape, SplitMix64& rng,
                      long step_limit) {
  int state = m.c_start;
  int pos = 0;
  std::vector<std::complex<double>> reg(c.dim, 0.0), scratch(c.dim);
  reg[0] = 1.0;
  long steps = 0;
  while (state != m.c_acc && state != m.c_rej) {
    if (steps >= step_limit) return 0;
    int symbol = tape[pos];
    const auto& cell = m.delta[state][symbol];
    if (!cell)
      throw std::logic_error("undefined transition: state " +
                             m.state_names[state] + ", symbol " +
                             std::to_string(symbol));
    int move;
    if (const auto* u = std::get_if<UnitaryAction>(&*cell)) {
      const auto& mat = c.unitaries[u->unitary];
      for (int r = 0; r < c.dim; ++r) {
        std::complex<double> acc = 0.0;
        const std::complex<double>* row = mat.data() + static_cast<size_t>(r) * c.dim;
        for (int k = 0; k < c.dim; ++k) acc += row[k] * reg[k];
        scratch[r] = acc;
      }
      std::swap(reg, scratch);
      state = u->next;
      move = u->move;
    } else {
      const auto& a = std::get<MeasureAction>(*cell);
      const auto& map = c.block_of[a.partition];
      int nblocks = c.block_count[a.partition];
      double probs[16];
      for (int r = 0; r < nblocks; ++r) probs[r] = 0.0;
      for (int q = 0; q < c.dim; ++q) probs[map[q]] += std::norm(reg[q]);
      double total = 0.0;
      for (int r = 0; r < nblocks; ++r) total += probs[r];
      double u01 = rng.next_double() * total;
      int result = nblocks - 1;
      double cum = 0.0;
      for (int r = 0; r < nblocks; ++r) {
        cum += probs[r];
        if (u01 < cum) { result = r; break; }
      }
      double norm = std::sqrt(probs[result]);
      for (int q = 0; q < c.dim; ++q)
        reg[q] = (map[q] == result && norm > 0) ? reg[q] / norm : 0.0;
      state = a.branches[result].next;
      move = a.branches[result].move;
    }
    pos += move;
    if (pos < 0 || pos >= static_cast<int>(tape.size()))
      throw std::logic_error("head ran off the tape");
    ++steps;
  }
  return state == m.c_acc ? steps : -steps;
}

inline AcceptanceStats run_machine_mc(const QcfaMachine& m, const Word& w,
                                      const McOptions& opt) {
  CompiledMachine c = compile_machine(m);
  std::vector<int> tape = word_to_tape(m, w);
  std::vector<long> outcome(static_cast<size_t>(opt.trials));
  parallel_for(
      static_cast<size_t>(opt.trials), opt.threads, apply_thread_precision,
      [&](size_t i) {
        SplitMix64 rng(mix_seed(opt.seed, i));
        outcome[i] = run_trial(m, c, tape, rng, opt.step_limit);
      });
  long accepted = 0, rejected = 0, cutoff = 0;
  unsigned long long step_sum = 0;
  long double step_sq = 0.0;
  for (long v : outcome) {
    if (v == 0) { ++cutoff; continue; }
    long st = v > 0 ? v : -v;
    if (v > 0) ++accepted; else ++rejected;
    step_sum += static_cast<unsigned long long>(st);
    step_sq += static_cast<long double>(st) * st;
  }
  return finalize_stats(opt.trials, accepted, rejected, cutoff, step_sum, step_sq);
}

// the one-way automaton reads the word once; a trial is a single draw from
// the final measurement distribution
inline AcceptanceStats run_mo1qfa_mc(const Mo1qfa& m, const Word& w,
                                     const McOptions& opt) {
  check_symbols(w, static_cast<int>(m.generator_labels.size()));
  std::vector<std::complex<double>> v(m.dim, 0.0), scratch(m.dim);
  for (int i = 0; i < m.dim; ++i) v[i] = m.start[i].to_complex_double();
  std::vector<std::vector<std::complex<double>>> mats;
  for (const auto& u : m.symbol_unitaries) mats.push_back(u.to_double_matrix());
  std::vector<std::complex<double>> fin = m.final_op.to_double_matrix();
  auto apply = [&](const std::vector<std::complex<double>>& mat) {
    for (int r = 0; r < m.dim; ++r) {
      std::complex<double> acc = 0.0;
      for (int k = 0; k < m.dim; ++k)
        acc += mat[static_cast<size_t>(r) * m.dim + k] * v[k];
      scratch[r] = acc;
    }
    std::swap(v, scratch);
  };
  for (const auto& s : w) apply(mats[CosetTable::flat_symbol(s)]);
  apply(fin);
  double p_acc = 0.0, total = 0.0;
  for (int i = 0; i < m.dim; ++i) {
    double n = std::norm(v[i]);
    total += n;
    if (i < m.block) p_acc += n;
  }
  p_acc /= total;
  long accepted = 0;
  for (long i = 0; i < opt.trials; ++i) {
    SplitMix64 rng(mix_seed(opt.seed, static_cast<std::uint64_t>(i)));
    if (rng.next_double() < p_acc) ++accepted;
  }
  long rejected = opt.trials - accepted;
  long steps = static_cast<long>(w.size()) + 2;
  unsigned long long step_sum =
      static_cast<unsigned long long>(steps) * static_cast<unsigned long long>(opt.trials);
  long double step_sq =
      static_cast<long double>(steps) * steps * static_cast<long double>(opt.trials);
  return finalize_stats(opt.trials, accepted, rejected, 0, step_sum, step_sq);
}

}  // namespace qcfa
