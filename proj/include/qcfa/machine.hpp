#pragma once

// Two-way machines with a quantum register: a classical control reads the
// tape (left marker, the word's symbols, right marker) and each step either
// applies a unitary to the register or measures it, then moves the head.
//
// Machines are assembled from phase fragments that all start and end with the
// head on the left marker. This keeps per-phase costs independent of the
// phase outcome, which is what the closed-form analysis in analyze.hpp relies
// on. The step counts asserted there are derived from the emitters in this
// file; change one and you must change the other.

#include <functional>
#include <optional>
#include <variant>

#include "qcfa/dfr.hpp"

namespace qcfa {

constexpr int kMoveLeft = -1;
constexpr int kMoveStay = 0;
constexpr int kMoveRight = 1;

struct UnitaryAction {
  int unitary = 0;
  int next = 0;
  int move = kMoveStay;
};

struct MeasureBranch {
  int next = 0;
  int move = kMoveStay;
};

struct MeasureAction {
  int partition = 0;
  std::vector<MeasureBranch> branches;  // indexed by measurement result
};

using MachineAction = std::variant<UnitaryAction, MeasureAction>;

// ---- assembler metadata ----
// Enough to recompute acceptance probabilities and expected step counts for a
// word without replaying the transition table.

struct RoundPhase {
  int rep_tag = 0;  // rounds sharing a tag scan with the same representation
  std::vector<int> symbol_unitary;  // base flat symbol -> unitary id
  int prep = 0;
  int final_op = 0;
  int partition = 0;
};

struct CoinWalkPhase {  // m reflected walks, then y fair flips
  int walks = 0;
  int flips = 0;
};

struct CoinScanPhase {  // per-symbol bias 2^-half * 5^-fifth, then y fair flips
  int half = 0;
  int fifth = 0;
  int flips = 0;
};

struct MachinePhase {
  enum class Kind { Round, CoinWalk, CoinScan };
  Kind kind = Kind::Round;
  RoundPhase round;
  CoinWalkPhase walk;
  CoinScanPhase scan;
};

struct MachineStructure {
  // Loop: phases repeat until a round rejects or a coin accepts.
  // OneShot: round rejection and coin failure both reject; reaching the end
  // of the phase list accepts.
  enum class Kind { None, Loop, OneShot };
  Kind kind = Kind::None;
  std::vector<MachinePhase> phases;
  double eps = 0.0;
  bool overgroup = false;
  CosetTable table;                // set when overgroup
  int base_generator_count = 0;    // alphabet covered by symbol_unitary maps
};

struct QcfaMachine {
  int quantum_dim = 1;
  std::vector<std::string> state_names;
  int c_start = 0;
  int c_acc = 0;
  int c_rej = 0;
  std::vector<std::string> generator_labels;
  std::vector<UnitaryMatrix> unitaries;
  std::vector<MeasurementPartition> partitions;
  std::vector<std::vector<std::optional<MachineAction>>> delta;
  AmplitudeClass amplitude_class = AmplitudeClass::AlgebraicExact;
  MachineStructure structure;

  int generator_count() const { return static_cast<int>(generator_labels.size()); }
  int symbol_count() const { return 2 * generator_count() + 2; }
  int left_marker() const { return 2 * generator_count(); }
  int right_marker() const { return 2 * generator_count() + 1; }
  int state_count() const { return static_cast<int>(state_names.size()); }
};

inline void validate_machine(const QcfaMachine& m) {
  if (m.delta.size() != static_cast<size_t>(m.state_count()))
    throw std::invalid_argument("delta rows do not match the state list");
  for (const auto& row : m.delta) {
    if (row.size() != static_cast<size_t>(m.symbol_count()))
      throw std::invalid_argument("delta row does not match the alphabet");
    for (const auto& cell : row) {
      if (!cell) continue;
      if (const auto* u = std::get_if<UnitaryAction>(&*cell)) {
        if (u->unitary < 0 || u->unitary >= static_cast<int>(m.unitaries.size()))
          throw std::invalid_argument("unitary id out of range");
        if (u->next < 0 || u->next >= m.state_count())
          throw std::invalid_argument("state id out of range");
        if (m.unitaries[u->unitary].dim() != m.quantum_dim)
          throw std::invalid_argument("unitary dimension mismatch");
      } else {
        const auto& a = std::get<MeasureAction>(*cell);
        if (a.partition < 0 || a.partition >= static_cast<int>(m.partitions.size()))
          throw std::invalid_argument("partition id out of range");
        const auto& p = m.partitions[a.partition];
        if (p.dim != m.quantum_dim)
          throw std::invalid_argument("partition dimension mismatch");
        if (a.branches.size() != p.blocks.size())
          throw std::invalid_argument("one branch per measurement result required");
        for (const auto& b : a.branches)
          if (b.next < 0 || b.next >= m.state_count())
            throw std::invalid_argument("state id out of range");
      }
    }
  }
  auto in_range = [&](int s) { return s >= 0 && s < m.state_count(); };
  if (!in_range(m.c_start) || !in_range(m.c_acc) || !in_range(m.c_rej))
    throw std::invalid_argument("distinguished state out of range");
}

class MachineBuilder {
 public:
  MachineBuilder(int quantum_dim, std::vector<std::string> labels) {
    m_.quantum_dim = quantum_dim;
    m_.generator_labels = std::move(labels);
    m_.c_acc = add_state("accept");
    m_.c_rej = add_state("reject");
  }

  int add_state(const std::string& name) {
    m_.state_names.push_back(name);
    m_.delta.emplace_back(m_.symbol_count());
    return m_.state_count() - 1;
  }

  int add_unitary(const UnitaryMatrix& u) {
    if (u.all_exact()) {
      for (size_t i = 0; i < m_.unitaries.size(); ++i)
        if (m_.unitaries[i].all_exact() && m_.unitaries[i].same_as(u))
          return static_cast<int>(i);
    }
    m_.unitaries.push_back(u);
    return static_cast<int>(m_.unitaries.size()) - 1;
  }

  int add_partition(const MeasurementPartition& p) {
    for (size_t i = 0; i < m_.partitions.size(); ++i)
      if (m_.partitions[i].blocks == p.blocks) return static_cast<int>(i);
    m_.partitions.push_back(p);
    return static_cast<int>(m_.partitions.size()) - 1;
  }

  void set_action(int state, int symbol, MachineAction a) {
    auto& cell = m_.delta.at(state).at(symbol);
    if (cell) throw std::logic_error("transition already defined");
    cell = std::move(a);
  }

  void on_generators(int state, const std::function<MachineAction(int)>& f) {
    for (int s = 0; s < 2 * m_.generator_count(); ++s) set_action(state, s, f(s));
  }

  int identity_unitary() {
    return add_unitary(UnitaryMatrix::identity(m_.quantum_dim));
  }

  const QcfaMachine& peek() const { return m_; }

  QcfaMachine finish(int c_start, MachineStructure structure) {
    m_.c_start = c_start;
    m_.structure = std::move(structure);
    AmplitudeClass c = AmplitudeClass::AlgebraicExact;
    for (const auto& u : m_.unitaries) c = join(c, u.amplitude_class());
    m_.amplitude_class = c;
    validate_machine(m_);
    return std::move(m_);
  }

 private:
  QcfaMachine m_;
};

// ---- coin helper unitaries ----

inline StateVector two_level_state(int dim, const Scalar& a0, const Scalar& a1) {
  std::vector<Scalar> amps(dim, Scalar::zero());
  amps[0] = a0;
  amps[1] = a1;
  return StateVector::make(std::move(amps));
}

// maps |q_s> to sqrt(p)|q1> + sqrt(1-p)|q2>
inline UnitaryMatrix coin_prep(int dim, int s, const Rational& p) {
  Scalar a0 = sqrt_scalar(p);
  Scalar a1 = sqrt_scalar(Rational(1) - p);
  return transfer_unitary(StateVector::basis(dim, s), two_level_state(dim, a0, a1));
}

// maps |q2> back to |q1>
inline UnitaryMatrix coin_restore(int dim) {
  return transfer_unitary(StateVector::basis(dim, 1), StateVector::basis(dim, 0));
}

// ---- phase emitters ----
// Every emitter receives its pre-created entry state so phases can be wired
// cyclically. All phases assume the head is on the left marker at entry and
// leave it there on every exit edge.

struct RoundTargets {
  int pass = 0;
  int fail = 0;
};

// Measurement round, 2n + 4 steps on a word of length n:
// walk right to the right marker (n + 1), prep (1), scan left applying the
// symbol unitaries (n), final operator at the left marker (1), measure (1).
inline void emit_round(MachineBuilder& b, const std::string& pfx,
                       const RoundPhase& spec, int entry, RoundTargets t) {
  int id = b.identity_unitary();
  int scan = b.add_state(pfx + ".scan");
  int meas = b.add_state(pfx + ".meas");
  QcfaMachine const& m = b.peek();
  int fwd = entry;
  b.set_action(fwd, m.left_marker(), UnitaryAction{id, fwd, kMoveRight});
  b.on_generators(fwd, [&](int) {
    return MachineAction{UnitaryAction{id, fwd, kMoveRight}};
  });
  b.set_action(fwd, m.right_marker(), UnitaryAction{spec.prep, scan, kMoveLeft});
  b.on_generators(scan, [&](int s) {
    return MachineAction{UnitaryAction{spec.symbol_unitary.at(s), scan, kMoveLeft}};
  });
  b.set_action(scan, m.left_marker(), UnitaryAction{spec.final_op, meas, kMoveStay});
  MeasureAction done{spec.partition,
                     {MeasureBranch{t.fail, kMoveStay}, MeasureBranch{t.pass, kMoveStay}}};
  b.set_action(meas, m.left_marker(), std::move(done));
}

// Same round with coset tracking for a finite-index subgroup simulation.
// Reading a symbol in coset c feeds the rewrite word for that symbol into the
// scan, one unitary per step, and moves left on the word's last piece; a
// symbol whose rewrite is empty costs a single step. The coset resets at
// every round; a round can only pass in coset 0.
inline void emit_round_overgroup(MachineBuilder& b, const std::string& pfx,
                                 const RoundPhase& spec, const CosetTable& table,
                                 int entry, RoundTargets t) {
  int id = b.identity_unitary();
  QcfaMachine const& m = b.peek();
  int r = table.cosets;
  std::vector<int> scan(r), meas(r);
  for (int c = 0; c < r; ++c) {
    scan[c] = b.add_state(pfx + ".scan.c" + std::to_string(c));
    meas[c] = b.add_state(pfx + ".meas.c" + std::to_string(c));
  }
  int fwd = entry;
  b.set_action(fwd, m.left_marker(), UnitaryAction{id, fwd, kMoveRight});
  b.on_generators(fwd, [&](int) {
    return MachineAction{UnitaryAction{id, fwd, kMoveRight}};
  });
  b.set_action(fwd, m.right_marker(), UnitaryAction{spec.prep, scan[0], kMoveLeft});
  for (int c = 0; c < r; ++c) {
    for (int f = 0; f < 2 * m.generator_count(); ++f) {
      const Word& piece = table.beta_hat.at(f).at(c);
      int target = scan[table.alpha.at(f).at(c)];
      int len = static_cast<int>(piece.size());
      if (len == 0) {
        b.set_action(scan[c], f, UnitaryAction{id, target, kMoveLeft});
        continue;
      }
      auto unit_for = [&](const GeneratorSymbol& s) {
        return spec.symbol_unitary.at(CosetTable::flat_symbol(s));
      };
      // apply the rightmost piece symbol first, as a right-to-left reader would
      int cur = scan[c];
      for (int j = len - 1; j >= 1; --j) {
        int next = b.add_state(pfx + ".feed.c" + std::to_string(c) + ".s" +
                               std::to_string(f) + ".j" + std::to_string(j));
        b.set_action(cur, f, UnitaryAction{unit_for(piece[j]), next, kMoveStay});
        cur = next;
      }
      b.set_action(cur, f, UnitaryAction{unit_for(piece[0]), target, kMoveLeft});
    }
    b.set_action(scan[c], m.left_marker(),
                 UnitaryAction{spec.final_op, meas[c], kMoveStay});
    MeasureAction done{spec.partition,
                       {MeasureBranch{t.fail, kMoveStay},
                        MeasureBranch{c == 0 ? t.pass : t.fail, kMoveStay}}};
    b.set_action(meas[c], m.left_marker(), std::move(done));
  }
}

// Reflected-walk coin R(m, y): m walks from the cell right of the left
// marker, each succeeding iff it reaches the right marker without touching
// the left marker; then y fair flips at the right marker. The success
// probability is exactly (n+1)^-m 2^-y. Expected step count, with N = n + 1
// and W = (N - 1)(2N + 1):
//   m * W + (m - 1)(N + 1) + 2y + N + 2
inline void emit_coin_walk(MachineBuilder& b, const std::string& pfx, int m_walks,
                           int y, int entry, int success, int failure) {
  if (m_walks < 1) throw std::invalid_argument("the walk coin needs m >= 1");
  if (y < 0) throw std::invalid_argument("flip count must be >= 0");
  QcfaMachine const& m = b.peek();
  int id = b.identity_unitary();
  int prep1 = b.add_unitary(coin_prep(m.quantum_dim, 0, Rational(1, 2)));
  int prep2 = b.add_unitary(coin_prep(m.quantum_dim, 1, Rational(1, 2)));
  int restore = b.add_unitary(coin_restore(m.quantum_dim));
  int part = b.add_partition(MeasurementPartition::round_blocks(m.quantum_dim));

  // final scan-back: restore the register at the right marker, walk home,
  // then branch on the accumulated flag at the left marker
  std::vector<int> fsb_pre(2), fsb_pre_fail(2);
  int fsb_ok = b.add_state(pfx + ".fsb.o");
  int fsb_fail = b.add_state(pfx + ".fsb.f");
  for (int s = 0; s < 2; ++s) {
    fsb_pre[s] = b.add_state(pfx + ".fsbpre.r" + std::to_string(s + 1) + ".o");
    fsb_pre_fail[s] = b.add_state(pfx + ".fsbpre.r" + std::to_string(s + 1) + ".f");
    int u = (s == 0) ? id : restore;
    b.set_action(fsb_pre[s], m.right_marker(), UnitaryAction{u, fsb_ok, kMoveLeft});
    b.set_action(fsb_pre_fail[s], m.right_marker(),
                 UnitaryAction{u, fsb_fail, kMoveLeft});
  }
  for (int okf = 0; okf < 2; ++okf) {
    int st = okf ? fsb_fail : fsb_ok;
    b.on_generators(st, [&](int) {
      return MachineAction{UnitaryAction{id, st, kMoveLeft}};
    });
    b.set_action(st, m.left_marker(),
                 UnitaryAction{id, okf ? failure : success, kMoveStay});
  }

  // flip chain; the first prep is the action taken on arriving at the right
  // marker, so each flip costs exactly two steps
  std::vector<int> flip_meas_ok(y), flip_meas_fail(y);
  std::vector<int> flip_prep1_ok(y), flip_prep1_fail(y), flip_prep2_fail(y);
  for (int j = 0; j < y; ++j) {
    flip_meas_ok[j] = b.add_state(pfx + ".fl" + std::to_string(j + 1) + ".m.o");
    flip_meas_fail[j] = b.add_state(pfx + ".fl" + std::to_string(j + 1) + ".m.f");
    if (j > 0) {
      flip_prep1_ok[j] = b.add_state(pfx + ".fl" + std::to_string(j + 1) + ".p1.o");
      flip_prep1_fail[j] = b.add_state(pfx + ".fl" + std::to_string(j + 1) + ".p1.f");
      flip_prep2_fail[j] = b.add_state(pfx + ".fl" + std::to_string(j + 1) + ".p2.f");
      b.set_action(flip_prep1_ok[j], m.right_marker(),
                   UnitaryAction{prep1, flip_meas_ok[j], kMoveStay});
      b.set_action(flip_prep1_fail[j], m.right_marker(),
                   UnitaryAction{prep1, flip_meas_fail[j], kMoveStay});
      b.set_action(flip_prep2_fail[j], m.right_marker(),
                   UnitaryAction{prep2, flip_meas_fail[j], kMoveStay});
    }
  }
  for (int j = 0; j < y; ++j) {
    bool last = (j == y - 1);
    int ok1 = last ? fsb_pre[0] : flip_prep1_ok[j + 1];
    int f1 = last ? fsb_pre_fail[0] : flip_prep1_fail[j + 1];
    int f2 = last ? fsb_pre_fail[1] : flip_prep2_fail[j + 1];
    b.set_action(flip_meas_ok[j], m.right_marker(),
                 MeasureAction{part, {MeasureBranch{f2, kMoveStay},
                                      MeasureBranch{ok1, kMoveStay}}});
    b.set_action(flip_meas_fail[j], m.right_marker(),
                 MeasureAction{part, {MeasureBranch{f2, kMoveStay},
                                      MeasureBranch{f1, kMoveStay}}});
  }

  // walks; prep states carry the register origin and the failure flag
  std::vector<int> wp1o(m_walks), wp1f(m_walks), wp2o(m_walks), wp2f(m_walks);
  std::vector<int> wmo(m_walks), wmf(m_walks), sbo(m_walks), sbf(m_walks);
  for (int i = 0; i < m_walks; ++i) {
    std::string w = pfx + ".w" + std::to_string(i + 1);
    wp1o[i] = b.add_state(w + ".p1.o");
    wp1f[i] = b.add_state(w + ".p1.f");
    wp2o[i] = b.add_state(w + ".p2.o");
    wp2f[i] = b.add_state(w + ".p2.f");
    wmo[i] = b.add_state(w + ".m.o");
    wmf[i] = b.add_state(w + ".m.f");
    if (i > 0) {
      sbo[i] = b.add_state(pfx + ".sb" + std::to_string(i + 1) + ".o");
      sbf[i] = b.add_state(pfx + ".sb" + std::to_string(i + 1) + ".f");
    }
  }
  b.set_action(entry, m.left_marker(), UnitaryAction{id, wp1o[0], kMoveRight});
  for (int i = 0; i < m_walks; ++i) {
    bool last_walk = (i == m_walks - 1);
    for (int okf = 0; okf < 2; ++okf) {
      int p1 = okf ? wp1f[i] : wp1o[i];
      int p2 = okf ? wp2f[i] : wp2o[i];
      int me = okf ? wmf[i] : wmo[i];
      b.on_generators(p1, [&](int) {
        return MachineAction{UnitaryAction{prep1, me, kMoveStay}};
      });
      b.on_generators(p2, [&](int) {
        return MachineAction{UnitaryAction{prep2, me, kMoveStay}};
      });
      b.on_generators(me, [&](int) {
        return MachineAction{MeasureAction{part, {MeasureBranch{p2, kMoveLeft},
                                                  MeasureBranch{p1, kMoveRight}}}};
      });
      // reflection at the left marker marks the walk failed and restores |q1>
      b.set_action(p2, m.left_marker(), UnitaryAction{restore, wp1f[i], kMoveRight});
      // reaching the right marker ends the walk
      int succ_next, succ_unit, succ_move;
      int fail_next;
      if (last_walk) {
        if (y > 0) {
          succ_unit = prep1;
          succ_move = kMoveStay;
          succ_next = flip_meas_ok[0];
          fail_next = flip_meas_fail[0];
        } else {
          succ_unit = id;
          succ_move = kMoveLeft;
          succ_next = fsb_ok;
          fail_next = fsb_fail;
        }
      } else {
        succ_unit = id;
        succ_move = kMoveLeft;
        succ_next = sbo[i + 1];
        fail_next = sbf[i + 1];
      }
      b.set_action(p1, m.right_marker(),
                   UnitaryAction{succ_unit, okf ? fail_next : succ_next, succ_move});
    }
    if (i > 0) {
      for (int okf = 0; okf < 2; ++okf) {
        int sb = okf ? sbf[i] : sbo[i];
        b.on_generators(sb, [&](int) {
          return MachineAction{UnitaryAction{id, sb, kMoveLeft}};
        });
        b.set_action(sb, m.left_marker(),
                     UnitaryAction{id, okf ? wp1f[i] : wp1o[i], kMoveRight});
      }
    }
  }
}

// Scanning coin R'(2^-a 5^-b, y): one pass left to right, a + b two-outcome
// sub-coins per symbol (cost 2(a+b) + 1 per symbol including the move), then
// y fair flips at the right marker. Success probability is exactly
// (2^-a 5^-b)^n 2^-y; the step count is deterministic:
//   1 + n(2(a+b) + 1) + 2y + N + 1
inline void emit_coin_scan(MachineBuilder& b, const std::string& pfx, int half,
                           int fifth, int y, int entry, int success, int failure) {
  if (half < 0 || fifth < 0 || y < 0)
    throw std::invalid_argument("coin parameters must be >= 0");
  QcfaMachine const& m = b.peek();
  int id = b.identity_unitary();
  int restore = b.add_unitary(coin_restore(m.quantum_dim));
  int part = b.add_partition(MeasurementPartition::round_blocks(m.quantum_dim));
  int T = half + fifth;
  auto bias = [&](int t) { return t < half ? Rational(1, 2) : Rational(1, 5); };

  // per-symbol machinery; a q2 outcome always marks failure, so prep-from-q2
  // states only exist with the fail flag
  std::vector<int> tp1o(T), tp1f(T), tp2f(T), tmo(T), tmf(T);
  for (int t = 0; t < T; ++t) {
    std::string s = pfx + ".sy.t" + std::to_string(t + 1);
    tp1o[t] = b.add_state(s + ".p1.o");
    tp1f[t] = b.add_state(s + ".p1.f");
    tp2f[t] = b.add_state(s + ".p2.f");
    tmo[t] = b.add_state(s + ".m.o");
    tmf[t] = b.add_state(s + ".m.f");
  }
  int mv1o = b.add_state(pfx + ".mv.r1.o");
  int mv1f = b.add_state(pfx + ".mv.r1.f");
  int mv2f = b.add_state(pfx + ".mv.r2.f");

  // flips and the final scan-back, as in the walk coin
  std::vector<int> fsb_pre(2), fsb_pre_fail(2);
  int fsb_ok = b.add_state(pfx + ".fsb.o");
  int fsb_fail = b.add_state(pfx + ".fsb.f");
  for (int s = 0; s < 2; ++s) {
    fsb_pre[s] = b.add_state(pfx + ".fsbpre.r" + std::to_string(s + 1) + ".o");
    fsb_pre_fail[s] = b.add_state(pfx + ".fsbpre.r" + std::to_string(s + 1) + ".f");
    int u = (s == 0) ? id : restore;
    b.set_action(fsb_pre[s], m.right_marker(), UnitaryAction{u, fsb_ok, kMoveLeft});
    b.set_action(fsb_pre_fail[s], m.right_marker(),
                 UnitaryAction{u, fsb_fail, kMoveLeft});
  }
  for (int okf = 0; okf < 2; ++okf) {
    int st = okf ? fsb_fail : fsb_ok;
    b.on_generators(st, [&](int) {
      return MachineAction{UnitaryAction{id, st, kMoveLeft}};
    });
    b.set_action(st, m.left_marker(),
                 UnitaryAction{id, okf ? failure : success, kMoveStay});
  }

  int prep_fair1 = b.add_unitary(coin_prep(m.quantum_dim, 0, Rational(1, 2)));
  int prep_fair2 = b.add_unitary(coin_prep(m.quantum_dim, 1, Rational(1, 2)));
  std::vector<int> flip_meas_ok(y), flip_meas_fail(y);
  std::vector<int> flip_prep1_ok(y), flip_prep1_fail(y), flip_prep2_fail(y);
  for (int j = 0; j < y; ++j) {
    flip_meas_ok[j] = b.add_state(pfx + ".fl" + std::to_string(j + 1) + ".m.o");
    flip_meas_fail[j] = b.add_state(pfx + ".fl" + std::to_string(j + 1) + ".m.f");
    if (j > 0) {
      flip_prep1_ok[j] = b.add_state(pfx + ".fl" + std::to_string(j + 1) + ".p1.o");
      flip_prep1_fail[j] = b.add_state(pfx + ".fl" + std::to_string(j + 1) + ".p1.f");
      flip_prep2_fail[j] = b.add_state(pfx + ".fl" + std::to_string(j + 1) + ".p2.f");
      b.set_action(flip_prep1_ok[j], m.right_marker(),
                   UnitaryAction{prep_fair1, flip_meas_ok[j], kMoveStay});
      b.set_action(flip_prep1_fail[j], m.right_marker(),
                   UnitaryAction{prep_fair1, flip_meas_fail[j], kMoveStay});
      b.set_action(flip_prep2_fail[j], m.right_marker(),
                   UnitaryAction{prep_fair2, flip_meas_fail[j], kMoveStay});
    }
  }
  for (int j = 0; j < y; ++j) {
    bool last = (j == y - 1);
    int ok1 = last ? fsb_pre[0] : flip_prep1_ok[j + 1];
    int f1 = last ? fsb_pre_fail[0] : flip_prep1_fail[j + 1];
    int f2 = last ? fsb_pre_fail[1] : flip_prep2_fail[j + 1];
    b.set_action(flip_meas_ok[j], m.right_marker(),
                 MeasureAction{part, {MeasureBranch{f2, kMoveStay},
                                      MeasureBranch{ok1, kMoveStay}}});
    b.set_action(flip_meas_fail[j], m.right_marker(),
                 MeasureAction{part, {MeasureBranch{f2, kMoveStay},
                                      MeasureBranch{f1, kMoveStay}}});
  }

  // entry: step onto the first cell; the state reached on the right marker
  // (with register |q1> guaranteed) starts the flip chain or goes home
  int sym_start_ok = (T > 0) ? tp1o[0] : mv1o;
  int sym_start_fail = (T > 0) ? tp1f[0] : mv1f;
  b.set_action(entry, m.left_marker(), UnitaryAction{id, sym_start_ok, kMoveRight});
  auto wire_marker_exit = [&](int state, bool failed) {
    if (y > 0) {
      b.set_action(state, m.right_marker(),
                   UnitaryAction{failed ? prep_fair1 : prep_fair1,
                                 failed ? flip_meas_fail[0] : flip_meas_ok[0],
                                 kMoveStay});
    } else {
      b.set_action(state, m.right_marker(),
                   UnitaryAction{id, failed ? fsb_fail : fsb_ok, kMoveLeft});
    }
  };
  wire_marker_exit(sym_start_ok, false);
  wire_marker_exit(sym_start_fail, true);

  for (int t = 0; t < T; ++t) {
    int pr1 = b.add_unitary(coin_prep(m.quantum_dim, 0, bias(t)));
    int pr2 = b.add_unitary(coin_prep(m.quantum_dim, 1, bias(t)));
    bool last = (t == T - 1);
    int n1o = last ? mv1o : tp1o[t + 1];
    int n1f = last ? mv1f : tp1f[t + 1];
    int n2f = last ? mv2f : tp2f[t + 1];
    for (int okf = 0; okf < 2; ++okf) {
      int p1 = okf ? tp1f[t] : tp1o[t];
      int me = okf ? tmf[t] : tmo[t];
      b.on_generators(p1, [&](int) {
        return MachineAction{UnitaryAction{pr1, me, kMoveStay}};
      });
      int succ = okf ? n1f : n1o;
      b.on_generators(me, [&](int) {
        return MachineAction{MeasureAction{part, {MeasureBranch{n2f, kMoveStay},
                                                  MeasureBranch{succ, kMoveStay}}}};
      });
    }
    b.on_generators(tp2f[t], [&](int) {
      return MachineAction{UnitaryAction{pr2, tmf[t], kMoveStay}};
    });
  }
  // the move step restores the register while stepping right
  b.on_generators(mv1o, [&](int) {
    return MachineAction{UnitaryAction{id, sym_start_ok, kMoveRight}};
  });
  b.on_generators(mv1f, [&](int) {
    return MachineAction{UnitaryAction{id, sym_start_fail, kMoveRight}};
  });
  b.on_generators(mv2f, [&](int) {
    return MachineAction{UnitaryAction{restore, sym_start_fail, kMoveRight}};
  });
}

// ---- parameter derivation and full assemblies ----

struct PolyParams {
  int rounds = 0;  // k
  int walks = 0;   // m
  int flips = 0;   // y
};

inline PolyParams poly_params(const Dfr& f, double eps) {
  if (!(eps > 0.0 && eps < 1.0)) throw std::invalid_argument("eps must lie in (0,1)");
  if (!f.diagonal)
    throw CertificationError("the single-measurement assembly needs a diagonal family");
  const TauModel& t = f.tau;
  if (!t.has_constants)
    throw CertificationError("tau constants missing; certify and calibrate first");
  double c1, c2;
  if (t.shape == TauShape::Constant) {
    c1 = t.c1;
    c2 = 0.0;
  } else if (t.shape == TauShape::Poly) {
    c1 = t.c1;
    c2 = t.c2;
  } else {
    throw CertificationError("the single-measurement assembly needs a polynomial tau");
  }
  PolyParams p;
  p.rounds = f.k;
  p.walks = std::max(1, static_cast<int>(std::ceil(c2)));
  double yreal = std::log2(static_cast<double>(f.d) / (eps * c1));
  p.flips = std::max(0, static_cast<int>(std::ceil(yreal)));
  return p;
}

inline std::vector<int> register_rep_unitaries(MachineBuilder& b,
                                               const UnitaryRep& rep) {
  std::vector<int> ids(2 * rep.images.size());
  for (size_t i = 0; i < rep.images.size(); ++i) {
    ids[2 * i] = b.add_unitary(rep.images[i]);
    ids[2 * i + 1] = b.add_unitary(rep.images[i].dagger());
  }
  return ids;
}

inline RoundPhase make_round_phase(MachineBuilder& b, const UnitaryRep& rep,
                                   int rep_tag, const UnitaryMatrix& prep,
                                   const UnitaryMatrix& final_op) {
  RoundPhase ph;
  ph.rep_tag = rep_tag;
  ph.symbol_unitary = register_rep_unitaries(b, rep);
  ph.prep = b.add_unitary(prep);
  ph.final_op = b.add_unitary(final_op);
  ph.partition = b.add_partition(MeasurementPartition::round_blocks(rep.dim));
  return ph;
}

inline QcfaMachine assemble_poly_machine(const Dfr& f, double eps) {
  PolyParams p = poly_params(f, eps);
  int d = f.d;
  if (f.group.generator_count() == 0)
    throw std::invalid_argument("cannot assemble a machine over an empty alphabet");
  MachineBuilder b(d, f.group.labels);
  UnitaryMatrix prep =
      transfer_unitary(StateVector::basis(d, 0), StateVector::uniform(d));
  UnitaryMatrix final_op = dft_matrix(d);

  MachineStructure st;
  st.kind = MachineStructure::Kind::Loop;
  st.eps = eps;
  st.base_generator_count = f.group.generator_count();

  std::vector<int> entries;
  for (int j = 0; j < f.k; ++j)
    entries.push_back(b.add_state("p" + std::to_string(j) + ".fwd"));
  int coin_entry = b.add_state("coin.in");

  for (int j = 0; j < f.k; ++j) {
    MachinePhase ph;
    ph.kind = MachinePhase::Kind::Round;
    ph.round = make_round_phase(b, f.reps[j], j, prep, final_op);
    st.phases.push_back(ph);
    int pass = (j + 1 < f.k) ? entries[j + 1] : coin_entry;
    emit_round(b, "p" + std::to_string(j), st.phases.back().round, entries[j],
               RoundTargets{pass, b.peek().c_rej});
  }
  {
    MachinePhase ph;
    ph.kind = MachinePhase::Kind::CoinWalk;
    ph.walk = CoinWalkPhase{p.walks, p.flips};
    st.phases.push_back(ph);
    emit_coin_walk(b, "coin", p.walks, p.flips, coin_entry, b.peek().c_acc,
                   entries[0]);
  }
  return b.finish(entries[0], std::move(st));
}

struct ExpParams {
  int half = 0;   // a
  int fifth = 0;  // b
  int flips = 0;  // y
  long coin_den = 1;  // 2^a 5^b
};

inline ExpParams exp_params(const Dfr& f, double eps, int coin_base_exponent = 2) {
  if (!(eps > 0.0 && eps < 1.0)) throw std::invalid_argument("eps must lie in (0,1)");
  if (coin_base_exponent < 1)
    throw std::invalid_argument("coin base exponent must be >= 1");
  const TauModel& t = f.tau;
  if (!t.has_constants || t.shape != TauShape::Exp)
    throw CertificationError(
        "the multipass assembly needs a calibrated exponential tau");
  double target = std::pow(t.c1, coin_base_exponent);
  // the per-symbol bias must be expressible with fair and one-in-five
  // sub-coins, so round the denominator up to the next 2^a 5^b
  long best = -1;
  int best_a = 0, best_b = 0;
  for (int bb = 0; std::pow(5.0, bb) <= 4.0 * target + 16; ++bb) {
    double rest = target / std::pow(5.0, bb);
    int aa = 0;
    while (std::pow(2.0, aa) < rest) ++aa;
    double cand = std::pow(2.0, aa) * std::pow(5.0, bb);
    long icand = static_cast<long>(std::llround(cand));
    if (best < 0 || icand < best ||
        (icand == best && aa + bb < best_a + best_b)) {
      best = icand;
      best_a = aa;
      best_b = bb;
    }
  }
  if (best < 2) {  // degenerate gap bound; keep a genuine coin anyway
    best = 2;
    best_a = 1;
    best_b = 0;
  }
  ExpParams p;
  p.half = best_a;
  p.fifth = best_b;
  p.coin_den = best;
  double d4 = 4.0 * std::pow(static_cast<double>(f.d), 4.0);
  p.flips = std::max(0, static_cast<int>(std::ceil(std::log2(d4 / eps))));
  return p;
}

// the multipass block for one representation: uniform-prep round with the
// discrete Fourier final, then one round per basis state v with the
// cyclic-completion permutation final
inline void append_multipass_rounds(MachineBuilder& b, const UnitaryRep& rep,
                                    int rep_tag, std::vector<RoundPhase>& specs) {
  int d = rep.dim;
  UnitaryMatrix fprep =
      transfer_unitary(StateVector::basis(d, 0), StateVector::uniform(d));
  specs.push_back(make_round_phase(b, rep, rep_tag, fprep, dft_matrix(d)));
  for (int v = 1; v <= d; ++v) {
    UnitaryMatrix prep =
        transfer_unitary(StateVector::basis(d, 0), StateVector::basis(d, v - 1));
    specs.push_back(
        make_round_phase(b, rep, rep_tag, prep, permutation_matrix(d, v)));
  }
}

inline QcfaMachine assemble_exp_machine(const Dfr& f, double eps,
                                        int coin_base_exponent = 2) {
  ExpParams p = exp_params(f, eps, coin_base_exponent);
  int d = f.d;
  if (f.group.generator_count() == 0)
    throw std::invalid_argument("cannot assemble a machine over an empty alphabet");
  MachineBuilder b(d, f.group.labels);

  MachineStructure st;
  st.kind = MachineStructure::Kind::Loop;
  st.eps = eps;
  st.base_generator_count = f.group.generator_count();

  int total_rounds = f.k * (d + 1);
  std::vector<int> entries;
  for (int j = 0; j < total_rounds; ++j)
    entries.push_back(b.add_state("p" + std::to_string(j) + ".fwd"));
  int coin_entry = b.add_state("coin.in");

  std::vector<RoundPhase> specs;
  for (int j = 0; j < f.k; ++j)
    append_multipass_rounds(b, f.reps[j], j, specs);
  for (int j = 0; j < total_rounds; ++j) {
    MachinePhase ph;
    ph.kind = MachinePhase::Kind::Round;
    ph.round = specs[j];
    st.phases.push_back(ph);
    int pass = (j + 1 < total_rounds) ? entries[j + 1] : coin_entry;
    emit_round(b, "p" + std::to_string(j), specs[j], entries[j],
               RoundTargets{pass, b.peek().c_rej});
  }
  {
    MachinePhase ph;
    ph.kind = MachinePhase::Kind::CoinScan;
    ph.scan = CoinScanPhase{p.half, p.fifth, p.flips};
    st.phases.push_back(ph);
    emit_coin_scan(b, "coin", p.half, p.fifth, p.flips, coin_entry,
                   b.peek().c_acc, entries[0]);
  }
  return b.finish(entries[0], std::move(st));
}

// single sweep of multipass blocks; any rejection is final and surviving all
// passes accepts, so the machine halts within k(d+1) passes
inline QcfaMachine assemble_unbounded_machine(const Dfr& f) {
  int d = f.d;
  if (f.group.generator_count() == 0)
    throw std::invalid_argument("cannot assemble a machine over an empty alphabet");
  MachineBuilder b(d, f.group.labels);

  MachineStructure st;
  st.kind = MachineStructure::Kind::OneShot;
  st.base_generator_count = f.group.generator_count();

  int total_rounds = f.k * (d + 1);
  std::vector<int> entries;
  for (int j = 0; j < total_rounds; ++j)
    entries.push_back(b.add_state("p" + std::to_string(j) + ".fwd"));

  std::vector<RoundPhase> specs;
  for (int j = 0; j < f.k; ++j)
    append_multipass_rounds(b, f.reps[j], j, specs);
  for (int j = 0; j < total_rounds; ++j) {
    MachinePhase ph;
    ph.kind = MachinePhase::Kind::Round;
    ph.round = specs[j];
    st.phases.push_back(ph);
    int pass = (j + 1 < total_rounds) ? entries[j + 1] : b.peek().c_acc;
    emit_round(b, "p" + std::to_string(j), specs[j], entries[j],
               RoundTargets{pass, b.peek().c_rej});
  }
  return b.finish(entries[0], std::move(st));
}

// one-shot machines for exercising the coins on their own
inline QcfaMachine build_coin_machine_walk(int m_walks, int y,
                                           std::vector<std::string> labels) {
  MachineBuilder b(2, std::move(labels));
  MachineStructure st;
  st.kind = MachineStructure::Kind::OneShot;
  st.base_generator_count = static_cast<int>(b.peek().generator_labels.size());
  int entry = b.add_state("coin.in");
  MachinePhase ph;
  ph.kind = MachinePhase::Kind::CoinWalk;
  ph.walk = CoinWalkPhase{m_walks, y};
  st.phases.push_back(ph);
  emit_coin_walk(b, "coin", m_walks, y, entry, b.peek().c_acc, b.peek().c_rej);
  return b.finish(entry, std::move(st));
}

inline QcfaMachine build_coin_machine_scan(int half, int fifth, int y,
                                           std::vector<std::string> labels) {
  MachineBuilder b(2, std::move(labels));
  MachineStructure st;
  st.kind = MachineStructure::Kind::OneShot;
  st.base_generator_count = static_cast<int>(b.peek().generator_labels.size());
  int entry = b.add_state("coin.in");
  MachinePhase ph;
  ph.kind = MachinePhase::Kind::CoinScan;
  ph.scan = CoinScanPhase{half, fifth, y};
  st.phases.push_back(ph);
  emit_coin_scan(b, "coin", half, fifth, y, entry, b.peek().c_acc, b.peek().c_rej);
  return b.finish(entry, std::move(st));
}

// Rebuilds a machine for the overgroup given by a coset table: rounds track
// the coset and feed rewrite words into the base scan unitaries, coins run
// unchanged on the longer tape. Requires assembler metadata on the input.
inline QcfaMachine transform_overgroup(const QcfaMachine& base,
                                       const CosetTable& table) {
  if (base.structure.kind == MachineStructure::Kind::None)
    throw AnalysisUnavailable("the overgroup transform needs assembler metadata");
  if (base.structure.overgroup)
    throw std::invalid_argument("stacking overgroup transforms is not supported");
  if (table.base_generator_count != base.generator_count())
    throw std::invalid_argument("coset table does not match the base alphabet");

  MachineBuilder b(base.quantum_dim, table.labels);

  MachineStructure st;
  st.kind = base.structure.kind;
  st.eps = base.structure.eps;
  st.overgroup = true;
  st.table = table;
  st.base_generator_count = base.generator_count();

  int phase_count = static_cast<int>(base.structure.phases.size());
  std::vector<int> entries;
  for (int j = 0; j < phase_count; ++j) {
    const auto& ph = base.structure.phases[j];
    std::string name = (ph.kind == MachinePhase::Kind::Round)
                           ? ("p" + std::to_string(j) + ".fwd")
                           : ("coin" + std::to_string(j) + ".in");
    entries.push_back(b.add_state(name));
  }

  bool loop = (st.kind == MachineStructure::Kind::Loop);
  for (int j = 0; j < phase_count; ++j) {
    MachinePhase ph = base.structure.phases[j];
    bool last = (j + 1 == phase_count);
    int next_entry = last ? (loop ? entries[0] : b.peek().c_acc) : entries[j + 1];
    switch (ph.kind) {
      case MachinePhase::Kind::Round: {
        RoundPhase spec = ph.round;
        std::vector<int> remapped(spec.symbol_unitary.size());
        for (size_t s = 0; s < spec.symbol_unitary.size(); ++s)
          remapped[s] = b.add_unitary(base.unitaries[spec.symbol_unitary[s]]);
        spec.symbol_unitary = remapped;
        spec.prep = b.add_unitary(base.unitaries[ph.round.prep]);
        spec.final_op = b.add_unitary(base.unitaries[ph.round.final_op]);
        spec.partition = b.add_partition(base.partitions[ph.round.partition]);
        ph.round = spec;
        emit_round_overgroup(b, "p" + std::to_string(j), spec, table, entries[j],
                             RoundTargets{next_entry, b.peek().c_rej});
        break;
      }
      case MachinePhase::Kind::CoinWalk: {
        int success = b.peek().c_acc;
        int failure = loop ? entries[0] : b.peek().c_rej;
        if (loop && !last) failure = next_entry;  // unused in our assemblies
        emit_coin_walk(b, "coin" + std::to_string(j), ph.walk.walks,
                       ph.walk.flips, entries[j], success, failure);
        break;
      }
      case MachinePhase::Kind::CoinScan: {
        int success = b.peek().c_acc;
        int failure = loop ? entries[0] : b.peek().c_rej;
        if (loop && !last) failure = next_entry;
        emit_coin_scan(b, "coin" + std::to_string(j), ph.scan.half,
                       ph.scan.fifth, ph.scan.flips, entries[j], success,
                       failure);
        break;
      }
    }
    st.phases.push_back(ph);
  }
  return b.finish(entries[0], std::move(st));
}

// ---- measure-once one-way automaton built on a control qubit ----

struct Mo1qfa {
  int dim = 0;       // 2 D^2 with D = k d
  int block = 0;     // D^2
  StateVector start;
  std::vector<UnitaryMatrix> symbol_unitaries;  // flat symbol -> controlled op
  UnitaryMatrix final_op;
  std::vector<std::string> generator_labels;
  AmplitudeClass amplitude_class = AmplitudeClass::AlgebraicExact;

  Mo1qfa() : start(StateVector::basis(1, 0)), final_op(UnitaryMatrix::identity(1)) {}
};

inline Mo1qfa build_mo1qfa(const Dfr& f) {
  for (const auto& r : f.reps)
    if (r.projective)
      throw std::invalid_argument(
          "the one-way construction needs genuine representations");
  int D = f.k * f.d;
  int block = D * D;
  Mo1qfa m;
  m.dim = 2 * block;
  m.block = block;
  m.generator_labels = f.group.labels;

  // (|0> + |1>)/sqrt(2) on the control, maximally entangled pair elsewhere
  std::vector<Scalar> amps(static_cast<size_t>(m.dim), Scalar::zero());
  Scalar a = sqrt_scalar(Rational(1, 2 * D));
  for (int c = 0; c < 2; ++c)
    for (int u = 0; u < D; ++u)
      amps[static_cast<size_t>(c) * block + u * D + u] = a;
  m.start = StateVector::make(std::move(amps));

  AmplitudeClass cls = f.amplitude_class();
  for (int s = 0; s < 2 * f.group.generator_count(); ++s) {
    int gen = s / 2;
    bool inv = (s % 2) == 1;
    // block-diagonal direct sum over the family, then tensor the reference
    UnitaryMatrix sum = inv ? f.reps[0].images[gen].dagger() : f.reps[0].images[gen];
    for (int j = 1; j < f.k; ++j) {
      UnitaryMatrix im = inv ? f.reps[j].images[gen].dagger() : f.reps[j].images[gen];
      sum = sum.direct_sum(im);
    }
    UnitaryMatrix lifted = sum.kron(UnitaryMatrix::identity(D));
    UnitaryMatrix ctrl = UnitaryMatrix::identity(block).direct_sum(lifted);
    m.symbol_unitaries.push_back(ctrl);
    cls = join(cls, ctrl.amplitude_class());
  }
  m.final_op = dft_matrix(2).kron(UnitaryMatrix::identity(block));
  m.amplitude_class = cls;
  return m;
}

}  // namespace qcfa
