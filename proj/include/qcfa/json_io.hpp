#pragma once

// JSON round-trips for groups, matrices, representation families, machines,
// and sampling statistics. Exact scalars serialize as eight rational strings
// (the real and imaginary coordinates over the 1, sqrt2, sqrt5, sqrt10
// basis); float scalars as two decimal strings at working precision, so an
// entry's array length tells the backend apart. Machine files keep the
// assembler metadata so a reloaded machine stays analyzable.

#include <fstream>
#include <sstream>
#include <string>

#include "json.hpp"

#include "qcfa/dfr.hpp"
#include "qcfa/machine.hpp"
#include "qcfa/montecarlo.hpp"

namespace qcfa {

using Json = nlohmann::json;

// ---- scalars ----

inline Json scalar_to_json(const Scalar& s) {
  Json j = Json::array();
  if (s.is_exact()) {
    const ExactScalar& e = s.exact();
    for (int i = 0; i < 4; ++i) {
      j.push_back(rational_to_string(e.c[i].re));
      j.push_back(rational_to_string(e.c[i].im));
    }
  } else {
    BigComplex z = s.to_big_complex();
    j.push_back(z.re.str(0, std::ios_base::scientific));
    j.push_back(z.im.str(0, std::ios_base::scientific));
  }
  return j;
}

inline Scalar scalar_from_json(const Json& j) {
  if (!j.is_array() || (j.size() != 8 && j.size() != 2))
    throw std::invalid_argument("scalar entries are arrays of 8 or 2 strings");
  if (j.size() == 8) {
    ExactScalar e;
    for (int i = 0; i < 4; ++i) {
      e.c[i].re = parse_rational(j[2 * i].get<std::string>());
      e.c[i].im = parse_rational(j[2 * i + 1].get<std::string>());
    }
    return Scalar(std::move(e));
  }
  try {
    return Scalar::big(BigFloat(j[0].get<std::string>()),
                       BigFloat(j[1].get<std::string>()));
  } catch (const std::exception&) {
    throw std::invalid_argument("bad float literal in scalar entry");
  }
}

// ---- matrices ----

inline Json matrix_to_json(const UnitaryMatrix& m) {
  Json entries = Json::array();
  for (int r = 0; r < m.dim(); ++r)
    for (int c = 0; c < m.dim(); ++c) entries.push_back(scalar_to_json(m.at(r, c)));
  return Json{{"dim", m.dim()},
              {"backend", m.all_exact() ? "exact" : "float"},
              {"class", to_string(m.amplitude_class())},
              {"entries", std::move(entries)}};
}

inline UnitaryMatrix matrix_from_json(const Json& j) {
  int dim = j.at("dim").get<int>();
  AmplitudeClass cls = amplitude_class_from_string(j.at("class").get<std::string>());
  const Json& entries = j.at("entries");
  if (!entries.is_array() || entries.size() != static_cast<size_t>(dim) * dim)
    throw std::invalid_argument("matrix entry count does not match dim");
  std::vector<Scalar> v;
  v.reserve(entries.size());
  for (const auto& e : entries) v.push_back(scalar_from_json(e));
  return UnitaryMatrix::make(dim, std::move(v), cls);
}

// ---- words ----

inline Json word_to_json(const Word& w) { return Json(word_to_ints(w)); }

inline Word word_from_json(const Json& j) {
  return word_from_ints(j.get<std::vector<int>>());
}

// ---- groups ----

inline Json coset_table_to_json(const CosetTable& t) {
  Json alpha = Json::array(), beta = Json::array();
  for (int f = 0; f < t.symbol_count(); ++f) {
    alpha.push_back(t.alpha[f]);
    Json row = Json::array();
    for (const Word& w : t.beta_hat[f]) row.push_back(word_to_json(w));
    beta.push_back(std::move(row));
  }
  Json trans = Json::array();
  for (const Word& w : t.transversal) trans.push_back(word_to_json(w));
  Json embed = Json::array();
  for (const Word& w : t.base_embedding) embed.push_back(word_to_json(w));
  return Json{{"cosets", t.cosets},
              {"base_generator_count", t.base_generator_count},
              {"labels", t.labels},
              {"alpha", std::move(alpha)},
              {"beta_hat", std::move(beta)},
              {"transversal", std::move(trans)},
              {"base_embedding", std::move(embed)}};
}

inline CosetTable coset_table_from_json(const Json& j) {
  CosetTable t;
  t.cosets = j.at("cosets").get<int>();
  t.base_generator_count = j.at("base_generator_count").get<int>();
  t.labels = j.at("labels").get<std::vector<std::string>>();
  for (const auto& row : j.at("alpha"))
    t.alpha.push_back(row.get<std::vector<int>>());
  for (const auto& row : j.at("beta_hat")) {
    std::vector<Word> words;
    for (const auto& w : row) words.push_back(word_from_json(w));
    t.beta_hat.push_back(std::move(words));
  }
  for (const auto& w : j.at("transversal")) t.transversal.push_back(word_from_json(w));
  for (const auto& w : j.at("base_embedding"))
    t.base_embedding.push_back(word_from_json(w));
  return t;
}

inline Json group_to_json(const GroupPresentation& g) {
  Json params = Json::object();
  switch (g.family) {
    case GroupFamily::Trivial: break;
    case GroupFamily::CyclicFinite: params["modulus"] = g.modulus; break;
    case GroupFamily::FreeAbelian: params["rank"] = g.rank; break;
    case GroupFamily::AbelianMixed:
      params["rank"] = g.rank;
      params["moduli"] = g.moduli;
      break;
    case GroupFamily::Free: params["rank"] = g.rank; break;
    case GroupFamily::DirectProductOfFrees:
      params["factor_ranks"] = g.factor_ranks;
      break;
    case GroupFamily::FreeProductZWithZr: params["rank"] = g.rank; break;
    case GroupFamily::VirtualOvergroup:
      params["base"] = group_to_json(*g.base);
      break;
  }
  Json j{{"family", to_string(g.family)},
         {"params", std::move(params)},
         {"labels", g.labels}};
  if (g.family == GroupFamily::VirtualOvergroup) {
    Json t = coset_table_to_json(*g.table);
    // the pinned schema exposes the action tables at the top level
    j["alpha"] = t["alpha"];
    j["beta_hat"] = t["beta_hat"];
    j["table"] = std::move(t);
  } else {
    j["alpha"] = nullptr;
    j["beta_hat"] = nullptr;
  }
  return j;
}

inline GroupPresentation group_from_json(const Json& j) {
  std::string fam = j.at("family").get<std::string>();
  const Json& params = j.at("params");
  GroupPresentation g;
  if (fam == "trivial") {
    g = GroupPresentation::trivial();
  } else if (fam == "cyclic") {
    g = GroupPresentation::cyclic(params.at("modulus").get<long>());
  } else if (fam == "free-abelian") {
    g = GroupPresentation::free_abelian(params.at("rank").get<int>());
  } else if (fam == "abelian-mixed") {
    g = GroupPresentation::abelian_mixed(
        params.at("rank").get<int>(), params.at("moduli").get<std::vector<long>>());
  } else if (fam == "free") {
    g = GroupPresentation::free_group(params.at("rank").get<int>());
  } else if (fam == "direct-product-of-frees") {
    g = GroupPresentation::direct_product_of_frees(
        params.at("factor_ranks").get<std::vector<int>>());
  } else if (fam == "free-product-z-zr") {
    g = GroupPresentation::free_product_z_zr(params.at("rank").get<int>());
  } else if (fam == "virtual-overgroup") {
    GroupPresentation base = group_from_json(params.at("base"));
    g = GroupPresentation::virtual_overgroup(std::move(base),
                                             coset_table_from_json(j.at("table")));
  } else {
    throw std::invalid_argument("unknown group family '" + fam + "'");
  }
  if (j.contains("labels") && !j.at("labels").is_null()) {
    auto labels = j.at("labels").get<std::vector<std::string>>();
    if (labels.size() != static_cast<size_t>(g.generator_count()))
      throw std::invalid_argument("label list does not match the generator count");
    g.labels = std::move(labels);
  }
  return g;
}

// ---- tau models ----

inline TauKind tau_kind_from_string(const std::string& s) {
  if (s == "constant") return TauKind::Constant;
  if (s == "poly-lower") return TauKind::PolyLower;
  if (s == "exp-lower") return TauKind::ExpLower;
  if (s == "calibrated") return TauKind::Calibrated;
  if (s == "unbounded") return TauKind::Unbounded;
  throw std::invalid_argument("unknown tau kind '" + s + "'");
}

inline TauShape tau_shape_from_string(const std::string& s) {
  if (s == "constant") return TauShape::Constant;
  if (s == "poly") return TauShape::Poly;
  if (s == "exp") return TauShape::Exp;
  throw std::invalid_argument("unknown tau shape '" + s + "'");
}

inline Json tau_to_json(const TauModel& t) {
  Json params{{"shape", to_string(t.shape)},
              {"has_constants", t.has_constants},
              {"c1", t.c1},
              {"c2", t.c2},
              {"fixed_exponent", t.fixed_exponent}};
  Json calibration;
  if (t.kind == TauKind::Calibrated) {
    Json table = Json::array();
    for (const auto& [n, m] : t.table) table.push_back(Json::array({n, m}));
    calibration = Json{{"radius", t.calibrated_radius}, {"table", std::move(table)}};
  } else {
    calibration = nullptr;
  }
  return Json{{"kind", to_string(t.kind)},
              {"params", std::move(params)},
              {"calibration", std::move(calibration)}};
}

inline TauModel tau_from_json(const Json& j) {
  TauModel t;
  t.kind = tau_kind_from_string(j.at("kind").get<std::string>());
  const Json& p = j.at("params");
  t.shape = tau_shape_from_string(p.at("shape").get<std::string>());
  t.has_constants = p.at("has_constants").get<bool>();
  t.c1 = p.at("c1").get<double>();
  t.c2 = p.at("c2").get<double>();
  t.fixed_exponent = p.at("fixed_exponent").get<bool>();
  const Json& cal = j.at("calibration");
  if (!cal.is_null()) {
    t.calibrated_radius = cal.at("radius").get<int>();
    for (const auto& row : cal.at("table"))
      t.table.emplace_back(row.at(0).get<int>(), row.at(1).get<double>());
  }
  return t;
}

// ---- representation families ----

inline Json dfr_to_json(const Dfr& f) {
  Json reps = Json::array();
  bool projective = false;
  for (const auto& r : f.reps) {
    projective = projective || r.projective;
    Json images = Json::array();
    for (const auto& m : r.images) images.push_back(matrix_to_json(m));
    Json rep{{"images", std::move(images)}, {"projective", r.projective}};
    if (!r.factorizations.empty()) {
      Json fact = Json::array();
      for (const auto& steps : r.factorizations) {
        Json seq = Json::array();
        for (const auto& m : steps) seq.push_back(matrix_to_json(m));
        fact.push_back(std::move(seq));
      }
      rep["factorizations"] = std::move(fact);
    }
    reps.push_back(std::move(rep));
  }
  return Json{{"group", group_to_json(f.group)},
              {"k", f.k},
              {"d", f.d},
              {"diagonal", f.diagonal},
              {"projective", projective},
              {"amplitude_class", to_string(f.amplitude_class())},
              {"tau", tau_to_json(f.tau)},
              {"certified", f.certified},
              {"certified_radius", f.certified_radius},
              {"reps", std::move(reps)}};
}

inline Dfr dfr_from_json(const Json& j) {
  GroupPresentation g = group_from_json(j.at("group"));
  std::vector<UnitaryRep> reps;
  for (const auto& rj : j.at("reps")) {
    std::vector<UnitaryMatrix> images;
    for (const auto& m : rj.at("images")) images.push_back(matrix_from_json(m));
    UnitaryRep r = UnitaryRep::make(g, std::move(images),
                                    rj.at("projective").get<bool>());
    if (rj.contains("factorizations")) {
      for (const auto& seq : rj.at("factorizations")) {
        std::vector<UnitaryMatrix> steps;
        for (const auto& m : seq) steps.push_back(matrix_from_json(m));
        r.factorizations.push_back(std::move(steps));
      }
    }
    reps.push_back(std::move(r));
  }
  Dfr f = Dfr::make(std::move(g), std::move(reps), tau_from_json(j.at("tau")));
  f.certified = j.value("certified", false);
  f.certified_radius = j.value("certified_radius", 0);
  if (j.at("k").get<int>() != f.k || j.at("d").get<int>() != f.d)
    throw std::invalid_argument("family header disagrees with the rep list");
  return f;
}

// ---- machines ----

inline Json machine_to_json(const QcfaMachine& m) {
  Json unitaries = Json::array();
  for (const auto& u : m.unitaries) unitaries.push_back(matrix_to_json(u));
  Json partitions = Json::array();
  for (const auto& p : m.partitions) partitions.push_back(p.blocks);
  Json delta = Json::array();
  for (int s = 0; s < m.state_count(); ++s) {
    for (int sym = 0; sym < m.symbol_count(); ++sym) {
      const auto& cell = m.delta[s][sym];
      if (!cell) continue;
      Json action;
      if (const auto* u = std::get_if<UnitaryAction>(&*cell)) {
        action = Json{{"type", "unitary"},
                      {"unitary", u->unitary},
                      {"next", u->next},
                      {"move", u->move}};
      } else {
        const auto& a = std::get<MeasureAction>(*cell);
        Json branches = Json::array();
        for (const auto& b : a.branches)
          branches.push_back(Json{{"next", b.next}, {"move", b.move}});
        action = Json{{"type", "measure"},
                      {"partition", a.partition},
                      {"branches", std::move(branches)}};
      }
      delta.push_back(
          Json{{"state", s}, {"symbol", sym}, {"action", std::move(action)}});
    }
  }

  Json structure;
  const MachineStructure& st = m.structure;
  if (st.kind == MachineStructure::Kind::None) {
    structure = nullptr;
  } else {
    Json phases = Json::array();
    for (const auto& ph : st.phases) {
      switch (ph.kind) {
        case MachinePhase::Kind::Round:
          phases.push_back(Json{{"kind", "round"},
                                {"rep_tag", ph.round.rep_tag},
                                {"symbol_unitary", ph.round.symbol_unitary},
                                {"prep", ph.round.prep},
                                {"final", ph.round.final_op},
                                {"partition", ph.round.partition}});
          break;
        case MachinePhase::Kind::CoinWalk:
          phases.push_back(Json{{"kind", "coin-walk"},
                                {"walks", ph.walk.walks},
                                {"flips", ph.walk.flips}});
          break;
        case MachinePhase::Kind::CoinScan:
          phases.push_back(Json{{"kind", "coin-scan"},
                                {"half", ph.scan.half},
                                {"fifth", ph.scan.fifth},
                                {"flips", ph.scan.flips}});
          break;
      }
    }
    structure = Json{{"kind", st.kind == MachineStructure::Kind::Loop ? "loop"
                                                                      : "one-shot"},
                     {"eps", st.eps},
                     {"base_generator_count", st.base_generator_count},
                     {"overgroup", st.overgroup},
                     {"table", st.overgroup ? coset_table_to_json(st.table)
                                            : Json(nullptr)},
                     {"phases", std::move(phases)}};
  }

  return Json{{"type", "2qcfa"},
              {"d", m.quantum_dim},
              {"classical_states", m.state_names},
              {"start", m.c_start},
              {"accept", m.c_acc},
              {"reject", m.c_rej},
              {"labels", m.generator_labels},
              {"amplitude_class", to_string(m.amplitude_class)},
              {"unitaries", std::move(unitaries)},
              {"partitions", std::move(partitions)},
              {"delta", std::move(delta)},
              {"structure", std::move(structure)}};
}

inline QcfaMachine machine_from_json(const Json& j) {
  QcfaMachine m;
  m.quantum_dim = j.at("d").get<int>();
  m.state_names = j.at("classical_states").get<std::vector<std::string>>();
  m.c_start = j.at("start").get<int>();
  m.c_acc = j.at("accept").get<int>();
  m.c_rej = j.at("reject").get<int>();
  m.generator_labels = j.at("labels").get<std::vector<std::string>>();
  m.amplitude_class =
      amplitude_class_from_string(j.at("amplitude_class").get<std::string>());
  for (const auto& u : j.at("unitaries")) m.unitaries.push_back(matrix_from_json(u));
  for (const auto& p : j.at("partitions"))
    m.partitions.push_back(MeasurementPartition::make(
        m.quantum_dim, p.get<std::vector<std::vector<int>>>()));
  m.delta.assign(m.state_names.size(),
                 std::vector<std::optional<MachineAction>>(m.symbol_count()));
  for (const auto& cell : j.at("delta")) {
    int s = cell.at("state").get<int>();
    int sym = cell.at("symbol").get<int>();
    if (s < 0 || s >= m.state_count() || sym < 0 || sym >= m.symbol_count())
      throw std::invalid_argument("delta cell out of range");
    const Json& a = cell.at("action");
    std::string type = a.at("type").get<std::string>();
    if (type == "unitary") {
      m.delta[s][sym] = UnitaryAction{a.at("unitary").get<int>(),
                                      a.at("next").get<int>(),
                                      a.at("move").get<int>()};
    } else if (type == "measure") {
      MeasureAction ma;
      ma.partition = a.at("partition").get<int>();
      for (const auto& b : a.at("branches"))
        ma.branches.push_back(
            MeasureBranch{b.at("next").get<int>(), b.at("move").get<int>()});
      m.delta[s][sym] = std::move(ma);
    } else {
      throw std::invalid_argument("unknown action type '" + type + "'");
    }
  }

  const Json& st = j.at("structure");
  if (!st.is_null()) {
    std::string kind = st.at("kind").get<std::string>();
    if (kind == "loop") m.structure.kind = MachineStructure::Kind::Loop;
    else if (kind == "one-shot") m.structure.kind = MachineStructure::Kind::OneShot;
    else throw std::invalid_argument("unknown structure kind '" + kind + "'");
    m.structure.eps = st.at("eps").get<double>();
    m.structure.base_generator_count = st.at("base_generator_count").get<int>();
    m.structure.overgroup = st.at("overgroup").get<bool>();
    if (m.structure.overgroup)
      m.structure.table = coset_table_from_json(st.at("table"));
    for (const auto& ph : st.at("phases")) {
      MachinePhase p;
      std::string pk = ph.at("kind").get<std::string>();
      if (pk == "round") {
        p.kind = MachinePhase::Kind::Round;
        p.round.rep_tag = ph.at("rep_tag").get<int>();
        p.round.symbol_unitary = ph.at("symbol_unitary").get<std::vector<int>>();
        p.round.prep = ph.at("prep").get<int>();
        p.round.final_op = ph.at("final").get<int>();
        p.round.partition = ph.at("partition").get<int>();
      } else if (pk == "coin-walk") {
        p.kind = MachinePhase::Kind::CoinWalk;
        p.walk.walks = ph.at("walks").get<int>();
        p.walk.flips = ph.at("flips").get<int>();
      } else if (pk == "coin-scan") {
        p.kind = MachinePhase::Kind::CoinScan;
        p.scan.half = ph.at("half").get<int>();
        p.scan.fifth = ph.at("fifth").get<int>();
        p.scan.flips = ph.at("flips").get<int>();
      } else {
        throw std::invalid_argument("unknown phase kind '" + pk + "'");
      }
      m.structure.phases.push_back(std::move(p));
    }
  }
  validate_machine(m);
  return m;
}

// one-way machines share the artifact format, distinguished by "type"
inline Json mo1qfa_to_json(const Mo1qfa& m) {
  Json start = Json::array();
  for (const Scalar& a : m.start.amplitudes()) start.push_back(scalar_to_json(a));
  Json symbols = Json::array();
  for (const auto& u : m.symbol_unitaries) symbols.push_back(matrix_to_json(u));
  return Json{{"type", "mo1qfa"},
              {"dim", m.dim},
              {"block", m.block},
              {"labels", m.generator_labels},
              {"amplitude_class", to_string(m.amplitude_class)},
              {"start", std::move(start)},
              {"symbol_unitaries", std::move(symbols)},
              {"final", matrix_to_json(m.final_op)}};
}

inline Mo1qfa mo1qfa_from_json(const Json& j) {
  Mo1qfa m;
  m.dim = j.at("dim").get<int>();
  m.block = j.at("block").get<int>();
  m.generator_labels = j.at("labels").get<std::vector<std::string>>();
  m.amplitude_class =
      amplitude_class_from_string(j.at("amplitude_class").get<std::string>());
  std::vector<Scalar> amps;
  for (const auto& a : j.at("start")) amps.push_back(scalar_from_json(a));
  if (static_cast<int>(amps.size()) != m.dim)
    throw std::invalid_argument("start vector size disagrees with dim");
  m.start = StateVector::make(std::move(amps));
  for (const auto& u : j.at("symbol_unitaries"))
    m.symbol_unitaries.push_back(matrix_from_json(u));
  if (m.symbol_unitaries.size() != 2 * m.generator_labels.size())
    throw std::invalid_argument("need one unitary per signed symbol");
  m.final_op = matrix_from_json(j.at("final"));
  if (m.block <= 0 || m.block * 2 != m.dim)
    throw std::invalid_argument("accept block must be half the dimension");
  return m;
}

// "2qcfa" (default when the tag is missing) or "mo1qfa"
inline std::string machine_type_of(const Json& j) {
  return j.value("type", std::string("2qcfa"));
}

// ---- sampling statistics ----

inline Json stats_to_json(const AcceptanceStats& s) {
  return Json{{"trials", s.trials},
              {"accepted", s.accepted},
              {"rejected", s.rejected},
              {"cutoff", s.cutoff},
              {"accept_freq", s.accept_freq},
              {"reject_freq", s.reject_freq},
              {"mean_steps", s.mean_steps},
              {"steps_stddev", s.steps_stddev},
              {"accept_ci", s.accept_ci}};
}

inline std::string stats_to_csv(const AcceptanceStats& s) {
  std::ostringstream os;
  os << "trials,accepted,rejected,cutoff,accept_freq,reject_freq,mean_steps,"
        "steps_stddev,accept_ci\n";
  os.precision(17);
  os << s.trials << ',' << s.accepted << ',' << s.rejected << ',' << s.cutoff
     << ',' << s.accept_freq << ',' << s.reject_freq << ',' << s.mean_steps
     << ',' << s.steps_stddev << ',' << s.accept_ci << '\n';
  return os.str();
}

// ---- files and config ----

inline Json load_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open '" + path + "'");
  Json j;
  try {
    in >> j;
  } catch (const Json::parse_error& e) {
    throw std::invalid_argument("bad JSON in '" + path + "': " + e.what());
  }
  return j;
}

inline void save_json(const std::string& path, const Json& j) {
  std::ofstream out(path);
  if (!out) throw std::invalid_argument("cannot write '" + path + "'");
  out << j.dump(2) << '\n';
}

// "key=value" pairs from repeated --config flags
inline std::map<std::string, std::string> parse_config_pairs(
    const std::vector<std::string>& items) {
  std::map<std::string, std::string> out;
  for (const auto& item : items) {
    auto eq = item.find('=');
    if (eq == std::string::npos || eq == 0)
      throw std::invalid_argument("config entries look like key=value, got '" +
                                  item + "'");
    out[item.substr(0, eq)] = item.substr(eq + 1);
  }
  return out;
}

}  // namespace qcfa
