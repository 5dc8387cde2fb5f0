// qcfa: build and certify representation families, assemble machines, run
// and analyze words, and execute the verification suites. Single binary,
// batch only. Exit codes: 0 ok, 1 usage, 2 certification failure, 3 analysis
// unavailable, 4 verification failure.
#include <cstdint>
#include <cstdio>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "qcfa/json_io.hpp"
#include "qcfa/verify.hpp"

namespace {

using namespace qcfa;

struct VerificationFailure : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct GlobalOpts {
  int precision_bits = 256;
  double eps_override = 0.0;  // 0 keeps the 2^-(bits/2) default
  std::uint64_t seed = 0;
  bool seed_given = false;
  long trials = 100000;
  long step_limit = 100000000;
  int threads = 1;
  std::string format = "pretty";
};

McOptions mc_options(const GlobalOpts& g) {
  McOptions mo;
  mo.trials = g.trials;
  mo.seed = g.seed;
  mo.step_limit = g.step_limit;
  mo.threads = g.threads;
  return mo;
}

std::vector<long> parse_longs(const std::string& text) {
  std::vector<long> out;
  std::stringstream ss(text);
  std::string tok;
  while (std::getline(ss, tok, ',')) out.push_back(std::stol(tok));
  return out;
}

Dfr build_family(const std::string& family, long m, int r, double delta,
                 const std::string& moduli, const std::string& alpha) {
  if (family == "trivial") return dfr_trivial();
  if (family == "zm") return dfr_zm(m);
  if (family == "z-algebraic") return dfr_z_algebraic();
  if (family == "z-nonalgebraic") return dfr_z_nonalgebraic(delta);
  if (family == "f2") return dfr_f2();
  if (family == "fr") return dfr_fr(r);
  if (family == "abelian-algebraic")
    return dfr_abelian_algebraic(r, parse_longs(moduli));
  if (family == "abelian-nonalgebraic")
    return dfr_abelian_nonalgebraic(r, parse_longs(moduli), delta);
  if (family == "direct-product-of-frees") {
    std::vector<int> ranks;
    for (long v : parse_longs(moduli.empty() ? std::to_string(r) : moduli))
      ranks.push_back(static_cast<int>(v));
    return dfr_direct_product_of_frees(ranks);
  }
  if (family == "tan-zr") return dfr_tan_zr(r);
  if (family == "shalen") {
    if (alpha == "sqrt2") return dfr_shalen_z_free_zr(r);
    return dfr_shalen_z_free_zr(r, ShalenAlpha::rational(parse_rational(alpha)));
  }
  throw std::invalid_argument("unknown family '" + family + "'");
}

void emit_artifact(const Json& j, const std::string& out, const std::string& what) {
  if (out.empty()) {
    std::cout << j.dump(2) << "\n";
  } else {
    save_json(out, j);
    std::cerr << "wrote " << what << " to " << out << "\n";
  }
}

int cmd_dfr_build(const std::string& family, long m, int r, double delta,
                  const std::string& moduli, const std::string& alpha,
                  const std::string& out) {
  Dfr f = build_family(family, m, r, delta, moduli, alpha);
  std::ostringstream what;
  what << family << " family [k=" << f.k << ", d=" << f.d << "]";
  emit_artifact(dfr_to_json(f), out, what.str());
  return 0;
}

int cmd_dfr_certify(const GlobalOpts& g, const std::string& file, int radius,
                    long element_cap, const std::string& out) {
  Dfr f = dfr_from_json(load_json(file));
  CertifyOptions co;
  if (element_cap > 0) co.element_cap = element_cap;
  CertifyReport rep = certify_dfr(f, radius, co);

  if (g.format == "json") {
    Json minima = Json::array();
    for (const LengthMinimum& lm : rep.minima)
      minima.push_back(Json{{"n", lm.n},
                            {"sphere_min", lm.sphere_min},
                            {"cumulative", lm.cumulative},
                            {"witness", word_to_json(lm.witness)}});
    std::cout << Json{{"radius", rep.radius},
                      {"ok", rep.ok},
                      {"elements", rep.elements},
                      {"exp_base", rep.exp_base},
                      {"poly_c1", rep.poly_c1},
                      {"poly_c2", rep.poly_c2},
                      {"minima", std::move(minima)}}
                     .dump(2)
              << "\n";
  } else if (g.format == "csv") {
    std::cout << "n,sphere_min,cumulative,witness\n";
    for (const LengthMinimum& lm : rep.minima)
      std::cout << lm.n << "," << lm.sphere_min << "," << lm.cumulative << ","
                << print_word(lm.witness, f.group.labels) << "\n";
  } else {
    std::printf("scanned %ld elements to radius %d\n", rep.elements, rep.radius);
    std::printf("%4s  %-12s  %-12s  witness\n", "n", "sphere min", "m(n)");
    for (const LengthMinimum& lm : rep.minima)
      std::printf("%4d  %-12.6g  %-12.6g  %s\n", lm.n, lm.sphere_min,
                  lm.cumulative, print_word(lm.witness, f.group.labels).c_str());
  }

  if (!rep.ok)
    throw CertificationError(
        "degenerate family: every representation is scalar on '" +
        print_word(rep.degenerate_witness, f.group.labels) + "'");

  apply_certification(f, rep);
  std::string dest = out.empty() ? file : out;
  save_json(dest, dfr_to_json(f));
  std::cerr << "certified to radius " << radius << "; updated " << dest << "\n";
  return 0;
}

int cmd_machine_build(const std::string& dfr_file, const std::string& mode,
                      double eps, int coin_exponent, const std::string& base,
                      const std::string& table_name,
                      const std::string& table_file, const std::string& out) {
  if (mode == "overgroup") {
    if (base.empty())
      throw std::invalid_argument("--mode overgroup needs --base <machine file>");
    Json bj = load_json(base);
    if (machine_type_of(bj) != "2qcfa")
      throw std::invalid_argument("only two-way machines can be transformed");
    QcfaMachine bm = machine_from_json(bj);
    CosetTable table;
    if (!table_file.empty())
      table = coset_table_from_json(load_json(table_file));
    else if (table_name == "index-two-z")
      table = index_two_z_table();
    else if (table_name == "dihedral-over-z")
      table = dihedral_over_z_table();
    else
      throw std::invalid_argument(
          "--table must be index-two-z or dihedral-over-z, or use --table-file");
    QcfaMachine m = transform_overgroup(bm, table);
    emit_artifact(machine_to_json(m), out, "overgroup machine");
    return 0;
  }

  if (dfr_file.empty())
    throw std::invalid_argument("--mode " + mode + " needs --dfr <family file>");
  Dfr f = dfr_from_json(load_json(dfr_file));
  if (mode == "poly") {
    emit_artifact(machine_to_json(assemble_poly_machine(f, eps)), out,
                  "polynomial-time machine");
  } else if (mode == "exp") {
    emit_artifact(machine_to_json(assemble_exp_machine(f, eps, coin_exponent)),
                  out, "exponential-time machine");
  } else if (mode == "unbounded") {
    emit_artifact(machine_to_json(assemble_unbounded_machine(f)), out,
                  "unbounded-error machine");
  } else if (mode == "mo1qfa") {
    emit_artifact(mo1qfa_to_json(build_mo1qfa(f)), out, "one-way machine");
  } else {
    throw std::invalid_argument("unknown mode '" + mode + "'");
  }
  return 0;
}

void print_stats(const GlobalOpts& g, const AcceptanceStats& st) {
  if (g.format == "json") {
    std::cout << stats_to_json(st).dump(2) << "\n";
  } else if (g.format == "csv") {
    std::cout << stats_to_csv(st);
  } else {
    std::printf("trials %ld  accepted %ld  rejected %ld  cutoff %ld\n",
                st.trials, st.accepted, st.rejected, st.cutoff);
    std::printf("accept_freq %.6g +- %.2g  mean_steps %.6g (stddev %.6g)\n",
                st.accept_freq, st.accept_ci, st.mean_steps, st.steps_stddev);
  }
}

int cmd_machine_run(const GlobalOpts& g, const std::string& file,
                    const std::string& word_text) {
  Json j = load_json(file);
  if (machine_type_of(j) == "mo1qfa") {
    Mo1qfa m = mo1qfa_from_json(j);
    Word w = parse_word(word_text, m.generator_labels);
    print_stats(g, run_mo1qfa_mc(m, w, mc_options(g)));
  } else {
    QcfaMachine m = machine_from_json(j);
    Word w = parse_word(word_text, m.generator_labels);
    print_stats(g, run_machine_mc(m, w, mc_options(g)));
  }
  return 0;
}

int cmd_machine_analyze(const GlobalOpts& g, const std::string& file,
                        const std::string& word_text) {
  Json j = load_json(file);
  if (machine_type_of(j) == "mo1qfa") {
    Mo1qfa m = mo1qfa_from_json(j);
    Word w = parse_word(word_text, m.generator_labels);
    Mo1qfaAnalysis a = analyze_mo1qfa(m, w);
    if (g.format == "json") {
      std::cout << Json{{"p_acc", a.p_acc.real_d()},
                        {"p_rej", a.p_rej.real_d()},
                        {"steps", a.steps},
                        {"exact", a.exact}}
                       .dump(2)
                << "\n";
    } else {
      std::printf("accept %.12g  reject %.12g  steps %ld  (%s)\n",
                  a.p_acc.real_d(), a.p_rej.real_d(), a.steps,
                  a.exact ? "exact" : "float");
    }
    return 0;
  }

  QcfaMachine m = machine_from_json(j);
  Word w = parse_word(word_text, m.generator_labels);
  RoundAnalysis a = analyze_machine(m, w);
  if (g.format == "json") {
    Json cont = Json::array(), steps = Json::array();
    for (const Scalar& c : a.phase_continue) cont.push_back(c.real_d());
    for (const Scalar& s : a.phase_steps) steps.push_back(s.real_d());
    std::cout << Json{{"overall_accept", a.overall_accept.real_d()},
                      {"overall_reject", 1.0 - a.overall_accept.real_d()},
                      {"p_acc", a.p_acc.real_d()},
                      {"p_rej", a.p_rej.real_d()},
                      {"p_halt", a.p_halt.real_d()},
                      {"expected_iterations", a.expected_iterations.real_d()},
                      {"expected_steps", a.expected_steps.real_d()},
                      {"phase_continue", std::move(cont)},
                      {"phase_steps", std::move(steps)},
                      {"exact", a.exact}}
                     .dump(2)
              << "\n";
  } else {
    std::printf("overall accept %.12g  reject %.12g  (%s)\n",
                a.overall_accept.real_d(), 1.0 - a.overall_accept.real_d(),
                a.exact ? "exact" : "float");
    std::printf("per iteration: accept %.6g  reject %.6g  halt %.6g\n",
                a.p_acc.real_d(), a.p_rej.real_d(), a.p_halt.real_d());
    std::printf("expected iterations %.6g  expected steps %.6g\n",
                a.expected_iterations.real_d(), a.expected_steps.real_d());
    for (size_t i = 0; i < a.phase_continue.size(); ++i)
      std::printf("  phase %zu: continue %.6g, steps %.6g\n", i,
                  a.phase_continue[i].real_d(), a.phase_steps[i].real_d());
  }
  return 0;
}

std::vector<int> parse_lengths(const std::string& spec) {
  std::vector<int> out;
  if (spec.find(':') != std::string::npos) {
    std::stringstream ss(spec);
    std::string tok;
    std::vector<int> parts;
    while (std::getline(ss, tok, ':')) parts.push_back(std::stoi(tok));
    if (parts.size() < 2 || parts.size() > 3)
      throw std::invalid_argument("length range must be first:last[:step]");
    int step = parts.size() == 3 ? parts[2] : 2;
    if (step <= 0) throw std::invalid_argument("length step must be positive");
    for (int n = parts[0]; n <= parts[1]; n += step) out.push_back(n);
  } else {
    for (long v : parse_longs(spec)) out.push_back(static_cast<int>(v));
  }
  for (int n : out)
    if (n <= 0 || n % 2)
      throw std::invalid_argument(
          "profile lengths must be positive and even (identity words)");
  if (out.empty()) throw std::invalid_argument("no profile lengths given");
  return out;
}

int cmd_machine_profile(const GlobalOpts& g, const std::string& file,
                        const std::string& lengths_spec) {
  Json j = load_json(file);
  if (machine_type_of(j) != "2qcfa")
    throw AnalysisUnavailable("profiling needs a round-structured machine");
  QcfaMachine m = machine_from_json(j);
  std::vector<int> lengths = parse_lengths(lengths_spec);
  std::vector<ProfilePoint> pts = runtime_profile(m, lengths);
  FitResult ll = fit_loglog(pts);
  FitResult sl = fit_semilog(pts);

  if (g.format == "json") {
    Json rows = Json::array();
    for (const ProfilePoint& p : pts)
      rows.push_back(Json{{"n", p.n}, {"expected_steps", p.expected_steps}});
    std::cout << Json{{"points", std::move(rows)},
                      {"fit_loglog", {{"slope", ll.slope}, {"r2", ll.r2}}},
                      {"fit_semilog", {{"slope", sl.slope}, {"r2", sl.r2}}}}
                     .dump(2)
              << "\n";
  } else if (g.format == "csv") {
    std::cout << "n,expected_steps\n";
    for (const ProfilePoint& p : pts)
      std::cout << p.n << "," << p.expected_steps << "\n";
  } else {
    std::printf("%6s  %s\n", "n", "expected steps");
    for (const ProfilePoint& p : pts)
      std::printf("%6d  %.6g\n", p.n, p.expected_steps);
    std::printf("power-law fit: slope %.4g (R^2 %.4g)\n", ll.slope, ll.r2);
    std::printf("semilog fit:   slope %.4g (R^2 %.4g)\n", sl.slope, sl.r2);
  }
  return 0;
}

int cmd_verify(const GlobalOpts& g, const std::string& suite, bool quick) {
  VerifyOptions vo;
  vo.quick = quick;
  vo.threads = g.threads;
  vo.trials = g.trials;
  if (g.seed_given) vo.seed = g.seed;
  std::vector<CriterionResult> results = verify_suite(suite, vo);

  if (g.format == "json") {
    Json arr = Json::array();
    for (const CriterionResult& c : results)
      arr.push_back(Json{{"number", c.number},
                         {"name", c.name},
                         {"pass", c.pass},
                         {"seconds", c.seconds},
                         {"details", c.details}});
    std::cout << arr.dump(2) << "\n";
  } else {
    for (const CriterionResult& c : results)
      std::printf("%-4s %s%-28s %7.2fs  %s\n", c.pass ? "PASS" : "FAIL",
                  c.number ? ("criterion " + std::to_string(c.number) + "  ").c_str()
                           : "",
                  c.name.c_str(), c.seconds, c.details.c_str());
  }

  for (const CriterionResult& c : results)
    if (!c.pass)
      throw VerificationFailure(
          (c.number ? "criterion " + std::to_string(c.number) + " (" + c.name + ")"
                    : c.name) +
          " failed");
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"word-problem automata: representation families, two-way "
               "quantum/classical machines, analysis and verification"};
  app.require_subcommand(1);
  app.set_config("--config", "", "key=value file with defaults for the flags");

  GlobalOpts g;
  app.add_option("--precision-bits", g.precision_bits,
                 "float backend precision (>= 64)")
      ->check(CLI::Range(64, 1 << 20));
  app.add_option("--eps-num", g.eps_override,
                 "numeric comparison tolerance override");
  auto* seed_opt = app.add_option("--seed", g.seed, "sampling seed");
  app.add_option("--trials", g.trials, "Monte Carlo trials")
      ->check(CLI::PositiveNumber);
  app.add_option("--step-limit", g.step_limit, "per-trial step cutoff")
      ->check(CLI::PositiveNumber);
  app.add_option("--threads", g.threads, "worker threads")
      ->check(CLI::PositiveNumber);
  app.add_option("--format", g.format, "output format")
      ->check(CLI::IsMember({"pretty", "json", "csv"}));

  // Let --trials and friends appear after the subcommand name too.
  app.fallthrough();
  auto sub = [](CLI::App* s) {
    s->fallthrough();
    return s;
  };

  // dfr build
  auto* dfr = sub(app.add_subcommand("dfr", "representation families"));
  dfr->require_subcommand(1);
  auto* db = sub(dfr->add_subcommand("build", "construct a named family"));
  std::string db_family, db_moduli, db_alpha = "sqrt2", db_out;
  long db_m = 0;
  int db_r = 2;
  double db_delta = 0.25;
  db->add_option("--family", db_family,
                 "trivial|zm|z-algebraic|z-nonalgebraic|f2|fr|abelian-algebraic|"
                 "abelian-nonalgebraic|direct-product-of-frees|tan-zr|shalen")
      ->required();
  db->add_option("--m", db_m, "modulus for zm");
  db->add_option("--r", db_r, "rank parameter");
  db->add_option("--delta", db_delta, "tau exponent for non-algebraic families");
  db->add_option("--moduli", db_moduli, "comma list (moduli or ranks)");
  db->add_option("--alpha", db_alpha, "shalen angle: sqrt2 or a rational p/q");
  db->add_option("-o,--output", db_out, "artifact file (stdout when omitted)");

  // dfr certify
  auto* dc = sub(dfr->add_subcommand("certify", "gap-scan a family and calibrate tau"));
  std::string dc_file, dc_out;
  int dc_radius = 6;
  long dc_cap = 0;
  dc->add_option("file", dc_file, "family artifact")->required();
  dc->add_option("--radius", dc_radius, "scan radius")->check(CLI::PositiveNumber);
  dc->add_option("--element-cap", dc_cap, "abort beyond this many elements");
  dc->add_option("-o,--output", dc_out, "write here instead of updating in place");

  // machine build
  auto* mach = sub(app.add_subcommand("machine", "assembled automata"));
  mach->require_subcommand(1);
  auto* mb = sub(mach->add_subcommand("build", "assemble a machine from a family"));
  std::string mb_dfr, mb_mode, mb_base, mb_table, mb_table_file, mb_out;
  double mb_eps = 0.125;
  int mb_ce = 2;
  mb->add_option("--dfr", mb_dfr, "family artifact");
  mb->add_option("--mode", mb_mode, "poly|exp|unbounded|mo1qfa|overgroup")
      ->required();
  mb->add_option("--eps", mb_eps, "one-sided error bound");
  mb->add_option("--coin-exponent", mb_ce, "coin bias exponent for exp mode");
  mb->add_option("--base", mb_base, "base machine artifact for overgroup mode");
  mb->add_option("--table", mb_table, "built-in coset table name");
  mb->add_option("--table-file", mb_table_file, "coset table artifact");
  mb->add_option("-o,--output", mb_out, "artifact file (stdout when omitted)");

  auto* mr = sub(mach->add_subcommand("run", "sample a word"));
  std::string mr_file, mr_word;
  mr->add_option("file", mr_file, "machine artifact")->required();
  mr->add_option("--word", mr_word, "comma-separated signed generators");

  auto* ma = sub(mach->add_subcommand("analyze", "closed-form acceptance for a word"));
  std::string ma_file, ma_word;
  ma->add_option("file", ma_file, "machine artifact")->required();
  ma->add_option("--word", ma_word, "comma-separated signed generators");

  auto* mp = sub(mach->add_subcommand("profile", "expected steps over identity words"));
  std::string mp_file, mp_lengths = "10:40:2";
  mp->add_option("file", mp_file, "machine artifact")->required();
  mp->add_option("--lengths", mp_lengths, "first:last[:step] or comma list");

  // verify
  auto* vf = sub(app.add_subcommand("verify", "acceptance-criteria suites"));
  std::string vf_suite;
  bool vf_quick = false;
  vf->add_option("suite", vf_suite, "diophantine|gaps|machines|overgroup|all")
      ->required();
  vf->add_flag("--quick", vf_quick, "reduced radii and trial counts");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 1;  // usage problems all map to 1
  }

  try {
    set_precision_bits(g.precision_bits);
    if (g.eps_override > 0.0) set_eps_num(g.eps_override);
    g.seed_given = seed_opt->count() > 0;

    if (db->parsed())
      return cmd_dfr_build(db_family, db_m, db_r, db_delta, db_moduli, db_alpha,
                           db_out);
    if (dc->parsed()) return cmd_dfr_certify(g, dc_file, dc_radius, dc_cap, dc_out);
    if (mb->parsed())
      return cmd_machine_build(mb_dfr, mb_mode, mb_eps, mb_ce, mb_base, mb_table,
                               mb_table_file, mb_out);
    if (mr->parsed()) return cmd_machine_run(g, mr_file, mr_word);
    if (ma->parsed()) return cmd_machine_analyze(g, ma_file, ma_word);
    if (mp->parsed()) return cmd_machine_profile(g, mp_file, mp_lengths);
    if (vf->parsed()) return cmd_verify(g, vf_suite, vf_quick);
    std::cerr << "no command given\n";
    return 1;
  } catch (const CertificationError& e) {
    std::cerr << "certification failed: " << e.what() << "\n";
    return 2;
  } catch (const AnalysisUnavailable& e) {
    std::cerr << "analysis unavailable: " << e.what() << "\n";
    return 3;
  } catch (const VerificationFailure& e) {
    std::cerr << "verification failed: " << e.what() << "\n";
    return 4;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
