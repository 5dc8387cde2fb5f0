#pragma once

// Certification scans and the fits derived from them. certify_dfr walks the
// ball of a given radius, accumulating one matrix product per element along
// the BFS tree, and records the per-length character gap minima. Envelope
// fits (exponential base, steepest-hull polynomial) feed calibrate_tau, which
// turns a declared tau model into a calibrated one with a safety margin.
// The same hull fit measures how fast best rational approximations close in
// on a rotation number, and a small harness compares closed-form analysis
// against Monte Carlo runs.

#include <algorithm>
#include <cmath>
#include <string>
#include <utility>
#include <vector>

#include "qcfa/analyze.hpp"
#include "qcfa/dfr.hpp"
#include "qcfa/montecarlo.hpp"

namespace qcfa {

// ---- steepest-edge fit on a log-log lower hull ----

struct HullFit {
  double exponent = 0.0;  // D in  value >= c * x^-D
  double c = 0.0;
};

// points are (x, value) with x >= 1 and value > 0; the fit is the smallest
// polynomial decay rate that lower-bounds every point, with c maximized
inline HullFit hull_poly_fit(const std::vector<std::pair<double, double>>& pts) {
  if (pts.empty()) throw std::invalid_argument("hull fit needs points");
  std::vector<std::pair<double, double>> lg;
  for (const auto& [x, v] : pts) {
    if (!(x >= 1.0) || !(v > 0.0))
      throw std::invalid_argument("hull fit needs x >= 1 and positive values");
    lg.emplace_back(std::log(x), std::log(v));
  }
  std::sort(lg.begin(), lg.end());
  // Andrew monotone chain, lower hull
  std::vector<std::pair<double, double>> hull;
  for (const auto& p : lg) {
    while (hull.size() >= 2) {
      const auto& a = hull[hull.size() - 2];
      const auto& b = hull[hull.size() - 1];
      double cross = (b.first - a.first) * (p.second - a.second) -
                     (b.second - a.second) * (p.first - a.first);
      if (cross <= 0) hull.pop_back();
      else break;
    }
    if (!hull.empty() && hull.back().first == p.first) continue;
    hull.push_back(p);
  }
  double exponent = 0.0;
  for (size_t i = 1; i < hull.size(); ++i) {
    double dx = hull[i].first - hull[i - 1].first;
    double dy = hull[i].second - hull[i - 1].second;
    if (dx > 0) exponent = std::max(exponent, -dy / dx);
  }
  double log_c = lg[0].second + exponent * lg[0].first;
  for (const auto& [x, y] : lg) log_c = std::min(log_c, y + exponent * x);
  return {exponent, std::exp(log_c)};
}

// ---- certification ----

struct LengthMinimum {
  int n = 0;
  double sphere_min = 0.0;  // min gap over elements of length exactly n
  double cumulative = 0.0;  // min gap over lengths 1..n
  Word witness;             // element achieving sphere_min
};

struct CertifyReport {
  int radius = 0;
  bool ok = false;
  long elements = 0;  // ball size including the identity
  Word degenerate_witness;
  std::vector<LengthMinimum> minima;
  double exp_base = 1.0;  // least C with C^-n <= m(n) over the scan
  double poly_c1 = 0.0;   // m(n) >= c1 n^-c2 hull fit, before safety
  double poly_c2 = 0.0;
};

struct CertifyOptions {
  long element_cap = 2000000;
};

inline CertifyReport certify_dfr(const Dfr& f, int radius,
                                 const CertifyOptions& opts = {}) {
  if (radius < 1) throw std::invalid_argument("certification radius must be >= 1");
  BallOptions bo;
  bo.bfs_radius = radius;
  bo.element_cap = opts.element_cap;
  Ball ball = f.group.enumerate_ball(radius, bo);

  CertifyReport rep;
  rep.radius = radius;
  rep.ok = true;
  rep.elements = static_cast<long>(ball.entries.size());

  // one product per element per representation, following the BFS tree
  std::vector<std::vector<UnitaryMatrix>> prod(f.reps.size());
  for (size_t j = 0; j < f.reps.size(); ++j) {
    prod[j].reserve(ball.entries.size());
    prod[j].push_back(UnitaryMatrix::identity(f.d));
  }
  Scalar d_sq = Scalar::from_int(static_cast<long>(f.d) * f.d);
  BigFloat eps = eps_num();
  std::map<int, size_t> min_index;  // length -> ball index of the minimum
  std::map<int, double> min_gap;

  for (size_t i = 1; i < ball.entries.size(); ++i) {
    const BallEntry& e = ball.entries[i];
    // the element's quality is the gap of its best-distinguishing rep
    BigFloat largest;
    bool scalar_image = true;
    bool first = true;
    for (size_t j = 0; j < f.reps.size(); ++j) {
      UnitaryMatrix m =
          prod[j][static_cast<size_t>(e.parent)] * eval_rep(f.reps[j], Word{e.edge});
      Scalar chi_sq = m.trace().norm_sq();
      if (chi_sq.is_exact() && d_sq.is_exact()) {
        if (!chi_sq.same_as(d_sq)) scalar_image = false;
      } else if (abs(sqrt(chi_sq.real_big()) - f.d) > eps) {
        scalar_image = false;
      }
      BigFloat gap = BigFloat(f.d) - sqrt(chi_sq.real_big());
      if (first || gap > largest) { largest = gap; first = false; }
      prod[j].push_back(std::move(m));
    }
    if (scalar_image) {
      rep.ok = false;
      rep.degenerate_witness = e.word;
      return rep;
    }
    double g = static_cast<double>(largest);
    auto it = min_gap.find(e.length);
    if (it == min_gap.end() || g < it->second) {
      min_gap[e.length] = g;
      min_index[e.length] = i;
    }
  }

  double cum = std::numeric_limits<double>::infinity();
  for (const auto& [n, g] : min_gap) {
    cum = std::min(cum, g);
    LengthMinimum lm;
    lm.n = n;
    lm.sphere_min = g;
    lm.cumulative = cum;
    lm.witness = ball.entries[min_index[n]].word;
    rep.minima.push_back(std::move(lm));
  }

  // cross-check the incremental products against the direct evaluator
  for (const auto& lm : rep.minima) {
    double direct = static_cast<double>(dfr_gap(f, lm.witness));
    if (std::fabs(direct - lm.sphere_min) > 1e-9 * (1.0 + std::fabs(direct)))
      throw std::logic_error("certification scan disagrees with dfr_gap");
  }

  if (!rep.minima.empty()) {
    for (const auto& lm : rep.minima)
      rep.exp_base =
          std::max(rep.exp_base, std::pow(lm.cumulative, -1.0 / lm.n));
    std::vector<std::pair<double, double>> pts;
    for (const auto& lm : rep.minima)
      pts.emplace_back(static_cast<double>(lm.n), lm.cumulative);
    HullFit fit = hull_poly_fit(pts);
    rep.poly_c1 = fit.c;
    rep.poly_c2 = fit.exponent;
  }
  return rep;
}

// ---- calibration ----

// Builds a calibrated model of the declared shape from a certification scan.
// Constants carry a factor-2 safety margin against extrapolation beyond the
// scanned radius; a construction-fixed exponent is kept as is.
inline TauModel calibrate_tau(const TauModel& declared, const CertifyReport& rep) {
  if (!rep.ok)
    throw CertificationError("cannot calibrate a degenerate family");
  if (rep.minima.empty())
    throw CertificationError("certification scan saw no nontrivial elements");
  if (declared.kind == TauKind::Unbounded)
    throw CertificationError("unbounded-error families carry no tau to calibrate");
  TauModel t;
  t.kind = TauKind::Calibrated;
  t.shape = declared.shape;
  t.has_constants = true;
  t.calibrated_radius = rep.radius;
  for (const auto& lm : rep.minima) t.table.emplace_back(lm.n, lm.cumulative);
  switch (declared.shape) {
    case TauShape::Constant: {
      t.c1 = rep.minima.back().cumulative / 2.0;
      break;
    }
    case TauShape::Poly: {
      double c2 = declared.fixed_exponent ? declared.c2 : rep.poly_c2;
      double c1 = std::numeric_limits<double>::infinity();
      for (const auto& lm : rep.minima)
        c1 = std::min(c1, lm.cumulative * std::pow(lm.n, c2));
      t.c1 = c1 / 2.0;
      t.c2 = c2;
      t.fixed_exponent = declared.fixed_exponent;
      break;
    }
    case TauShape::Exp: {
      t.c1 = rep.exp_base;
      t.c2 = 0.5;
      break;
    }
  }
  return t;
}

// Marks the family certified and swaps in the calibrated model unless the
// declared one already carries constants valid as stated.
inline void apply_certification(Dfr& f, const CertifyReport& rep) {
  if (!rep.ok)
    throw CertificationError("certification failed; the family is degenerate");
  f.certified = true;
  f.certified_radius = rep.radius;
  if (f.tau.kind == TauKind::Unbounded) return;
  if (f.tau.kind == TauKind::Constant && f.tau.has_constants) return;
  f.tau = calibrate_tau(f.tau, rep);
}

// ---- rotation number quality scans ----

struct AlphaSpec {
  enum class Kind { Rational, Sqrt, AcosRational };
  Kind kind = Kind::Rational;
  Rational value;  // p/q, or k for sqrt(k), or x for acos(x) / 2 pi
  std::string text;

  // accepted forms: "p/q", "p", "sqrt:k", "acos:p/q"
  static AlphaSpec parse(const std::string& s) {
    AlphaSpec a;
    a.text = s;
    std::string body = s;
    if (s.rfind("sqrt:", 0) == 0) {
      a.kind = Kind::Sqrt;
      body = s.substr(5);
    } else if (s.rfind("acos:", 0) == 0) {
      a.kind = Kind::AcosRational;
      body = s.substr(5);
    }
    try {
      a.value = Rational(body);
    } catch (const std::exception&) {
      throw std::invalid_argument("cannot parse rotation number '" + s + "'");
    }
    if (a.kind == Kind::Sqrt &&
        (denominator(a.value) != 1 || a.value < 0))
      throw std::invalid_argument("sqrt argument must be a nonnegative integer");
    if (a.kind == Kind::AcosRational &&
        (a.value > 1 || a.value < -1))
      throw std::invalid_argument("acos argument must lie in [-1, 1]");
    return a;
  }

  BigFloat eval() const {
    BigFloat two_pi = 2 * boost::math::constants::pi<BigFloat>();
    switch (kind) {
      case Kind::Rational:
        return BigFloat(numerator(value)) / BigFloat(denominator(value));
      case Kind::Sqrt:
        return sqrt(BigFloat(numerator(value)));
      case Kind::AcosRational:
        return acos(BigFloat(numerator(value)) / BigFloat(denominator(value))) /
               two_pi;
    }
    return BigFloat(0);
  }

  // exact rationality: Niven's theorem settles the acos case
  bool is_rational() const {
    switch (kind) {
      case Kind::Rational: return true;
      case Kind::Sqrt: {
        Integer k = numerator(value);
        Integer r = sqrt(k);
        return r * r == k;
      }
      case Kind::AcosRational: {
        Rational a = abs(value);
        return a == 0 || a == 1 || a == Rational(1, 2);
      }
    }
    return false;
  }
};

struct DiophantinePoint {
  long q = 0;
  double dist = 0.0;  // || q alpha ||, distance to the nearest integer
};

struct DiophantineReport {
  std::string alpha;
  bool rational = false;
  long rational_q = 0;  // first q with q alpha an integer
  std::vector<DiophantinePoint> record;  // running minima
  double fit_c = 0.0;   // ||q alpha|| >= c q^-D over the scan
  double fit_exponent = 0.0;
};

inline DiophantineReport diophantine_scan(const AlphaSpec& spec, long qmax) {
  if (qmax < 1) throw std::invalid_argument("scan range must be >= 1");
  DiophantineReport rep;
  rep.alpha = spec.text;

  if (spec.kind == AlphaSpec::Kind::Rational) {
    // exact arithmetic: r = q p mod s, distance min(r, s - r) / s
    Integer p = numerator(spec.value), s = denominator(spec.value);
    Integer r = 0;
    double best = 2.0;
    for (long q = 1; q <= qmax; ++q) {
      r += p;
      r %= s;
      if (r < 0) r += s;
      if (r == 0) {
        rep.rational = true;
        rep.rational_q = q;
        rep.record.push_back({q, 0.0});
        return rep;
      }
      Integer folded = min(r, s - r);
      double dist = static_cast<double>(Rational(folded, s));
      if (dist < best) {
        best = dist;
        rep.record.push_back({q, dist});
      }
    }
  } else {
    BigFloat alpha = spec.eval();
    alpha -= floor(alpha);
    BigFloat frac = 0;
    BigFloat eps = eps_num();
    double best = 2.0;
    for (long q = 1; q <= qmax; ++q) {
      frac += alpha;
      if (frac >= 1) frac -= 1;
      BigFloat dist = min(frac, 1 - frac);
      if (dist < eps) {
        // only the genuinely rational specs can reach zero
        rep.rational = spec.is_rational();
        rep.rational_q = q;
        rep.record.push_back({q, 0.0});
        return rep;
      }
      double d = static_cast<double>(dist);
      if (d < best) {
        best = d;
        rep.record.push_back({q, d});
      }
    }
  }

  std::vector<std::pair<double, double>> pts;
  for (const auto& p : rep.record)
    pts.emplace_back(static_cast<double>(p.q), p.dist);
  if (!pts.empty()) {
    HullFit fit = hull_poly_fit(pts);
    rep.fit_c = fit.c;
    rep.fit_exponent = fit.exponent;
  }
  return rep;
}

// ---- runtime profiles ----

struct ProfilePoint {
  int n = 0;
  double expected_steps = 0.0;
};

struct FitResult {
  double slope = 0.0;
  double intercept = 0.0;
  double r2 = 0.0;
};

namespace detail {
inline FitResult least_squares(const std::vector<std::pair<double, double>>& pts) {
  FitResult f;
  size_t n = pts.size();
  if (n < 2) throw std::invalid_argument("fit needs at least two points");
  double sx = 0, sy = 0, sxx = 0, sxy = 0, syy = 0;
  for (const auto& [x, y] : pts) {
    sx += x; sy += y; sxx += x * x; sxy += x * y; syy += y * y;
  }
  double den = n * sxx - sx * sx;
  f.slope = (n * sxy - sx * sy) / den;
  f.intercept = (sy - f.slope * sx) / n;
  double ss_tot = syy - sy * sy / n;
  double ss_res = 0;
  for (const auto& [x, y] : pts) {
    double e = y - (f.slope * x + f.intercept);
    ss_res += e * e;
  }
  f.r2 = ss_tot > 0 ? 1.0 - ss_res / ss_tot : 1.0;
  return f;
}
}  // namespace detail

// a length-n tape word representing the identity: (g1 g1^-1)^(n/2)
inline Word identity_word(int n) {
  if (n < 0 || n % 2) throw std::invalid_argument("identity words have even length");
  Word w;
  for (int i = 0; i < n / 2; ++i) {
    w.push_back({0, 1});
    w.push_back({0, -1});
  }
  return w;
}

inline std::vector<ProfilePoint> runtime_profile(const QcfaMachine& m,
                                                 const std::vector<int>& lengths) {
  std::vector<ProfilePoint> pts;
  for (int n : lengths) {
    RoundAnalysis an = analyze_machine(m, identity_word(n));
    pts.push_back({n, an.expected_steps.real_d()});
  }
  return pts;
}

// log E vs log n: the slope estimates the polynomial degree of the runtime
inline FitResult fit_loglog(const std::vector<ProfilePoint>& pts) {
  std::vector<std::pair<double, double>> lg;
  for (const auto& p : pts)
    lg.emplace_back(std::log(static_cast<double>(p.n)), std::log(p.expected_steps));
  return detail::least_squares(lg);
}

// log E vs n: the slope estimates log of the per-symbol growth factor
inline FitResult fit_semilog(const std::vector<ProfilePoint>& pts) {
  std::vector<std::pair<double, double>> lg;
  for (const auto& p : pts)
    lg.emplace_back(static_cast<double>(p.n), std::log(p.expected_steps));
  return detail::least_squares(lg);
}

// ---- Monte Carlo against closed-form analysis ----

struct McCheck {
  bool ok = false;
  double analytic = 0.0;  // acceptance probability from the analysis
  double z_accept = 0.0;
  double z_steps = 0.0;
  AcceptanceStats stats;
  std::string detail;
};

// When the analysis yields probability exactly 0 or 1 on an exact machine,
// every trial must agree; otherwise the empirical frequency and mean step
// count must sit within zmax standard errors.
inline McCheck mc_vs_analytic(const QcfaMachine& m, const Word& w,
                              const McOptions& opt, double zmax = 3.0) {
  RoundAnalysis an = analyze_machine(m, w);
  McCheck chk;
  chk.analytic = an.overall_accept.real_d();
  chk.stats = run_machine_mc(m, w, opt);
  const AcceptanceStats& st = chk.stats;
  if (st.cutoff > 0) {
    chk.detail = "trials hit the step limit";
    return chk;
  }
  bool exact_one = an.overall_accept.is_exact() &&
                   an.overall_accept.same_as(Scalar::one());
  bool exact_zero = an.overall_accept.is_exact() &&
                    an.overall_accept.same_as(Scalar::zero());
  if (exact_one || exact_zero) {
    long want = exact_one ? st.trials : 0;
    if (st.accepted != want) {
      chk.detail = "a certain outcome was contradicted by sampling";
      return chk;
    }
  } else {
    double p = chk.analytic;
    double se = std::sqrt(p * (1.0 - p) / st.trials);
    chk.z_accept = std::fabs(st.accept_freq - p) / se;
    if (chk.z_accept > zmax) {
      chk.detail = "acceptance frequency outside the confidence band";
      return chk;
    }
  }
  double expect = an.expected_steps.real_d();
  long decided = st.accepted + st.rejected;
  if (st.steps_stddev > 0 && decided > 1) {
    double se = st.steps_stddev / std::sqrt(static_cast<double>(decided));
    chk.z_steps = std::fabs(st.mean_steps - expect) / se;
    if (chk.z_steps > zmax) {
      chk.detail = "mean step count outside the confidence band";
      return chk;
    }
  } else if (std::fabs(st.mean_steps - expect) > 1e-6 * (1.0 + expect)) {
    chk.detail = "deterministic step count mismatch";
    return chk;
  }
  chk.ok = true;
  return chk;
}

inline McCheck mc_vs_analytic_mo1qfa(const Mo1qfa& m, const Word& w,
                                     const McOptions& opt, double zmax = 3.0) {
  Mo1qfaAnalysis an = analyze_mo1qfa(m, w);
  McCheck chk;
  chk.analytic = an.p_acc.real_d();
  chk.stats = run_mo1qfa_mc(m, w, opt);
  const AcceptanceStats& st = chk.stats;
  bool exact_one = an.p_acc.is_exact() && an.p_acc.same_as(Scalar::one());
  bool exact_zero = an.p_acc.is_exact() && an.p_acc.same_as(Scalar::zero());
  if (exact_one || exact_zero) {
    long want = exact_one ? st.trials : 0;
    if (st.accepted != want) {
      chk.detail = "a certain outcome was contradicted by sampling";
      return chk;
    }
  } else {
    double p = chk.analytic;
    double se = std::sqrt(p * (1.0 - p) / st.trials);
    chk.z_accept = std::fabs(st.accept_freq - p) / se;
    if (chk.z_accept > zmax) {
      chk.detail = "acceptance frequency outside the confidence band";
      return chk;
    }
  }
  chk.ok = true;
  return chk;
}

}  // namespace qcfa
