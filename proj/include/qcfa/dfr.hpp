#pragma once

// Distinguishing families of representations. A family carries k unitary
// representations of a common group, all of dimension d, together with a
// claimed lower bound tau(n) on the trace gap d - |chi(g)| over non-identity
// elements of length at most n. Builders for the named families live here,
// along with the combinators (direct sum, pad, product, subgroup restriction,
// overgroup induction).

#include <cmath>

#include "qcfa/reps.hpp"

namespace qcfa {

// e^{2 pi i t}, exact when the reduced denominator divides 8
inline Scalar exp_2pi_i(Rational t) {
  // reduce t mod 1
  Integer num = boost::multiprecision::numerator(t);
  Integer den = boost::multiprecision::denominator(t);
  Integer r = num % den;
  if (r < 0) r += den;
  t = Rational(r, den);
  den = boost::multiprecision::denominator(t);
  num = boost::multiprecision::numerator(t);
  if (den == 1) return Scalar::one();
  if (den == 2) return Scalar::from_int(-1);
  if (den == 4)
    return Scalar::gauss(Rational(0), num == 1 ? Rational(1) : Rational(-1));
  if (den == 8) {
    // (±1 ± i)/sqrt(2)
    long k = static_cast<long>(num);
    ExactScalar inv_sqrt2 = *sqrt_exact(Rational(1, 2));
    ExactScalar re = inv_sqrt2, im = inv_sqrt2;
    if (k == 3 || k == 5) re = ExactScalar(-1L) * re;
    if (k == 5 || k == 7) im = ExactScalar(-1L) * im;
    ExactScalar i_unit(GaussRat(Rational(0), Rational(1)));
    return Scalar(re + i_unit * im);
  }
  BigFloat angle = BigFloat(2) * boost::math::constants::pi<BigFloat>() *
                   BigFloat(num.str()) / BigFloat(den.str());
  return Scalar::big(cos(angle), sin(angle));
}

inline BigFloat exp_arg_times_2pi(const BigFloat& t) {
  return BigFloat(2) * boost::math::constants::pi<BigFloat>() * t;
}

enum class TauKind { Constant, PolyLower, ExpLower, Calibrated, Unbounded };
enum class TauShape { Constant, Poly, Exp };

inline std::string to_string(TauKind k) {
  switch (k) {
    case TauKind::Constant: return "constant";
    case TauKind::PolyLower: return "poly-lower";
    case TauKind::ExpLower: return "exp-lower";
    case TauKind::Calibrated: return "calibrated";
    case TauKind::Unbounded: return "unbounded";
  }
  return "?";
}

inline std::string to_string(TauShape s) {
  switch (s) {
    case TauShape::Constant: return "constant";
    case TauShape::Poly: return "poly";
    case TauShape::Exp: return "exp";
  }
  return "?";
}

// Shapes: Constant -> tau(n) = c1; Poly -> tau(n) = c1 * n^-c2;
// Exp -> tau(n) = c2 * c1^-n with base c1 and prefactor c2. A model may
// declare its shape without usable constants; calibration against a
// certification scan fills them in.
struct TauModel {
  TauKind kind = TauKind::Unbounded;
  TauShape shape = TauShape::Poly;
  bool has_constants = false;
  double c1 = 0.0;
  double c2 = 0.0;
  bool fixed_exponent = false;  // c2 comes from the construction, keep it
  std::vector<std::pair<int, double>> table;  // per-length minima, calibrated
  int calibrated_radius = 0;

  double eval(int n) const {
    if (kind == TauKind::Unbounded) return 0.0;
    if (!has_constants)
      throw CertificationError("tau model has no usable constants; certify and calibrate first");
    if (n < 1) throw std::invalid_argument("tau is defined for n >= 1");
    switch (shape) {
      case TauShape::Constant: return c1;
      case TauShape::Poly: return c1 * std::pow(static_cast<double>(n), -c2);
      case TauShape::Exp: return c2 * std::pow(c1, -static_cast<double>(n));
    }
    return 0.0;
  }

  static TauModel constant(double c) {
    TauModel t;
    t.kind = TauKind::Constant;
    t.shape = TauShape::Constant;
    t.has_constants = true;
    t.c1 = c;
    return t;
  }
  static TauModel poly_declared() {
    TauModel t;
    t.kind = TauKind::PolyLower;
    t.shape = TauShape::Poly;
    return t;
  }
  static TauModel poly_declared_exponent(double c2) {
    TauModel t = poly_declared();
    t.c2 = c2;
    t.fixed_exponent = true;
    return t;
  }
  static TauModel poly_constants(double c1, double c2) {
    TauModel t = poly_declared();
    t.c1 = c1;
    t.c2 = c2;
    t.has_constants = true;
    return t;
  }
  static TauModel exp_declared() {
    TauModel t;
    t.kind = TauKind::ExpLower;
    t.shape = TauShape::Exp;
    return t;
  }
  static TauModel exp_constants(double base, double prefactor = 1.0) {
    TauModel t = exp_declared();
    t.c1 = base;
    t.c2 = prefactor;
    t.has_constants = true;
    return t;
  }
  static TauModel unbounded() { return TauModel{}; }
};

struct Dfr {
  GroupPresentation group;
  int k = 0;
  int d = 0;
  std::vector<UnitaryRep> reps;
  TauModel tau;
  bool diagonal = false;
  bool certified = false;
  int certified_radius = 0;

  AmplitudeClass amplitude_class() const {
    AmplitudeClass c = AmplitudeClass::AlgebraicExact;
    for (const auto& r : reps) c = join(c, r.amplitude_class());
    return c;
  }

  static Dfr make(GroupPresentation g, std::vector<UnitaryRep> reps, TauModel tau) {
    Dfr f;
    f.group = std::move(g);
    f.reps = std::move(reps);
    f.tau = std::move(tau);
    if (f.reps.empty()) throw std::invalid_argument("a family needs k >= 1");
    f.k = static_cast<int>(f.reps.size());
    f.d = f.reps[0].dim;
    f.diagonal = true;
    for (const auto& r : f.reps) {
      if (r.dim != f.d) throw std::invalid_argument("representation dims differ");
      if (r.group.generator_count() != f.group.generator_count())
        throw std::invalid_argument("representation group mismatch");
      for (const auto& m : r.images)
        if (!m.is_diagonal()) f.diagonal = false;
      validate_rep(r);
    }
    return f;
  }
};

// gap contributed by a single element: d - min_j |chi_j(g)|
inline BigFloat dfr_gap(const Dfr& f, const Word& w) {
  BigFloat best;
  bool first = true;
  for (const auto& rep : f.reps) {
    BigFloat c = character_magnitude(rep, w);
    if (first || c < best) { best = c; first = false; }
  }
  return BigFloat(f.d) - best;
}

// ---- helpers for the named builders ----

inline constexpr double kGapEnvelope = 19.0 / 24.0;  // times pi^2, see tests

inline double constant_gap_for_modulus(long m) {
  double pi = boost::math::constants::pi<double>();
  return kGapEnvelope * pi * pi / (static_cast<double>(m) * m);
}

// diag(e^{2 pi i t}, 1) as a 2x2 unitary
inline UnitaryMatrix phase_gate(const Scalar& top) {
  std::vector<Scalar> e = {top, Scalar::zero(), Scalar::zero(), Scalar::one()};
  AmplitudeClass cls = top.is_exact() ? AmplitudeClass::AlgebraicExact
                                      : AmplitudeClass::AlgebraicNumeric;
  return UnitaryMatrix::make(2, std::move(e), cls);
}

inline UnitaryMatrix phase_gate_big(const BigFloat& two_pi_t, AmplitudeClass cls) {
  Scalar top = Scalar::big(cos(two_pi_t), sin(two_pi_t));
  std::vector<Scalar> e = {top, Scalar::zero(), Scalar::zero(), Scalar::one()};
  return UnitaryMatrix::make(2, std::move(e), cls);
}

// the degree-2 rotation rep of Z used throughout: a -> diag((3+4i)/5, 1)
inline UnitaryMatrix algebraic_phase_gate() {
  return phase_gate(Scalar::gauss(Rational(3, 5), Rational(4, 5)));
}

// extend a single-coordinate image to a product group: generator `slot` maps
// to `img`, all others to the identity
inline UnitaryRep coordinate_rep(const GroupPresentation& g, int slot,
                                 const UnitaryMatrix& img) {
  std::vector<UnitaryMatrix> images(g.generator_count(),
                                    UnitaryMatrix::identity(img.dim()));
  images.at(slot) = img;
  return UnitaryRep::make(g, std::move(images));
}

inline const std::vector<int>& small_primes() {
  static const std::vector<int> p = {2,  3,  5,  7,  11, 13, 17, 19, 23, 29,
                                     31, 37, 41, 43, 47, 53, 59, 61, 67, 71};
  return p;
}

struct TanPrime {
  int p, m, n;  // p = m^2 + n^2, p prime, p = 1 mod 4, m > n > 0
};

inline const std::vector<TanPrime>& tan_primes() {
  static const std::vector<TanPrime> t = {
      {5, 2, 1},   {13, 3, 2}, {17, 4, 1},  {29, 5, 2},
      {37, 6, 1},  {41, 5, 4}, {53, 7, 2},  {61, 6, 5},
      {73, 8, 3},  {89, 8, 5}, {97, 9, 4},  {101, 10, 1}};
  return t;
}

// rotation by the angle whose cosine is (m^2-n^2)/p; entries are rational
inline UnitaryMatrix tan_rotation(const TanPrime& t) {
  Rational p(t.p);
  Rational c(static_cast<long>(t.m) * t.m - static_cast<long>(t.n) * t.n, t.p);
  Rational s(2L * t.m * t.n, t.p);
  std::vector<Scalar> e = {Scalar::from_rational(c), Scalar::from_rational(s),
                           Scalar::from_rational(-s), Scalar::from_rational(c)};
  return UnitaryMatrix::make(2, std::move(e), AmplitudeClass::AlgebraicExact);
}

// ---- named builders ----

inline Dfr dfr_trivial() {
  GroupPresentation g = GroupPresentation::trivial();
  UnitaryRep rep = UnitaryRep::make(g, {}, false, 2);
  return Dfr::make(g, {rep}, TauModel::constant(2.0));
}

inline Dfr dfr_zm(long m) {
  if (m < 2) throw std::invalid_argument("cyclic modulus must be >= 2");
  GroupPresentation g = GroupPresentation::cyclic(m);
  UnitaryRep rep = UnitaryRep::make(g, {phase_gate(exp_2pi_i(Rational(1, m)))});
  return Dfr::make(g, {rep}, TauModel::constant(constant_gap_for_modulus(m)));
}

inline Dfr dfr_z_algebraic() {
  GroupPresentation g = GroupPresentation::free_abelian(1);
  UnitaryRep rep = UnitaryRep::make(g, {algebraic_phase_gate()});
  return Dfr::make(g, {rep}, TauModel::poly_declared());
}

inline Dfr dfr_z_nonalgebraic(double delta) {
  if (!(delta > 0.0 && delta <= 2.0))
    throw std::invalid_argument("delta must lie in (0, 2]");
  GroupPresentation g = GroupPresentation::free_abelian(1);
  int k = 1 + static_cast<int>(std::floor(2.0 / delta));
  std::vector<UnitaryRep> reps;
  for (int j = 0; j < k; ++j) {
    BigFloat root = sqrt(BigFloat(small_primes().at(j)));
    UnitaryMatrix img =
        phase_gate_big(exp_arg_times_2pi(root), AmplitudeClass::CTildeNumeric);
    reps.push_back(UnitaryRep::make(g, {img}));
  }
  return Dfr::make(g, std::move(reps), TauModel::poly_declared_exponent(delta));
}

inline UnitaryRep f2_base_rep() {
  GroupPresentation g = GroupPresentation::free_group(2);
  Scalar inv_sqrt5 = sqrt_scalar(Rational(1, 5));
  Scalar two = Scalar::from_int(2);
  Scalar i_unit = Scalar::gauss(Rational(0), Rational(1));
  Scalar a11 = inv_sqrt5 * Scalar::gauss(Rational(2), Rational(1));
  Scalar a22 = inv_sqrt5 * Scalar::gauss(Rational(2), Rational(-1));
  UnitaryMatrix a = UnitaryMatrix::make(
      2, {a11, Scalar::zero(), Scalar::zero(), a22}, AmplitudeClass::AlgebraicExact);
  Scalar d = inv_sqrt5 * two;
  Scalar o = inv_sqrt5 * i_unit;
  UnitaryMatrix b =
      UnitaryMatrix::make(2, {d, o, o, d}, AmplitudeClass::AlgebraicExact);
  return UnitaryRep::make(g, {a, b});
}

inline Dfr dfr_f2() {
  UnitaryRep rep = f2_base_rep();
  return Dfr::make(rep.group, {rep}, TauModel::exp_declared());
}

// F_r embeds in F_2 as the free subgroup generated by a^j b a^-j, j = 1..r
inline std::vector<Word> fr_embedding_words(int r) {
  std::vector<Word> words;
  for (int j = 1; j <= r; ++j) {
    Word w;
    for (int i = 0; i < j; ++i) w.push_back({0, 1});
    w.push_back({1, 1});
    for (int i = 0; i < j; ++i) w.push_back({0, -1});
    words.push_back(std::move(w));
  }
  return words;
}

inline Dfr dfr_fr(int r) {
  if (r < 1) throw std::invalid_argument("free rank must be >= 1");
  UnitaryRep base = f2_base_rep();
  UnitaryRep rep = restrict_rep(base, GroupPresentation::free_group(r),
                                fr_embedding_words(r));
  return Dfr::make(rep.group, {rep}, TauModel::exp_declared());
}

inline GroupPresentation abelian_group_for(int r, const std::vector<long>& moduli) {
  if (moduli.empty()) {
    if (r == 0) return GroupPresentation::trivial();
    return GroupPresentation::free_abelian(r);
  }
  if (r == 0 && moduli.size() == 1) return GroupPresentation::cyclic(moduli[0]);
  return GroupPresentation::abelian_mixed(r, moduli);
}

inline Dfr dfr_abelian_algebraic(int r, const std::vector<long>& moduli) {
  if (r < 0) throw std::invalid_argument("free rank must be >= 0");
  if (r == 0 && moduli.empty()) return dfr_trivial();
  GroupPresentation g = abelian_group_for(r, moduli);
  std::vector<UnitaryRep> reps;
  for (int j = 0; j < r; ++j)
    reps.push_back(coordinate_rep(g, j, algebraic_phase_gate()));
  for (size_t i = 0; i < moduli.size(); ++i)
    reps.push_back(coordinate_rep(
        g, r + static_cast<int>(i), phase_gate(exp_2pi_i(Rational(1, moduli[i])))));
  TauModel tau = (r == 0) ? TauModel::constant(constant_gap_for_modulus(moduli.back()))
                          : TauModel::poly_declared();
  return Dfr::make(g, std::move(reps), std::move(tau));
}

inline Dfr dfr_abelian_nonalgebraic(int r, const std::vector<long>& moduli,
                                    double delta) {
  if (r < 1) throw std::invalid_argument("nonalgebraic family needs free rank >= 1");
  if (!(delta > 0.0 && delta <= 2.0))
    throw std::invalid_argument("delta must lie in (0, 2]");
  GroupPresentation g = abelian_group_for(r, moduli);
  int per_coord = 1 + static_cast<int>(std::floor(2.0 / delta));
  std::vector<UnitaryRep> reps;
  for (int j = 0; j < r; ++j) {
    for (int l = 0; l < per_coord; ++l) {
      BigFloat root = sqrt(BigFloat(small_primes().at(l)));
      reps.push_back(coordinate_rep(
          g, j,
          phase_gate_big(exp_arg_times_2pi(root), AmplitudeClass::CTildeNumeric)));
    }
  }
  for (size_t i = 0; i < moduli.size(); ++i)
    reps.push_back(coordinate_rep(
        g, r + static_cast<int>(i), phase_gate(exp_2pi_i(Rational(1, moduli[i])))));
  return Dfr::make(g, std::move(reps), TauModel::poly_declared_exponent(delta));
}

inline Dfr dfr_direct_product_of_frees(const std::vector<int>& ranks) {
  if (ranks.empty()) throw std::invalid_argument("need at least one free factor");
  GroupPresentation g = GroupPresentation::direct_product_of_frees(ranks);
  UnitaryRep base = f2_base_rep();
  std::vector<UnitaryRep> reps;
  int offset = 0;
  for (int rank : ranks) {
    std::vector<UnitaryMatrix> images(g.generator_count(),
                                      UnitaryMatrix::identity(2));
    std::vector<Word> emb = fr_embedding_words(rank);
    for (int j = 0; j < rank; ++j) images[offset + j] = eval_rep(base, emb[j]);
    reps.push_back(UnitaryRep::make(g, std::move(images)));
    offset += rank;
  }
  return Dfr::make(g, std::move(reps), TauModel::exp_declared());
}

inline Dfr dfr_tan_zr(int r) {
  if (r < 1) throw std::invalid_argument("rank must be >= 1");
  if (r > static_cast<int>(tan_primes().size()))
    throw std::invalid_argument("rank exceeds the built-in prime table");
  GroupPresentation g = GroupPresentation::free_abelian(r);
  std::vector<UnitaryMatrix> images;
  for (int j = 0; j < r; ++j) images.push_back(tan_rotation(tan_primes()[j]));
  UnitaryRep rep = UnitaryRep::make(g, std::move(images));
  return Dfr::make(g, {rep}, TauModel::poly_declared());
}

// parameter for the free-product family: the phase exponent alpha in
// lambda = e^{i pi alpha}; sqrt(2) is the default, rationals are allowed for
// experiments
struct ShalenAlpha {
  bool is_sqrt2 = true;
  Rational value;  // used when is_sqrt2 is false

  static ShalenAlpha sqrt2() { return ShalenAlpha{}; }
  static ShalenAlpha rational(Rational v) { return ShalenAlpha{false, std::move(v)}; }
};

inline Dfr dfr_shalen_z_free_zr(int r, ShalenAlpha alpha = ShalenAlpha::sqrt2()) {
  if (r < 1) throw std::invalid_argument("rank must be >= 1");
  if (r > static_cast<int>(tan_primes().size()))
    throw std::invalid_argument("rank exceeds the built-in prime table");
  GroupPresentation g = GroupPresentation::free_product_z_zr(r);

  // lambda and its square; exact when alpha is rational with denominator | 4
  Scalar lambda, lambda_sq;
  AmplitudeClass cls;
  if (alpha.is_sqrt2) {
    BigFloat angle = boost::math::constants::pi<BigFloat>() * sqrt(BigFloat(2));
    lambda = Scalar::big(cos(angle), sin(angle));
    lambda_sq = Scalar::big(cos(angle * 2), sin(angle * 2));
    cls = AmplitudeClass::CTildeNumeric;
  } else {
    lambda = exp_2pi_i(alpha.value / 2);
    lambda_sq = exp_2pi_i(alpha.value);
    cls = lambda.is_exact() ? AmplitudeClass::AlgebraicExact
                            : AmplitudeClass::AlgebraicNumeric;
  }
  UnitaryMatrix big_lambda = UnitaryMatrix::make(
      2, {lambda, Scalar::zero(), Scalar::zero(), lambda_sq}, cls);
  UnitaryMatrix big_lambda_inv = big_lambda.dagger();

  std::vector<UnitaryMatrix> images;
  std::vector<std::vector<UnitaryMatrix>> factorizations;
  // generator 0 is y, the free factor
  images.push_back(tan_rotation(tan_primes()[0]));
  factorizations.push_back({});
  for (int j = 0; j < r; ++j) {
    UnitaryMatrix rot = tan_rotation(tan_primes()[j]);
    images.push_back(big_lambda * rot * big_lambda_inv);
    factorizations.push_back({big_lambda, rot, big_lambda_inv});
  }
  UnitaryRep rep = UnitaryRep::make(g, std::move(images));
  rep.factorizations = std::move(factorizations);
  return Dfr::make(g, {rep}, TauModel::unbounded());
}

// ---- combinators ----

// collapse to a single representation by direct sum; records the same tau
inline Dfr dfr_combine(const Dfr& f) {
  UnitaryRep sum = f.reps[0];
  for (int j = 1; j < f.k; ++j) sum = direct_sum_reps(sum, f.reps[j]);
  Dfr out = Dfr::make(f.group, {sum}, f.tau);
  out.certified = f.certified;
  out.certified_radius = f.certified_radius;
  return out;
}

inline Dfr dfr_pad(const Dfr& f, int d2) {
  std::vector<UnitaryRep> reps;
  for (const auto& r : f.reps) reps.push_back(pad_rep(r, d2));
  Dfr out = Dfr::make(f.group, std::move(reps), f.tau);
  out.certified = f.certified;
  out.certified_radius = f.certified_radius;
  return out;
}

inline GroupPresentation product_group(const GroupPresentation& a,
                                       const GroupPresentation& b) {
  auto abelian_parts = [](const GroupPresentation& g, int& r,
                          std::vector<long>& moduli) -> bool {
    switch (g.family) {
      case GroupFamily::Trivial: r = 0; return true;
      case GroupFamily::CyclicFinite: r = 0; moduli = {g.modulus}; return true;
      case GroupFamily::FreeAbelian: r = g.rank; return true;
      case GroupFamily::AbelianMixed: r = g.rank; moduli = g.moduli; return true;
      default: return false;
    }
  };
  auto free_ranks = [](const GroupPresentation& g, std::vector<int>& out) -> bool {
    switch (g.family) {
      case GroupFamily::Free: out = {g.rank}; return true;
      case GroupFamily::DirectProductOfFrees: out = g.factor_ranks; return true;
      default: return false;
    }
  };
  int ra = 0, rb = 0;
  std::vector<long> ma, mb;
  if (abelian_parts(a, ra, ma) && abelian_parts(b, rb, mb)) {
    std::vector<long> moduli = ma;
    moduli.insert(moduli.end(), mb.begin(), mb.end());
    // torsion moduli must form a divisor chain in our normal form
    for (size_t i = 1; i < moduli.size(); ++i)
      if (moduli[i] % moduli[i - 1] != 0)
        throw std::invalid_argument(
            "product torsion moduli must form a divisor chain");
    return abelian_group_for(ra + rb, moduli);
  }
  std::vector<int> fa, fb;
  if (free_ranks(a, fa) && free_ranks(b, fb)) {
    fa.insert(fa.end(), fb.begin(), fb.end());
    return GroupPresentation::direct_product_of_frees(fa);
  }
  throw std::invalid_argument("unsupported product of group families");
}

inline TauModel tau_pointwise_min(const TauModel& a, const TauModel& b) {
  if (a.kind == TauKind::Unbounded || b.kind == TauKind::Unbounded)
    return TauModel::unbounded();
  if (a.shape == TauShape::Constant && b.shape == TauShape::Constant &&
      a.has_constants && b.has_constants)
    return TauModel::constant(std::min(a.c1, b.c1));
  if (a.shape == TauShape::Exp || b.shape == TauShape::Exp)
    return TauModel::exp_declared();
  if (a.shape == TauShape::Constant) return b.has_constants ? TauModel::poly_declared() : b;
  if (b.shape == TauShape::Constant) return a.has_constants ? TauModel::poly_declared() : a;
  if (a.fixed_exponent && b.fixed_exponent)
    return TauModel::poly_declared_exponent(std::max(a.c2, b.c2));
  return TauModel::poly_declared();
}

// product family on G x H: every representation of either factor, extended by
// acting trivially on the other; tau is the pointwise minimum
inline Dfr dfr_product(const Dfr& fa, const Dfr& fb) {
  GroupPresentation g = product_group(fa.group, fb.group);
  int d = std::max(fa.d, fb.d);
  int na = fa.group.generator_count(), nb = fb.group.generator_count();

  // The abelian normal form lists all free generators before all torsion
  // generators, so the slots of the two factors interleave; the free-product
  // form keeps them contiguous.
  auto free_rank_of = [](const GroupPresentation& p) {
    return (p.family == GroupFamily::FreeAbelian ||
            p.family == GroupFamily::AbelianMixed)
               ? p.rank
               : 0;
  };
  std::vector<int> slot_a(na), slot_b(nb);
  bool abelian = g.family == GroupFamily::Trivial ||
                 g.family == GroupFamily::CyclicFinite ||
                 g.family == GroupFamily::FreeAbelian ||
                 g.family == GroupFamily::AbelianMixed;
  if (abelian) {
    int ra = free_rank_of(fa.group), rb = free_rank_of(fb.group);
    for (int j = 0; j < na; ++j) slot_a[j] = j < ra ? j : rb + j;
    for (int j = 0; j < nb; ++j) slot_b[j] = j < rb ? ra + j : na + j;
  } else {
    for (int j = 0; j < na; ++j) slot_a[j] = j;
    for (int j = 0; j < nb; ++j) slot_b[j] = na + j;
  }

  auto lift = [&](const Dfr& f, const std::vector<int>& slots) {
    std::vector<UnitaryRep> out;
    for (const auto& r : f.reps) {
      std::vector<UnitaryMatrix> images(g.generator_count(),
                                        UnitaryMatrix::identity(d));
      for (size_t j = 0; j < r.images.size(); ++j) {
        UnitaryMatrix m = r.images[j];
        if (m.dim() < d) m = m.direct_sum(UnitaryMatrix::identity(d - m.dim()));
        images[slots[j]] = m;
      }
      out.push_back(UnitaryRep::make(g, std::move(images), r.projective));
    }
    return out;
  };
  std::vector<UnitaryRep> reps = lift(fa, slot_a);
  std::vector<UnitaryRep> more = lift(fb, slot_b);
  reps.insert(reps.end(), more.begin(), more.end());
  return Dfr::make(g, std::move(reps), tau_pointwise_min(fa.tau, fb.tau));
}

// restriction to a subgroup along the given embedding words; the gap bound
// survives pointwise but the length scale changes, so constants are dropped
// and the family must be recertified
inline TauModel tau_needs_recalibration(const TauModel& t) {
  if (t.kind == TauKind::Unbounded) return t;
  TauModel out;
  out.kind = (t.shape == TauShape::Exp) ? TauKind::ExpLower : TauKind::PolyLower;
  out.shape = (t.shape == TauShape::Constant) ? TauShape::Poly : t.shape;
  out.has_constants = false;
  return out;
}

inline Dfr dfr_subgroup(const Dfr& f, GroupPresentation subgroup,
                        const std::vector<Word>& embedding) {
  std::vector<UnitaryRep> reps;
  for (const auto& r : f.reps)
    reps.push_back(restrict_rep(r, subgroup, embedding));
  return Dfr::make(std::move(subgroup), std::move(reps),
                   tau_needs_recalibration(f.tau));
}

// induction through a coset table; dimensions grow by the index
inline Dfr dfr_overgroup(const Dfr& f, const CosetTable& table) {
  std::vector<UnitaryRep> reps;
  for (const auto& r : f.reps) reps.push_back(induce_rep(r, table));
  GroupPresentation g = reps[0].group;
  return Dfr::make(std::move(g), std::move(reps), tau_needs_recalibration(f.tau));
}

}  // namespace qcfa
