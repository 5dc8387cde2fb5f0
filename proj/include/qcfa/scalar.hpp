#pragma once

// Two scalar backends share one interface:
//  - exact elements of Q(i, sqrt2, sqrt5), stored as Gaussian-rational
//    coordinates over the basis {1, sqrt2, sqrt5, sqrt10}; closed under
//    +, -, *, /, conjugation, so unitarity and acceptance probabilities of
//    the algebraic constructions can be checked with no rounding at all;
//  - arbitrary-precision complex floats on MPFR for everything else.
// Mixed arithmetic coerces to the float backend.

#include <array>
#include <boost/multiprecision/gmp.hpp>
#include <boost/multiprecision/mpfr.hpp>
#include <complex>
#include <numeric>
#include <optional>
#include <sstream>
#include <string>
#include <variant>

#include "qcfa/common.hpp"

namespace qcfa {

using Rational = boost::multiprecision::mpq_rational;
using Integer = boost::multiprecision::mpz_int;
using BigFloat = boost::multiprecision::mpfr_float;

// ---------------------------------------------------------------------------
// numeric context

namespace detail {
inline unsigned bits_to_digits10(int bits) {
  return static_cast<unsigned>(bits * 0.30103) + 3;
}
}  // namespace detail

struct NumericConfig {
  int precision_bits = 256;
  bool eps_overridden = false;
  double eps_log2 = 0;  // eps_num = 2^eps_log2 when overridden
};

inline NumericConfig& numeric_config() {
  static NumericConfig cfg;
  return cfg;
}

// Every thread that touches BigFloat must call this once (worker threads get
// it via the parallel_for init hook); MPFR default precision is per-thread.
inline void apply_thread_precision() {
  BigFloat::default_precision(
      detail::bits_to_digits10(numeric_config().precision_bits));
}

namespace detail {
struct ThreadInit {
  ThreadInit() { apply_thread_precision(); }
};
// A thread_local at namespace scope is only constructed when odr-used, so
// eps_num references it below; the plain inline copy runs during static
// initialization and covers the main thread before any float work starts.
inline thread_local ThreadInit thread_init_once;
inline const ThreadInit static_init_once{};
}  // namespace detail

inline void set_precision_bits(int bits) {
  if (bits < 64 || bits > (1 << 20))
    throw std::invalid_argument("precision_bits must be in [64, 2^20]");
  numeric_config().precision_bits = bits;
  numeric_config().eps_overridden = false;
  apply_thread_precision();
}

inline int precision_bits() { return numeric_config().precision_bits; }

inline void set_eps_num(double value) {
  if (!(value > 0) || value >= 1)
    throw std::invalid_argument("eps_num override must be in (0, 1)");
  numeric_config().eps_overridden = true;
  numeric_config().eps_log2 = std::log2(value);
}

// Comparison tolerance for the float backend; defaults to 2^-(precision/2).
inline BigFloat eps_num() {
  (void)detail::thread_init_once;
  const NumericConfig& cfg = numeric_config();
  double l2 = cfg.eps_overridden ? cfg.eps_log2 : -cfg.precision_bits / 2.0;
  return exp2(BigFloat(l2));
}

// ---------------------------------------------------------------------------
// rational helpers

inline Rational parse_rational(const std::string& s) {
  auto slash = s.find('/');
  try {
    if (slash == std::string::npos) return Rational(Integer(s));
    Integer num(s.substr(0, slash));
    Integer den(s.substr(slash + 1));
    if (den == 0) throw std::invalid_argument("zero denominator");
    return Rational(num, den);
  } catch (const std::exception&) {
    throw std::invalid_argument("bad rational literal: " + s);
  }
}

inline std::string rational_to_string(const Rational& q) {
  std::ostringstream os;
  os << q;
  return os.str();
}

// ---------------------------------------------------------------------------
// Gaussian rationals

struct GaussRat {
  Rational re, im;

  GaussRat() = default;
  GaussRat(Rational r, Rational i) : re(std::move(r)), im(std::move(i)) {}
  explicit GaussRat(long r) : re(r), im(0) {}

  bool is_zero() const { return re.is_zero() && im.is_zero(); }
  bool is_real() const { return im.is_zero(); }

  GaussRat operator+(const GaussRat& o) const { return {re + o.re, im + o.im}; }
  GaussRat operator-(const GaussRat& o) const { return {re - o.re, im - o.im}; }
  GaussRat operator-() const { return {-re, -im}; }
  GaussRat operator*(const GaussRat& o) const {
    if (is_zero() || o.is_zero()) return GaussRat(0);
    if (im.is_zero() && o.im.is_zero()) return {re * o.re, Rational(0)};
    return {re * o.re - im * o.im, re * o.im + im * o.re};
  }
  GaussRat conj() const { return {re, -im}; }

  GaussRat inverse() const {
    if (is_zero()) throw std::domain_error("division by zero");
    Rational n = re * re + im * im;
    return {re / n, -im / n};
  }

  void operator+=(const GaussRat& o) {
    re += o.re;
    im += o.im;
  }
  bool operator==(const GaussRat& o) const { return re == o.re && im == o.im; }
};

// ---------------------------------------------------------------------------
// square-root constants at the current working precision

namespace detail {
struct RootCache {
  unsigned digits = 0;
  BigFloat s2, s5, s10;
};

inline const RootCache& root_cache() {
  thread_local RootCache c;
  unsigned d = BigFloat::default_precision();
  if (c.digits != d) {
    c.digits = d;
    c.s2 = sqrt(BigFloat(2));
    c.s5 = sqrt(BigFloat(5));
    c.s10 = sqrt(BigFloat(10));
  }
  return c;
}
}  // namespace detail

// ---------------------------------------------------------------------------
// exact field Q(i, sqrt2, sqrt5)

class ExactScalar {
 public:
  // coords over {1, sqrt2, sqrt5, sqrt10}
  std::array<GaussRat, 4> c;

  ExactScalar() : c{GaussRat(0), GaussRat(0), GaussRat(0), GaussRat(0)} {}
  explicit ExactScalar(GaussRat g)
      : c{std::move(g), GaussRat(0), GaussRat(0), GaussRat(0)} {}
  explicit ExactScalar(const Rational& q) : ExactScalar(GaussRat(q, 0)) {}
  explicit ExactScalar(long n) : ExactScalar(GaussRat(n)) {}

  static ExactScalar with_coords(GaussRat c0, GaussRat c1, GaussRat c2,
                                 GaussRat c3) {
    ExactScalar s;
    s.c = {std::move(c0), std::move(c1), std::move(c2), std::move(c3)};
    return s;
  }
  static ExactScalar gauss(Rational re, Rational im) {
    return ExactScalar(GaussRat(std::move(re), std::move(im)));
  }

  bool is_zero() const {
    return c[0].is_zero() && c[1].is_zero() && c[2].is_zero() && c[3].is_zero();
  }
  bool is_rational_complex() const {
    return c[1].is_zero() && c[2].is_zero() && c[3].is_zero();
  }
  bool is_real() const {
    return c[0].is_real() && c[1].is_real() && c[2].is_real() && c[3].is_real();
  }

  ExactScalar operator+(const ExactScalar& o) const {
    ExactScalar r;
    for (int i = 0; i < 4; ++i) r.c[i] = c[i] + o.c[i];
    return r;
  }
  ExactScalar operator-(const ExactScalar& o) const {
    ExactScalar r;
    for (int i = 0; i < 4; ++i) r.c[i] = c[i] - o.c[i];
    return r;
  }
  ExactScalar operator-() const {
    ExactScalar r;
    for (int i = 0; i < 4; ++i) r.c[i] = -c[i];
    return r;
  }

  ExactScalar operator*(const ExactScalar& o) const {
    // fast path: both operands live in Q(i)
    if (is_rational_complex() && o.is_rational_complex())
      return ExactScalar(c[0] * o.c[0]);
    ExactScalar r;
    for (int i = 0; i < 4; ++i) {
      if (c[i].is_zero()) continue;
      for (int j = 0; j < 4; ++j) {
        if (o.c[j].is_zero()) continue;
        auto [k, f] = basis_mul(i, j);
        GaussRat t = c[i] * o.c[j];
        if (f != 1) t = GaussRat(t.re * f, t.im * f);
        r.c[k] += t;
      }
    }
    return r;
  }

  ExactScalar conj() const {
    ExactScalar r;
    for (int i = 0; i < 4; ++i) r.c[i] = c[i].conj();
    return r;
  }

  // |z|^2; a real element of the field
  ExactScalar norm_sq() const { return *this * conj(); }

  ExactScalar inverse() const {
    if (is_zero()) throw std::domain_error("division by zero");
    if (is_rational_complex()) return ExactScalar(c[0].inverse());
    // eliminate sqrt2 with the Galois conjugate, then sqrt5, then invert in Q(i)
    ExactScalar s2 = *this;
    s2.c[1] = -s2.c[1];
    s2.c[3] = -s2.c[3];
    ExactScalar w = *this * s2;  // lies in Q(i, sqrt5)
    ExactScalar w5 = w;
    w5.c[2] = -w5.c[2];
    w5.c[3] = -w5.c[3];
    ExactScalar u = w * w5;  // lies in Q(i)
    GaussRat uinv = u.c[0].inverse();
    ExactScalar r = s2 * w5;
    for (int i = 0; i < 4; ++i) r.c[i] = r.c[i] * uinv;
    return r;
  }

  bool operator==(const ExactScalar& o) const { return c == o.c; }

  // numeric view at the current working precision
  void to_big(BigFloat& re, BigFloat& im) const {
    const auto& rc = detail::root_cache();
    re = BigFloat(c[0].re);
    im = BigFloat(c[0].im);
    if (!c[1].is_zero()) {
      re += BigFloat(c[1].re) * rc.s2;
      im += BigFloat(c[1].im) * rc.s2;
    }
    if (!c[2].is_zero()) {
      re += BigFloat(c[2].re) * rc.s5;
      im += BigFloat(c[2].im) * rc.s5;
    }
    if (!c[3].is_zero()) {
      re += BigFloat(c[3].re) * rc.s10;
      im += BigFloat(c[3].im) * rc.s10;
    }
  }

  std::complex<double> to_complex_double() const {
    BigFloat re, im;
    to_big(re, im);
    return {re.convert_to<double>(), im.convert_to<double>()};
  }

  // Rigorous sign of a real field element: exact zero test first, then
  // evaluation at increasing precision until the interval excludes zero.
  int sign_real() const {
    if (!is_real()) throw std::domain_error("sign of a non-real scalar");
    if (is_zero()) return 0;
    if (is_rational_complex()) return c[0].re.sign();
    unsigned saved = BigFloat::default_precision();
    for (int bits = 192; bits <= (1 << 20); bits *= 2) {
      BigFloat::default_precision(detail::bits_to_digits10(bits));
      BigFloat val(0), mag(0);
      const auto& rc = detail::root_cache();
      const BigFloat roots[4] = {BigFloat(1), rc.s2, rc.s5, rc.s10};
      for (int i = 0; i < 4; ++i) {
        if (c[i].is_zero()) continue;
        BigFloat t = BigFloat(c[i].re) * roots[i];
        val += t;
        mag += abs(t);
      }
      BigFloat bound = ldexp(mag + 1, 5 - bits);
      if (abs(val) > bound) {
        int s = val.sign();
        BigFloat::default_precision(saved);
        return s;
      }
    }
    BigFloat::default_precision(saved);
    throw std::runtime_error("sign_real: could not separate value from zero");
  }

 private:
  // product of basis elements i*j = factor * basis[k]
  static std::pair<int, int> basis_mul(int i, int j) {
    static constexpr int idx[4][4] = {
        {0, 1, 2, 3}, {1, 0, 3, 2}, {2, 3, 0, 1}, {3, 2, 1, 0}};
    static constexpr int fac[4][4] = {
        {1, 1, 1, 1}, {1, 2, 1, 2}, {1, 1, 5, 5}, {1, 2, 5, 10}};
    return {idx[i][j], fac[i][j]};
  }
};

// sqrt of a nonnegative rational inside the field, when it exists there.
// Factors out the square part by trial division; gives up (nullopt) on
// numbers whose squarefree part cannot be certified or falls outside
// {1, 2, 5, 10}.
inline std::optional<ExactScalar> sqrt_exact(const Rational& q) {
  if (q.sign() < 0) return std::nullopt;
  if (q.is_zero()) return ExactScalar(0);
  auto split_square = [](Integer n) -> std::optional<std::pair<Integer, long>> {
    // n = square * squarefree; the squarefree part must stay <= 10
    Integer root(1);
    long sf = 1;
    bool fully_factored = false;
    for (long p = 2; p <= 1000000L; p += (p == 2 ? 1 : 2)) {
      if (Integer(p) * p > n) {
        fully_factored = true;
        break;
      }
      if (n % p != 0) continue;
      int e = 0;
      while (n % p == 0) {
        n /= p;
        ++e;
      }
      for (int t = 0; t < e / 2; ++t) root *= p;
      if (e % 2) sf *= p;
      if (sf > 10) return std::nullopt;
    }
    if (n > 1) {
      if (fully_factored) {
        // remainder is prime
        if (n > 10 || sf * n.convert_to<long>() > 10) return std::nullopt;
        sf *= n.convert_to<long>();
      } else {
        Integer s = sqrt(n);
        if (s * s == n)
          root *= s;
        else
          return std::nullopt;  // cannot certify the squarefree part
      }
    }
    return std::make_pair(root, sf);
  };
  auto pn = split_square(numerator(q));
  auto pd = split_square(denominator(q));
  if (!pn || !pd) return std::nullopt;
  auto [an, fn] = *pn;
  auto [ad, fd] = *pd;
  long g = std::gcd(fn, fd);
  long f = (fn / g) * (fd / g);  // squarefree part of fn*fd
  Rational coeff(an * g, ad * fd);
  ExactScalar r;
  switch (f) {
    case 1:
      r.c[0] = GaussRat(coeff, Rational(0));
      break;
    case 2:
      r.c[1] = GaussRat(coeff, Rational(0));
      break;
    case 5:
      r.c[2] = GaussRat(coeff, Rational(0));
      break;
    case 10:
      r.c[3] = GaussRat(coeff, Rational(0));
      break;
    default:
      return std::nullopt;
  }
  return r;
}

// ---------------------------------------------------------------------------
// arbitrary-precision complex floats

struct BigComplex {
  BigFloat re, im;

  BigComplex() : re(0), im(0) {}
  BigComplex(BigFloat r, BigFloat i) : re(std::move(r)), im(std::move(i)) {}
  explicit BigComplex(double r) : re(r), im(0) {}

  static BigComplex from_exact(const ExactScalar& e) {
    BigComplex z;
    e.to_big(z.re, z.im);
    return z;
  }

  bool is_zero() const { return re.is_zero() && im.is_zero(); }

  BigComplex operator+(const BigComplex& o) const {
    return {re + o.re, im + o.im};
  }
  BigComplex operator-(const BigComplex& o) const {
    return {re - o.re, im - o.im};
  }
  BigComplex operator-() const { return {-re, -im}; }
  BigComplex operator*(const BigComplex& o) const {
    return {re * o.re - im * o.im, re * o.im + im * o.re};
  }
  BigComplex conj() const { return {re, -im}; }
  BigFloat norm_sq() const { return re * re + im * im; }
  BigFloat abs() const { return sqrt(norm_sq()); }

  BigComplex inverse() const {
    BigFloat n = norm_sq();
    if (n.is_zero()) throw std::domain_error("division by zero");
    return {re / n, -im / n};
  }

  std::complex<double> to_complex_double() const {
    return {re.convert_to<double>(), im.convert_to<double>()};
  }
};

// ---------------------------------------------------------------------------
// unified scalar

enum class Backend { Exact, Big };

class Scalar {
 public:
  Scalar() : v_(ExactScalar()) {}
  /* implicit */ Scalar(ExactScalar e) : v_(std::move(e)) {}
  /* implicit */ Scalar(BigComplex b) : v_(std::move(b)) {}

  static Scalar zero() { return Scalar(); }
  static Scalar one() { return Scalar(ExactScalar(1)); }
  static Scalar from_rational(const Rational& q) { return Scalar(ExactScalar(q)); }
  static Scalar from_int(long n) { return Scalar(ExactScalar(n)); }
  static Scalar gauss(Rational re, Rational im) {
    return Scalar(ExactScalar::gauss(std::move(re), std::move(im)));
  }
  static Scalar big(BigFloat re, BigFloat im) {
    return Scalar(BigComplex(std::move(re), std::move(im)));
  }
  static Scalar big_real(BigFloat re) { return big(std::move(re), BigFloat(0)); }

  Backend backend() const {
    return std::holds_alternative<ExactScalar>(v_) ? Backend::Exact
                                                   : Backend::Big;
  }
  bool is_exact() const { return backend() == Backend::Exact; }

  const ExactScalar& exact() const { return std::get<ExactScalar>(v_); }
  BigComplex to_big_complex() const {
    (void)detail::thread_init_once;
    if (is_exact()) return BigComplex::from_exact(exact());
    return std::get<BigComplex>(v_);
  }

  bool is_zero() const {
    return is_exact() ? exact().is_zero() : std::get<BigComplex>(v_).is_zero();
  }

  Scalar operator+(const Scalar& o) const {
    if (is_exact() && o.is_exact()) return Scalar(exact() + o.exact());
    return Scalar(to_big_complex() + o.to_big_complex());
  }
  Scalar operator-(const Scalar& o) const {
    if (is_exact() && o.is_exact()) return Scalar(exact() - o.exact());
    return Scalar(to_big_complex() - o.to_big_complex());
  }
  Scalar operator-() const {
    if (is_exact()) return Scalar(-exact());
    return Scalar(-std::get<BigComplex>(v_));
  }
  Scalar operator*(const Scalar& o) const {
    if (is_exact() && o.is_exact()) return Scalar(exact() * o.exact());
    return Scalar(to_big_complex() * o.to_big_complex());
  }
  Scalar inverse() const {
    if (is_exact()) return Scalar(exact().inverse());
    return Scalar(std::get<BigComplex>(v_).inverse());
  }
  Scalar operator/(const Scalar& o) const { return *this * o.inverse(); }
  Scalar conj() const {
    if (is_exact()) return Scalar(exact().conj());
    return Scalar(std::get<BigComplex>(v_).conj());
  }
  Scalar norm_sq() const {
    if (is_exact()) return Scalar(exact().norm_sq());
    return Scalar(BigComplex(std::get<BigComplex>(v_).norm_sq(), BigFloat(0)));
  }

  // exact on the exact backend, eps_num tolerance otherwise
  bool same_as(const Scalar& o) const {
    if (is_exact() && o.is_exact()) return exact() == o.exact();
    BigComplex d = to_big_complex() - o.to_big_complex();
    return d.abs() <= eps_num();
  }

  // sign of a real scalar; rigorous on the exact backend
  int sign_real() const {
    if (is_exact()) return exact().sign_real();
    const BigComplex& b = std::get<BigComplex>(v_);
    return b.re.sign();
  }
  bool is_real() const {
    if (is_exact()) return exact().is_real();
    return abs(std::get<BigComplex>(v_).im) <= eps_num();
  }

  BigFloat real_big() const { return to_big_complex().re; }
  double real_d() const { return to_big_complex().re.convert_to<double>(); }
  std::complex<double> to_complex_double() const {
    return to_big_complex().to_complex_double();
  }

 private:
  std::variant<ExactScalar, BigComplex> v_;
};

// sqrt of a nonnegative rational: exact when the field contains it,
// float fallback otherwise
inline Scalar sqrt_scalar(const Rational& q) {
  if (auto e = sqrt_exact(q)) return Scalar(*e);
  return Scalar::big_real(sqrt(BigFloat(q)));
}

}  // namespace qcfa
