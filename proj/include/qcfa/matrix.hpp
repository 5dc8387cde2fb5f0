#pragma once

// Dense complex linear algebra over the Scalar backends for the small
// dimensions a quantum register needs (d <= 16 in practice). Matrices are
// validated as unitary on construction; products of validated matrices are
// trusted and not re-checked.

#include <algorithm>
#include <boost/math/constants/constants.hpp>
#include <vector>

#include "qcfa/scalar.hpp"

namespace qcfa {

// How trustworthy the amplitudes are as numbers: exact algebraic entries,
// floating images of algebraic numbers, floating images of computable
// transcendentals, or unclassified floats. Joins take the worst.
enum class AmplitudeClass {
  AlgebraicExact = 0,
  AlgebraicNumeric = 1,
  CTildeNumeric = 2,
  GenericNumeric = 3,
};

inline AmplitudeClass join(AmplitudeClass a, AmplitudeClass b) {
  return a < b ? b : a;
}

inline const char* to_string(AmplitudeClass c) {
  switch (c) {
    case AmplitudeClass::AlgebraicExact: return "algebraic-exact";
    case AmplitudeClass::AlgebraicNumeric: return "algebraic-numeric";
    case AmplitudeClass::CTildeNumeric: return "ctilde-numeric";
    default: return "generic-numeric";
  }
}

inline AmplitudeClass amplitude_class_from_string(const std::string& s) {
  if (s == "algebraic-exact") return AmplitudeClass::AlgebraicExact;
  if (s == "algebraic-numeric") return AmplitudeClass::AlgebraicNumeric;
  if (s == "ctilde-numeric") return AmplitudeClass::CTildeNumeric;
  if (s == "generic-numeric") return AmplitudeClass::GenericNumeric;
  throw std::invalid_argument("unknown amplitude class: " + s);
}

// ---------------------------------------------------------------------------

class StateVector {
 public:
  StateVector() = default;
  explicit StateVector(std::vector<Scalar> amps) : a_(std::move(amps)) {}

  // validated constructor: unit norm within eps_num (exactly 1 when exact)
  static StateVector make(std::vector<Scalar> amps) {
    StateVector v(std::move(amps));
    Scalar n = v.norm_sq();
    if (n.is_exact()) {
      if (!(n.exact() == ExactScalar(1)))
        throw std::invalid_argument("state vector is not normalized");
    } else if (abs(n.real_big() - 1) > eps_num()) {
      throw std::invalid_argument("state vector is not normalized");
    }
    return v;
  }

  static StateVector basis(int dim, int q) {
    if (q < 0 || q >= dim) throw std::invalid_argument("basis index out of range");
    std::vector<Scalar> a(dim, Scalar::zero());
    a[q] = Scalar::one();
    return StateVector(std::move(a));
  }

  // (1/sqrt d, ..., 1/sqrt d)
  static StateVector uniform(int dim) {
    std::vector<Scalar> a(dim, sqrt_scalar(Rational(1, dim)));
    return StateVector(std::move(a));
  }

  int dim() const { return static_cast<int>(a_.size()); }
  const Scalar& operator[](int i) const { return a_[i]; }
  Scalar& operator[](int i) { return a_[i]; }
  const std::vector<Scalar>& amplitudes() const { return a_; }

  Scalar norm_sq() const {
    Scalar s = Scalar::zero();
    for (const auto& x : a_) s = s + x.norm_sq();
    return s;
  }

  bool all_exact() const {
    return std::all_of(a_.begin(), a_.end(),
                       [](const Scalar& s) { return s.is_exact(); });
  }

  bool same_as(const StateVector& o) const {
    if (dim() != o.dim()) return false;
    for (int i = 0; i < dim(); ++i)
      if (!a_[i].same_as(o.a_[i])) return false;
    return true;
  }

 private:
  std::vector<Scalar> a_;
};

// <x, y> = sum conj(x_i) y_i
inline Scalar inner(const StateVector& x, const StateVector& y) {
  if (x.dim() != y.dim()) throw std::invalid_argument("dimension mismatch");
  Scalar s = Scalar::zero();
  for (int i = 0; i < x.dim(); ++i) s = s + x[i].conj() * y[i];
  return s;
}

// ---------------------------------------------------------------------------

class UnitaryMatrix {
 public:
  UnitaryMatrix() = default;

  // validated constructor
  static UnitaryMatrix make(int dim, std::vector<Scalar> entries,
                            AmplitudeClass cls) {
    UnitaryMatrix m = unchecked(dim, std::move(entries), cls);
    BigFloat defect = m.unitarity_defect();
    bool exact = m.all_exact();
    if ((exact && !defect.is_zero()) || (!exact && defect > eps_num()))
      throw std::invalid_argument("matrix is not unitary (defect " +
                                  defect.str(6) + ")");
    return m;
  }

  // for internal compositions whose unitarity is structural
  static UnitaryMatrix unchecked(int dim, std::vector<Scalar> entries,
                                 AmplitudeClass cls) {
    if (dim < 1 || entries.size() != static_cast<size_t>(dim) * dim)
      throw std::invalid_argument("bad matrix shape");
    UnitaryMatrix m;
    m.dim_ = dim;
    m.e_ = std::move(entries);
    m.cls_ = cls;
    return m;
  }

  static UnitaryMatrix identity(int dim) {
    std::vector<Scalar> e(static_cast<size_t>(dim) * dim, Scalar::zero());
    for (int i = 0; i < dim; ++i) e[static_cast<size_t>(i) * dim + i] = Scalar::one();
    return unchecked(dim, std::move(e), AmplitudeClass::AlgebraicExact);
  }

  int dim() const { return dim_; }
  AmplitudeClass amplitude_class() const { return cls_; }
  void set_amplitude_class(AmplitudeClass c) { cls_ = c; }

  const Scalar& at(int r, int c) const {
    return e_[static_cast<size_t>(r) * dim_ + c];
  }
  Scalar& at(int r, int c) { return e_[static_cast<size_t>(r) * dim_ + c]; }
  const std::vector<Scalar>& entries() const { return e_; }

  bool all_exact() const {
    return std::all_of(e_.begin(), e_.end(),
                       [](const Scalar& s) { return s.is_exact(); });
  }
  Backend backend() const {
    return all_exact() ? Backend::Exact : Backend::Big;
  }

  // max |(M\dagger M - I)_{uv}|
  BigFloat unitarity_defect() const {
    BigFloat worst(0);
    for (int u = 0; u < dim_; ++u) {
      for (int v = 0; v < dim_; ++v) {
        Scalar s = Scalar::zero();
        for (int k = 0; k < dim_; ++k) s = s + at(k, u).conj() * at(k, v);
        if (u == v) s = s - Scalar::one();
        if (s.is_exact()) {
          if (!s.is_zero()) {
            BigFloat a = sqrt(s.norm_sq().real_big());
            if (a > worst) worst = a;
          }
        } else {
          BigFloat a = s.to_big_complex().abs();
          if (a > worst) worst = a;
        }
      }
    }
    return worst;
  }

  UnitaryMatrix operator*(const UnitaryMatrix& o) const {
    if (dim_ != o.dim_) throw std::invalid_argument("dimension mismatch");
    UnitaryMatrix r;
    r.dim_ = dim_;
    r.cls_ = join(cls_, o.cls_);
    r.e_.assign(static_cast<size_t>(dim_) * dim_, Scalar::zero());
    for (int i = 0; i < dim_; ++i) {
      for (int k = 0; k < dim_; ++k) {
        const Scalar& a = at(i, k);
        if (a.is_zero()) continue;
        for (int j = 0; j < dim_; ++j) {
          const Scalar& b = o.at(k, j);
          if (b.is_zero()) continue;
          r.at(i, j) = r.at(i, j) + a * b;
        }
      }
    }
    return r;
  }

  UnitaryMatrix dagger() const {
    UnitaryMatrix r;
    r.dim_ = dim_;
    r.cls_ = cls_;
    r.e_.resize(e_.size());
    for (int i = 0; i < dim_; ++i)
      for (int j = 0; j < dim_; ++j) r.at(i, j) = at(j, i).conj();
    return r;
  }

  StateVector apply(const StateVector& v) const {
    if (v.dim() != dim_) throw std::invalid_argument("dimension mismatch");
    std::vector<Scalar> out(dim_, Scalar::zero());
    for (int i = 0; i < dim_; ++i) {
      Scalar s = Scalar::zero();
      for (int j = 0; j < dim_; ++j) {
        if (!at(i, j).is_zero() && !v[j].is_zero()) s = s + at(i, j) * v[j];
      }
      out[i] = s;
    }
    return StateVector(std::move(out));
  }

  Scalar trace() const {
    Scalar s = Scalar::zero();
    for (int i = 0; i < dim_; ++i) s = s + at(i, i);
    return s;
  }

  UnitaryMatrix direct_sum(const UnitaryMatrix& o) const {
    int d = dim_ + o.dim_;
    std::vector<Scalar> e(static_cast<size_t>(d) * d, Scalar::zero());
    UnitaryMatrix r = unchecked(d, std::move(e), join(cls_, o.cls_));
    for (int i = 0; i < dim_; ++i)
      for (int j = 0; j < dim_; ++j) r.at(i, j) = at(i, j);
    for (int i = 0; i < o.dim_; ++i)
      for (int j = 0; j < o.dim_; ++j) r.at(dim_ + i, dim_ + j) = o.at(i, j);
    return r;
  }

  UnitaryMatrix kron(const UnitaryMatrix& o) const {
    int d = dim_ * o.dim_;
    std::vector<Scalar> e(static_cast<size_t>(d) * d, Scalar::zero());
    UnitaryMatrix r = unchecked(d, std::move(e), join(cls_, o.cls_));
    for (int i = 0; i < dim_; ++i)
      for (int j = 0; j < dim_; ++j) {
        if (at(i, j).is_zero()) continue;
        for (int k = 0; k < o.dim_; ++k)
          for (int l = 0; l < o.dim_; ++l) {
            if (o.at(k, l).is_zero()) continue;
            r.at(i * o.dim_ + k, j * o.dim_ + l) = at(i, j) * o.at(k, l);
          }
      }
    return r;
  }

  bool is_diagonal() const {
    for (int i = 0; i < dim_; ++i)
      for (int j = 0; j < dim_; ++j) {
        if (i == j) continue;
        const Scalar& s = at(i, j);
        if (s.is_exact()) {
          if (!s.is_zero()) return false;
        } else if (s.to_big_complex().abs() > eps_num()) {
          return false;
        }
      }
    return true;
  }

  bool same_as(const UnitaryMatrix& o) const {
    if (dim_ != o.dim_) return false;
    for (size_t i = 0; i < e_.size(); ++i)
      if (!e_[i].same_as(o.e_[i])) return false;
    return true;
  }

  std::vector<std::complex<double>> to_double_matrix() const {
    std::vector<std::complex<double>> m(e_.size());
    for (size_t i = 0; i < e_.size(); ++i) m[i] = e_[i].to_complex_double();
    return m;
  }

 private:
  int dim_ = 0;
  std::vector<Scalar> e_;
  AmplitudeClass cls_ = AmplitudeClass::AlgebraicExact;
};

// ---------------------------------------------------------------------------
// measurements

struct MeasurementPartition {
  int dim = 0;
  std::vector<std::vector<int>> blocks;

  static MeasurementPartition make(int dim, std::vector<std::vector<int>> blocks) {
    std::vector<int> seen(dim, 0);
    for (const auto& b : blocks) {
      if (b.empty()) throw std::invalid_argument("empty measurement block");
      for (int q : b) {
        if (q < 0 || q >= dim) throw std::invalid_argument("block index out of range");
        if (seen[q]++) throw std::invalid_argument("blocks are not disjoint");
      }
    }
    for (int q = 0; q < dim; ++q)
      if (!seen[q]) throw std::invalid_argument("blocks do not cover the space");
    return {dim, std::move(blocks)};
  }

  // the {B_0 = rest, B_1 = {q}} split used by measurement rounds
  static MeasurementPartition round_blocks(int dim, int q1 = 0) {
    std::vector<int> rest;
    for (int q = 0; q < dim; ++q)
      if (q != q1) rest.push_back(q);
    if (rest.empty()) return make(dim, {{q1}});
    return make(dim, {rest, {q1}});
  }

  int block_of(int q) const {
    for (size_t r = 0; r < blocks.size(); ++r)
      for (int x : blocks[r])
        if (x == q) return static_cast<int>(r);
    throw std::invalid_argument("state not in any block");
  }
};

struct MeasureOutcome {
  int result = 0;
  Scalar prob;
  StateVector post;
};

inline Scalar sqrt_real_scalar(const Scalar& p) {
  if (p.is_exact()) {
    const ExactScalar& e = p.exact();
    if (e.is_rational_complex() && e.is_real()) return sqrt_scalar(e.c[0].re);
    return Scalar::big_real(sqrt(p.real_big()));
  }
  return Scalar::big_real(sqrt(p.real_big()));
}

// Projective measurement in the computational basis grouped by blocks;
// zero-probability branches are omitted.
inline std::vector<MeasureOutcome> measure(const StateVector& state,
                                           const MeasurementPartition& part) {
  if (state.dim() != part.dim) throw std::invalid_argument("dimension mismatch");
  std::vector<MeasureOutcome> out;
  for (size_t r = 0; r < part.blocks.size(); ++r) {
    Scalar p = Scalar::zero();
    for (int q : part.blocks[r]) p = p + state[q].norm_sq();
    bool zero = p.is_exact() ? p.is_zero() : (p.real_big() < eps_num());
    if (zero) continue;
    Scalar inv_norm = sqrt_real_scalar(p).inverse();
    std::vector<Scalar> post(state.dim(), Scalar::zero());
    for (int q : part.blocks[r]) post[q] = state[q] * inv_norm;
    out.push_back({static_cast<int>(r), p, StateVector(std::move(post))});
  }
  return out;
}

// ---------------------------------------------------------------------------
// canonical unitaries

// F with all first-row entries 1/sqrt(d): the discrete Fourier transform,
// F[u,v] = (1/sqrt d) w^{uv}, w = e^{-2 pi i / d}. Exact for d in {1, 2, 4}
// where the roots of unity are Gaussian rationals.
inline UnitaryMatrix dft_matrix(int d) {
  if (d < 1) throw std::invalid_argument("dft dimension must be positive");
  std::vector<Scalar> e(static_cast<size_t>(d) * d);
  if (d == 1 || d == 2 || d == 4) {
    Scalar scale = sqrt_scalar(Rational(1, d));
    // powers of w as Gaussian rationals: w = -1 (d=2), w = -i (d=4)
    std::vector<Scalar> w(4, Scalar::one());
    if (d == 2) w = {Scalar::one(), Scalar::from_int(-1)};
    if (d == 4)
      w = {Scalar::one(), Scalar::gauss(0, -1), Scalar::from_int(-1),
           Scalar::gauss(0, 1)};
    for (int u = 0; u < d; ++u)
      for (int v = 0; v < d; ++v)
        e[static_cast<size_t>(u) * d + v] = scale * w[(u * v) % d];
    return UnitaryMatrix::make(d, std::move(e), AmplitudeClass::AlgebraicExact);
  }
  BigFloat scale = 1 / sqrt(BigFloat(d));
  BigFloat two_pi = 2 * boost::math::constants::pi<BigFloat>();
  for (int u = 0; u < d; ++u)
    for (int v = 0; v < d; ++v) {
      BigFloat ang = -two_pi * ((u * v) % d) / d;
      e[static_cast<size_t>(u) * d + v] =
          Scalar::big(scale * cos(ang), scale * sin(ang));
    }
  return UnitaryMatrix::make(d, std::move(e), AmplitudeClass::AlgebraicNumeric);
}

// P_v: entry 1 at (row 1, column v), remaining columns in increasing order
// mapped to rows 2..d in increasing order. v is 1-based to match the usual
// statement of the multipass round.
inline UnitaryMatrix permutation_matrix(int d, int v) {
  if (v < 1 || v > d) throw std::invalid_argument("column index out of range");
  std::vector<Scalar> e(static_cast<size_t>(d) * d, Scalar::zero());
  UnitaryMatrix m =
      UnitaryMatrix::unchecked(d, std::move(e), AmplitudeClass::AlgebraicExact);
  m.at(0, v - 1) = Scalar::one();
  int row = 1;
  for (int c = 0; c < d; ++c) {
    if (c == v - 1) continue;
    m.at(row++, c) = Scalar::one();
  }
  return m;
}

// T_{psi1 -> psi2}: a deterministic unitary completion of the map.
// Identity when the states coincide; a single Householder reflection when
// <psi2, psi1> is real (all machine preparations fall in this case, keeping
// the exact backend exact); otherwise a phase rotation composed with a
// reflection, on the float backend.
inline UnitaryMatrix transfer_unitary(const StateVector& from,
                                      const StateVector& to) {
  int d = from.dim();
  if (to.dim() != d) throw std::invalid_argument("dimension mismatch");
  if (from.same_as(to)) return UnitaryMatrix::identity(d);

  auto householder = [&](const StateVector& a, const StateVector& b) {
    // maps a to b assuming <b, a> real; v = a - b
    std::vector<Scalar> vv(d);
    for (int i = 0; i < d; ++i) vv[i] = a[i] - b[i];
    StateVector v(std::move(vv));
    Scalar n = v.norm_sq();
    Scalar two_over_n = Scalar::from_int(2) * n.inverse();
    AmplitudeClass cls = (a.all_exact() && b.all_exact())
                             ? AmplitudeClass::AlgebraicExact
                             : AmplitudeClass::GenericNumeric;
    UnitaryMatrix h = UnitaryMatrix::identity(d);
    h.set_amplitude_class(cls);
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j)
        h.at(i, j) = h.at(i, j) - two_over_n * v[i] * v[j].conj();
    return h;
  };

  Scalar ov = inner(to, from);
  bool real_overlap = ov.is_exact() ? ov.exact().is_real() : ov.is_real();
  if (real_overlap) return householder(from, to);

  // rotate the target by the overlap phase, reflect, then undo the phase
  BigComplex c = ov.to_big_complex();
  BigFloat a = c.abs();
  BigComplex phase(c.re / a, c.im / a);
  std::vector<Scalar> tilted(d);
  for (int i = 0; i < d; ++i) tilted[i] = Scalar(phase) * to[i];
  StateVector mid(std::move(tilted));
  UnitaryMatrix h = householder(from, mid);
  UnitaryMatrix rot = UnitaryMatrix::identity(d);
  rot.set_amplitude_class(AmplitudeClass::GenericNumeric);
  Scalar shift = Scalar(phase.conj()) - Scalar::one();
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j)
      rot.at(i, j) = rot.at(i, j) + shift * mid[i] * mid[j].conj();
  return rot * h;
}

}  // namespace qcfa
