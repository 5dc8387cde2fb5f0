#pragma once

// Unitary (optionally projective) representations given by generator images,
// plus the standard operations: evaluation on words, characters, direct sum,
// padding, restriction along a homomorphism, and induction from a finite-index
// subgroup through a coset table.

#include "qcfa/groups.hpp"
#include "qcfa/matrix.hpp"

namespace qcfa {

struct UnitaryRep {
  GroupPresentation group;
  int dim = 0;
  std::vector<UnitaryMatrix> images;  // one per generator; inverses via dagger
  bool projective = false;
  // optional, per generator: matrices whose ordered product equals the image
  std::vector<std::vector<UnitaryMatrix>> factorizations;

  AmplitudeClass amplitude_class() const {
    AmplitudeClass c = AmplitudeClass::AlgebraicExact;
    for (const auto& m : images) c = join(c, m.amplitude_class());
    return c;
  }

  static UnitaryRep make(GroupPresentation g, std::vector<UnitaryMatrix> images,
                         bool projective = false, int dim_if_empty = 1) {
    UnitaryRep r;
    r.group = std::move(g);
    r.images = std::move(images);
    r.projective = projective;
    if (static_cast<int>(r.images.size()) != r.group.generator_count())
      throw std::invalid_argument("one image per generator required");
    r.dim = r.images.empty() ? dim_if_empty : r.images[0].dim();
    for (const auto& m : r.images)
      if (m.dim() != r.dim) throw std::invalid_argument("image dims differ");
    return r;
  }

  const UnitaryMatrix& image(int generator) const { return images.at(generator); }
};

inline UnitaryMatrix eval_rep(const UnitaryRep& rep, const Word& w) {
  check_symbols(w, rep.group.generator_count());
  UnitaryMatrix m = UnitaryMatrix::identity(rep.dim);
  for (const auto& s : w) {
    const UnitaryMatrix& img = rep.images[s.index];
    m = (s.sign > 0) ? m * img : m * img.dagger();
  }
  return m;
}

inline Scalar character(const UnitaryRep& rep, const Word& w) {
  return eval_rep(rep, w).trace();
}

// |tr|^2 stays in the exact field when the representation does
inline Scalar character_magnitude_sq(const UnitaryRep& rep, const Word& w) {
  return character(rep, w).norm_sq();
}

inline BigFloat character_magnitude(const UnitaryRep& rep, const Word& w) {
  return sqrt(character_magnitude_sq(rep, w).real_big());
}

// true iff the image is a scalar multiple of I, i.e. |chi| = d within eps
inline bool quasikernel_test(const UnitaryRep& rep, const Word& w) {
  Scalar chi_sq = character_magnitude_sq(rep, w);
  Scalar d_sq = Scalar::from_int(static_cast<long>(rep.dim) * rep.dim);
  if (chi_sq.backend() == Backend::Exact && d_sq.backend() == Backend::Exact)
    return chi_sq.same_as(d_sq);
  BigFloat diff = abs(character_magnitude(rep, w) - rep.dim);
  return diff <= eps_num();
}

// relator images must be I (projective representations: a unimodular scalar
// times I); used as the homomorphism contract check
inline bool matrix_is_scalar_identity(const UnitaryMatrix& m) {
  const Scalar& c = m.at(0, 0);
  for (int u = 0; u < m.dim(); ++u) {
    for (int v = 0; v < m.dim(); ++v) {
      const Scalar& want = (u == v) ? c : Scalar::zero();
      if (!m.at(u, v).same_as(want)) return false;
    }
  }
  return true;
}

inline bool rep_kills_relators(const UnitaryRep& rep) {
  for (const auto& rel : rep.group.relators()) {
    UnitaryMatrix m = eval_rep(rep, rel);
    if (rep.projective) {
      if (!matrix_is_scalar_identity(m)) return false;
    } else {
      if (!m.same_as(UnitaryMatrix::identity(rep.dim))) return false;
    }
  }
  return true;
}

inline void validate_rep(const UnitaryRep& rep) {
  if (!rep_kills_relators(rep))
    throw std::invalid_argument("generator images do not kill the relators");
  for (size_t i = 0; i < rep.factorizations.size(); ++i) {
    if (rep.factorizations[i].empty()) continue;
    UnitaryMatrix prod = UnitaryMatrix::identity(rep.dim);
    for (const auto& y : rep.factorizations[i]) prod = prod * y;
    if (!prod.same_as(rep.images.at(i)))
      throw std::invalid_argument("factorization does not multiply to the image");
  }
}

// ---- combinators ----

inline UnitaryRep direct_sum_reps(const UnitaryRep& a, const UnitaryRep& b) {
  if (a.group.generator_count() != b.group.generator_count())
    throw std::invalid_argument("direct sum needs a common group");
  std::vector<UnitaryMatrix> images;
  for (int i = 0; i < a.group.generator_count(); ++i)
    images.push_back(a.images[i].direct_sum(b.images[i]));
  UnitaryRep r = UnitaryRep::make(a.group, std::move(images),
                                  a.projective || b.projective);
  return r;
}

// pad with the trivial representation up to dimension d2
inline UnitaryRep pad_rep(const UnitaryRep& rep, int d2) {
  if (d2 <= rep.dim) throw std::invalid_argument("pad target must exceed dim");
  std::vector<UnitaryMatrix> images;
  for (const auto& m : rep.images)
    images.push_back(m.direct_sum(UnitaryMatrix::identity(d2 - rep.dim)));
  return UnitaryRep::make(rep.group, std::move(images), rep.projective);
}

// restriction along the homomorphism sending generator i of the new group to
// embedding[i], a word over rep.group's alphabet
inline UnitaryRep restrict_rep(const UnitaryRep& rep, GroupPresentation subgroup,
                               const std::vector<Word>& embedding) {
  if (static_cast<int>(embedding.size()) != subgroup.generator_count())
    throw std::invalid_argument("one embedding word per subgroup generator");
  std::vector<UnitaryMatrix> images;
  for (const auto& w : embedding) images.push_back(eval_rep(rep, w));
  return UnitaryRep::make(std::move(subgroup), std::move(images),
                          rep.projective);
}

// induced representation: block-column j has its only nonzero block in
// block-row alpha(sigma, j), equal to pi(beta_hat(sigma, j))
inline UnitaryRep induce_rep(const UnitaryRep& pi, const CosetTable& table) {
  GroupPresentation over =
      GroupPresentation::virtual_overgroup(pi.group, table);
  int r = table.cosets;
  int m = pi.dim;
  std::vector<UnitaryMatrix> images;
  for (int gen = 0; gen < over.generator_count(); ++gen) {
    int f = CosetTable::flat_symbol({gen, 1});
    std::vector<Scalar> entries(static_cast<size_t>(m * r) * (m * r),
                                Scalar::zero());
    for (int j = 0; j < r; ++j) {
      int row_block = table.alpha[f][j];
      UnitaryMatrix blk = eval_rep(pi, table.beta_hat[f][j]);
      for (int u = 0; u < m; ++u)
        for (int v = 0; v < m; ++v)
          entries[(row_block * m + u) * static_cast<size_t>(m * r) +
                  (j * m + v)] = blk.at(u, v);
    }
    images.push_back(
        UnitaryMatrix::make(m * r, std::move(entries), pi.amplitude_class()));
  }
  return UnitaryRep::make(std::move(over), std::move(images), pi.projective);
}

}  // namespace qcfa
