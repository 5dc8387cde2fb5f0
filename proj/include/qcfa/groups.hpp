#pragma once

// Finitely generated groups with decidable word problems, as a closed set of
// families. Each family provides an identity oracle, word length (geodesic in
// the generators), canonical forms for deduplication, and ball enumeration by
// breadth-first search over the Cayley graph.

#include <deque>
#include <map>
#include <memory>
#include <numeric>
#include <optional>
#include <sstream>

#include "qcfa/words.hpp"

namespace qcfa {

enum class GroupFamily {
  Trivial,
  CyclicFinite,
  FreeAbelian,
  AbelianMixed,
  Free,
  DirectProductOfFrees,
  FreeProductZWithZr,
  VirtualOvergroup,
};

inline const char* to_string(GroupFamily f) {
  switch (f) {
    case GroupFamily::Trivial: return "trivial";
    case GroupFamily::CyclicFinite: return "cyclic";
    case GroupFamily::FreeAbelian: return "free-abelian";
    case GroupFamily::AbelianMixed: return "abelian-mixed";
    case GroupFamily::Free: return "free";
    case GroupFamily::DirectProductOfFrees: return "direct-product-of-frees";
    case GroupFamily::FreeProductZWithZr: return "free-product-z-zr";
    default: return "virtual-overgroup";
  }
}

struct BallOptions {
  int bfs_radius = 10;          // search radius for BFS-backed length queries
  long element_cap = 2000000;   // abort enumeration beyond this many elements
};

struct GroupPresentation;

// Left-multiplication action of overgroup generators on coset representatives:
// sigma * g_j = g_{alpha(sigma, j)} * phi(beta_hat(sigma, j)) with beta_hat a
// word over the base group's generators. Rows are indexed by the flat symbol
// index (2 * generator + (sign < 0)); cosets are 0-based with coset 0 the
// subgroup itself.
struct CosetTable {
  int cosets = 0;
  int base_generator_count = 0;          // alphabet of the beta_hat words
  std::vector<std::string> labels;       // the overgroup's own generators
  std::vector<std::vector<int>> alpha;   // [overgroup symbol][coset]
  std::vector<std::vector<Word>> beta_hat;  // [overgroup symbol][coset]
  std::vector<Word> transversal;     // overgroup word for each representative
  std::vector<Word> base_embedding;  // overgroup word for each base generator

  int total_generator_count() const { return static_cast<int>(labels.size()); }
  int symbol_count() const { return 2 * total_generator_count(); }

  static int flat_symbol(const GeneratorSymbol& s) {
    return 2 * s.index + (s.sign < 0 ? 1 : 0);
  }
  static GeneratorSymbol unflat_symbol(int f) {
    return {f / 2, (f % 2) ? -1 : 1};
  }

  // rewrite a base-group word as a word over the overgroup's generators
  Word embed_base_word(const Word& h) const {
    Word out;
    for (const auto& s : h) {
      const Word& e = base_embedding.at(static_cast<size_t>(s.index));
      Word piece = (s.sign > 0) ? e : inverse_word(e);
      out.insert(out.end(), piece.begin(), piece.end());
    }
    return out;
  }

  // coset reached from coset 0 after reading w right to left
  int coset_of(const Word& w) const {
    int c = 0;
    for (auto it = w.rbegin(); it != w.rend(); ++it)
      c = alpha[static_cast<size_t>(flat_symbol(*it))][static_cast<size_t>(c)];
    return c;
  }
};

struct BallEntry {
  Word word;       // BFS geodesic representative
  int length = 0;  // = word length of the element
  int parent = -1; // index of the entry this was discovered from
  GeneratorSymbol edge;  // word = ball[parent].word + edge
};

struct Ball {
  std::vector<BallEntry> entries;  // entries[0] is the identity
};

struct GroupPresentation {
  GroupFamily family = GroupFamily::Trivial;
  long modulus = 0;                 // CyclicFinite
  int rank = 0;                     // FreeAbelian / Free / Z^r part
  std::vector<long> moduli;         // AbelianMixed torsion orders
  std::vector<int> factor_ranks;    // DirectProductOfFrees
  std::shared_ptr<GroupPresentation> base;  // VirtualOvergroup
  std::shared_ptr<CosetTable> table;        // VirtualOvergroup
  std::vector<std::string> labels;

  // ---- constructors ----

  static GroupPresentation trivial() {
    GroupPresentation p;
    p.family = GroupFamily::Trivial;
    return p;
  }

  static GroupPresentation cyclic(long m) {
    if (m < 2) throw std::invalid_argument("cyclic modulus must be >= 2");
    GroupPresentation p;
    p.family = GroupFamily::CyclicFinite;
    p.modulus = m;
    p.labels = default_labels(1);
    return p;
  }

  static GroupPresentation free_abelian(int r) {
    if (r < 1) throw std::invalid_argument("rank must be >= 1");
    GroupPresentation p;
    p.family = GroupFamily::FreeAbelian;
    p.rank = r;
    p.labels = default_labels(r);
    return p;
  }

  static GroupPresentation abelian_mixed(int r, std::vector<long> moduli) {
    if (r < 0) throw std::invalid_argument("free rank must be >= 0");
    if (moduli.empty() && r == 0)
      throw std::invalid_argument("abelian-mixed needs a free or torsion part");
    for (size_t i = 0; i < moduli.size(); ++i) {
      if (moduli[i] < 2) throw std::invalid_argument("torsion orders must be >= 2");
      if (i && moduli[i] % moduli[i - 1] != 0)
        throw std::invalid_argument("torsion orders must form a divisor chain");
    }
    GroupPresentation p;
    p.family = GroupFamily::AbelianMixed;
    p.rank = r;
    p.moduli = std::move(moduli);
    p.labels = default_labels(r + static_cast<int>(p.moduli.size()));
    return p;
  }

  static GroupPresentation free_group(int r) {
    if (r < 1) throw std::invalid_argument("rank must be >= 1");
    GroupPresentation p;
    p.family = GroupFamily::Free;
    p.rank = r;
    p.labels = default_labels(r);
    return p;
  }

  static GroupPresentation direct_product_of_frees(std::vector<int> ranks) {
    if (ranks.empty()) throw std::invalid_argument("need at least one factor");
    for (int r : ranks)
      if (r < 1) throw std::invalid_argument("factor ranks must be >= 1");
    GroupPresentation p;
    p.family = GroupFamily::DirectProductOfFrees;
    p.factor_ranks = std::move(ranks);
    int total = std::accumulate(p.factor_ranks.begin(), p.factor_ranks.end(), 0);
    p.labels = default_labels(total);
    return p;
  }

  // Z * Z^r, generator 0 is the lone Z ("y"), generators 1..r span Z^r
  static GroupPresentation free_product_z_zr(int r) {
    if (r < 1) throw std::invalid_argument("rank must be >= 1");
    GroupPresentation p;
    p.family = GroupFamily::FreeProductZWithZr;
    p.rank = r;
    p.labels.push_back("y");
    for (int i = 1; i <= r; ++i) p.labels.push_back("x" + std::to_string(i));
    return p;
  }

  static GroupPresentation virtual_overgroup(GroupPresentation base_group,
                                             CosetTable tbl) {
    GroupPresentation p;
    p.family = GroupFamily::VirtualOvergroup;
    p.base = std::make_shared<GroupPresentation>(std::move(base_group));
    if (tbl.base_generator_count != p.base->generator_count())
      throw std::invalid_argument("coset table does not match the base group");
    p.labels = tbl.labels;
    p.table = std::make_shared<CosetTable>(std::move(tbl));
    p.validate_table();
    return p;
  }

  // ---- shape ----

  int generator_count() const {
    switch (family) {
      case GroupFamily::Trivial: return 0;
      case GroupFamily::CyclicFinite: return 1;
      case GroupFamily::FreeAbelian: return rank;
      case GroupFamily::AbelianMixed:
        return rank + static_cast<int>(moduli.size());
      case GroupFamily::Free: return rank;
      case GroupFamily::DirectProductOfFrees:
        return std::accumulate(factor_ranks.begin(), factor_ranks.end(), 0);
      case GroupFamily::FreeProductZWithZr: return 1 + rank;
      case GroupFamily::VirtualOvergroup:
        return table->total_generator_count();
    }
    return 0;
  }

  static std::vector<std::string> default_labels(int n) {
    std::vector<std::string> l;
    for (int i = 0; i < n; ++i) {
      if (n <= 26) {
        l.push_back(std::string(1, static_cast<char>('a' + i)));
      } else {
        l.push_back("g" + std::to_string(i + 1));
      }
    }
    return l;
  }

  // ---- oracles ----

  bool is_identity(const Word& w) const {
    check_symbols(w, generator_count());
    switch (family) {
      case GroupFamily::Trivial:
        return true;
      case GroupFamily::CyclicFinite: {
        long h = net_exponent(w, 0) % modulus;
        return h == 0;
      }
      case GroupFamily::FreeAbelian: {
        for (int i = 0; i < rank; ++i)
          if (net_exponent(w, i) != 0) return false;
        return true;
      }
      case GroupFamily::AbelianMixed: {
        for (int i = 0; i < rank; ++i)
          if (net_exponent(w, i) != 0) return false;
        for (size_t t = 0; t < moduli.size(); ++t)
          if (net_exponent(w, rank + static_cast<int>(t)) % moduli[t] != 0)
            return false;
        return true;
      }
      case GroupFamily::Free:
        return free_reduce(w).empty();
      case GroupFamily::DirectProductOfFrees: {
        for (const auto& part : split_by_factor(w))
          if (!free_reduce(part).empty()) return false;
        return true;
      }
      case GroupFamily::FreeProductZWithZr:
        return syllables(w).empty();
      case GroupFamily::VirtualOvergroup: {
        auto [coset, base_word] = rewrite_to_base(w);
        return coset == 0 && base->is_identity(base_word);
      }
    }
    return false;
  }

  int word_length(const Word& w, const BallOptions& opts = {}) const {
    check_symbols(w, generator_count());
    switch (family) {
      case GroupFamily::Trivial:
        return 0;
      case GroupFamily::CyclicFinite: {
        long h = ((net_exponent(w, 0) % modulus) + modulus) % modulus;
        return static_cast<int>(std::min(h, modulus - h));
      }
      case GroupFamily::FreeAbelian: {
        long s = 0;
        for (int i = 0; i < rank; ++i) s += std::abs(net_exponent(w, i));
        return static_cast<int>(s);
      }
      case GroupFamily::AbelianMixed: {
        long s = 0;
        for (int i = 0; i < rank; ++i) s += std::abs(net_exponent(w, i));
        for (size_t t = 0; t < moduli.size(); ++t) {
          long m = moduli[t];
          long h = ((net_exponent(w, rank + static_cast<int>(t)) % m) + m) % m;
          s += std::min(h, m - h);
        }
        return static_cast<int>(s);
      }
      case GroupFamily::Free:
        return static_cast<int>(free_reduce(w).size());
      case GroupFamily::DirectProductOfFrees: {
        size_t s = 0;
        for (const auto& part : split_by_factor(w)) s += free_reduce(part).size();
        return static_cast<int>(s);
      }
      case GroupFamily::FreeProductZWithZr: {
        long s = 0;
        for (const auto& syl : syllables(w)) {
          if (syl.is_z) {
            s += std::abs(syl.z_exp);
          } else {
            for (long v : syl.vec) s += std::abs(v);
          }
        }
        return static_cast<int>(s);
      }
      case GroupFamily::VirtualOvergroup:
        return bfs_length(w, opts);
    }
    return 0;
  }

  // canonical form as a string key; equal keys iff equal group elements
  std::string canonical_key(const Word& w) const {
    check_symbols(w, generator_count());
    std::ostringstream os;
    switch (family) {
      case GroupFamily::Trivial:
        break;
      case GroupFamily::CyclicFinite:
        os << (((net_exponent(w, 0) % modulus) + modulus) % modulus);
        break;
      case GroupFamily::FreeAbelian:
        for (int i = 0; i < rank; ++i) os << net_exponent(w, i) << ",";
        break;
      case GroupFamily::AbelianMixed:
        for (int i = 0; i < rank; ++i) os << net_exponent(w, i) << ",";
        for (size_t t = 0; t < moduli.size(); ++t)
          os << (((net_exponent(w, rank + static_cast<int>(t)) % moduli[t]) +
                  moduli[t]) % moduli[t])
             << ",";
        break;
      case GroupFamily::Free:
        for (const auto& s : free_reduce(w)) os << s.sign * (s.index + 1) << ",";
        break;
      case GroupFamily::DirectProductOfFrees:
        for (const auto& part : split_by_factor(w)) {
          for (const auto& s : free_reduce(part))
            os << s.sign * (s.index + 1) << ",";
          os << ";";
        }
        break;
      case GroupFamily::FreeProductZWithZr:
        for (const auto& syl : syllables(w)) {
          if (syl.is_z) {
            os << "y" << syl.z_exp << ";";
          } else {
            os << "x";
            for (long v : syl.vec) os << v << ",";
            os << ";";
          }
        }
        break;
      case GroupFamily::VirtualOvergroup: {
        auto [coset, base_word] = rewrite_to_base(w);
        os << coset << "|" << base->canonical_key(base_word);
        break;
      }
    }
    return os.str();
  }

  // defining relators (those the unitary representations must kill)
  std::vector<Word> relators() const {
    std::vector<Word> rel;
    auto commutator = [](int i, int j) -> Word {
      return {{i, 1}, {j, 1}, {i, -1}, {j, -1}};
    };
    switch (family) {
      case GroupFamily::Trivial:
      case GroupFamily::Free:
        break;
      case GroupFamily::CyclicFinite: {
        Word p;
        for (long k = 0; k < modulus; ++k) p.push_back({0, 1});
        rel.push_back(p);
        break;
      }
      case GroupFamily::FreeAbelian:
        for (int i = 0; i < rank; ++i)
          for (int j = i + 1; j < rank; ++j) rel.push_back(commutator(i, j));
        break;
      case GroupFamily::AbelianMixed: {
        int n = generator_count();
        for (int i = 0; i < n; ++i)
          for (int j = i + 1; j < n; ++j) rel.push_back(commutator(i, j));
        for (size_t t = 0; t < moduli.size(); ++t) {
          Word p;
          for (long k = 0; k < moduli[t]; ++k)
            p.push_back({rank + static_cast<int>(t), 1});
          rel.push_back(p);
        }
        break;
      }
      case GroupFamily::DirectProductOfFrees: {
        // generators in distinct factors commute
        std::vector<int> factor = factor_of_generators();
        int n = generator_count();
        for (int i = 0; i < n; ++i)
          for (int j = i + 1; j < n; ++j)
            if (factor[i] != factor[j]) rel.push_back(commutator(i, j));
        break;
      }
      case GroupFamily::FreeProductZWithZr:
        for (int i = 1; i <= rank; ++i)
          for (int j = i + 1; j <= rank; ++j) rel.push_back(commutator(i, j));
        break;
      case GroupFamily::VirtualOvergroup: {
        for (const Word& r : base->relators())
          rel.push_back(table->embed_base_word(r));
        // sigma g_j = g_{alpha} beta_hat, everything embedded upstairs
        for (int f = 0; f < table->symbol_count(); ++f) {
          GeneratorSymbol sigma = CosetTable::unflat_symbol(f);
          for (int j = 0; j < table->cosets; ++j) {
            Word lhs;
            lhs.push_back(sigma);
            lhs = concat(lhs, table->transversal[j]);
            Word rhs = concat(table->transversal[table->alpha[f][j]],
                              table->embed_base_word(table->beta_hat[f][j]));
            rel.push_back(concat(lhs, inverse_word(rhs)));
          }
        }
        break;
      }
    }
    return rel;
  }

  // ---- overgroup rewriting ----

  // Returns the coset index of phi(w) and the base-group word h with
  // phi(w) = g_coset * phi_base(h), by scanning w right to left through the
  // coset table (the same computation the transformed machines perform).
  std::pair<int, Word> rewrite_to_base(const Word& w) const {
    if (family != GroupFamily::VirtualOvergroup)
      throw std::logic_error("rewrite_to_base needs a virtual overgroup");
    int coset = 0;
    std::vector<const Word*> pieces;
    pieces.reserve(w.size());
    for (auto it = w.rbegin(); it != w.rend(); ++it) {
      int f = CosetTable::flat_symbol(*it);
      pieces.push_back(&table->beta_hat[f][coset]);
      coset = table->alpha[f][coset];
    }
    Word h;
    for (auto it = pieces.rbegin(); it != pieces.rend(); ++it)
      h.insert(h.end(), (*it)->begin(), (*it)->end());
    return {coset, h};
  }

  // ---- ball enumeration ----

  // Breadth-first search outward from the identity; one canonical
  // representative per element, ordered by (length, discovery), which is
  // lexicographic within each length for the symbol order
  // (index ascending, positive before negative).
  Ball enumerate_ball(int radius, const BallOptions& opts = {}) const {
    if (radius < 0) throw std::invalid_argument("radius must be >= 0");
    Ball ball;
    std::map<std::string, int> seen;
    ball.entries.push_back({Word{}, 0, -1, GeneratorSymbol{}});
    seen[canonical_key(Word{})] = 0;
    size_t head = 0;
    int n = generator_count();
    while (head < ball.entries.size()) {
      // copy, the vector may reallocate while we append
      BallEntry cur = ball.entries[head];
      if (cur.length == radius) break;  // queue is in length order
      for (int i = 0; i < n; ++i) {
        for (int sgn : {1, -1}) {
          GeneratorSymbol s{i, sgn};
          Word next = cur.word;
          next.push_back(s);
          std::string key = canonical_key(next);
          if (seen.count(key)) continue;
          if (static_cast<long>(ball.entries.size()) >= opts.element_cap)
            throw RadiusExceeded("ball exceeds the element cap");
          seen[key] = static_cast<int>(ball.entries.size());
          ball.entries.push_back(
              {std::move(next), cur.length + 1, static_cast<int>(head), s});
        }
      }
      ++head;
    }
    return ball;
  }

 private:
  long net_exponent(const Word& w, int gen) const {
    long h = 0;
    for (const auto& s : w)
      if (s.index == gen) h += s.sign;
    return h;
  }

  std::vector<int> factor_of_generators() const {
    std::vector<int> factor;
    for (size_t f = 0; f < factor_ranks.size(); ++f)
      for (int k = 0; k < factor_ranks[f]; ++k)
        factor.push_back(static_cast<int>(f));
    return factor;
  }

  std::vector<Word> split_by_factor(const Word& w) const {
    std::vector<int> factor = factor_of_generators();
    std::vector<Word> parts(factor_ranks.size());
    std::vector<int> offset(factor_ranks.size(), 0);
    int off = 0;
    for (size_t f = 0; f < factor_ranks.size(); ++f) {
      offset[f] = off;
      off += factor_ranks[f];
    }
    for (const auto& s : w) {
      int f = factor[s.index];
      parts[f].push_back({s.index - offset[f], s.sign});
    }
    return parts;
  }

  struct Syllable {
    bool is_z = false;       // true: power of y; false: Z^r vector
    long z_exp = 0;
    std::vector<long> vec;   // length rank

    bool trivial() const {
      if (is_z) return z_exp == 0;
      return std::all_of(vec.begin(), vec.end(), [](long v) { return v == 0; });
    }
  };

  // free-product normal form: alternating nontrivial syllables
  std::vector<Syllable> syllables(const Word& w) const {
    std::vector<Syllable> stack;
    for (const auto& s : w) {
      bool z = (s.index == 0);
      if (stack.empty() || stack.back().is_z != z) {
        Syllable syl;
        syl.is_z = z;
        if (!z) syl.vec.assign(rank, 0);
        stack.push_back(std::move(syl));
      }
      Syllable& top = stack.back();
      if (z)
        top.z_exp += s.sign;
      else
        top.vec[s.index - 1] += s.sign;
      if (top.trivial()) stack.pop_back();
    }
    return stack;
  }

  int bfs_length(const Word& w, const BallOptions& opts) const {
    std::string target = canonical_key(w);
    if (target == canonical_key(Word{})) return 0;
    std::map<std::string, int> dist;
    std::deque<std::pair<Word, int>> queue;
    dist[canonical_key(Word{})] = 0;
    queue.emplace_back(Word{}, 0);
    int n = generator_count();
    long visited = 1;
    while (!queue.empty()) {
      auto [cur, d] = std::move(queue.front());
      queue.pop_front();
      if (d >= opts.bfs_radius) continue;
      for (int i = 0; i < n; ++i) {
        for (int sgn : {1, -1}) {
          Word next = cur;
          next.push_back({i, sgn});
          std::string key = canonical_key(next);
          if (dist.count(key)) continue;
          if (key == target) return d + 1;
          if (++visited > opts.element_cap)
            throw RadiusExceeded("BFS exceeded the element cap");
          dist[key] = d + 1;
          queue.emplace_back(std::move(next), d + 1);
        }
      }
    }
    throw RadiusExceeded("element lies outside the BFS radius " +
                         std::to_string(opts.bfs_radius));
  }

  void validate_table() const {
    const CosetTable& t = *table;
    if (t.cosets < 1) throw std::invalid_argument("coset table needs cosets");
    if (t.labels.empty())
      throw std::invalid_argument("coset table needs overgroup generators");
    if (t.alpha.size() != static_cast<size_t>(t.symbol_count()) ||
        t.beta_hat.size() != static_cast<size_t>(t.symbol_count()))
      throw std::invalid_argument("coset table rows do not match the alphabet");
    if (t.transversal.size() != static_cast<size_t>(t.cosets))
      throw std::invalid_argument("one transversal word per coset required");
    if (!t.transversal[0].empty())
      throw std::invalid_argument("coset 0 must use the trivial representative");
    for (int j = 0; j < t.cosets; ++j) {
      check_symbols(t.transversal[j], t.total_generator_count());
      if (t.coset_of(t.transversal[j]) != j)
        throw std::invalid_argument("transversal word lands in the wrong coset");
    }
    if (t.base_embedding.size() != static_cast<size_t>(t.base_generator_count))
      throw std::invalid_argument("one embedding word per base generator required");
    for (int i = 0; i < t.base_generator_count; ++i) {
      check_symbols(t.base_embedding[i], t.total_generator_count());
      if (t.coset_of(t.base_embedding[i]) != 0)
        throw std::invalid_argument("embedded base generator leaves the subgroup");
      // pushing the embedding word back down must recover the generator
      auto [c, h] = rewrite_to_base(t.base_embedding[i]);
      Word gi{GeneratorSymbol{i, 1}};
      if (c != 0 || !base->is_identity(concat(h, inverse_word(gi))))
        throw std::invalid_argument("base embedding does not match the table");
    }
    for (int f = 0; f < t.symbol_count(); ++f) {
      if (t.alpha[f].size() != static_cast<size_t>(t.cosets) ||
          t.beta_hat[f].size() != static_cast<size_t>(t.cosets))
        throw std::invalid_argument("coset table columns do not match cosets");
      std::vector<int> seen(t.cosets, 0);
      for (int j = 0; j < t.cosets; ++j) {
        int a = t.alpha[f][j];
        if (a < 0 || a >= t.cosets)
          throw std::invalid_argument("alpha entry out of range");
        if (seen[a]++)
          throw std::invalid_argument("alpha row is not a permutation");
        check_symbols(t.beta_hat[f][j], t.base_generator_count);
      }
    }
    // inverse-symbol consistency: sigma^-1 (sigma g_j) = g_j, which forces
    // alpha(sigma^-1, alpha(sigma, j)) = j and the beta words to cancel in H
    for (int f = 0; f < t.symbol_count(); ++f) {
      int finv = f ^ 1;
      for (int j = 0; j < t.cosets; ++j) {
        int a = t.alpha[f][j];
        if (t.alpha[finv][a] != j)
          throw std::invalid_argument("alpha is inconsistent on inverses");
        Word prod = concat(t.beta_hat[finv][a], t.beta_hat[f][j]);
        if (!base->is_identity(prod))
          throw std::invalid_argument("beta words are inconsistent on inverses");
      }
    }
  }
};

// ---- built-in coset tables ----

// H = G embedded as itself: one coset, alpha trivial, beta_hat(sigma) = sigma
inline CosetTable identity_coset_table(const GroupPresentation& base) {
  CosetTable t;
  t.cosets = 1;
  t.base_generator_count = base.generator_count();
  t.labels = base.labels;
  t.transversal = {Word{}};
  t.alpha.assign(t.symbol_count(), std::vector<int>(1, 0));
  t.beta_hat.assign(t.symbol_count(), std::vector<Word>(1));
  for (int f = 0; f < t.symbol_count(); ++f)
    t.beta_hat[f][0] = {CosetTable::unflat_symbol(f)};
  for (int i = 0; i < t.base_generator_count; ++i)
    t.base_embedding.push_back({GeneratorSymbol{i, 1}});
  return t;
}

// 2Z inside Z, index 2: the overgroup is generated by "a" alone while the
// base machine's alphabet is "h" = a^2
inline CosetTable index_two_z_table() {
  CosetTable t;
  t.cosets = 2;
  t.base_generator_count = 1;
  t.labels = {"a"};
  const GeneratorSymbol a{0, 1}, h{0, 1}, hinv{0, -1};
  t.transversal = {Word{}, Word{a}};
  t.base_embedding = {Word{a, a}};
  t.alpha.assign(2, std::vector<int>(2, 0));
  t.beta_hat.assign(2, std::vector<Word>(2));
  // a swaps cosets; a * a = h
  t.alpha[0] = {1, 0};
  t.beta_hat[0] = {Word{}, Word{h}};
  t.alpha[1] = {1, 0};
  t.beta_hat[1] = {Word{hinv}, Word{}};
  return t;
}

// Z inside the infinite dihedral group, index 2: base generator "t" (the
// translation), coset representative "s" (the reflection); t s = s t^-1
inline CosetTable dihedral_over_z_table() {
  CosetTable t;
  t.cosets = 2;
  t.base_generator_count = 1;
  t.labels = {"t", "s"};
  const GeneratorSymbol tr{0, 1}, trinv{0, -1};
  t.transversal = {Word{}, Word{GeneratorSymbol{1, 1}}};
  t.base_embedding = {Word{tr}};
  t.alpha.assign(4, std::vector<int>(2, 0));
  t.beta_hat.assign(4, std::vector<Word>(2));
  t.alpha[0] = {0, 1};
  t.beta_hat[0] = {Word{tr}, Word{trinv}};
  t.alpha[1] = {0, 1};
  t.beta_hat[1] = {Word{trinv}, Word{tr}};
  // s swaps cosets, s * s = 1
  t.alpha[2] = {1, 0};
  t.beta_hat[2] = {Word{}, Word{}};
  t.alpha[3] = {1, 0};
  t.beta_hat[3] = {Word{}, Word{}};
  return t;
}

}  // namespace qcfa
