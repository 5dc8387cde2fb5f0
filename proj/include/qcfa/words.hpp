#pragma once

// Words over a generating set: sequences of (generator index, sign).
// Serialized form is the signed integer +-(index+1); command-line form is
// comma-separated signed generator names like "a,-a,b".

#include <algorithm>
#include <cstdlib>
#include <string>
#include <vector>

#include "qcfa/common.hpp"

namespace qcfa {

struct GeneratorSymbol {
  int index = 0;
  int sign = 1;  // +1 or -1

  bool operator==(const GeneratorSymbol& o) const {
    return index == o.index && sign == o.sign;
  }
  GeneratorSymbol inverse() const { return {index, -sign}; }
};

using Word = std::vector<GeneratorSymbol>;

inline Word inverse_word(const Word& w) {
  Word r;
  r.reserve(w.size());
  for (auto it = w.rbegin(); it != w.rend(); ++it) r.push_back(it->inverse());
  return r;
}

inline Word concat(const Word& a, const Word& b) {
  Word r = a;
  r.insert(r.end(), b.begin(), b.end());
  return r;
}

// cancel adjacent inverse pairs until none remain
inline Word free_reduce(const Word& w) {
  Word out;
  out.reserve(w.size());
  for (const auto& s : w) {
    if (!out.empty() && out.back().index == s.index &&
        out.back().sign == -s.sign) {
      out.pop_back();
    } else {
      out.push_back(s);
    }
  }
  return out;
}

inline void check_symbols(const Word& w, int generator_count) {
  for (const auto& s : w) {
    if (s.index < 0 || s.index >= generator_count)
      throw std::invalid_argument("symbol index out of range: " +
                                  std::to_string(s.index));
    if (s.sign != 1 && s.sign != -1)
      throw std::invalid_argument("symbol sign must be +1 or -1");
  }
}

// signed-integer serialization: +-(index+1)
inline std::vector<int> word_to_ints(const Word& w) {
  std::vector<int> v;
  v.reserve(w.size());
  for (const auto& s : w) v.push_back(s.sign * (s.index + 1));
  return v;
}

inline Word word_from_ints(const std::vector<int>& v) {
  Word w;
  w.reserve(v.size());
  for (int x : v) {
    if (x == 0) throw std::invalid_argument("word entries must be nonzero");
    w.push_back({std::abs(x) - 1, x > 0 ? 1 : -1});
  }
  return w;
}

// command-line form: "a,-a,b" against a list of generator labels
inline Word parse_word(const std::string& text,
                       const std::vector<std::string>& labels) {
  Word w;
  if (text.empty()) return w;
  size_t pos = 0;
  while (pos <= text.size()) {
    size_t comma = text.find(',', pos);
    std::string tok = text.substr(
        pos, comma == std::string::npos ? std::string::npos : comma - pos);
    // trim spaces
    size_t b = tok.find_first_not_of(" \t");
    size_t e = tok.find_last_not_of(" \t");
    if (b == std::string::npos)
      throw std::invalid_argument("empty token in word");
    tok = tok.substr(b, e - b + 1);
    int sign = 1;
    if (tok[0] == '-') {
      sign = -1;
      tok = tok.substr(1);
    }
    auto it = std::find(labels.begin(), labels.end(), tok);
    if (it == labels.end())
      throw std::invalid_argument("unknown generator: " + tok);
    w.push_back({static_cast<int>(it - labels.begin()), sign});
    if (comma == std::string::npos) break;
    pos = comma + 1;
  }
  return w;
}

inline std::string print_word(const Word& w,
                              const std::vector<std::string>& labels) {
  std::string out;
  for (size_t i = 0; i < w.size(); ++i) {
    if (i) out += ",";
    if (w[i].sign < 0) out += "-";
    out += labels.at(w[i].index);
  }
  return out;
}

}  // namespace qcfa
