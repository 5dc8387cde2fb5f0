#pragma once

#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

namespace qcfa {

// Thrown when a distinguishing-family certification scan finds a violating
// element; carries the witness description so callers can report it.
struct CertificationError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Thrown when closed-form analysis is requested for a machine that carries no
// round structure (hand-written delta tables, loaded foreign machines).
struct AnalysisUnavailable : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Thrown by BFS-backed word-length/ball queries when the requested element
// lies outside the configured search radius or the element cap is hit.
struct RadiusExceeded : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// SplitMix64; used to derive one independent stream per Monte Carlo trial so
// results do not depend on the execution schedule.
struct SplitMix64 {
  std::uint64_t state;

  explicit SplitMix64(std::uint64_t s) : state(s) {}

  std::uint64_t next() {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ull);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
  }

  // uniform in [0, 1), 53 bits
  double next_double() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }
};

inline std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t index) {
  SplitMix64 g(seed);
  std::uint64_t a = g.next();
  SplitMix64 h(a ^ (index * 0xd1342543de82ef95ull + 0x2545f4914f6cdd1dull));
  return h.next();
}

// Deterministic parallel loop: the work is split by index, results must be
// written to per-index slots by fn. init runs once in every worker thread
// (used to propagate the numeric precision into workers).
inline void parallel_for(std::size_t n, unsigned threads,
                         const std::function<void()>& init,
                         const std::function<void(std::size_t)>& fn) {
  if (threads <= 1 || n < 2) {
    if (init) init();
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  unsigned workers = std::min<std::size_t>(threads, n);
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (unsigned w = 0; w < workers; ++w) {
    pool.emplace_back([&, w]() {
      if (init) init();
      for (std::size_t i = w; i < n; i += workers) fn(i);
    });
  }
  for (auto& t : pool) t.join();
}

}  // namespace qcfa
