#pragma once

#include "mvgamma/errors.hpp"
#include "mvgamma/rng.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <exception>
#include <thread>
#include <vector>

namespace mvgamma {

/// Monte Carlo result. std_error is the sample standard deviation / sqrt(n).
struct MCEstimate {
  double value = 0.0;
  double std_error = 0.0;
  std::uint64_t n = 0;
  RngSeed seed{};
};

/// Welford running mean/variance with Chan's pairwise merge.
class RunningStats {
 public:
  void add(double v) {
    ++count_;
    const double delta = v - mean_;
    mean_ += delta / static_cast<double>(count_);
    m2_ += delta * (v - mean_);
  }

  void merge(const RunningStats& other) {
    if (other.count_ == 0) return;
    if (count_ == 0) {
      *this = other;
      return;
    }
    const double total = static_cast<double>(count_ + other.count_);
    const double delta = other.mean_ - mean_;
    mean_ += delta * static_cast<double>(other.count_) / total;
    m2_ += other.m2_ + delta * delta * static_cast<double>(count_) *
                           static_cast<double>(other.count_) / total;
    count_ += other.count_;
  }

  std::uint64_t count() const { return count_; }
  double mean() const { return mean_; }
  double sample_variance() const {
    return count_ > 1 ? m2_ / static_cast<double>(count_ - 1) : 0.0;
  }
  double std_error() const {
    return count_ > 0 ? std::sqrt(sample_variance() / static_cast<double>(count_)) : 0.0;
  }

  MCEstimate estimate(RngSeed seed) const { return {mean_, std_error(), count_, seed}; }

 private:
  std::uint64_t count_ = 0;
  double mean_ = 0.0;
  double m2_ = 0.0;
};

/// Draws per chunk. Each chunk owns RandomEngine(seed, chunk_index), so the
/// sequence of draws is fixed by (seed, n) and not by the worker count.
inline constexpr std::uint64_t kChunkSize = 4096;

inline std::uint64_t chunk_count(std::uint64_t n) { return (n + kChunkSize - 1) / kChunkSize; }

/// Runs body(chunk, begin, end) for every chunk of [0, n); chunk c is handled
/// by worker c % workers. Exceptions from workers are rethrown after join.
template <class Body>
void for_each_chunk(std::uint64_t n, unsigned workers, Body&& body) {
  const std::uint64_t chunks = chunk_count(n);
  require(chunks <= 0xFFFFFFFFull, "sample count too large for chunked streams");
  workers = std::max(1u, std::min<unsigned>(workers, static_cast<unsigned>(std::max<std::uint64_t>(chunks, 1))));

  auto run = [&](unsigned w) {
    for (std::uint64_t c = w; c < chunks; c += workers) {
      const std::uint64_t begin = c * kChunkSize;
      body(static_cast<std::uint32_t>(c), begin, std::min(n, begin + kChunkSize));
    }
  };
  if (workers == 1) {
    run(0);
    return;
  }
  std::vector<std::exception_ptr> errors(workers);
  {
    std::vector<std::jthread> threads;
    threads.reserve(workers);
    for (unsigned w = 0; w < workers; ++w)
      threads.emplace_back([&, w] {
        try {
          run(w);
        } catch (...) {
          errors[w] = std::current_exception();
        }
      });
  }
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
}

/// Mean and standard error of draw(engine) over n i.i.d. draws.
template <class Draw>
MCEstimate mc_mean(std::uint64_t n, RngSeed seed, unsigned workers, Draw&& draw) {
  require(n >= 1, "Monte Carlo requires n >= 1");
  std::vector<RunningStats> partial(chunk_count(n));
  for_each_chunk(n, workers, [&](std::uint32_t chunk, std::uint64_t begin, std::uint64_t end) {
    RandomEngine engine(seed, chunk);
    RunningStats stats;
    for (std::uint64_t i = begin; i < end; ++i) stats.add(draw(engine));
    partial[chunk] = stats;
  });
  RunningStats total;
  for (const auto& s : partial) total.merge(s);
  return total.estimate(seed);
}

}  // namespace mvgamma
