/*
 * Copyright 2026 The swapsim Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 * http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#ifndef SWAPSIM_CORE_HPP
#define SWAPSIM_CORE_HPP

#include <cmath>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <string>

namespace swapsim {

// Simulated time. Integer nanoseconds so that sub-microsecond cost
// constants (page copy, request issue) stay exact; all external
// interfaces (trace, CSV, config) speak microseconds.
using SimTime = std::int64_t;

constexpr SimTime kNsPerUs = 1000;

constexpr SimTime nanoseconds(std::int64_t v) { return v; }
constexpr SimTime microseconds(std::int64_t v) { return v * 1000; }
constexpr SimTime milliseconds(std::int64_t v) { return v * 1000 * 1000; }
constexpr SimTime seconds(std::int64_t v) { return v * 1000 * 1000 * 1000; }

inline double to_us(SimTime t) { return static_cast<double>(t) / 1e3; }
inline double to_ms(SimTime t) { return static_cast<double>(t) / 1e6; }
inline double to_sec(SimTime t) { return static_cast<double>(t) / 1e9; }

constexpr std::int64_t kPageSize = 4096;
constexpr std::int64_t kSectorSize = 512;
constexpr std::int64_t kSectorsPerPage = kPageSize / kSectorSize;

// A scenario file problem: bad field, bad preset, impossible value.
// The CLI maps this to exit code 1.
class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

// A broken model invariant. Any throw here is a simulator bug, never a
// workload outcome. The CLI maps this to exit code 2.
class InvariantViolation : public std::runtime_error {
 public:
  explicit InvariantViolation(const std::string& what)
      : std::runtime_error(what) {}
};

inline void invariant(bool ok, const char* name) {
  if (!ok) throw InvariantViolation(std::string("invariant violated: ") + name);
}

namespace detail {
inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}
}  // namespace detail

// Deterministic PRNG stream. The generator is a fixed, documented
// algorithm (mersenne twister 64) and sampling transforms are written
// out by hand, so identical seeds give bit-identical draw sequences on
// any platform. Independent substreams are derived from (seed, id) so
// that e.g. the workload stream is unchanged when a device sampler
// draws more or fewer values in another configuration.
class RandomSource {
 public:
  explicit RandomSource(std::uint64_t seed, std::uint64_t stream = 0)
      : seed_(seed),
        stream_(stream),
        engine_(detail::splitmix64(detail::splitmix64(seed) ^
                                   (0x6a09e667f3bcc909ULL + stream))) {}

  RandomSource fork(std::uint64_t substream) const {
    return RandomSource(seed_, stream_ * 0x100000001b3ULL + substream + 1);
  }

  std::uint64_t seed() const { return seed_; }

  std::uint64_t next_u64() { return engine_(); }

  // Uniform in [0, 1) with 53 random bits.
  double uniform01() {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
  }

  // Uniform integer in [lo, hi] via rejection; exact and unbiased.
  std::int64_t uniform_int(std::int64_t lo, std::int64_t hi) {
    if (lo > hi) throw InvariantViolation("uniform_int: empty range");
    std::uint64_t span = static_cast<std::uint64_t>(hi - lo) + 1;
    if (span == 0) return static_cast<std::int64_t>(engine_());  // full range
    std::uint64_t limit = UINT64_MAX - UINT64_MAX % span;
    std::uint64_t v;
    do {
      v = engine_();
    } while (v >= limit);
    return lo + static_cast<std::int64_t>(v % span);
  }

  // Standard normal via Box-Muller; the spare value is cached, which is
  // fine because draws stay inside one stream.
  double normal01() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    double u1, u2;
    do {
      u1 = uniform01();
    } while (u1 <= 0.0);
    u2 = uniform01();
    double r = std::sqrt(-2.0 * std::log(u1));
    double a = 6.283185307179586476925286766559 * u2;
    spare_ = r * std::sin(a);
    has_spare_ = true;
    return r * std::cos(a);
  }

  double normal(double mean, double sigma) { return mean + sigma * normal01(); }

 private:
  std::uint64_t seed_;
  std::uint64_t stream_;
  std::mt19937_64 engine_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

namespace detail {

// Standard normal CDF.
inline double phi(double x) { return 0.5 * std::erfc(-x * 0.70710678118654752440); }

// Mean of clamp(X, a, b) for X ~ LogNormal(mu, sigma).
inline double clamped_lognormal_mean(double mu, double sigma, double a,
                                     double b) {
  double la = std::log(a), lb = std::log(b);
  double head = a * phi((la - mu) / sigma);
  double tail = b * (1.0 - phi((lb - mu) / sigma));
  double mid = std::exp(mu + 0.5 * sigma * sigma) *
               (phi((lb - mu - sigma * sigma) / sigma) -
                phi((la - mu - sigma * sigma) / sigma));
  return head + mid + tail;
}

}  // namespace detail

// Log-normal latency/ratio sampler fitted to a (mean, min, max) summary:
// sigma comes from the min..max spread in log space and mu is then
// solved by bisection so the mean of the *clamped* distribution equals
// the requested mean. Degenerates to a constant when min == max.
class ClampedLogNormal {
 public:
  ClampedLogNormal() = default;

  ClampedLogNormal(double mean, double min, double max, double sigma = 0.0) {
    reset(mean, min, max, sigma);
  }

  void reset(double mean, double min, double max, double sigma = 0.0) {
    if (!(min > 0.0) || max < min)
      throw ConfigError("sampler: need 0 < min <= max");
    if (mean < min || mean > max)
      throw ConfigError("sampler: mean outside [min, max]");
    min_ = min;
    max_ = max;
    mean_ = mean;
    if (max == min) {
      constant_ = true;
      return;
    }
    constant_ = false;
    sigma_ = sigma > 0.0 ? sigma : std::log(max / min) / 6.0;
    // E[clamp] is monotone increasing in mu; bracket and bisect.
    double lo = std::log(min) - 40.0, hi = std::log(max) + 40.0;
    for (int i = 0; i < 200; ++i) {
      double mid = 0.5 * (lo + hi);
      if (detail::clamped_lognormal_mean(mid, sigma_, min, max) < mean)
        lo = mid;
      else
        hi = mid;
    }
    mu_ = 0.5 * (lo + hi);
  }

  double sample(RandomSource& rng) const {
    if (constant_) return mean_;
    double v = std::exp(mu_ + sigma_ * rng.normal01());
    if (v < min_) return min_;
    if (v > max_) return max_;
    return v;
  }

  SimTime sample_ns(RandomSource& rng) const {
    return static_cast<SimTime>(std::llround(sample(rng) * 1000.0));
  }

  double mean() const { return mean_; }
  double min() const { return min_; }
  double max() const { return max_; }
  double sigma() const { return constant_ ? 0.0 : sigma_; }

 private:
  double mean_ = 1.0;
  double min_ = 1.0;
  double max_ = 1.0;
  double mu_ = 0.0;
  double sigma_ = 0.0;
  bool constant_ = true;
};

// Truncated normal for tab footprints: resample until inside
// [mean - 2*spread, mean + 2*spread], floored at a small positive value.
class TruncatedNormal {
 public:
  TruncatedNormal() = default;
  TruncatedNormal(double mean, double spread, double floor = 1.0)
      : mean_(mean), spread_(spread), floor_(floor) {
    if (mean <= 0.0) throw ConfigError("truncated normal: mean must be > 0");
    lo_ = std::max(floor_, mean - 2.0 * spread);
    hi_ = mean + 2.0 * spread;
  }

  double sample(RandomSource& rng) const {
    if (spread_ <= 0.0) return mean_;
    for (int i = 0; i < 1000; ++i) {
      double v = rng.normal(mean_, spread_);
      if (v >= lo_ && v <= hi_) return v;
    }
    return mean_;
  }

 private:
  double mean_ = 1.0;
  double spread_ = 0.0;
  double floor_ = 1.0;
  double lo_ = 1.0;
  double hi_ = 1.0;
};

}  // namespace swapsim

#endif  // SWAPSIM_CORE_HPP
