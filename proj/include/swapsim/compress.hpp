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

#ifndef SWAPSIM_COMPRESS_HPP
#define SWAPSIM_COMPRESS_HPP

#include <cstdint>

#include "swapsim/core.hpp"

namespace swapsim {

// Page compression model. Page contents are abstract: a compression is
// a sampled ratio (clamped to [0.001, 3]) plus a sampled CPU latency.
// Latency samplers carry the measured swap-cache numbers: compression
// mean 12.1 us (1.5..138.2), decompression mean 3.9 us (1.5..42.6).
//
// The ratio sampler is shaped per use site. Ratios below 1 expand the
// page; the store path decides what to do with such pages.
class CompressionModel {
 public:
  CompressionModel() {
    ratio_.reset(1.14, 0.001, 3.0, 0.06);
    compress_lat_us_.reset(12.1, 1.5, 138.2);
    decompress_lat_us_.reset(3.9, 1.5, 42.6);
  }

  void set_ratio(double mean, double min, double max, double sigma = 0.0) {
    ratio_.reset(mean, min, max, sigma);
  }
  void set_compress_latency(double mean_us, double min_us, double max_us) {
    compress_lat_us_.reset(mean_us, min_us, max_us);
  }
  void set_decompress_latency(double mean_us, double min_us, double max_us) {
    decompress_lat_us_.reset(mean_us, min_us, max_us);
  }

  struct Compressed {
    std::int64_t size_bytes = 0;
    SimTime latency = 0;
    double ratio = 0.0;
  };

  static std::int64_t size_for_ratio(double ratio) {
    return static_cast<std::int64_t>(
        std::ceil(static_cast<double>(kPageSize) / ratio));
  }

  Compressed compress(RandomSource& rng) const {
    Compressed c;
    c.ratio = ratio_.sample(rng);
    c.size_bytes = size_for_ratio(c.ratio);
    c.latency = compress_lat_us_.sample_ns(rng);
    return c;
  }

  SimTime decompress(RandomSource& rng) const {
    return decompress_lat_us_.sample_ns(rng);
  }

  const ClampedLogNormal& ratio_sampler() const { return ratio_; }
  const ClampedLogNormal& compress_sampler() const { return compress_lat_us_; }
  const ClampedLogNormal& decompress_sampler() const {
    return decompress_lat_us_;
  }

 private:
  ClampedLogNormal ratio_;
  ClampedLogNormal compress_lat_us_;
  ClampedLogNormal decompress_lat_us_;
};

}  // namespace swapsim

#endif  // SWAPSIM_COMPRESS_HPP
