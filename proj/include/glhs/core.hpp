// Copyright 2026 The glhs Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef GLHS_CORE_HPP_
#define GLHS_CORE_HPP_

#include <cstddef>
#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

namespace glhs {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed headers, schema violations.
class FormatError : public Error {
 public:
  using Error::Error;
};

// Truncated or inconsistent record data.
class CorruptionError : public Error {
 public:
  using Error::Error;
};

class FeasibilityError : public Error {
 public:
  using Error::Error;
};

class DomainError : public Error {
 public:
  using Error::Error;
};

// An enumeration or exhaustive scan would exceed its size guard.
class GuardError : public Error {
 public:
  using Error::Error;
};

class PreconditionError : public Error {
 public:
  using Error::Error;
};

class DimensionError : public Error {
 public:
  using Error::Error;
};

class BitVector {
 public:
  BitVector() = default;
  explicit BitVector(std::size_t length);

  std::size_t size() const { return length_; }
  bool get(std::size_t i) const;
  void set(std::size_t i, bool bit);
  std::size_t popcount() const;
  bool any() const;

  // Packed little-endian, LSB-first within each byte.
  std::vector<std::uint8_t> to_bytes() const;
  static BitVector from_bytes(const std::uint8_t* data, std::size_t length);

  const std::vector<std::uint64_t>& words() const { return words_; }

  bool operator==(const BitVector& other) const {
    return length_ == other.length_ && words_ == other.words_;
  }

 private:
  std::size_t length_ = 0;
  std::vector<std::uint64_t> words_;
};

// Row-major k x R bit matrix. Rows are slots or vertices, columns labels.
class BitMatrix {
 public:
  BitMatrix() = default;
  BitMatrix(std::size_t rows, std::size_t cols);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  std::size_t flat_index(std::size_t i, std::size_t j) const { return i * cols_ + j; }

  bool at(std::size_t i, std::size_t j) const { return bits_.get(flat_index(i, j)); }
  void set(std::size_t i, std::size_t j, bool bit) { bits_.set(flat_index(i, j), bit); }

  BitVector row(std::size_t i) const;
  BitVector col(std::size_t j) const;

  const BitVector& flat() const { return bits_; }
  BitVector& flat() { return bits_; }

  bool operator==(const BitMatrix& other) const {
    return rows_ == other.rows_ && cols_ == other.cols_ && bits_ == other.bits_;
  }

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  BitVector bits_;
};

struct LabeledExample {
  BitMatrix features;
  std::uint8_t label = 0;

  bool operator==(const LabeledExample& other) const {
    return label == other.label && features == other.features;
  }
};

struct SeedSpec {
  std::uint64_t master_seed = 0;
  std::uint64_t stream_id = 0;
  std::uint64_t index = 0;
};

// SplitMix64 finalizer.
std::uint64_t fmix64(std::uint64_t z);

// Format version 1 mixing:
//   a = fmix64(seed + 0x9E3779B97F4A7C15)
//   b = fmix64(a ^ (stream + 0xD1B54A32D192ED03))
//   word = fmix64(b + (index + 1) * 0x9E3779B97F4A7C15)
// Each stage is injective in its new input, so distinct triples differ.
std::uint64_t rng_word(const SeedSpec& spec);

// Child stream id for item `item` of stream `stream`.
std::uint64_t substream(std::uint64_t stream, std::uint64_t item);

// Sequential view over rng_word with a running index.
class RngCursor {
 public:
  RngCursor(std::uint64_t seed, std::uint64_t stream, std::uint64_t start = 0)
      : seed_(seed), stream_(stream), index_(start) {}

  std::uint64_t next() { return rng_word({seed_, stream_, index_++}); }
  // 53-bit uniform in [0, 1).
  double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }
  bool bernoulli(double p) { return uniform() < p; }
  bool bit() { return (next() >> 63) != 0; }
  // Uniform in [0, n) via the high half of a 128-bit product.
  std::uint64_t below(std::uint64_t n);
  double normal();

  RngCursor child(std::uint64_t item) const { return RngCursor(seed_, substream(stream_, item)); }
  std::uint64_t seed() const { return seed_; }
  std::uint64_t stream() const { return stream_; }
  std::uint64_t position() const { return index_; }

 private:
  std::uint64_t seed_;
  std::uint64_t stream_;
  std::uint64_t index_;
};

// GLHS_WORKERS if set, else hardware concurrency (at least 1).
unsigned default_workers();

// Splits [0, n) into `chunks` contiguous ranges and runs fn(chunk, begin, end)
// on up to `workers` threads. Chunk boundaries depend only on n and chunks,
// so callers that reduce per-chunk results in chunk order are deterministic.
void parallel_chunks(std::size_t n, std::size_t chunks, unsigned workers,
                     const std::function<void(std::size_t, std::size_t, std::size_t)>& fn);

}  // namespace glhs

#endif  // GLHS_CORE_HPP_
