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

#include "glhs/core.hpp"

#include <algorithm>
#include <atomic>
#include <bit>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <thread>

namespace glhs {

BitVector::BitVector(std::size_t length) : length_(length), words_((length + 63) / 64, 0) {}

bool BitVector::get(std::size_t i) const {
  if (i >= length_) throw DimensionError("bit index out of range");
  return (words_[i >> 6] >> (i & 63)) & 1u;
}

void BitVector::set(std::size_t i, bool bit) {
  if (i >= length_) throw DimensionError("bit index out of range");
  const std::uint64_t mask = std::uint64_t{1} << (i & 63);
  if (bit) {
    words_[i >> 6] |= mask;
  } else {
    words_[i >> 6] &= ~mask;
  }
}

std::size_t BitVector::popcount() const {
  std::size_t total = 0;
  for (std::uint64_t w : words_) total += static_cast<std::size_t>(std::popcount(w));
  return total;
}

bool BitVector::any() const {
  return std::any_of(words_.begin(), words_.end(), [](std::uint64_t w) { return w != 0; });
}

std::vector<std::uint8_t> BitVector::to_bytes() const {
  std::vector<std::uint8_t> out((length_ + 7) / 8, 0);
  for (std::size_t b = 0; b < out.size(); ++b) {
    out[b] = static_cast<std::uint8_t>(words_[b >> 3] >> (8 * (b & 7)));
  }
  return out;
}

BitVector BitVector::from_bytes(const std::uint8_t* data, std::size_t length) {
  BitVector v(length);
  const std::size_t nbytes = (length + 7) / 8;
  for (std::size_t b = 0; b < nbytes; ++b) {
    v.words_[b >> 3] |= static_cast<std::uint64_t>(data[b]) << (8 * (b & 7));
  }
  return v;
}

BitMatrix::BitMatrix(std::size_t rows, std::size_t cols)
    : rows_(rows), cols_(cols), bits_(rows * cols) {}

BitVector BitMatrix::row(std::size_t i) const {
  if (i >= rows_) throw DimensionError("row out of range");
  BitVector r(cols_);
  for (std::size_t j = 0; j < cols_; ++j) r.set(j, at(i, j));
  return r;
}

BitVector BitMatrix::col(std::size_t j) const {
  if (j >= cols_) throw DimensionError("column out of range");
  BitVector c(rows_);
  for (std::size_t i = 0; i < rows_; ++i) c.set(i, at(i, j));
  return c;
}

std::uint64_t fmix64(std::uint64_t z) {
  z ^= z >> 30;
  z *= 0xbf58476d1ce4e5b9ULL;
  z ^= z >> 27;
  z *= 0x94d049bb133111ebULL;
  z ^= z >> 31;
  return z;
}

namespace {
constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ULL;
constexpr std::uint64_t kStreamSalt = 0xD1B54A32D192ED03ULL;
constexpr std::uint64_t kChildSalt = 0x8CB92BA72F3D8DD7ULL;
}  // namespace

std::uint64_t rng_word(const SeedSpec& spec) {
  const std::uint64_t a = fmix64(spec.master_seed + kGolden);
  const std::uint64_t b = fmix64(a ^ (spec.stream_id + kStreamSalt));
  return fmix64(b + (spec.index + 1) * kGolden);
}

std::uint64_t substream(std::uint64_t stream, std::uint64_t item) {
  return fmix64(fmix64(stream + kChildSalt) ^ (item * kGolden + kStreamSalt));
}

std::uint64_t RngCursor::below(std::uint64_t n) {
  if (n == 0) throw DomainError("below(0)");
  const unsigned __int128 prod = static_cast<unsigned __int128>(next()) * n;
  return static_cast<std::uint64_t>(prod >> 64);
}

double RngCursor::normal() {
  // Box-Muller; u1 is shifted away from zero.
  const double u1 = (static_cast<double>(next() >> 11) + 0.5) * 0x1.0p-53;
  const double u2 = uniform();
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
}

unsigned default_workers() {
  if (const char* env = std::getenv("GLHS_WORKERS")) {
    const long v = std::strtol(env, nullptr, 10);
    if (v > 0) return static_cast<unsigned>(v);
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

void parallel_chunks(std::size_t n, std::size_t chunks, unsigned workers,
                     const std::function<void(std::size_t, std::size_t, std::size_t)>& fn) {
  if (chunks == 0) chunks = 1;
  auto bounds = [&](std::size_t c) { return n * c / chunks; };
  if (workers <= 1 || chunks == 1) {
    for (std::size_t c = 0; c < chunks; ++c) fn(c, bounds(c), bounds(c + 1));
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mu;
  std::vector<std::thread> pool;
  const unsigned nthreads = static_cast<unsigned>(std::min<std::size_t>(workers, chunks));
  pool.reserve(nthreads);
  for (unsigned t = 0; t < nthreads; ++t) {
    pool.emplace_back([&] {
      try {
        for (std::size_t c = next++; c < chunks; c = next++) fn(c, bounds(c), bounds(c + 1));
      } catch (...) {
        std::lock_guard<std::mutex> lock(failure_mu);
        if (!failure) failure = std::current_exception();
        next = chunks;
      }
    });
  }
  for (auto& th : pool) th.join();
  if (failure) std::rethrow_exception(failure);
}

}  // namespace glhs
