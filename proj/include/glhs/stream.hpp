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

// Example-stream file format, version 1. All integers little-endian.
//
//   offset  size  field
//   0       4     magic "GLHS"
//   4       1     format version (1)
//   5       4     rows (k or |V|)
//   9       4     cols (R or M)
//   13      1     coordinate order tag (0 = row-major)
//   14      8     example count
//   22      4     metadata length L
//   26      L     metadata text (run config echo)
//   26+L    ...   count fixed-width records
//
// Record: one label byte (0 or 1), then ceil(rows*cols/8) feature bytes,
// LSB-first, row-major. Padding bits in the last byte must be zero.

#ifndef GLHS_STREAM_HPP_
#define GLHS_STREAM_HPP_

#include <cstdint>
#include <fstream>
#include <istream>
#include <ostream>
#include <string>
#include <vector>

#include "glhs/core.hpp"

namespace glhs {

inline constexpr std::uint8_t kStreamVersion = 1;
inline constexpr std::uint8_t kRowMajor = 0;

struct StreamHeader {
  std::uint32_t rows = 0;
  std::uint32_t cols = 0;
  std::uint8_t order = kRowMajor;
  std::uint64_t count = 0;
  std::string metadata;

  std::size_t record_width() const {
    return 1 + (static_cast<std::size_t>(rows) * cols + 7) / 8;
  }
};

std::vector<std::uint8_t> pack_example(const LabeledExample& ex);
LabeledExample unpack_example(const std::uint8_t* data, std::size_t size, std::uint32_t rows,
                              std::uint32_t cols);

void write_header(std::ostream& out, const StreamHeader& header);
StreamHeader read_header(std::istream& in);

class StreamWriter {
 public:
  StreamWriter(const std::string& path, const StreamHeader& header);
  void write(const LabeledExample& ex);
  // Fails if fewer or more records were written than the header announced.
  void close();
  ~StreamWriter();

 private:
  std::ofstream out_;
  StreamHeader header_;
  std::uint64_t written_ = 0;
  bool closed_ = false;
};

class StreamReader {
 public:
  explicit StreamReader(const std::string& path);
  const StreamHeader& header() const { return header_; }
  // False once all announced records are consumed.
  bool next(LabeledExample& ex);

 private:
  std::ifstream in_;
  StreamHeader header_;
  std::uint64_t read_ = 0;
  std::vector<std::uint8_t> buf_;
};

void write_stream(const std::string& path, StreamHeader header,
                  const std::vector<LabeledExample>& examples);
std::vector<LabeledExample> read_stream(const std::string& path, StreamHeader* header = nullptr);

}  // namespace glhs

#endif  // GLHS_STREAM_HPP_
