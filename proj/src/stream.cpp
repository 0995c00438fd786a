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

#include "glhs/stream.hpp"

#include <array>
#include <cstring>

namespace glhs {
namespace {

template <typename T>
void put_le(std::ostream& out, T value) {
  std::array<char, sizeof(T)> buf{};
  for (std::size_t i = 0; i < sizeof(T); ++i) {
    buf[i] = static_cast<char>((static_cast<std::uint64_t>(value) >> (8 * i)) & 0xff);
  }
  out.write(buf.data(), buf.size());
}

template <typename T>
T get_le(std::istream& in, const char* field) {
  std::array<unsigned char, sizeof(T)> buf{};
  in.read(reinterpret_cast<char*>(buf.data()), buf.size());
  if (in.gcount() != static_cast<std::streamsize>(buf.size())) {
    throw FormatError(std::string("stream header truncated at field '") + field + "'");
  }
  std::uint64_t v = 0;
  for (std::size_t i = 0; i < sizeof(T); ++i) v |= static_cast<std::uint64_t>(buf[i]) << (8 * i);
  return static_cast<T>(v);
}

constexpr std::uint32_t kMaxMetadata = 1u << 24;

}  // namespace

std::vector<std::uint8_t> pack_example(const LabeledExample& ex) {
  if (ex.label > 1) throw DomainError("label must be 0 or 1");
  std::vector<std::uint8_t> out;
  const auto bytes = ex.features.flat().to_bytes();
  out.reserve(1 + bytes.size());
  out.push_back(ex.label);
  out.insert(out.end(), bytes.begin(), bytes.end());
  return out;
}

LabeledExample unpack_example(const std::uint8_t* data, std::size_t size, std::uint32_t rows,
                              std::uint32_t cols) {
  const std::size_t nbits = static_cast<std::size_t>(rows) * cols;
  const std::size_t width = 1 + (nbits + 7) / 8;
  if (size < width) throw CorruptionError("record truncated");
  if (data[0] > 1) throw CorruptionError("record label byte is not 0/1");
  if (nbits % 8 != 0) {
    const std::uint8_t last = data[width - 1];
    if (last >> (nbits % 8)) throw CorruptionError("nonzero padding bits in record");
  }
  LabeledExample ex;
  ex.label = data[0];
  ex.features = BitMatrix(rows, cols);
  ex.features.flat() = BitVector::from_bytes(data + 1, nbits);
  return ex;
}

void write_header(std::ostream& out, const StreamHeader& header) {
  out.write("GLHS", 4);
  put_le<std::uint8_t>(out, kStreamVersion);
  put_le<std::uint32_t>(out, header.rows);
  put_le<std::uint32_t>(out, header.cols);
  put_le<std::uint8_t>(out, header.order);
  put_le<std::uint64_t>(out, header.count);
  put_le<std::uint32_t>(out, static_cast<std::uint32_t>(header.metadata.size()));
  out.write(header.metadata.data(), static_cast<std::streamsize>(header.metadata.size()));
}

StreamHeader read_header(std::istream& in) {
  char magic[4] = {};
  in.read(magic, 4);
  if (in.gcount() != 4 || std::memcmp(magic, "GLHS", 4) != 0) {
    throw FormatError("bad magic: not a GLHS example stream");
  }
  const auto version = get_le<std::uint8_t>(in, "version");
  if (version != kStreamVersion) {
    throw FormatError("unsupported stream version " + std::to_string(version));
  }
  StreamHeader h;
  h.rows = get_le<std::uint32_t>(in, "rows");
  h.cols = get_le<std::uint32_t>(in, "cols");
  h.order = get_le<std::uint8_t>(in, "order");
  if (h.order != kRowMajor) throw FormatError("unknown coordinate order tag");
  h.count = get_le<std::uint64_t>(in, "count");
  const auto len = get_le<std::uint32_t>(in, "metadata length");
  if (len > kMaxMetadata) throw FormatError("metadata length implausibly large");
  h.metadata.resize(len);
  in.read(h.metadata.data(), len);
  if (in.gcount() != static_cast<std::streamsize>(len)) throw FormatError("metadata truncated");
  return h;
}

StreamWriter::StreamWriter(const std::string& path, const StreamHeader& header)
    : out_(path, std::ios::binary | std::ios::trunc), header_(header) {
  if (!out_) throw Error("cannot open '" + path + "' for writing");
  write_header(out_, header_);
}

void StreamWriter::write(const LabeledExample& ex) {
  if (ex.features.rows() != header_.rows || ex.features.cols() != header_.cols) {
    throw DimensionError("example shape does not match stream header");
  }
  if (written_ >= header_.count) throw Error("more records than announced in header");
  const auto rec = pack_example(ex);
  out_.write(reinterpret_cast<const char*>(rec.data()), static_cast<std::streamsize>(rec.size()));
  ++written_;
}

void StreamWriter::close() {
  if (closed_) return;
  closed_ = true;
  out_.flush();
  if (!out_) throw Error("write failed");
  out_.close();
  if (written_ != header_.count) throw Error("fewer records than announced in header");
}

StreamWriter::~StreamWriter() {
  if (!closed_) out_.close();
}

StreamReader::StreamReader(const std::string& path) : in_(path, std::ios::binary) {
  if (!in_) throw Error("cannot open '" + path + "'");
  header_ = read_header(in_);
  buf_.resize(header_.record_width());
}

bool StreamReader::next(LabeledExample& ex) {
  if (read_ >= header_.count) return false;
  in_.read(reinterpret_cast<char*>(buf_.data()), static_cast<std::streamsize>(buf_.size()));
  if (in_.gcount() != static_cast<std::streamsize>(buf_.size())) {
    throw CorruptionError("record " + std::to_string(read_) + " truncated");
  }
  ex = unpack_example(buf_.data(), buf_.size(), header_.rows, header_.cols);
  ++read_;
  return true;
}

void write_stream(const std::string& path, StreamHeader header,
                  const std::vector<LabeledExample>& examples) {
  header.count = examples.size();
  if (!examples.empty()) {
    header.rows = static_cast<std::uint32_t>(examples.front().features.rows());
    header.cols = static_cast<std::uint32_t>(examples.front().features.cols());
  }
  StreamWriter w(path, header);
  for (const auto& ex : examples) w.write(ex);
  w.close();
}

std::vector<LabeledExample> read_stream(const std::string& path, StreamHeader* header) {
  StreamReader r(path);
  if (header) *header = r.header();
  std::vector<LabeledExample> out;
  out.reserve(static_cast<std::size_t>(std::min<std::uint64_t>(r.header().count, 1u << 24)));
  LabeledExample ex;
  while (r.next(ex)) out.push_back(ex);
  return out;
}

}  // namespace glhs
