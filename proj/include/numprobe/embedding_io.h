// Copyright 2026 The numprobe Authors
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

#ifndef NUMPROBE_EMBEDDING_IO_H_
#define NUMPROBE_EMBEDDING_IO_H_

#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace numprobe {

// A set of fixed-dimension vectors with example ids and binary labels,
// stored row-major. This is the probe's read-only input.
class EmbeddingSet {
 public:
  EmbeddingSet() = default;
  explicit EmbeddingSet(std::size_t dim) : dim_(dim) {}

  std::size_t dim() const { return dim_; }
  std::size_t size() const { return ids_.size(); }
  bool empty() const { return ids_.empty(); }

  // Throws DimensionError on a size mismatch and FormatError on a label
  // outside {0, 1} or a non-finite component.
  void Add(std::uint64_t id, int label, std::span<const float> vector);

  std::uint64_t id(std::size_t i) const { return ids_[i]; }
  int label(std::size_t i) const { return labels_[i]; }
  std::span<const float> vector(std::size_t i) const {
    return {values_.data() + i * dim_, dim_};
  }
  const std::vector<float>& values() const { return values_; }

  std::string source_model;
  std::string dataset;

  bool operator==(const EmbeddingSet&) const = default;

 private:
  std::size_t dim_ = 0;
  std::vector<std::uint64_t> ids_;
  std::vector<std::uint8_t> labels_;
  std::vector<float> values_;
};

// File layout: one JSON header line
//   {"dim": d, "count": n, "dtype": "f32le", "source_model": "...",
//    "dataset": "..."}
// then n records of: u64 LE id, u8 label, d x f32 LE.
std::string SerializeEmbeddings(const EmbeddingSet& set);
EmbeddingSet ParseEmbeddings(std::string_view bytes);

void WriteEmbeddings(const EmbeddingSet& set, const std::string& path);
EmbeddingSet ReadEmbeddings(const std::string& path);

// Little-endian helpers shared with the checkpoint format.
namespace le {
void PutU64(std::string& out, std::uint64_t v);
void PutF32(std::string& out, float v);
void PutF64(std::string& out, double v);
std::uint64_t GetU64(const unsigned char* p);
float GetF32(const unsigned char* p);
double GetF64(const unsigned char* p);
}  // namespace le

std::string ReadFileBytes(const std::string& path);
void WriteFileBytes(const std::string& path, std::string_view bytes);

}  // namespace numprobe

#endif  // NUMPROBE_EMBEDDING_IO_H_
