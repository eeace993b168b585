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

#include "numprobe/embedding_io.h"

#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "numprobe/errors.h"

namespace numprobe {

namespace le {

void PutU64(std::string& out, std::uint64_t v) {
  for (int i = 0; i < 8; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xFF));
}

void PutF32(std::string& out, float v) {
  const auto bits = std::bit_cast<std::uint32_t>(v);
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<char>((bits >> (8 * i)) & 0xFF));
}

void PutF64(std::string& out, double v) { PutU64(out, std::bit_cast<std::uint64_t>(v)); }

std::uint64_t GetU64(const unsigned char* p) {
  std::uint64_t v = 0;
  for (int i = 7; i >= 0; --i) v = (v << 8) | p[i];
  return v;
}

float GetF32(const unsigned char* p) {
  std::uint32_t v = 0;
  for (int i = 3; i >= 0; --i) v = (v << 8) | p[i];
  return std::bit_cast<float>(v);
}

double GetF64(const unsigned char* p) { return std::bit_cast<double>(GetU64(p)); }

}  // namespace le

void EmbeddingSet::Add(std::uint64_t id, int label, std::span<const float> vector) {
  if (vector.size() != dim_) {
    throw DimensionError("record " + std::to_string(id) + " has dimension " +
                         std::to_string(vector.size()) + ", expected " +
                         std::to_string(dim_));
  }
  if (label != 0 && label != 1) {
    throw FormatError("record " + std::to_string(id) + " has label " +
                      std::to_string(label));
  }
  for (float x : vector) {
    if (!std::isfinite(x)) {
      throw FormatError("record " + std::to_string(id) +
                        " has a non-finite component");
    }
  }
  ids_.push_back(id);
  labels_.push_back(static_cast<std::uint8_t>(label));
  values_.insert(values_.end(), vector.begin(), vector.end());
}

std::string SerializeEmbeddings(const EmbeddingSet& set) {
  nlohmann::ordered_json header;
  header["dim"] = set.dim();
  header["count"] = set.size();
  header["dtype"] = "f32le";
  header["source_model"] = set.source_model;
  header["dataset"] = set.dataset;
  std::string out = header.dump();
  out += '\n';
  out.reserve(out.size() + set.size() * (9 + 4 * set.dim()));
  for (std::size_t i = 0; i < set.size(); ++i) {
    le::PutU64(out, set.id(i));
    out.push_back(static_cast<char>(set.label(i)));
    for (float x : set.vector(i)) le::PutF32(out, x);
  }
  return out;
}

EmbeddingSet ParseEmbeddings(std::string_view bytes) {
  const auto newline = bytes.find('\n');
  if (newline == std::string_view::npos) {
    throw FormatError("embedding file has no header line");
  }
  nlohmann::json header;
  try {
    header = nlohmann::json::parse(bytes.substr(0, newline));
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(std::string("bad embedding header: ") + e.what(), 1);
  }
  std::size_t dim = 0;
  std::size_t count = 0;
  EmbeddingSet set;
  try {
    if (header.at("dtype").get<std::string>() != "f32le") {
      throw FormatError("unsupported dtype " + header.at("dtype").dump(), 1);
    }
    dim = header.at("dim").get<std::size_t>();
    count = header.at("count").get<std::size_t>();
    set = EmbeddingSet(dim);
    set.source_model = header.value("source_model", "");
    set.dataset = header.value("dataset", "");
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(std::string("bad embedding header: ") + e.what(), 1);
  }
  if (dim == 0) throw DimensionError("embedding dim must be positive");

  const std::size_t record = 9 + 4 * dim;
  const std::string_view body = bytes.substr(newline + 1);
  if (body.size() != count * record) {
    throw FormatError("embedding body is " + std::to_string(body.size()) +
                      " bytes, header implies " +
                      std::to_string(count * record));
  }
  const auto* p = reinterpret_cast<const unsigned char*>(body.data());
  std::vector<float> row(dim);
  for (std::size_t i = 0; i < count; ++i, p += record) {
    const std::uint64_t id = le::GetU64(p);
    for (std::size_t k = 0; k < dim; ++k) row[k] = le::GetF32(p + 9 + 4 * k);
    set.Add(id, p[8], row);
  }
  return set;
}

std::string ReadFileBytes(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FormatError("cannot open " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void WriteFileBytes(const std::string& path, std::string_view bytes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw FormatError("cannot write " + path);
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  out.close();
  if (!out) throw FormatError("failed writing " + path);
}

void WriteEmbeddings(const EmbeddingSet& set, const std::string& path) {
  WriteFileBytes(path, SerializeEmbeddings(set));
}

EmbeddingSet ReadEmbeddings(const std::string& path) {
  try {
    return ParseEmbeddings(ReadFileBytes(path));
  } catch (const DimensionError& e) {
    throw DimensionError(path + ": " + e.what());
  } catch (const FormatError& e) {
    throw FormatError(path + ": " + e.what());
  }
}

}  // namespace numprobe
