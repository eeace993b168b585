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

#include "numprobe/synthetic.h"

#include <cmath>
#include <vector>

#include "numprobe/errors.h"
#include "numprobe/random.h"

namespace numprobe {

EmbeddingSet GaussianClusters(std::size_t count, std::size_t dim,
                              double separation, std::uint64_t seed,
                              std::uint64_t first_id) {
  if (dim == 0) throw UsageError("dimension must be positive");
  Rng rng(seed);
  // The direction depends only on (dim, seed) so that train/val sets built
  // with the same seed but different first ids share geometry.
  std::vector<double> axis(dim);
  double norm = 0.0;
  for (double& a : axis) {
    a = rng.Normal();
    norm += a * a;
  }
  norm = std::sqrt(norm);
  for (double& a : axis) a /= norm;

  Rng noise(seed ^ (first_id * 0x2545F4914F6CDD1DULL + 1));
  EmbeddingSet set(dim);
  std::vector<float> v(dim);
  for (std::size_t i = 0; i < count; ++i) {
    const int label = static_cast<int>(i % 2);
    const double offset = (label == 0 ? -0.5 : 0.5) * separation;
    for (std::size_t k = 0; k < dim; ++k) {
      v[k] = static_cast<float>(offset * axis[k] + noise.Normal());
    }
    set.Add(first_id + i, label, v);
  }
  return set;
}

EmbeddingSet RandomizeLabels(const EmbeddingSet& set, std::uint64_t seed) {
  std::vector<int> labels(set.size());
  for (std::size_t i = 0; i < labels.size(); ++i) labels[i] = static_cast<int>(i % 2);
  Rng rng(seed);
  rng.Shuffle(labels);
  EmbeddingSet out(set.dim());
  out.source_model = set.source_model;
  out.dataset = set.dataset;
  for (std::size_t i = 0; i < set.size(); ++i) out.Add(set.id(i), labels[i], set.vector(i));
  return out;
}

}  // namespace numprobe
