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

#ifndef NUMPROBE_SYNTHETIC_H_
#define NUMPROBE_SYNTHETIC_H_

#include <cstdint>

#include "numprobe/embedding_io.h"

namespace numprobe {

// Two isotropic unit-variance Gaussian clusters whose means lie
// `separation` standard deviations apart along a random direction.
// Labels alternate 0, 1, 0, ... so the set is exactly balanced.
EmbeddingSet GaussianClusters(std::size_t count, std::size_t dim,
                              double separation, std::uint64_t seed,
                              std::uint64_t first_id = 0);

// Same vectors, labels replaced by a balanced random permutation.
EmbeddingSet RandomizeLabels(const EmbeddingSet& set, std::uint64_t seed);

}  // namespace numprobe

#endif  // NUMPROBE_SYNTHETIC_H_
