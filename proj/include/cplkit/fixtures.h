// Copyright 2026 The cpl-kit Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef CPLKIT_FIXTURES_H_
#define CPLKIT_FIXTURES_H_

#include <cstdint>
#include <string>
#include <vector>

#include "absl/status/statusor.h"
#include "cplkit/data_model.h"

namespace cplkit {

inline constexpr uint64_t kDefaultFixtureSeed = 20260101;

// 4 x 4 joint of a primary attribute (rows) and a neighbour (columns) whose
// first two primary symbols have disjoint conditional supports:
//   [.2   0    0    0  ]
//   [0    .2   0    0  ]
//   [.1   .15  .03  .02]
//   [.1   .15  .03  .02]
absl::StatusOr<JointDistribution> AsymmetricPairJoint();

// n i.i.d. records from `joint`; row symbols become attribute `row_name`.
absl::StatusOr<Dataset> SampleFromJoint(const JointDistribution& joint,
                                        size_t n, uint64_t seed,
                                        const std::string& row_name,
                                        const std::string& col_name);

// 100K samples of AsymmetricPairJoint.
absl::StatusOr<Dataset> AsymmetricPairFixture(
    uint64_t seed = kDefaultFixtureSeed, size_t n = 100000);

// Two binary attributes in a balanced full factorial design (exactly
// independent empirically), rows shuffled.
absl::StatusOr<Dataset> IndependentFixture(uint64_t seed = kDefaultFixtureSeed,
                                           size_t copies = 25000);

// Uniform k-ary attribute and an exact copy of it.
absl::StatusOr<Dataset> CopyFixture(uint64_t seed = kDefaultFixtureSeed,
                                    size_t n = 100000, int k = 4);

// Binary attributes, each equal to a shared latent bit with probability
// 0.15 and uniform otherwise; every pairwise CPL limit is about 0.045.
absl::StatusOr<Dataset> WeakCorrelationFixture(
    uint64_t seed = kDefaultFixtureSeed, size_t n = 200000,
    size_t attributes = 10);

// Six attributes: a strongly / moderately correlated triple, an
// independent bit, and a correlated ternary-binary pair.
absl::StatusOr<Dataset> MixedCorrelationFixture(
    uint64_t seed = kDefaultFixtureSeed, size_t n = 100000);

// Five attributes of sizes 3, 3, 3, 2, 4 linked in a noisy chain.
absl::StatusOr<Dataset> ChainFixture(uint64_t seed = kDefaultFixtureSeed,
                                     size_t n = 20000);

// Five 4-ary attributes driven by one latent symbol at varying strength.
absl::StatusOr<Dataset> ClusterFixture(uint64_t seed = kDefaultFixtureSeed,
                                       size_t n = 20000);

struct NamedFixture {
  std::string name;
  Dataset data;
};

// Every fixture above with default sizes, in a fixed order.
absl::StatusOr<std::vector<NamedFixture>> AllFixtures(uint64_t seed);

}  // namespace cplkit

#endif  // CPLKIT_FIXTURES_H_
