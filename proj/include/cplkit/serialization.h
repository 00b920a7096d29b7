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

#ifndef CPLKIT_SERIALIZATION_H_
#define CPLKIT_SERIALIZATION_H_

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "absl/status/statusor.h"
#include "cplkit/benchmarks.h"
#include "cplkit/calibration.h"
#include "cplkit/composition.h"
#include "cplkit/correlation_metrics.h"
#include "cplkit/cpl_bound.h"
#include "cplkit/cpl_exact.h"
#include "cplkit/data_model.h"
#include "cplkit/mechanisms.h"
#include "cplkit/statistical.h"
#include "json.hpp"

namespace cplkit {

using Json = nlohmann::ordered_json;

// Leakage display unit. Values are always computed in nats.
enum class LeakageUnit { kNats, kBits };
const char* UnitName(LeakageUnit unit);
double ConvertLeakage(double nats, LeakageUnit unit);

uint64_t Fnv1a64(std::string_view data);

absl::StatusOr<Json> ReadJsonFile(const std::string& path);

// Reads {"row_labels", "col_labels", "matrix", "kind"}. kind "conditional"
// (default) is P(col | row); kind "joint" is conditioned per `direction`.
absl::StatusOr<ConditionalDistribution> ConditionalFromJson(
    const Json& json, ConditionOn direction = ConditionOn::kRows);
Json ConditionalToJson(const ConditionalDistribution& cond);
Json JointToJson(const JointDistribution& joint);

// {kind, epsilon, delta, k, params}; params carry RAPPOR (f, p, q), the
// hash range g of BLH / OLH, or the SS subset size omega.
Json ToJson(const MechanismSpec& spec);
absl::StatusOr<MechanismSpec> MechanismSpecFromJson(const Json& json);
Json ToJson(const ExactCplResult& r, const ConditionalDistribution& cond,
            LeakageUnit unit);
Json ToJson(const BoundedCplResult& r, const ConditionalDistribution& cond,
            LeakageUnit unit);
Json ToJson(const MetricReport& r);
Json ToJson(const StatisticalCplResult& r, LeakageUnit unit);
Json ToJson(const BenchmarkPoint& p);
Json ToJson(const UtilityReport& r);
Json ToJson(const CalibrationResult& r);
Json CplMatrixToJson(const CplMatrix& m, LeakageUnit unit);

}  // namespace cplkit

#endif  // CPLKIT_SERIALIZATION_H_
