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

#include "cplkit/serialization.h"

#include <cmath>
#include <fstream>
#include <sstream>

#include "absl/strings/str_cat.h"
#include "cplkit/status_macros.h"

namespace cplkit {
namespace {

std::vector<std::string> Labels(const Json& json, const char* key) {
  std::vector<std::string> out;
  if (json.contains(key)) {
    for (const Json& v : json.at(key)) out.push_back(v.get<std::string>());
  }
  return out;
}

Json Label(const std::vector<std::string>& labels, size_t i) {
  return i < labels.size() ? Json(labels[i]) : Json(i);
}

}  // namespace

const char* UnitName(LeakageUnit unit) {
  return unit == LeakageUnit::kBits ? "bits" : "nats";
}

double ConvertLeakage(double nats, LeakageUnit unit) {
  return unit == LeakageUnit::kBits ? nats / std::log(2.0) : nats;
}

uint64_t Fnv1a64(std::string_view data) {
  uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : data) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

absl::StatusOr<Json> ReadJsonFile(const std::string& path) {
  std::ifstream in(path);
  if (!in) return absl::NotFoundError(absl::StrCat("cannot open ", path));
  std::stringstream buffer;
  buffer << in.rdbuf();
  Json json = Json::parse(buffer.str(), nullptr, /*allow_exceptions=*/false);
  if (json.is_discarded()) {
    return absl::InvalidArgumentError(absl::StrCat(path, " is not valid JSON"));
  }
  return json;
}

absl::StatusOr<ConditionalDistribution> ConditionalFromJson(
    const Json& json, ConditionOn direction) {
  if (!json.is_object() || !json.contains("matrix") ||
      !json.at("matrix").is_array() || json.at("matrix").empty()) {
    return absl::InvalidArgumentError(
        "expected an object with a nonempty \"matrix\" array");
  }
  const Json& matrix = json.at("matrix");
  const size_t rows = matrix.size();
  size_t cols = 0;
  std::vector<double> values;
  for (const Json& row : matrix) {
    if (!row.is_array() || row.empty()) {
      return absl::InvalidArgumentError("matrix rows must be nonempty arrays");
    }
    if (cols == 0) cols = row.size();
    if (row.size() != cols) {
      return absl::InvalidArgumentError("matrix rows differ in length");
    }
    for (const Json& v : row) {
      if (!v.is_number()) {
        return absl::InvalidArgumentError("matrix entries must be numbers");
      }
      values.push_back(v.get<double>());
    }
  }
  std::vector<std::string> row_labels, col_labels;
  try {
    row_labels = Labels(json, "row_labels");
    col_labels = Labels(json, "col_labels");
  } catch (const Json::exception&) {
    return absl::InvalidArgumentError("labels must be arrays of strings");
  }
  const std::string kind = json.value("kind", std::string("conditional"));
  if (kind == "joint") {
    ASSIGN_OR_RETURN(JointDistribution joint,
                     JointDistribution::Create(rows, cols, std::move(values),
                                               std::move(row_labels),
                                               std::move(col_labels)));
    return ConditionalFromJoint(joint, direction);
  }
  if (kind != "conditional") {
    return absl::InvalidArgumentError(
        absl::StrCat("unknown kind '", kind, "' (joint or conditional)"));
  }
  return ConditionalDistribution::Create(rows, cols, std::move(values),
                                         std::move(row_labels),
                                         std::move(col_labels));
}

Json ConditionalToJson(const ConditionalDistribution& cond) {
  Json matrix = Json::array();
  for (size_t i = 0; i < cond.num_rows(); ++i) {
    Json row = Json::array();
    for (size_t j = 0; j < cond.num_cols(); ++j) row.push_back(cond.at(i, j));
    matrix.push_back(std::move(row));
  }
  return Json{{"kind", "conditional"},
              {"row_labels", cond.row_labels()},
              {"col_labels", cond.col_labels()},
              {"matrix", std::move(matrix)}};
}

Json JointToJson(const JointDistribution& joint) {
  Json matrix = Json::array();
  for (size_t i = 0; i < joint.rows(); ++i) {
    Json row = Json::array();
    for (size_t j = 0; j < joint.cols(); ++j) row.push_back(joint.at(i, j));
    matrix.push_back(std::move(row));
  }
  return Json{{"kind", "joint"},
              {"row_labels", joint.row_labels()},
              {"col_labels", joint.col_labels()},
              {"matrix", std::move(matrix)}};
}

Json ToJson(const MechanismSpec& spec) {
  Json params = Json::object();
  switch (spec.kind()) {
    case MechanismKind::kRappor:
      params = Json{{"f", spec.rappor().f},
                    {"p", spec.rappor().p},
                    {"q", spec.rappor().q}};
      break;
    case MechanismKind::kBlh:
    case MechanismKind::kOlh:
      params = Json{{"g", spec.hash_range()}};
      break;
    case MechanismKind::kSs:
      params = Json{{"omega", spec.subset_size()}};
      break;
    default:
      break;
  }
  return Json{{"kind", MechanismName(spec.kind())},
              {"epsilon", spec.epsilon()},
              {"delta", spec.delta()},
              {"k", spec.k()},
              {"params", std::move(params)}};
}

absl::StatusOr<MechanismSpec> MechanismSpecFromJson(const Json& json) {
  if (!json.is_object() || !json.contains("kind") ||
      !json.at("kind").is_string() || !json.contains("k") ||
      !json.at("k").is_number_integer()) {
    return absl::InvalidArgumentError(
        "mechanism JSON needs string \"kind\" and integer \"k\"");
  }
  ASSIGN_OR_RETURN(MechanismKind kind,
                   ParseMechanismKind(json.at("kind").get<std::string>()));
  auto number = [&](const Json& obj, const char* key, double fallback) {
    return obj.contains(key) && obj.at(key).is_number()
               ? obj.at(key).get<double>()
               : fallback;
  };
  RapporParams rappor;
  if (json.contains("params") && json.at("params").is_object()) {
    const Json& p = json.at("params");
    rappor = RapporParams{number(p, "f", rappor.f), number(p, "p", rappor.p),
                          number(p, "q", rappor.q)};
  }
  return MechanismSpec::Create(kind, number(json, "epsilon", 0.0),
                               json.at("k").get<int>(),
                               number(json, "delta", 0.0), rappor);
}

Json ToJson(const ExactCplResult& r, const ConditionalDistribution& cond,
            LeakageUnit unit) {
  auto witness = [&](const ExactCplWitness& w) {
    return Json{{"output", w.output},
                {"x", Label(cond.row_labels(), w.x)},
                {"x_prime", Label(cond.row_labels(), w.x_prime)}};
  };
  Json j{{"leakage", ConvertLeakage(r.leakage, unit)},
         {"witness", witness(r.witness)},
         {"infinite", r.infinite}};
  if (r.infinite_witness.has_value()) {
    j["infinite_witness"] = witness(*r.infinite_witness);
  }
  return j;
}

Json ToJson(const BoundedCplResult& r, const ConditionalDistribution& cond,
            LeakageUnit unit) {
  Json subset = Json::array();
  for (size_t s : r.subset) subset.push_back(Label(cond.col_labels(), s));
  return Json{
      {"leakage", ConvertLeakage(r.leakage, unit)},
      {"relaxation", r.relaxation},
      {"subset", std::move(subset)},
      {"A", r.a},
      {"B", r.b},
      {"witness_pair", Json::array({Label(cond.row_labels(), r.x),
                                    Label(cond.row_labels(), r.x_prime)})}};
}

Json ToJson(const MetricReport& r) {
  return Json{{"mi", r.mi},
              {"nmi", r.nmi},
              {"pcc", r.pcc.has_value() ? Json(*r.pcc) : Json(nullptr)},
              {"h_a", r.h_a},
              {"h_b", r.h_b},
              {"h_joint", r.h_joint}};
}

Json ToJson(const StatisticalCplResult& r, LeakageUnit unit) {
  return Json{{"leakage", ConvertLeakage(r.leakage, unit)},
              {"p_value", r.p_value},
              {"significant", r.significant},
              {"excluded_cells", r.excluded_cells}};
}

Json ToJson(const BenchmarkPoint& p) {
  return Json{{"undershoot", p.undershoot},
              {"overshoot", p.overshoot},
              {"region", RegionName(p.region)},
              {"distance", p.DistanceFromOrigin()}};
}

Json ToJson(const UtilityReport& r) {
  return Json{{"freq_nmse", r.freq_nmse},
              {"zero_one_error", r.zero_one_error},
              {"norm_tcpl", r.norm_tcpl},
              {"tcpl", r.tcpl},
              {"tcpl_bound", r.tcpl_bound}};
}

Json ToJson(const CalibrationResult& r) {
  Json trace = Json::array();
  for (const CalibrationStep& s : r.trace) {
    trace.push_back(Json{{"epsilon", s.epsilon},
                         {"worst_tpl", s.worst_tpl},
                         {"worst_attribute", s.worst_attribute}});
  }
  return Json{
      {"epsilon_star", r.epsilon_star}, {"worst_attribute", r.worst_attribute},
      {"worst_tpl", r.worst_tpl},       {"iterations", r.iterations},
      {"infeasible", r.infeasible},     {"trace", std::move(trace)}};
}

Json CplMatrixToJson(const CplMatrix& m, LeakageUnit unit) {
  Json leakage = Json::array();
  Json relaxation = Json::array();
  Json infinite = Json::array();
  for (size_t i = 0; i < m.size(); ++i) {
    Json lrow = Json::array(), rrow = Json::array(), irow = Json::array();
    for (size_t j = 0; j < m.size(); ++j) {
      const std::optional<LeakagePair>& e = m.Get(i, j);
      if (i == j || !e.has_value()) {
        lrow.push_back(nullptr);
        rrow.push_back(nullptr);
        irow.push_back(false);
      } else {
        lrow.push_back(ConvertLeakage(e->leakage, unit));
        rrow.push_back(e->relaxation);
        irow.push_back(e->infinite);
      }
    }
    leakage.push_back(std::move(lrow));
    relaxation.push_back(std::move(rrow));
    infinite.push_back(std::move(irow));
  }
  return Json{{"attributes", m.names()},
              {"orientation",
               "entry [i][j] is the leakage on attribute i "
               "caused by releasing attribute j"},
              {"leakage", std::move(leakage)},
              {"relaxation", std::move(relaxation)},
              {"infinite", std::move(infinite)}};
}

}  // namespace cplkit
