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

#include "cplkit/cli.h"

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>

#include "CLI11.hpp"
#include "absl/strings/numbers.h"
#include "absl/strings/str_cat.h"
#include "absl/strings/str_format.h"
#include "absl/strings/str_join.h"
#include "cplkit/benchmarks.h"
#include "cplkit/calibration.h"
#include "cplkit/composition.h"
#include "cplkit/correlation_metrics.h"
#include "cplkit/cpl_bound.h"
#include "cplkit/cpl_exact.h"
#include "cplkit/fixtures.h"
#include "cplkit/serialization.h"
#include "cplkit/statistical.h"
#include "cplkit/status_macros.h"

namespace cplkit {
namespace {

// Options shared by several subcommands.
struct Options {
  std::string data;
  std::vector<std::string> bins;
  std::string cond;
  std::string direction = "rows";
  std::string mechanism = "grr";
  std::string engine = "bound";
  std::string units = "nats";
  double epsilon = 1.0;
  double delta = 0.0;
  int k = 0;
  std::string target = "0";
  std::vector<std::string> neighbors;
  int expansion = 50;
  int surrogates = 1000;
  double alpha = 0.05;
  bool tpl = false;
  std::vector<double> epsilons{1.0};
  std::vector<double> thresholds{0.2, 0.4};
  std::string reference = "bound";
  std::vector<std::string> mechanisms;
  std::string cpl_source = "exact";
  double budget = 1.0;
  double step = 0.01;
  std::string out_path;
  std::string out_dir = "fixtures";
  std::optional<uint64_t> seed;
  int threads = 0;
};

// Result of one subcommand: the payload, or a status plus exit code.
struct Outcome {
  Json config;
  Json result;
  int exit_code = kExitOk;
};

absl::StatusOr<uint64_t> ResolveSeed(const Options& o) {
  if (o.seed.has_value()) return *o.seed;
  if (const char* env = std::getenv("CPL_KIT_SEED"); env != nullptr) {
    uint64_t seed = 0;
    if (!absl::SimpleAtoi(env, &seed)) {
      return absl::InvalidArgumentError(
          absl::StrCat("CPL_KIT_SEED is not an unsigned integer: ", env));
    }
    return seed;
  }
  return 0;
}

absl::StatusOr<LeakageUnit> ParseUnit(const std::string& s) {
  if (s == "nats") return LeakageUnit::kNats;
  if (s == "bits") return LeakageUnit::kBits;
  return absl::InvalidArgumentError("--units must be nats or bits");
}

absl::StatusOr<ConditionOn> ParseDirection(const std::string& s) {
  if (s == "rows") return ConditionOn::kRows;
  if (s == "columns") return ConditionOn::kColumns;
  return absl::InvalidArgumentError("--direction must be rows or columns");
}

absl::StatusOr<Dataset> LoadData(const Options& o) {
  if (o.data.empty()) return absl::InvalidArgumentError("--data is required");
  std::map<std::string, ColumnHint> hints;
  for (const std::string& b : o.bins) {
    const size_t eq = b.find('=');
    int bins = 0;
    if (eq == std::string::npos || !absl::SimpleAtoi(b.substr(eq + 1), &bins) ||
        bins < 1) {
      return absl::InvalidArgumentError(
          absl::StrCat("--bins expects column=count, got '", b, "'"));
    }
    hints[b.substr(0, eq)] = ColumnHint{ColumnHint::Kind::kNumericBinned, bins};
  }
  return LoadCsv(o.data, hints);
}

absl::StatusOr<size_t> ResolveAttribute(const Dataset& d,
                                        const std::string& ref) {
  for (size_t a = 0; a < d.num_attributes(); ++a) {
    if (d.attribute(a).name == ref) return a;
  }
  size_t index = 0;
  if (absl::SimpleAtoi(ref, &index) && index < d.num_attributes()) {
    return index;
  }
  return absl::InvalidArgumentError(
      absl::StrCat("no attribute named or indexed '", ref, "'"));
}

Json UnitsBlock(LeakageUnit unit) {
  return Json{{"leakage", UnitName(unit)},
              {"relaxation", "probability"},
              {"epsilon", "nats"},
              {"p_value", "probability"},
              {"entropy", "nats"}};
}

absl::StatusOr<Outcome> AnalyzeMatrix(const Options& o) {
  ASSIGN_OR_RETURN(Dataset d, LoadData(o));
  ASSIGN_OR_RETURN(LeakageUnit unit, ParseUnit(o.units));
  RETURN_IF_ERROR(ValidateBudget(BudgetParams{o.epsilon, o.delta}));
  if (o.engine != "bound" && o.engine != "grr" && o.engine != "exp") {
    return absl::InvalidArgumentError("--engine must be bound, grr or exp");
  }
  const size_t n = d.num_attributes();
  std::vector<std::string> names;
  for (const Attribute& a : d.schema()) names.push_back(a.name);
  CplMatrix matrix(names);
  Json metrics = Json::array();
  for (size_t i = 0; i < n; ++i) {
    for (size_t j = 0; j < n; ++j) {
      if (i == j) continue;
      ASSIGN_OR_RETURN(JointDistribution joint, EmpiricalJoint(d, i, j));
      ConditionalDistribution cond =
          ConditionalFromJoint(joint, ConditionOn::kRows);
      LeakagePair entry;
      if (cond.num_present() >= 2) {
        if (o.engine == "bound") {
          ASSIGN_OR_RETURN(BoundedCplResult r,
                           ComputeCplBound(cond, {o.epsilon, o.delta}));
          entry = LeakagePair{r.leakage, r.relaxation};
        } else {
          ASSIGN_OR_RETURN(MechanismKind kind, ParseMechanismKind(o.engine));
          ASSIGN_OR_RETURN(
              MechanismSpec spec,
              MechanismSpec::Create(
                  kind, o.epsilon,
                  static_cast<int>(d.attribute(j).alphabet.size())));
          ASSIGN_OR_RETURN(TransitionMatrix trans, TransitionMatrixFor(spec));
          ASSIGN_OR_RETURN(ExactCplResult r, ComputeExactCpl(cond, trans));
          entry = LeakagePair{r.leakage, 0.0, r.infinite};
        }
      }
      matrix.Set(i, j, entry);
      if (i < j) {
        ASSIGN_OR_RETURN(MetricReport m, ComputeMetrics(joint));
        Json row = ToJson(m);
        metrics.push_back(
            Json{{"a", names[i]}, {"b", names[j]}, {"metrics", row}});
      }
    }
  }
  Json tpl = Json::array();
  for (size_t i = 0; i < n; ++i) {
    ASSIGN_OR_RETURN(LeakagePair p,
                     TplFromMatrix(matrix, i, LeakagePair{o.epsilon, o.delta}));
    tpl.push_back(Json{{"attribute", names[i]},
                       {"leakage", ConvertLeakage(p.leakage, unit)},
                       {"relaxation", p.relaxation},
                       {"infinite", p.infinite},
                       {"relaxation_overflow", p.relaxation_overflow}});
  }
  ASSIGN_OR_RETURN(double total, Tcpl(matrix));
  Outcome out;
  out.config =
      Json{{"data", o.data},   {"bins", o.bins},     {"epsilon", o.epsilon},
           {"delta", o.delta}, {"engine", o.engine}, {"units", o.units}};
  out.result =
      Json{{"matrix", CplMatrixToJson(matrix, unit)},
           {"tcpl", std::isinf(total) ? Json(nullptr)
                                      : Json(ConvertLeakage(total, unit))},
           {"tcpl_infinite", std::isinf(total)},
           {"tpl_upper_bound", std::move(tpl)},
           {"metrics", std::move(metrics)}};
  return out;
}

absl::StatusOr<ConditionalDistribution> LoadCond(const Options& o) {
  if (o.cond.empty()) return absl::InvalidArgumentError("--cond is required");
  ASSIGN_OR_RETURN(Json json, ReadJsonFile(o.cond));
  ASSIGN_OR_RETURN(ConditionOn direction, ParseDirection(o.direction));
  return ConditionalFromJson(json, direction);
}

absl::StatusOr<Outcome> AnalyzeExact(const Options& o) {
  ASSIGN_OR_RETURN(ConditionalDistribution cond, LoadCond(o));
  ASSIGN_OR_RETURN(LeakageUnit unit, ParseUnit(o.units));
  ASSIGN_OR_RETURN(MechanismKind kind, ParseMechanismKind(o.mechanism));
  const int k = o.k > 0 ? o.k : static_cast<int>(cond.num_cols());
  ASSIGN_OR_RETURN(MechanismSpec spec,
                   MechanismSpec::Create(kind, o.epsilon, k));
  ASSIGN_OR_RETURN(TransitionMatrix trans, TransitionMatrixFor(spec));
  ASSIGN_OR_RETURN(ExactCplResult r, ComputeExactCpl(cond, trans));
  Outcome out;
  out.config = Json{{"cond", o.cond},
                    {"direction", o.direction},
                    {"mechanism", ToJson(spec)},
                    {"units", o.units}};
  Json result = ToJson(r, cond, unit);
  out.result =
      Json{{"leakage_" + std::string(UnitName(unit)), result["leakage"]},
           {"witness", result["witness"]},
           {"infinite", r.infinite}};
  if (result.contains("infinite_witness")) {
    out.result["infinite_witness"] = result["infinite_witness"];
  }
  return out;
}

absl::StatusOr<Outcome> AnalyzeBound(const Options& o) {
  ASSIGN_OR_RETURN(ConditionalDistribution cond, LoadCond(o));
  ASSIGN_OR_RETURN(LeakageUnit unit, ParseUnit(o.units));
  ASSIGN_OR_RETURN(BoundedCplResult r,
                   ComputeCplBound(cond, BudgetParams{o.epsilon, o.delta}));
  ASSIGN_OR_RETURN(CplLimit limit, ComputeCplLimit(cond));
  auto attainable = IsMaxAttainable(cond);
  Json result = ToJson(r, cond, unit);
  Outcome out;
  out.config = Json{{"cond", o.cond},
                    {"direction", o.direction},
                    {"epsilon", o.epsilon},
                    {"delta", o.delta},
                    {"units", o.units}};
  out.result =
      Json{{"leakage_" + std::string(UnitName(unit)), result["leakage"]},
           {"relaxation", result["relaxation"]},
           {"subset", result["subset"]},
           {"A", result["A"]},
           {"B", result["B"]},
           {"witness_pair", result["witness_pair"]},
           {"limit", limit.infinite ? Json(nullptr)
                                    : Json(ConvertLeakage(limit.value, unit))},
           {"limit_infinite", limit.infinite},
           {"max_attainable", attainable.has_value()}};
  return out;
}

absl::StatusOr<std::vector<MechanismSpec>> UniformSpecs(const Dataset& d,
                                                        MechanismKind kind,
                                                        double epsilon) {
  std::vector<MechanismSpec> specs;
  for (const Attribute& a : d.schema()) {
    ASSIGN_OR_RETURN(MechanismSpec spec,
                     MechanismSpec::Create(
                         kind, epsilon, static_cast<int>(a.alphabet.size())));
    specs.push_back(spec);
  }
  return specs;
}

absl::StatusOr<Outcome> Estimate(const Options& o, uint64_t seed) {
  ASSIGN_OR_RETURN(Dataset d, LoadData(o));
  ASSIGN_OR_RETURN(LeakageUnit unit, ParseUnit(o.units));
  ASSIGN_OR_RETURN(MechanismKind kind, ParseMechanismKind(o.mechanism));
  ASSIGN_OR_RETURN(size_t target, ResolveAttribute(d, o.target));
  std::vector<size_t> neighbors;
  for (const std::string& ref : o.neighbors) {
    ASSIGN_OR_RETURN(size_t z, ResolveAttribute(d, ref));
    neighbors.push_back(z);
  }
  if (o.neighbors.empty()) {
    for (size_t a = 0; a < d.num_attributes(); ++a) {
      if (a != target) neighbors.push_back(a);
    }
  }
  EstimationConfig config{o.expansion, o.surrogates, o.alpha, seed, o.threads};
  RETURN_IF_ERROR(ValidateConfig(config));
  ASSIGN_OR_RETURN(std::vector<MechanismSpec> specs,
                   UniformSpecs(d, kind, o.epsilon));
  ASSIGN_OR_RETURN(Dataset perturbed, PerturbDataset(d, specs, config));
  Json names = Json::array();
  for (size_t z : neighbors) names.push_back(d.attribute(z).name);
  Outcome out;
  out.config = Json{{"data", o.data},
                    {"bins", o.bins},
                    {"mechanism", o.mechanism},
                    {"epsilon", o.epsilon},
                    {"target", d.attribute(target).name},
                    {"neighbors", names},
                    {"r", o.expansion},
                    {"surrogates", o.surrogates},
                    {"alpha", o.alpha},
                    {"tpl", o.tpl},
                    {"units", o.units}};
  out.result = Json::object();
  out.result["rows_perturbed"] = perturbed.num_records();
  if (!neighbors.empty()) {
    ASSIGN_OR_RETURN(
        StatisticalCplResult cpl,
        EstimateStatisticalCpl(perturbed, d, target, neighbors, config));
    out.result["cpl"] = ToJson(cpl, unit);
  }
  if (o.tpl) {
    ASSIGN_OR_RETURN(
        StatisticalCplResult tpl,
        EstimateStatisticalTpl(perturbed, d, target, config, neighbors));
    out.result["tpl"] = ToJson(tpl, unit);
  }
  return out;
}

absl::StatusOr<Outcome> BenchmarkAnalyzers(const Options& o, uint64_t seed) {
  ASSIGN_OR_RETURN(Dataset d, LoadData(o));
  ASSIGN_OR_RETURN(ReferenceSource ref, ParseReferenceSource(o.reference));
  EstimationConfig config{o.expansion, 1, 0.05, seed, o.threads};
  ASSIGN_OR_RETURN(std::vector<AnalyzerPoint> points,
                   AnalyzerBenchmark(d, o.epsilons, ref, o.thresholds, config));
  Json rows = Json::array();
  for (const AnalyzerPoint& p : points) {
    Json row{{"analyzer", p.analyzer}, {"epsilon", p.epsilon}};
    row.update(ToJson(p.point));
    rows.push_back(std::move(row));
  }
  Outcome out;
  out.config = Json{{"data", o.data},
                    {"bins", o.bins},
                    {"epsilons", o.epsilons},
                    {"reference", o.reference},
                    {"thresholds", o.thresholds},
                    {"r", o.expansion}};
  out.result = Json{{"points", std::move(rows)}};
  return out;
}

absl::StatusOr<Outcome> BenchmarkUtility(const Options& o, uint64_t seed) {
  ASSIGN_OR_RETURN(Dataset d, LoadData(o));
  std::vector<MechanismKind> kinds;
  for (const std::string& m : o.mechanisms) {
    ASSIGN_OR_RETURN(MechanismKind kind, ParseMechanismKind(m));
    kinds.push_back(kind);
  }
  if (kinds.empty())
    kinds.assign(std::begin(kAllMechanisms), std::end(kAllMechanisms));
  UtilityCplSource source;
  if (o.cpl_source == "exact") {
    source = UtilityCplSource::kExactWhenAvailable;
  } else if (o.cpl_source == "statistical") {
    source = UtilityCplSource::kStatistical;
  } else {
    return absl::InvalidArgumentError(
        "--cpl-source must be exact or statistical");
  }
  EstimationConfig config{o.expansion, 1, 0.05, seed, o.threads};
  ASSIGN_OR_RETURN(std::vector<UtilityPoint> points,
                   UtilityBenchmark(d, kinds, o.epsilons, source, config));
  Json rows = Json::array();
  Json names = Json::array();
  for (MechanismKind k : kinds) names.push_back(MechanismName(k));
  for (const UtilityPoint& p : points) {
    Json row{{"mechanism", MechanismName(p.mechanism)}, {"epsilon", p.epsilon}};
    row.update(ToJson(p.report));
    rows.push_back(std::move(row));
  }
  Outcome out;
  out.config = Json{{"data", o.data},
                    {"bins", o.bins},
                    {"epsilons", o.epsilons},
                    {"mechanisms", names},
                    {"cpl_source", o.cpl_source},
                    {"r", o.expansion}};
  out.result = Json{{"points", std::move(rows)}};
  return out;
}

absl::StatusOr<Outcome> CalibrateCommand(const Options& o) {
  ASSIGN_OR_RETURN(Dataset d, LoadData(o));
  CalibrationEngine engine;
  if (o.engine == "bound") {
    engine = CalibrationEngine::kBound;
  } else if (o.engine == "grr") {
    engine = CalibrationEngine::kExactGrr;
  } else {
    return absl::InvalidArgumentError("--engine must be bound or grr");
  }
  ASSIGN_OR_RETURN(PairwiseConditionals conds,
                   PairwiseConditionals::FromDataset(d));
  ASSIGN_OR_RETURN(CalibrationResult r,
                   Calibrate(conds, o.budget, o.step, engine, o.threads));
  Outcome out;
  out.config = Json{{"data", o.data},
                    {"bins", o.bins},
                    {"budget", o.budget},
                    {"step", o.step},
                    {"engine", o.engine}};
  out.result = ToJson(r);
  out.result["worst_attribute_name"] = d.attribute(r.worst_attribute).name;
  out.result["spl_epsilon"] = o.budget / d.num_attributes();
  if (r.infeasible) out.exit_code = kExitInfeasible;
  return out;
}

absl::StatusOr<Outcome> Fixtures(const Options& o, uint64_t seed) {
  std::error_code ec;
  std::filesystem::create_directories(o.out_dir, ec);
  if (ec) {
    return absl::InvalidArgumentError(
        absl::StrCat("cannot create ", o.out_dir, ": ", ec.message()));
  }
  ASSIGN_OR_RETURN(std::vector<NamedFixture> fixtures, AllFixtures(seed));
  Json files = Json::array();
  for (const NamedFixture& f : fixtures) {
    const std::string path =
        (std::filesystem::path(o.out_dir) / (f.name + ".csv")).string();
    RETURN_IF_ERROR(WriteCsv(f.data, path));
    files.push_back(Json{
        {"name", f.name},
        {"path", path},
        {"records", f.data.num_records()},
        {"attributes", f.data.num_attributes()},
        {"fnv1a64", absl::StrFormat("%016x", Fnv1a64(FormatCsv(f.data)))}});
  }
  Outcome out;
  out.config = Json{{"out_dir", o.out_dir}};
  out.result = Json{{"seed", seed}, {"files", std::move(files)}};
  return out;
}

std::string ErrorJson(absl::StatusCode code, const std::string& message) {
  return Json{{"error", Json{{"code", absl::StatusCodeToString(code)},
                             {"message", message}}}}
      .dump();
}

}  // namespace

int RunCli(const std::vector<std::string>& args, std::ostream& out,
           std::ostream& err) {
  const auto start = std::chrono::steady_clock::now();
  Options o;
  CLI::App app{"Correlation-induced privacy leakage toolkit", "cpl-kit"};
  app.require_subcommand(1);
  app.add_option("--seed", o.seed,
                 "Root seed (fallback: CPL_KIT_SEED, else 0)");
  app.add_option("--threads", o.threads, "Worker threads (0 = all cores)");

  auto add_data = [&](CLI::App* c) {
    c->add_option("--data", o.data, "CSV with a header row")->required();
    c->add_option("--bins", o.bins, "Numeric column to bin, as column=count")
        ->delimiter(',');
  };
  auto add_out = [&](CLI::App* c) {
    c->add_option("--out", o.out_path, "Also write the JSON to this file");
  };

  CLI::App* analyze = app.add_subcommand("analyze", "Analytic CPL");
  analyze->require_subcommand(1);
  CLI::App* matrix = analyze->add_subcommand("matrix", "Pairwise CPL matrix");
  add_data(matrix);
  matrix->add_option("--epsilon", o.epsilon, "Per-attribute budget");
  matrix->add_option("--delta", o.delta, "Per-attribute delta");
  matrix->add_option("--engine", o.engine, "bound, grr or exp");
  matrix->add_option("--units", o.units, "nats or bits");
  add_out(matrix);
  CLI::App* exact = analyze->add_subcommand("exact", "Exact CPL (GRR / EXP)");
  exact->add_option("--cond", o.cond, "Conditional or joint JSON")->required();
  exact->add_option("--direction", o.direction,
                    "For joint input: condition on rows or columns");
  exact->add_option("--mechanism", o.mechanism, "grr or exp");
  exact->add_option("--epsilon", o.epsilon, "Neighbour budget");
  exact->add_option("--k", o.k, "Neighbour domain size (default: columns)");
  exact->add_option("--units", o.units, "nats or bits");
  add_out(exact);
  CLI::App* bound = analyze->add_subcommand("bound", "CPL upper bound");
  bound->add_option("--cond", o.cond, "Conditional or joint JSON")->required();
  bound->add_option("--direction", o.direction,
                    "For joint input: condition on rows or columns");
  bound->add_option("--epsilon", o.epsilon, "Neighbour budget");
  bound->add_option("--delta", o.delta, "Neighbour delta");
  bound->add_option("--units", o.units, "nats or bits");
  add_out(bound);

  CLI::App* estimate = app.add_subcommand("estimate", "Statistical CPL");
  add_data(estimate);
  estimate->add_option("--mechanism", o.mechanism, "Mechanism for all columns");
  estimate->add_option("--epsilon", o.epsilon, "Per-attribute budget");
  estimate->add_option("--target", o.target, "Target attribute name or index");
  estimate
      ->add_option("--neighbors", o.neighbors,
                   "Neighbour names or indices (default: all others)")
      ->delimiter(',');
  estimate->add_option("--r", o.expansion, "Expansion factor");
  estimate->add_option("--surrogates", o.surrogates, "Permutation surrogates");
  estimate->add_option("--alpha", o.alpha, "Significance level");
  estimate->add_flag("--tpl", o.tpl, "Also estimate total leakage");
  estimate->add_option("--units", o.units, "nats or bits");
  add_out(estimate);

  CLI::App* benchmark = app.add_subcommand("benchmark", "Benchmarks");
  benchmark->require_subcommand(1);
  CLI::App* analyzers =
      benchmark->add_subcommand("analyzers", "Undershoot / overshoot");
  add_data(analyzers);
  analyzers->add_option("--epsilons", o.epsilons, "Budgets")->delimiter(',');
  analyzers->add_option("--reference", o.reference,
                        "bound, grr, exp or statistical");
  analyzers->add_option("--thresholds", o.thresholds, "GRF thresholds")
      ->delimiter(',');
  analyzers->add_option("--r", o.expansion, "Expansion for statistical");
  add_out(analyzers);
  CLI::App* utility = benchmark->add_subcommand("utility", "Privacy-utility");
  add_data(utility);
  utility->add_option("--epsilons", o.epsilons, "Budgets")->delimiter(',');
  utility->add_option("--mechanisms", o.mechanisms, "Default: all eight")
      ->delimiter(',');
  utility->add_option("--cpl-source", o.cpl_source, "exact or statistical");
  utility->add_option("--r", o.expansion, "Expansion for statistical");
  add_out(utility);

  CLI::App* calibrate = app.add_subcommand("calibrate", "Budget calibration");
  add_data(calibrate);
  calibrate->add_option("--budget", o.budget, "Target total leakage")
      ->required();
  calibrate->add_option("--step", o.step, "Search step");
  calibrate->add_option("--engine", o.engine, "bound or grr");
  add_out(calibrate);

  CLI::App* fixtures = app.add_subcommand("fixtures", "Write fixture CSVs");
  fixtures->add_option("--out", o.out_dir, "Output directory");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << ErrorJson(absl::StatusCode::kInvalidArgument, e.what()) << "\n";
    return kExitInputError;
  }

  absl::StatusOr<uint64_t> seed = ResolveSeed(o);
  absl::StatusOr<Outcome> outcome =
      seed.ok() ? absl::StatusOr<Outcome>() : seed.status();
  std::string command;
  if (seed.ok()) {
    if (matrix->parsed()) {
      command = "analyze matrix";
      outcome = AnalyzeMatrix(o);
    } else if (exact->parsed()) {
      command = "analyze exact";
      outcome = AnalyzeExact(o);
    } else if (bound->parsed()) {
      command = "analyze bound";
      outcome = AnalyzeBound(o);
    } else if (estimate->parsed()) {
      command = "estimate";
      outcome = Estimate(o, *seed);
    } else if (analyzers->parsed()) {
      command = "benchmark analyzers";
      outcome = BenchmarkAnalyzers(o, *seed);
    } else if (utility->parsed()) {
      command = "benchmark utility";
      outcome = BenchmarkUtility(o, *seed);
    } else if (calibrate->parsed()) {
      command = "calibrate";
      outcome = CalibrateCommand(o);
    } else if (fixtures->parsed()) {
      command = "fixtures";
      outcome = Fixtures(o, *seed);
    }
  }
  if (!outcome.ok()) {
    err << ErrorJson(outcome.status().code(),
                     std::string(outcome.status().message()))
        << "\n";
    return kExitInputError;
  }

  const double wall =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
          .count();
  Json config = outcome->config;
  config["seed"] = *seed;
  config["threads"] = o.threads;
  Json payload{
      {"manifest",
       Json{{"command", command},
            {"argv", args},
            {"seed", *seed},
            {"config_digest", absl::StrFormat("%016x", Fnv1a64(config.dump()))},
            {"version", kToolVersion},
            {"wall_time_seconds", wall}}},
      {"schema",
       Json{{"units", UnitsBlock(o.units == "bits" ? LeakageUnit::kBits
                                                   : LeakageUnit::kNats)}}},
      {"config", config},
      {"result", outcome->result}};
  const std::string text = payload.dump(2) + "\n";
  if (!o.out_path.empty() && !fixtures->parsed()) {
    std::ofstream file(o.out_path);
    if (!file) {
      err << ErrorJson(absl::StatusCode::kInvalidArgument,
                       absl::StrCat("cannot write ", o.out_path))
          << "\n";
      return kExitInputError;
    }
    file << text;
  }
  out << text;
  return outcome->exit_code;
}

}  // namespace cplkit
