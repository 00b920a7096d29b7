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

#include "cplkit/benchmarks.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <mutex>
#include <numeric>

#include "absl/strings/str_cat.h"
#include "absl/strings/str_format.h"
#include "cplkit/correlation_metrics.h"
#include "cplkit/cpl_bound.h"
#include "cplkit/cpl_exact.h"
#include "cplkit/parallel.h"
#include "cplkit/rng.h"
#include "cplkit/status_macros.h"

namespace cplkit {
namespace {

CplGrid ZeroGrid(size_t n) { return CplGrid(n, std::vector<double>(n, 0.0)); }

double GridSum(const CplGrid& grid) {
  double total = 0.0;
  for (double v : OffDiagonal(grid)) total += v;
  return total;
}

// Fills grid[i][j] for all i != j with fn(i, j), stopping at the first error.
template <typename Fn>
absl::StatusOr<CplGrid> FillGrid(size_t n, int threads, Fn fn) {
  CplGrid grid = ZeroGrid(n);
  std::mutex mu;
  absl::Status first_error;
  ParallelFor(n * n, threads, [&](size_t unit) {
    const size_t i = unit / n;
    const size_t j = unit % n;
    if (i == j) return;
    absl::StatusOr<double> v = fn(i, j);
    if (!v.ok()) {
      std::lock_guard<std::mutex> lock(mu);
      if (first_error.ok()) first_error = v.status();
      return;
    }
    grid[i][j] = *v;
  });
  RETURN_IF_ERROR(first_error);
  return grid;
}

struct UnionFind {
  explicit UnionFind(size_t n) : parent(n) {
    std::iota(parent.begin(), parent.end(), 0);
  }
  size_t Find(size_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  }
  void Union(size_t a, size_t b) { parent[Find(a)] = Find(b); }
  std::vector<size_t> parent;
};

}  // namespace

std::vector<double> OffDiagonal(const CplGrid& grid) {
  std::vector<double> out;
  for (size_t i = 0; i < grid.size(); ++i) {
    for (size_t j = 0; j < grid[i].size(); ++j) {
      if (i != j) out.push_back(grid[i][j]);
    }
  }
  return out;
}

absl::StatusOr<double> NmseCpl(const CplGrid& estimate,
                               const CplGrid& reference) {
  std::vector<double> est = OffDiagonal(estimate);
  std::vector<double> ref = OffDiagonal(reference);
  if (est.size() != ref.size() || estimate.size() != reference.size()) {
    return absl::InvalidArgumentError("CPL grids differ in size");
  }
  double num = 0.0, den = 0.0;
  for (size_t i = 0; i < est.size(); ++i) {
    num += (est[i] - ref[i]) * (est[i] - ref[i]);
    den += ref[i] * ref[i];
  }
  if (den == 0.0) {
    return num == 0.0 ? 0.0 : std::numeric_limits<double>::infinity();
  }
  return num / den;
}

const char* RegionName(Region region) {
  switch (region) {
    case Region::kP1:
      return "P1";
    case Region::kR1:
      return "R1";
    case Region::kR2:
      return "R2";
    case Region::kR3:
      return "R3";
  }
  return "?";
}

double BenchmarkPoint::DistanceFromOrigin() const {
  return std::hypot(undershoot, overshoot);
}

absl::StatusOr<BenchmarkPoint> UndershootOvershoot(
    std::span<const double> reference, std::span<const double> estimates,
    double epsilon) {
  if (reference.size() != estimates.size()) {
    return absl::InvalidArgumentError(
        absl::StrFormat("%d reference values but %d estimates",
                        reference.size(), estimates.size()));
  }
  if (reference.empty()) {
    return absl::InvalidArgumentError("need at least one pair");
  }
  if (!(epsilon > 0)) {
    return absl::InvalidArgumentError("epsilon must be > 0");
  }
  const double scale = epsilon * static_cast<double>(reference.size());
  BenchmarkPoint p;
  for (size_t i = 0; i < reference.size(); ++i) {
    double diff = reference[i] - estimates[i];
    if (diff >= 0) {
      p.undershoot += diff / scale;
    } else {
      p.overshoot += -diff / scale;
    }
  }
  const bool under = p.undershoot > kRegionTolerance;
  const bool over = p.overshoot > kRegionTolerance;
  if (!under && !over) {
    p.region = Region::kP1;
  } else if (under && !over) {
    p.region = Region::kR1;
  } else if (!under && over) {
    p.region = Region::kR2;
  } else {
    p.region = Region::kR3;
  }
  return p;
}

CplGrid SplAnlEstimates(size_t n, double epsilon) {
  CplGrid grid = ZeroGrid(n);
  for (size_t i = 0; i < n; ++i) {
    for (size_t j = 0; j < n; ++j) {
      if (i != j) grid[i][j] = epsilon;
    }
  }
  return grid;
}

absl::StatusOr<CplGrid> GrfEstimates(
    const std::vector<std::vector<double>>& pcc, double threshold,
    double epsilon) {
  if (!(threshold > 0 && threshold < 1)) {
    return absl::InvalidArgumentError("GRF threshold must lie in (0, 1)");
  }
  const size_t n = pcc.size();
  for (const auto& row : pcc) {
    if (row.size() != n) {
      return absl::InvalidArgumentError("PCC matrix must be square");
    }
  }
  UnionFind uf(n);
  for (size_t i = 0; i < n; ++i) {
    for (size_t j = i + 1; j < n; ++j) {
      if (std::abs(pcc[i][j]) >= threshold) uf.Union(i, j);
    }
  }
  CplGrid grid = ZeroGrid(n);
  for (size_t i = 0; i < n; ++i) {
    for (size_t j = 0; j < n; ++j) {
      if (i != j && uf.Find(i) == uf.Find(j)) grid[i][j] = epsilon;
    }
  }
  return grid;
}

const char* ReferenceSourceName(ReferenceSource source) {
  switch (source) {
    case ReferenceSource::kGenericBound:
      return "bound";
    case ReferenceSource::kExactGrr:
      return "grr";
    case ReferenceSource::kExactExp:
      return "exp";
    case ReferenceSource::kStatistical:
      return "statistical";
  }
  return "?";
}

absl::StatusOr<ReferenceSource> ParseReferenceSource(std::string_view name) {
  for (ReferenceSource s :
       {ReferenceSource::kGenericBound, ReferenceSource::kExactGrr,
        ReferenceSource::kExactExp, ReferenceSource::kStatistical}) {
    if (name == ReferenceSourceName(s)) return s;
  }
  return absl::InvalidArgumentError(
      absl::StrCat("unknown reference source '", std::string(name),
                   "' (expected bound, grr, exp or statistical)"));
}

absl::StatusOr<CplGrid> AnalyticCplGrid(const Dataset& dataset,
                                        ReferenceSource source,
                                        double epsilon) {
  if (source == ReferenceSource::kStatistical) {
    return absl::InvalidArgumentError(
        "the statistical source is not analytic; use ReferenceGrid");
  }
  return FillGrid(
      dataset.num_attributes(), 1,
      [&](size_t i, size_t j) -> absl::StatusOr<double> {
        ASSIGN_OR_RETURN(JointDistribution joint,
                         EmpiricalJoint(dataset, i, j));
        ConditionalDistribution cond =
            ConditionalFromJoint(joint, ConditionOn::kRows);
        // A target observed with a single value cannot be distinguished
        // from anything, so nothing leaks about it.
        if (cond.num_present() < 2) return 0.0;
        if (source == ReferenceSource::kGenericBound) {
          ASSIGN_OR_RETURN(BoundedCplResult r,
                           ComputeCplBound(cond, BudgetParams{epsilon, 0.0}));
          return r.leakage;
        }
        const MechanismKind kind = source == ReferenceSource::kExactGrr
                                       ? MechanismKind::kGrr
                                       : MechanismKind::kExp;
        const int k = static_cast<int>(dataset.attribute(j).alphabet.size());
        if (k < 2) return 0.0;
        ASSIGN_OR_RETURN(MechanismSpec spec,
                         MechanismSpec::Create(kind, epsilon, k));
        ASSIGN_OR_RETURN(TransitionMatrix trans, TransitionMatrixFor(spec));
        ASSIGN_OR_RETURN(ExactCplResult r, ComputeExactCpl(cond, trans));
        if (r.infinite) return std::numeric_limits<double>::infinity();
        return r.leakage;
      });
}

absl::StatusOr<CplGrid> StatisticalCplGrid(const Dataset& dataset,
                                           MechanismKind kind, double epsilon,
                                           const EstimationConfig& config) {
  std::vector<MechanismSpec> specs;
  for (const Attribute& a : dataset.schema()) {
    ASSIGN_OR_RETURN(MechanismSpec spec,
                     MechanismSpec::Create(
                         kind, epsilon, static_cast<int>(a.alphabet.size())));
    specs.push_back(spec);
  }
  ASSIGN_OR_RETURN(Dataset perturbed, PerturbDataset(dataset, specs, config));
  return FillGrid(dataset.num_attributes(), config.threads,
                  [&](size_t i, size_t j) -> absl::StatusOr<double> {
                    const size_t neighbors[] = {j};
                    ASSIGN_OR_RETURN(
                        LeakageEstimate est,
                        EstimateLeakage(perturbed, dataset, i, neighbors));
                    return est.leakage;
                  });
}

absl::StatusOr<CplGrid> ReferenceGrid(const Dataset& dataset,
                                      ReferenceSource source, double epsilon,
                                      const EstimationConfig& config) {
  if (source == ReferenceSource::kStatistical) {
    return StatisticalCplGrid(dataset, MechanismKind::kGrr, epsilon, config);
  }
  return AnalyticCplGrid(dataset, source, epsilon);
}

absl::StatusOr<std::vector<AnalyzerPoint>> AnalyzerBenchmark(
    const Dataset& dataset, std::span<const double> epsilons,
    ReferenceSource reference, std::span<const double> grf_thresholds,
    const EstimationConfig& config) {
  if (dataset.num_attributes() < 2) {
    return absl::InvalidArgumentError("need at least two attributes");
  }
  ASSIGN_OR_RETURN(auto pcc, PccMatrix(dataset));
  std::vector<AnalyzerPoint> out;
  for (size_t e = 0; e < epsilons.size(); ++e) {
    const double eps = epsilons[e];
    EstimationConfig cell_config = config;
    cell_config.seed = DeriveSeed(config.seed, kStageBenchmark, e);
    ASSIGN_OR_RETURN(CplGrid ref,
                     ReferenceGrid(dataset, reference, eps, cell_config));
    const std::vector<double> ref_flat = OffDiagonal(ref);

    std::vector<std::pair<std::string, CplGrid>> analyzers;
    analyzers.emplace_back("SPL-ANL",
                           SplAnlEstimates(dataset.num_attributes(), eps));
    for (double thr : grf_thresholds) {
      ASSIGN_OR_RETURN(CplGrid g, GrfEstimates(pcc, thr, eps));
      analyzers.emplace_back(absl::StrFormat("GRF-%g", thr), std::move(g));
    }
    ASSIGN_OR_RETURN(
        CplGrid bound,
        AnalyticCplGrid(dataset, ReferenceSource::kGenericBound, eps));
    analyzers.emplace_back("ALG2", std::move(bound));
    ASSIGN_OR_RETURN(CplGrid grr,
                     AnalyticCplGrid(dataset, ReferenceSource::kExactGrr, eps));
    analyzers.emplace_back("GRR-ANL", std::move(grr));
    ASSIGN_OR_RETURN(CplGrid exp,
                     AnalyticCplGrid(dataset, ReferenceSource::kExactExp, eps));
    analyzers.emplace_back("EXP-ANL", std::move(exp));

    for (const auto& [name, grid] : analyzers) {
      ASSIGN_OR_RETURN(BenchmarkPoint p,
                       UndershootOvershoot(ref_flat, OffDiagonal(grid), eps));
      out.push_back(AnalyzerPoint{name, eps, p});
    }
  }
  return out;
}

absl::StatusOr<std::vector<UtilityPoint>> UtilityBenchmark(
    const Dataset& dataset, std::span<const MechanismKind> mechanisms,
    std::span<const double> epsilons, UtilityCplSource source,
    const EstimationConfig& config) {
  RETURN_IF_ERROR(ValidateConfig(config));
  const size_t n = dataset.num_records();
  const size_t attrs = dataset.num_attributes();
  if (n == 0 || attrs == 0) {
    return absl::InvalidArgumentError("dataset is empty");
  }
  std::vector<ProbabilityVector> truth(attrs);
  double truth_sq = 0.0;
  for (size_t a = 0; a < attrs; ++a) {
    truth[a].assign(dataset.attribute(a).alphabet.size(), 0.0);
    for (SymbolIndex v : dataset.column(a)) truth[a][v] += 1.0 / n;
    for (double f : truth[a]) truth_sq += f * f;
  }

  std::vector<double> bound_tcpl(epsilons.size(), 0.0);
  if (attrs >= 2) {
    for (size_t e = 0; e < epsilons.size(); ++e) {
      ASSIGN_OR_RETURN(CplGrid bound,
                       AnalyticCplGrid(dataset, ReferenceSource::kGenericBound,
                                       epsilons[e]));
      bound_tcpl[e] = GridSum(bound);
    }
  }

  std::vector<UtilityPoint> out;
  for (size_t m = 0; m < mechanisms.size(); ++m) {
    for (size_t e = 0; e < epsilons.size(); ++e) {
      const MechanismKind kind = mechanisms[m];
      const double eps = epsilons[e];
      const uint64_t cell = m * epsilons.size() + e;
      UtilityReport report;
      double err_sq = 0.0;
      size_t mismatches = 0;
      for (size_t a = 0; a < attrs; ++a) {
        const int k = static_cast<int>(dataset.attribute(a).alphabet.size());
        ASSIGN_OR_RETURN(MechanismSpec spec,
                         MechanismSpec::Create(kind, eps, k));
        Rng rng(DeriveSeed(config.seed, kStageBenchmark, cell, a));
        std::vector<PerturbedOutput> outputs;
        outputs.reserve(n);
        for (SymbolIndex v : dataset.column(a)) {
          ASSIGN_OR_RETURN(PerturbedOutput o, Perturb(spec, v, rng));
          ASSIGN_OR_RETURN(SymbolIndex decoded, Decode(spec, o, rng));
          if (decoded != v) ++mismatches;
          outputs.push_back(std::move(o));
        }
        ASSIGN_OR_RETURN(ProbabilityVector est,
                         EstimateFrequencies(spec, outputs));
        for (int v = 0; v < k; ++v) {
          err_sq += (est[v] - truth[a][v]) * (est[v] - truth[a][v]);
        }
      }
      report.freq_nmse = err_sq / truth_sq;
      report.zero_one_error =
          static_cast<double>(mismatches) / static_cast<double>(n * attrs);
      if (attrs >= 2) {
        const bool exact =
            source == UtilityCplSource::kExactWhenAvailable &&
            (kind == MechanismKind::kGrr || kind == MechanismKind::kExp);
        CplGrid grid;
        if (exact) {
          ASSIGN_OR_RETURN(grid,
                           AnalyticCplGrid(dataset,
                                           kind == MechanismKind::kGrr
                                               ? ReferenceSource::kExactGrr
                                               : ReferenceSource::kExactExp,
                                           eps));
        } else {
          EstimationConfig cell_config = config;
          cell_config.seed =
              DeriveSeed(config.seed, kStageBenchmark, cell, attrs);
          ASSIGN_OR_RETURN(grid,
                           StatisticalCplGrid(dataset, kind, eps, cell_config));
        }
        report.tcpl = GridSum(grid);
        report.tcpl_bound = bound_tcpl[e];
        report.norm_tcpl =
            report.tcpl_bound > 0 ? report.tcpl / report.tcpl_bound : 0.0;
      }
      out.push_back(UtilityPoint{kind, eps, report});
    }
  }
  return out;
}

}  // namespace cplkit
