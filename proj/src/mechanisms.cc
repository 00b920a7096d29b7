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

#include "cplkit/mechanisms.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "absl/strings/str_cat.h"
#include "absl/strings/str_format.h"
#include "cplkit/status_macros.h"

namespace cplkit {
namespace {

// Draws a symbol uniformly from {0..n-1} \ {excluded}.
uint64_t UniformOther(Rng& rng, uint64_t n, uint64_t excluded) {
  uint64_t o = rng.Below(n - 1);
  return o >= excluded ? o + 1 : o;
}

absl::Status CheckShape(const MechanismSpec& spec,
                        const PerturbedOutput& output) {
  const size_t k = static_cast<size_t>(spec.k());
  bool ok = false;
  switch (spec.kind()) {
    case MechanismKind::kGrr:
    case MechanismKind::kExp:
      ok = std::holds_alternative<SymbolReport>(output) &&
           std::get<SymbolReport>(output).value < k;
      break;
    case MechanismKind::kRappor:
    case MechanismKind::kOue:
      ok = std::holds_alternative<BitVectorReport>(output) &&
           std::get<BitVectorReport>(output).bits.size() == k;
      break;
    case MechanismKind::kBlh:
    case MechanismKind::kOlh:
      ok = std::holds_alternative<HashedReport>(output) &&
           std::get<HashedReport>(output).value <
               static_cast<uint32_t>(spec.hash_range());
      break;
    case MechanismKind::kShe:
      ok = std::holds_alternative<RealVectorReport>(output) &&
           std::get<RealVectorReport>(output).values.size() == k;
      break;
    case MechanismKind::kSs: {
      ok = std::holds_alternative<SubsetReport>(output);
      if (ok) {
        for (SymbolIndex v : std::get<SubsetReport>(output).members) {
          ok = ok && v < k;
        }
      }
      break;
    }
  }
  if (!ok) {
    return absl::InvalidArgumentError(
        absl::StrCat("output shape does not match mechanism ",
                     MechanismName(spec.kind()), " with k=", spec.k()));
  }
  return absl::OkStatus();
}

uint64_t Mix64(uint64_t x) {
  x ^= x >> 33;
  x *= 0xff51afd7ed558ccdULL;
  x ^= x >> 33;
  x *= 0xc4ceb9fe1a85ec53ULL;
  x ^= x >> 33;
  return x;
}

// Debiases support counts given P(support | true value) = p and
// P(support | other value) = q.
ProbabilityVector DebiasCounts(std::span<const double> counts, double n,
                               double p, double q) {
  ProbabilityVector f(counts.size());
  if (std::abs(p - q) < 1e-15) {
    std::fill(f.begin(), f.end(), 1.0 / counts.size());
    return f;
  }
  for (size_t v = 0; v < counts.size(); ++v) {
    f[v] = (counts[v] / n - q) / (p - q);
  }
  return f;
}

ProbabilityVector ClipAndNormalize(ProbabilityVector f) {
  double sum = 0;
  for (double& v : f) {
    v = std::clamp(v, 0.0, 1.0);
    sum += v;
  }
  if (sum <= 0) {
    std::fill(f.begin(), f.end(), 1.0 / f.size());
    return f;
  }
  for (double& v : f) v /= sum;
  return f;
}

}  // namespace

const char* MechanismName(MechanismKind kind) {
  switch (kind) {
    case MechanismKind::kGrr:
      return "grr";
    case MechanismKind::kExp:
      return "exp";
    case MechanismKind::kRappor:
      return "rappor";
    case MechanismKind::kOue:
      return "oue";
    case MechanismKind::kBlh:
      return "blh";
    case MechanismKind::kOlh:
      return "olh";
    case MechanismKind::kShe:
      return "she";
    case MechanismKind::kSs:
      return "ss";
  }
  return "unknown";
}

absl::StatusOr<MechanismKind> ParseMechanismKind(std::string_view name) {
  std::string lower(name);
  std::transform(lower.begin(), lower.end(), lower.begin(),
                 [](unsigned char c) { return std::tolower(c); });
  for (MechanismKind kind : kAllMechanisms) {
    if (lower == MechanismName(kind)) return kind;
  }
  return absl::InvalidArgumentError(
      absl::StrCat("unknown mechanism '", std::string(name), "'"));
}

absl::StatusOr<MechanismSpec> MechanismSpec::Create(MechanismKind kind,
                                                    double epsilon, int k,
                                                    double delta,
                                                    RapporParams rappor) {
  if (!(epsilon >= 0) || !std::isfinite(epsilon)) {
    return absl::InvalidArgumentError("epsilon must be finite and >= 0");
  }
  if (!(delta >= 0 && delta < 1)) {
    return absl::InvalidArgumentError("delta must lie in [0, 1)");
  }
  const bool needs_two = kind == MechanismKind::kGrr ||
                         kind == MechanismKind::kExp ||
                         kind == MechanismKind::kSs;
  if (k < (needs_two ? 2 : 1)) {
    return absl::InvalidArgumentError(
        absl::StrFormat("%s needs a domain of size >= %d, got %d",
                        MechanismName(kind), needs_two ? 2 : 1, k));
  }
  if (kind == MechanismKind::kRappor) {
    auto in_unit = [](double x) { return x >= 0 && x <= 1; };
    if (!in_unit(rappor.f) || !in_unit(rappor.p) || !in_unit(rappor.q)) {
      return absl::InvalidArgumentError("RAPPOR f, p, q must lie in [0, 1]");
    }
  }
  if (kind == MechanismKind::kOlh &&
      std::round(std::exp(epsilon)) + 1 >
          static_cast<double>(std::numeric_limits<int32_t>::max())) {
    return absl::InvalidArgumentError(
        "OLH hash range round(e^eps)+1 overflows; use eps < 21");
  }
  return MechanismSpec(kind, epsilon, delta, k, rappor);
}

int MechanismSpec::hash_range() const {
  if (kind_ == MechanismKind::kBlh) return 2;
  return static_cast<int>(std::round(std::exp(epsilon_))) + 1;
}

int MechanismSpec::subset_size() const {
  int w = static_cast<int>(std::floor(k_ / (std::exp(epsilon_) + 1.0)));
  return std::max(1, w);
}

double MechanismSpec::keep_probability() const {
  switch (kind_) {
    case MechanismKind::kGrr: {
      double e = std::exp(epsilon_);
      return e / (k_ - 1 + e);
    }
    case MechanismKind::kExp: {
      double e = std::exp(epsilon_ / 2);
      return e / (k_ - 1 + e);
    }
    case MechanismKind::kSs: {
      double w = subset_size();
      double we = w * std::exp(epsilon_);
      return we / (we + k_ - w);
    }
    case MechanismKind::kBlh:
    case MechanismKind::kOlh: {
      double e = std::exp(epsilon_);
      return e / (e + hash_range() - 1);
    }
    default:
      return std::numeric_limits<double>::quiet_NaN();
  }
}

uint32_t LocalHash(uint64_t key, SymbolIndex value, int g) {
  uint64_t h = Mix64(key ^ Mix64(0x9e3779b97f4a7c15ULL * (value + 1ULL)));
  return static_cast<uint32_t>(h % static_cast<uint64_t>(g));
}

absl::StatusOr<PerturbedOutput> Perturb(const MechanismSpec& spec,
                                        SymbolIndex value, Rng& rng) {
  const int k = spec.k();
  if (value >= static_cast<SymbolIndex>(k)) {
    return absl::OutOfRangeError(
        absl::StrFormat("value %d outside domain of size %d", value, k));
  }
  switch (spec.kind()) {
    case MechanismKind::kGrr:
    case MechanismKind::kExp: {
      if (rng.Bernoulli(spec.keep_probability())) return SymbolReport{value};
      return SymbolReport{
          static_cast<SymbolIndex>(UniformOther(rng, k, value))};
    }
    case MechanismKind::kRappor: {
      const RapporParams& r = spec.rappor();
      BitVectorReport out{std::vector<uint8_t>(k, 0)};
      for (int i = 0; i < k; ++i) {
        bool bit = static_cast<SymbolIndex>(i) == value;
        // Permanent randomized response.
        if (rng.Bernoulli(r.f)) bit = rng.Bernoulli(0.5);
        // Instantaneous randomized response.
        out.bits[i] = rng.Bernoulli(bit ? r.q : r.p) ? 1 : 0;
      }
      return out;
    }
    case MechanismKind::kOue: {
      const double q = 1.0 / (std::exp(spec.epsilon()) + 1.0);
      BitVectorReport out{std::vector<uint8_t>(k, 0)};
      for (int i = 0; i < k; ++i) {
        bool one = static_cast<SymbolIndex>(i) == value;
        out.bits[i] = rng.Bernoulli(one ? 0.5 : q) ? 1 : 0;
      }
      return out;
    }
    case MechanismKind::kBlh:
    case MechanismKind::kOlh: {
      const int g = spec.hash_range();
      const uint64_t key = rng.NextU64();
      const uint32_t h = LocalHash(key, value, g);
      uint32_t report = h;
      if (!rng.Bernoulli(spec.keep_probability())) {
        report = static_cast<uint32_t>(UniformOther(rng, g, h));
      }
      return HashedReport{key, report};
    }
    case MechanismKind::kShe: {
      if (spec.epsilon() <= 0) {
        return absl::InvalidArgumentError(
            "SHE needs epsilon > 0: Laplace scale 2/epsilon is undefined");
      }
      const double b = 2.0 / spec.epsilon();
      RealVectorReport out{std::vector<double>(k)};
      for (int i = 0; i < k; ++i) {
        out.values[i] =
            (static_cast<SymbolIndex>(i) == value ? 1.0 : 0.0) + rng.Laplace(b);
      }
      return out;
    }
    case MechanismKind::kSs: {
      const int w = spec.subset_size();
      const bool include = rng.Bernoulli(spec.keep_probability());
      std::vector<SymbolIndex> others;
      others.reserve(k - 1);
      for (int i = 0; i < k; ++i) {
        if (static_cast<SymbolIndex>(i) != value) others.push_back(i);
      }
      const size_t take = std::min<size_t>(include ? w - 1 : w, others.size());
      // Partial Fisher-Yates: the first `take` slots are a uniform sample.
      for (size_t i = 0; i < take; ++i) {
        size_t j = i + static_cast<size_t>(rng.Below(others.size() - i));
        std::swap(others[i], others[j]);
      }
      SubsetReport out;
      if (include) out.members.push_back(value);
      out.members.insert(out.members.end(), others.begin(),
                         others.begin() + take);
      std::sort(out.members.begin(), out.members.end());
      return out;
    }
  }
  return absl::InternalError("unhandled mechanism kind");
}

absl::StatusOr<TransitionMatrix> TransitionMatrix::Create(
    size_t inputs, size_t outputs, std::vector<double> values) {
  if (inputs == 0 || outputs == 0 || values.size() != inputs * outputs) {
    return absl::InvalidArgumentError("transition matrix shape mismatch");
  }
  for (size_t i = 0; i < inputs; ++i) {
    double sum = 0;
    for (size_t j = 0; j < outputs; ++j) {
      double v = values[i * outputs + j];
      if (!(v >= 0 && v <= 1)) {
        return absl::InvalidArgumentError(
            "transition probabilities must lie in [0, 1]");
      }
      sum += v;
    }
    if (std::abs(sum - 1) > kNormalizationTolerance) {
      return absl::InvalidArgumentError(
          absl::StrFormat("transition row %d sums to %.12g, not 1", i, sum));
    }
  }
  return TransitionMatrix(inputs, outputs, std::move(values));
}

bool TransitionMatrix::SatisfiesPureLdp(double epsilon) const {
  const double bound = std::exp(epsilon) * (1 + 1e-9);
  for (size_t y = 0; y < outputs_; ++y) {
    double lo = std::numeric_limits<double>::infinity();
    double hi = 0;
    for (size_t x = 0; x < inputs_; ++x) {
      lo = std::min(lo, at(x, y));
      hi = std::max(hi, at(x, y));
    }
    if (hi == 0) continue;
    if (lo == 0 || hi / lo > bound) return false;
  }
  return true;
}

absl::StatusOr<TransitionMatrix> TransitionMatrixFor(
    const MechanismSpec& spec) {
  if (spec.kind() != MechanismKind::kGrr &&
      spec.kind() != MechanismKind::kExp) {
    return absl::UnimplementedError(absl::StrCat(
        "no tractable transition matrix for ", MechanismName(spec.kind()),
        "; use the epsilon-only bound or the statistical estimator"));
  }
  const size_t k = static_cast<size_t>(spec.k());
  const double keep = spec.keep_probability();
  const double flip = (1.0 - keep) / static_cast<double>(k - 1);
  std::vector<double> values(k * k, flip);
  for (size_t i = 0; i < k; ++i) values[i * k + i] = keep;
  return TransitionMatrix::Create(k, k, std::move(values));
}

absl::StatusOr<SymbolIndex> Decode(
    const MechanismSpec& spec, const PerturbedOutput& output, Rng& rng,
    const std::optional<ProbabilityVector>& prior) {
  RETURN_IF_ERROR(CheckShape(spec, output));
  const int k = spec.k();
  auto uniform_over = [&rng](const std::vector<SymbolIndex>& set) {
    return set[static_cast<size_t>(rng.Below(set.size()))];
  };
  switch (spec.kind()) {
    case MechanismKind::kGrr:
    case MechanismKind::kExp:
      return std::get<SymbolReport>(output).value;
    case MechanismKind::kRappor:
    case MechanismKind::kOue: {
      const auto& bits = std::get<BitVectorReport>(output).bits;
      std::vector<SymbolIndex> set;
      for (int i = 0; i < k; ++i) {
        if (bits[i]) set.push_back(i);
      }
      if (set.empty()) return static_cast<SymbolIndex>(rng.Below(k));
      return uniform_over(set);
    }
    case MechanismKind::kBlh:
    case MechanismKind::kOlh: {
      const auto& report = std::get<HashedReport>(output);
      const int g = spec.hash_range();
      std::vector<SymbolIndex> set;
      for (int v = 0; v < k; ++v) {
        if (LocalHash(report.hash_key, v, g) == report.value) set.push_back(v);
      }
      if (set.empty()) return static_cast<SymbolIndex>(rng.Below(k));
      return uniform_over(set);
    }
    case MechanismKind::kSs: {
      const auto& members = std::get<SubsetReport>(output).members;
      if (members.empty()) return static_cast<SymbolIndex>(rng.Below(k));
      return uniform_over(members);
    }
    case MechanismKind::kShe: {
      if (spec.epsilon() <= 0) {
        return absl::InvalidArgumentError(
            "SHE decoding needs epsilon > 0: likelihood scale 2/epsilon is "
            "undefined");
      }
      if (prior.has_value() && prior->size() != static_cast<size_t>(k)) {
        return absl::InvalidArgumentError("SHE prior has the wrong length");
      }
      const auto& y = std::get<RealVectorReport>(output).values;
      const double b = 2.0 / spec.epsilon();
      double l1_zero = 0;
      for (double v : y) l1_zero += std::abs(v);
      // Log posterior up to a constant: ln P(v) - ||y - e_v||_1 / b.
      double best = -std::numeric_limits<double>::infinity();
      SymbolIndex arg = 0;
      for (int v = 0; v < k; ++v) {
        double l1 = l1_zero - std::abs(y[v]) + std::abs(y[v] - 1.0);
        double log_prior = prior.has_value()
                               ? std::log((*prior)[v])
                               : -std::log(static_cast<double>(k));
        double score = log_prior - l1 / b;
        if (score > best) {
          best = score;
          arg = v;
        }
      }
      return arg;
    }
  }
  return absl::InternalError("unhandled mechanism kind");
}

absl::StatusOr<ProbabilityVector> EstimateFrequencies(
    const MechanismSpec& spec, std::span<const PerturbedOutput> outputs) {
  if (outputs.empty()) {
    return absl::InvalidArgumentError("no outputs to estimate from");
  }
  for (const PerturbedOutput& out : outputs) {
    RETURN_IF_ERROR(CheckShape(spec, out));
  }
  const size_t k = static_cast<size_t>(spec.k());
  const double n = static_cast<double>(outputs.size());
  std::vector<double> counts(k, 0.0);
  switch (spec.kind()) {
    case MechanismKind::kGrr:
    case MechanismKind::kExp: {
      for (const auto& out : outputs)
        ++counts[std::get<SymbolReport>(out).value];
      const double p = spec.keep_probability();
      return ClipAndNormalize(DebiasCounts(counts, n, p, (1 - p) / (k - 1)));
    }
    case MechanismKind::kRappor: {
      for (const auto& out : outputs) {
        const auto& bits = std::get<BitVectorReport>(out).bits;
        for (size_t i = 0; i < k; ++i) counts[i] += bits[i];
      }
      const RapporParams& r = spec.rappor();
      const double p1 = (1 - r.f / 2) * r.q + (r.f / 2) * r.p;
      const double p0 = (r.f / 2) * r.q + (1 - r.f / 2) * r.p;
      return ClipAndNormalize(DebiasCounts(counts, n, p1, p0));
    }
    case MechanismKind::kOue: {
      for (const auto& out : outputs) {
        const auto& bits = std::get<BitVectorReport>(out).bits;
        for (size_t i = 0; i < k; ++i) counts[i] += bits[i];
      }
      const double q = 1.0 / (std::exp(spec.epsilon()) + 1.0);
      return ClipAndNormalize(DebiasCounts(counts, n, 0.5, q));
    }
    case MechanismKind::kBlh:
    case MechanismKind::kOlh: {
      const int g = spec.hash_range();
      for (const auto& out : outputs) {
        const auto& report = std::get<HashedReport>(out);
        for (size_t v = 0; v < k; ++v) {
          if (LocalHash(report.hash_key, static_cast<SymbolIndex>(v), g) ==
              report.value) {
            counts[v] += 1;
          }
        }
      }
      return ClipAndNormalize(
          DebiasCounts(counts, n, spec.keep_probability(), 1.0 / g));
    }
    case MechanismKind::kShe: {
      ProbabilityVector mean(k, 0.0);
      for (const auto& out : outputs) {
        const auto& y = std::get<RealVectorReport>(out).values;
        for (size_t i = 0; i < k; ++i) mean[i] += y[i];
      }
      for (double& m : mean) m /= n;
      return ClipAndNormalize(std::move(mean));
    }
    case MechanismKind::kSs: {
      for (const auto& out : outputs) {
        for (SymbolIndex v : std::get<SubsetReport>(out).members)
          counts[v] += 1;
      }
      const double p = spec.keep_probability();
      const double w = spec.subset_size();
      const double q = (p * (w - 1) + (1 - p) * w) / (k - 1);
      return ClipAndNormalize(DebiasCounts(counts, n, p, q));
    }
  }
  return absl::InternalError("unhandled mechanism kind");
}

}  // namespace cplkit
