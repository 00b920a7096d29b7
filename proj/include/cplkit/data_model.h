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

#ifndef CPLKIT_DATA_MODEL_H_
#define CPLKIT_DATA_MODEL_H_

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "absl/status/status.h"
#include "absl/status/statusor.h"

namespace cplkit {

using SymbolIndex = uint32_t;

// Probability mass over an alphabet, indexed by symbol.
using ProbabilityVector = std::vector<double>;

// Tolerance used when checking that probabilities sum to one.
inline constexpr double kNormalizationTolerance = 1e-9;

// Ordered set of distinct category labels.
class Alphabet {
 public:
  static absl::StatusOr<Alphabet> Create(std::vector<std::string> symbols);

  size_t size() const { return symbols_.size(); }
  const std::string& symbol(size_t i) const { return symbols_[i]; }
  const std::vector<std::string>& symbols() const { return symbols_; }
  std::optional<SymbolIndex> IndexOf(std::string_view symbol) const;

  friend bool operator==(const Alphabet& a, const Alphabet& b) {
    return a.symbols_ == b.symbols_;
  }

 private:
  explicit Alphabet(std::vector<std::string> symbols);

  std::vector<std::string> symbols_;
  std::unordered_map<std::string, SymbolIndex> index_;
};

struct Attribute {
  std::string name;
  Alphabet alphabet;

  friend bool operator==(const Attribute&, const Attribute&) = default;
};

// Table of categorical attributes. Cells hold symbol indices into the
// attribute's alphabet; storage is column-major.
class Dataset {
 public:
  static absl::StatusOr<Dataset> Create(
      std::vector<Attribute> schema,
      std::vector<std::vector<SymbolIndex>> columns);

  size_t num_records() const { return num_records_; }
  size_t num_attributes() const { return schema_.size(); }
  const std::vector<Attribute>& schema() const { return schema_; }
  const Attribute& attribute(size_t i) const { return schema_[i]; }
  std::span<const SymbolIndex> column(size_t i) const { return columns_[i]; }
  SymbolIndex cell(size_t row, size_t col) const { return columns_[col][row]; }

  friend bool operator==(const Dataset&, const Dataset&) = default;

 private:
  Dataset(std::vector<Attribute> schema,
          std::vector<std::vector<SymbolIndex>> columns, size_t num_records)
      : schema_(std::move(schema)),
        columns_(std::move(columns)),
        num_records_(num_records) {}

  std::vector<Attribute> schema_;
  std::vector<std::vector<SymbolIndex>> columns_;
  size_t num_records_ = 0;
};

// Per-column ingestion declaration for LoadCsv.
struct ColumnHint {
  enum class Kind { kCategorical, kNumericBinned };
  Kind kind = Kind::kCategorical;
  int bins = 1;
};

// Reads a comma-separated file with a mandatory header row. Every column is
// categorical with first-appearance symbol order unless `hints` declares it
// numeric, in which case it goes through BinNumeric.
absl::StatusOr<Dataset> LoadCsv(
    const std::string& path,
    const std::map<std::string, ColumnHint>& hints = {});

// Parses CSV text; LoadCsv reads the file and delegates here.
absl::StatusOr<Dataset> ParseCsv(
    std::string_view text, const std::map<std::string, ColumnHint>& hints = {});

// Writes symbols (not indices). LoadCsv reads the result back with the same
// cells; alphabets come back in first-appearance order.
absl::Status WriteCsv(const Dataset& dataset, const std::string& path);
std::string FormatCsv(const Dataset& dataset);

struct BinnedColumn {
  std::vector<SymbolIndex> indices;
  Alphabet alphabet;
};

// Equal-width binning over [min, max]; the maximum maps to the last bin.
// When every value is equal the result has a single bin regardless of
// `bins`.
absl::StatusOr<BinnedColumn> BinNumeric(std::span<const double> values,
                                        int bins);

// Replicates the whole table r times (row order: the original table, then
// the original table again, ...). Record i of the result is record i % N of
// the input.
absl::StatusOr<Dataset> ExpandDataset(const Dataset& dataset, int r);

// Nonnegative matrix summing to one; rows label attribute A, columns B.
class JointDistribution {
 public:
  static absl::StatusOr<JointDistribution> Create(
      size_t rows, size_t cols, std::vector<double> values,
      std::vector<std::string> row_labels = {},
      std::vector<std::string> col_labels = {});

  size_t rows() const { return rows_; }
  size_t cols() const { return cols_; }
  double at(size_t i, size_t j) const { return values_[i * cols_ + j]; }
  const std::vector<double>& values() const { return values_; }
  const std::vector<std::string>& row_labels() const { return row_labels_; }
  const std::vector<std::string>& col_labels() const { return col_labels_; }

  ProbabilityVector RowMarginal() const;
  ProbabilityVector ColMarginal() const;
  JointDistribution Transposed() const;

 private:
  JointDistribution(size_t rows, size_t cols, std::vector<double> values,
                    std::vector<std::string> row_labels,
                    std::vector<std::string> col_labels)
      : rows_(rows),
        cols_(cols),
        values_(std::move(values)),
        row_labels_(std::move(row_labels)),
        col_labels_(std::move(col_labels)) {}

  size_t rows_ = 0;
  size_t cols_ = 0;
  std::vector<double> values_;
  std::vector<std::string> row_labels_;
  std::vector<std::string> col_labels_;
};

// Entry (a, b) = count(A = a, B = b) / N for attributes i (rows) and j.
absl::StatusOr<JointDistribution> EmpiricalJoint(const Dataset& dataset,
                                                 size_t i, size_t j);

enum class ConditionOn {
  kRows,     // P(col | row)
  kColumns,  // P(row | col), rows of the result indexed by the column symbol
};

// Row-stochastic matrix P(column symbol | row symbol). Rows whose
// conditioning symbol has no mass are flagged absent and hold zeros; they
// never take part in a supremum.
class ConditionalDistribution {
 public:
  // Present rows must sum to 1 within kNormalizationTolerance and are then
  // renormalized exactly. An all-zero row is flagged absent.
  static absl::StatusOr<ConditionalDistribution> Create(
      size_t rows, size_t cols, std::vector<double> values,
      std::vector<std::string> row_labels = {},
      std::vector<std::string> col_labels = {});

  size_t num_rows() const { return rows_; }
  size_t num_cols() const { return cols_; }
  double at(size_t i, size_t j) const { return values_[i * cols_ + j]; }
  std::span<const double> row(size_t i) const {
    return std::span<const double>(values_).subspan(i * cols_, cols_);
  }
  bool present(size_t i) const { return present_[i]; }
  size_t num_present() const;
  const std::vector<std::string>& row_labels() const { return row_labels_; }
  const std::vector<std::string>& col_labels() const { return col_labels_; }

  // Reorders columns; entry (i, perm[j]) of the result is entry (i, j).
  ConditionalDistribution PermuteColumns(std::span<const size_t> perm) const;

 private:
  ConditionalDistribution() = default;
  friend ConditionalDistribution ConditionalFromJoint(
      const JointDistribution& joint, ConditionOn direction);

  size_t rows_ = 0;
  size_t cols_ = 0;
  std::vector<double> values_;
  std::vector<bool> present_;
  std::vector<std::string> row_labels_;
  std::vector<std::string> col_labels_;
};

ConditionalDistribution ConditionalFromJoint(const JointDistribution& joint,
                                             ConditionOn direction);

}  // namespace cplkit

#endif  // CPLKIT_DATA_MODEL_H_
