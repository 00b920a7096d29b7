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

#include "cplkit/data_model.h"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <numeric>
#include <sstream>

#include "absl/strings/str_cat.h"
#include "absl/strings/str_format.h"
#include "cplkit/status_macros.h"

namespace cplkit {

Alphabet::Alphabet(std::vector<std::string> symbols)
    : symbols_(std::move(symbols)) {
  for (size_t i = 0; i < symbols_.size(); ++i) {
    index_.emplace(symbols_[i], static_cast<SymbolIndex>(i));
  }
}

absl::StatusOr<Alphabet> Alphabet::Create(std::vector<std::string> symbols) {
  if (symbols.empty()) {
    return absl::InvalidArgumentError("alphabet must not be empty");
  }
  Alphabet alphabet(std::move(symbols));
  if (alphabet.index_.size() != alphabet.symbols_.size()) {
    return absl::InvalidArgumentError("alphabet has duplicate symbols");
  }
  return alphabet;
}

std::optional<SymbolIndex> Alphabet::IndexOf(std::string_view symbol) const {
  auto it = index_.find(std::string(symbol));
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

absl::StatusOr<Dataset> Dataset::Create(
    std::vector<Attribute> schema,
    std::vector<std::vector<SymbolIndex>> columns) {
  if (schema.size() != columns.size()) {
    return absl::InvalidArgumentError(
        absl::StrFormat("schema has %d attributes but %d columns given",
                        schema.size(), columns.size()));
  }
  size_t n = columns.empty() ? 0 : columns[0].size();
  for (size_t c = 0; c < columns.size(); ++c) {
    if (columns[c].size() != n) {
      return absl::InvalidArgumentError(
          absl::StrFormat("column '%s' has %d records, expected %d",
                          schema[c].name, columns[c].size(), n));
    }
    const size_t t = schema[c].alphabet.size();
    for (SymbolIndex v : columns[c]) {
      if (v >= t) {
        return absl::InvalidArgumentError(absl::StrFormat(
            "column '%s' holds index %d outside its alphabet of size %d",
            schema[c].name, v, t));
      }
    }
  }
  return Dataset(std::move(schema), std::move(columns), n);
}

namespace {

// Splits one CSV line. Double-quoted fields may contain commas and "" escapes.
absl::StatusOr<std::vector<std::string>> SplitCsvLine(std::string_view line,
                                                      size_t line_no) {
  std::vector<std::string> fields;
  std::string field;
  bool quoted = false;
  for (size_t i = 0; i < line.size(); ++i) {
    char ch = line[i];
    if (quoted) {
      if (ch == '"') {
        if (i + 1 < line.size() && line[i + 1] == '"') {
          field.push_back('"');
          ++i;
        } else {
          quoted = false;
        }
      } else {
        field.push_back(ch);
      }
    } else if (ch == '"') {
      quoted = true;
    } else if (ch == ',') {
      fields.push_back(std::move(field));
      field.clear();
    } else {
      field.push_back(ch);
    }
  }
  if (quoted) {
    return absl::InvalidArgumentError(
        absl::StrFormat("line %d: unterminated quoted field", line_no));
  }
  fields.push_back(std::move(field));
  return fields;
}

std::string QuoteCsv(const std::string& s) {
  if (s.find_first_of(",\"\n\r") == std::string::npos) return s;
  std::string out = "\"";
  for (char ch : s) {
    if (ch == '"') out.push_back('"');
    out.push_back(ch);
  }
  out.push_back('"');
  return out;
}

std::string FormatBinLabel(double lo, double hi, bool last) {
  return absl::StrFormat(last ? "[%g,%g]" : "[%g,%g)", lo, hi);
}

}  // namespace

absl::StatusOr<Dataset> ParseCsv(
    std::string_view text, const std::map<std::string, ColumnHint>& hints) {
  std::vector<std::vector<std::string>> rows;
  size_t line_no = 0;
  size_t pos = 0;
  while (pos <= text.size()) {
    size_t end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(pos, end - pos);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    ++line_no;
    pos = end + 1;
    if (line.empty()) {
      if (end == text.size()) break;
      continue;
    }
    ASSIGN_OR_RETURN(auto fields, SplitCsvLine(line, line_no));
    if (!rows.empty() && fields.size() != rows[0].size()) {
      return absl::InvalidArgumentError(
          absl::StrFormat("ragged row at line %d: %d fields, header has %d",
                          line_no, fields.size(), rows[0].size()));
    }
    rows.push_back(std::move(fields));
  }
  if (rows.empty()) return absl::InvalidArgumentError("missing header row");
  const std::vector<std::string>& header = rows[0];
  const size_t n = rows.size() - 1;
  std::vector<Attribute> schema;
  std::vector<std::vector<SymbolIndex>> columns;
  for (size_t c = 0; c < header.size(); ++c) {
    if (n == 0) {
      return absl::InvalidArgumentError(
          absl::StrCat("empty column '", header[c], "'"));
    }
    auto hint = hints.find(header[c]);
    if (hint != hints.end() &&
        hint->second.kind == ColumnHint::Kind::kNumericBinned) {
      std::vector<double> values(n);
      for (size_t r = 0; r < n; ++r) {
        const std::string& s = rows[r + 1][c];
        char* endp = nullptr;
        values[r] = std::strtod(s.c_str(), &endp);
        if (s.empty() || endp != s.c_str() + s.size()) {
          return absl::InvalidArgumentError(absl::StrFormat(
              "column '%s' row %d: '%s' is not numeric", header[c], r + 1, s));
        }
      }
      ASSIGN_OR_RETURN(BinnedColumn binned,
                       BinNumeric(values, hint->second.bins));
      schema.push_back({header[c], std::move(binned.alphabet)});
      columns.push_back(std::move(binned.indices));
      continue;
    }
    std::vector<std::string> symbols;
    std::unordered_map<std::string, SymbolIndex> seen;
    std::vector<SymbolIndex> column(n);
    for (size_t r = 0; r < n; ++r) {
      const std::string& s = rows[r + 1][c];
      auto [it, inserted] =
          seen.emplace(s, static_cast<SymbolIndex>(symbols.size()));
      if (inserted) symbols.push_back(s);
      column[r] = it->second;
    }
    ASSIGN_OR_RETURN(Alphabet alphabet, Alphabet::Create(std::move(symbols)));
    schema.push_back({header[c], std::move(alphabet)});
    columns.push_back(std::move(column));
  }
  return Dataset::Create(std::move(schema), std::move(columns));
}

absl::StatusOr<Dataset> LoadCsv(
    const std::string& path, const std::map<std::string, ColumnHint>& hints) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return absl::NotFoundError(absl::StrCat("cannot open ", path));
  std::stringstream buffer;
  buffer << in.rdbuf();
  return ParseCsv(buffer.str(), hints);
}

std::string FormatCsv(const Dataset& dataset) {
  std::string out;
  for (size_t c = 0; c < dataset.num_attributes(); ++c) {
    if (c > 0) out.push_back(',');
    out += QuoteCsv(dataset.attribute(c).name);
  }
  out.push_back('\n');
  for (size_t r = 0; r < dataset.num_records(); ++r) {
    for (size_t c = 0; c < dataset.num_attributes(); ++c) {
      if (c > 0) out.push_back(',');
      out += QuoteCsv(dataset.attribute(c).alphabet.symbol(dataset.cell(r, c)));
    }
    out.push_back('\n');
  }
  return out;
}

absl::Status WriteCsv(const Dataset& dataset, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) return absl::UnavailableError(absl::StrCat("cannot write ", path));
  out << FormatCsv(dataset);
  if (!out) return absl::DataLossError(absl::StrCat("write failed: ", path));
  return absl::OkStatus();
}

absl::StatusOr<BinnedColumn> BinNumeric(std::span<const double> values,
                                        int bins) {
  if (bins < 1) return absl::InvalidArgumentError("bin count must be >= 1");
  if (values.empty()) return absl::InvalidArgumentError("no values to bin");
  for (double v : values) {
    if (!std::isfinite(v)) {
      return absl::InvalidArgumentError("cannot bin a non-finite value");
    }
  }
  auto [min_it, max_it] = std::minmax_element(values.begin(), values.end());
  const double lo = *min_it;
  const double hi = *max_it;
  if (lo == hi) {
    // Degenerate: a single bin.
    ASSIGN_OR_RETURN(Alphabet alphabet,
                     Alphabet::Create({FormatBinLabel(lo, hi, true)}));
    return BinnedColumn{std::vector<SymbolIndex>(values.size(), 0),
                        std::move(alphabet)};
  }
  const double width = (hi - lo) / bins;
  std::vector<SymbolIndex> indices(values.size());
  for (size_t i = 0; i < values.size(); ++i) {
    auto b = static_cast<int>(std::floor((values[i] - lo) / width));
    indices[i] = static_cast<SymbolIndex>(std::clamp(b, 0, bins - 1));
  }
  std::vector<std::string> labels;
  for (int b = 0; b < bins; ++b) {
    double edge_hi = b + 1 == bins ? hi : lo + width * (b + 1);
    labels.push_back(FormatBinLabel(lo + width * b, edge_hi, b + 1 == bins));
  }
  ASSIGN_OR_RETURN(Alphabet alphabet, Alphabet::Create(std::move(labels)));
  return BinnedColumn{std::move(indices), std::move(alphabet)};
}

absl::StatusOr<Dataset> ExpandDataset(const Dataset& dataset, int r) {
  if (r < 1) return absl::InvalidArgumentError("expansion factor must be >= 1");
  std::vector<std::vector<SymbolIndex>> columns;
  columns.reserve(dataset.num_attributes());
  for (size_t c = 0; c < dataset.num_attributes(); ++c) {
    std::span<const SymbolIndex> src = dataset.column(c);
    std::vector<SymbolIndex> col;
    col.reserve(src.size() * r);
    for (int k = 0; k < r; ++k) col.insert(col.end(), src.begin(), src.end());
    columns.push_back(std::move(col));
  }
  return Dataset::Create(dataset.schema(), std::move(columns));
}

absl::StatusOr<JointDistribution> JointDistribution::Create(
    size_t rows, size_t cols, std::vector<double> values,
    std::vector<std::string> row_labels, std::vector<std::string> col_labels) {
  if (rows == 0 || cols == 0 || values.size() != rows * cols) {
    return absl::InvalidArgumentError("joint distribution shape mismatch");
  }
  double total = 0;
  for (double v : values) {
    if (!(v >= 0) || !std::isfinite(v)) {
      return absl::InvalidArgumentError(
          "joint distribution entries must be finite and nonnegative");
    }
    total += v;
  }
  if (std::abs(total - 1.0) > kNormalizationTolerance) {
    return absl::InvalidArgumentError(
        absl::StrFormat("joint distribution sums to %.12g, not 1", total));
  }
  if (row_labels.empty()) {
    for (size_t i = 0; i < rows; ++i) row_labels.push_back(absl::StrCat(i));
  }
  if (col_labels.empty()) {
    for (size_t j = 0; j < cols; ++j) col_labels.push_back(absl::StrCat(j));
  }
  if (row_labels.size() != rows || col_labels.size() != cols) {
    return absl::InvalidArgumentError(
        "joint distribution label count mismatch");
  }
  return JointDistribution(rows, cols, std::move(values), std::move(row_labels),
                           std::move(col_labels));
}

ProbabilityVector JointDistribution::RowMarginal() const {
  ProbabilityVector m(rows_, 0.0);
  for (size_t i = 0; i < rows_; ++i) {
    for (size_t j = 0; j < cols_; ++j) m[i] += at(i, j);
  }
  return m;
}

ProbabilityVector JointDistribution::ColMarginal() const {
  ProbabilityVector m(cols_, 0.0);
  for (size_t i = 0; i < rows_; ++i) {
    for (size_t j = 0; j < cols_; ++j) m[j] += at(i, j);
  }
  return m;
}

JointDistribution JointDistribution::Transposed() const {
  std::vector<double> t(values_.size());
  for (size_t i = 0; i < rows_; ++i) {
    for (size_t j = 0; j < cols_; ++j) t[j * rows_ + i] = at(i, j);
  }
  return JointDistribution(cols_, rows_, std::move(t), col_labels_,
                           row_labels_);
}

absl::StatusOr<JointDistribution> EmpiricalJoint(const Dataset& dataset,
                                                 size_t i, size_t j) {
  if (i >= dataset.num_attributes() || j >= dataset.num_attributes()) {
    return absl::OutOfRangeError("attribute index out of range");
  }
  if (i == j) {
    return absl::InvalidArgumentError("joint needs two distinct attributes");
  }
  if (dataset.num_records() == 0) {
    return absl::FailedPreconditionError("dataset is empty");
  }
  const size_t m = dataset.attribute(i).alphabet.size();
  const size_t t = dataset.attribute(j).alphabet.size();
  std::vector<uint64_t> counts(m * t, 0);
  std::span<const SymbolIndex> a = dataset.column(i);
  std::span<const SymbolIndex> b = dataset.column(j);
  for (size_t r = 0; r < a.size(); ++r) ++counts[a[r] * t + b[r]];
  const double n = static_cast<double>(dataset.num_records());
  std::vector<double> values(m * t);
  for (size_t k = 0; k < values.size(); ++k) values[k] = counts[k] / n;
  return JointDistribution::Create(m, t, std::move(values),
                                   dataset.attribute(i).alphabet.symbols(),
                                   dataset.attribute(j).alphabet.symbols());
}

absl::StatusOr<ConditionalDistribution> ConditionalDistribution::Create(
    size_t rows, size_t cols, std::vector<double> values,
    std::vector<std::string> row_labels, std::vector<std::string> col_labels) {
  if (rows == 0 || cols == 0 || values.size() != rows * cols) {
    return absl::InvalidArgumentError(
        "conditional distribution shape mismatch");
  }
  ConditionalDistribution cond;
  cond.rows_ = rows;
  cond.cols_ = cols;
  cond.present_.assign(rows, false);
  for (size_t i = 0; i < rows; ++i) {
    double sum = 0;
    for (size_t j = 0; j < cols; ++j) {
      double v = values[i * cols + j];
      if (!(v >= 0) || !std::isfinite(v)) {
        return absl::InvalidArgumentError(absl::StrFormat(
            "conditional row %d has a negative or non-finite entry", i));
      }
      sum += v;
    }
    if (sum == 0) continue;
    if (std::abs(sum - 1.0) > kNormalizationTolerance) {
      return absl::InvalidArgumentError(
          absl::StrFormat("conditional row %d sums to %.12g, not 1", i, sum));
    }
    for (size_t j = 0; j < cols; ++j) values[i * cols + j] /= sum;
    cond.present_[i] = true;
  }
  if (row_labels.empty()) {
    for (size_t i = 0; i < rows; ++i) row_labels.push_back(absl::StrCat(i));
  }
  if (col_labels.empty()) {
    for (size_t j = 0; j < cols; ++j) col_labels.push_back(absl::StrCat(j));
  }
  if (row_labels.size() != rows || col_labels.size() != cols) {
    return absl::InvalidArgumentError(
        "conditional distribution label count mismatch");
  }
  cond.values_ = std::move(values);
  cond.row_labels_ = std::move(row_labels);
  cond.col_labels_ = std::move(col_labels);
  return cond;
}

size_t ConditionalDistribution::num_present() const {
  return static_cast<size_t>(
      std::count(present_.begin(), present_.end(), true));
}

ConditionalDistribution ConditionalDistribution::PermuteColumns(
    std::span<const size_t> perm) const {
  ConditionalDistribution out = *this;
  for (size_t i = 0; i < rows_; ++i) {
    for (size_t j = 0; j < cols_; ++j) {
      out.values_[i * cols_ + perm[j]] = at(i, j);
    }
  }
  for (size_t j = 0; j < cols_; ++j) out.col_labels_[perm[j]] = col_labels_[j];
  return out;
}

ConditionalDistribution ConditionalFromJoint(const JointDistribution& joint,
                                             ConditionOn direction) {
  const JointDistribution oriented =
      direction == ConditionOn::kRows ? joint : joint.Transposed();
  ConditionalDistribution cond;
  cond.rows_ = oriented.rows();
  cond.cols_ = oriented.cols();
  cond.values_.assign(cond.rows_ * cond.cols_, 0.0);
  cond.present_.assign(cond.rows_, false);
  ProbabilityVector marginal = oriented.RowMarginal();
  for (size_t i = 0; i < cond.rows_; ++i) {
    if (marginal[i] <= 0) continue;
    cond.present_[i] = true;
    for (size_t j = 0; j < cond.cols_; ++j) {
      cond.values_[i * cond.cols_ + j] = oriented.at(i, j) / marginal[i];
    }
  }
  cond.row_labels_ = oriented.row_labels();
  cond.col_labels_ = oriented.col_labels();
  return cond;
}

}  // namespace cplkit
