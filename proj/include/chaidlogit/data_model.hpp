// Copyright 2026 The chaidlogit Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef CHAIDLOGIT_DATA_MODEL_HPP_
#define CHAIDLOGIT_DATA_MODEL_HPP_

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace chaidlogit {

// Stable column identity. Ids of file columns follow header order; derived
// columns receive fresh ids above every existing one. Ids survive row and
// column filtering, so they double as the deterministic tie-break key.
enum class ColumnId : std::uint32_t {};

constexpr std::uint32_t to_index(ColumnId id) { return static_cast<std::uint32_t>(id); }
constexpr ColumnId column_id(std::uint32_t index) { return static_cast<ColumnId>(index); }

enum class ColumnKind { kNumeric, kInteraction };

class Column {
 public:
  // Absent optionals are missing cells.
  Column(ColumnId id, std::string name, const std::vector<std::optional<double>>& values);

  static Column dense(ColumnId id, std::string name, std::vector<double> values);
  static Column interaction(ColumnId id, ColumnId parent_a, ColumnId parent_b, std::string name,
                            const std::vector<std::optional<double>>& values);

  ColumnId id() const { return id_; }
  const std::string& name() const { return name_; }
  ColumnKind kind() const { return kind_; }
  std::size_t size() const { return values_.size(); }
  std::size_t missing_count() const { return missing_count_; }
  std::optional<std::pair<ColumnId, ColumnId>> parents() const { return parents_; }

  bool is_present(std::size_t row) const { return present_[row] != 0; }
  std::optional<double> at(std::size_t row) const;

  // Values with missing cells holding 0.0; pair with is_present().
  std::span<const double> raw_values() const { return values_; }

  // Throws if any cell is missing.
  std::span<const double> dense_values() const;

  Column select_rows(std::span<const std::size_t> rows) const;
  Column with_id(ColumnId id) const;
  // Fills every missing cell with `fill`; present cells are untouched.
  Column filled(double fill) const;

  friend bool operator==(const Column& a, const Column& b);

 private:
  Column() = default;

  ColumnId id_{};
  std::string name_;
  ColumnKind kind_ = ColumnKind::kNumeric;
  std::optional<std::pair<ColumnId, ColumnId>> parents_;
  std::vector<double> values_;
  std::vector<std::uint8_t> present_;
  std::size_t missing_count_ = 0;
};

// Column-oriented table of numeric predictors plus one binary target. Values
// are immutable; every transformation returns a new Dataset.
class Dataset {
 public:
  Dataset(std::string name, std::vector<Column> columns, ColumnId target);

  const std::string& name() const { return name_; }
  std::size_t n_rows() const { return n_rows_; }
  const std::vector<Column>& columns() const { return columns_; }

  bool contains(ColumnId id) const;
  const Column& column(ColumnId id) const;
  const Column* find(std::string_view name) const;
  const Column& column_named(std::string_view name) const;

  ColumnId target_id() const { return target_; }
  const Column& target() const { return column(target_); }

  // Non-target columns in storage order.
  std::vector<ColumnId> predictor_ids() const;
  ColumnId next_column_id() const;

  // Target as 0/1 bytes; throws if any entry is missing or non-binary.
  std::vector<std::uint8_t> binary_target() const;

  Dataset select_rows(std::span<const std::size_t> rows) const;
  // Keeps the listed predictors (in their current order) and the target.
  Dataset restrict_columns(std::span<const ColumnId> keep) const;
  Dataset with_column(Column column) const;
  Dataset with_columns(std::vector<Column> replacement) const;

  friend bool operator==(const Dataset& a, const Dataset& b);

 private:
  std::size_t index_of(ColumnId id) const;

  std::string name_;
  std::size_t n_rows_ = 0;
  std::vector<Column> columns_;
  ColumnId target_{};
};

struct ConfusionCounts {
  std::size_t tp = 0;
  std::size_t tn = 0;
  std::size_t fp = 0;
  std::size_t fn = 0;

  std::size_t total() const { return tp + tn + fp + fn; }
  friend bool operator==(const ConfusionCounts&, const ConfusionCounts&) = default;
};

// CSV: first row header, comma separated, empty cell = missing. Every cell
// must parse as a decimal number; the target may only hold 0, 1 or nothing.
Dataset parse_csv(std::istream& in, std::string_view target_name, std::string dataset_name);
Dataset load_csv(const std::filesystem::path& path, std::string_view target_name);

void write_csv(const Dataset& ds, std::ostream& out);
void write_csv(const Dataset& ds, const std::filesystem::path& path);

// Row-wise product of two non-derived predictors, named "<a>*<b>", missing
// wherever either parent is missing. The new column takes ds.next_column_id().
Column make_interaction_column(const Dataset& ds, ColumnId i, ColumnId j);

// Shortest decimal text that parses back to the same double.
std::string format_double(double value);

}  // namespace chaidlogit

#endif  // CHAIDLOGIT_DATA_MODEL_HPP_
