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

#include "chaidlogit/data_model.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <unordered_set>

#include "chaidlogit/error.hpp"

namespace chaidlogit {

namespace {

constexpr std::string_view kModule = "data_model";

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

std::vector<std::string_view> split_fields(std::string_view line) {
  std::vector<std::string_view> fields;
  std::size_t start = 0;
  while (true) {
    const auto comma = line.find(',', start);
    if (comma == std::string_view::npos) {
      fields.push_back(line.substr(start));
      break;
    }
    fields.push_back(line.substr(start, comma - start));
    start = comma + 1;
  }
  return fields;
}

std::optional<double> parse_number(std::string_view cell) {
  if (!cell.empty() && cell.front() == '+') cell.remove_prefix(1);
  double value = 0.0;
  const auto* end = cell.data() + cell.size();
  const auto [ptr, ec] = std::from_chars(cell.data(), end, value);
  if (ec != std::errc() || ptr != end || !std::isfinite(value)) return std::nullopt;
  return value;
}

}  // namespace

std::string format_double(double value) {
  std::array<char, 32> buf{};
  const auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), value);
  if (ec != std::errc()) throw Error(std::string(kModule), "cannot format number");
  return std::string(buf.data(), ptr);
}

// ---------------------------------------------------------------- Column

Column::Column(ColumnId id, std::string name, const std::vector<std::optional<double>>& values)
    : id_(id), name_(std::move(name)) {
  values_.resize(values.size(), 0.0);
  present_.resize(values.size(), 0);
  for (std::size_t r = 0; r < values.size(); ++r) {
    if (values[r]) {
      values_[r] = *values[r];
      present_[r] = 1;
    } else {
      ++missing_count_;
    }
  }
}

Column Column::dense(ColumnId id, std::string name, std::vector<double> values) {
  Column c;
  c.id_ = id;
  c.name_ = std::move(name);
  c.present_.assign(values.size(), 1);
  c.values_ = std::move(values);
  return c;
}

Column Column::interaction(ColumnId id, ColumnId parent_a, ColumnId parent_b, std::string name,
                           const std::vector<std::optional<double>>& values) {
  Column c(id, std::move(name), values);
  c.kind_ = ColumnKind::kInteraction;
  c.parents_ = std::make_pair(parent_a, parent_b);
  return c;
}

std::optional<double> Column::at(std::size_t row) const {
  if (row >= values_.size()) {
    throw Error(std::string(kModule), "row " + std::to_string(row) + " out of range in column '" + name_ + "'");
  }
  if (!present_[row]) return std::nullopt;
  return values_[row];
}

std::span<const double> Column::dense_values() const {
  if (missing_count_ != 0) {
    throw Error(std::string(kModule), "column '" + name_ + "' has " + std::to_string(missing_count_) +
                                          " missing values; impute before use");
  }
  return values_;
}

Column Column::select_rows(std::span<const std::size_t> rows) const {
  Column c;
  c.id_ = id_;
  c.name_ = name_;
  c.kind_ = kind_;
  c.parents_ = parents_;
  c.values_.reserve(rows.size());
  c.present_.reserve(rows.size());
  for (const auto r : rows) {
    if (r >= values_.size()) throw Error(std::string(kModule), "row index out of range");
    c.values_.push_back(values_[r]);
    c.present_.push_back(present_[r]);
    if (!present_[r]) ++c.missing_count_;
  }
  return c;
}

Column Column::with_id(ColumnId id) const {
  Column c = *this;
  c.id_ = id;
  return c;
}

Column Column::filled(double fill) const {
  Column c = *this;
  for (std::size_t r = 0; r < c.values_.size(); ++r) {
    if (!c.present_[r]) {
      c.values_[r] = fill;
      c.present_[r] = 1;
    }
  }
  c.missing_count_ = 0;
  return c;
}

bool operator==(const Column& a, const Column& b) {
  if (a.id_ != b.id_ || a.name_ != b.name_ || a.kind_ != b.kind_ || a.parents_ != b.parents_ ||
      a.present_ != b.present_) {
    return false;
  }
  for (std::size_t r = 0; r < a.values_.size(); ++r) {
    if (a.present_[r] && a.values_[r] != b.values_[r]) return false;
  }
  return true;
}

// --------------------------------------------------------------- Dataset

Dataset::Dataset(std::string name, std::vector<Column> columns, ColumnId target)
    : name_(std::move(name)), columns_(std::move(columns)), target_(target) {
  if (columns_.empty()) throw Error(std::string(kModule), "dataset has no columns");
  n_rows_ = columns_.front().size();
  std::unordered_set<std::string> names;
  std::unordered_set<std::uint32_t> ids;
  for (const auto& c : columns_) {
    if (c.size() != n_rows_) {
      throw Error(std::string(kModule), "column '" + c.name() + "' has " + std::to_string(c.size()) +
                                            " rows, expected " + std::to_string(n_rows_));
    }
    if (!names.insert(c.name()).second) {
      throw Error(std::string(kModule), "duplicate column name '" + c.name() + "'");
    }
    if (!ids.insert(to_index(c.id())).second) {
      throw Error(std::string(kModule), "duplicate column id " + std::to_string(to_index(c.id())));
    }
  }
  if (!ids.contains(to_index(target_))) throw Error(std::string(kModule), "target column is not part of the dataset");
}

std::size_t Dataset::index_of(ColumnId id) const {
  for (std::size_t k = 0; k < columns_.size(); ++k) {
    if (columns_[k].id() == id) return k;
  }
  throw Error(std::string(kModule), "unknown column id " + std::to_string(to_index(id)));
}

bool Dataset::contains(ColumnId id) const {
  return std::any_of(columns_.begin(), columns_.end(), [id](const Column& c) { return c.id() == id; });
}

const Column& Dataset::column(ColumnId id) const { return columns_[index_of(id)]; }

const Column* Dataset::find(std::string_view name) const {
  for (const auto& c : columns_) {
    if (c.name() == name) return &c;
  }
  return nullptr;
}

const Column& Dataset::column_named(std::string_view name) const {
  const Column* c = find(name);
  if (c == nullptr) throw Error(std::string(kModule), "no column named '" + std::string(name) + "'");
  return *c;
}

std::vector<ColumnId> Dataset::predictor_ids() const {
  std::vector<ColumnId> ids;
  ids.reserve(columns_.size());
  for (const auto& c : columns_) {
    if (c.id() != target_) ids.push_back(c.id());
  }
  return ids;
}

ColumnId Dataset::next_column_id() const {
  std::uint32_t next = 0;
  for (const auto& c : columns_) next = std::max(next, to_index(c.id()) + 1);
  return column_id(next);
}

std::vector<std::uint8_t> Dataset::binary_target() const {
  const Column& t = target();
  std::vector<std::uint8_t> y(n_rows_);
  for (std::size_t r = 0; r < n_rows_; ++r) {
    const auto v = t.at(r);
    if (!v) throw Error(std::string(kModule), "target '" + t.name() + "' is missing at row " + std::to_string(r));
    if (*v != 0.0 && *v != 1.0) throw Error(std::string(kModule), "non-binary target at row " + std::to_string(r));
    y[r] = *v == 1.0 ? 1 : 0;
  }
  return y;
}

Dataset Dataset::select_rows(std::span<const std::size_t> rows) const {
  std::vector<Column> cols;
  cols.reserve(columns_.size());
  for (const auto& c : columns_) cols.push_back(c.select_rows(rows));
  return Dataset(name_, std::move(cols), target_);
}

Dataset Dataset::restrict_columns(std::span<const ColumnId> keep) const {
  std::unordered_set<std::uint32_t> wanted;
  for (const auto id : keep) {
    if (!contains(id)) throw Error(std::string(kModule), "unknown column id " + std::to_string(to_index(id)));
    wanted.insert(to_index(id));
  }
  std::vector<Column> cols;
  for (const auto& c : columns_) {
    if (c.id() == target_ || wanted.contains(to_index(c.id()))) cols.push_back(c);
  }
  return Dataset(name_, std::move(cols), target_);
}

Dataset Dataset::with_column(Column column) const {
  std::vector<Column> cols = columns_;
  cols.push_back(std::move(column));
  return Dataset(name_, std::move(cols), target_);
}

Dataset Dataset::with_columns(std::vector<Column> replacement) const {
  return Dataset(name_, std::move(replacement), target_);
}

bool operator==(const Dataset& a, const Dataset& b) {
  return a.name_ == b.name_ && a.target_ == b.target_ && a.columns_ == b.columns_;
}

// ------------------------------------------------------------------- CSV

Dataset parse_csv(std::istream& in, std::string_view target_name, std::string dataset_name) {
  std::string line;
  if (!std::getline(in, line)) throw Error(std::string(kModule), "empty CSV input (no header)");
  if (line.size() >= 3 && line.compare(0, 3, "\xEF\xBB\xBF") == 0) line.erase(0, 3);

  std::vector<std::string> header;
  for (auto f : split_fields(line)) {
    f = trim(f);
    if (f.size() >= 2 && f.front() == '"' && f.back() == '"') f = f.substr(1, f.size() - 2);
    header.emplace_back(f);
  }
  {
    std::unordered_set<std::string> seen;
    for (const auto& h : header) {
      if (h.empty()) throw Error(std::string(kModule), "empty column name in header");
      if (!seen.insert(h).second) throw Error(std::string(kModule), "duplicate column name '" + h + "'");
    }
  }
  const auto target_it = std::find(header.begin(), header.end(), target_name);
  if (target_it == header.end()) {
    throw Error(std::string(kModule), "target column '" + std::string(target_name) + "' not found in header");
  }
  const std::size_t target_col = static_cast<std::size_t>(target_it - header.begin());

  std::vector<std::vector<std::optional<double>>> cells(header.size());
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    const auto fields = split_fields(line);
    if (fields.size() != header.size()) {
      throw Error(std::string(kModule), "line " + std::to_string(line_no) + " has " +
                                            std::to_string(fields.size()) + " fields, expected " +
                                            std::to_string(header.size()));
    }
    for (std::size_t c = 0; c < fields.size(); ++c) {
      const auto cell = trim(fields[c]);
      if (cell.empty()) {
        cells[c].emplace_back();
        continue;
      }
      const auto v = parse_number(cell);
      if (!v) {
        throw Error(std::string(kModule), "non-numeric cell '" + std::string(cell) + "' at line " +
                                              std::to_string(line_no) + ", column '" + header[c] +
                                              "' (categorical columns are not supported)");
      }
      if (c == target_col && *v != 0.0 && *v != 1.0) {
        throw Error(std::string(kModule), "non-binary target value '" + std::string(cell) + "' at line " +
                                              std::to_string(line_no));
      }
      cells[c].push_back(v);
    }
  }

  std::vector<Column> columns;
  columns.reserve(header.size());
  for (std::size_t c = 0; c < header.size(); ++c) {
    columns.emplace_back(column_id(static_cast<std::uint32_t>(c)), header[c], cells[c]);
  }
  return Dataset(std::move(dataset_name), std::move(columns), column_id(static_cast<std::uint32_t>(target_col)));
}

Dataset load_csv(const std::filesystem::path& path, std::string_view target_name) {
  std::ifstream in(path);
  if (!in) throw Error(std::string(kModule), "cannot open input file '" + path.string() + "'");
  return parse_csv(in, target_name, path.stem().string());
}

void write_csv(const Dataset& ds, std::ostream& out) {
  const auto& cols = ds.columns();
  for (std::size_t c = 0; c < cols.size(); ++c) {
    if (c) out << ',';
    out << cols[c].name();
  }
  out << '\n';
  for (std::size_t r = 0; r < ds.n_rows(); ++r) {
    for (std::size_t c = 0; c < cols.size(); ++c) {
      if (c) out << ',';
      if (cols[c].is_present(r)) out << format_double(cols[c].raw_values()[r]);
    }
    out << '\n';
  }
}

void write_csv(const Dataset& ds, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw Error(std::string(kModule), "cannot write '" + path.string() + "'");
  write_csv(ds, out);
}

Column make_interaction_column(const Dataset& ds, ColumnId i, ColumnId j) {
  if (i == j) throw Error(std::string(kModule), "interaction needs two distinct columns");
  const Column& a = ds.column(i);
  const Column& b = ds.column(j);
  if (i == ds.target_id() || j == ds.target_id()) {
    throw Error(std::string(kModule), "the target cannot be part of an interaction");
  }
  if (a.kind() != ColumnKind::kNumeric || b.kind() != ColumnKind::kNumeric) {
    throw Error(std::string(kModule), "interactions are only formed from non-derived predictors");
  }
  std::vector<std::optional<double>> values(ds.n_rows());
  for (std::size_t r = 0; r < ds.n_rows(); ++r) {
    if (a.is_present(r) && b.is_present(r)) values[r] = a.raw_values()[r] * b.raw_values()[r];
  }
  return Column::interaction(ds.next_column_id(), i, j, a.name() + "*" + b.name(), values);
}

}  // namespace chaidlogit
