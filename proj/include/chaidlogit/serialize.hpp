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

#ifndef CHAIDLOGIT_SERIALIZE_HPP_
#define CHAIDLOGIT_SERIALIZE_HPP_

// nlohmann::json bindings for every artifact the pipeline reads or writes.
// Non-finite numbers are written as null.

#include <filesystem>
#include <json.hpp>

#include "chaidlogit/chaid.hpp"
#include "chaidlogit/interaction_scan.hpp"
#include "chaidlogit/logit.hpp"
#include "chaidlogit/metrics.hpp"
#include "chaidlogit/preprocess.hpp"
#include "chaidlogit/synth.hpp"

namespace chaidlogit {

using json = nlohmann::json;

void to_json(json& j, const ChaidConfig& cfg);
void from_json(const json& j, ChaidConfig& cfg);

void to_json(json& j, const MedianMap& m);
void from_json(const json& j, MedianMap& m);

void to_json(json& j, const ClusterAssignment& ca);
void from_json(const json& j, ClusterAssignment& ca);

void to_json(json& j, const ChaidTree& tree);

void to_json(json& j, const InteractionTerm& t);
void from_json(const json& j, InteractionTerm& t);

// Deterministic part of a scan: counts, per-pair outcomes and detected terms.
// Wall-clock time is left out.
json scan_to_json(const ScanResult& scan);
ScanResult scan_from_json(const json& j);

void to_json(json& j, const LogisticModel& m);
void from_json(const json& j, LogisticModel& m);

void to_json(json& j, const SelectionTrace& t);
void to_json(json& j, const VifReport& r);
void to_json(json& j, const MetricsReport& r);

void to_json(json& j, const SynthSpec& s);
void from_json(const json& j, SynthSpec& s);

void to_json(json& j, const BenchReport& r);

json read_json_file(const std::filesystem::path& path);
// Pretty-printed with a trailing newline.
void write_json_file(const std::filesystem::path& path, const json& j);

}  // namespace chaidlogit

#endif  // CHAIDLOGIT_SERIALIZE_HPP_
