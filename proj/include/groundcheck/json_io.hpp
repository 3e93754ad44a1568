// Copyright 2026 The groundcheck Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstddef>
#include <string>

#include "groundcheck/coco.hpp"
#include "groundcheck/overlap.hpp"
#include "groundcheck/retrieval.hpp"
#include "groundcheck/stats.hpp"
#include "json.hpp"

namespace groundcheck {

using Json = nlohmann::ordered_json;

Json to_json(const DistributionStats& stats);
DistributionStats stats_from_json(const Json& j);

Json to_json(const OverlapReport& report);
/// Throws SchemaError on missing or mistyped fields.
OverlapReport report_from_json(const Json& j);

Json to_json(const VersionComparison& cmp);
Json to_json(const ClusterSet& clusters);
Json to_json(const Removal& removal);
Json to_json(const Retrieval& retrieval);
Json to_json(const KeyTokenSet& key);
Json to_json(const ScoredAnswer& scored);
Json to_json(const GroundingResult& result);

/// "bin_lower,bin_upper,density" rows for the k-th neighbour distribution.
std::string density_csv(const OverlapReport& report, std::size_t k);

/// Shortest decimal text that parses back to the same double.
std::string format_double(double value);

}  // namespace groundcheck
