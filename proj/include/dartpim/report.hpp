/*
 * Copyright 2026 The dartpim Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 * http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#ifndef DARTPIM_REPORT_HPP
#define DARTPIM_REPORT_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

#include "dartpim/minimizer_index.hpp"
#include "dartpim/system.hpp"

namespace dartpim {

inline constexpr int kStatsVersion = 1;
inline constexpr std::string_view kArtifactVersion = "1.0.0";

/// Applies `section.key = value` overrides from a TOML document. Unknown
/// keys and unparsable values raise ConfigError.
void apply_config_toml(std::string_view text, SystemConfig& cfg, IndexParams& index);

nlohmann::ordered_json config_to_json(const SystemConfig& cfg);
nlohmann::ordered_json index_params_to_json(const IndexParams& p);
nlohmann::ordered_json instance_cost_to_json(const InstanceCost& c);

/// Table of primitive formulas plus the itemized cell sequences.
nlohmann::ordered_json cost_catalog_json(std::uint32_t rl = 150, std::uint32_t eth = 6);

struct Manifest {
    nlohmann::ordered_json config;
    nlohmann::ordered_json inputs = nlohmann::ordered_json::object();  // name -> sha256 hex
    std::uint64_t seed = 0;
};

nlohmann::ordered_json manifest_to_json(const Manifest& m);

nlohmann::ordered_json stats_to_json(const RunStats& stats, const SystemConfig& cfg, std::uint64_t crossbar_count,
                                     std::optional<double> accuracy, const Manifest& manifest);

/// `read_id ref_pos strand distance trace` rows sorted by read id; unmapped
/// rows carry `*` in every result column.
std::string results_tsv(const std::vector<MappingResult>& results);

struct ReportRow {
    std::string source;
    std::uint64_t max_reads = 0;
    std::uint64_t K_L = 0;
    std::uint64_t K_A = 0;
    double accuracy = -1.0;  // negative when absent
    TimeBreakdown time;
    EnergyBreakdown energy;
    AreaBreakdown area;
};

/// Throws DataError when the document lacks a field or has another version.
ReportRow report_row_from_stats(const nlohmann::json& stats, std::string source);
std::string report_table(const std::vector<ReportRow>& rows);
std::string report_csv(const std::vector<ReportRow>& rows);

}  // namespace dartpim

#endif  // DARTPIM_REPORT_HPP
