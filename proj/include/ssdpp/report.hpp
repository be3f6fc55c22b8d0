#pragma once

#include <string>
#include <vector>

#include "json.hpp"

#include "ssdpp/dataset.hpp"
#include "ssdpp/encoding.hpp"
#include "ssdpp/model.hpp"

namespace ssdpp {

enum class Format { text, json, markdown };
Format format_from_string(const std::string& s);  // throws ConfigurationError

nlohmann::json statistics_to_json(const Dataset& data, std::size_t target_column, const TargetStatistics& stats);

// {"params", "subgroups":[{"description","text","n","stats","wkl","gain_at_insertion"}],
//  "default":{"n","stats"}, "summary":{"swkl","n_subgroups","avg_conditions","compression_ratio","total_bits"}}
nlohmann::json make_report(const Dataset& data, const SubgroupList& list, const std::vector<double>& gains,
                           const EncodingContext& ctx, const nlohmann::json& params);

// Descriptions of a report (or any object with a "subgroups" array of {"description": ...}).
std::vector<Description> descriptions_from_report(const nlohmann::json& report, const Dataset& data);

// Gain of each subgroup at the moment it was appended, recomputed in list order.
std::vector<double> insertion_gains(const Dataset& data, const std::vector<Description>& descriptions,
                                    const EncodingContext& ctx, double beta);

std::string render(const nlohmann::json& report, Format format);

}  // namespace ssdpp
