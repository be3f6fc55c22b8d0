#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "json.hpp"

#include "ssdpp/bitset.hpp"
#include "ssdpp/dataset.hpp"

namespace ssdpp {

// Conjunction of conditions, at most one per variable, kept in schema column order.
class Description {
public:
    Description() = default;
    // Canonicalizes; throws ConfigurationError when a variable is conditioned twice.
    explicit Description(std::vector<Item> conditions);

    std::size_t size() const { return conditions_.size(); }
    bool empty() const { return conditions_.empty(); }
    const std::vector<Item>& conditions() const { return conditions_; }
    bool conditions_on(std::size_t column) const;

    // Refinement with one more condition; nullopt when the variable is already used.
    std::optional<Description> with(const Item& item) const;

    // "weight = heavy & 8 ≤ consumption ≤ 13"; numbers printed with 6 significant digits.
    std::string to_string(const Dataset& data) const;
    // {"conditions":[{"var":..,"op":"=","value":..}, {"var":..,"op":"between","values":[lo,hi]}]}
    nlohmann::json to_json(const Dataset& data) const;
    static Description from_json(const nlohmann::json& j, const Dataset& data);

    friend bool operator==(const Description&, const Description&) = default;

private:
    std::vector<Item> conditions_;
};

bool matches(const Description& description, const Dataset& data, std::size_t row);
Bitset description_cover(const Description& description, const Dataset& data);

std::string format_number(double v);  // 6 significant digits

struct CategoricalStats {
    std::vector<std::size_t> counts;
    std::size_t n = 0;

    std::size_t k() const { return counts.size(); }
    double probability(std::size_t c) const { return n == 0 ? 0.0 : static_cast<double>(counts[c]) / n; }
    std::vector<double> probabilities() const;
};

struct NormalStats {
    std::size_t n = 0;
    double mean = 0.0;
    double variance = 0.0;  // biased (ML) estimator
    double rss = 0.0;       // n * variance

    double stddev() const;
};

using TargetStatistics = std::variant<CategoricalStats, NormalStats>;

std::size_t usage(const TargetStatistics& stats);

CategoricalStats estimate_categorical(std::span<const std::uint32_t> codes, std::size_t k);
NormalStats estimate_normal(std::span<const double> values);

// Statistics of one target column restricted to `rows`.
TargetStatistics estimate_statistics(const Dataset& data, std::size_t target_column, const Bitset& rows);
std::vector<TargetStatistics> estimate_statistics(const Dataset& data, const Bitset& rows);

struct Subgroup {
    Description description;
    std::size_t usage = 0;
    std::vector<TargetStatistics> statistics;  // one per target
};

// Ordered subgroups followed by the fixed default rule holding the full-data ML statistics.
class SubgroupList {
public:
    explicit SubgroupList(const Dataset& data);
    SubgroupList(const Dataset& data, const std::vector<Description>& descriptions);

    // Appends at the end (before the default rule); its cover is the rows not yet covered.
    void append(const Description& description, const Dataset& data);

    std::size_t size() const { return subgroups_.size(); }
    bool empty() const { return subgroups_.empty(); }
    const std::vector<Subgroup>& subgroups() const { return subgroups_; }
    const std::vector<TargetStatistics>& default_stats() const { return default_stats_; }
    const Bitset& uncovered() const { return uncovered_; }
    std::vector<Description> descriptions() const;

private:
    std::vector<Subgroup> subgroups_;
    std::vector<TargetStatistics> default_stats_;
    Bitset uncovered_;
};

struct Partition {
    std::vector<Bitset> subgroups;  // D^i
    Bitset default_rows;            // D^d
};

Partition cover(std::span<const Description> descriptions, const Dataset& data);
Partition cover(const SubgroupList& list, const Dataset& data);

}  // namespace ssdpp
