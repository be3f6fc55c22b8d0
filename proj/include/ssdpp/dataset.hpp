#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "json.hpp"

#include "ssdpp/bitset.hpp"

namespace ssdpp {

enum class Role { explanatory, target };
enum class Kind { nominal, numeric };

std::string to_string(Kind kind);
Kind kind_from_string(const std::string& s);

struct ColumnSchema {
    std::string name;
    Role role = Role::explanatory;
    Kind kind = Kind::numeric;

    friend bool operator==(const ColumnSchema&, const ColumnSchema&) = default;
};

// JSON schema config:
//   {"targets": [...], "target_kind": "nominal"|"numeric", "nominal_explanatory": [...]}
// Unlisted explanatory columns are numeric when every cell parses as a finite real.
struct SchemaConfig {
    std::vector<std::string> targets;
    Kind target_kind = Kind::nominal;
    std::vector<std::string> nominal_explanatory;

    static SchemaConfig from_json(const nlohmann::json& j);
    nlohmann::json to_json() const;
};

struct Column {
    ColumnSchema schema;
    std::vector<double> values;            // numeric columns
    std::vector<std::uint32_t> codes;      // nominal columns, index into categories
    std::vector<std::string> categories;   // first-appearance order

    std::size_t cardinality() const { return categories.size(); }
};

// Column builders for programmatic datasets; nominal categories in first-appearance order.
Column make_nominal_column(std::string name, Role role, std::span<const std::string> labels);
Column make_numeric_column(std::string name, Role role, std::vector<double> values);

class Dataset {
public:
    // Validates all invariants; throws ConfigurationError.
    explicit Dataset(std::vector<Column> columns);

    std::size_t n_rows() const { return n_; }
    std::size_t n_columns() const { return columns_.size(); }
    const Column& column(std::size_t c) const { return columns_[c]; }
    const std::vector<Column>& columns() const { return columns_; }

    // Schema indices of explanatory / target columns, in schema order.
    const std::vector<std::size_t>& explanatory() const { return explanatory_; }
    const std::vector<std::size_t>& targets() const { return targets_; }
    Kind target_kind() const { return target_kind_; }

    std::optional<std::size_t> find(const std::string& name) const;
    std::size_t index_of(const std::string& name) const;  // throws ConfigurationError

    std::vector<ColumnSchema> schema() const;

private:
    std::vector<Column> columns_;
    std::size_t n_ = 0;
    std::vector<std::size_t> explanatory_;
    std::vector<std::size_t> targets_;
    Kind target_kind_ = Kind::nominal;
};

// RFC-4180 CSV with header row.
Dataset read_csv(std::istream& in, const SchemaConfig& config);
Dataset read_csv(std::istream& in, const std::vector<ColumnSchema>& schema);
Dataset load_csv(const std::filesystem::path& path, const SchemaConfig& config);
Dataset load_csv(const std::filesystem::path& path, const std::vector<ColumnSchema>& schema);

// Raw CSV rows (header first). Exposed for tools and tests.
std::vector<std::vector<std::string>> parse_csv(std::istream& in);

// Lower nearest-rank quantiles at i/(n_cut+1), i = 1..n_cut, i.e. sorted[floor(i*n/(n_cut+1))].
// Duplicates collapse; a cut equal to the column maximum is dropped since "x <= max" selects
// every row.
std::vector<double> equal_frequency_cutpoints(std::span<const double> values, std::size_t n_cut);

enum class Op : std::uint8_t { equals, less_eq, greater_eq, between };

std::string to_string(Op op);

struct Item {
    std::size_t column = 0;  // schema index
    Op op = Op::equals;
    std::uint32_t category = 0;
    double low = 0.0;   // less_eq uses `high`, greater_eq uses `low`
    double high = 0.0;

    int n_operators() const { return op == Op::between ? 2 : 1; }
    bool holds(const Dataset& data, std::size_t row) const;

    static Item equals(std::size_t column, std::uint32_t category);
    static Item less_eq(std::size_t column, double cut);
    static Item greater_eq(std::size_t column, double cut);
    static Item between(std::size_t column, double low, double high);

    friend bool operator==(const Item&, const Item&) = default;
    friend auto operator<=>(const Item&, const Item&) = default;
};

Bitset item_cover(const Dataset& data, const Item& item);

// Frozen per-run discretization: cut list per schema column (empty for nominal columns).
struct Discretization {
    std::size_t n_cut = 0;
    std::vector<std::vector<double>> cuts;

    static Discretization compute(const Dataset& data, std::size_t n_cut);
};

// Items in schema order, then predicate order:
//   nominal: one Equals per category (dictionary order)
//   numeric: for each cut (ascending) LessEq, GreaterEq; then Between for every cut pair.
// Items covering zero rows are dropped.
std::vector<Item> generate_items(const Dataset& data, const Discretization& disc);
std::vector<Item> generate_items(const Dataset& data, std::size_t n_cut);

}  // namespace ssdpp
