#include "ssdpp/dataset.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <set>
#include <unordered_map>

#include "ssdpp/errors.hpp"

namespace ssdpp {

std::string to_string(Kind kind) { return kind == Kind::nominal ? "nominal" : "numeric"; }

Kind kind_from_string(const std::string& s) {
    if (s == "nominal") return Kind::nominal;
    if (s == "numeric") return Kind::numeric;
    throw ConfigurationError("unknown column kind '" + s + "' (expected nominal or numeric)");
}

std::string to_string(Op op) {
    switch (op) {
        case Op::equals: return "=";
        case Op::less_eq: return "<=";
        case Op::greater_eq: return ">=";
        case Op::between: return "between";
    }
    return "?";
}

SchemaConfig SchemaConfig::from_json(const nlohmann::json& j) {
    if (!j.is_object()) throw ConfigurationError("schema config must be a JSON object");
    SchemaConfig cfg;
    try {
        if (!j.contains("targets")) throw ConfigurationError("schema config lacks \"targets\"");
        const auto& t = j.at("targets");
        if (t.is_string())
            cfg.targets.push_back(t.get<std::string>());
        else
            cfg.targets = t.get<std::vector<std::string>>();
        if (j.contains("target_kind")) cfg.target_kind = kind_from_string(j.at("target_kind").get<std::string>());
        if (j.contains("nominal_explanatory"))
            cfg.nominal_explanatory = j.at("nominal_explanatory").get<std::vector<std::string>>();
    } catch (const nlohmann::json::exception& e) {
        throw ConfigurationError(std::string("invalid schema config: ") + e.what());
    }
    if (cfg.targets.empty()) throw ConfigurationError("schema config declares no target columns");
    return cfg;
}

nlohmann::json SchemaConfig::to_json() const {
    return {{"targets", targets}, {"target_kind", to_string(target_kind)}, {"nominal_explanatory", nominal_explanatory}};
}

Column make_nominal_column(std::string name, Role role, std::span<const std::string> labels) {
    Column col;
    col.schema = {std::move(name), role, Kind::nominal};
    std::unordered_map<std::string, std::uint32_t> dict;
    col.codes.reserve(labels.size());
    for (const auto& label : labels) {
        auto [it, inserted] = dict.try_emplace(label, static_cast<std::uint32_t>(col.categories.size()));
        if (inserted) col.categories.push_back(label);
        col.codes.push_back(it->second);
    }
    return col;
}

Column make_numeric_column(std::string name, Role role, std::vector<double> values) {
    Column col;
    col.schema = {std::move(name), role, Kind::numeric};
    col.values = std::move(values);
    return col;
}

Dataset::Dataset(std::vector<Column> columns) : columns_(std::move(columns)) {
    if (columns_.empty()) throw ConfigurationError("dataset has no columns");
    std::set<std::string> names;
    n_ = columns_.front().schema.kind == Kind::numeric ? columns_.front().values.size()
                                                         : columns_.front().codes.size();
    if (n_ == 0) throw ConfigurationError("dataset has no rows");
    std::optional<Kind> tkind;
    for (std::size_t c = 0; c < columns_.size(); ++c) {
        const auto& col = columns_[c];
        if (!names.insert(col.schema.name).second)
            throw ConfigurationError("duplicate column name '" + col.schema.name + "'");
        if (col.schema.kind == Kind::numeric) {
            if (col.values.size() != n_)
                throw ConfigurationError("column '" + col.schema.name + "' has a different row count");
            for (std::size_t r = 0; r < n_; ++r)
                if (!std::isfinite(col.values[r]))
                    throw ParseError(r + 1, col.schema.name,
                                     "non-finite value at row " + std::to_string(r + 1) + ", column '" +
                                         col.schema.name + "'");
        } else {
            if (col.codes.size() != n_)
                throw ConfigurationError("column '" + col.schema.name + "' has a different row count");
            for (auto code : col.codes)
                if (code >= col.categories.size())
                    throw ConfigurationError("category index out of range in column '" + col.schema.name + "'");
        }
        if (col.schema.role == Role::target) {
            if (tkind && *tkind != col.schema.kind)
                throw ConfigurationError("mixed target kinds: all target columns must be nominal or all numeric ('" +
                                         col.schema.name + "' is " + to_string(col.schema.kind) + ")");
            tkind = col.schema.kind;
            targets_.push_back(c);
        } else {
            explanatory_.push_back(c);
        }
    }
    if (targets_.empty()) throw ConfigurationError("dataset has no target column");
    target_kind_ = *tkind;
}

std::optional<std::size_t> Dataset::find(const std::string& name) const {
    for (std::size_t c = 0; c < columns_.size(); ++c)
        if (columns_[c].schema.name == name) return c;
    return std::nullopt;
}

std::size_t Dataset::index_of(const std::string& name) const {
    if (auto c = find(name)) return *c;
    throw ConfigurationError("unknown column '" + name + "'");
}

std::vector<ColumnSchema> Dataset::schema() const {
    std::vector<ColumnSchema> out;
    for (const auto& c : columns_) out.push_back(c.schema);
    return out;
}

// ---------------------------------------------------------------------------------------------
// CSV

std::vector<std::vector<std::string>> parse_csv(std::istream& in) {
    std::vector<std::vector<std::string>> rows;
    std::vector<std::string> row;
    std::string field;
    bool in_quotes = false;
    bool field_started = false;
    std::size_t line = 1;
    char ch;
    auto end_field = [&] {
        row.push_back(std::move(field));
        field.clear();
        field_started = false;
    };
    auto end_row = [&] {
        end_field();
        // a blank line is not a record
        if (!(row.size() == 1 && row[0].empty())) rows.push_back(std::move(row));
        row.clear();
    };
    while (in.get(ch)) {
        if (in_quotes) {
            if (ch == '"') {
                if (in.peek() == '"') {
                    in.get(ch);
                    field.push_back('"');
                } else {
                    in_quotes = false;
                }
            } else {
                if (ch == '\n') ++line;
                field.push_back(ch);
            }
            continue;
        }
        switch (ch) {
            case '"':
                if (field_started && !field.empty())
                    throw ParseError(line, "", "stray quote in unquoted field on line " + std::to_string(line));
                in_quotes = true;
                field_started = true;
                break;
            case ',': end_field(); break;
            case '\r':
                if (in.peek() == '\n') in.get(ch);
                end_row();
                ++line;
                break;
            case '\n':
                end_row();
                ++line;
                break;
            default:
                field.push_back(ch);
                field_started = true;
        }
    }
    if (in_quotes) throw ParseError(line, "", "unterminated quoted field at end of input");
    if (field_started || !row.empty()) end_row();
    return rows;
}

namespace {

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t')) s.remove_suffix(1);
    return s;
}

std::optional<double> parse_real(std::string_view s) {
    s = trim(s);
    if (s.empty()) return std::nullopt;
    if (s.front() == '+') s.remove_prefix(1);
    double v = 0.0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || ptr != s.data() + s.size() || !std::isfinite(v)) return std::nullopt;
    return v;
}

Dataset build(const std::vector<std::vector<std::string>>& rows, const std::vector<ColumnSchema>& schema) {
    const auto& header = rows.front();
    std::vector<Column> columns(header.size());
    for (std::size_t c = 0; c < header.size(); ++c) {
        auto it = std::find_if(schema.begin(), schema.end(), [&](const auto& s) { return s.name == header[c]; });
        if (it == schema.end()) throw ConfigurationError("column '" + header[c] + "' missing from schema");
        columns[c].schema = *it;
    }
    for (const auto& s : schema)
        if (std::find(header.begin(), header.end(), s.name) == header.end())
            throw ConfigurationError("schema column '" + s.name + "' not found in CSV header");

    std::vector<std::unordered_map<std::string, std::uint32_t>> dicts(header.size());
    for (std::size_t r = 1; r < rows.size(); ++r) {
        const auto& row = rows[r];
        if (row.size() != header.size())
            throw ParseError(r, "", "malformed row " + std::to_string(r) + ": expected " +
                                        std::to_string(header.size()) + " fields, found " +
                                        std::to_string(row.size()));
        for (std::size_t c = 0; c < header.size(); ++c) {
            auto& col = columns[c];
            const std::string_view cell = trim(row[c]);
            if (cell.empty()) throw MissingValue(r, col.schema.name);
            if (col.schema.kind == Kind::numeric) {
                auto v = parse_real(cell);
                if (!v)
                    throw ParseError(r, col.schema.name,
                                     "unparseable numeric cell '" + std::string(cell) + "' at row " +
                                         std::to_string(r) + ", column '" + col.schema.name + "'");
                col.values.push_back(*v);
            } else {
                auto [it, inserted] =
                    dicts[c].try_emplace(std::string(cell), static_cast<std::uint32_t>(col.categories.size()));
                if (inserted) col.categories.emplace_back(cell);
                col.codes.push_back(it->second);
            }
        }
    }
    return Dataset(std::move(columns));
}

}  // namespace

Dataset read_csv(std::istream& in, const std::vector<ColumnSchema>& schema) {
    auto rows = parse_csv(in);
    if (rows.empty()) throw ConfigurationError("CSV input has no header row");
    return build(rows, schema);
}

Dataset read_csv(std::istream& in, const SchemaConfig& config) {
    auto rows = parse_csv(in);
    if (rows.empty()) throw ConfigurationError("CSV input has no header row");
    const auto& header = rows.front();
    auto in_list = [](const std::vector<std::string>& list, const std::string& name) {
        return std::find(list.begin(), list.end(), name) != list.end();
    };
    for (const auto& t : config.targets) {
        if (!in_list(header, t)) throw ConfigurationError("target column '" + t + "' not found in CSV header");
        if (in_list(config.nominal_explanatory, t))
            throw ConfigurationError("column '" + t + "' is declared both target and explanatory");
    }
    for (const auto& t : config.nominal_explanatory)
        if (!in_list(header, t)) throw ConfigurationError("explanatory column '" + t + "' not found in CSV header");

    std::vector<ColumnSchema> schema;
    for (std::size_t c = 0; c < header.size(); ++c) {
        ColumnSchema s{header[c], Role::explanatory, Kind::numeric};
        if (in_list(config.targets, header[c])) {
            s.role = Role::target;
            s.kind = config.target_kind;
        } else if (in_list(config.nominal_explanatory, header[c])) {
            s.kind = Kind::nominal;
        } else {
            // missing cells are reported by build(); a blank cell does not force nominal
            bool numeric = true;
            for (std::size_t r = 1; r < rows.size() && numeric; ++r)
                if (c < rows[r].size() && !trim(rows[r][c]).empty() && !parse_real(rows[r][c])) numeric = false;
            s.kind = numeric ? Kind::numeric : Kind::nominal;
        }
        schema.push_back(std::move(s));
    }
    return build(rows, schema);
}

namespace {
std::ifstream open_input(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open '" + path.string() + "'");
    return in;
}
}  // namespace

Dataset load_csv(const std::filesystem::path& path, const SchemaConfig& config) {
    auto in = open_input(path);
    return read_csv(in, config);
}

Dataset load_csv(const std::filesystem::path& path, const std::vector<ColumnSchema>& schema) {
    auto in = open_input(path);
    return read_csv(in, schema);
}

// ---------------------------------------------------------------------------------------------
// Discretization and items

std::vector<double> equal_frequency_cutpoints(std::span<const double> values, std::size_t n_cut) {
    std::vector<double> cuts;
    if (values.empty() || n_cut == 0) return cuts;
    std::vector<double> sorted(values.begin(), values.end());
    std::sort(sorted.begin(), sorted.end());
    const std::size_t n = sorted.size();
    for (std::size_t i = 1; i <= n_cut; ++i) {
        const std::size_t idx = std::min(i * n / (n_cut + 1), n - 1);
        const double cut = sorted[idx];
        if (cut == sorted.back()) continue;
        if (cuts.empty() || cuts.back() != cut) cuts.push_back(cut);
    }
    return cuts;
}

bool Item::holds(const Dataset& data, std::size_t row) const {
    const auto& col = data.column(column);
    switch (op) {
        case Op::equals: return col.codes[row] == category;
        case Op::less_eq: return col.values[row] <= high;
        case Op::greater_eq: return col.values[row] >= low;
        case Op::between: return col.values[row] >= low && col.values[row] <= high;
    }
    return false;
}

Item Item::equals(std::size_t column, std::uint32_t category) {
    Item it;
    it.column = column;
    it.op = Op::equals;
    it.category = category;
    return it;
}

Item Item::less_eq(std::size_t column, double cut) {
    Item it;
    it.column = column;
    it.op = Op::less_eq;
    it.high = cut;
    return it;
}

Item Item::greater_eq(std::size_t column, double cut) {
    Item it;
    it.column = column;
    it.op = Op::greater_eq;
    it.low = cut;
    return it;
}

Item Item::between(std::size_t column, double low, double high) {
    if (!(low < high)) throw DomainError("between item requires low < high");
    Item it;
    it.column = column;
    it.op = Op::between;
    it.low = low;
    it.high = high;
    return it;
}

Bitset item_cover(const Dataset& data, const Item& item) {
    Bitset b(data.n_rows());
    for (std::size_t r = 0; r < data.n_rows(); ++r)
        if (item.holds(data, r)) b.set(r);
    return b;
}

Discretization Discretization::compute(const Dataset& data, std::size_t n_cut) {
    Discretization d;
    d.n_cut = n_cut;
    d.cuts.resize(data.n_columns());
    for (auto c : data.explanatory())
        if (data.column(c).schema.kind == Kind::numeric)
            d.cuts[c] = equal_frequency_cutpoints(data.column(c).values, n_cut);
    return d;
}

std::vector<Item> generate_items(const Dataset& data, const Discretization& disc) {
    std::vector<Item> items;
    auto push = [&](Item it) {
        for (std::size_t r = 0; r < data.n_rows(); ++r)
            if (it.holds(data, r)) {
                items.push_back(it);
                return;
            }
    };
    for (auto c : data.explanatory()) {
        const auto& col = data.column(c);
        if (col.schema.kind == Kind::nominal) {
            for (std::uint32_t k = 0; k < col.cardinality(); ++k) push(Item::equals(c, k));
            continue;
        }
        const auto& cuts = disc.cuts[c];
        for (double cut : cuts) {
            push(Item::less_eq(c, cut));
            push(Item::greater_eq(c, cut));
        }
        for (std::size_t i = 0; i < cuts.size(); ++i)
            for (std::size_t j = i + 1; j < cuts.size(); ++j) push(Item::between(c, cuts[i], cuts[j]));
    }
    return items;
}

std::vector<Item> generate_items(const Dataset& data, std::size_t n_cut) {
    return generate_items(data, Discretization::compute(data, n_cut));
}

}  // namespace ssdpp
