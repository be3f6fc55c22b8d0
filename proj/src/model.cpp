#include "ssdpp/model.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "ssdpp/errors.hpp"

namespace ssdpp {

Description::Description(std::vector<Item> conditions) : conditions_(std::move(conditions)) {
    std::sort(conditions_.begin(), conditions_.end(),
              [](const Item& a, const Item& b) { return (a <=> b) == std::partial_ordering::less; });
    for (std::size_t i = 1; i < conditions_.size(); ++i)
        if (conditions_[i].column == conditions_[i - 1].column)
            throw ConfigurationError("description conditions the same variable twice");
}

bool Description::conditions_on(std::size_t column) const {
    return std::any_of(conditions_.begin(), conditions_.end(), [&](const Item& it) { return it.column == column; });
}

std::optional<Description> Description::with(const Item& item) const {
    if (conditions_on(item.column)) return std::nullopt;
    Description d;
    d.conditions_.reserve(conditions_.size() + 1);
    auto pos = std::find_if(conditions_.begin(), conditions_.end(),
                            [&](const Item& it) { return it.column > item.column; });
    d.conditions_.insert(d.conditions_.end(), conditions_.begin(), pos);
    d.conditions_.push_back(item);
    d.conditions_.insert(d.conditions_.end(), pos, conditions_.end());
    return d;
}

std::string format_number(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return buf;
}

std::string Description::to_string(const Dataset& data) const {
    std::string out;
    for (const auto& it : conditions_) {
        if (!out.empty()) out += " & ";
        const auto& col = data.column(it.column);
        const auto& name = col.schema.name;
        switch (it.op) {
            case Op::equals: out += name + " = " + col.categories.at(it.category); break;
            case Op::less_eq: out += name + " ≤ " + format_number(it.high); break;
            case Op::greater_eq: out += name + " ≥ " + format_number(it.low); break;
            case Op::between:
                out += format_number(it.low) + " ≤ " + name + " ≤ " + format_number(it.high);
                break;
        }
    }
    return out;
}

nlohmann::json Description::to_json(const Dataset& data) const {
    auto conds = nlohmann::json::array();
    for (const auto& it : conditions_) {
        const auto& col = data.column(it.column);
        nlohmann::json c{{"var", col.schema.name}, {"op", ssdpp::to_string(it.op)}};
        switch (it.op) {
            case Op::equals: c["value"] = col.categories.at(it.category); break;
            case Op::less_eq: c["value"] = it.high; break;
            case Op::greater_eq: c["value"] = it.low; break;
            case Op::between: c["values"] = {it.low, it.high}; break;
        }
        conds.push_back(std::move(c));
    }
    return {{"conditions", std::move(conds)}};
}

Description Description::from_json(const nlohmann::json& j, const Dataset& data) {
    std::vector<Item> items;
    try {
        for (const auto& c : j.at("conditions")) {
            const auto name = c.at("var").get<std::string>();
            const auto column = data.index_of(name);
            const auto& col = data.column(column);
            if (col.schema.role != Role::explanatory)
                throw ConfigurationError("condition on non-explanatory column '" + name + "'");
            const auto op = c.at("op").get<std::string>();
            if (op == "=") {
                if (col.schema.kind != Kind::nominal)
                    throw ConfigurationError("equality condition on numeric column '" + name + "'");
                const auto value = c.at("value").get<std::string>();
                auto pos = std::find(col.categories.begin(), col.categories.end(), value);
                if (pos == col.categories.end())
                    throw ConfigurationError("unknown category '" + value + "' in column '" + name + "'");
                items.push_back(Item::equals(column, static_cast<std::uint32_t>(pos - col.categories.begin())));
                continue;
            }
            if (col.schema.kind != Kind::numeric)
                throw ConfigurationError("interval condition on nominal column '" + name + "'");
            if (op == "<=")
                items.push_back(Item::less_eq(column, c.at("value").get<double>()));
            else if (op == ">=")
                items.push_back(Item::greater_eq(column, c.at("value").get<double>()));
            else if (op == "between")
                items.push_back(Item::between(column, c.at("values").at(0).get<double>(),
                                              c.at("values").at(1).get<double>()));
            else
                throw ConfigurationError("unknown operator '" + op + "'");
        }
    } catch (const nlohmann::json::exception& e) {
        throw ConfigurationError(std::string("invalid description JSON: ") + e.what());
    } catch (const DomainError& e) {
        throw ConfigurationError(e.what());
    }
    return Description(std::move(items));
}

bool matches(const Description& description, const Dataset& data, std::size_t row) {
    for (const auto& it : description.conditions())
        if (!it.holds(data, row)) return false;
    return true;
}

Bitset description_cover(const Description& description, const Dataset& data) {
    Bitset b(data.n_rows());
    for (std::size_t r = 0; r < data.n_rows(); ++r)
        if (matches(description, data, r)) b.set(r);
    return b;
}

// ---------------------------------------------------------------------------------------------

std::vector<double> CategoricalStats::probabilities() const {
    std::vector<double> p(counts.size(), 0.0);
    for (std::size_t c = 0; c < counts.size(); ++c) p[c] = probability(c);
    return p;
}

double NormalStats::stddev() const { return std::sqrt(variance); }

std::size_t usage(const TargetStatistics& stats) {
    return std::visit([](const auto& s) { return s.n; }, stats);
}

CategoricalStats estimate_categorical(std::span<const std::uint32_t> codes, std::size_t k) {
    CategoricalStats s;
    s.counts.assign(k, 0);
    for (auto c : codes) {
        if (c >= k) throw DomainError("class index out of range");
        ++s.counts[c];
    }
    s.n = codes.size();
    return s;
}

NormalStats estimate_normal(std::span<const double> values) {
    NormalStats s;
    s.n = values.size();
    if (s.n == 0) return s;
    double sum = 0.0;
    for (double v : values) sum += v;
    s.mean = sum / static_cast<double>(s.n);
    double rss = 0.0;
    for (double v : values) rss += (v - s.mean) * (v - s.mean);
    s.rss = rss;
    s.variance = rss / static_cast<double>(s.n);
    return s;
}

TargetStatistics estimate_statistics(const Dataset& data, std::size_t target_column, const Bitset& rows) {
    const auto& col = data.column(target_column);
    if (col.schema.kind == Kind::nominal) {
        std::vector<std::uint32_t> codes;
        rows.for_each([&](std::size_t r) { codes.push_back(col.codes[r]); });
        return estimate_categorical(codes, col.cardinality());
    }
    std::vector<double> values;
    rows.for_each([&](std::size_t r) { values.push_back(col.values[r]); });
    return estimate_normal(values);
}

std::vector<TargetStatistics> estimate_statistics(const Dataset& data, const Bitset& rows) {
    std::vector<TargetStatistics> out;
    for (auto t : data.targets()) out.push_back(estimate_statistics(data, t, rows));
    return out;
}

// ---------------------------------------------------------------------------------------------

SubgroupList::SubgroupList(const Dataset& data) : uncovered_(data.n_rows(), true) {
    default_stats_ = estimate_statistics(data, Bitset(data.n_rows(), true));
}

SubgroupList::SubgroupList(const Dataset& data, const std::vector<Description>& descriptions) : SubgroupList(data) {
    for (const auto& d : descriptions) append(d, data);
}

void SubgroupList::append(const Description& description, const Dataset& data) {
    Bitset rows = description_cover(description, data);
    rows &= uncovered_;
    uncovered_.subtract(rows);
    Subgroup s;
    s.description = description;
    s.usage = rows.count();
    s.statistics = estimate_statistics(data, rows);
    subgroups_.push_back(std::move(s));
}

std::vector<Description> SubgroupList::descriptions() const {
    std::vector<Description> out;
    for (const auto& s : subgroups_) out.push_back(s.description);
    return out;
}

Partition cover(std::span<const Description> descriptions, const Dataset& data) {
    Partition p;
    p.default_rows = Bitset(data.n_rows(), true);
    for (const auto& d : descriptions) {
        Bitset rows = description_cover(d, data);
        rows &= p.default_rows;
        p.default_rows.subtract(rows);
        p.subgroups.push_back(std::move(rows));
    }
    return p;
}

Partition cover(const SubgroupList& list, const Dataset& data) {
    const auto descriptions = list.descriptions();
    return cover(descriptions, data);
}

}  // namespace ssdpp
