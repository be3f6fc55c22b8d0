#include "ssdpp/encoding.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <mutex>
#include <numbers>
#include <shared_mutex>
#include <unordered_map>

#include "ssdpp/errors.hpp"

namespace ssdpp {

namespace {

constexpr double kLog2E = std::numbers::log2e;

double log_add(double a, double b) {
    if (a < b) std::swap(a, b);
    if (b == -std::numeric_limits<double>::infinity()) return a;
    return a + std::log1p(std::exp(b - a));
}

}  // namespace

double log_gamma(double x) {
    if (!(x > 0.0)) throw DomainError("log_gamma requires a positive argument");
    int sign = 0;
    return ::lgamma_r(x, &sign);
}

double universal_integer_code(std::uint64_t i) {
    if (i < 1) throw DomainError("universal integer code is defined for i >= 1");
    double bits = std::log2(kUniversalK0);
    double term = std::log2(static_cast<double>(i));
    while (term > 0.0) {
        bits += term;
        term = std::log2(term);
    }
    return bits;
}

double restricted_integer_code(std::uint64_t i) {
    if (i != 1 && i != 2) throw DomainError("restricted integer code is defined for i in {1, 2}");
    const double p1 = std::exp2(-universal_integer_code(1));
    const double p2 = std::exp2(-universal_integer_code(2));
    return -std::log2((i == 1 ? p1 : p2) / (p1 + p2));
}

double log2_binomial(std::uint64_t n, std::uint64_t k) {
    if (k > n) throw DomainError("binomial coefficient with k > n");
    return (log_gamma(n + 1.0) - log_gamma(k + 1.0) - log_gamma(n - k + 1.0)) * kLog2E;
}

// ---------------------------------------------------------------------------------------------

EncodingContext EncodingContext::build(const Dataset& data, const Discretization& disc, bool top1) {
    EncodingContext ctx;
    ctx.m = data.explanatory().size();
    ctx.top1 = top1;
    ctx.variables.resize(data.n_columns());
    for (std::size_t c = 0; c < data.n_columns(); ++c) {
        const auto& col = data.column(c);
        auto& v = ctx.variables[c];
        v.kind = col.schema.kind;
        v.role = col.schema.role;
        v.cardinality = col.cardinality();
        if (c < disc.cuts.size()) v.n_cuts = disc.cuts[c].size();
    }
    ctx.target_kind = data.target_kind();
    ctx.target_columns = data.targets();
    ctx.default_stats = estimate_statistics(data, Bitset(data.n_rows(), true));
    if (ctx.target_kind == Kind::numeric)
        for (std::size_t j = 0; j < ctx.default_stats.size(); ++j)
            if (!(std::get<NormalStats>(ctx.default_stats[j]).variance > 0.0))
                throw ConfigurationError("numeric target '" + data.column(ctx.target_columns[j]).schema.name +
                                         "' is constant (zero standard deviation)");
    return ctx;
}

double condition_length(const Item& item, const EncodingContext& ctx) {
    if (item.column >= ctx.variables.size()) throw DomainError("condition on unknown column");
    const auto& v = ctx.variables[item.column];
    if (v.role != Role::explanatory) throw DomainError("condition on a target column");
    if (v.kind == Kind::nominal) {
        if (item.op != Op::equals) throw DomainError("nominal condition must be an equality");
        return std::log2(static_cast<double>(v.cardinality));
    }
    if (item.op == Op::equals) throw DomainError("numeric condition must be an interval");
    const auto c = static_cast<double>(v.n_cuts);
    if (v.n_cuts == 0) throw DomainError("numeric variable without cut points used in a condition");
    if (item.n_operators() == 1) return restricted_integer_code(1) + std::log2(2.0 * c);
    if (v.n_cuts < 2) throw DomainError("two-operator condition needs at least two cut points");
    return restricted_integer_code(2) + std::log2(c * (c - 1.0) / 2.0);
}

double description_length(const Description& description, const EncodingContext& ctx) {
    const auto size = description.size();
    if (size == 0) throw DomainError("subgroup description must have at least one condition");
    if (size > ctx.m) throw DomainError("description has more conditions than explanatory variables");
    double bits = universal_integer_code(size) + log2_binomial(ctx.m, size);
    for (const auto& it : description.conditions()) bits += condition_length(it, ctx);
    return bits;
}

double model_length(std::span<const Description> descriptions, const EncodingContext& ctx) {
    if (descriptions.empty()) return 0.0;
    double bits = ctx.top1 ? 0.0 : universal_integer_code(descriptions.size());
    for (const auto& d : descriptions) bits += description_length(d, ctx);
    return bits;
}

double model_length(const SubgroupList& list, const EncodingContext& ctx) {
    const auto d = list.descriptions();
    return model_length(d, ctx);
}

// ---------------------------------------------------------------------------------------------
// Multinomial complexity. Natural-log values of C(n, k) for k = 1.. are memoized per n and
// extended on demand with C(n, k+2) = C(n, k+1) + (n / k) C(n, k).

namespace {

class ComplexityCache {
public:
    double log2_complexity(std::size_t n, std::size_t k) {
        if (k <= 1 || n == 0) return 0.0;
        {
            std::shared_lock lock(mutex_);
            auto it = table_.find(n);
            if (it != table_.end() && it->second.size() >= k) return it->second[k - 1] * kLog2E;
        }
        std::vector<double> row;
        {
            std::shared_lock lock(mutex_);
            auto it = table_.find(n);
            if (it != table_.end()) row = it->second;
        }
        if (row.empty()) row = {0.0, log_binary(n)};
        const double log_n = std::log(static_cast<double>(n));
        while (row.size() < k) {
            const std::size_t kk = row.size() - 1;  // row holds C(n,1..kk+1); append C(n,kk+2)
            row.push_back(log_add(row[kk], log_n - std::log(static_cast<double>(kk)) + row[kk - 1]));
        }
        const double value = row[k - 1];
        std::unique_lock lock(mutex_);
        auto& slot = table_[n];
        if (slot.size() < row.size()) slot = std::move(row);
        return value * kLog2E;
    }

private:
    // ln C(n, 2) = ln sum_h binom(n,h) (h/n)^h ((n-h)/n)^(n-h), summed in log space.
    static double log_binary(std::size_t n) {
        const double nn = static_cast<double>(n);
        const double lg_n1 = log_gamma(nn + 1.0);
        auto term = [&](std::size_t h) {
            const double hh = static_cast<double>(h);
            const double rest = nn - hh;
            double t = lg_n1 - log_gamma(hh + 1.0) - log_gamma(rest + 1.0);
            if (h > 0) t += hh * std::log(hh / nn);
            if (h < n) t += rest * std::log(rest / nn);
            return t;
        };
        // terms are symmetric in h <-> n - h
        std::vector<double> terms;
        terms.reserve(n / 2 + 1);
        for (std::size_t h = 0; 2 * h <= n; ++h) terms.push_back(term(h));
        const double peak = *std::max_element(terms.begin(), terms.end());
        double sum = 0.0;
        for (std::size_t h = 0; h < terms.size(); ++h) {
            const double w = (2 * h == n) ? 1.0 : 2.0;
            sum += w * std::exp(terms[h] - peak);
        }
        return peak + std::log(sum);
    }

    std::shared_mutex mutex_;
    std::unordered_map<std::size_t, std::vector<double>> table_;
};

ComplexityCache& complexity_cache() {
    static ComplexityCache cache;
    return cache;
}

}  // namespace

double multinomial_complexity(std::size_t n, std::size_t k) {
    if (k == 0) throw DomainError("multinomial complexity requires k >= 1");
    return complexity_cache().log2_complexity(n, k);
}

double nml_categorical(const CategoricalStats& stats, std::size_t k) {
    if (k < stats.counts.size()) throw DomainError("k smaller than the number of observed classes");
    double bits = 0.0;
    for (auto c : stats.counts)
        if (c > 0) bits -= static_cast<double>(c) * std::log2(static_cast<double>(c) / stats.n);
    return bits + multinomial_complexity(stats.n, k);
}

double nml_categorical(const CategoricalStats& stats) { return nml_categorical(stats, stats.k()); }

double known_categorical(const CategoricalStats& stats, std::span<const double> dataset_probs) {
    if (dataset_probs.size() < stats.counts.size()) throw DomainError("probability vector too short");
    double bits = 0.0;
    for (std::size_t c = 0; c < stats.counts.size(); ++c) {
        if (stats.counts[c] == 0) continue;
        if (!(dataset_probs[c] > 0.0))
            throw DomainError("observed class has zero probability under the default distribution");
        bits -= static_cast<double>(stats.counts[c]) * std::log2(dataset_probs[c]);
    }
    return bits;
}

// ---------------------------------------------------------------------------------------------
// Normal targets

double known_normal(std::span<const double> values, double mu, double sigma) {
    if (!(sigma > 0.0)) throw DomainError("known normal code requires sigma > 0");
    if (values.empty()) return 0.0;
    double rss = 0.0;
    for (double v : values) rss += (v - mu) * (v - mu);
    const double n = static_cast<double>(values.size());
    return n / 2.0 * std::log2(2.0 * std::numbers::pi) + n / 2.0 * std::log2(sigma * sigma) +
           rss / (2.0 * sigma * sigma) * kLog2E;
}

double known_normal(const NormalStats& slice, double mu, double sigma) {
    if (!(sigma > 0.0)) throw DomainError("known normal code requires sigma > 0");
    if (slice.n == 0) return 0.0;
    const double n = static_cast<double>(slice.n);
    const double rss = slice.rss + n * (slice.mean - mu) * (slice.mean - mu);
    return n / 2.0 * std::log2(2.0 * std::numbers::pi) + n / 2.0 * std::log2(sigma * sigma) +
           rss / (2.0 * sigma * sigma) * kLog2E;
}

double bayes_marginal(std::size_t n, double rss) {
    if (n < 2) throw DegenerateSubgroup("Bayesian normal code needs at least two points");
    if (!(rss > 0.0)) throw DegenerateSubgroup("Bayesian normal code needs a nonzero variance");
    const double nn = static_cast<double>(n);
    return 1.0 + nn / 2.0 * std::log2(std::numbers::pi) - log_gamma(nn / 2.0) * kLog2E + 0.5 * std::log2(nn) +
           nn / 2.0 * std::log2(rss);
}

double two_point_cost(double a, double b, const NormalStats& dataset) {
    if (a == b) throw DegenerateSubgroup("conditioning pair must hold two distinct values");
    const double pair[2] = {a, b};
    const double mean = (a + b) / 2.0;
    const double rss = (a - mean) * (a - mean) + (b - mean) * (b - mean);
    return known_normal(pair, dataset.mean, dataset.stddev()) - bayes_marginal(2, rss);
}

TwoPointSelection two_point_selection(std::span<const double> values, const NormalStats& dataset) {
    const double mu = dataset.mean;
    // order by (|v - mu|, v); keep the best two distinct values
    auto before = [mu](double a, double b) {
        const double da = std::abs(a - mu), db = std::abs(b - mu);
        return da < db || (da == db && a < b);
    };
    bool have1 = false, have2 = false;
    double v1 = 0.0, v2 = 0.0;
    for (double v : values) {
        if (!have1) {
            v1 = v;
            have1 = true;
        } else if (v == v1 || (have2 && v == v2)) {
            continue;
        } else if (before(v, v1)) {
            v2 = v1;
            have2 = true;
            v1 = v;
        } else if (!have2 || before(v, v2)) {
            v2 = v;
            have2 = true;
        }
    }
    if (!have2) throw DegenerateSubgroup("numeric subgroup has fewer than two distinct target values");
    return {v1, v2, two_point_cost(v1, v2, dataset)};
}

double bayes_normal(const NormalStats& stats, double l_cost) {
    if (stats.n < 2 || !(stats.variance > 0.0))
        throw DegenerateSubgroup("numeric subgroup has zero variance or fewer than two points");
    return bayes_marginal(stats.n, stats.rss) + l_cost;
}

double bayes_normal(const NormalStats& stats, const TwoPointSelection& pair) {
    return bayes_normal(stats, pair.cost);
}

// ---------------------------------------------------------------------------------------------

double subgroup_target_length(const Dataset& data, std::size_t target_index, const Bitset& rows,
                              const EncodingContext& ctx) {
    const auto column = ctx.target_columns.at(target_index);
    const auto& col = data.column(column);
    if (rows.none()) return 0.0;
    if (col.schema.kind == Kind::nominal) {
        const auto stats = std::get<CategoricalStats>(estimate_statistics(data, column, rows));
        return nml_categorical(stats, col.cardinality());
    }
    std::vector<double> values;
    rows.for_each([&](std::size_t r) { values.push_back(col.values[r]); });
    const auto stats = estimate_normal(values);
    const auto& dstats = std::get<NormalStats>(ctx.default_stats.at(target_index));
    return bayes_normal(stats, two_point_selection(values, dstats));
}

double default_target_length(const Dataset& data, std::size_t target_index, const Bitset& rows,
                             const EncodingContext& ctx) {
    const auto column = ctx.target_columns.at(target_index);
    const auto& col = data.column(column);
    if (col.schema.kind == Kind::nominal) {
        const auto stats = std::get<CategoricalStats>(estimate_statistics(data, column, rows));
        return known_categorical(stats, std::get<CategoricalStats>(ctx.default_stats.at(target_index)).probabilities());
    }
    std::vector<double> values;
    rows.for_each([&](std::size_t r) { values.push_back(col.values[r]); });
    const auto& d = std::get<NormalStats>(ctx.default_stats.at(target_index));
    return known_normal(values, d.mean, d.stddev());
}

double data_length(const Dataset& data, const Partition& partition, const EncodingContext& ctx) {
    double bits = 0.0;
    for (std::size_t j = 0; j < ctx.target_columns.size(); ++j) {
        bits += default_target_length(data, j, partition.default_rows, ctx);
        for (const auto& part : partition.subgroups) bits += subgroup_target_length(data, j, part, ctx);
    }
    return bits;
}

double data_length(const Dataset& data, std::span<const Description> descriptions, const EncodingContext& ctx) {
    return data_length(data, cover(descriptions, data), ctx);
}

double data_length(const Dataset& data, const SubgroupList& list, const EncodingContext& ctx) {
    return data_length(data, cover(list, data), ctx);
}

double total_length(const Dataset& data, std::span<const Description> descriptions, const EncodingContext& ctx) {
    return data_length(data, descriptions, ctx) + model_length(descriptions, ctx);
}

double total_length(const Dataset& data, const SubgroupList& list, const EncodingContext& ctx) {
    const auto d = list.descriptions();
    return total_length(data, d, ctx);
}

}  // namespace ssdpp
