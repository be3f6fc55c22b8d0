#pragma once

// Code lengths of the two-part MDL criterion L(D, M) = L(M) + L(Y | X, M). All values in bits.

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "ssdpp/dataset.hpp"
#include "ssdpp/model.hpp"

namespace ssdpp {

inline constexpr double kUniversalK0 = 2.865064;

// Rissanen's universal code: log2(k0) + log2(i) + log2(log2(i)) + ... (positive terms only).
double universal_integer_code(std::uint64_t i);
// Universal code renormalized over {1, 2}.
double restricted_integer_code(std::uint64_t i);

double log2_binomial(std::uint64_t n, std::uint64_t k);
// Natural log of Gamma(x), x > 0. Reentrant.
double log_gamma(double x);

struct VariableMeta {
    Kind kind = Kind::numeric;
    Role role = Role::explanatory;
    std::size_t cardinality = 0;  // nominal: |X_v|
    std::size_t n_cuts = 0;       // numeric: distinct cut points of this variable
};

struct EncodingContext {
    std::size_t m = 0;                       // explanatory variables
    std::vector<VariableMeta> variables;     // by schema column
    Kind target_kind = Kind::nominal;
    std::vector<std::size_t> target_columns;
    std::vector<TargetStatistics> default_stats;  // full-data ML estimates, one per target
    bool top1 = false;                       // single-subgroup model encoding (no L_N(|S|))

    static EncodingContext build(const Dataset& data, const Discretization& disc, bool top1 = false);
};

// nominal: log2 |X_v|; numeric: L_N|2(n_op) + log2 N(n_op, c) with N(1,c) = 2c, N(2,c) = c(c-1)/2.
double condition_length(const Item& item, const EncodingContext& ctx);
// L_N(|a|) + log2 C(m, |a|) + sum of condition lengths.
double description_length(const Description& description, const EncodingContext& ctx);
// L_N(|S|) + sum of description lengths; the empty list costs 0 bits.
double model_length(std::span<const Description> descriptions, const EncodingContext& ctx);
double model_length(const SubgroupList& list, const EncodingContext& ctx);

// log2 of the multinomial NML normalizer C(n, k); cached, safe for concurrent use.
double multinomial_complexity(std::size_t n, std::size_t k);

double nml_categorical(const CategoricalStats& stats, std::size_t k);
double nml_categorical(const CategoricalStats& stats);
double known_categorical(const CategoricalStats& stats, std::span<const double> dataset_probs);

struct TwoPointSelection {
    double first = 0.0;
    double second = 0.0;
    double cost = 0.0;  // L(pair | mu_d, sigma_d) - L_Bayes(pair)
};

// The two distinct values nearest to the dataset mean (ties toward the smaller value).
// Throws DegenerateSubgroup when fewer than two distinct values exist.
TwoPointSelection two_point_selection(std::span<const double> values, const NormalStats& dataset);
// Cost of conditioning on an explicit pair (a != b).
double two_point_cost(double a, double b, const NormalStats& dataset);

// Bayesian code without the conditioning correction: -log2 of the Jeffreys-prior marginal.
double bayes_marginal(std::size_t n, double rss);
double bayes_normal(const NormalStats& stats, double l_cost);
double bayes_normal(const NormalStats& stats, const TwoPointSelection& pair);

double known_normal(std::span<const double> values, double mu, double sigma);
// Same code from sufficient statistics: RSS about mu = rss + n (mean - mu)^2.
double known_normal(const NormalStats& slice, double mu, double sigma);

// Unknown-parameter code of one target slice (NML or Bayes2.0); 0 bits for an empty slice.
double subgroup_target_length(const Dataset& data, std::size_t target_index, const Bitset& rows,
                              const EncodingContext& ctx);
// Known-parameter code of one target slice under the default statistics.
double default_target_length(const Dataset& data, std::size_t target_index, const Bitset& rows,
                             const EncodingContext& ctx);

double data_length(const Dataset& data, const Partition& partition, const EncodingContext& ctx);
double data_length(const Dataset& data, std::span<const Description> descriptions, const EncodingContext& ctx);
double data_length(const Dataset& data, const SubgroupList& list, const EncodingContext& ctx);

double total_length(const Dataset& data, std::span<const Description> descriptions, const EncodingContext& ctx);
double total_length(const Dataset& data, const SubgroupList& list, const EncodingContext& ctx);

}  // namespace ssdpp
