#pragma once

// Subgroup and list quality measures. All divergences in bits.

#include <cstddef>
#include <span>
#include <vector>

#include "ssdpp/dataset.hpp"
#include "ssdpp/encoding.hpp"
#include "ssdpp/model.hpp"

namespace ssdpp {

// sum p_c log2(p_c / q_c); throws DomainError when q_c = 0 < p_c or the lengths differ.
double kl_categorical(std::span<const double> p, std::span<const double> q);
// (mu_d - mu_a)^2 / sigma_d
double kl_normal_mu(double mu_a, double mu_d, double sigma_d);
double kl_normal_full(double mu_a, double sigma_a, double mu_d, double sigma_d);

// n_a * KL(subgroup || dataset), summed over targets. Numeric targets use the full normal KL.
double wkl(std::span<const TargetStatistics> subgroup, std::span<const TargetStatistics> dataset);
double swkl(const SubgroupList& list, const Dataset& data);

// L(D, M) / L(D | dataset marginal); exactly 1 for the empty list.
double compression_ratio(const Dataset& data, const SubgroupList& list, const EncodingContext& ctx);

struct ListSummary {
    std::size_t n_subgroups = 0;
    double avg_conditions = 0.0;
    double swkl = 0.0;
    double compression_ratio = 1.0;
    double total_bits = 0.0;
    double normalized_std_first = 0.0;  // numeric task only: sigma of the first subgroup / sigma_d
};

ListSummary summarize(const Dataset& data, const SubgroupList& list, const EncodingContext& ctx);

}  // namespace ssdpp
