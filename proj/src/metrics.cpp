#include "ssdpp/metrics.hpp"

#include <cmath>
#include <numbers>

#include "ssdpp/errors.hpp"

namespace ssdpp {

double kl_categorical(std::span<const double> p, std::span<const double> q) {
    if (p.size() != q.size()) throw DomainError("distributions have different supports");
    double kl = 0.0;
    for (std::size_t c = 0; c < p.size(); ++c) {
        if (p[c] <= 0.0) continue;
        if (q[c] <= 0.0) throw DomainError("reference distribution is zero where the other is not");
        kl += p[c] * std::log2(p[c] / q[c]);
    }
    return kl;
}

double kl_normal_mu(double mu_a, double mu_d, double sigma_d) {
    if (!(sigma_d > 0.0)) throw DomainError("standard deviation must be positive");
    return (mu_d - mu_a) * (mu_d - mu_a) / sigma_d;
}

double kl_normal_full(double mu_a, double sigma_a, double mu_d, double sigma_d) {
    if (!(sigma_a > 0.0) || !(sigma_d > 0.0)) throw DomainError("standard deviations must be positive");
    const double diff = mu_a - mu_d;
    return std::log2(sigma_d / sigma_a) +
           (sigma_a * sigma_a + diff * diff) / (2.0 * sigma_d * sigma_d) * std::numbers::log2e -
           std::numbers::log2e / 2.0;
}

double wkl(std::span<const TargetStatistics> subgroup, std::span<const TargetStatistics> dataset) {
    if (subgroup.size() != dataset.size()) throw DomainError("target count mismatch");
    double total = 0.0;
    for (std::size_t j = 0; j < subgroup.size(); ++j) {
        if (const auto* a = std::get_if<CategoricalStats>(&subgroup[j])) {
            const auto& d = std::get<CategoricalStats>(dataset[j]);
            if (a->n == 0) continue;
            total += static_cast<double>(a->n) * kl_categorical(a->probabilities(), d.probabilities());
        } else {
            const auto& a2 = std::get<NormalStats>(subgroup[j]);
            const auto& d = std::get<NormalStats>(dataset[j]);
            if (a2.n == 0) continue;
            total += static_cast<double>(a2.n) * kl_normal_full(a2.mean, a2.stddev(), d.mean, d.stddev());
        }
    }
    return total;
}

double swkl(const SubgroupList& list, const Dataset& data) {
    double total = 0.0;
    for (const auto& s : list.subgroups()) total += wkl(s.statistics, list.default_stats());
    return total / static_cast<double>(data.n_rows());
}

double compression_ratio(const Dataset& data, const SubgroupList& list, const EncodingContext& ctx) {
    if (list.empty()) return 1.0;
    const double baseline = data_length(data, SubgroupList(data), ctx);
    return total_length(data, list, ctx) / baseline;
}

ListSummary summarize(const Dataset& data, const SubgroupList& list, const EncodingContext& ctx) {
    ListSummary s;
    s.n_subgroups = list.size();
    for (const auto& sg : list.subgroups()) s.avg_conditions += static_cast<double>(sg.description.size());
    if (!list.empty()) s.avg_conditions /= static_cast<double>(list.size());
    s.swkl = swkl(list, data);
    s.total_bits = total_length(data, list, ctx);
    s.compression_ratio = list.empty() ? 1.0 : s.total_bits / data_length(data, SubgroupList(data), ctx);
    if (!list.empty() && ctx.target_kind == Kind::numeric) {
        const auto& first = std::get<NormalStats>(list.subgroups().front().statistics.front());
        const auto& d = std::get<NormalStats>(list.default_stats().front());
        s.normalized_std_first = first.stddev() / d.stddev();
    }
    return s;
}

}  // namespace ssdpp
