#include "ssdpp/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "ssdpp/encoding.hpp"
#include "ssdpp/errors.hpp"

namespace ssdpp {

namespace {

std::uint64_t checked_power(std::size_t k, std::size_t n, std::uint64_t limit) {
    std::uint64_t total = 1;
    for (std::size_t i = 0; i < n; ++i) {
        if (total > limit / std::max<std::size_t>(k, 1)) return limit + 1;
        total *= k;
    }
    return total;
}

void check_sequence_budget(std::size_t n, std::size_t k, const OracleBudget& budget) {
    if (k == 0) throw DomainError("alphabet must be nonempty");
    if (n > budget.max_n) throw BudgetExceeded("sequence length " + std::to_string(n) + " exceeds budget");
    if (checked_power(k, n, budget.max_sequences) > budget.max_sequences)
        throw BudgetExceeded(std::to_string(k) + "^" + std::to_string(n) + " sequences exceed budget");
}

// Visits every sequence of length n over k symbols; fn receives the symbol vector.
template <class F>
void for_each_sequence(std::size_t n, std::size_t k, F&& fn) {
    std::vector<std::uint32_t> seq(n, 0);
    while (true) {
        fn(seq);
        std::size_t i = 0;
        while (i < n && ++seq[i] == k) seq[i++] = 0;
        if (i == n) return;
    }
}

long double ml_probability(std::span<const std::uint32_t> seq, std::size_t k) {
    if (seq.empty()) return 1.0L;
    std::vector<std::size_t> counts(k, 0);
    for (auto s : seq) ++counts[s];
    long double p = 1.0L;
    const long double n = static_cast<long double>(seq.size());
    for (auto c : counts)
        if (c > 0) p *= std::pow(static_cast<long double>(c) / n, static_cast<long double>(c));
    return p;
}

double log2_ml_probability(std::span<const std::uint32_t> seq, std::size_t k) {
    return static_cast<double>(std::log2(ml_probability(seq, k)));
}

// ln of the integral of prod N(y | mu, sigma) / sigma^2 over mu and sigma.
double log_marginal(std::span<const double> y, const QuadratureGrid& grid) {
    const double n = static_cast<double>(y.size());
    double mean = 0.0;
    for (double v : y) mean += v;
    mean /= n;
    double rss = 0.0;
    for (double v : y) rss += (v - mean) * (v - mean);
    const double s = std::sqrt(rss / n);
    if (!(s > 0.0)) throw DegenerateSubgroup("quadrature needs a sample with nonzero variance");

    auto odd = [](std::size_t p) { return std::max<std::size_t>(p | 1, 3); };
    const std::size_t nt = odd(grid.sigma_points), nv = odd(grid.mu_points);
    const double t0 = std::log(s * grid.sigma_low), t1 = std::log(s * grid.sigma_high);
    const double ht = (t1 - t0) / static_cast<double>(nt - 1);
    const double hv = 2.0 * grid.mu_halfwidth / static_cast<double>(nv - 1);
    auto simpson = [](std::size_t i, std::size_t count) {
        if (i == 0 || i + 1 == count) return 1.0;
        return i % 2 == 1 ? 4.0 : 2.0;
    };

    // sigma = e^t, mu = mean + sigma v: d(mu) d(sigma) / sigma^2 = dt dv
    const double shift = -n * std::log(s) - n / 2.0;
    long double sum = 0.0L;
    for (std::size_t i = 0; i < nt; ++i) {
        const double t = t0 + ht * static_cast<double>(i);
        const double sigma = std::exp(t);
        long double row = 0.0L;
        for (std::size_t j = 0; j < nv; ++j) {
            const double mu = mean + sigma * (-grid.mu_halfwidth + hv * static_cast<double>(j));
            double q = 0.0;
            for (double v : y) q += (v - mu) * (v - mu);
            const double logf = -n * t - q / (2.0 * sigma * sigma);
            row += simpson(j, nv) * std::exp(static_cast<long double>(logf - shift));
        }
        sum += simpson(i, nt) * row;
    }
    sum *= static_cast<long double>(ht * hv / 9.0);
    return -n / 2.0 * std::log(2.0 * std::numbers::pi) + shift + static_cast<double>(std::log(sum));
}

bool oracle_before(const Candidate& a, const Candidate& b, const Dataset& data) {
    return ranks_before(a, b, data);
}

}  // namespace

double enumerate_multinomial_complexity(std::size_t n, std::size_t k, const OracleBudget& budget) {
    check_sequence_budget(n, k, budget);
    long double sum = 0.0L;
    for_each_sequence(n, k, [&](const std::vector<std::uint32_t>& seq) { sum += ml_probability(seq, k); });
    return static_cast<double>(std::log2(sum));
}

double enumerate_partition_complexity(std::span<const std::size_t> part_sizes, std::size_t k,
                                      const OracleBudget& budget) {
    std::size_t total = 0;
    for (auto s : part_sizes) total += s;
    check_sequence_budget(total, k, budget);
    long double sum = 0.0L;
    for_each_sequence(total, k, [&](const std::vector<std::uint32_t>& seq) {
        long double p = 1.0L;
        std::size_t offset = 0;
        for (auto size : part_sizes) {
            p *= ml_probability(std::span(seq).subspan(offset, size), k);
            offset += size;
        }
        sum += p;
    });
    return static_cast<double>(std::log2(sum));
}

double enumerate_partition_nml(std::span<const std::vector<std::uint32_t>> parts, std::size_t k,
                               const OracleBudget& budget) {
    std::vector<std::size_t> sizes;
    double bits = 0.0;
    for (const auto& part : parts) {
        for (auto c : part)
            if (c >= k) throw DomainError("label outside the alphabet");
        sizes.push_back(part.size());
        bits -= log2_ml_probability(part, k);
    }
    return bits + enumerate_partition_complexity(sizes, k, budget);
}

std::optional<Candidate> exhaustive_top1(const Dataset& data, const SearchParams& params, const OracleBudget& budget) {
    params.validate(data);
    const std::size_t m = data.explanatory().size();
    if (m > budget.max_features)
        throw BudgetExceeded(std::to_string(m) + " explanatory variables exceed the exhaustive budget");
    const auto disc = Discretization::compute(data, params.n_cut);
    const auto items = generate_items(data, disc);
    const auto ctx = EncodingContext::build(data, disc, true);
    const std::size_t depth = std::min(params.max_depth, m);
    const std::size_t min_usage = std::max<std::size_t>(params.min_coverage, 1);
    const double baseline = total_length(data, std::span<const Description>{}, ctx);

    std::optional<Candidate> best;
    std::uint64_t visited = 0;
    std::vector<Item> chosen;

    auto evaluate = [&] {
        if (++visited > budget.max_descriptions) throw BudgetExceeded("description count exceeds budget");
        Description d(chosen);
        Bitset cover(data.n_rows());
        for (std::size_t r = 0; r < data.n_rows(); ++r)
            if (matches(d, data, r)) cover.set(r);
        const auto usage = cover.count();
        if (usage < min_usage) return;
        double total = 0.0;
        try {
            total = total_length(data, std::span<const Description>(&d, 1), ctx);
        } catch (const DegenerateSubgroup&) {
            return;
        }
        Candidate c;
        c.description = d;
        c.usage = usage;
        c.gain = baseline - total;
        c.model_gain = -model_length(std::span<const Description>(&d, 1), ctx);
        c.data_gain = c.gain - c.model_gain;
        if (!best || oracle_before(c, *best, data)) {
            c.cover = std::move(cover);
            c.statistics = estimate_statistics(data, c.cover);
            best = std::move(c);
        }
    };

    auto recurse = [&](auto&& self, std::size_t start) -> void {
        for (std::size_t i = start; i < items.size(); ++i) {
            const bool used = std::any_of(chosen.begin(), chosen.end(),
                                          [&](const Item& it) { return it.column == items[i].column; });
            if (used) continue;
            chosen.push_back(items[i]);
            evaluate();
            if (chosen.size() < depth) self(self, i + 1);
            chosen.pop_back();
        }
    };
    recurse(recurse, 0);

    if (!best || !(best->gain > 0.0)) return std::nullopt;
    return best;
}

double quadrature_bayes(std::span<const double> values, const NormalStats& dataset, const OracleBudget& budget) {
    if (values.size() < budget.min_quadrature_n)
        throw DomainError("quadrature needs at least " + std::to_string(budget.min_quadrature_n) + " values");
    if (values.size() > budget.max_quadrature_n)
        throw BudgetExceeded("quadrature sample of " + std::to_string(values.size()) + " values exceeds budget");
    const double sigma_d = std::sqrt(dataset.variance);
    if (!(sigma_d > 0.0)) throw DomainError("dataset standard deviation must be positive");

    std::vector<double> distinct(values.begin(), values.end());
    std::sort(distinct.begin(), distinct.end());
    distinct.erase(std::unique(distinct.begin(), distinct.end()), distinct.end());
    if (distinct.size() < 2) throw DegenerateSubgroup("sample has fewer than two distinct values");
    std::stable_sort(distinct.begin(), distinct.end(), [&](double a, double b) {
        return std::abs(a - dataset.mean) < std::abs(b - dataset.mean);
    });
    const double pair[2] = {distinct[0], distinct[1]};

    double known_pair = 0.0;
    for (double v : pair) {
        const double z = (v - dataset.mean) / sigma_d;
        known_pair += 0.5 * std::log2(2.0 * std::numbers::pi * sigma_d * sigma_d) + z * z / 2.0 * std::numbers::log2e;
    }
    const double ln_full = log_marginal(values, budget.grid);
    const double ln_pair = log_marginal(pair, budget.grid);
    return (ln_pair - ln_full) * std::numbers::log2e + known_pair;
}

double Residual::residual() const { return std::abs(oracle - implementation); }

std::vector<Residual> verification_suite(const OracleBudget& budget, std::uint64_t seed) {
    std::vector<Residual> out;
    std::mt19937_64 rng(seed);

    for (std::size_t k = 1; k <= 3; ++k) {
        for (std::size_t n = 1; n <= std::min<std::size_t>(8, budget.max_n); ++n) {
            out.push_back({"complexity n=" + std::to_string(n) + " k=" + std::to_string(k),
                           enumerate_multinomial_complexity(n, k, budget), multinomial_complexity(n, k), 1e-9});
        }
    }

    const std::size_t max_total = std::min<std::size_t>(8, budget.max_n);
    for (int trial = 0; trial < 20 && max_total >= 2; ++trial) {
        std::uniform_int_distribution<std::size_t> total_dist(2, max_total);
        const std::size_t total = total_dist(rng);
        const std::size_t n1 = std::uniform_int_distribution<std::size_t>(1, total - 1)(rng);
        const std::size_t k = std::uniform_int_distribution<std::size_t>(2, 3)(rng);
        std::uniform_int_distribution<std::uint32_t> label(0, static_cast<std::uint32_t>(k - 1));
        std::vector<std::vector<std::uint32_t>> parts(2);
        for (std::size_t i = 0; i < total; ++i) parts[i < n1 ? 0 : 1].push_back(label(rng));
        double closed = 0.0;
        for (const auto& part : parts) closed += nml_categorical(estimate_categorical(part, k), k);
        out.push_back({"partition nml sizes=" + std::to_string(n1) + "+" + std::to_string(total - n1) +
                           " k=" + std::to_string(k),
                       enumerate_partition_nml(parts, k, budget), closed, 1e-9});
    }

    std::normal_distribution<double> normal(0.0, 1.0);
    for (int trial = 0; trial < 20; ++trial) {
        const std::size_t n = std::uniform_int_distribution<std::size_t>(budget.min_quadrature_n,
                                                                         budget.max_quadrature_n)(rng);
        NormalStats d;
        d.n = 100;
        d.mean = normal(rng);
        d.variance = std::exp(normal(rng));
        d.rss = d.variance * static_cast<double>(d.n);
        std::vector<double> values(n);
        for (auto& v : values) v = std::round((d.mean + 1.5 * normal(rng)) * 100.0) / 100.0;
        const auto stats = estimate_normal(values);
        double closed = 0.0;
        try {
            closed = bayes_normal(stats, two_point_selection(values, d));
        } catch (const DegenerateSubgroup&) {
            continue;
        }
        out.push_back({"bayes quadrature n=" + std::to_string(n), quadrature_bayes(values, d, budget), closed, 1e-3});
    }
    return out;
}

}  // namespace ssdpp
