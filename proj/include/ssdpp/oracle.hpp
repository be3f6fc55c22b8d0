#pragma once

// Brute-force and numerical reference implementations used to audit the closed-form encodings
// and the beam search. Slow by design; every entry point enforces an explicit budget.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "ssdpp/dataset.hpp"
#include "ssdpp/model.hpp"
#include "ssdpp/search.hpp"

namespace ssdpp {

// sigma = exp(t) on a log grid [sigma_low * s, sigma_high * s]; mu = mean + sigma * v with
// v in [-mu_halfwidth, mu_halfwidth]. Point counts are rounded up to odd (Simpson's rule).
struct QuadratureGrid {
    double sigma_low = 1e-2;
    double sigma_high = 1e4;
    double mu_halfwidth = 10.0;
    std::size_t mu_points = 2001;
    std::size_t sigma_points = 2001;
};

struct OracleBudget {
    std::size_t max_n = 10;                 // sequence length for enumeration
    std::uint64_t max_sequences = 10'000'000;
    std::size_t max_features = 4;           // explanatory variables for exhaustive search
    std::uint64_t max_descriptions = 1'000'000;
    std::size_t min_quadrature_n = 3;
    std::size_t max_quadrature_n = 6;
    QuadratureGrid grid;
};

// log2 of the sum over all k^n sequences of their maximum-likelihood probability.
double enumerate_multinomial_complexity(std::size_t n, std::size_t k, const OracleBudget& budget = {});

// log2 of the sum, over all joint labelings of parts with the given sizes, of the product of the
// per-part maximum-likelihood probabilities.
double enumerate_partition_complexity(std::span<const std::size_t> part_sizes, std::size_t k,
                                      const OracleBudget& budget = {});

// NML code length of labeled parts (codes in [0, k)) normalized over the joint sequence space.
double enumerate_partition_nml(std::span<const std::vector<std::uint32_t>> parts, std::size_t k,
                               const OracleBudget& budget = {});

// Exhaustive top-1 search: every description of up to min(max_depth, m) conditions, gains from
// full code-length recomputation, unnormalized. nullopt when no gain is positive.
std::optional<Candidate> exhaustive_top1(const Dataset& data, const SearchParams& params,
                                         const OracleBudget& budget = {});

// Bayesian code of a numeric sample by 2-D quadrature of the marginal likelihood, conditioned on
// the two distinct values nearest to the dataset mean.
double quadrature_bayes(std::span<const double> values, const NormalStats& dataset, const OracleBudget& budget = {});

struct Residual {
    std::string check;
    double oracle = 0.0;
    double implementation = 0.0;
    double tolerance = 0.0;

    double residual() const;
    bool ok() const { return residual() <= tolerance; }
};

// Random oracle-vs-implementation comparisons.
std::vector<Residual> verification_suite(const OracleBudget& budget, std::uint64_t seed = 1);

}  // namespace ssdpp
