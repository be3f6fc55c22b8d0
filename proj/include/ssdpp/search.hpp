#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "json.hpp"

#include "ssdpp/bitset.hpp"
#include "ssdpp/dataset.hpp"
#include "ssdpp/encoding.hpp"
#include "ssdpp/model.hpp"

namespace ssdpp {

struct SearchParams {
    std::size_t beam_width = 100;
    std::size_t max_depth = 5;
    std::size_t n_cut = 5;
    double beta = 1.0;              // 1: normalized gain, 0: absolute gain
    std::optional<Kind> task;       // must match the dataset's target kind when set
    bool top1 = false;
    std::size_t min_coverage = 2;
    std::size_t threads = 0;        // 0: hardware concurrency; never affects results

    // Throws ConfigurationError.
    void validate(const Dataset& data) const;
    // Thread count is deliberately left out so reports do not depend on it.
    nlohmann::json to_json() const;
};

struct Candidate {
    Description description;
    Bitset cover;  // rows of the candidate among those not covered by the current list
    std::size_t usage = 0;
    std::vector<TargetStatistics> statistics;
    double gain = 0.0;        // normalized by usage^beta
    double data_gain = 0.0;   // bits, unnormalized
    double model_gain = 0.0;  // bits, unnormalized (negative)
};

// Items, their covers and the encoding context; frozen for a whole run.
class SearchSpace {
public:
    SearchSpace(const Dataset& data, const SearchParams& params);

    const Dataset& data() const { return *data_; }
    const Discretization& discretization() const { return disc_; }
    const std::vector<Item>& items() const { return items_; }
    const Bitset& item_cover(std::size_t i) const { return covers_[i]; }
    const EncodingContext& context() const { return ctx_; }

private:
    const Dataset* data_;
    Discretization disc_;
    std::vector<Item> items_;
    std::vector<Bitset> covers_;
    EncodingContext ctx_;
};

// Incremental scorer: data part = known code of the slice under the default statistics minus
// its unknown-parameter code; model part = L(M) - L(M + s).
class GainScorer {
public:
    GainScorer(const Dataset& data, const EncodingContext& ctx, std::size_t list_size, double beta,
               std::size_t min_coverage = 1);

    struct Score {
        double gain = 0.0;
        double data_gain = 0.0;
        double model_gain = 0.0;
        std::size_t usage = 0;
    };

    // nullopt when the candidate is not encodable: usage below the minimum or a numeric target
    // with fewer than two distinct values.
    std::optional<Score> score(const Bitset& rows, const Description& description) const;
    std::optional<Score> score(const Bitset& rows, double description_bits) const;

private:
    const Dataset* data_;
    const EncodingContext* ctx_;
    double beta_;
    std::size_t min_coverage_;
    double list_delta_ = 0.0;  // L_N(|S|) - L_N(|S|+1), or 0 in top-1 mode
    std::vector<std::vector<Bitset>> class_rows_;       // nominal: per target, per class
    std::vector<std::vector<double>> default_log2p_;   // nominal: per target, per class
};

// Compression gain of appending `description` to `list`; throws DegenerateSubgroup when the
// numeric slice cannot be encoded and DomainError on an empty cover.
double compression_gain(const SubgroupList& list, const Description& description, const Dataset& data,
                        const EncodingContext& ctx, double beta);
double compression_gain(const SubgroupList& list, const Candidate& candidate, const Dataset& data,
                        const EncodingContext& ctx, double beta);

// Gains are compared after rounding to 1e-9 bits so that candidates with equal covers and
// lengths tie regardless of summation order.
double gain_rank_key(double gain);

// Ranking: higher gain, then fewer conditions, then smaller description string.
bool ranks_before(const Candidate& a, const Candidate& b, const Dataset& data);

// Best candidate over all beam levels on the rows not covered by `list`; nullopt when no
// candidate has a positive gain.
std::optional<Candidate> beam_search(const SubgroupList& list, const SearchSpace& space, const SearchParams& params);

struct SearchResult {
    SubgroupList list;
    std::vector<double> gains;          // gain at insertion, per subgroup
    std::vector<double> total_lengths;  // L(D, M) after 0, 1, ... subgroups
};

SearchResult ssd_plus_plus(const Dataset& data, const SearchParams& params);
SearchResult ssd_plus_plus(const SearchSpace& space, const SearchParams& params);

}  // namespace ssdpp
