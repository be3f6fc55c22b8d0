#include "ssdpp/search.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "ssdpp/errors.hpp"
#include "parallel.hpp"

namespace ssdpp {

void SearchParams::validate(const Dataset& data) const {
    if (beam_width == 0) throw ConfigurationError("beam width must be positive");
    if (max_depth == 0) throw ConfigurationError("maximum depth must be positive");
    if (n_cut == 0) throw ConfigurationError("number of cut points must be positive");
    if (!(beta >= 0.0 && beta <= 1.0)) throw ConfigurationError("beta must lie in [0, 1]");
    if (min_coverage == 0) throw ConfigurationError("minimum coverage must be positive");
    if (task && *task != data.target_kind())
        throw ConfigurationError("task '" + to_string(*task) + "' does not match the " +
                                 to_string(data.target_kind()) + " target columns");
    if (data.explanatory().empty()) throw ConfigurationError("dataset has no explanatory columns");
}

nlohmann::json SearchParams::to_json() const {
    nlohmann::json j{{"beam_width", beam_width}, {"max_depth", max_depth}, {"n_cut", n_cut},
                     {"beta", beta},             {"top1", top1},           {"min_coverage", min_coverage}};
    if (task) j["task"] = to_string(*task);
    return j;
}

SearchSpace::SearchSpace(const Dataset& data, const SearchParams& params)
    : data_(&data), disc_(Discretization::compute(data, params.n_cut)), items_(generate_items(data, disc_)) {
    params.validate(data);
    ctx_ = EncodingContext::build(data, disc_, params.top1);
    covers_.reserve(items_.size());
    for (const auto& it : items_) covers_.push_back(ssdpp::item_cover(data, it));
}

// ---------------------------------------------------------------------------------------------

GainScorer::GainScorer(const Dataset& data, const EncodingContext& ctx, std::size_t list_size, double beta,
                       std::size_t min_coverage)
    : data_(&data), ctx_(&ctx), beta_(beta), min_coverage_(std::max<std::size_t>(min_coverage, 1)) {
    if (!ctx.top1)
        list_delta_ = (list_size == 0 ? 0.0 : universal_integer_code(list_size)) - universal_integer_code(list_size + 1);
    if (ctx.target_kind == Kind::nominal) {
        for (std::size_t j = 0; j < ctx.target_columns.size(); ++j) {
            const auto& col = data.column(ctx.target_columns[j]);
            std::vector<Bitset> rows(col.cardinality(), Bitset(data.n_rows()));
            for (std::size_t r = 0; r < data.n_rows(); ++r) rows[col.codes[r]].set(r);
            class_rows_.push_back(std::move(rows));
            const auto p = std::get<CategoricalStats>(ctx.default_stats[j]).probabilities();
            std::vector<double> logp(p.size());
            for (std::size_t c = 0; c < p.size(); ++c) logp[c] = p[c] > 0.0 ? std::log2(p[c]) : 0.0;
            default_log2p_.push_back(std::move(logp));
        }
    }
}

std::optional<GainScorer::Score> GainScorer::score(const Bitset& rows, const Description& description) const {
    return score(rows, description_length(description, *ctx_));
}

std::optional<GainScorer::Score> GainScorer::score(const Bitset& rows, double description_bits) const {
    Score s;
    s.usage = rows.count();
    if (s.usage < min_coverage_) return std::nullopt;
    const double n = static_cast<double>(s.usage);
    for (std::size_t j = 0; j < ctx_->target_columns.size(); ++j) {
        if (ctx_->target_kind == Kind::nominal) {
            const auto& classes = class_rows_[j];
            double known = 0.0, fitted = 0.0;
            for (std::size_t c = 0; c < classes.size(); ++c) {
                const auto nc = Bitset::count_and(rows, classes[c]);
                if (nc == 0) continue;
                const double x = static_cast<double>(nc);
                known -= x * default_log2p_[j][c];
                fitted -= x * std::log2(x / n);
            }
            s.data_gain += known - (fitted + multinomial_complexity(s.usage, classes.size()));
        } else {
            const auto& col = data_->column(ctx_->target_columns[j]);
            thread_local std::vector<double> values;
            values.clear();
            double lo = 0.0, hi = 0.0;
            bool first = true;
            rows.for_each([&](std::size_t r) {
                const double v = col.values[r];
                values.push_back(v);
                if (first || v < lo) lo = v;
                if (first || v > hi) hi = v;
                first = false;
            });
            if (!(lo < hi)) return std::nullopt;
            const auto& dstats = std::get<NormalStats>(ctx_->default_stats[j]);
            const auto stats = estimate_normal(values);
            const auto pair = two_point_selection(values, dstats);
            s.data_gain += known_normal(stats, dstats.mean, dstats.stddev()) - bayes_normal(stats, pair);
        }
    }
    s.model_gain = list_delta_ - description_bits;
    s.gain = (s.data_gain + s.model_gain) / std::pow(n, beta_);
    return s;
}

double compression_gain(const SubgroupList& list, const Description& description, const Dataset& data,
                        const EncodingContext& ctx, double beta) {
    Bitset rows = description_cover(description, data);
    rows &= list.uncovered();
    if (rows.none()) throw DomainError("candidate covers no uncovered rows");
    GainScorer scorer(data, ctx, list.size(), beta);
    auto s = scorer.score(rows, description);
    if (!s) throw DegenerateSubgroup("candidate target slice has fewer than two distinct values");
    return s->gain;
}

double compression_gain(const SubgroupList& list, const Candidate& candidate, const Dataset& data,
                        const EncodingContext& ctx, double beta) {
    return compression_gain(list, candidate.description, data, ctx, beta);
}

double gain_rank_key(double gain) { return std::round(gain * 1e9); }

bool ranks_before(const Candidate& a, const Candidate& b, const Dataset& data) {
    const double ka = gain_rank_key(a.gain), kb = gain_rank_key(b.gain);
    if (ka != kb) return ka > kb;
    if (a.description.size() != b.description.size()) return a.description.size() < b.description.size();
    return a.description.to_string(data) < b.description.to_string(data);
}

// ---------------------------------------------------------------------------------------------

namespace {

struct Node {
    std::vector<std::uint32_t> items;  // ascending item indices = canonical order
    GainScorer::Score score;
    Bitset cover;
};

class BeamRanker {
public:
    explicit BeamRanker(const SearchSpace& space) : space_(&space) {}

    Description description(const std::vector<std::uint32_t>& ids) const {
        std::vector<Item> items;
        for (auto id : ids) items.push_back(space_->items()[id]);
        return Description(std::move(items));
    }

    bool before(const Node& a, const Node& b) const {
        const double ka = gain_rank_key(a.score.gain), kb = gain_rank_key(b.score.gain);
        if (ka != kb) return ka > kb;
        if (a.items.size() != b.items.size()) return a.items.size() < b.items.size();
        return description(a.items).to_string(space_->data()) < description(b.items).to_string(space_->data());
    }

private:
    const SearchSpace* space_;
};

}  // namespace

std::optional<Candidate> beam_search(const SubgroupList& list, const SearchSpace& space, const SearchParams& params) {
    const auto& data = space.data();
    const auto& ctx = space.context();
    const auto& items = space.items();
    if (items.empty()) return std::nullopt;
    GainScorer scorer(data, ctx, list.size(), params.beta, params.min_coverage);
    BeamRanker ranker(space);
    const std::size_t depth = std::min(params.max_depth, ctx.m);

    auto description_bits = [&](const std::vector<std::uint32_t>& ids) {
        double bits = universal_integer_code(ids.size()) + log2_binomial(ctx.m, ids.size());
        for (auto id : ids) bits += condition_length(items[id], ctx);
        return bits;
    };

    struct Proposal {
        std::uint32_t parent;
        std::uint32_t item;
        std::vector<std::uint32_t> ids;
    };

    std::optional<Node> best;
    std::vector<Node> beam;
    for (std::size_t level = 1; level <= depth; ++level) {
        std::vector<Proposal> proposals;
        if (level == 1) {
            for (std::uint32_t i = 0; i < items.size(); ++i) proposals.push_back({0, i, {i}});
        } else {
            std::set<std::vector<std::uint32_t>> seen;
            for (std::uint32_t b = 0; b < beam.size(); ++b) {
                for (std::uint32_t i = 0; i < items.size(); ++i) {
                    const auto column = items[i].column;
                    if (std::any_of(beam[b].items.begin(), beam[b].items.end(),
                                    [&](auto id) { return items[id].column == column; }))
                        continue;
                    auto ids = beam[b].items;
                    ids.insert(std::upper_bound(ids.begin(), ids.end(), i), i);
                    if (seen.insert(ids).second) proposals.push_back({b, i, std::move(ids)});
                }
            }
        }
        if (proposals.empty()) break;

        std::vector<std::optional<GainScorer::Score>> scores(proposals.size());
        const auto workers = detail::resolve_threads(params.threads);
        std::vector<Bitset> scratch(workers, Bitset(data.n_rows()));
        detail::parallel_for(proposals.size(), workers, [&](std::size_t w, std::size_t p) {
            const auto& prop = proposals[p];
            const Bitset& base = level == 1 ? list.uncovered() : beam[prop.parent].cover;
            Bitset::assign_and(scratch[w], base, space.item_cover(prop.item));
            scores[p] = scorer.score(scratch[w], description_bits(prop.ids));
        });

        std::vector<Node> level_nodes;
        for (std::size_t p = 0; p < proposals.size(); ++p)
            if (scores[p]) level_nodes.push_back({std::move(proposals[p].ids), *scores[p], Bitset{}});
        {
            std::vector<std::size_t> order(level_nodes.size());
            for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
            const auto keep = std::min(params.beam_width, order.size());
            std::partial_sort(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(keep), order.end(),
                              [&](std::size_t a, std::size_t b) { return ranker.before(level_nodes[a], level_nodes[b]); });
            order.resize(keep);
            std::vector<Node> next;
            next.reserve(keep);
            for (auto idx : order) {
                Node node = std::move(level_nodes[idx]);
                Bitset c = list.uncovered();
                for (auto id : node.items) c &= space.item_cover(id);
                node.cover = std::move(c);
                next.push_back(std::move(node));
            }
            beam = std::move(next);
        }
        if (beam.empty()) break;
        if (!best || ranker.before(beam.front(), *best)) best = beam.front();
    }

    if (!best || !(best->score.gain > 0.0)) return std::nullopt;
    Candidate out;
    out.description = ranker.description(best->items);
    out.cover = best->cover;
    out.usage = best->score.usage;
    out.statistics = estimate_statistics(data, best->cover);
    out.gain = best->score.gain;
    out.data_gain = best->score.data_gain;
    out.model_gain = best->score.model_gain;
    return out;
}

SearchResult ssd_plus_plus(const SearchSpace& space, const SearchParams& params) {
    const auto& data = space.data();
    SearchResult result{SubgroupList(data), {}, {}};
    result.total_lengths.push_back(total_length(data, result.list, space.context()));
    while (result.list.uncovered().count() >= std::max<std::size_t>(params.min_coverage, 1)) {
        auto best = beam_search(result.list, space, params);
        if (!best) break;
        result.list.append(best->description, data);
        result.gains.push_back(best->gain);
        result.total_lengths.push_back(total_length(data, result.list, space.context()));
        if (params.top1) break;
    }
    return result;
}

SearchResult ssd_plus_plus(const Dataset& data, const SearchParams& params) {
    SearchSpace space(data, params);
    return ssd_plus_plus(space, params);
}

}  // namespace ssdpp
