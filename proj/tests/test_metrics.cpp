#include <cmath>
#include <numbers>
#include <random>

#include "doctest.h"
#include "ssdpp/errors.hpp"
#include "ssdpp/metrics.hpp"
#include "ssdpp/search.hpp"
#include "support.hpp"

using namespace ssdpp;
using doctest::Approx;

TEST_CASE("categorical kl") {
    const std::vector<double> p{0.2, 0.3, 0.5};
    CHECK(kl_categorical(p, p) == Approx(0.0).epsilon(1e-12));
    CHECK(kl_categorical(std::vector<double>{1, 0}, std::vector<double>{0.5, 0.5}) == Approx(1.0));
    CHECK_THROWS_AS(kl_categorical(std::vector<double>{0.5, 0.5}, std::vector<double>{1, 0}), DomainError);
    CHECK_THROWS_AS(kl_categorical(std::vector<double>{1}, std::vector<double>{0.5, 0.5}), DomainError);
    std::mt19937_64 rng(1);
    std::uniform_real_distribution<double> u(0.01, 1.0);
    for (int t = 0; t < 100; ++t) {
        std::vector<double> a(4), b(4);
        double sa = 0, sb = 0;
        for (int i = 0; i < 4; ++i) sa += a[i] = u(rng), sb += b[i] = u(rng);
        for (int i = 0; i < 4; ++i) a[i] /= sa, b[i] /= sb;
        CHECK(kl_categorical(a, b) >= 0.0);
    }
}

TEST_CASE("normal kl") {
    CHECK(kl_normal_mu(3.0, 3.0, 2.0) == 0.0);
    CHECK(kl_normal_mu(2.0, 1.0, 1.0) == 1.0);
    CHECK(kl_normal_mu(35.0, 13.0, 8.0) == Approx(60.5));
    CHECK_THROWS_AS(kl_normal_mu(0, 0, 0), DomainError);
    CHECK(kl_normal_full(1.0, 2.0, 1.0, 2.0) == Approx(0.0).epsilon(1e-12));
    CHECK(kl_normal_full(3.0, 2.0, 1.0, 2.0) == Approx(std::numbers::log2e / 2).epsilon(1e-12));
    CHECK(kl_normal_full(0.0, 0.5, 0.0, 1.0) > 0.0);
    CHECK_THROWS_AS(kl_normal_full(0, 0, 0, 1), DomainError);
}

TEST_CASE("normal kl matches the encoding gain at large n") {
    std::mt19937_64 rng(8);
    std::normal_distribution<double> dataset(0.0, 2.0), sub(1.0, 1.5);
    NormalStats d;
    d.n = 100000;
    d.mean = 0.0;
    d.variance = 4.0;
    d.rss = 4.0 * 100000;
    std::vector<double> v(10000);
    for (auto& x : v) x = sub(rng);
    const auto s = estimate_normal(v);
    const double gain = known_normal(v, d.mean, d.stddev()) - bayes_normal(s, two_point_selection(v, d));
    const double wkl_value = 10000.0 * kl_normal_full(s.mean, s.stddev(), d.mean, d.stddev());
    CHECK(std::abs(gain - wkl_value) / 10000.0 < 0.01);
}

TEST_CASE("swkl") {
    SUBCASE("empty list") {
        std::mt19937_64 rng(2);
        const auto data = testing::random_binary(rng, 100, 3, 0.3, 0.8);
        CHECK(swkl(SubgroupList(data), data) == 0.0);
    }
    SUBCASE("perfect separation of a balanced binary target") {
        const std::size_t n = 8124;
        std::vector<std::string> x(n), y(n);
        for (std::size_t r = 0; r < n; ++r) {
            x[r] = "g" + std::to_string(r % 6);
            y[r] = r % 6 < 3 ? "e" : "p";
        }
        std::vector<Column> cols{make_nominal_column("odor", Role::explanatory, x), make_nominal_column("class", Role::target, y)};
        const Dataset data(std::move(cols));
        std::vector<Description> list;
        for (std::uint32_t c = 0; c < 6; ++c) list.push_back(Description({Item::equals(0, c)}));
        CHECK(swkl(SubgroupList(data, list), data) == Approx(1.0).epsilon(1e-12));
    }
    SUBCASE("planted list against ground-truth covers") {
        const auto planted = testing::planted_numeric(12, 1200);
        const auto& data = planted.data;
        const SubgroupList list(data, planted.descriptions);
        const auto& y = data.column(data.targets()[0]).values;
        double dm = 0, dv = 0;
        for (double v : y) dm += v;
        dm /= static_cast<double>(y.size());
        for (double v : y) dv += (v - dm) * (v - dm);
        dv /= static_cast<double>(y.size());
        double expected = 0.0;
        for (const auto& cov : planted.covers) {
            double m = 0, var = 0;
            const double n = static_cast<double>(cov.count());
            cov.for_each([&](std::size_t r) { m += y[r]; });
            m /= n;
            cov.for_each([&](std::size_t r) { var += (y[r] - m) * (y[r] - m); });
            var /= n;
            expected += n * (std::log2(std::sqrt(dv / var)) + (var + (m - dm) * (m - dm)) / (2 * dv) * std::numbers::log2e -
                             std::numbers::log2e / 2);
        }
        expected /= static_cast<double>(data.n_rows());
        CHECK(swkl(list, data) == Approx(expected).epsilon(1e-9));
    }
    SUBCASE("invariant under condition order") {
        const auto planted = testing::planted_numeric(12, 600);
        std::vector<Description> reversed;
        for (const auto& d : planted.descriptions) {
            auto c = d.conditions();
            std::reverse(c.begin(), c.end());
            reversed.push_back(Description(c));
        }
        CHECK(swkl(SubgroupList(planted.data, reversed), planted.data) ==
              swkl(SubgroupList(planted.data, planted.descriptions), planted.data));
    }
}

TEST_CASE("compression ratio and summary") {
    const auto data = load_csv(testing::data_dir() + "/iris.csv", SchemaConfig{{"species"}, Kind::nominal, {}});
    SearchParams p;
    SearchSpace space(data, p);
    CHECK(compression_ratio(data, SubgroupList(data), space.context()) == 1.0);
    const auto r = ssd_plus_plus(space, p);
    REQUIRE_FALSE(r.list.empty());
    const double ratio = compression_ratio(data, r.list, space.context());
    CHECK(ratio < 1.0);
    CHECK(ratio > 0.0);
    const auto s = summarize(data, r.list, space.context());
    CHECK(s.n_subgroups == r.list.size());
    CHECK(s.compression_ratio == Approx(ratio));
    CHECK(s.swkl > 0.0);
    CHECK(s.total_bits == Approx(r.total_lengths.back()));
    double conds = 0;
    for (const auto& sg : r.list.subgroups()) conds += static_cast<double>(sg.description.size());
    CHECK(s.avg_conditions == Approx(conds / static_cast<double>(r.list.size())));
    CHECK(s.normalized_std_first == 0.0);

    const auto autos = load_csv(testing::data_dir() + "/automobile.csv", SchemaConfig{{"price"}, Kind::numeric, {"symbol"}});
    SearchSpace aspace(autos, p);
    const auto ar = ssd_plus_plus(aspace, p);
    const auto as = summarize(autos, ar.list, aspace.context());
    CHECK(as.normalized_std_first > 0.0);
    CHECK(as.normalized_std_first < 1.0);
}
