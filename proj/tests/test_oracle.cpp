#include <cmath>
#include <random>

#include "doctest.h"
#include "ssdpp/encoding.hpp"
#include "ssdpp/errors.hpp"
#include "ssdpp/oracle.hpp"
#include "support.hpp"

using namespace ssdpp;
using doctest::Approx;

namespace {

NormalStats dataset_stats(double mean, double sd) {
    NormalStats d;
    d.n = 100;
    d.mean = mean;
    d.variance = sd * sd;
    d.rss = d.variance * 100;
    return d;
}

double closed_form(const std::vector<double>& v, const NormalStats& d) {
    return bayes_normal(estimate_normal(v), two_point_selection(v, d));
}

}  // namespace

TEST_CASE("enumerated multinomial complexity") {
    CHECK(enumerate_multinomial_complexity(3, 2) == Approx(std::log2(26.0 / 9.0)).epsilon(1e-12));
    for (std::size_t n = 0; n <= 10; ++n) CHECK(enumerate_multinomial_complexity(n, 1) == 0.0);
    CHECK_THROWS_AS(enumerate_multinomial_complexity(18, 7), BudgetExceeded);
    OracleBudget small;
    small.max_sequences = 100;
    CHECK_THROWS_AS(enumerate_multinomial_complexity(7, 2, small), BudgetExceeded);
    CHECK_NOTHROW(enumerate_multinomial_complexity(6, 2, small));
}

TEST_CASE("nml of a partition is the sum over its parts") {
    std::mt19937_64 rng(2);
    for (int t = 0; t < 20; ++t) {
        const std::size_t total = std::uniform_int_distribution<std::size_t>(2, 8)(rng);
        const std::size_t n1 = std::uniform_int_distribution<std::size_t>(1, total - 1)(rng);
        const std::size_t k = std::uniform_int_distribution<std::size_t>(2, 3)(rng);
        const std::vector<std::size_t> sizes{n1, total - n1};
        CHECK(enumerate_partition_complexity(sizes, k) ==
              Approx(multinomial_complexity(n1, k) + multinomial_complexity(total - n1, k)).epsilon(1e-12));
        std::vector<std::vector<std::uint32_t>> parts(2);
        std::uniform_int_distribution<std::uint32_t> lab(0, static_cast<std::uint32_t>(k - 1));
        for (std::size_t i = 0; i < total; ++i) parts[i < n1 ? 0 : 1].push_back(lab(rng));
        double sum = 0.0;
        for (const auto& p : parts) sum += nml_categorical(estimate_categorical(p, k), k);
        CHECK(std::abs(enumerate_partition_nml(parts, k) - sum) <= 1e-9);
    }
    const std::vector<std::vector<std::uint32_t>> bad{{0, 3}};
    CHECK_THROWS_AS(enumerate_partition_nml(bad, 2), DomainError);
}

TEST_CASE("bayes quadrature") {
    const auto d = dataset_stats(0.5, 1.2);
    const std::vector<double> v{-1, 0, 1, 2};
    const double q = quadrature_bayes(v, d);
    CHECK(std::abs(q - closed_form(v, d)) < 1e-3);

    SUBCASE("scaling by two shifts oracle and closed form alike") {
        std::vector<double> w = v;
        for (auto& x : w) x *= 2.0;
        const auto d2 = dataset_stats(1.0, 2.4);
        const double dq = quadrature_bayes(w, d2) - q;
        const double dc = closed_form(w, d2) - closed_form(v, d);
        CHECK(dq == Approx(dc).epsilon(1e-6));
        CHECK(dc == Approx(4.0).epsilon(1e-9));
    }
    SUBCASE("grid refinement shrinks the residual") {
        OracleBudget coarse, fine;
        coarse.grid.mu_points = coarse.grid.sigma_points = 41;
        fine.grid.mu_points = fine.grid.sigma_points = 81;
        const double c = closed_form(v, d);
        const double r_coarse = std::abs(quadrature_bayes(v, d, coarse) - c);
        const double r_fine = std::abs(quadrature_bayes(v, d, fine) - c);
        MESSAGE("residual at 41 points " << r_coarse << ", at 81 points " << r_fine);
        CHECK(r_fine <= r_coarse / 2.0);
    }
    SUBCASE("budget") {
        CHECK_THROWS_AS(quadrature_bayes(std::vector<double>{1, 2}, d), DomainError);
        CHECK_THROWS_AS(quadrature_bayes(std::vector<double>(7, 1.0), d), BudgetExceeded);
        CHECK_THROWS_AS(quadrature_bayes(std::vector<double>{1, 1, 1}, d), DegenerateSubgroup);
    }
}

TEST_CASE("exhaustive top-1") {
    SUBCASE("dominant item") {
        const std::size_t n = 120;
        std::vector<std::string> a(n), b(n), y(n);
        std::mt19937_64 rng(5);
        std::bernoulli_distribution coin(0.5);
        for (std::size_t r = 0; r < n; ++r) {
            a[r] = r % 4 == 0 ? "1" : "0";
            b[r] = coin(rng) ? "1" : "0";
            y[r] = a[r] == "1" ? "p" : (coin(rng) ? "p" : "q");
        }
        std::vector<Column> cols{make_nominal_column("a", Role::explanatory, a), make_nominal_column("b", Role::explanatory, b),
                                 make_nominal_column("y", Role::target, y)};
        const Dataset data(std::move(cols));
        SearchParams p;
        p.top1 = true;
        p.beta = 0.0;
        const auto best = exhaustive_top1(data, p);
        REQUIRE(best);
        CHECK(best->description.to_string(data) == "a = 1");
        CHECK(best->gain == Approx(best->data_gain + best->model_gain));
    }
    SUBCASE("uniform data has no positive gain") {
        const std::size_t n = 64;
        std::vector<std::string> a(n), b(n), y(n);
        for (std::size_t r = 0; r < n; ++r) {
            a[r] = (r >> 1) & 1 ? "1" : "0";
            b[r] = (r >> 2) & 1 ? "1" : "0";
            y[r] = r & 1 ? "p" : "q";
        }
        std::vector<Column> cols{make_nominal_column("a", Role::explanatory, a), make_nominal_column("b", Role::explanatory, b),
                                 make_nominal_column("y", Role::target, y)};
        const Dataset data(std::move(cols));
        SearchParams p;
        p.top1 = true;
        CHECK_FALSE(exhaustive_top1(data, p).has_value());
    }
    SUBCASE("budget") {
        std::mt19937_64 rng(1);
        const auto data = testing::random_binary(rng, 50, 5, 0.3, 0.8);
        CHECK_THROWS_AS(exhaustive_top1(data, SearchParams{}), BudgetExceeded);
        OracleBudget tiny;
        tiny.max_descriptions = 3;
        const auto four = testing::random_binary(rng, 50, 4, 0.3, 0.8);
        CHECK_THROWS_AS(exhaustive_top1(four, SearchParams{}, tiny), BudgetExceeded);
    }
    SUBCASE("matches a wide beam with numeric features") {
        std::mt19937_64 rng(77);
        std::normal_distribution<double> normal(0.0, 1.0);
        for (int t = 0; t < 5; ++t) {
            const std::size_t n = 120;
            std::vector<double> x1(n), x2(n), y(n);
            for (std::size_t r = 0; r < n; ++r) {
                x1[r] = std::round(normal(rng) * 3);
                x2[r] = std::round(normal(rng) * 3);
                y[r] = normal(rng) + (x1[r] > 1 ? 2.0 : 0.0);
            }
            std::vector<Column> cols{make_numeric_column("x1", Role::explanatory, x1),
                                     make_numeric_column("x2", Role::explanatory, x2),
                                     make_numeric_column("y", Role::target, y)};
            const Dataset data(std::move(cols));
            SearchParams p;
            p.top1 = true;
            p.beta = 0.0;
            p.n_cut = 3;
            SearchSpace space(data, p);
            p.beam_width = space.items().size() * space.items().size();
            const auto beam = beam_search(SubgroupList(data), space, p);
            const auto exact = exhaustive_top1(data, p);
            REQUIRE(beam.has_value() == exact.has_value());
            if (beam) {
                CHECK(beam->description == exact->description);
                CHECK(beam->gain == Approx(exact->gain).epsilon(1e-9));
            }
        }
    }
}

TEST_CASE("verification suite") {
    OracleBudget b;
    b.grid.mu_points = b.grid.sigma_points = 801;
    const auto residuals = verification_suite(b, 3);
    CHECK(residuals.size() >= 24 + 20);
    for (const auto& r : residuals) {
        INFO(r.check);
        CHECK(r.ok());
    }
}
