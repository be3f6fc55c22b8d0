#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "ssdpp/dataset.hpp"
#include "ssdpp/model.hpp"

namespace testing {

using namespace ssdpp;

inline std::vector<std::string> labels(std::initializer_list<const char*> xs) { return {xs.begin(), xs.end()}; }

// Binary nominal features x1..xm ("0"/"1") and a binary nominal target y. The target is "1" with
// probability p_hit on rows matching a random conjunction of up to two features and p_base elsewhere.
inline Dataset random_binary(std::mt19937_64& rng, std::size_t n, std::size_t m, double p_base, double p_hit) {
    std::bernoulli_distribution coin(0.5);
    std::vector<std::vector<std::string>> x(m, std::vector<std::string>(n));
    for (auto& col : x)
        for (auto& v : col) v = coin(rng) ? "1" : "0";
    const std::size_t a = std::uniform_int_distribution<std::size_t>(0, m - 1)(rng);
    const std::size_t b = std::uniform_int_distribution<std::size_t>(0, m - 1)(rng);
    std::vector<std::string> y(n);
    for (std::size_t r = 0; r < n; ++r) {
        const bool hit = a == b ? x[a][r] == "1" : (x[a][r] == "1" && x[b][r] == "0");
        y[r] = std::bernoulli_distribution(hit ? p_hit : p_base)(rng) ? "1" : "0";
    }
    std::vector<Column> cols;
    for (std::size_t j = 0; j < m; ++j) cols.push_back(make_nominal_column("x" + std::to_string(j + 1), Role::explanatory, x[j]));
    cols.push_back(make_nominal_column("y", Role::target, y));
    return Dataset(std::move(cols));
}

// i.i.d. binary features and an independent binary target drawn from one marginal.
inline Dataset null_binary(std::mt19937_64& rng, std::size_t n, std::size_t m) {
    std::bernoulli_distribution coin(0.5);
    std::vector<Column> cols;
    for (std::size_t j = 0; j < m; ++j) {
        std::vector<std::string> v(n);
        for (auto& s : v) s = coin(rng) ? "1" : "0";
        cols.push_back(make_nominal_column("x" + std::to_string(j + 1), Role::explanatory, v));
    }
    std::vector<std::string> y(n);
    for (auto& s : y) s = coin(rng) ? "1" : "0";
    cols.push_back(make_nominal_column("y", Role::target, y));
    return Dataset(std::move(cols));
}

struct Planted {
    Dataset data;
    std::vector<Description> descriptions;  // ground truth, in generator order
    std::vector<Bitset> covers;
    double delta = 0.0;
};

// Five nominal variables with six categories; standard normal noise shifted by +delta, -delta,
// +delta on three disjoint conjunctions. delta is solved so that delta = 3 * sigma of the result.
inline Planted planted_numeric(std::uint64_t seed, std::size_t n = 2000) {
    std::mt19937_64 rng(seed);
    const std::vector<std::string> cats{"a", "b", "c", "d", "e", "f"};
    std::uniform_int_distribution<std::size_t> pick(0, cats.size() - 1);
    std::vector<std::vector<std::string>> x(5, std::vector<std::string>(n));
    for (auto& col : x)
        for (auto& v : col) v = cats[pick(rng)];
    std::normal_distribution<double> normal(0.0, 1.0);
    std::vector<double> e(n), s(n, 0.0);
    for (auto& v : e) v = normal(rng);
    for (std::size_t r = 0; r < n; ++r) {
        if (x[0][r] == "a" && x[1][r] == "a") s[r] = 1.0;
        if (x[0][r] == "b" && x[2][r] == "a") s[r] = -1.0;
        if (x[0][r] == "c" && x[3][r] == "a") s[r] = 1.0;
    }
    auto mean = [](const std::vector<double>& v) {
        double m = 0.0;
        for (double a : v) m += a;
        return m / static_cast<double>(v.size());
    };
    const double me = mean(e), ms = mean(s);
    double var_e = 0.0, var_s = 0.0, cov = 0.0;
    for (std::size_t r = 0; r < n; ++r) {
        var_e += (e[r] - me) * (e[r] - me);
        var_s += (s[r] - ms) * (s[r] - ms);
        cov += (e[r] - me) * (s[r] - ms);
    }
    var_e /= static_cast<double>(n);
    var_s /= static_cast<double>(n);
    cov /= static_cast<double>(n);
    // delta^2 = 9 (var_e + 2 delta cov + delta^2 var_s)
    const double qa = 1.0 - 9.0 * var_s, qb = -18.0 * cov, qc = -9.0 * var_e;
    const double delta = (-qb + std::sqrt(qb * qb - 4.0 * qa * qc)) / (2.0 * qa);
    std::vector<double> y(n);
    for (std::size_t r = 0; r < n; ++r) y[r] = e[r] + delta * s[r];

    std::vector<Column> cols;
    for (std::size_t j = 0; j < 5; ++j) cols.push_back(make_nominal_column("x" + std::to_string(j + 1), Role::explanatory, x[j]));
    cols.push_back(make_numeric_column("y", Role::target, y));
    Planted p{Dataset(std::move(cols)), {}, {}, delta};
    auto code = [&](std::size_t col, const std::string& cat) {
        const auto& c = p.data.column(col).categories;
        return static_cast<std::uint32_t>(std::find(c.begin(), c.end(), cat) - c.begin());
    };
    p.descriptions = {Description({Item::equals(0, code(0, "a")), Item::equals(1, code(1, "a"))}),
                      Description({Item::equals(0, code(0, "b")), Item::equals(2, code(2, "a"))}),
                      Description({Item::equals(0, code(0, "c")), Item::equals(3, code(3, "a"))})};
    for (std::size_t g = 0; g < 3; ++g) p.covers.emplace_back(n);
    for (std::size_t r = 0; r < n; ++r) {
        if (x[0][r] == "a" && x[1][r] == "a") p.covers[0].set(r);
        if (x[0][r] == "b" && x[2][r] == "a") p.covers[1].set(r);
        if (x[0][r] == "c" && x[3][r] == "a") p.covers[2].set(r);
    }
    return p;
}

inline std::string data_dir() { return SSDPP_TEST_DATA_DIR; }

}  // namespace testing
