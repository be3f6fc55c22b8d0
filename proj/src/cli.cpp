#include "ssdpp/cli.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include "CLI11.hpp"

#include "ssdpp/errors.hpp"
#include "ssdpp/metrics.hpp"
#include "ssdpp/oracle.hpp"
#include "ssdpp/report.hpp"
#include "ssdpp/search.hpp"

namespace ssdpp {

namespace {

struct RunConfig {
    std::string input;
    std::string schema;
    std::vector<std::string> targets;
    std::vector<std::string> nominal;
    std::string task;
    SearchParams params;
    std::string format = "text";
    std::string output;
    std::string list;
    std::string verify_budget;
    std::uint64_t seed = 1;
    std::vector<double> betas{0.0, 0.25, 0.5, 0.75, 1.0};
};

nlohmann::json read_json_arg(const std::string& value, const std::string& what) {
    std::string text = value;
    if (value.empty() || value.front() != '{') {
        std::ifstream in(value, std::ios::binary);
        if (!in) throw IoError("cannot open " + what + " '" + value + "'");
        std::ostringstream buf;
        buf << in.rdbuf();
        text = buf.str();
    }
    try {
        return nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw ConfigurationError("invalid " + what + " JSON: " + e.what());
    }
}

Dataset load_dataset(const RunConfig& cfg) {
    SchemaConfig schema;
    bool kind_known = false;
    if (!cfg.schema.empty()) {
        const auto j = read_json_arg(cfg.schema, "schema");
        schema = SchemaConfig::from_json(j);
        kind_known = j.contains("target_kind");
    }
    if (!cfg.targets.empty()) schema.targets = cfg.targets;
    if (!cfg.nominal.empty()) schema.nominal_explanatory = cfg.nominal;
    if (!cfg.task.empty()) {
        const auto kind = kind_from_string(cfg.task);
        if (kind_known && kind != schema.target_kind)
            throw ConfigurationError("--task " + cfg.task + " contradicts the schema's target_kind");
        schema.target_kind = kind;
        kind_known = true;
    }
    if (schema.targets.empty()) throw ConfigurationError("no target columns: pass --targets or --schema");
    if (!kind_known) throw ConfigurationError("target kind unknown: pass --task nominal|numeric");
    return load_csv(cfg.input, schema);
}

SearchParams effective_params(const RunConfig& cfg) {
    SearchParams p = cfg.params;
    if (!cfg.task.empty()) p.task = kind_from_string(cfg.task);
    return p;
}

void write_output(const RunConfig& cfg, const std::string& text, std::ostream& out) {
    if (cfg.output.empty() || cfg.output == "-") {
        out << text;
        return;
    }
    std::ofstream file(cfg.output, std::ios::binary);
    if (!file) throw IoError("cannot write '" + cfg.output + "'");
    file << text;
    if (!file) throw IoError("failed writing '" + cfg.output + "'");
}

int cmd_discover(const RunConfig& cfg, std::ostream& out) {
    const auto data = load_dataset(cfg);
    const auto params = effective_params(cfg);
    SearchSpace space(data, params);
    const auto result = ssd_plus_plus(space, params);
    const auto report = make_report(data, result.list, result.gains, space.context(), params.to_json());
    write_output(cfg, render(report, format_from_string(cfg.format)), out);
    return 0;
}

int cmd_evaluate(const RunConfig& cfg, const CLI::App& sub, std::ostream& out) {
    const auto data = load_dataset(cfg);
    const auto listed = read_json_arg(cfg.list, "subgroup list");
    auto params = effective_params(cfg);
    if (listed.contains("params") && listed.at("params").is_object()) {
        const auto& p = listed.at("params");
        try {
            if (sub.count("--cutpoints") == 0 && p.contains("n_cut")) params.n_cut = p.at("n_cut").get<std::size_t>();
            if (sub.count("--beta") == 0 && p.contains("beta")) params.beta = p.at("beta").get<double>();
            if (sub.count("--top1") == 0 && p.contains("top1")) params.top1 = p.at("top1").get<bool>();
            if (sub.count("--min-coverage") == 0 && p.contains("min_coverage"))
                params.min_coverage = p.at("min_coverage").get<std::size_t>();
            if (sub.count("--beam-width") == 0 && p.contains("beam_width"))
                params.beam_width = p.at("beam_width").get<std::size_t>();
            if (sub.count("--depth") == 0 && p.contains("max_depth")) params.max_depth = p.at("max_depth").get<std::size_t>();
        } catch (const nlohmann::json::exception& e) {
            throw ConfigurationError(std::string("invalid params in subgroup list: ") + e.what());
        }
    }
    params.validate(data);
    const auto disc = Discretization::compute(data, params.n_cut);
    const auto ctx = EncodingContext::build(data, disc, params.top1);
    const auto descriptions = descriptions_from_report(listed, data);
    const SubgroupList list(data, descriptions);
    const auto gains = insertion_gains(data, descriptions, ctx, params.beta);
    const auto report = make_report(data, list, gains, ctx, params.to_json());
    write_output(cfg, render(report, format_from_string(cfg.format)), out);
    return 0;
}

OracleBudget budget_from_json(const nlohmann::json& j) {
    OracleBudget b;
    try {
        b.max_n = j.value("max_n", b.max_n);
        b.max_sequences = j.value("max_sequences", b.max_sequences);
        b.max_features = j.value("max_features", b.max_features);
        b.max_descriptions = j.value("max_descriptions", b.max_descriptions);
        b.min_quadrature_n = j.value("min_quadrature_n", b.min_quadrature_n);
        b.max_quadrature_n = j.value("max_quadrature_n", b.max_quadrature_n);
        if (j.contains("quadrature")) {
            const auto& q = j.at("quadrature");
            b.grid.sigma_low = q.value("sigma_low", b.grid.sigma_low);
            b.grid.sigma_high = q.value("sigma_high", b.grid.sigma_high);
            b.grid.mu_halfwidth = q.value("mu_halfwidth", b.grid.mu_halfwidth);
            b.grid.mu_points = q.value("mu_points", b.grid.mu_points);
            b.grid.sigma_points = q.value("sigma_points", b.grid.sigma_points);
        }
    } catch (const nlohmann::json::exception& e) {
        throw ConfigurationError(std::string("invalid verification budget: ") + e.what());
    }
    if (b.max_n > 10) throw ConfigurationError("verification budget max_n must not exceed 10");
    if (b.max_features > 4) throw ConfigurationError("verification budget max_features must not exceed 4");
    if (b.min_quadrature_n < 3 || b.max_quadrature_n < b.min_quadrature_n)
        throw ConfigurationError("verification budget quadrature sizes must satisfy 3 <= min <= max");
    return b;
}

int cmd_verify(const RunConfig& cfg, std::ostream& out) {
    const auto budget = cfg.verify_budget.empty() ? OracleBudget{} : budget_from_json(read_json_arg(cfg.verify_budget, "budget"));
    const auto residuals = verification_suite(budget, cfg.seed);
    bool all_ok = true;
    for (const auto& r : residuals) all_ok = all_ok && r.ok();
    const auto format = format_from_string(cfg.format);
    std::ostringstream text;
    if (format == Format::json) {
        nlohmann::json arr = nlohmann::json::array();
        for (const auto& r : residuals)
            arr.push_back({{"check", r.check}, {"oracle", r.oracle}, {"implementation", r.implementation},
                           {"residual", r.residual()}, {"tolerance", r.tolerance}, {"ok", r.ok()}});
        text << nlohmann::json{{"checks", arr}, {"ok", all_ok}}.dump(2) << "\n";
    } else {
        for (const auto& r : residuals) {
            char line[256];
            std::snprintf(line, sizeof line, "%-4s %-36s oracle %.12g  implementation %.12g  residual %.3g (tol %.0e)\n",
                          r.ok() ? "ok" : "FAIL", r.check.c_str(), r.oracle, r.implementation, r.residual(),
                          r.tolerance);
            text << line;
        }
        text << (all_ok ? "all checks passed" : "some checks failed") << "\n";
    }
    write_output(cfg, text.str(), out);
    return all_ok ? 0 : 1;
}

int cmd_sweep(const RunConfig& cfg, std::ostream& out) {
    const auto data = load_dataset(cfg);
    nlohmann::json rows = nlohmann::json::array();
    for (double beta : cfg.betas) {
        auto params = effective_params(cfg);
        params.beta = beta;
        SearchSpace space(data, params);
        const auto result = ssd_plus_plus(space, params);
        const auto s = summarize(data, result.list, space.context());
        rows.push_back({{"beta", beta},
                        {"n_subgroups", s.n_subgroups},
                        {"avg_conditions", s.avg_conditions},
                        {"swkl", s.swkl},
                        {"compression_ratio", s.compression_ratio}});
    }
    std::ostringstream text;
    const auto format = format_from_string(cfg.format);
    if (format == Format::json) {
        text << rows.dump(2) << "\n";
    } else {
        std::vector<std::vector<std::string>> table{{"beta", "subgroups", "avg_conditions", "swkl", "compression_ratio"}};
        for (const auto& r : rows)
            table.push_back({format_number(r["beta"]), std::to_string(r["n_subgroups"].get<std::size_t>()),
                             format_number(r["avg_conditions"]), format_number(r["swkl"]),
                             format_number(r["compression_ratio"])});
        std::vector<std::size_t> width(table[0].size(), 0);
        for (const auto& row : table)
            for (std::size_t c = 0; c < row.size(); ++c) width[c] = std::max(width[c], row[c].size());
        for (std::size_t r = 0; r < table.size(); ++r) {
            if (format == Format::markdown) {
                text << "|";
                for (const auto& cell : table[r]) text << " " << cell << " |";
                text << "\n";
                if (r == 0) {
                    text << "|";
                    for (std::size_t c = 0; c < width.size(); ++c) text << "---:|";
                    text << "\n";
                }
                continue;
            }
            for (std::size_t c = 0; c < width.size(); ++c)
                text << (c ? "  " : "") << std::string(width[c] - table[r][c].size(), ' ') << table[r][c];
            text << "\n";
        }
    }
    write_output(cfg, text.str(), out);
    return 0;
}

void add_data_options(CLI::App& sub, RunConfig& cfg) {
    sub.add_option("--input,-i", cfg.input, "CSV file with a header row")->required()->envname("SSDPP_INPUT");
    sub.add_option("--schema", cfg.schema, "schema JSON file or inline JSON object")->envname("SSDPP_SCHEMA");
    sub.add_option("--targets,-t", cfg.targets, "target column names")->delimiter(',')->envname("SSDPP_TARGETS");
    sub.add_option("--nominal", cfg.nominal, "explanatory columns to treat as nominal")->delimiter(',');
    sub.add_option("--task", cfg.task, "target kind")->check(CLI::IsMember({"nominal", "numeric"}))->envname("SSDPP_TASK");
}

void add_search_options(CLI::App& sub, RunConfig& cfg) {
    auto& p = cfg.params;
    sub.add_option("--beam-width", p.beam_width, "beam width")->capture_default_str()->envname("SSDPP_BEAM_WIDTH");
    sub.add_option("--depth", p.max_depth, "maximum number of conditions")->capture_default_str()->envname("SSDPP_DEPTH");
    sub.add_option("--cutpoints", p.n_cut, "cut points per numeric variable")->capture_default_str()->envname("SSDPP_CUTPOINTS");
    sub.add_option("--beta", p.beta, "gain normalization: 1 many small subgroups, 0 few large ones")
        ->capture_default_str()
        ->envname("SSDPP_BETA");
    sub.add_flag("--top1", p.top1, "find the single best subgroup")->envname("SSDPP_TOP1");
    sub.add_option("--min-coverage", p.min_coverage, "minimum rows per subgroup")->capture_default_str()->envname("SSDPP_MIN_COVERAGE");
    sub.add_option("--threads", p.threads, "worker threads, 0 for all cores")->capture_default_str()->envname("SSDPP_THREADS");
}

void add_output_options(CLI::App& sub, RunConfig& cfg) {
    sub.add_option("--format,-f", cfg.format, "text, json or markdown")
        ->check(CLI::IsMember({"text", "json", "markdown", "md"}))
        ->capture_default_str()
        ->envname("SSDPP_FORMAT");
    sub.add_option("--output,-o", cfg.output, "output file (default stdout)")->envname("SSDPP_OUTPUT");
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    RunConfig cfg;
    CLI::App app{"Subgroup list discovery with the minimum description length principle", "ssdpp"};
    app.require_subcommand(1);

    auto* discover = app.add_subcommand("discover", "mine a subgroup list");
    add_data_options(*discover, cfg);
    add_search_options(*discover, cfg);
    add_output_options(*discover, cfg);

    auto* evaluate = app.add_subcommand("evaluate", "score an existing subgroup list against a dataset");
    add_data_options(*evaluate, cfg);
    add_search_options(*evaluate, cfg);
    add_output_options(*evaluate, cfg);
    evaluate->add_option("--list,-l", cfg.list, "subgroup list JSON (a discover report)")->required();

    auto* verify = app.add_subcommand("verify", "compare closed-form encodings with brute-force oracles");
    verify->add_option("--verify-budget", cfg.verify_budget, "budget JSON file or inline object")->envname("SSDPP_VERIFY_BUDGET");
    verify->add_option("--seed", cfg.seed, "random seed")->capture_default_str();
    add_output_options(*verify, cfg);

    auto* sweep = app.add_subcommand("sweep", "summaries across several beta values");
    add_data_options(*sweep, cfg);
    add_search_options(*sweep, cfg);
    add_output_options(*sweep, cfg);
    sweep->add_option("--betas", cfg.betas, "beta values")->delimiter(',');

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? 0 : 2;
    }

    try {
        if (*discover) return cmd_discover(cfg, out);
        if (*evaluate) return cmd_evaluate(cfg, *evaluate, out);
        if (*verify) return cmd_verify(cfg, out);
        if (*sweep) return cmd_sweep(cfg, out);
    } catch (const IoError& e) {
        err << "error: " << e.what() << "\n";
        return 3;
    } catch (const ConfigurationError& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    } catch (const DegenerateSubgroup& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    } catch (const DomainError& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        err << "internal error: " << e.what() << "\n";
        return 1;
    }
    return 1;
}

}  // namespace ssdpp
