#include "ssdpp/report.hpp"

#include <algorithm>
#include <sstream>

#include "ssdpp/errors.hpp"
#include "ssdpp/metrics.hpp"
#include "ssdpp/search.hpp"

namespace ssdpp {

Format format_from_string(const std::string& s) {
    if (s == "text") return Format::text;
    if (s == "json") return Format::json;
    if (s == "markdown" || s == "md") return Format::markdown;
    throw ConfigurationError("unknown output format '" + s + "' (expected text, json or markdown)");
}

nlohmann::json statistics_to_json(const Dataset& data, std::size_t target_column, const TargetStatistics& stats) {
    const auto& col = data.column(target_column);
    nlohmann::json j{{"target", col.schema.name}};
    if (const auto* c = std::get_if<CategoricalStats>(&stats)) {
        j["kind"] = "nominal";
        j["categories"] = col.categories;
        j["counts"] = c->counts;
        j["probabilities"] = c->probabilities();
    } else {
        const auto& s = std::get<NormalStats>(stats);
        j["kind"] = "numeric";
        j["mean"] = s.mean;
        j["std"] = s.stddev();
    }
    return j;
}

namespace {

nlohmann::json stats_array(const Dataset& data, const std::vector<TargetStatistics>& stats) {
    nlohmann::json arr = nlohmann::json::array();
    for (std::size_t j = 0; j < stats.size(); ++j) arr.push_back(statistics_to_json(data, data.targets()[j], stats[j]));
    return arr;
}

}  // namespace

nlohmann::json make_report(const Dataset& data, const SubgroupList& list, const std::vector<double>& gains,
                           const EncodingContext& ctx, const nlohmann::json& params) {
    nlohmann::json report;
    report["params"] = params;
    report["subgroups"] = nlohmann::json::array();
    for (std::size_t i = 0; i < list.size(); ++i) {
        const auto& s = list.subgroups()[i];
        nlohmann::json row{{"description", s.description.to_json(data)},
                           {"text", s.description.to_string(data)},
                           {"n", s.usage},
                           {"stats", stats_array(data, s.statistics)},
                           {"wkl", wkl(s.statistics, list.default_stats())}};
        row["gain_at_insertion"] = i < gains.size() ? nlohmann::json(gains[i]) : nlohmann::json(nullptr);
        report["subgroups"].push_back(std::move(row));
    }
    report["default"] = {{"n", data.n_rows()}, {"stats", stats_array(data, list.default_stats())}};
    const auto summary = summarize(data, list, ctx);
    report["summary"] = {{"swkl", summary.swkl},
                         {"n_subgroups", summary.n_subgroups},
                         {"avg_conditions", summary.avg_conditions},
                         {"compression_ratio", summary.compression_ratio},
                         {"total_bits", summary.total_bits}};
    if (ctx.target_kind == Kind::numeric) report["summary"]["normalized_std_first"] = summary.normalized_std_first;
    return report;
}

std::vector<Description> descriptions_from_report(const nlohmann::json& report, const Dataset& data) {
    if (!report.is_object() || !report.contains("subgroups") || !report.at("subgroups").is_array())
        throw ConfigurationError("subgroup list JSON must hold a \"subgroups\" array");
    std::vector<Description> out;
    for (const auto& s : report.at("subgroups")) {
        if (!s.contains("description")) throw ConfigurationError("subgroup entry lacks \"description\"");
        out.push_back(Description::from_json(s.at("description"), data));
    }
    return out;
}

std::vector<double> insertion_gains(const Dataset& data, const std::vector<Description>& descriptions,
                                    const EncodingContext& ctx, double beta) {
    std::vector<double> gains;
    SubgroupList list(data);
    for (const auto& d : descriptions) {
        gains.push_back(compression_gain(list, d, data, ctx, beta));
        list.append(d, data);
    }
    return gains;
}

// ---------------------------------------------------------------------------------------------

namespace {

using Table = std::vector<std::vector<std::string>>;

std::string num(const nlohmann::json& v) {
    if (v.is_null()) return "";
    if (v.is_number_integer() || v.is_number_unsigned()) return std::to_string(v.get<long long>());
    return format_number(v.get<double>());
}

Table build_table(const nlohmann::json& report) {
    Table t;
    std::vector<std::string> header{"#", "description", "n"};
    const auto& dstats = report.at("default").at("stats");
    for (const auto& s : dstats) {
        const std::string target = s.at("target");
        if (s.at("kind") == "nominal") {
            for (const auto& c : s.at("categories")) header.push_back("P(" + target + "=" + c.get<std::string>() + ")");
        } else {
            header.push_back("mean(" + target + ")");
            header.push_back("std(" + target + ")");
        }
    }
    header.push_back("wkl");
    header.push_back("gain");
    t.push_back(header);

    auto stat_cells = [](const nlohmann::json& stats, std::vector<std::string>& row) {
        for (const auto& s : stats) {
            if (s.at("kind") == "nominal") {
                for (const auto& p : s.at("probabilities")) row.push_back(num(p));
            } else {
                row.push_back(num(s.at("mean")));
                row.push_back(num(s.at("std")));
            }
        }
    };
    std::size_t i = 1;
    for (const auto& s : report.at("subgroups")) {
        std::vector<std::string> row{std::to_string(i++), s.at("text").get<std::string>(), num(s.at("n"))};
        stat_cells(s.at("stats"), row);
        row.push_back(num(s.at("wkl")));
        row.push_back(num(s.value("gain_at_insertion", nlohmann::json())));
        t.push_back(std::move(row));
    }
    std::vector<std::string> last{"", "dataset distribution", num(report.at("default").at("n"))};
    stat_cells(dstats, last);
    last.push_back("");
    last.push_back("");
    t.push_back(std::move(last));
    return t;
}

std::size_t display_width(const std::string& s) {
    std::size_t w = 0;
    for (unsigned char c : s)
        if ((c & 0xC0) != 0x80) ++w;
    return w;
}

std::string summary_lines(const nlohmann::json& report, const std::string& prefix) {
    const auto& s = report.at("summary");
    std::ostringstream out;
    out << prefix << "subgroups: " << num(s.at("n_subgroups")) << "\n"
        << prefix << "average conditions: " << num(s.at("avg_conditions")) << "\n"
        << prefix << "swkl: " << num(s.at("swkl")) << "\n"
        << prefix << "compression ratio: " << num(s.at("compression_ratio")) << "\n"
        << prefix << "total length (bits): " << num(s.at("total_bits")) << "\n";
    if (s.contains("normalized_std_first"))
        out << prefix << "first subgroup std / dataset std: " << num(s.at("normalized_std_first")) << "\n";
    return out.str();
}

std::string render_text(const nlohmann::json& report) {
    const auto t = build_table(report);
    std::vector<std::size_t> width(t.front().size(), 0);
    for (const auto& row : t)
        for (std::size_t c = 0; c < row.size(); ++c) width[c] = std::max(width[c], display_width(row[c]));
    std::ostringstream out;
    auto emit = [&](const std::vector<std::string>& row) {
        std::string line;
        for (std::size_t c = 0; c < row.size(); ++c) {
            if (c) line += "  ";
            const auto pad = width[c] - display_width(row[c]);
            if (c == 1)
                line += row[c] + std::string(pad, ' ');
            else
                line += std::string(pad, ' ') + row[c];
        }
        while (!line.empty() && line.back() == ' ') line.pop_back();
        out << line << "\n";
    };
    emit(t.front());
    std::size_t total = 0;
    for (auto w : width) total += w;
    const std::string rule(total + 2 * (width.size() - 1), '-');
    out << rule << "\n";
    for (std::size_t r = 1; r + 1 < t.size(); ++r) emit(t[r]);
    out << rule << "\n";
    emit(t.back());
    out << "\n" << summary_lines(report, "");
    return out.str();
}

std::string render_markdown(const nlohmann::json& report) {
    const auto t = build_table(report);
    std::ostringstream out;
    auto emit = [&](const std::vector<std::string>& row) {
        out << "|";
        for (const auto& cell : row) {
            std::string escaped;
            for (char ch : cell) {
                if (ch == '|') escaped += '\\';
                escaped += ch;
            }
            out << " " << escaped << " |";
        }
        out << "\n";
    };
    emit(t.front());
    out << "|";
    for (std::size_t c = 0; c < t.front().size(); ++c) out << (c == 1 ? " :--- |" : " ---: |");
    out << "\n";
    for (std::size_t r = 1; r < t.size(); ++r) emit(t[r]);
    out << "\n" << summary_lines(report, "- ");
    return out.str();
}

}  // namespace

std::string render(const nlohmann::json& report, Format format) {
    switch (format) {
        case Format::json: return report.dump(2) + "\n";
        case Format::markdown: return render_markdown(report);
        case Format::text: break;
    }
    return render_text(report);
}

}  // namespace ssdpp
