#include "csv.hpp"

#include <lpball/experiments.hpp>

#include <nlohmann/json.hpp>

#include <fstream>
#include <sstream>

namespace lpball {

namespace {

constexpr const char *kHeader = "method,p,param,metric,value,trials,seed";

std::vector<SweepRow> expand(const SweepResult &result, const PersistOptions &options) {
    std::vector<SweepRow> out;
    for (const SweepRow &row : result.rows) {
        out.push_back(row);
        if (!options.include_stats) continue;
        SweepRow iters = row;
        iters.metric = "mean_iterations";
        iters.value = row.mean_iterations;
        out.push_back(iters);
        SweepRow wall = row;
        wall.metric = "mean_wall_seconds";
        wall.value = row.mean_wall_seconds;
        out.push_back(wall);
    }
    return out;
}

std::ofstream open_output(const std::filesystem::path &path) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot open '" + path.string() + "' for writing");
    return out;
}

} // namespace

ResultFormat parse_result_format(const std::string &text) {
    if (text == "csv") return ResultFormat::Csv;
    if (text == "json") return ResultFormat::Json;
    throw InvalidArgument("format must be csv or json, got '" + text + "'");
}

void persist_results(const SweepResult &result, const std::filesystem::path &path,
                     ResultFormat format, const PersistOptions &options) {
    const std::vector<SweepRow> rows = expand(result, options);
    std::ofstream out = open_output(path);
    if (format == ResultFormat::Csv) {
        out << kHeader << '\n';
        for (const SweepRow &row : rows) {
            out << row.method << ',' << detail::format_double(row.p) << ','
                << detail::format_double(row.param) << ',' << row.metric << ','
                << detail::format_double(row.value) << ',' << row.trials << ',' << row.seed
                << '\n';
        }
    } else {
        nlohmann::ordered_json records = nlohmann::ordered_json::array();
        for (const SweepRow &row : rows) {
            records.push_back({{"method", row.method},
                               {"p", row.p},
                               {"param", row.param},
                               {"metric", row.metric},
                               {"value", row.value},
                               {"trials", row.trials},
                               {"seed", row.seed}});
        }
        out << records.dump(2) << '\n';
    }
    if (!out) throw std::runtime_error("failed writing '" + path.string() + "'");
}

SweepResult load_results(const std::filesystem::path &path, ResultFormat format) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw InvalidArgument("cannot open results file '" + path.string() + "'");
    SweepResult result;

    if (format == ResultFormat::Json) {
        const auto records = nlohmann::json::parse(in);
        for (const auto &rec : records) {
            SweepRow row;
            row.method = rec.at("method").get<std::string>();
            row.p = rec.at("p").get<double>();
            row.param = rec.at("param").get<double>();
            row.metric = rec.at("metric").get<std::string>();
            row.value = rec.at("value").get<double>();
            row.trials = rec.at("trials").get<Index>();
            row.seed = rec.at("seed").get<std::uint64_t>();
            result.rows.push_back(std::move(row));
        }
        return result;
    }

    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line_no == 1) {
            if (line != kHeader)
                throw InvalidArgument(path.string() + ": unexpected header '" + line + "'");
            continue;
        }
        if (line.empty()) continue;
        const auto fields = detail::split(line, ',');
        if (fields.size() != 7)
            throw InvalidArgument(path.string() + ":" + std::to_string(line_no) +
                                  ": expected 7 fields");
        SweepRow row;
        row.method = std::string(fields[0]);
        row.metric = std::string(fields[3]);
        double trials = 0.0;
        if (!detail::parse_double(fields[1], row.p) || !detail::parse_double(fields[2], row.param) ||
            !detail::parse_double(fields[4], row.value) || !detail::parse_double(fields[5], trials))
            throw InvalidArgument(path.string() + ":" + std::to_string(line_no) +
                                  ": malformed number");
        row.trials = static_cast<Index>(trials);
        try {
            row.seed = std::stoull(std::string(fields[6]));
        } catch (const std::exception &) {
            throw InvalidArgument(path.string() + ":" + std::to_string(line_no) +
                                  ": malformed seed");
        }
        result.rows.push_back(std::move(row));
    }
    return result;
}

} // namespace lpball
