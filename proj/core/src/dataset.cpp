#include "csv.hpp"

#include <lpball/experiments.hpp>

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <string>
#include <vector>

#ifndef LPBALL_DATA_DIR
#define LPBALL_DATA_DIR "data"
#endif

namespace lpball {

LogisticData load_csv_dataset(const std::filesystem::path &path) {
    std::ifstream in(path);
    if (!in) throw InvalidArgument("cannot open dataset '" + path.string() + "'");

    std::vector<std::vector<double>> rows;
    std::string line;
    std::size_t line_no = 0;
    std::size_t columns = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (detail::trim(line).empty()) continue;
        const auto fields = detail::split(line, ',');
        std::vector<double> values(fields.size());
        bool numeric = true;
        for (std::size_t j = 0; j < fields.size() && numeric; ++j)
            numeric = detail::parse_double(fields[j], values[j]);
        if (!numeric) {
            if (rows.empty() && columns == 0) {
                // Header row.
                columns = fields.size();
                continue;
            }
            throw InvalidArgument(path.string() + ":" + std::to_string(line_no) +
                                  ": non-numeric field");
        }
        if (columns == 0) columns = fields.size();
        if (fields.size() != columns)
            throw InvalidArgument(path.string() + ":" + std::to_string(line_no) + ": expected " +
                                  std::to_string(columns) + " fields, found " +
                                  std::to_string(fields.size()));
        rows.push_back(std::move(values));
    }
    if (rows.empty()) throw InvalidArgument(path.string() + ": no data rows");
    if (columns < 2)
        throw InvalidArgument(path.string() + ": need at least one feature and a label column");

    const auto m = static_cast<Index>(rows.size());
    const auto n = static_cast<Index>(columns - 1);
    LogisticData data;
    data.X.resize(m, n);
    data.labels.resize(m);
    bool saw_zero = false, saw_minus = false;
    for (Index i = 0; i < m; ++i) {
        const auto &row = rows[static_cast<std::size_t>(i)];
        for (Index j = 0; j < n; ++j) data.X(i, j) = row[static_cast<std::size_t>(j)];
        const double label = row.back();
        if (label == 0.0)
            saw_zero = true;
        else if (label == -1.0)
            saw_minus = true;
        else if (label != 1.0)
            throw InvalidArgument(path.string() + ": row " + std::to_string(i + 1) +
                                  " has non-binary label " + detail::format_double(label));
        data.labels[i] = label == 1.0 ? 1.0 : -1.0;
    }
    if (saw_zero && saw_minus)
        throw InvalidArgument(path.string() + ": labels mix {0,1} and {-1,+1} encodings");

    // Zero mean, unit (population) variance per column; constant columns
    // become zeros.
    for (Index j = 0; j < n; ++j) {
        auto col = data.X.col(j);
        const double mean = col.mean();
        col.array() -= mean;
        const double sd = std::sqrt(col.squaredNorm() / static_cast<double>(m));
        if (sd > 1e-12 * std::max(1.0, std::abs(mean)))
            col /= sd;
        else
            col.setZero();
    }
    return data;
}

std::filesystem::path bundled_dataset_path() {
    if (const char *dir = std::getenv("LPBALL_DATA_DIR"))
        return std::filesystem::path(dir) / "breast_cancer.csv";
    return std::filesystem::path(LPBALL_DATA_DIR) / "breast_cancer.csv";
}

LogisticData load_bundled_dataset() {
    LogisticData data = load_csv_dataset(bundled_dataset_path());
    if (data.samples() != 569 || data.features() != 30)
        throw InvalidArgument("bundled dataset should be 569 x 30, found " +
                              std::to_string(data.samples()) + " x " +
                              std::to_string(data.features()));
    return data;
}

} // namespace lpball
