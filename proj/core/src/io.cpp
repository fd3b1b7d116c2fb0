#include "csv.hpp"

#include <lpball/io.hpp>

#include <fstream>
#include <string>
#include <vector>

namespace lpball {

Matrix read_matrix_csv(const std::filesystem::path &path) {
    std::ifstream in(path);
    if (!in) throw InvalidArgument("cannot open '" + path.string() + "'");
    std::vector<std::vector<double>> rows;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (detail::trim(line).empty()) continue;
        const auto fields = detail::split(line, ',');
        std::vector<double> values(fields.size());
        bool numeric = true;
        for (std::size_t j = 0; j < fields.size() && numeric; ++j)
            numeric = detail::parse_double(fields[j], values[j]);
        if (!numeric) {
            if (rows.empty() && line_no == 1) continue;
            throw InvalidArgument(path.string() + ":" + std::to_string(line_no) +
                                  ": non-numeric field");
        }
        if (!rows.empty() && values.size() != rows.front().size())
            throw InvalidArgument(path.string() + ":" + std::to_string(line_no) +
                                  ": ragged row");
        rows.push_back(std::move(values));
    }
    if (rows.empty()) throw InvalidArgument(path.string() + ": no data rows");
    Matrix out(static_cast<Index>(rows.size()), static_cast<Index>(rows.front().size()));
    for (Index i = 0; i < out.rows(); ++i)
        for (Index j = 0; j < out.cols(); ++j)
            out(i, j) = rows[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
    return out;
}

Vector read_vector_csv(const std::filesystem::path &path) {
    const Matrix m = read_matrix_csv(path);
    if (m.cols() == 1) return m.col(0);
    if (m.rows() == 1) return m.row(0).transpose();
    throw InvalidArgument(path.string() + ": expected a single row or column");
}

void write_vector_csv(const Vector &v, const std::filesystem::path &path) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot open '" + path.string() + "' for writing");
    for (Index i = 0; i < v.size(); ++i) out << detail::format_double(v[i]) << '\n';
    if (!out) throw std::runtime_error("failed writing '" + path.string() + "'");
}

} // namespace lpball
