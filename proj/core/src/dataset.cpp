#include "roa/dataset.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace roa {

Dataset::Dataset(std::vector<std::vector<double>> rows, std::string label)
    : rows_(std::move(rows)), label_(std::move(label)) {
    if (rows_.empty()) throw std::invalid_argument("Dataset: need at least one row");
    const std::size_t w = rows_.front().size();
    if (w == 0) throw std::invalid_argument("Dataset: zero-width rows");
    for (const auto& r : rows_)
        if (r.size() != w) throw std::invalid_argument("Dataset: ragged rows");
}

Dataset Dataset::from_values(std::vector<double> values, std::string label) {
    std::vector<std::vector<double>> rows;
    rows.reserve(values.size());
    for (double v : values) rows.push_back({v});
    return Dataset(std::move(rows), std::move(label));
}

std::vector<double> Dataset::values() const {
    if (!scalar()) throw std::logic_error("Dataset::values: not a scalar dataset");
    std::vector<double> out;
    out.reserve(rows_.size());
    for (const auto& r : rows_) out.push_back(r.front());
    return out;
}

Dataset read_csv(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("read_csv: cannot open " + path.string());

    std::string line;
    if (!std::getline(in, line)) throw std::runtime_error("read_csv: empty file " + path.string());
    // header row is required; column names are not interpreted

    std::vector<std::vector<double>> rows;
    std::size_t lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        std::vector<double> row;
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) {
            try {
                row.push_back(std::stod(cell));
            } catch (const std::exception&) {
                throw std::runtime_error("read_csv: bad value '" + cell + "' at " +
                                         path.string() + ":" + std::to_string(lineno));
            }
        }
        if (!row.empty()) rows.push_back(std::move(row));
    }
    return Dataset(std::move(rows), path.stem().string());
}

void write_csv(const Dataset& data, const std::filesystem::path& path,
               const std::vector<std::string>& column_names) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("write_csv: cannot open " + path.string());

    const std::size_t w = data.width();
    if (!column_names.empty() && column_names.size() != w)
        throw std::invalid_argument("write_csv: column name count mismatch");

    for (std::size_t j = 0; j < w; ++j) {
        if (j) out << ',';
        out << (column_names.empty() ? "c" + std::to_string(j) : column_names[j]);
    }
    out << '\n';

    char buf[64];
    for (const auto& r : data.rows()) {
        for (std::size_t j = 0; j < w; ++j) {
            if (j) out << ',';
            std::snprintf(buf, sizeof buf, "%.17g", r[j]);
            out << buf;
        }
        out << '\n';
    }
}

} // namespace roa
