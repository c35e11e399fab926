#pragma once

#include <cstddef>
#include <filesystem>
#include <string>
#include <vector>

namespace roa {

/// Ordered collection of fixed-width real observation rows. Scalar datasets
/// (width 1) are the common case for the demand models; the ML harness keeps
/// (features, response) rows in SupervisedDataset instead.
class Dataset {
  public:
    Dataset() = default;
    Dataset(std::vector<std::vector<double>> rows, std::string label);

    /// Convenience for scalar data.
    static Dataset from_values(std::vector<double> values, std::string label = "");

    std::size_t size() const { return rows_.size(); }
    std::size_t width() const { return rows_.empty() ? 0 : rows_.front().size(); }
    const std::vector<std::vector<double>>& rows() const { return rows_; }
    const std::vector<double>& row(std::size_t i) const { return rows_.at(i); }
    const std::string& label() const { return label_; }

    bool scalar() const { return width() == 1; }
    double value(std::size_t i) const { return rows_.at(i).at(0); }
    std::vector<double> values() const;

  private:
    std::vector<std::vector<double>> rows_;
    std::string label_;
};

/// CSV with a header row, one observation per line. The dataset label is the
/// filename stem.
Dataset read_csv(const std::filesystem::path& path);
void write_csv(const Dataset& data, const std::filesystem::path& path,
               const std::vector<std::string>& column_names = {});

} // namespace roa
