#include "alang/dataset.hpp"

#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace alang {

DatasetFormat dataset_format_from_string(const std::string& name) {
    if (name == "wdbc") return DatasetFormat::wdbc;
    if (name == "banknote") return DatasetFormat::banknote;
    if (name == "csv") return DatasetFormat::csv;
    throw std::invalid_argument("unknown dataset format: " + name);
}

namespace {

std::vector<std::string> split_csv(const std::string& line) {
    std::vector<std::string> out;
    std::string field;
    std::stringstream ss(line);
    while (std::getline(ss, field, ',')) out.push_back(field);
    return out;
}

double parse_number(const std::string& s, int row, int col) {
    try {
        std::size_t pos = 0;
        const double v = std::stod(s, &pos);
        if (pos != s.size()) throw std::invalid_argument("trailing characters");
        return v;
    } catch (const std::exception&) {
        throw std::runtime_error("dataset parse failure at row " + std::to_string(row) +
                                 ", column " + std::to_string(col) + ": '" + s + "'");
    }
}

void standardize_columns(Dataset& ds) {
    ds.standardization.applied = true;
    ds.standardization.mean.assign(ds.d, 0.0);
    ds.standardization.stddev.assign(ds.d, 1.0);
    for (int j = 0; j < ds.d; ++j) {
        double mean = 0.0;
        for (int i = 0; i < ds.n; ++i) mean += ds.X[i * ds.d + j];
        mean /= ds.n;
        double var = 0.0;
        for (int i = 0; i < ds.n; ++i) {
            const double c = ds.X[i * ds.d + j] - mean;
            var += c * c;
        }
        var /= ds.n;
        const double sd = var > 0.0 ? std::sqrt(var) : 1.0;
        ds.standardization.mean[j] = mean;
        ds.standardization.stddev[j] = sd;
        for (int i = 0; i < ds.n; ++i) ds.X[i * ds.d + j] = (ds.X[i * ds.d + j] - mean) / sd;
    }
}

}  // namespace

Dataset load_dataset(const std::string& path, DatasetFormat format, bool standardize) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open dataset: " + path);

    Dataset ds;
    ds.name = path;
    std::string line;
    int row = 0;
    int expected_cols = -1;
    while (std::getline(in, line)) {
        ++row;
        if (line.empty() || line == "\r") continue;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        const auto fields = split_csv(line);
        if (expected_cols == -1) {
            expected_cols = static_cast<int>(fields.size());
            ds.d_raw = expected_cols;
            switch (format) {
                case DatasetFormat::wdbc:
                    if (expected_cols < 3)
                        throw std::runtime_error("wdbc: expected id, label and features");
                    ds.d = expected_cols - 2;
                    break;
                case DatasetFormat::banknote:
                case DatasetFormat::csv:
                    if (expected_cols < 2)
                        throw std::runtime_error("dataset: expected features and a label");
                    ds.d = expected_cols - 1;
                    break;
            }
        } else if (static_cast<int>(fields.size()) != expected_cols) {
            throw std::runtime_error("dataset row " + std::to_string(row) + " has " +
                                     std::to_string(fields.size()) + " columns, expected " +
                                     std::to_string(expected_cols));
        }
        switch (format) {
            case DatasetFormat::wdbc: {
                const std::string& diag = fields[1];
                if (diag != "M" && diag != "B")
                    throw std::runtime_error("wdbc row " + std::to_string(row) +
                                             ": diagnosis must be M or B, got '" + diag + "'");
                ds.y.push_back(diag == "M" ? 1.0 : 0.0);
                for (int j = 2; j < expected_cols; ++j)
                    ds.X.push_back(parse_number(fields[j], row, j));
                break;
            }
            case DatasetFormat::banknote:
            case DatasetFormat::csv: {
                for (int j = 0; j + 1 < expected_cols; ++j)
                    ds.X.push_back(parse_number(fields[j], row, j));
                const double label = parse_number(fields[expected_cols - 1], row,
                                                  expected_cols - 1);
                if (label != 0.0 && label != 1.0)
                    throw std::runtime_error("dataset row " + std::to_string(row) +
                                             ": label must be 0 or 1");
                ds.y.push_back(label);
                break;
            }
        }
        ++ds.n;
    }
    if (ds.n == 0) throw std::runtime_error("dataset is empty: " + path);
    if (standardize) standardize_columns(ds);
    return ds;
}

}  // namespace alang
