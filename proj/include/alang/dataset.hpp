#pragma once

#include <string>
#include <vector>

namespace alang {

struct Standardization {
    bool applied = false;
    std::vector<double> mean;
    std::vector<double> stddev;
};

struct Dataset {
    std::vector<double> X;  // n x d row-major
    std::vector<double> y;  // n labels in {0, 1}
    int n = 0;
    int d = 0;      // feature count actually used
    int d_raw = 0;  // columns in the file, including id/label
    std::string name;
    Standardization standardization;
};

enum class DatasetFormat {
    wdbc,      // id, diagnosis M/B, 30 features
    banknote,  // 4 features, label last
    csv,       // features..., label last (0/1)
};

DatasetFormat dataset_format_from_string(const std::string& name);

// Parses the file, maps labels to {0,1}, and (by default) standardizes each
// feature column to zero mean and unit variance, recording the transform.
Dataset load_dataset(const std::string& path, DatasetFormat format, bool standardize = true);

}  // namespace alang
