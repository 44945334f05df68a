#include <doctest.h>

#include <stdexcept>

#include <cmath>
#include <fstream>

#include "alang/dataset.hpp"

using namespace alang;

TEST_CASE("tiny csv fixture parses exactly") {
    const Dataset ds = load_dataset("tests/data/tiny.csv", DatasetFormat::csv, false);
    CHECK(ds.n == 3);
    CHECK(ds.d == 2);
    CHECK(ds.d_raw == 3);
    CHECK(ds.X == std::vector<double>{1.5, -2.25, 0.5, 3.125, -1.0, 0.0});
    CHECK(ds.y == std::vector<double>{0.0, 1.0, 1.0});
    CHECK_FALSE(ds.standardization.applied);
}

TEST_CASE("wdbc loads with the paper's shape") {
    const Dataset ds = load_dataset("data/wdbc.csv", DatasetFormat::wdbc);
    CHECK(ds.n == 569);
    CHECK(ds.d == 30);      // features used (no id, no label)
    CHECK(ds.d_raw == 32);  // columns in the file
    int malignant = 0;
    for (double v : ds.y) malignant += v == 1.0;
    CHECK(malignant == 212);
    CHECK(ds.standardization.applied);
    // standardized columns have zero mean, unit variance
    for (int j = 0; j < ds.d; ++j) {
        double mean = 0.0, var = 0.0;
        for (int i = 0; i < ds.n; ++i) mean += ds.X[i * ds.d + j];
        mean /= ds.n;
        for (int i = 0; i < ds.n; ++i) {
            const double c = ds.X[i * ds.d + j] - mean;
            var += c * c;
        }
        var /= ds.n;
        CHECK(std::fabs(mean) <= 1e-10);
        CHECK(std::fabs(var - 1.0) <= 1e-10);
    }
}

TEST_CASE("standardization is recorded and invertible") {
    const Dataset raw = load_dataset("data/wdbc.csv", DatasetFormat::wdbc, false);
    const Dataset std_ds = load_dataset("data/wdbc.csv", DatasetFormat::wdbc, true);
    for (int i = 0; i < 20; ++i) {
        for (int j = 0; j < std_ds.d; ++j) {
            const double rebuilt = std_ds.X[i * std_ds.d + j] * std_ds.standardization.stddev[j] +
                                   std_ds.standardization.mean[j];
            CHECK(rebuilt == doctest::Approx(raw.X[i * raw.d + j]).epsilon(1e-12));
        }
    }
}

TEST_CASE("banknote fixture loads") {
    const Dataset ds = load_dataset("tests/data/banknote_fixture.csv", DatasetFormat::banknote);
    CHECK(ds.n == 40);
    CHECK(ds.d == 4);
    for (double v : ds.y) CHECK((v == 0.0 || v == 1.0));
}

TEST_CASE("parse failures carry row and column diagnostics") {
    {
        std::ofstream f("/tmp/alang_bad1.csv");
        f << "1.0,2.0,0\n1.0,xyz,1\n";
    }
    try {
        load_dataset("/tmp/alang_bad1.csv", DatasetFormat::csv);
        FAIL("expected parse error");
    } catch (const std::runtime_error& e) {
        const std::string msg = e.what();
        CHECK(msg.find("row 2") != std::string::npos);
        CHECK(msg.find("xyz") != std::string::npos);
    }
    {
        std::ofstream f("/tmp/alang_bad2.csv");
        f << "1.0,2.0,0\n1.0,1\n";
    }
    CHECK_THROWS_AS(load_dataset("/tmp/alang_bad2.csv", DatasetFormat::csv), std::runtime_error);
    {
        std::ofstream f("/tmp/alang_bad3.csv");
        f << "1.0,2.0,7\n";  // label outside {0,1}
    }
    CHECK_THROWS_AS(load_dataset("/tmp/alang_bad3.csv", DatasetFormat::csv), std::runtime_error);
    CHECK_THROWS_AS(load_dataset("/tmp/definitely_missing.csv", DatasetFormat::csv),
                    std::runtime_error);
}
