#include <doctest.h>

#include <stdexcept>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>
#include <numbers>
#include <sstream>

#include "alang/experiment.hpp"
#include "alang/metrics.hpp"
#include "alang/special.hpp"

using namespace alang;

namespace {

std::map<std::string, std::string> laplace_entries() {
    return {{"kind", "laplace1d"}, {"sampler", "anchored"}, {"eta", "0.5"},
            {"mu", "1"},           {"n_mc", "20"},          {"n_steps", "10"},
            {"n_repeats", "2"},    {"n_chains", "200"},     {"seed", "99"}};
}

std::string slurp(const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

}  // namespace

TEST_CASE("spec parsing and validation") {
    const ExperimentSpec spec = spec_from_entries(laplace_entries());
    CHECK(spec.kind == ExperimentKind::laplace1d);
    CHECK(spec.sampler == SamplerKind::anchored);
    CHECK(spec.eta == 0.5);
    CHECK(spec.n_chains == 200);
    CHECK(spec.threshold_w2.has_value());

    auto bad = laplace_entries();
    bad["penalty"] = "l1";  // not a laplace1d key
    CHECK_THROWS_AS(spec_from_entries(bad), std::invalid_argument);

    auto bad2 = laplace_entries();
    bad2["eta"] = "-1";
    CHECK_THROWS_AS(spec_from_entries(bad2), std::invalid_argument);

    auto bad3 = laplace_entries();
    bad3.erase("kind");
    CHECK_THROWS_AS(spec_from_entries(bad3), std::invalid_argument);

    auto bad4 = laplace_entries();
    bad4["sampler"] = "hamiltonian";
    CHECK_THROWS_AS(spec_from_entries(bad4), std::invalid_argument);
}

TEST_CASE("spec files parse with comments and quotes") {
    const char* path = "/tmp/alang_spec1.toml";
    {
        std::ofstream f(path);
        f << "# a comment\n[experiment]\nkind = \"laplace1d\"\n";
        f << "sampler = \"ula\"\neta = 0.1  # trailing comment\nn_chains = 128\n";
        f << "n_steps = 5\nn_repeats = 1\nn_mc = 10\n";
    }
    const ExperimentSpec spec = parse_experiment_spec(path);
    CHECK(spec.sampler == SamplerKind::ula);
    CHECK(spec.n_chains == 128);

    {
        std::ofstream f(path);
        f << "kind = \"laplace1d\"\n";  // key outside a section
    }
    CHECK_THROWS(parse_experiment_spec(path));
    {
        std::ofstream f(path);
        f << "[experiment]\nkind = \"laplace1d\"\nkind = \"heavytail\"\n";
    }
    CHECK_THROWS(parse_experiment_spec(path));
}

TEST_CASE("prior strings") {
    const Prior g = prior_from_string("gaussian(10)");
    CHECK(g.kind == Prior::Kind::gaussian);
    CHECK(g.a == 10.0);
    RngStream rng(1, 1);
    double acc = 0.0, acc2 = 0.0;
    for (int i = 0; i < 200000; ++i) {
        const double v = g.sample(rng);
        acc += v;
        acc2 += v * v;
    }
    CHECK(std::fabs(acc / 200000) <= 0.05);
    CHECK(acc2 / 200000 == doctest::Approx(10.0).epsilon(0.03));

    const Prior u = prior_from_string("uniform(-5,5)");
    for (int i = 0; i < 1000; ++i) {
        const double v = u.sample(rng);
        CHECK(v >= -5.0);
        CHECK(v < 5.0);
    }
    const Prior l = prior_from_string("laplace(0,2)");
    acc = 0.0; acc2 = 0.0;
    for (int i = 0; i < 200000; ++i) {
        const double v = l.sample(rng);
        acc += v;
        acc2 += v * v;
    }
    CHECK(std::fabs(acc / 200000) <= 0.05);
    CHECK(acc2 / 200000 == doctest::Approx(8.0).epsilon(0.05));  // var = 2 b^2

    CHECK_THROWS_AS(prior_from_string("cauchy(1)"), std::invalid_argument);
    CHECK_THROWS_AS(prior_from_string("gaussian(-1)"), std::invalid_argument);
}

TEST_CASE("threshold detector") {
    const std::vector<double> series{0.5, 0.3, 0.09, 0.2, 0.05};
    CHECK(iterations_to_threshold(series, 0.1, 1) == 3.0);
    CHECK(iterations_to_threshold(series, 0.01, 1) ==
          std::numeric_limits<double>::infinity());
    CHECK(iterations_to_threshold(series, 0.1, 10) == 30.0);
}

TEST_CASE("heavy tail cdf closed form matches quadrature") {
    // iota = 2 analytic branch vs a direct quadrature oracle
    for (double x : {-3.0, -0.5, 0.0, 0.8, 2.5}) {
        auto dens = [](double t) {
            return (2.0 / std::numbers::pi) / ((1.0 + t * t) * (1.0 + t * t));
        };
        const double oracle = 0.5 + integrate(dens, 0.0, x, 64);
        CHECK(heavy_tail_cdf(2.0, x) == doctest::Approx(oracle).epsilon(1e-10));
    }
    // general branch (iota = 3) against quadrature of its density
    const double z = std::sqrt(std::numbers::pi) * std::tgamma(2.5) / std::tgamma(3.0);
    for (double x : {-1.5, 0.3, 4.0}) {
        auto dens = [z](double t) { return std::pow(1.0 + t * t, -3.0) / z; };
        const double oracle = 0.5 + integrate(dens, 0.0, x, 64);
        CHECK(heavy_tail_cdf(3.0, x) == doctest::Approx(oracle).epsilon(1e-9));
    }
    CHECK(heavy_tail_cdf(2.0, 0.0) == 0.5);
}

TEST_CASE("laplace experiment is deterministic and emits parseable csv") {
    const ExperimentSpec spec = spec_from_entries(laplace_entries());
    const ExperimentResult r1 = run_laplace_experiment(spec);
    const ExperimentResult r2 = run_laplace_experiment(spec);
    CHECK(r1.mean_series == r2.mean_series);
    CHECK(r1.iters_to_threshold == r2.iters_to_threshold);

    namespace fs = std::filesystem;
    const fs::path dir1 = "/tmp/alang_out1", dir2 = "/tmp/alang_out2";
    fs::remove_all(dir1);
    fs::remove_all(dir2);
    emit_results(r1, dir1.string());
    emit_results(r2, dir2.string());
    CHECK(slurp(dir1 / "metrics.csv") == slurp(dir2 / "metrics.csv"));
    CHECK(slurp(dir1 / "long.csv") == slurp(dir2 / "long.csv"));

    // round trip: parse metrics.csv back and compare against the series
    std::ifstream in(dir1 / "metrics.csv");
    std::string header, line;
    std::getline(in, header);
    CHECK(header == "iteration,w2_mean,w2_stderr");
    std::size_t idx = 0;
    while (std::getline(in, line)) {
        std::stringstream ss(line);
        std::string it, mean, se;
        std::getline(ss, it, ',');
        std::getline(ss, mean, ',');
        std::getline(ss, se, ',');
        CHECK(std::stol(it) == static_cast<long>(idx + 1));
        CHECK(std::stod(mean) == r1.mean_series[idx]);
        ++idx;
    }
    CHECK(idx == r1.mean_series.size());
}

TEST_CASE("single repeat mean series equals the run itself") {
    auto entries = laplace_entries();
    entries["n_repeats"] = "1";
    const ExperimentResult r = run_laplace_experiment(spec_from_entries(entries));
    REQUIRE(r.repeat_series.size() == 1);
    CHECK(r.mean_series == r.repeat_series[0]);
    for (double se : r.stderr_series) CHECK(se == 0.0);
}

TEST_CASE("never-crossing runs serialize the inf sentinel") {
    auto entries = laplace_entries();
    entries["n_steps"] = "3";
    entries["threshold_w2"] = "1e-9";
    const ExperimentResult r = run_laplace_experiment(spec_from_entries(entries));
    CHECK(std::isinf(r.mean_iters_to_threshold));
    const std::string dir = "/tmp/alang_out_inf";
    std::filesystem::remove_all(dir);
    emit_results(r, dir);
    const std::string table = slurp(std::filesystem::path(dir) / "table.csv");
    CHECK(table.find(",inf") != std::string::npos);
}

TEST_CASE("heavytail with beta = iota runs exactly like ula") {
    std::map<std::string, std::string> entries{
        {"kind", "heavytail"}, {"eta", "0.01"},     {"iota", "2"},
        {"n_steps", "50"},     {"n_repeats", "2"},  {"n_chains", "300"},
        {"seed", "5"},
    };
    entries["beta"] = "2";  // U0 = U
    entries["sampler"] = "anchored";
    const ExperimentResult anchored = run_heavytail_experiment(spec_from_entries(entries));
    entries["sampler"] = "ula";
    const ExperimentResult ula = run_heavytail_experiment(spec_from_entries(entries));
    CHECK(anchored.mean_series == ula.mean_series);
}

TEST_CASE("heavytail supports both paper priors") {
    std::map<std::string, std::string> entries{
        {"kind", "heavytail"}, {"sampler", "anchored"}, {"eta", "0.01"},
        {"iota", "2"},         {"beta", "1"},           {"n_steps", "30"},
        {"n_repeats", "1"},    {"n_chains", "200"},     {"seed", "5"},
    };
    entries["prior"] = "gaussian(10)";
    const auto g = run_heavytail_experiment(spec_from_entries(entries));
    CHECK(g.mean_series.size() == 30);
    entries["prior"] = "uniform(-5,5)";
    const auto u = run_heavytail_experiment(spec_from_entries(entries));
    CHECK(u.mean_series.size() == 30);
    CHECK(g.mean_series != u.mean_series);
}

TEST_CASE("logistic experiment smoke run on a small fixture") {
    std::map<std::string, std::string> entries{
        {"kind", "logistic_det"}, {"sampler", "anchored"},
        {"eta", "0.05"},          {"n_steps", "20"},
        {"n_repeats", "3"},       {"seed", "7"},
        {"penalty", "l1"},        {"lambda", "1"},
        {"m0", "0.5"},            {"epsilon", "0.5"},
        {"dataset", "tests/data/banknote_fixture.csv"},
        {"dataset_format", "banknote"},
    };
    const ExperimentSpec spec = spec_from_entries(entries);
    const ExperimentResult r1 = run_experiment(spec);
    const ExperimentResult r2 = run_experiment(spec);
    CHECK(r1.metric_name == "accuracy");
    CHECK(r1.mean_series.size() == 20);
    CHECK(r1.mean_series == r2.mean_series);
    for (double a : r1.mean_series) {
        CHECK(a >= 0.0);
        CHECK(a <= 1.0);
    }
}

TEST_CASE("nn forward pass and second-layer gradient") {
    const Dataset data = load_dataset("tests/data/banknote_fixture.csv",
                                      DatasetFormat::banknote);
    const int nh = 8;
    std::vector<double> w1(nh * data.d, 0.0), w2(nh, 0.0);
    const NnEval at_zero = nn_loss_accuracy(data, w1, w2, nh);
    CHECK(at_zero.loss == doctest::Approx(std::log(2.0)).epsilon(1e-12));

    // exact second-layer gradient vs central finite differences
    RngStream rng(3, 3);
    for (double& v : w1) v = 0.5 * rng.next_normal();
    for (double& v : w2) v = 0.5 * rng.next_normal();
    std::vector<double> grad(nh);
    nn_second_layer_grad(data, w1, w2, nh, grad);
    const double h = 1e-6;
    for (int j = 0; j < nh; ++j) {
        std::vector<double> up = w2, dn = w2;
        up[j] += h;
        dn[j] -= h;
        const double fd = (nn_loss_accuracy(data, w1, up, nh).loss -
                           nn_loss_accuracy(data, w1, dn, nh).loss) / (2.0 * h);
        CHECK(grad[j] == doctest::Approx(fd).epsilon(1e-5));
    }
}

TEST_CASE("nn experiment smoke run") {
    std::map<std::string, std::string> entries{
        {"kind", "neuralnet"}, {"sampler", "anchored"}, {"eta", "0.05"},
        {"n_steps", "10"},     {"n_repeats", "2"},      {"seed", "11"},
        {"mu", "0.3"},         {"n_mc", "10"},          {"hidden", "6"},
        {"dataset", "tests/data/banknote_fixture.csv"},
        {"dataset_format", "banknote"},
    };
    const ExperimentResult r = run_experiment(spec_from_entries(entries));
    CHECK(r.mean_series.size() == 10);
    CHECK(r.aux_name == "loss");
    CHECK(r.aux_mean_series.size() == 10);
    for (double loss : r.aux_mean_series) CHECK(loss > 0.0);
}

TEST_CASE("emitted spec echo reparses to the same spec") {
    const ExperimentSpec spec = spec_from_entries(laplace_entries());
    const std::string dir = "/tmp/alang_echo";
    std::filesystem::remove_all(dir);
    ExperimentResult r;
    r.spec = spec;
    r.version = "test";
    emit_results(r, dir);
    const ExperimentSpec back =
        parse_experiment_spec((std::filesystem::path(dir) / "spec.echo").string());
    CHECK(back.kind == spec.kind);
    CHECK(back.sampler == spec.sampler);
    CHECK(back.eta == spec.eta);
    CHECK(back.seed == spec.seed);
    CHECK(back.n_chains == spec.n_chains);
}
