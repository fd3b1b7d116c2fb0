#include <lpball/experiments.hpp>

#include "oracles.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <random>
#include <set>
#include <sstream>
#include <string>

namespace lpball {
namespace {

namespace fs = std::filesystem;

class TempDir {
public:
    TempDir() {
        std::random_device rd;
        path_ = fs::temp_directory_path() / ("lpball_test_" + std::to_string(rd()));
        fs::create_directories(path_);
    }
    ~TempDir() { fs::remove_all(path_); }
    fs::path operator/(const std::string &name) const { return path_ / name; }

private:
    fs::path path_;
};

std::string slurp(const fs::path &path) {
    std::ifstream in(path, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_file(const fs::path &path, const std::string &text) {
    std::ofstream out(path, std::ios::binary);
    out << text;
}

TEST(MethodSpec, ParseAndTags) {
    EXPECT_EQ(MethodSpec::parse("0.5").kind, MethodSpec::Kind::Lp);
    EXPECT_DOUBLE_EQ(MethodSpec::parse("0.3").p, 0.3);
    EXPECT_EQ(MethodSpec::parse("L0").kind, MethodSpec::Kind::L0);
    EXPECT_EQ(MethodSpec::parse("L1").kind, MethodSpec::Kind::L1);
    EXPECT_EQ(MethodSpec::parse("1").kind, MethodSpec::Kind::L1);
    EXPECT_EQ(MethodSpec::parse("0").kind, MethodSpec::Kind::L0);
    EXPECT_EQ(MethodSpec::lp(0.5).tag(), "IR1B");
    EXPECT_EQ(MethodSpec::l0().tag(), "IHT");
    EXPECT_EQ(MethodSpec::l1().tag(), "GPM");
    EXPECT_EQ(MethodSpec::l0().p_value(), 0.0);
    EXPECT_EQ(MethodSpec::l1().p_value(), 1.0);
    EXPECT_THROW(MethodSpec::parse("L2"), InvalidArgument);
    EXPECT_THROW(MethodSpec::parse("1.5"), InvalidArgument);
    EXPECT_THROW(MethodSpec::parse(""), InvalidArgument);
}

TEST(RecoveryInstance, ZeroSignalNoNoise) {
    std::mt19937_64 rng(51);
    const RecoveryInstance inst = gen_recovery_instance(10, 5, 0, 0.0, rng);
    EXPECT_TRUE(inst.x_true.isZero(0.0));
    EXPECT_TRUE(inst.y.isZero(0.0));
}

TEST(RecoveryInstance, SupportAndSigns) {
    std::mt19937_64 rng(52);
    const RecoveryInstance inst = gen_recovery_instance(40, 20, 7, 0.0, rng);
    EXPECT_EQ((inst.x_true.array() != 0.0).count(), 7);
    for (Index i = 0; i < 40; ++i)
        EXPECT_TRUE(inst.x_true[i] == 0.0 || std::abs(inst.x_true[i]) == 1.0);
    EXPECT_LE((inst.y - inst.A * inst.x_true).norm(), 1e-12);
}

TEST(RecoveryInstance, DeterministicForSeed) {
    std::mt19937_64 a(53), b(53);
    const auto x = gen_recovery_instance(30, 12, 4, 1e-2, a);
    const auto y = gen_recovery_instance(30, 12, 4, 1e-2, b);
    EXPECT_EQ(x.A, y.A);
    EXPECT_EQ(x.y, y.y);
    EXPECT_EQ(x.x_true, y.x_true);
}

TEST(RecoveryInstance, GaussianMoments) {
    std::mt19937_64 rng(54);
    const auto inst = gen_recovery_instance(200, 100, 5, 0.0, rng);
    const double count = static_cast<double>(inst.A.size());
    const double mean = inst.A.mean();
    const double var = (inst.A.array() - mean).square().sum() / count;
    EXPECT_LE(std::abs(mean), 5.0 / std::sqrt(count));
    EXPECT_LE(std::abs(var - 1.0), 5.0 * std::sqrt(2.0 / count));
}

TEST(RecoveryInstance, Errors) {
    std::mt19937_64 rng(55);
    EXPECT_THROW(gen_recovery_instance(5, 5, 6, 0.0, rng), InvalidArgument);
    EXPECT_THROW(gen_recovery_instance(5, 5, 1, -1.0, rng), InvalidArgument);
}

TEST(RecoverySuccess, Examples) {
    const Vector t = Vector::Ones(3);
    EXPECT_TRUE(recovery_success(t, t, 1e-3));
    EXPECT_FALSE(recovery_success(Vector::Zero(3), t, 1e-3));
    Vector off = Vector::Zero(4);
    off[0] = 1.0;
    Vector guess = off;
    guess[1] = 0.5; // relative error exactly 0.5
    EXPECT_FALSE(recovery_success(guess, off, 0.5));
    EXPECT_TRUE(recovery_success(guess, off, 0.5000001));
    EXPECT_THROW(recovery_success(t, Vector::Zero(3), 1e-3), InvalidArgument);
}

RecoverySpec small_spec() {
    RecoverySpec spec;
    spec.n = 32;
    spec.d = 2;
    spec.m_grid = {2, 16, 32};
    spec.noise_std = 0.0;
    spec.methods = {MethodSpec::lp(0.5), MethodSpec::l0(), MethodSpec::l1()};
    spec.trials = 3;
    spec.seed = 5;
    spec.solver.tol = 1e-9;
    return spec;
}

TEST(RecoverySweep, RowLayoutAndRange) {
    const SweepResult res = recovery_sweep(small_spec(), 1);
    ASSERT_EQ(res.rows.size(), 9u);
    const char *tags[] = {"IR1B", "IHT", "GPM"};
    for (std::size_t i = 0; i < res.rows.size(); ++i) {
        const SweepRow &row = res.rows[i];
        EXPECT_EQ(row.method, tags[i / 3]);
        EXPECT_EQ(row.metric, "success_rate");
        EXPECT_EQ(row.trials, 3);
        EXPECT_EQ(row.seed, 5u);
        EXPECT_GE(row.value, 0.0);
        EXPECT_LE(row.value, 1.0);
        EXPECT_EQ(row.failed_trials, 0);
    }
    // m = 2 equals d: the impossibility regime at threshold 1e-3.
    EXPECT_EQ(res.rows[0].param, 2.0);
    EXPECT_EQ(res.rows[0].value, 0.0);
}

TEST(RecoverySweep, FullyDeterminedSystemSucceeds) {
    RecoverySpec spec = small_spec();
    spec.n = 12;
    spec.d = 1;
    spec.m_grid = {12};
    spec.trials = 1;
    const SweepResult res = recovery_sweep(spec, 1);
    for (const SweepRow &row : res.rows) EXPECT_EQ(row.value, 1.0) << row.method;
}

TEST(RecoverySweep, TooFewMeasurementsFail) {
    RecoverySpec spec = small_spec();
    spec.d = 4;
    spec.m_grid = {2};
    const SweepResult res = recovery_sweep(spec, 1);
    for (const SweepRow &row : res.rows) EXPECT_EQ(row.value, 0.0) << row.method;
}

TEST(RecoverySweep, IndependentOfThreadCount) {
    const RecoverySpec spec = small_spec();
    const SweepResult one = recovery_sweep(spec, 1);
    const SweepResult four = recovery_sweep(spec, 4);
    ASSERT_EQ(one.rows.size(), four.rows.size());
    for (std::size_t i = 0; i < one.rows.size(); ++i) {
        EXPECT_EQ(one.rows[i].value, four.rows[i].value);
        EXPECT_EQ(one.rows[i].mean_iterations, four.rows[i].mean_iterations);
    }
}

TEST(RecoverySweep, LooserThresholdNeverLowersRate) {
    RecoverySpec spec = small_spec();
    spec.noise_std = 1e-2;
    spec.m_grid = {12, 20};
    const SweepResult tight = recovery_sweep(spec, 1);
    spec.success_threshold = 1e-1;
    const SweepResult loose = recovery_sweep(spec, 1);
    for (std::size_t i = 0; i < tight.rows.size(); ++i)
        EXPECT_LE(tight.rows[i].value, loose.rows[i].value);
}

TEST(RecoverySweep, ValidatesSpec) {
    RecoverySpec spec = small_spec();
    spec.trials = 0;
    EXPECT_THROW(recovery_sweep(spec), InvalidArgument);
    spec = small_spec();
    spec.m_grid.clear();
    EXPECT_THROW(recovery_sweep(spec), InvalidArgument);
    spec = small_spec();
    spec.success_threshold = 0.0;
    EXPECT_THROW(recovery_sweep(spec), InvalidArgument);
    spec = small_spec();
    spec.methods.clear();
    EXPECT_THROW(recovery_sweep(spec), InvalidArgument);
    spec = small_spec();
    spec.solver.c = 2.0;
    EXPECT_THROW(recovery_sweep(spec), InvalidArgument);
}

TEST(DeriveSeed, DistinctAndStable) {
    std::set<std::uint64_t> seen;
    for (std::uint64_t a = 0; a < 4; ++a)
        for (std::uint64_t b = 0; b < 50; ++b)
            for (std::uint64_t c = 0; c < 10; ++c) seen.insert(derive_seed(7, a, b, c));
    EXPECT_EQ(seen.size(), 4u * 50u * 10u);
    EXPECT_EQ(derive_seed(7, 1, 2, 3), derive_seed(7, 1, 2, 3));
    EXPECT_NE(derive_seed(7, 1, 2, 3), derive_seed(8, 1, 2, 3));
}

TEST(Dataset, BundledShape) {
    const LogisticData data = load_bundled_dataset();
    EXPECT_EQ(data.samples(), 569);
    EXPECT_EQ(data.features(), 30);
    for (Index i = 0; i < data.samples(); ++i)
        EXPECT_TRUE(data.labels[i] == 1.0 || data.labels[i] == -1.0);
    // Standardized columns.
    for (Index j = 0; j < data.features(); ++j) {
        const auto col = data.X.col(j).array();
        EXPECT_NEAR(col.mean(), 0.0, 1e-10);
        EXPECT_NEAR((col - col.mean()).square().mean(), 1.0, 1e-10);
    }
    // 357 benign (+1), 212 malignant (-1).
    EXPECT_EQ((data.labels.array() > 0).count(), 357);
}

TEST(Dataset, HeaderLabelsAndConstantColumns) {
    TempDir dir;
    write_file(dir / "d.csv", "a,b,label\n1,5,0\n2,5,1\n3,5,1\n");
    const LogisticData data = load_csv_dataset(dir / "d.csv");
    ASSERT_EQ(data.samples(), 3);
    ASSERT_EQ(data.features(), 2);
    EXPECT_EQ(data.labels[0], -1.0);
    EXPECT_EQ(data.labels[1], 1.0);
    EXPECT_TRUE(data.X.col(1).isZero(0.0));
    EXPECT_NEAR(data.X(0, 0), -std::sqrt(1.5), 1e-12);

    write_file(dir / "pm.csv", "1,2,-1\n2,1,1\n");
    EXPECT_EQ(load_csv_dataset(dir / "pm.csv").labels[0], -1.0);
}

TEST(Dataset, Errors) {
    TempDir dir;
    write_file(dir / "empty.csv", "");
    EXPECT_THROW(load_csv_dataset(dir / "empty.csv"), InvalidArgument);

    write_file(dir / "bad.csv", "1,2,0\n1,x,1\n");
    try {
        load_csv_dataset(dir / "bad.csv");
        FAIL() << "expected a parse error";
    } catch (const InvalidArgument &e) {
        EXPECT_NE(std::string(e.what()).find(":2"), std::string::npos) << e.what();
    }

    write_file(dir / "labels.csv", "1,2,0\n1,3,2\n");
    EXPECT_THROW(load_csv_dataset(dir / "labels.csv"), InvalidArgument);
    write_file(dir / "mixed.csv", "1,2,0\n1,3,-1\n");
    EXPECT_THROW(load_csv_dataset(dir / "mixed.csv"), InvalidArgument);
    write_file(dir / "ragged.csv", "1,2,0\n1,1\n");
    EXPECT_THROW(load_csv_dataset(dir / "ragged.csv"), InvalidArgument);
    EXPECT_THROW(load_csv_dataset(dir / "missing.csv"), InvalidArgument);
}

LogisticData toy_data(Index m) {
    LogisticData data{Matrix(m, 1), Vector(m)};
    for (Index i = 0; i < m; ++i) {
        data.X(i, 0) = static_cast<double>(i);
        data.labels[i] = i % 3 == 0 ? -1.0 : 1.0;
    }
    return data;
}

TEST(TrainTestSplit, SizesAndPartition) {
    std::mt19937_64 rng(56);
    const auto [train, test] = train_test_split(toy_data(10), 0.4, rng);
    EXPECT_EQ(test.samples(), 4);
    EXPECT_EQ(train.samples(), 6);
    std::set<double> rows;
    for (Index i = 0; i < train.samples(); ++i) rows.insert(train.X(i, 0));
    for (Index i = 0; i < test.samples(); ++i) rows.insert(test.X(i, 0));
    EXPECT_EQ(rows.size(), 10u);
    for (Index i = 0; i < test.samples(); ++i)
        EXPECT_EQ(test.labels[i], static_cast<Index>(test.X(i, 0)) % 3 == 0 ? -1.0 : 1.0);

    std::mt19937_64 a(57), b(57);
    EXPECT_EQ(train_test_split(toy_data(20), 0.3, a).second.X,
              train_test_split(toy_data(20), 0.3, b).second.X);
    EXPECT_EQ(train_test_split(toy_data(7), 0.4, a).first.samples(), 4);
}

TEST(TrainTestSplit, Errors) {
    std::mt19937_64 rng(58);
    EXPECT_THROW(train_test_split(toy_data(10), 0.0, rng), InvalidArgument);
    EXPECT_THROW(train_test_split(toy_data(10), 1.0, rng), InvalidArgument);
    EXPECT_THROW(train_test_split(toy_data(1), 0.5, rng), InvalidArgument);
}

TEST(PredictAccuracy, Examples) {
    const LogisticData data = toy_data(9);
    EXPECT_DOUBLE_EQ(predict_accuracy(Vector::Zero(1), data), 6.0 / 9.0);

    LogisticData separable{Matrix(4, 1), Vector(4)};
    separable.X << -2, -1, 1, 2;
    separable.labels << -1, -1, 1, 1;
    EXPECT_EQ(predict_accuracy(Vector::Ones(1), separable), 1.0);
    EXPECT_EQ(predict_accuracy(-Vector::Ones(1), separable), 0.0);

    EXPECT_THROW(predict_accuracy(Vector::Zero(2), separable), InvalidArgument);
    EXPECT_THROW(predict_accuracy(Vector::Zero(1), LogisticData{Matrix(0, 1), Vector(0)}),
                 InvalidArgument);
}

TEST(PredictAccuracy, RandomThetaNearMajorityRate) {
    std::mt19937_64 rng(59);
    const Index m = 20000;
    LogisticData data{testing::gaussian_matrix(m, 3, rng), Vector(m)};
    std::bernoulli_distribution coin(0.5);
    for (Index i = 0; i < m; ++i) data.labels[i] = coin(rng) ? 1.0 : -1.0;
    const double acc = predict_accuracy(testing::gaussian_vector(3, rng), data);
    EXPECT_NEAR(acc, 0.5, 0.02);
}

LogisticSweepSpec small_logistic_spec() {
    LogisticSweepSpec spec;
    spec.r_grid = {3.0};
    spec.methods = {MethodSpec::lp(0.5), MethodSpec::l1()};
    spec.seed = 3;
    spec.solver.max_iter = 2000;
    return spec;
}

LogisticData synthetic_logistic(Index m, Index n, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    LogisticData data{testing::gaussian_matrix(m, n, rng), Vector(m)};
    const Vector w = testing::gaussian_vector(n, rng);
    for (Index i = 0; i < m; ++i) data.labels[i] = data.X.row(i).dot(w) >= 0 ? 1.0 : -1.0;
    return data;
}

TEST(LogisticSweep, SingletonGridGivesOneRowPerMethod) {
    const SweepResult res = logistic_sweep(synthetic_logistic(80, 5, 60), small_logistic_spec(), 1);
    ASSERT_EQ(res.rows.size(), 2u);
    EXPECT_EQ(res.rows[0].method, "IR1B");
    EXPECT_EQ(res.rows[1].method, "GPM");
    for (const auto &row : res.rows) {
        EXPECT_EQ(row.metric, "test_accuracy");
        EXPECT_EQ(row.param, 3.0);
        EXPECT_GE(row.value, 0.0);
        EXPECT_LE(row.value, 1.0);
    }
}

TEST(LogisticSweep, HugeRadiusMatchesUnconstrainedFit) {
    const LogisticData data = synthetic_logistic(200, 4, 61);
    LogisticSweepSpec spec = small_logistic_spec();
    spec.r_grid = {1e6};
    spec.solver.max_iter = 20000;
    const SweepResult res = logistic_sweep(data, spec, 1);

    // Plain gradient descent on the same split.
    std::mt19937_64 split(spec.seed);
    const auto [train, test] = train_test_split(data, spec.test_frac, split);
    const LogisticObjective obj(train);
    Vector theta = Vector::Zero(4);
    for (int k = 0; k < 20000; ++k) theta -= obj.gradient(theta) / (1.1 * obj.lipschitz());
    const double reference = predict_accuracy(theta, test);
    for (const auto &row : res.rows) EXPECT_NEAR(row.value, reference, 0.01) << row.method;
}

TEST(LogisticSweep, Reproducible) {
    const LogisticData data = synthetic_logistic(60, 4, 62);
    LogisticSweepSpec spec = small_logistic_spec();
    spec.r_grid = {1.0, 2.0, 4.0};
    const SweepResult a = logistic_sweep(data, spec, 1);
    const SweepResult b = logistic_sweep(data, spec, 3);
    for (std::size_t i = 0; i < a.rows.size(); ++i) EXPECT_EQ(a.rows[i].value, b.rows[i].value);
}

TEST(LogisticSweep, ValidatesSpec) {
    const LogisticData data = synthetic_logistic(20, 2, 63);
    LogisticSweepSpec spec = small_logistic_spec();
    spec.r_grid.clear();
    EXPECT_THROW(logistic_sweep(data, spec), InvalidArgument);
    spec = small_logistic_spec();
    spec.methods = {MethodSpec::l0()};
    EXPECT_THROW(logistic_sweep(data, spec), InvalidArgument);
    spec = small_logistic_spec();
    spec.r_grid = {-1.0};
    EXPECT_THROW(logistic_sweep(data, spec), InvalidArgument);
}

SweepResult sample_result() {
    SweepResult res;
    SweepRow a;
    a.method = "IR1B";
    a.p = 0.3;
    a.param = 50;
    a.metric = "success_rate";
    a.value = 1.0 / 3.0;
    a.trials = 3;
    a.seed = 18446744073709551615ull;
    a.mean_iterations = 12.5;
    a.mean_wall_seconds = 0.25;
    SweepRow b = a;
    b.method = "GPM";
    b.p = 1.0;
    b.value = 0.1 + 0.2;
    res.rows = {a, b};
    return res;
}

void expect_same_rows(const SweepResult &a, const SweepResult &b) {
    ASSERT_EQ(a.rows.size(), b.rows.size());
    for (std::size_t i = 0; i < a.rows.size(); ++i) {
        EXPECT_EQ(a.rows[i].method, b.rows[i].method);
        EXPECT_EQ(a.rows[i].p, b.rows[i].p);
        EXPECT_EQ(a.rows[i].param, b.rows[i].param);
        EXPECT_EQ(a.rows[i].metric, b.rows[i].metric);
        EXPECT_EQ(a.rows[i].value, b.rows[i].value);
        EXPECT_EQ(a.rows[i].trials, b.rows[i].trials);
        EXPECT_EQ(a.rows[i].seed, b.rows[i].seed);
    }
}

TEST(Persist, CsvAndJsonRoundTrip) {
    TempDir dir;
    const SweepResult res = sample_result();
    persist_results(res, dir / "r.csv", ResultFormat::Csv);
    persist_results(res, dir / "r.json", ResultFormat::Json);
    const SweepResult csv = load_results(dir / "r.csv", ResultFormat::Csv);
    const SweepResult json = load_results(dir / "r.json", ResultFormat::Json);
    expect_same_rows(res, csv);
    expect_same_rows(res, json);
    expect_same_rows(csv, json);

    const std::string text = slurp(dir / "r.csv");
    EXPECT_EQ(text.substr(0, text.find('\n')), "method,p,param,metric,value,trials,seed");
    EXPECT_EQ(text.find('\r'), std::string::npos);
    EXPECT_NE(text.find("0.30000000000000004"), std::string::npos);
}

TEST(Persist, EmptyResultIsHeaderOnly) {
    TempDir dir;
    persist_results(SweepResult{}, dir / "e.csv", ResultFormat::Csv);
    EXPECT_EQ(slurp(dir / "e.csv"), "method,p,param,metric,value,trials,seed\n");
    EXPECT_TRUE(load_results(dir / "e.csv", ResultFormat::Csv).rows.empty());
    persist_results(SweepResult{}, dir / "e.json", ResultFormat::Json);
    EXPECT_TRUE(load_results(dir / "e.json", ResultFormat::Json).rows.empty());
}

TEST(Persist, StatsRowsAreOptIn) {
    TempDir dir;
    persist_results(sample_result(), dir / "plain.csv", ResultFormat::Csv);
    persist_results(sample_result(), dir / "stats.csv", ResultFormat::Csv, {true});
    const std::string plain = slurp(dir / "plain.csv");
    const std::string stats = slurp(dir / "stats.csv");
    EXPECT_EQ(plain.find("mean_iterations"), std::string::npos);
    EXPECT_NE(stats.find("mean_iterations"), std::string::npos);
    EXPECT_NE(stats.find("mean_wall_seconds"), std::string::npos);
}

TEST(Persist, Errors) {
    TempDir dir;
    EXPECT_THROW(parse_result_format("xml"), InvalidArgument);
    EXPECT_EQ(parse_result_format("json"), ResultFormat::Json);
    EXPECT_THROW(persist_results(sample_result(), dir / "no" / "such" / "dir.csv",
                                 ResultFormat::Csv),
                 std::runtime_error);
    write_file(dir / "bad.csv", "wrong,header\n");
    EXPECT_THROW(load_results(dir / "bad.csv", ResultFormat::Csv), InvalidArgument);
    EXPECT_THROW(load_results(dir / "absent.csv", ResultFormat::Csv), InvalidArgument);
}

TEST(Threads, EnvironmentFallback) {
    ::setenv("LPBALL_THREADS", "3", 1);
    EXPECT_EQ(default_thread_count(), 3u);
    ::setenv("LPBALL_THREADS", "junk", 1);
    EXPECT_GE(default_thread_count(), 1u);
    ::unsetenv("LPBALL_THREADS");
    EXPECT_GE(default_thread_count(), 1u);
}

} // namespace
} // namespace lpball
