#include <doctest.h>

#include <filesystem>
#include <fstream>

#include "sasvi/dataset.hpp"

using namespace sasvi;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
    const fs::path dir = fs::temp_directory_path() / "sasvi_unit";
    fs::create_directories(dir);
    return dir / name;
}

double correlation(const Vector& u, const Vector& v) {
    const Vector uc = u.array() - u.mean();
    const Vector vc = v.array() - v.mean();
    return uc.dot(vc) / (uc.norm() * vc.norm());
}

}  // namespace

TEST_CASE("identity csv loads with unit column norms") {
    const auto xp = scratch("identity_x.csv");
    const auto yp = scratch("identity_y.csv");
    std::ofstream(xp) << "# 2 2\n1,0\n0,1\n";
    std::ofstream(yp) << "1\n1\n";
    const ProblemInstance inst = load_instance(xp, DataFormat::csv, yp);
    CHECK(inst.n() == 2);
    CHECK(inst.p() == 2);
    CHECK(inst.col_norms()[0] == 1.0);
    CHECK(inst.col_norms()[1] == 1.0);
}

TEST_CASE("non-finite entries are reported with their position") {
    const auto xp = scratch("nan_x.csv");
    const auto yp = scratch("nan_y.csv");
    std::ofstream(xp) << "# 2 2\n1,0\n0,nan\n";
    std::ofstream(yp) << "1\n1\n";
    CHECK_THROWS_WITH_AS(load_instance(xp, DataFormat::csv, yp), "non-finite entry at (1, 1)", Error);
}

TEST_CASE("dimension mismatch between X and y is rejected") {
    Matrix X = Matrix::Identity(3, 2);
    CHECK_THROWS_AS(ProblemInstance(X, Vector::Ones(2)), Error);
    const auto xp = scratch("mismatch_x.csv");
    const auto yp = scratch("mismatch_y.csv");
    std::ofstream(xp) << "# 2 2\n1,0\n0,1\n";
    std::ofstream(yp) << "1\n1\n1\n";
    CHECK_THROWS_AS(load_instance(xp, DataFormat::csv, yp), Error);
}

TEST_CASE("raw-f64 round trip is bitwise exact") {
    SyntheticSpec spec;
    spec.n = 17;
    spec.p = 23;
    spec.p_bar = 5;
    spec.seed = 3;
    const SyntheticData data = generate_synthetic(spec);
    const auto path = scratch("roundtrip.bin");
    save_raw(path, data.X, data.y);
    const ProblemInstance back = load_instance(path, DataFormat::raw_f64);
    CHECK(back.X() == data.X);
    CHECK(back.y() == data.y);

    std::ofstream(path, std::ios::app | std::ios::binary) << "x";
    CHECK_THROWS_AS(load_instance(path, DataFormat::raw_f64), Error);
}

TEST_CASE("csv round trip reproduces the values") {
    SyntheticSpec spec;
    spec.n = 6;
    spec.p = 4;
    spec.p_bar = 2;
    spec.seed = 9;
    const SyntheticData data = generate_synthetic(spec);
    const auto xp = scratch("rt_x.csv");
    const auto yp = scratch("rt_y.csv");
    save_csv(xp, yp, data.X, data.y);
    const ProblemInstance back = load_instance(xp, DataFormat::csv, yp);
    CHECK(back.X() == data.X);
    CHECK(back.y() == data.y);
}

TEST_CASE("zero signal and zero noise give a rejected response") {
    SyntheticSpec spec;
    spec.n = 10;
    spec.p = 20;
    spec.p_bar = 0;
    spec.sigma = 0.0;
    const SyntheticData data = generate_synthetic(spec);
    CHECK(data.y.isZero(0.0));
    CHECK_THROWS_WITH_AS(data.instance(), "response is identically zero", Error);
}

TEST_CASE("generator is deterministic and seed dependent") {
    SyntheticSpec spec;
    spec.n = 30;
    spec.p = 50;
    spec.p_bar = 7;
    spec.seed = 11;
    const SyntheticData a = generate_synthetic(spec);
    const SyntheticData b = generate_synthetic(spec);
    CHECK(a.X == b.X);
    CHECK(a.y == b.y);
    CHECK(a.support == b.support);
    spec.seed = 12;
    CHECK(generate_synthetic(spec).X != a.X);
}

TEST_CASE("generator follows the requested shape") {
    SyntheticSpec spec;  // n = 250, p = 10000, p_bar = 100
    const SyntheticData data = generate_synthetic(spec);
    CHECK(data.X.rows() == 250);
    CHECK(data.X.cols() == 10000);
    CHECK(data.support.size() == 100);
    CHECK(std::is_sorted(data.support.begin(), data.support.end()));
    Index nonzero = 0;
    for (Index j = 0; j < data.beta_true.size(); ++j) {
        if (data.beta_true[j] != 0.0) ++nonzero;
        CHECK(std::abs(data.beta_true[j]) <= 1.0);
    }
    CHECK(nonzero == 100);
}

TEST_CASE("neighbouring columns have correlation rho") {
    SyntheticSpec spec;
    spec.n = 2000;
    spec.p = 2;
    spec.p_bar = 1;
    spec.rho = 0.5;
    spec.seed = 5;
    const SyntheticData data = generate_synthetic(spec);
    CHECK(std::abs(correlation(data.X.col(0), data.X.col(1)) - 0.5) < 0.05);

    spec.n = 5000;
    spec.p = 3;
    spec.rho = 0.0;
    const SyntheticData indep = generate_synthetic(spec);
    for (Index i = 0; i < 3; ++i)
        for (Index k = i + 1; k < 3; ++k) CHECK(std::abs(correlation(indep.X.col(i), indep.X.col(k))) < 0.05);
}

TEST_CASE("cached column statistics match direct recomputation") {
    SyntheticSpec spec;
    spec.n = 40;
    spec.p = 60;
    spec.p_bar = 6;
    const ProblemInstance inst = generate_synthetic(spec).instance();
    for (Index j = 0; j < inst.p(); ++j) {
        const double norm = inst.X().col(j).norm();
        const double xy = inst.X().col(j).dot(inst.y());
        CHECK(std::abs(inst.col_norms()[j] - norm) <= 1e-12 * norm);
        CHECK(std::abs(inst.xj_dot_y()[j] - xy) <= 1e-12 * std::max(1.0, std::abs(xy)));
    }
}

TEST_CASE("invalid synthetic specs are rejected") {
    SyntheticSpec spec;
    spec.p = 5;
    spec.p_bar = 6;
    CHECK_THROWS_AS(generate_synthetic(spec), Error);
    spec.p_bar = 2;
    spec.rho = 1.0;
    CHECK_THROWS_AS(generate_synthetic(spec), Error);
    spec.rho = -0.1;
    CHECK_THROWS_AS(generate_synthetic(spec), Error);
    spec.rho = 0.5;
    spec.sigma = -1.0;
    CHECK_THROWS_AS(generate_synthetic(spec), Error);
}

TEST_CASE("standardization gives unit columns") {
    SyntheticSpec spec;
    spec.n = 20;
    spec.p = 8;
    spec.p_bar = 3;
    SyntheticData data = generate_synthetic(spec);
    standardize_columns(data.X);
    for (Index j = 0; j < 8; ++j) CHECK(data.X.col(j).norm() == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("format names parse") {
    CHECK(parse_format("csv") == DataFormat::csv);
    CHECK(parse_format("raw-f64") == DataFormat::raw_f64);
    CHECK_THROWS_AS(parse_format("parquet"), Error);
}
