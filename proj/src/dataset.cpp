#include "sasvi/dataset.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <cmath>
#include <fstream>
#include <numeric>
#include <random>
#include <sstream>

namespace sasvi {

namespace {

std::string entry_label(Index row, Index col) {
    return "(" + std::to_string(row) + ", " + std::to_string(col) + ")";
}

// Portable draws on top of mt19937_64. The std distributions are
// implementation-defined, which would break cross-build reproducibility.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    // Uniform on [0, 1) with 53 random bits.
    double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    // Uniform integer in [0, bound) by rejection.
    std::uint64_t below(std::uint64_t bound) {
        const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                                    std::numeric_limits<std::uint64_t>::max() % bound;
        std::uint64_t v;
        do {
            v = engine_();
        } while (v >= limit);
        return v % bound;
    }

    // Standard normal via the Marsaglia polar method (one cached spare).
    double normal() {
        if (has_spare_) {
            has_spare_ = false;
            return spare_;
        }
        double u, v, s;
        do {
            u = 2.0 * uniform() - 1.0;
            v = 2.0 * uniform() - 1.0;
            s = u * u + v * v;
        } while (s >= 1.0 || s == 0.0);
        const double scale = std::sqrt(-2.0 * std::log(s) / s);
        spare_ = v * scale;
        has_spare_ = true;
        return u * scale;
    }

private:
    std::mt19937_64 engine_;
    double spare_ = 0.0;
    bool has_spare_ = false;
};

void put_u64(std::ostream& out, std::uint64_t v) {
    std::array<char, 8> bytes{};
    for (int k = 0; k < 8; ++k) bytes[k] = static_cast<char>((v >> (8 * k)) & 0xFFu);
    out.write(bytes.data(), 8);
}

std::uint64_t get_u64(std::istream& in) {
    std::array<unsigned char, 8> bytes{};
    in.read(reinterpret_cast<char*>(bytes.data()), 8);
    if (!in) throw Error("raw-f64: unexpected end of file");
    std::uint64_t v = 0;
    for (int k = 0; k < 8; ++k) v |= static_cast<std::uint64_t>(bytes[k]) << (8 * k);
    return v;
}

std::vector<double> parse_csv_row(const std::string& line, Index row) {
    std::vector<double> values;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) {
        const auto first = cell.find_first_not_of(" \t\r");
        const auto last = cell.find_last_not_of(" \t\r");
        if (first == std::string::npos) throw Error("csv: empty cell in row " + std::to_string(row));
        cell = cell.substr(first, last - first + 1);
        std::size_t used = 0;
        double v;
        try {
            v = std::stod(cell, &used);
        } catch (const std::exception&) {
            throw Error("csv: cannot parse '" + cell + "' in row " + std::to_string(row));
        }
        if (used != cell.size())
            throw Error("csv: cannot parse '" + cell + "' in row " + std::to_string(row));
        values.push_back(v);
    }
    return values;
}

bool skippable(const std::string& line) {
    return line.find_first_not_of(" \t\r") == std::string::npos;
}

}  // namespace

ProblemInstance::ProblemInstance(Matrix X, Vector y) : X_(std::move(X)), y_(std::move(y)) {
    if (X_.rows() < 1 || X_.cols() < 1) throw Error("instance needs n >= 1 and p >= 1");
    if (y_.size() != X_.rows())
        throw Error("dimension mismatch: X has " + std::to_string(X_.rows()) + " rows but y has " +
                    std::to_string(y_.size()) + " entries");
    for (Index c = 0; c < X_.cols(); ++c)
        for (Index r = 0; r < X_.rows(); ++r)
            if (!std::isfinite(X_(r, c))) throw Error("non-finite entry at " + entry_label(r, c));
    for (Index r = 0; r < y_.size(); ++r)
        if (!std::isfinite(y_[r])) throw Error("non-finite entry in y at row " + std::to_string(r));
    y_norm_ = y_.norm();
    if (y_norm_ == 0.0) throw Error("response is identically zero");

    col_norms2_ = X_.colwise().squaredNorm().transpose();
    col_norms_ = col_norms2_.cwiseSqrt();
    xj_dot_y_ = X_.transpose() * y_;
}

void SyntheticSpec::validate() const {
    if (n < 1 || p < 1) throw Error("synthetic spec needs n >= 1 and p >= 1");
    if (p_bar < 0 || p_bar > p) throw Error("synthetic spec needs 0 <= p_bar <= p");
    if (!(rho >= 0.0 && rho < 1.0)) throw Error("synthetic spec needs rho in [0, 1)");
    if (!(sigma >= 0.0) || !std::isfinite(sigma)) throw Error("synthetic spec needs sigma >= 0");
}

SyntheticData generate_synthetic(const SyntheticSpec& spec) {
    spec.validate();
    Rng rng(spec.seed);
    SyntheticData out;
    out.spec = spec;
    out.X.resize(spec.n, spec.p);

    const double innovation = std::sqrt(1.0 - spec.rho * spec.rho);
    for (Index i = 0; i < spec.n; ++i) {
        double z = rng.normal();
        out.X(i, 0) = z;
        for (Index k = 1; k < spec.p; ++k) {
            z = spec.rho * z + innovation * rng.normal();
            out.X(i, k) = z;
        }
    }

    // Partial Fisher-Yates for a uniformly random support.
    std::vector<Index> perm(static_cast<std::size_t>(spec.p));
    std::iota(perm.begin(), perm.end(), Index{0});
    for (Index k = 0; k < spec.p_bar; ++k) {
        const auto pick = k + static_cast<Index>(rng.below(static_cast<std::uint64_t>(spec.p - k)));
        std::swap(perm[k], perm[pick]);
    }
    out.support.assign(perm.begin(), perm.begin() + spec.p_bar);
    std::sort(out.support.begin(), out.support.end());

    out.beta_true = Vector::Zero(spec.p);
    for (Index j : out.support) out.beta_true[j] = 2.0 * rng.uniform() - 1.0;

    out.y = out.X * out.beta_true;
    for (Index i = 0; i < spec.n; ++i) out.y[i] += spec.sigma * rng.normal();
    return out;
}

void standardize_columns(Matrix& X) {
    for (Index j = 0; j < X.cols(); ++j) {
        const double norm = X.col(j).norm();
        if (norm > 0.0) X.col(j) /= norm;
    }
}

DataFormat parse_format(const std::string& name) {
    if (name == "csv") return DataFormat::csv;
    if (name == "raw-f64" || name == "raw") return DataFormat::raw_f64;
    throw Error("unknown data format '" + name + "' (expected csv or raw-f64)");
}

void save_raw(const std::filesystem::path& path, const Matrix& X, const Vector& y) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot open " + path.string() + " for writing");
    out.write("LSV1", 4);
    put_u64(out, static_cast<std::uint64_t>(X.rows()));
    put_u64(out, static_cast<std::uint64_t>(X.cols()));
    for (Index j = 0; j < X.cols(); ++j)
        for (Index i = 0; i < X.rows(); ++i) put_u64(out, std::bit_cast<std::uint64_t>(X(i, j)));
    for (Index i = 0; i < y.size(); ++i) put_u64(out, std::bit_cast<std::uint64_t>(y[i]));
    if (!out) throw Error("write failed for " + path.string());
}

void save_csv(const std::filesystem::path& x_path, const std::filesystem::path& y_path,
              const Matrix& X, const Vector& y) {
    std::ofstream xs(x_path);
    std::ofstream ys(y_path);
    if (!xs || !ys) throw Error("cannot open csv output files");
    xs.precision(17);
    ys.precision(17);
    xs << "# " << X.rows() << ' ' << X.cols() << '\n';
    for (Index i = 0; i < X.rows(); ++i) {
        for (Index j = 0; j < X.cols(); ++j) {
            if (j) xs << ',';
            xs << X(i, j);
        }
        xs << '\n';
    }
    for (Index i = 0; i < y.size(); ++i) ys << y[i] << '\n';
}

namespace {

ProblemInstance load_raw(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot open " + path.string());
    std::array<char, 4> magic{};
    in.read(magic.data(), 4);
    if (!in || std::string(magic.data(), 4) != "LSV1") throw Error("raw-f64: bad magic in " + path.string());
    const auto n = static_cast<Index>(get_u64(in));
    const auto p = static_cast<Index>(get_u64(in));
    if (n < 1 || p < 1) throw Error("raw-f64: header has n or p equal to zero");
    Matrix X(n, p);
    for (Index j = 0; j < p; ++j)
        for (Index i = 0; i < n; ++i) X(i, j) = std::bit_cast<double>(get_u64(in));
    Vector y(n);
    for (Index i = 0; i < n; ++i) y[i] = std::bit_cast<double>(get_u64(in));
    in.peek();
    if (!in.eof()) throw Error("raw-f64: trailing bytes after y (dimension mismatch)");
    return ProblemInstance(std::move(X), std::move(y));
}

ProblemInstance load_csv(const std::filesystem::path& x_path, const std::filesystem::path& y_path) {
    std::ifstream xs(x_path);
    if (!xs) throw Error("cannot open " + x_path.string());
    std::string line;
    Index n = -1, p = -1;
    while (std::getline(xs, line)) {
        if (skippable(line)) continue;
        std::stringstream header(line);
        char hash = 0;
        header >> hash >> n >> p;
        if (hash != '#' || !header || n < 1 || p < 1) throw Error("csv: expected '# n p' header in " + x_path.string());
        break;
    }
    if (n < 1) throw Error("csv: missing header in " + x_path.string());
    Matrix X(n, p);
    Index row = 0;
    while (std::getline(xs, line)) {
        if (skippable(line)) continue;
        if (row >= n) throw Error("dimension mismatch: more than " + std::to_string(n) + " rows in X");
        auto values = parse_csv_row(line, row);
        if (static_cast<Index>(values.size()) != p)
            throw Error("dimension mismatch: row " + std::to_string(row) + " has " +
                        std::to_string(values.size()) + " values, expected " + std::to_string(p));
        for (Index j = 0; j < p; ++j) X(row, j) = values[static_cast<std::size_t>(j)];
        ++row;
    }
    if (row != n) throw Error("dimension mismatch: header says " + std::to_string(n) + " rows, found " + std::to_string(row));

    if (y_path.empty()) throw Error("csv format needs a separate y file");
    std::ifstream ys(y_path);
    if (!ys) throw Error("cannot open " + y_path.string());
    std::vector<double> yv;
    Index yrow = 0;
    while (std::getline(ys, line)) {
        if (skippable(line) || line.front() == '#') continue;
        auto values = parse_csv_row(line, yrow++);
        if (values.size() != 1) throw Error("csv: y file must have a single column");
        yv.push_back(values.front());
    }
    if (static_cast<Index>(yv.size()) != n)
        throw Error("dimension mismatch: X has " + std::to_string(n) + " rows but y has " +
                    std::to_string(yv.size()) + " entries");
    return ProblemInstance(std::move(X), Eigen::Map<Vector>(yv.data(), n));
}

}  // namespace

ProblemInstance load_instance(const std::filesystem::path& path, DataFormat format,
                              const std::filesystem::path& y_path) {
    switch (format) {
        case DataFormat::raw_f64: return load_raw(path);
        case DataFormat::csv: return load_csv(path, y_path);
    }
    throw Error("unreachable data format");
}

}  // namespace sasvi
