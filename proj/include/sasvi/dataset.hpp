#pragma once

#include <cstdint>
#include <filesystem>
#include <vector>

#include "sasvi/common.hpp"

namespace sasvi {

/**
 * Immutable Lasso problem data: design matrix X (n x p, column-major),
 * response y, and cached per-column statistics.
 *
 * Construction validates the data: n, p >= 1, every entry finite, and
 * y != 0 (all screening geometry requires a nonzero response).
 */
class ProblemInstance {
public:
    ProblemInstance(Matrix X, Vector y);

    Index n() const { return X_.rows(); }
    Index p() const { return X_.cols(); }
    const Matrix& X() const { return X_; }
    const Vector& y() const { return y_; }
    auto column(Index j) const { return X_.col(j); }

    /// ||x_j||_2 for every column.
    const Vector& col_norms() const { return col_norms_; }
    /// ||x_j||_2^2 for every column.
    const Vector& col_norms2() const { return col_norms2_; }
    /// <x_j, y> for every column.
    const Vector& xj_dot_y() const { return xj_dot_y_; }
    double y_norm() const { return y_norm_; }

private:
    Matrix X_;
    Vector y_;
    Vector col_norms_;
    Vector col_norms2_;
    Vector xj_dot_y_;
    double y_norm_ = 0.0;
};

struct SyntheticSpec {
    Index n = 250;
    Index p = 10000;
    Index p_bar = 100;   // number of nonzero true coefficients
    double rho = 0.5;    // feature correlation is rho^|i-j|
    double sigma = 0.1;  // noise scale
    std::uint64_t seed = 0;

    void validate() const;
};

/// Name of the pseudo-random scheme used by generate_synthetic.
inline constexpr const char* kPrngName = "mt19937_64+polar";

/// Raw output of the synthetic generator. The response may be identically
/// zero (p_bar = 0, sigma = 0); instance() rejects that case.
struct SyntheticData {
    SyntheticSpec spec;
    Matrix X;
    Vector y;
    Vector beta_true;
    std::vector<Index> support;  // sorted indices of the nonzero beta_true entries

    ProblemInstance instance() const { return ProblemInstance(X, y); }
};

/**
 * Draws X with i.i.d. Gaussian rows of covariance rho^|i-j| (AR(1) recursion
 * along each row), a p_bar-sparse beta with uniform [-1, 1] values on a
 * uniformly random support, and y = X beta + sigma * eps.
 * Output is a deterministic function of the spec.
 */
SyntheticData generate_synthetic(const SyntheticSpec& spec);

/// Scales every nonzero column of X to unit Euclidean norm.
void standardize_columns(Matrix& X);

enum class DataFormat { csv, raw_f64 };

DataFormat parse_format(const std::string& name);

/**
 * Loads an instance. For raw-f64 the single file holds X and y; for csv,
 * `path` is the X file (`# n p` header, n rows of p values) and `y_path` is
 * a single-column file with n values.
 */
ProblemInstance load_instance(const std::filesystem::path& path, DataFormat format,
                              const std::filesystem::path& y_path = {});

/// raw-f64 layout: "LSV1", u64 n, u64 p, X column-major, y; little-endian.
void save_raw(const std::filesystem::path& path, const Matrix& X, const Vector& y);
void save_csv(const std::filesystem::path& x_path, const std::filesystem::path& y_path,
              const Matrix& X, const Vector& y);

}  // namespace sasvi
