#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <string>
#include <vector>

namespace bgp {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

/// Binary support vector, one flag per dictionary column.
using SupportMask = std::vector<std::uint8_t>;

int support_size(const SupportMask& s);

/// Dense dictionary with unit-l2-norm columns. Immutable after construction
/// and safe to share across threads.
class Dictionary {
 public:
  /// Validates that every column has unit norm (within 1e-12); throws otherwise.
  explicit Dictionary(Mat data);

  /// Normalizes the columns of a raw matrix, then constructs.
  static Dictionary normalized(Mat raw);

  /// i.i.d. N(0,1) entries, columns normalized. Deterministic given seed.
  static Dictionary gaussian(int n_rows, int n_cols, std::uint64_t seed);

  int rows() const { return static_cast<int>(data_.rows()); }
  int cols() const { return static_cast<int>(data_.cols()); }
  const Mat& data() const { return data_; }

 private:
  Mat data_;
};

/// output[i] = <column i, v>. Throws on dimension mismatch.
Vec correlate_all(const Dictionary& dict, const Vec& v);

/// Solves (D_s^T D_s + eps I) x_s = D_s^T y on the masked columns; zeros
/// elsewhere. eps = 0 requires linearly independent masked columns and
/// throws a rank error otherwise.
Vec ridge_solve_on_support(const Dictionary& dict, const SupportMask& s,
                           const Vec& y, double eps);

/// Minimum-l2-norm least-squares solution on the masked columns; zeros
/// elsewhere. Singular values below 1e-10 * sigma_max are treated as zero.
Vec lsq_pinv_on_support(const Dictionary& dict, const SupportMask& s,
                        const Vec& y);

/// y - D x, exactly.
Vec residual(const Dictionary& dict, const Vec& x, const Vec& y);

// CSV helpers: one matrix row per line, comma-separated, '.' decimal.
Mat load_matrix_csv(const std::string& path);
void save_matrix_csv(const std::string& path, const Mat& m);
Vec load_vector_csv(const std::string& path);
void save_vector_csv(const std::string& path, const Vec& v);

}  // namespace bgp
