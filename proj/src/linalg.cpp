#include "bgp/linalg.hpp"

#include "bgp/rng.hpp"

#include <Eigen/SVD>

#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace bgp {

namespace {

constexpr double kColumnNormTol = 1e-12;
constexpr double kPinvCutoff = 1e-10;

std::vector<int> masked_indices(const SupportMask& s) {
  std::vector<int> idx;
  idx.reserve(s.size());
  for (int i = 0; i < static_cast<int>(s.size()); ++i) {
    if (s[i]) idx.push_back(i);
  }
  return idx;
}

Mat masked_columns(const Dictionary& dict, const std::vector<int>& idx) {
  Mat sub(dict.rows(), static_cast<int>(idx.size()));
  for (int j = 0; j < static_cast<int>(idx.size()); ++j) {
    sub.col(j) = dict.data().col(idx[j]);
  }
  return sub;
}

void check_mask(const Dictionary& dict, const SupportMask& s) {
  if (static_cast<int>(s.size()) != dict.cols()) {
    throw std::invalid_argument("support mask length " +
                                std::to_string(s.size()) +
                                " does not match dictionary columns " +
                                std::to_string(dict.cols()));
  }
}

}  // namespace

int support_size(const SupportMask& s) {
  int count = 0;
  for (auto bit : s) count += bit ? 1 : 0;
  return count;
}

Dictionary::Dictionary(Mat data) : data_(std::move(data)) {
  if (data_.rows() < 1 || data_.cols() < 1) {
    throw std::invalid_argument("dictionary must be at least 1x1");
  }
  for (int j = 0; j < data_.cols(); ++j) {
    const double norm = data_.col(j).norm();
    if (std::abs(norm - 1.0) > kColumnNormTol) {
      throw std::invalid_argument("dictionary column " + std::to_string(j) +
                                  " has norm " + std::to_string(norm) +
                                  ", expected 1");
    }
  }
}

Dictionary Dictionary::normalized(Mat raw) {
  for (int j = 0; j < raw.cols(); ++j) {
    const double norm = raw.col(j).norm();
    if (norm == 0.0) {
      throw std::invalid_argument("cannot normalize zero column " +
                                  std::to_string(j));
    }
    raw.col(j) /= norm;
  }
  return Dictionary(std::move(raw));
}

Dictionary Dictionary::gaussian(int n_rows, int n_cols, std::uint64_t seed) {
  auto rng = stream_rng(seed, 0);
  std::normal_distribution<double> normal(0.0, 1.0);
  Mat raw(n_rows, n_cols);
  for (int j = 0; j < n_cols; ++j) {
    for (int i = 0; i < n_rows; ++i) raw(i, j) = normal(rng);
  }
  return normalized(std::move(raw));
}

Vec correlate_all(const Dictionary& dict, const Vec& v) {
  if (v.size() != dict.rows()) {
    throw std::invalid_argument("correlate_all: vector length " +
                                std::to_string(v.size()) +
                                " does not match dictionary rows " +
                                std::to_string(dict.rows()));
  }
  return dict.data().transpose() * v;
}

Vec ridge_solve_on_support(const Dictionary& dict, const SupportMask& s,
                           const Vec& y, double eps) {
  check_mask(dict, s);
  if (eps < 0.0) throw std::invalid_argument("ridge eps must be nonnegative");
  const auto idx = masked_indices(s);
  Vec x = Vec::Zero(dict.cols());
  if (idx.empty()) return x;
  const Mat sub = masked_columns(dict, idx);

  Vec coeffs;
  if (eps == 0.0) {
    Eigen::ColPivHouseholderQR<Mat> qr(sub);
    if (qr.rank() < static_cast<Eigen::Index>(idx.size())) {
      throw std::runtime_error(
          "ridge_solve_on_support: masked columns are rank deficient (rank " +
          std::to_string(qr.rank()) + " of " + std::to_string(idx.size()) +
          ") and eps = 0");
    }
    coeffs = qr.solve(y);
  } else {
    // Small regularized Gram system, size ||s||_0; solved via SVD of the
    // subdictionary so near-singular supports stay stable at tiny eps.
    Eigen::BDCSVD<Mat> svd(sub, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const Vec& sv = svd.singularValues();
    Vec filtered = svd.matrixU().transpose() * y;
    for (int j = 0; j < sv.size(); ++j) {
      filtered[j] *= sv[j] / (sv[j] * sv[j] + eps);
    }
    coeffs = svd.matrixV() * filtered;
  }
  for (int j = 0; j < static_cast<int>(idx.size()); ++j) x[idx[j]] = coeffs[j];
  return x;
}

Vec lsq_pinv_on_support(const Dictionary& dict, const SupportMask& s,
                        const Vec& y) {
  check_mask(dict, s);
  const auto idx = masked_indices(s);
  Vec x = Vec::Zero(dict.cols());
  if (idx.empty()) return x;
  const Mat sub = masked_columns(dict, idx);
  Eigen::BDCSVD<Mat> svd(sub, Eigen::ComputeThinU | Eigen::ComputeThinV);
  svd.setThreshold(kPinvCutoff);
  const Vec coeffs = svd.solve(y);
  for (int j = 0; j < static_cast<int>(idx.size()); ++j) x[idx[j]] = coeffs[j];
  return x;
}

Vec residual(const Dictionary& dict, const Vec& x, const Vec& y) {
  if (x.size() != dict.cols() || y.size() != dict.rows()) {
    throw std::invalid_argument("residual: dimension mismatch");
  }
  return y - dict.data() * x;
}

Mat load_matrix_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::vector<std::vector<double>> rows;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line[0] == '#') continue;
    std::vector<double> row;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) {
      try {
        row.push_back(std::stod(cell));
      } catch (const std::exception&) {
        throw std::runtime_error(path + ":" + std::to_string(line_no) +
                                 ": cannot parse '" + cell + "' as a number");
      }
    }
    if (!rows.empty() && row.size() != rows.front().size()) {
      throw std::runtime_error(path + ":" + std::to_string(line_no) +
                               ": ragged row (expected " +
                               std::to_string(rows.front().size()) +
                               " columns, got " + std::to_string(row.size()) +
                               ")");
    }
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw std::runtime_error(path + ": empty matrix");
  Mat m(static_cast<int>(rows.size()), static_cast<int>(rows.front().size()));
  for (int i = 0; i < m.rows(); ++i) {
    for (int j = 0; j < m.cols(); ++j) m(i, j) = rows[i][j];
  }
  return m;
}

void save_matrix_csv(const std::string& path, const Mat& m) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  char buf[64];
  for (int i = 0; i < m.rows(); ++i) {
    for (int j = 0; j < m.cols(); ++j) {
      std::snprintf(buf, sizeof(buf), "%.17g", m(i, j));
      out << buf << (j + 1 < m.cols() ? "," : "");
    }
    out << "\n";
  }
}

Vec load_vector_csv(const std::string& path) {
  const Mat m = load_matrix_csv(path);
  if (m.cols() == 1) return m.col(0);
  if (m.rows() == 1) return m.row(0).transpose();
  throw std::runtime_error(path + ": expected a single row or column");
}

void save_vector_csv(const std::string& path, const Vec& v) {
  save_matrix_csv(path, v);
}

}  // namespace bgp
