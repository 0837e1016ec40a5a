#pragma once

// Correspondence Analysis of a non-negative matrix: masses, principal
// inertias and principal coordinates for rows and columns, plus projection
// of supplementary profiles through the transition formulas.

#include <string>
#include <vector>

#include <Eigen/Dense>

namespace pfm {

/// Non-negative n x m table with unique row and column identifiers.
struct DataMatrix {
  std::vector<std::string> row_ids;
  std::vector<std::string> col_ids;
  Eigen::MatrixXd values;

  Eigen::Index rows() const { return values.rows(); }
  Eigen::Index cols() const { return values.cols(); }
};

/// Throws pfm::Error when the matrix is not a valid CA input: shape/id
/// mismatch, duplicate ids, negative or non-finite cells, zero margins.
void validate(const DataMatrix& matrix);

/// Builds a validated matrix with generated ids r0.., c0.. (tests, tooling).
DataMatrix make_matrix(const Eigen::MatrixXd& values);

enum class ProfileKind { row_like, column_like };

struct SupplementaryProfile {
  std::string id;
  ProfileKind kind = ProfileKind::row_like;
  std::vector<double> values;
};

struct SupplementaryPoint {
  std::string id;
  ProfileKind kind = ProfileKind::row_like;
  std::vector<double> coords;
};

/// Eigenvalues below this are reported as exactly zero; their axes carry
/// zero coordinates.
inline constexpr double kZeroEigenvalue = 1e-12;

struct FactorMap {
  std::vector<std::string> row_ids;
  std::vector<std::string> col_ids;
  Eigen::VectorXd row_masses;
  Eigen::VectorXd col_masses;
  Eigen::VectorXd eigenvalues;  // non-increasing, length k
  Eigen::MatrixXd row_coords;   // n x k principal coordinates
  Eigen::MatrixXd col_coords;   // m x k principal coordinates
  double total_inertia = 0.0;
  std::vector<SupplementaryPoint> supplementary;

  int axes() const { return static_cast<int>(eigenvalues.size()); }
};

/// Largest admissible axis count: min(n, m) - 1.
int max_axes(const DataMatrix& matrix);

/// 5 when the table supports it, otherwise max_axes().
int default_axes(const DataMatrix& matrix);

/// Factorizes the min(n,m)-sized cross-product of the standardized residuals.
/// Axis signs are fixed so the first non-zero row coordinate is positive.
FactorMap build_correspondence_map(const DataMatrix& matrix, int axes);

/// Chi-square statistic over the grand total, computed cell by cell without
/// any factorization.
double total_inertia_oracle(const DataMatrix& matrix);

/// Transition-formula projection of a supplementary row (length m) or
/// column (length n) profile onto every retained axis.
std::vector<double> project_supplementary(const FactorMap& map,
                                          const SupplementaryProfile& profile);

}  // namespace pfm
