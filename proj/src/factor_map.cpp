#include "pfm/factor_map.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_set>

#include "pfm/error.hpp"

namespace pfm {

namespace {

void require_unique(const std::vector<std::string>& ids, const char* what) {
  std::unordered_set<std::string> seen;
  for (const auto& id : ids) {
    if (!seen.insert(id).second) {
      throw Error(Errc::duplicate_id, std::string("duplicate ") + what + " id '" + id + "'");
    }
  }
}

// S^T S or S S^T: whichever is min(n,m) on a side.
struct Decomposition {
  Eigen::VectorXd values;
  Eigen::MatrixXd vectors;  // columns ordered by decreasing value
};

Decomposition top_eigenpairs(const Eigen::MatrixXd& cross, int count) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(cross);
  if (solver.info() != Eigen::Success) {
    throw Error(Errc::invalid_argument, "eigen-decomposition did not converge");
  }
  const Eigen::Index size = cross.rows();
  Decomposition out;
  out.values.resize(count);
  out.vectors.resize(size, count);
  // Eigen returns ascending order.
  for (int a = 0; a < count; ++a) {
    const Eigen::Index src = size - 1 - a;
    out.values(a) = std::max(0.0, solver.eigenvalues()(src));
    out.vectors.col(a) = solver.eigenvectors().col(src);
  }
  return out;
}

}  // namespace

void validate(const DataMatrix& matrix) {
  const auto n = matrix.rows();
  const auto m = matrix.cols();
  if (n == 0 || m == 0) throw Error(Errc::empty_input, "matrix has no rows or no columns");
  if (static_cast<Eigen::Index>(matrix.row_ids.size()) != n ||
      static_cast<Eigen::Index>(matrix.col_ids.size()) != m) {
    throw Error(Errc::invalid_argument, "id lists do not match matrix shape");
  }
  require_unique(matrix.row_ids, "row");
  require_unique(matrix.col_ids, "column");
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < m; ++j) {
      const double v = matrix.values(i, j);
      if (!std::isfinite(v)) {
        throw Error(Errc::non_numeric, "non-finite value at (" + std::to_string(i) + "," +
                                           std::to_string(j) + ")");
      }
      if (v < 0.0) {
        throw Error(Errc::negative_value, "negative value at (" + std::to_string(i) + "," +
                                              std::to_string(j) + ")");
      }
    }
  }
  for (Eigen::Index i = 0; i < n; ++i) {
    if (matrix.values.row(i).sum() <= 0.0) {
      throw Error(Errc::zero_margin, "all-zero active row '" + matrix.row_ids[i] + "'");
    }
  }
  for (Eigen::Index j = 0; j < m; ++j) {
    if (matrix.values.col(j).sum() <= 0.0) {
      throw Error(Errc::zero_margin, "all-zero active column '" + matrix.col_ids[j] + "'");
    }
  }
}

DataMatrix make_matrix(const Eigen::MatrixXd& values) {
  DataMatrix out;
  out.values = values;
  for (Eigen::Index i = 0; i < values.rows(); ++i) out.row_ids.push_back("r" + std::to_string(i));
  for (Eigen::Index j = 0; j < values.cols(); ++j) out.col_ids.push_back("c" + std::to_string(j));
  validate(out);
  return out;
}

int max_axes(const DataMatrix& matrix) {
  return static_cast<int>(std::min(matrix.rows(), matrix.cols())) - 1;
}

int default_axes(const DataMatrix& matrix) { return std::min(5, max_axes(matrix)); }

FactorMap build_correspondence_map(const DataMatrix& matrix, int axes) {
  validate(matrix);
  const int full = max_axes(matrix);
  if (axes < 1 || axes > full) {
    throw Error(Errc::out_of_range, "retained axes " + std::to_string(axes) +
                                        " outside 1.." + std::to_string(full));
  }

  const Eigen::MatrixXd p = matrix.values / matrix.values.sum();
  const Eigen::VectorXd r = p.rowwise().sum();
  const Eigen::VectorXd c = p.colwise().sum().transpose();
  const Eigen::VectorXd r_isqrt = r.cwiseSqrt().cwiseInverse();
  const Eigen::VectorXd c_isqrt = c.cwiseSqrt().cwiseInverse();

  const Eigen::MatrixXd s =
      r_isqrt.asDiagonal() * (p - r * c.transpose()) * c_isqrt.asDiagonal();

  FactorMap out;
  out.row_ids = matrix.row_ids;
  out.col_ids = matrix.col_ids;
  out.row_masses = r;
  out.col_masses = c;
  out.total_inertia = s.squaredNorm();

  // F = D_r^-1/2 U sqrt(lambda), G = D_c^-1/2 V sqrt(lambda), with U/V the
  // singular vectors of S. Only the small side is decomposed; the other side
  // follows from S V = U Sigma (or S^T U = V Sigma).
  Decomposition eig;
  if (matrix.rows() >= matrix.cols()) {
    eig = top_eigenpairs(s.transpose() * s, axes);
    const Eigen::VectorXd sv = eig.values.cwiseSqrt();
    out.col_coords = c_isqrt.asDiagonal() * eig.vectors * sv.asDiagonal();
    out.row_coords = r_isqrt.asDiagonal() * (s * eig.vectors);
  } else {
    eig = top_eigenpairs(s * s.transpose(), axes);
    const Eigen::VectorXd sv = eig.values.cwiseSqrt();
    out.row_coords = r_isqrt.asDiagonal() * eig.vectors * sv.asDiagonal();
    out.col_coords = c_isqrt.asDiagonal() * (s.transpose() * eig.vectors);
  }
  out.eigenvalues = eig.values;

  for (int a = 0; a < axes; ++a) {
    if (out.eigenvalues(a) < kZeroEigenvalue) {
      out.eigenvalues(a) = 0.0;
      out.row_coords.col(a).setZero();
      out.col_coords.col(a).setZero();
      continue;
    }
    for (Eigen::Index i = 0; i < out.row_coords.rows(); ++i) {
      const double v = out.row_coords(i, a);
      if (std::abs(v) > kZeroEigenvalue) {
        if (v < 0.0) {
          out.row_coords.col(a) *= -1.0;
          out.col_coords.col(a) *= -1.0;
        }
        break;
      }
    }
  }
  return out;
}

double total_inertia_oracle(const DataMatrix& matrix) {
  validate(matrix);
  const auto n = matrix.rows();
  const auto m = matrix.cols();
  double total = 0.0;
  std::vector<double> row_sum(n, 0.0), col_sum(m, 0.0);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < m; ++j) {
      const double v = matrix.values(i, j);
      row_sum[i] += v;
      col_sum[j] += v;
      total += v;
    }
  }
  double chi2 = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < m; ++j) {
      const double expected = row_sum[i] * col_sum[j] / total;
      const double diff = matrix.values(i, j) - expected;
      chi2 += diff * diff / expected;
    }
  }
  return chi2 / total;
}

std::vector<double> project_supplementary(const FactorMap& map,
                                          const SupplementaryProfile& profile) {
  const bool row_like = profile.kind == ProfileKind::row_like;
  const Eigen::MatrixXd& opposite = row_like ? map.col_coords : map.row_coords;
  if (static_cast<Eigen::Index>(profile.values.size()) != opposite.rows()) {
    throw Error(Errc::invalid_argument,
                "supplementary profile '" + profile.id + "' has length " +
                    std::to_string(profile.values.size()) + ", expected " +
                    std::to_string(opposite.rows()));
  }
  double total = 0.0;
  for (double v : profile.values) {
    if (!std::isfinite(v) || v < 0.0) {
      throw Error(Errc::negative_value,
                  "supplementary profile '" + profile.id + "' has a negative or non-finite value");
    }
    total += v;
  }
  if (total <= 0.0) {
    throw Error(Errc::zero_margin, "supplementary profile '" + profile.id + "' is all zero");
  }

  std::vector<double> coords(map.axes(), 0.0);
  for (int a = 0; a < map.axes(); ++a) {
    const double lambda = map.eigenvalues(a);
    if (lambda < kZeroEigenvalue) continue;
    double acc = 0.0;
    for (std::size_t j = 0; j < profile.values.size(); ++j) {
      acc += (profile.values[j] / total) * opposite(static_cast<Eigen::Index>(j), a);
    }
    coords[a] = acc / std::sqrt(lambda);
  }
  return coords;
}

}  // namespace pfm
