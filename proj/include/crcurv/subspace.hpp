#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

namespace crcurv {

using Eigen::MatrixXd;
using Eigen::VectorXd;

/// k mutually orthogonal subspaces of a d-dimensional space, stored as a
/// d x s matrix with orthonormal columns split into blocks of sizes n_i.
struct SubspaceTuple {
  std::vector<int> blocks;
  MatrixXd C;

  int d() const { return static_cast<int>(C.rows()); }
  int k() const { return static_cast<int>(blocks.size()); }
  int s() const { return static_cast<int>(C.cols()); }
  int offset(int i) const;
  MatrixXd block(int i) const { return C.middleCols(offset(i), blocks[i]); }
};

/// k unit vectors X_i with the planes span(X_i, phi X_i) mutually orthogonal.
struct PlaneTuple {
  MatrixXd X;  // d x k

  int k() const { return static_cast<int>(X.cols()); }
  /// d x 2k frame (X_1, phi X_1, X_2, phi X_2, ...).
  MatrixXd frame(const MatrixXd& phi) const;
};

struct OptConfig {
  int restarts = 16;
  int max_sweeps = 200;
  double improvement_floor = 1e-10;
  std::uint64_t seed = 0;
};

struct OptResult {
  double value = 0.0;
  SubspaceTuple tuple;  // flag searches
  PlaneTuple planes;    // plane-tuple searches
  int restarts_used = 0;
  int sweeps = 0;
  std::optional<double> oracle_gap;
};

/// Objectives receive the d x s column matrix (flags) or the d x k matrix of
/// the X_i (plane tuples).
using TupleObjective = std::function<double(const MatrixXd&)>;

std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream);

/// Sum of block sizes; throws BlockSizeError for empty tuples, zero blocks or
/// s > d.
int validate_blocks(int d, const std::vector<int>& blocks);

SubspaceTuple random_subspace_tuple(int d, const std::vector<int>& blocks, std::uint64_t seed);
PlaneTuple random_plane_tuple(const MatrixXd& phi, int k, std::uint64_t seed);

/// Gram-Schmidt over (X_1, phi X_1, X_2, ...); throws FeasibilityError on a
/// pivot below 1e-12.
void project_plane_tuple(MatrixXd& X, const MatrixXd& phi);

OptResult maximize_over_flags(const TupleObjective& f, int d, const std::vector<int>& blocks, const OptConfig& cfg);
OptResult minimize_over_flags(const TupleObjective& f, int d, const std::vector<int>& blocks, const OptConfig& cfg);

OptResult maximize_over_plane_tuples(const TupleObjective& f, int d, int k, const MatrixXd& phi,
                                     const OptConfig& cfg);
OptResult minimize_over_plane_tuples(const TupleObjective& f, int d, int k, const MatrixXd& phi,
                                     const OptConfig& cfg);

struct OracleResult {
  double max = 0.0;
  double min = 0.0;
  MatrixXd argmax;
  MatrixXd argmin;
  long evaluations = 0;
};

/// Extrema over Haar-random tuples plus every coordinate-axis tuple (d <= 8),
/// followed by a random-perturbation polish of the best few samples.
OracleResult brute_force_oracle(const TupleObjective& f, int d, const std::vector<int>& blocks, long samples,
                                std::uint64_t seed, bool polish = true);
OracleResult brute_force_oracle(const TupleObjective& f, int d, int k, const MatrixXd& phi, long samples,
                                std::uint64_t seed, bool polish = true);

}  // namespace crcurv
