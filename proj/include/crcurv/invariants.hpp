#pragma once

#include <Eigen/Dense>
#include <optional>
#include <vector>

#include "crcurv/subspace.hpp"
#include "crcurv/tensor.hpp"

namespace crcurv {

// Every invariant below takes the curvature tensor in the coordinates of the
// space it optimizes over (normally R restricted to the J-adapted D-frame,
// where phi is the standard complex structure). Frames are column matrices in
// those coordinates.

struct InvariantConfig {
  OptConfig opt;
  /// Haar samples for the certification gap; 0 disables certification.
  long oracle_samples = 0;
  /// Certification is attached only when d is at most this.
  int certify_max_d = 6;
};

struct InvariantValue {
  double value = 0.0;
  std::vector<int> blocks;  // attaining block sizes (aggregates) or the requested ones
  SubspaceTuple tuple;
  PlaneTuple planes;
  /// Oracle extremum minus optimizer value for maxima (reverse for minima):
  /// positive means the oracle found a better tuple.
  std::optional<double> gap;
  int restarts_used = 0;
  int sweeps = 0;
};

/// sum over a != b of R(e_a, e_b, e_b, e_a) for an orthonormal frame of V.
double tau_subspace(const CurvatureTensor& R, const MatrixXd& V);

/// sum_{i<j} S_m(V_i, V_j) for the blocks of C.
double mutual_curvature(const CurvatureTensor& R, const MatrixXd& C, const std::vector<int>& blocks);
double mutual_curvature(const CurvatureTensor& R, const SubspaceTuple& t);

/// sum over D-frame a and D-perp frame b of K(e_a, e_b).
double mixed_scalar_curvature(const CurvatureTensor& R, const MatrixXd& D, const MatrixXd& P);

/// R(X, phi X, phi Y, Y) for unit X in sigma and Y in sigma' (each given by a
/// spanning n x 2 matrix). Equals the holomorphic sectional curvature when
/// sigma = sigma'.
double bisectional_curvature(const CurvatureTensor& R, const MatrixXd& phi, const MatrixXd& sigma,
                             const MatrixXd& sigma_prime, double tol = 1e-8);

/// sum_{i<j} K_h(sigma_i, sigma_j) over the planes span(X_i, phi X_i).
double s_h(const CurvatureTensor& R, const MatrixXd& phi, const PlaneTuple& planes);

/// Objectives over raw column matrices, shared with the oracle.
double sum_block_tau(const CurvatureTensor& R, const MatrixXd& C, const std::vector<int>& blocks);
double s_h_unchecked(const CurvatureTensor& R, const MatrixXd& phi, const MatrixXd& X);

struct ChenDelta {
  double delta = 0.0;      // (tau_D - min sum tau(V_i)) / 2
  double delta_hat = 0.0;  // (tau_D - max sum tau(V_i)) / 2
  InvariantValue min_tau;  // attaining tuples of the two extrema
  InvariantValue max_tau;
};

/// Empty `blocks` is the k = 0 case, 2 delta = tau_D.
ChenDelta chen_delta(const CurvatureTensor& R, const std::vector<int>& blocks, const InvariantConfig& cfg);

/// sign > 0: max of mutual curvature; sign < 0: min.
InvariantValue delta_m(const CurvatureTensor& R, const std::vector<int>& blocks, int sign, const InvariantConfig& cfg);

/// Non-decreasing tuples of k positive integers with sum <= max_sum.
std::vector<std::vector<int>> partitions_up_to(int k, int max_sum);
/// Non-decreasing tuples of k positive integers with sum == sum.
std::vector<std::vector<int>> partitions_exact(int k, int sum);

/// Max of delta_m^+ (sign > 0) or min of delta_m^- (sign < 0) over all k-part
/// partitions with sum <= d.
InvariantValue delta_m_aggregate(const CurvatureTensor& R, int k, int sign, const InvariantConfig& cfg);

InvariantValue delta_h(const CurvatureTensor& R, const MatrixXd& phi, int k, int sign, const InvariantConfig& cfg);

/// max ||H_V|| over s-dimensional V, where forms[alpha] is the alpha-th
/// normal component of h in these coordinates; s = d gives ||H_D|| exactly.
InvariantValue script_H(const std::vector<MatrixXd>& forms, int d, int s, const InvariantConfig& cfg);

/// 2k/(k-1) delta_m^+(n_1..n_k).
double normalized_delta(const CurvatureTensor& R, const std::vector<int>& blocks, const InvariantConfig& cfg);
/// Max of normalized_delta over non-decreasing tuples with k >= 2 and sum s.
InvariantValue normalized_delta_bar(const CurvatureTensor& R, int s, const InvariantConfig& cfg);

}  // namespace crcurv
