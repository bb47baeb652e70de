#include "crcurv/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "crcurv/errors.hpp"

namespace crcurv {

void gram_schmidt(const MatrixXd& A, MatrixXd& Q, MatrixXd& Rf, double pivot_tol) {
  const Eigen::Index n = A.rows(), m = A.cols();
  Q.resize(n, m);
  Rf = MatrixXd::Zero(m, m);
  for (Eigen::Index j = 0; j < m; ++j) {
    VectorXd v = A.col(j);
    for (int pass = 0; pass < 2; ++pass) {
      for (Eigen::Index i = 0; i < j; ++i) {
        const double r = Q.col(i).dot(v);
        Rf(i, j) += r;
        v -= r * Q.col(i);
      }
    }
    const double norm = v.norm();
    if (!(norm > pivot_tol))
      throw ImmersionError("Gram-Schmidt pivot " + std::to_string(norm) + " below tolerance in column " +
                           std::to_string(j));
    Rf(j, j) = norm;
    Q.col(j) = v / norm;
  }
}

double orthonormality_defect(const MatrixXd& F) {
  const MatrixXd G = F.transpose() * F - MatrixXd::Identity(F.cols(), F.cols());
  return G.cwiseAbs().maxCoeff();
}

namespace {

// Completes the columns of T to an orthonormal basis of R^n, drawing
// candidates from the coordinate basis in order.
MatrixXd normal_completion(const MatrixXd& T) {
  const Eigen::Index n = T.rows(), m = T.cols();
  MatrixXd N(n, n - m);
  Eigen::Index found = 0;
  for (Eigen::Index k = 0; k < n && found < n - m; ++k) {
    VectorXd v = VectorXd::Unit(n, k);
    for (int pass = 0; pass < 2; ++pass) {
      v -= T * (T.transpose() * v);
      if (found > 0) v -= N.leftCols(found) * (N.leftCols(found).transpose() * v);
    }
    const double norm = v.norm();
    if (norm < 1e-3) continue;
    N.col(found++) = v / norm;
  }
  if (found != n - m) throw ImmersionError("normal frame completion failed");
  return N;
}

double operator_norm(const MatrixXd& A) {
  if (A.size() == 0) return 0.0;
  Eigen::JacobiSVD<MatrixXd> svd(A);
  return svd.singularValues()(0);
}

}  // namespace

CRSplit cr_split(const AmbientSpace& amb, const MatrixXd& tangent, int declared_d, const ToleranceConfig& tol) {
  if (tangent.rows() != amb.dim()) throw DimensionError("tangent frame does not live in the ambient space");
  if (orthonormality_defect(tangent) > tol.orthonormality)
    throw NonOrthonormalFrame("cr_split needs an orthonormal tangent frame");
  const int m = static_cast<int>(tangent.cols());
  // phi0 = P o J restricted to TM, in tangent coordinates; skew-symmetric.
  const MatrixXd phi0 = tangent.transpose() * amb.J() * tangent;
  Eigen::SelfAdjointEigenSolver<MatrixXd> eig(phi0.transpose() * phi0);
  CRSplit out;
  out.singular_values = eig.eigenvalues().cwiseMax(0.0).cwiseSqrt();
  std::vector<int> high, low;
  for (int i = 0; i < m; ++i) {
    const double s = out.singular_values[i];
    if (s >= 1.0 - tol.cr)
      high.push_back(i);
    else if (s <= tol.cr)
      low.push_back(i);
    else
      throw CRSplitError("singular value " + std::to_string(s) + " of the tangent part of J lies in (" +
                         std::to_string(tol.cr) + ", " + std::to_string(1.0 - tol.cr) + ")");
  }
  const int d = static_cast<int>(high.size());
  if (d == 0) throw CRSplitError("no complex directions: detected d = 0");
  if (d != declared_d)
    throw CRSplitError("detected d = " + std::to_string(d) + " but declared d = " + std::to_string(declared_d));
  if (d % 2 != 0) throw CRSplitError("complex distribution has odd dimension");
  if (d == m) throw CRSplitError("tangent space is complex: detected l = 0");

  MatrixXd Dbasis(m, d);
  for (int i = 0; i < d; ++i) Dbasis.col(i) = eig.eigenvectors().col(high[i]);
  out.perp_frame.resize(m, m - d);
  for (int i = 0; i < m - d; ++i) out.perp_frame.col(i) = eig.eigenvectors().col(low[i]);

  // J-adapted frame (x1, phi x1, x2, phi x2, ...) of D.
  const MatrixXd PD = Dbasis * Dbasis.transpose();
  MatrixXd F(m, d);
  int filled = 0;
  auto orthogonalize = [&](VectorXd v) {
    for (int pass = 0; pass < 2; ++pass)
      if (filled > 0) v -= F.leftCols(filled) * (F.leftCols(filled).transpose() * v);
    return v;
  };
  while (filled < d) {
    int best = -1;
    double best_norm = -1.0;
    VectorXd best_v;
    for (int i = 0; i < d; ++i) {
      VectorXd v = orthogonalize(Dbasis.col(i));
      if (v.norm() > best_norm) {
        best_norm = v.norm();
        best = i;
        best_v = v;
      }
    }
    if (best < 0 || best_norm < 1e-6) throw CRSplitError("degenerate complex distribution");
    F.col(filled++) = best_v / best_norm;
    VectorXd y = orthogonalize(PD * (phi0 * F.col(filled - 1)));
    const double yn = y.norm();
    if (yn < 1e-6) throw CRSplitError("complex distribution is not J-invariant");
    F.col(filled++) = y / yn;
  }
  out.d_frame = F;
  out.phi = F * standard_complex_structure(d / 2) * F.transpose();
  out.totally_real_residual = operator_norm(phi0 * out.perp_frame);
  return out;
}

VectorXd PointGeom::h(const VectorXd& v, const VectorXd& w) const {
  VectorXd out(shape.size());
  for (std::size_t a = 0; a < shape.size(); ++a) out[a] = v.dot(shape[a] * w);
  return out;
}

PointGeom point_geometry(const AmbientSpace& amb, const Chart& chart, std::span<const double> u,
                         const ToleranceConfig& tol) {
  if (chart.ambient_dim() != amb.dim()) throw DimensionError("chart and ambient dimensions differ");
  if (!chart.contains(u)) throw DomainError("parameter point outside the chart domain");
  const int m = chart.m();
  const int n = amb.dim();
  const ChartJets jets = evaluate_chart(chart, u);

  Eigen::JacobiSVD<MatrixXd> svd(jets.jacobian);
  const double smin = svd.singularValues()(m - 1);
  if (!(smin > tol.rank))
    throw ImmersionError("Jacobian rank loss: smallest singular value " + std::to_string(smin));

  PointGeom g;
  g.u = Eigen::Map<const VectorXd>(u.data(), m);
  g.x = jets.value;
  MatrixXd Rf;
  gram_schmidt(jets.jacobian, g.tangent, Rf, tol.rank);
  const MatrixXd Tinv = Rf.triangularView<Eigen::Upper>().solve(MatrixXd::Identity(m, m));
  g.normal = normal_completion(g.tangent);

  // Second derivatives along the frame: sum_ij Tinv(i,a) Tinv(j,b) F_ij.
  std::vector<VectorXd> d2(static_cast<std::size_t>(m) * m, VectorXd::Zero(n));
  for (int a = 0; a < m; ++a)
    for (int b = a; b < m; ++b) {
      VectorXd acc = VectorXd::Zero(n);
      for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j) {
          const double w = Tinv(i, a) * Tinv(j, b);
          if (w != 0.0) acc += w * jets.hessian[i * m + j];
        }
      d2[a * m + b] = acc;
      d2[b * m + a] = acc;
    }
  g.shape.assign(g.codim(), MatrixXd::Zero(m, m));
  for (int al = 0; al < g.codim(); ++al)
    for (int a = 0; a < m; ++a)
      for (int b = a; b < m; ++b) {
        const double v = g.normal.col(al).dot(d2[a * m + b]);
        g.shape[al](a, b) = v;
        g.shape[al](b, a) = v;
      }

  g.ambient_R = amb.curvature().restricted(g.tangent);
  g.R = g.ambient_R + gauss_tensor(g.shape);
  g.cr = cr_split(amb, g.tangent, chart.d, tol);

  g.H = VectorXd::Zero(g.codim());
  for (int al = 0; al < g.codim(); ++al) g.H[al] = g.shape[al].trace();
  g.H_D = mean_curvature_vector(g, g.cr.d_frame, tol.orthonormality);
  g.H_perp = mean_curvature_vector(g, g.cr.perp_frame, tol.orthonormality);
  return g;
}

VectorXd mean_curvature_vector(const PointGeom& geom, const MatrixXd& V, double tol) {
  if (V.rows() != geom.m()) throw DimensionError("frame is not in tangent coordinates");
  if (V.cols() > 0 && orthonormality_defect(V) > tol) throw NonOrthonormalFrame("mean curvature needs an orthonormal frame");
  VectorXd H = VectorXd::Zero(geom.codim());
  for (int al = 0; al < geom.codim(); ++al) H[al] = (V.transpose() * geom.shape[al] * V).trace();
  return H;
}

namespace {

MatrixXd metric(const Chart& chart, const VectorXd& u) {
  const int m = chart.m();
  MatrixXd Jf(chart.ambient_dim(), m);
  for (int c = 0; c < chart.ambient_dim(); ++c) {
    const Jet2 j = chart.components[c].eval_jet2(std::span<const double>(u.data(), m));
    for (int a = 0; a < m; ++a) Jf(c, a) = j.gradient(a);
  }
  return Jf.transpose() * Jf;
}

// gamma[(l*m + i)*m + j] = Gamma^l_{ij}
std::vector<double> christoffel(const Chart& chart, const VectorXd& u, double h) {
  const int m = chart.m();
  std::vector<MatrixXd> dg(m);
  for (int k = 0; k < m; ++k) {
    VectorXd up = u, dn = u;
    up[k] += h;
    dn[k] -= h;
    dg[k] = (metric(chart, up) - metric(chart, dn)) / (2 * h);
  }
  const MatrixXd ginv = metric(chart, u).inverse();
  std::vector<double> gamma(static_cast<std::size_t>(m) * m * m, 0.0);
  for (int l = 0; l < m; ++l)
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < m; ++j) {
        double acc = 0.0;
        for (int w = 0; w < m; ++w) acc += ginv(l, w) * (dg[i](w, j) + dg[j](w, i) - dg[w](i, j));
        gamma[(l * m + i) * m + j] = 0.5 * acc;
      }
  return gamma;
}

}  // namespace

CurvatureTensor intrinsic_curvature_fd(const Chart& chart, std::span<const double> u, double step) {
  const int m = chart.m();
  if (static_cast<int>(u.size()) != m) throw DimensionError("parameter point has wrong dimension");
  if (!chart.contains(u, 2 * step)) throw DomainError("finite-difference stencil leaves the chart domain");
  const VectorXd u0 = Eigen::Map<const VectorXd>(u.data(), m);
  const auto G = christoffel(chart, u0, step);
  std::vector<std::vector<double>> dG(m);
  for (int i = 0; i < m; ++i) {
    VectorXd up = u0, dn = u0;
    up[i] += step;
    dn[i] -= step;
    const auto Gp = christoffel(chart, up, step);
    const auto Gm = christoffel(chart, dn, step);
    dG[i].resize(Gp.size());
    for (std::size_t t = 0; t < Gp.size(); ++t) dG[i][t] = (Gp[t] - Gm[t]) / (2 * step);
  }
  auto gam = [&](int l, int i, int j) { return G[(l * m + i) * m + j]; };
  auto dgam = [&](int d, int l, int i, int j) { return dG[d][(l * m + i) * m + j]; };
  const MatrixXd g = metric(chart, u0);
  // R^l_{ijk} = d_i G^l_{jk} - d_j G^l_{ik} + G^l_{ip} G^p_{jk} - G^l_{jp} G^p_{ik}
  std::vector<double> Rup(static_cast<std::size_t>(m) * m * m * m, 0.0);
  for (int l = 0; l < m; ++l)
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < m; ++j)
        for (int k = 0; k < m; ++k) {
          double v = dgam(i, l, j, k) - dgam(j, l, i, k);
          for (int p = 0; p < m; ++p) v += gam(l, i, p) * gam(p, j, k) - gam(l, j, p) * gam(p, i, k);
          Rup[((l * m + i) * m + j) * m + k] = v;
        }
  std::vector<double> Rc(Rup.size(), 0.0);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j)
      for (int k = 0; k < m; ++k)
        for (int w = 0; w < m; ++w) {
          double v = 0.0;
          for (int l = 0; l < m; ++l) v += g(l, w) * Rup[((l * m + i) * m + j) * m + k];
          Rc[((i * m + j) * m + k) * m + w] = v;
        }
  // Same frame as the Gram-Schmidt tangent frame: e = dF * Rf^{-1}.
  const ChartJets jets = evaluate_chart(chart, u);
  MatrixXd Q, Rf;
  gram_schmidt(jets.jacobian, Q, Rf, 0.0);
  const MatrixXd Tinv = Rf.triangularView<Eigen::Upper>().solve(MatrixXd::Identity(m, m));
  return CurvatureTensor(m, std::move(Rc)).restricted(Tinv);
}

}  // namespace crcurv
