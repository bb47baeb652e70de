#include "crcurv/tensor.hpp"

#include <algorithm>
#include <cmath>

#include "crcurv/errors.hpp"

namespace crcurv {

CurvatureTensor::CurvatureTensor(int n, std::vector<double> components) : n_(n), data_(std::move(components)) {
  if (n < 0 || data_.size() != static_cast<std::size_t>(n) * n * n * n)
    throw DimensionError("curvature tensor component count does not match dimension");
  build_operator();
}

CurvatureTensor CurvatureTensor::zero(int n) {
  return CurvatureTensor(n, std::vector<double>(static_cast<std::size_t>(n) * n * n * n, 0.0));
}

void CurvatureTensor::build_operator() {
  pairs_.clear();
  for (int i = 0; i < n_; ++i)
    for (int j = i + 1; j < n_; ++j) pairs_.emplace_back(i, j);
  const int N = static_cast<int>(pairs_.size());
  op_.resize(N, N);
  for (int a = 0; a < N; ++a) {
    for (int b = 0; b < N; ++b) {
      const auto [i, j] = pairs_[a];
      const auto [k, l] = pairs_[b];
      op_(a, b) = (*this)(i, j, l, k);
    }
  }
}

VectorXd CurvatureTensor::wedge(const VectorXd& x, const VectorXd& y) const {
  VectorXd w(pairs_.size());
  for (std::size_t a = 0; a < pairs_.size(); ++a) {
    const auto [i, j] = pairs_[a];
    w[a] = x[i] * y[j] - x[j] * y[i];
  }
  return w;
}

void CurvatureTensor::wedge_into(const double* x, const double* y, double* out) const {
  std::size_t a = 0;
  for (int i = 0; i < n_; ++i)
    for (int j = i + 1; j < n_; ++j) out[a++] = x[i] * y[j] - x[j] * y[i];
}

double CurvatureTensor::quadratic(const double* a, const double* b) const {
  const Eigen::Index N = op_.rows();
  const double* q = op_.data();
  double acc = 0.0;
  for (Eigen::Index c = 0; c < N; ++c) {
    if (b[c] == 0.0) continue;
    double col = 0.0;
    for (Eigen::Index r = 0; r < N; ++r) col += q[c * N + r] * a[r];
    acc += col * b[c];
  }
  return acc;
}

double CurvatureTensor::sectional(const double* x, const double* y) const {
  constexpr std::size_t kStack = 120;
  const std::size_t N = pairs_.size();
  if (N <= kStack) {
    double w[kStack];
    wedge_into(x, y, w);
    return quadratic(w, w);
  }
  std::vector<double> w(N);
  wedge_into(x, y, w.data());
  return quadratic(w.data(), w.data());
}

double CurvatureTensor::pairing(const double* x1, const double* y1, const double* x2, const double* y2) const {
  constexpr std::size_t kStack = 120;
  const std::size_t N = pairs_.size();
  if (N <= kStack) {
    double a[kStack], b[kStack];
    wedge_into(x1, y1, a);
    wedge_into(x2, y2, b);
    return quadratic(a, b);
  }
  std::vector<double> a(N), b(N);
  wedge_into(x1, y1, a.data());
  wedge_into(x2, y2, b.data());
  return quadratic(a.data(), b.data());
}

double CurvatureTensor::evaluate(const VectorXd& x, const VectorXd& y, const VectorXd& z,
                                 const VectorXd& w) const {
  if (x.size() != n_ || y.size() != n_ || z.size() != n_ || w.size() != n_)
    throw DimensionError("vector dimension does not match curvature tensor");
  // R(x,y,z,w) = (x^y)^T Q (w^z)
  return pairing(x.data(), y.data(), w.data(), z.data());
}

double CurvatureTensor::sectional(const VectorXd& x, const VectorXd& y) const {
  if (x.size() != n_ || y.size() != n_) throw DimensionError("vector dimension does not match curvature tensor");
  return sectional(x.data(), y.data());
}

double CurvatureTensor::pairing(const VectorXd& x1, const VectorXd& y1, const VectorXd& x2,
                                const VectorXd& y2) const {
  if (x1.size() != n_ || y1.size() != n_ || x2.size() != n_ || y2.size() != n_)
    throw DimensionError("vector dimension does not match curvature tensor");
  return pairing(x1.data(), y1.data(), x2.data(), y2.data());
}

CurvatureTensor CurvatureTensor::restricted(const MatrixXd& frame) const {
  if (frame.rows() != n_) throw DimensionError("frame rows do not match curvature tensor");
  const int r = static_cast<int>(frame.cols());
  const int n = n_;
  // Contract one index at a time: cost O(r n^4) per pass.
  std::vector<double> a(static_cast<std::size_t>(r) * n * n * n, 0.0);
  for (int p = 0; p < r; ++p)
    for (int i = 0; i < n; ++i) {
      const double f = frame(i, p);
      if (f == 0.0) continue;
      for (int rest = 0; rest < n * n * n; ++rest) a[p * n * n * n + rest] += f * data_[i * n * n * n + rest];
    }
  std::vector<double> b(static_cast<std::size_t>(r) * r * n * n, 0.0);
  for (int p = 0; p < r; ++p)
    for (int q = 0; q < r; ++q)
      for (int j = 0; j < n; ++j) {
        const double f = frame(j, q);
        if (f == 0.0) continue;
        for (int rest = 0; rest < n * n; ++rest)
          b[(p * r + q) * n * n + rest] += f * a[(p * n + j) * n * n + rest];
      }
  std::vector<double> c(static_cast<std::size_t>(r) * r * r * n, 0.0);
  for (int pq = 0; pq < r * r; ++pq)
    for (int s = 0; s < r; ++s)
      for (int k = 0; k < n; ++k) {
        const double f = frame(k, s);
        if (f == 0.0) continue;
        for (int l = 0; l < n; ++l) c[(pq * r + s) * n + l] += f * b[(pq * n + k) * n + l];
      }
  std::vector<double> out(static_cast<std::size_t>(r) * r * r * r, 0.0);
  for (int pqs = 0; pqs < r * r * r; ++pqs)
    for (int t = 0; t < r; ++t) {
      double acc = 0.0;
      for (int l = 0; l < n; ++l) acc += frame(l, t) * c[pqs * n + l];
      out[pqs * r + t] = acc;
    }
  return CurvatureTensor(r, std::move(out));
}

CurvatureTensor CurvatureTensor::operator-() const { return *this * -1.0; }

CurvatureTensor CurvatureTensor::operator+(const CurvatureTensor& o) const {
  if (o.n_ != n_) throw DimensionError("adding curvature tensors of different dimension");
  std::vector<double> d(data_);
  for (std::size_t i = 0; i < d.size(); ++i) d[i] += o.data_[i];
  return CurvatureTensor(n_, std::move(d));
}

CurvatureTensor CurvatureTensor::operator*(double s) const {
  std::vector<double> d(data_);
  for (double& v : d) v *= s;
  return CurvatureTensor(n_, std::move(d));
}

double CurvatureTensor::symmetry_residual() const {
  double worst = 0.0;
  const auto& R = *this;
  for (int i = 0; i < n_; ++i)
    for (int j = 0; j < n_; ++j)
      for (int k = 0; k < n_; ++k)
        for (int l = 0; l < n_; ++l) {
          const double v = R(i, j, k, l);
          worst = std::max({worst, std::abs(v + R(j, i, k, l)), std::abs(v + R(i, j, l, k)),
                            std::abs(v - R(k, l, i, j))});
        }
  return worst;
}

double CurvatureTensor::bianchi_residual() const {
  double worst = 0.0;
  const auto& R = *this;
  for (int i = 0; i < n_; ++i)
    for (int j = 0; j < n_; ++j)
      for (int k = 0; k < n_; ++k)
        for (int l = 0; l < n_; ++l)
          worst = std::max(worst, std::abs(R(i, j, k, l) + R(j, k, i, l) + R(k, i, j, l)));
  return worst;
}

double CurvatureTensor::max_abs() const {
  double worst = 0.0;
  for (double v : data_) worst = std::max(worst, std::abs(v));
  return worst;
}

CurvatureTensor gauss_tensor(const std::vector<MatrixXd>& forms) {
  if (forms.empty()) throw DimensionError("gauss_tensor needs at least one form");
  const int n = static_cast<int>(forms.front().rows());
  std::vector<double> d(static_cast<std::size_t>(n) * n * n * n, 0.0);
  for (const auto& B : forms) {
    if (B.rows() != n || B.cols() != n) throw DimensionError("gauss_tensor forms must be n x n");
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        for (int k = 0; k < n; ++k)
          for (int l = 0; l < n; ++l)
            d[((i * n + j) * n + k) * n + l] += B(i, l) * B(j, k) - B(i, k) * B(j, l);
  }
  return CurvatureTensor(n, std::move(d));
}

CurvatureTensor constant_curvature_tensor(int n, double kappa) {
  std::vector<double> d(static_cast<std::size_t>(n) * n * n * n, 0.0);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k)
        for (int l = 0; l < n; ++l)
          d[((i * n + j) * n + k) * n + l] = kappa * ((i == l) * (j == k) - (i == k) * (j == l));
  return CurvatureTensor(n, std::move(d));
}

CurvatureTensor complex_space_form_tensor(const MatrixXd& J, double c) {
  const int n = static_cast<int>(J.rows());
  // R(X,Y,Z,W) = c( <Y,Z><X,W> - <X,Z><Y,W> + <JY,Z><JX,W> - <JX,Z><JY,W> - 2<JX,Y><JZ,W> )
  // with <J e_a, e_b> = J(b,a).
  auto g = [](int a, int b) { return a == b ? 1.0 : 0.0; };
  auto gj = [&J](int a, int b) { return J(b, a); };
  std::vector<double> d(static_cast<std::size_t>(n) * n * n * n, 0.0);
  for (int x = 0; x < n; ++x)
    for (int y = 0; y < n; ++y)
      for (int z = 0; z < n; ++z)
        for (int w = 0; w < n; ++w)
          d[((x * n + y) * n + z) * n + w] =
              c * (g(y, z) * g(x, w) - g(x, z) * g(y, w) + gj(y, z) * gj(x, w) - gj(x, z) * gj(y, w) -
                   2.0 * gj(x, y) * gj(z, w));
  return CurvatureTensor(n, std::move(d));
}

}  // namespace crcurv
