#include "crcurv/subspace.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>
#include <string>

#include "crcurv/errors.hpp"

namespace crcurv {

int SubspaceTuple::offset(int i) const {
  int o = 0;
  for (int j = 0; j < i; ++j) o += blocks[j];
  return o;
}

MatrixXd PlaneTuple::frame(const MatrixXd& phi) const {
  MatrixXd F(X.rows(), 2 * X.cols());
  for (Eigen::Index i = 0; i < X.cols(); ++i) {
    F.col(2 * i) = X.col(i);
    F.col(2 * i + 1) = phi * X.col(i);
  }
  return F;
}

std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream) {
  // splitmix64 finalizer over the pair
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (stream + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

int validate_blocks(int d, const std::vector<int>& blocks) {
  if (blocks.empty()) throw BlockSizeError("tuple needs at least one block");
  int s = 0;
  for (int n : blocks) {
    if (n < 1) throw BlockSizeError("block sizes must be positive");
    s += n;
  }
  if (s > d)
    throw BlockSizeError("block sizes sum to " + std::to_string(s) + " > d = " + std::to_string(d));
  return s;
}

namespace {

using Rng = std::mt19937_64;

MatrixXd gaussian(Rng& rng, int rows, int cols) {
  std::normal_distribution<double> N(0.0, 1.0);
  MatrixXd G(rows, cols);
  for (int c = 0; c < cols; ++c)
    for (int r = 0; r < rows; ++r) G(r, c) = N(rng);
  return G;
}

// In-place two-pass Gram-Schmidt; false on a vanishing pivot.
bool orthonormalize(MatrixXd& C) {
  for (Eigen::Index j = 0; j < C.cols(); ++j) {
    for (int pass = 0; pass < 2; ++pass)
      for (Eigen::Index i = 0; i < j; ++i) C.col(j) -= C.col(i).dot(C.col(j)) * C.col(i);
    const double n = C.col(j).norm();
    if (!(n > 1e-12)) return false;
    C.col(j) /= n;
  }
  return true;
}

bool project_planes(MatrixXd& X, const MatrixXd& phi) {
  const Eigen::Index d = X.rows(), k = X.cols();
  MatrixXd F(d, 2 * k);
  for (Eigen::Index i = 0; i < k; ++i) {
    VectorXd x = X.col(i);
    for (int pass = 0; pass < 2; ++pass)
      for (Eigen::Index j = 0; j < 2 * i; ++j) x -= F.col(j).dot(x) * F.col(j);
    const double n = x.norm();
    if (!(n > 1e-12)) return false;
    x /= n;
    X.col(i) = x;
    F.col(2 * i) = x;
    F.col(2 * i + 1) = phi * x;
  }
  return true;
}

using Projector = bool (*)(MatrixXd&, const MatrixXd&);

struct Search {
  const TupleObjective& f;
  double sign;
  Projector project;  // null for flags
  const MatrixXd* phi;

  double eval(const MatrixXd& M) const {
    const double v = f(M);
    if (!std::isfinite(v)) throw ObjectiveError("objective returned a non-finite value");
    return sign * v;
  }

  static void rotate(MatrixXd& M, Eigen::Index p, Eigen::Index q, double theta) {
    const double c = std::cos(theta), s = std::sin(theta);
    for (Eigen::Index col = 0; col < M.cols(); ++col) {
      const double a = M(p, col), b = M(q, col);
      M(p, col) = c * a - s * b;
      M(q, col) = s * a + c * b;
    }
  }

  // Value along the line theta -> R_pq(theta) M; -inf where the plane-tuple
  // projection degenerates.
  double line_value(const MatrixXd& base, MatrixXd& trial, Eigen::Index p, Eigen::Index q, double theta) const {
    trial = base;
    rotate(trial, p, q, theta);
    if (project && !project(trial, *phi)) return -std::numeric_limits<double>::infinity();
    return eval(trial);
  }

  // One line search; returns true and updates (M, fM) on strict improvement.
  // `flat` is cleared when any grid value differs from fM.
  bool line_search(MatrixXd& M, double& fM, MatrixXd& trial, Eigen::Index p, Eigen::Index q, bool& flat) const {
    constexpr int kGrid = 12;
    constexpr double pi = std::numbers::pi;
    double theta[kGrid], val[kGrid];
    int best = 0;
    const double flat_tol = 1e-12 * std::max(1.0, std::abs(fM));
    for (int j = 0; j < kGrid; ++j) {
      theta[j] = -pi / 2 + (j + 1) * pi / kGrid;
      val[j] = (j == kGrid / 2 - 1 && !project) ? fM : line_value(M, trial, p, q, theta[j]);
      if (!(std::abs(val[j] - fM) <= flat_tol)) flat = false;
      if (val[j] > val[best]) best = j;
    }
    double lo = best > 0 ? theta[best - 1] : -pi / 2;
    double hi = best < kGrid - 1 ? theta[best + 1] : pi / 2;
    double t_best = theta[best], f_best = val[best];
    // golden section for a maximum inside [lo, hi]
    const double g = (std::sqrt(5.0) - 1) / 2;
    double a = hi - g * (hi - lo), b = lo + g * (hi - lo);
    double fa = line_value(M, trial, p, q, a), fb = line_value(M, trial, p, q, b);
    while (hi - lo > 1e-8) {
      if (fa >= fb) {
        hi = b;
        b = a;
        fb = fa;
        a = hi - g * (hi - lo);
        fa = line_value(M, trial, p, q, a);
      } else {
        lo = a;
        a = b;
        fa = fb;
        b = lo + g * (hi - lo);
        fb = line_value(M, trial, p, q, b);
      }
    }
    if (fa > f_best) f_best = fa, t_best = a;
    if (fb > f_best) f_best = fb, t_best = b;
    if (!(f_best > fM)) return false;
    const double v = line_value(M, trial, p, q, t_best);
    if (!(v > fM)) return false;
    M = trial;
    fM = v;
    return true;
  }

  OptResult run(int d, const std::function<MatrixXd(std::uint64_t)>& start, const OptConfig& cfg) const {
    OptResult out;
    out.value = -std::numeric_limits<double>::infinity();
    MatrixXd best_M;
    const int restarts = std::max(1, cfg.restarts);
    for (int r = 0; r < restarts; ++r) {
      MatrixXd M = start(mix_seed(cfg.seed, static_cast<std::uint64_t>(r)));
      MatrixXd trial(M.rows(), M.cols());
      double fM = eval(M);
      bool flat = true;
      ++out.restarts_used;
      for (int sweep = 0; sweep < cfg.max_sweeps; ++sweep) {
        const double before = fM;
        for (Eigen::Index p = 0; p < d; ++p)
          for (Eigen::Index q = p + 1; q < d; ++q) line_search(M, fM, trial, p, q, flat);
        ++out.sweeps;
        if (r == 0 && sweep == 0 && flat) {
          out.value = fM;
          best_M = M;
          return finish(out, best_M);
        }
        if (fM - before < cfg.improvement_floor) break;
      }
      if (fM > out.value) {
        out.value = fM;
        best_M = M;
      }
    }
    return finish(out, best_M);
  }

  OptResult finish(OptResult out, const MatrixXd& M) const {
    out.value *= sign;
    if (project)
      out.planes.X = M;
    else
      out.tuple.C = M;
    return out;
  }
};

}  // namespace

SubspaceTuple random_subspace_tuple(int d, const std::vector<int>& blocks, std::uint64_t seed) {
  const int s = validate_blocks(d, blocks);
  Rng rng(seed);
  SubspaceTuple t;
  t.blocks = blocks;
  do {
    t.C = gaussian(rng, d, s);
  } while (!orthonormalize(t.C));
  return t;
}

PlaneTuple random_plane_tuple(const MatrixXd& phi, int k, std::uint64_t seed) {
  const int d = static_cast<int>(phi.rows());
  if (k < 1 || 2 * k > d) throw BlockSizeError("plane tuple needs 1 <= k <= d/2");
  Rng rng(seed);
  PlaneTuple t;
  do {
    t.X = gaussian(rng, d, k);
  } while (!project_planes(t.X, phi));
  return t;
}

void project_plane_tuple(MatrixXd& X, const MatrixXd& phi) {
  if (!project_planes(X, phi)) throw FeasibilityError("plane-tuple re-orthogonalization degenerated");
}

namespace {

OptResult flags(const TupleObjective& f, double sign, int d, const std::vector<int>& blocks, const OptConfig& cfg) {
  validate_blocks(d, blocks);
  Search s{f, sign, nullptr, nullptr};
  OptResult out = s.run(d, [&](std::uint64_t seed) { return random_subspace_tuple(d, blocks, seed).C; }, cfg);
  out.tuple.blocks = blocks;
  return out;
}

OptResult planes(const TupleObjective& f, double sign, int d, int k, const MatrixXd& phi, const OptConfig& cfg) {
  if (phi.rows() != d || phi.cols() != d) throw DimensionError("phi must be d x d");
  if (k < 1 || 2 * k > d) throw BlockSizeError("plane tuple needs 1 <= k <= d/2");
  Search s{f, sign, &project_planes, &phi};
  return s.run(d, [&](std::uint64_t seed) { return random_plane_tuple(phi, k, seed).X; }, cfg);
}

}  // namespace

OptResult maximize_over_flags(const TupleObjective& f, int d, const std::vector<int>& blocks, const OptConfig& cfg) {
  return flags(f, 1.0, d, blocks, cfg);
}

OptResult minimize_over_flags(const TupleObjective& f, int d, const std::vector<int>& blocks, const OptConfig& cfg) {
  return flags(f, -1.0, d, blocks, cfg);
}

OptResult maximize_over_plane_tuples(const TupleObjective& f, int d, int k, const MatrixXd& phi,
                                     const OptConfig& cfg) {
  return planes(f, 1.0, d, k, phi, cfg);
}

OptResult minimize_over_plane_tuples(const TupleObjective& f, int d, int k, const MatrixXd& phi,
                                     const OptConfig& cfg) {
  return planes(f, -1.0, d, k, phi, cfg);
}

namespace {

struct Keeper {
  static constexpr std::size_t kKeep = 4;
  std::vector<std::pair<double, MatrixXd>> top, bottom;

  void offer(double v, const MatrixXd& M) {
    insert(top, v, M, [](double a, double b) { return a > b; });
    insert(bottom, v, M, [](double a, double b) { return a < b; });
  }

  template <class Better>
  static void insert(std::vector<std::pair<double, MatrixXd>>& list, double v, const MatrixXd& M, Better better) {
    if (list.size() == kKeep && !better(v, list.back().first)) return;
    auto it = std::find_if(list.begin(), list.end(), [&](const auto& e) { return better(v, e.first); });
    list.insert(it, {v, M});
    if (list.size() > kKeep) list.pop_back();
  }
};

template <class Project>
void polish(const TupleObjective& f, double sign, std::pair<double, MatrixXd>& start, Rng& rng, Project project,
            long& evals) {
  double best = sign * start.first;
  MatrixXd C = start.second;
  double t = 0.1;
  int failures = 0;
  while (t >= 1e-7) {
    MatrixXd cand = C + t * gaussian(rng, static_cast<int>(C.rows()), static_cast<int>(C.cols()));
    bool better = false;
    if (project(cand)) {
      const double v = sign * f(cand);
      ++evals;
      if (std::isfinite(v) && v > best) {
        best = v;
        C = cand;
        better = true;
      }
    }
    if (better) {
      failures = 0;
    } else if (++failures >= 30) {
      t /= 2;
      failures = 0;
    }
  }
  start = {sign * best, C};
}

template <class Sample, class Project>
OracleResult oracle(const TupleObjective& f, long samples, std::uint64_t seed, bool do_polish,
                    const std::vector<MatrixXd>& axis_tuples, Sample sample, Project project) {
  Rng rng(seed);
  Keeper keep;
  OracleResult out;
  auto take = [&](const MatrixXd& M) {
    const double v = f(M);
    ++out.evaluations;
    if (std::isfinite(v)) keep.offer(v, M);
  };
  for (const auto& M : axis_tuples) take(M);
  for (long i = 0; i < samples; ++i) take(sample(rng));
  if (keep.top.empty()) return out;
  if (do_polish) {
    for (auto& e : keep.top) polish(f, 1.0, e, rng, project, out.evaluations);
    for (auto& e : keep.bottom) polish(f, -1.0, e, rng, project, out.evaluations);
  }
  auto hi = std::max_element(keep.top.begin(), keep.top.end(),
                             [](const auto& a, const auto& b) { return a.first < b.first; });
  auto lo = std::min_element(keep.bottom.begin(), keep.bottom.end(),
                             [](const auto& a, const auto& b) { return a.first < b.first; });
  out.max = hi->first;
  out.argmax = hi->second;
  out.min = lo->first;
  out.argmin = lo->second;
  return out;
}

// Ordered selections of `count` distinct axes out of d, filtered by `keep`.
void axis_selections(int d, int count, std::vector<int>& cur, std::vector<char>& used,
                     const std::function<void(const std::vector<int>&)>& emit) {
  if (static_cast<int>(cur.size()) == count) {
    emit(cur);
    return;
  }
  for (int a = 0; a < d; ++a) {
    if (used[a]) continue;
    used[a] = 1;
    cur.push_back(a);
    axis_selections(d, count, cur, used, emit);
    cur.pop_back();
    used[a] = 0;
  }
}

constexpr int kAxisEnumerationLimit = 8;

}  // namespace

OracleResult brute_force_oracle(const TupleObjective& f, int d, const std::vector<int>& blocks, long samples,
                                std::uint64_t seed, bool do_polish) {
  const int s = validate_blocks(d, blocks);
  std::vector<MatrixXd> axes;
  if (d <= kAxisEnumerationLimit) {
    std::vector<int> cur;
    std::vector<char> used(d, 0);
    axis_selections(d, s, cur, used, [&](const std::vector<int>& sel) {
      MatrixXd M = MatrixXd::Zero(d, s);
      for (int c = 0; c < s; ++c) M(sel[c], c) = 1.0;
      axes.push_back(M);
    });
  }
  auto sample = [&](Rng& rng) {
    MatrixXd C;
    do {
      C = gaussian(rng, d, s);
    } while (!orthonormalize(C));
    return C;
  };
  return oracle(f, samples, seed, do_polish, axes, sample, [](MatrixXd& M) { return orthonormalize(M); });
}

OracleResult brute_force_oracle(const TupleObjective& f, int d, int k, const MatrixXd& phi, long samples,
                                std::uint64_t seed, bool do_polish) {
  if (phi.rows() != d || phi.cols() != d) throw DimensionError("phi must be d x d");
  if (k < 1 || 2 * k > d) throw BlockSizeError("plane tuple needs 1 <= k <= d/2");
  std::vector<MatrixXd> axes;
  if (d <= kAxisEnumerationLimit) {
    std::vector<int> cur;
    std::vector<char> used(d, 0);
    axis_selections(d, k, cur, used, [&](const std::vector<int>& sel) {
      MatrixXd M = MatrixXd::Zero(d, k);
      for (int c = 0; c < k; ++c) M(sel[c], c) = 1.0;
      MatrixXd P = M;
      if (project_planes(P, phi) && (P - M).cwiseAbs().maxCoeff() < 1e-12) axes.push_back(M);
    });
  }
  auto sample = [&](Rng& rng) {
    MatrixXd X;
    do {
      X = gaussian(rng, d, k);
    } while (!project_planes(X, phi));
    return X;
  };
  return oracle(f, samples, seed, do_polish, axes, sample, [&](MatrixXd& M) { return project_planes(M, phi); });
}

}  // namespace crcurv
