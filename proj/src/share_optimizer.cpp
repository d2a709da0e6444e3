#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>

#include <Eigen/Dense>

#include "sgmr/cost_planner.hpp"
#include "sgmr/errors.hpp"

namespace sgmr {

namespace {

// Posynomial sum_t c_t exp(a_t . y) over the free (non-dominated) variables.
struct Posynomial {
  Eigen::MatrixXd a;  // terms x free
  Eigen::VectorXd c;

  double value(const Eigen::VectorXd& y) const { return c.dot((a * y).array().exp().matrix()); }

  void derivatives(const Eigen::VectorXd& y, Eigen::VectorXd& g, Eigen::MatrixXd& h) const {
    Eigen::VectorXd w = c.array() * (a * y).array().exp();
    g = a.transpose() * w;
    h = a.transpose() * w.asDiagonal() * a;
  }
};

Eigen::MatrixXd null_space(const Eigen::MatrixXd& rows, int n) {
  if (rows.rows() == 0) return Eigen::MatrixXd::Identity(n, n);
  auto svd = Eigen::JacobiSVD<Eigen::MatrixXd>(rows, Eigen::ComputeFullV);
  auto sv = svd.singularValues();
  auto tol = std::max(1.0, sv.size() ? sv(0) : 0.0) * 1e-10;
  auto rank = 0;
  for (auto i = 0; i < sv.size(); ++i) {
    if (sv(i) > tol) ++rank;
  }
  return svd.matrixV().rightCols(n - rank);
}

struct Stationarity {
  double lambda = 0;
  double residual = 0;
  int worst_bound = -1;  // active variable with the most negative multiplier
};

Stationarity stationarity(const Eigen::VectorXd& g, const std::vector<bool>& active) {
  auto st = Stationarity{};
  auto count = 0;
  for (auto v = 0; v < g.size(); ++v) {
    if (!active[v]) {
      st.lambda += g(v);
      ++count;
    }
  }
  if (count > 0) st.lambda /= count;
  auto scale = std::max(std::abs(st.lambda), 1e-300);
  auto worst = 0.0;
  for (auto v = 0; v < g.size(); ++v) {
    auto dev = (g(v) - st.lambda) / scale;
    if (!active[v]) {
      st.residual = std::max(st.residual, std::abs(dev));
    } else if (dev < 0) {
      st.residual = std::max(st.residual, -dev);
      if (dev < worst) {
        worst = dev;
        st.worst_bound = v;
      }
    }
  }
  if (count == 0 && st.lambda == 0) st.residual = 0;
  return st;
}

}  // namespace

ShareAssignment optimize_shares(const CostExpression& expr, double k) {
  if (!(k >= 1)) throw DomainError("reducer budget k must be at least 1");
  auto p = expr.variable_count();
  auto free_vars = std::vector<int>{};
  for (auto v = 0; v < p; ++v) {
    if (!((expr.dominated >> v) & 1U)) free_vars.push_back(v);
  }
  auto n = static_cast<int>(free_vars.size());
  auto result = ShareAssignment{};
  result.k = k;
  result.shares.assign(p, 1.0);
  if (n == 0) {
    result.cost_per_edge = expr.evaluate(result.shares);
    return result;
  }

  auto f = Posynomial{Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(expr.terms.size()), n),
                      Eigen::VectorXd::Zero(static_cast<Eigen::Index>(expr.terms.size()))};
  for (auto t = std::size_t{0}; t < expr.terms.size(); ++t) {
    f.c(static_cast<Eigen::Index>(t)) = expr.terms[t].coefficient;
    for (auto i = 0; i < n; ++i) {
      if ((expr.terms[t].vars >> free_vars[i]) & 1U) f.a(static_cast<Eigen::Index>(t), i) = 1.0;
    }
  }

  auto total = std::log(k);
  Eigen::VectorXd y = Eigen::VectorXd::Constant(n, total / n);
  auto active = std::vector<bool>(n, total == 0.0);
  Eigen::VectorXd g;
  Eigen::MatrixXd h;

  // Newton on the face {sum y = log k, y_v = 0 for active v}.
  for (auto iter = 0; iter < 500 && total > 0; ++iter) {
    f.derivatives(y, g, h);
    auto st = stationarity(g, active);
    auto free_idx = std::vector<int>{};
    for (auto v = 0; v < n; ++v) {
      if (!active[v]) free_idx.push_back(v);
    }
    auto face_converged = true;
    {
      auto scale = std::max(std::abs(st.lambda), 1e-300);
      for (auto v : free_idx) face_converged = face_converged && std::abs(g(v) - st.lambda) / scale < 1e-14;
    }
    if (face_converged) {
      if (st.worst_bound >= 0 && (g(st.worst_bound) - st.lambda) / std::max(std::abs(st.lambda), 1e-300) < -1e-12) {
        active[st.worst_bound] = false;
        continue;
      }
      break;
    }
    auto m = static_cast<int>(free_idx.size());
    Eigen::MatrixXd kkt = Eigen::MatrixXd::Zero(m + 1, m + 1);
    Eigen::VectorXd rhs = Eigen::VectorXd::Zero(m + 1);
    for (auto i = 0; i < m; ++i) {
      for (auto j = 0; j < m; ++j) kkt(i, j) = h(free_idx[i], free_idx[j]);
      kkt(i, m) = 1.0;
      kkt(m, i) = 1.0;
      rhs(i) = -g(free_idx[i]);
    }
    Eigen::VectorXd sol = kkt.completeOrthogonalDecomposition().solve(rhs);
    Eigen::VectorXd d = Eigen::VectorXd::Zero(n);
    for (auto i = 0; i < m; ++i) d(free_idx[i]) = sol(i);
    // Fall back to the projected gradient when Newton does not descend.
    if (g.dot(d) >= 0) {
      d.setZero();
      for (auto v : free_idx) d(v) = -(g(v) - st.lambda);
    }
    auto step = 1.0;
    auto blocking = -1;
    for (auto v : free_idx) {
      if (d(v) < 0 && y(v) + step * d(v) < 0) {
        step = y(v) / -d(v);
        blocking = v;
      }
    }
    auto f0 = f.value(y);
    auto slope = g.dot(d);
    auto t = step;
    auto accepted = false;
    for (auto back = 0; back < 80; ++back) {
      Eigen::VectorXd trial = y + t * d;
      if (f.value(trial) <= f0 + 1e-4 * t * slope || std::abs(t * slope) < 1e-16 * std::abs(f0)) {
        y = trial;
        accepted = true;
        break;
      }
      t *= 0.5;
      blocking = -1;
    }
    if (!accepted) break;
    if (blocking >= 0 && t == step) {
      y(blocking) = 0.0;
      active[blocking] = true;
    }
    for (auto v : free_idx) {
      if (y(v) < 0) y(v) = 0;
    }
  }

  // Among optimal points pick the one closest to uniform log-shares: move
  // along directions that leave every term unchanged.
  f.derivatives(y, g, h);
  {
    auto st = stationarity(g, active);
    auto scale = std::max(std::abs(st.lambda), 1e-300);
    for (auto v = 0; v < n; ++v) {
      if (active[v] && (g(v) - st.lambda) / scale <= 1e-9) active[v] = false;
    }
    for (auto v = 0; v < n; ++v) {
      if (y(v) <= 0 && !active[v]) active[v] = (g(v) - st.lambda) / scale > 1e-9;
    }
  }
  auto pinned = active;
  for (auto round = 0; round <= n && total > 0; ++round) {
    auto rows = std::vector<Eigen::VectorXd>{};
    for (auto t = 0; t < f.a.rows(); ++t) rows.push_back(f.a.row(t).transpose());
    rows.push_back(Eigen::VectorXd::Ones(n));
    for (auto v = 0; v < n; ++v) {
      if (pinned[v]) rows.push_back(Eigen::VectorXd::Unit(n, v));
    }
    Eigen::MatrixXd a(static_cast<Eigen::Index>(rows.size()), n);
    for (auto r = std::size_t{0}; r < rows.size(); ++r) a.row(static_cast<Eigen::Index>(r)) = rows[r].transpose();
    Eigen::MatrixXd basis = null_space(a, n);
    if (basis.cols() == 0) break;
    Eigen::VectorXd target = y - basis * (basis.transpose() * y);
    Eigen::VectorXd move = target - y;
    auto t = 1.0;
    auto blocking = -1;
    for (auto v = 0; v < n; ++v) {
      if (move(v) < 0 && y(v) + t * move(v) < 0) {
        t = y(v) / -move(v);
        blocking = v;
      }
    }
    y += t * move;
    if (blocking < 0) break;
    y(blocking) = 0;
    pinned[blocking] = true;
  }
  // Exact product constraint.
  auto drift = (total - y.sum());
  auto movable = 0;
  for (auto v = 0; v < n; ++v) movable += y(v) > 0 ? 1 : 0;
  if (movable > 0) {
    for (auto v = 0; v < n; ++v) {
      if (y(v) > 0) y(v) += drift / movable;
    }
  }

  f.derivatives(y, g, h);
  result.kkt_residual = stationarity(g, active).residual;
  for (auto i = 0; i < n; ++i) result.shares[free_vars[i]] = std::exp(y(i));
  result.cost_per_edge = expr.evaluate(result.shares);
  return result;
}

}  // namespace sgmr
