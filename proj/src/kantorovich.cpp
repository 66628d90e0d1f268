#include "otray/kantorovich.hpp"

#include "otray/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

namespace otray {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

struct Flow {
  Eigen::MatrixXd cost;
  Eigen::MatrixXd flow;
};

// Successive shortest paths on S -> sources -> sinks -> T with Dijkstra on
// reduced costs. Node ids: 0 = S, 1..a sources, a+1..a+b sinks, a+b+1 = T.
Flow min_cost_flow(const Eigen::MatrixXd& cost, std::vector<double> supply,
                   std::vector<double> demand, double eps) {
  const int a = static_cast<int>(supply.size());
  const int b = static_cast<int>(demand.size());
  const int N = a + b + 2;
  const int S = 0, T = a + b + 1;
  Eigen::MatrixXd flow = Eigen::MatrixXd::Zero(a, b);
  std::vector<double> pot(N, 0.0), dist(N);
  std::vector<int> prev(N);
  std::vector<char> done(N);

  auto relax = [&](int from, int to, double c) {
    const double nd = dist[from] + std::max(0.0, c + pot[from] - pot[to]);
    if (nd < dist[to]) {
      dist[to] = nd;
      prev[to] = from;
    }
  };

  const int cap = 10 * (a + b) * (a + b) + 100;
  for (int iter = 0;; ++iter) {
    const bool any_supply = std::any_of(supply.begin(), supply.end(), [&](double s) { return s > eps; });
    const bool any_demand = std::any_of(demand.begin(), demand.end(), [&](double d) { return d > eps; });
    if (!any_supply || !any_demand) break;
    if (iter >= cap) throw InfeasibleError("transport solver did not converge");

    std::fill(dist.begin(), dist.end(), kInf);
    std::fill(prev.begin(), prev.end(), -1);
    std::fill(done.begin(), done.end(), 0);
    dist[S] = 0.0;
    for (;;) {
      int v = -1;
      for (int k = 0; k < N; ++k)
        if (!done[k] && dist[k] < kInf && (v < 0 || dist[k] < dist[v])) v = k;
      if (v < 0) break;
      done[v] = 1;
      if (v == S) {
        for (int i = 0; i < a; ++i)
          if (supply[i] > eps) relax(S, 1 + i, 0.0);
      } else if (v <= a) {
        const int i = v - 1;
        for (int j = 0; j < b; ++j) relax(v, a + 1 + j, cost(i, j));
      } else if (v < T) {
        const int j = v - a - 1;
        for (int i = 0; i < a; ++i)
          if (flow(i, j) > eps) relax(v, 1 + i, -cost(i, j));
        if (demand[j] > eps) relax(v, T, 0.0);
      }
    }
    if (dist[T] == kInf) throw InfeasibleError("no augmenting path with supply left");
    for (int k = 0; k < N; ++k) pot[k] += std::min(dist[k], dist[T]);

    // bottleneck along the path
    double push = kInf;
    for (int v = T; v != S; v = prev[v]) {
      const int u = prev[v];
      if (u == S) push = std::min(push, supply[v - 1]);
      else if (v == T) push = std::min(push, demand[u - a - 1]);
      else if (u > a) push = std::min(push, flow(v - 1, u - a - 1));
    }
    for (int v = T; v != S; v = prev[v]) {
      const int u = prev[v];
      if (u == S) supply[v - 1] -= push;
      else if (v == T) demand[u - a - 1] -= push;
      else if (u <= a) flow(u - 1, v - a - 1) += push;
      else flow(v - 1, u - a - 1) -= push;
    }
  }
  return {cost, flow};
}

// Shortest distances from a virtual root over the residual graph of the
// optimal plan. They satisfy p_j - p_i <= c_ij everywhere and equality on
// the support of the plan.
std::vector<double> residual_duals(const Flow& f, double eps) {
  const int a = static_cast<int>(f.cost.rows());
  const int b = static_cast<int>(f.cost.cols());
  std::vector<double> p(a + b, 0.0);
  const double scale = std::max(1.0, f.cost.cwiseAbs().maxCoeff());
  const double slack = 1e-14 * scale;
  for (int round = 0; round <= a + b + 1; ++round) {
    bool changed = false;
    for (int i = 0; i < a; ++i)
      for (int j = 0; j < b; ++j) {
        if (p[i] + f.cost(i, j) < p[a + j] - slack) {
          p[a + j] = p[i] + f.cost(i, j);
          changed = true;
        }
        if (f.flow(i, j) > eps && p[a + j] - f.cost(i, j) < p[i] - slack) {
          p[i] = p[a + j] - f.cost(i, j);
          changed = true;
        }
      }
    if (!changed) return p;
  }
  throw InfeasibleError("negative cycle in the residual graph: plan is not optimal");
}

}  // namespace

DualSolution solve_kantorovich_dual(const DiscreteMeasure& mu, const DiscreteMeasure& nu,
                                    const ManifoldParams& m) {
  if (mu.size() == 0 || nu.size() == 0) throw InvalidMeasureError("empty measure");
  if (std::abs(mu.total() - nu.total()) > 1e-10)
    throw UnbalancedError("total masses differ: " + std::to_string(mu.total()) + " vs " +
                          std::to_string(nu.total()));
  const int a = static_cast<int>(mu.size());
  const int b = static_cast<int>(nu.size());
  Eigen::MatrixXd cost(a, b);
  for (int i = 0; i < a; ++i)
    for (int j = 0; j < b; ++j) cost(i, j) = distance(mu.atoms()[i].point, nu.atoms()[j].point, m);

  std::vector<double> supply, demand;
  for (const Atom& x : mu.atoms()) supply.push_back(x.mass);
  for (const Atom& y : nu.atoms()) demand.push_back(y.mass);
  const double eps = 1e-15 * std::max(1.0, mu.total());

  const Flow f = min_cost_flow(cost, supply, demand, eps);
  const std::vector<double> p = residual_duals(f, 1e-15);

  std::vector<double> g(b);
  for (int j = 0; j < b; ++j) g[j] = p[a + j];

  // c-transform u(z) = min_j d(z, y_j) - g_j on the deduplicated union
  std::vector<Point> pts;
  for (const Atom& x : mu.atoms()) pts.push_back(x.point);
  for (const Atom& y : nu.atoms()) {
    bool dup = false;
    for (const Point& q : pts) dup = dup || distance(q, y.point, m) <= 1e-9;
    if (!dup) pts.push_back(y.point);
  }
  auto ctrans = [&](const Point& z) {
    double best = kInf;
    for (int j = 0; j < b; ++j) best = std::min(best, distance(z, nu.atoms()[j].point, m) - g[j]);
    return best;
  };
  // shift so the values are centered; the dual value is invariant
  std::vector<Anchor> anchors;
  for (const Point& q : pts) anchors.push_back({q, ctrans(q)});
  double mean = 0.0;
  for (const Anchor& x : anchors) mean += x.value;
  mean /= static_cast<double>(anchors.size());
  for (Anchor& x : anchors) x.value -= mean;

  DualSolution out;
  out.potential = Potential(std::move(anchors), m);
  std::vector<double> terms;
  for (const Atom& x : mu.atoms()) terms.push_back(x.mass * out.potential(x.point));
  for (const Atom& y : nu.atoms()) terms.push_back(-y.mass * out.potential(y.point));
  out.value = pairwise_sum(terms);
  std::vector<double> cterms;
  for (int i = 0; i < a; ++i)
    for (int j = 0; j < b; ++j) cterms.push_back(f.flow(i, j) * cost(i, j));
  out.primal_cost = pairwise_sum(cterms);
  out.plan = f.flow;
  return out;
}

}  // namespace otray
