#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <limits>
#include <numeric>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "entropy.hpp"
#include "parallel.hpp"
#include "rays.hpp"
#include "support_enum.hpp"

namespace entrocone {

struct OptConfig {
  std::uint64_t seed = 1;
  int restarts = 64;
  int max_evals = 1500;      // Nelder-Mead budget per restart
  int polish_iters = 40;     // numeric-gradient steps after Nelder-Mead
  double boundary = 1e-7;    // atoms below this mass are reported as shrunk away
  int threads = 1;
  bool long_run = false;
};

/// A linear cost on 4-variable entropy vectors, coeffs indexed by mask.
struct CostFunction {
  std::vector<double> coeffs = std::vector<double>(16, 0.0);
  std::vector<double> lambda;
  std::uint64_t seed = 0;
  std::string description;

  template <class T>
  double operator()(const SetFunction<T>& h) const {
    double acc = 0;
    for (Mask m = 1; m < 16; ++m) {
      if constexpr (std::is_floating_point_v<T>) acc += coeffs[m] * h[m];
      else acc += coeffs[m] * boost::rational_cast<double>(h[m]);
    }
    return acc;
  }
};

struct OptResult {
  Support support;
  double best_value = std::numeric_limits<double>::infinity();
  std::vector<double> probs;
  EntropicVector vector;
  int restarts_used = 0;
  /// Set when some atom's mass fell below the boundary threshold; the
  /// reduced fields then describe the distribution with those atoms removed.
  bool boundary = false;
  std::vector<SetPartition> reduced_columns;
  std::vector<double> reduced_probs;

  Distribution argmin() const { return Distribution(support, probs); }
};

namespace detail {

/// Softmax with the last free coordinate pinned at 0. Inputs are clamped so
/// every mass stays strictly positive in double precision.
inline void softmax(const std::vector<double>& x, std::vector<double>& p) {
  const std::size_t k = x.size() + 1;
  p.resize(k);
  double mx = 0;
  for (double v : x) mx = std::max(mx, std::clamp(v, -60.0, 60.0));
  double sum = std::exp(-mx);
  p[k - 1] = sum;
  for (std::size_t i = 0; i + 1 < k; ++i) {
    p[i] = std::exp(std::clamp(x[i], -60.0, 60.0) - mx);
    sum += p[i];
  }
  for (auto& v : p) v /= sum;
}

inline std::vector<double> logit(const std::vector<double>& p) {
  std::vector<double> x(p.size() - 1);
  for (std::size_t i = 0; i + 1 < p.size(); ++i) x[i] = std::log(p[i] / p.back());
  return x;
}

using Fn = std::function<double(const std::vector<double>&)>;

inline double nelder_mead(const Fn& f, std::vector<double>& x, int max_evals) {
  const std::size_t d = x.size();
  if (d == 0) return f(x);
  std::vector<std::vector<double>> pts(d + 1, x);
  std::vector<double> val(d + 1);
  for (std::size_t i = 0; i < d; ++i) pts[i + 1][i] += 0.7;
  for (std::size_t i = 0; i <= d; ++i) val[i] = f(pts[i]);
  int evals = static_cast<int>(d + 1);
  std::vector<std::size_t> order(d + 1);
  std::vector<double> centroid(d), xr(d), xe(d), xc(d);
  while (evals < max_evals) {
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](auto a, auto b) { return val[a] < val[b]; });
    const std::size_t best = order.front(), worst = order.back(), second = order[d - 1];
    double spread = std::abs(val[worst] - val[best]);
    double size = 0;
    for (std::size_t i = 0; i <= d; ++i)
      for (std::size_t j = 0; j < d; ++j) size = std::max(size, std::abs(pts[i][j] - pts[best][j]));
    if (spread < 1e-14 && size < 1e-9) break;
    std::fill(centroid.begin(), centroid.end(), 0.0);
    for (std::size_t i = 0; i <= d; ++i)
      if (i != worst)
        for (std::size_t j = 0; j < d; ++j) centroid[j] += pts[i][j] / static_cast<double>(d);
    for (std::size_t j = 0; j < d; ++j) xr[j] = centroid[j] + (centroid[j] - pts[worst][j]);
    double fr = f(xr);
    ++evals;
    if (fr < val[best]) {
      for (std::size_t j = 0; j < d; ++j) xe[j] = centroid[j] + 2.0 * (centroid[j] - pts[worst][j]);
      double fe = f(xe);
      ++evals;
      if (fe < fr) pts[worst] = xe, val[worst] = fe;
      else pts[worst] = xr, val[worst] = fr;
    } else if (fr < val[second]) {
      pts[worst] = xr, val[worst] = fr;
    } else {
      bool outside = fr < val[worst];
      for (std::size_t j = 0; j < d; ++j)
        xc[j] = outside ? centroid[j] + 0.5 * (xr[j] - centroid[j]) : centroid[j] + 0.5 * (pts[worst][j] - centroid[j]);
      double fc = f(xc);
      ++evals;
      if (fc < std::min(fr, val[worst])) {
        pts[worst] = xc, val[worst] = fc;
      } else {
        for (std::size_t i = 0; i <= d; ++i) {
          if (i == best) continue;
          for (std::size_t j = 0; j < d; ++j) pts[i][j] = pts[best][j] + 0.5 * (pts[i][j] - pts[best][j]);
          val[i] = f(pts[i]);
          ++evals;
        }
      }
    }
  }
  std::size_t best = std::min_element(val.begin(), val.end()) - val.begin();
  x = pts[best];
  return val[best];
}

/// Steepest descent with central-difference gradients and backtracking.
inline double gradient_polish(const Fn& f, std::vector<double>& x, double fx, int iters) {
  const std::size_t d = x.size();
  std::vector<double> g(d), trial(d);
  double step = 1.0;
  for (int it = 0; it < iters && d > 0; ++it) {
    double gnorm = 0;
    for (std::size_t j = 0; j < d; ++j) {
      const double h = 1e-6 * std::max(1.0, std::abs(x[j]));
      double keep = x[j];
      x[j] = keep + h;
      double fp = f(x);
      x[j] = keep - h;
      double fm = f(x);
      x[j] = keep;
      g[j] = (fp - fm) / (2 * h);
      gnorm += g[j] * g[j];
    }
    gnorm = std::sqrt(gnorm);
    if (!(gnorm > 1e-12)) break;
    bool improved = false;
    for (int tries = 0; tries < 30; ++tries) {
      for (std::size_t j = 0; j < d; ++j) trial[j] = x[j] - step * g[j] / gnorm;
      double ft = f(trial);
      if (ft < fx) {
        x = trial;
        fx = ft;
        improved = true;
        step *= 2;
        break;
      }
      step *= 0.5;
    }
    if (!improved) break;
  }
  return fx;
}

/// Starting point for restart r: uniform, then one atom emphasised per
/// restart, then Dirichlet(1) samples. Depends only on (seed, r).
inline std::vector<double> start_point(int k, int r, std::uint64_t seed) {
  std::vector<double> p(k, 1.0 / k);
  if (r == 0) return p;
  if (r <= k) {
    std::fill(p.begin(), p.end(), 0.5 / std::max(1, k - 1));
    p[r - 1] = 0.5;
    if (k == 1) p[0] = 1;
    return p;
  }
  std::mt19937_64 rng(derive_seed(seed, static_cast<std::uint64_t>(r)));
  std::exponential_distribution<double> e(1.0);
  double s = 0;
  for (auto& v : p) s += (v = e(rng) + 1e-12);
  for (auto& v : p) v /= s;
  return p;
}

struct LocalResult {
  double value;
  std::vector<double> probs;
  int restarts;
};

/// Multistart minimization of g(p) over the open simplex of k atoms.
/// extra_starts are tried before the standard sequence.
inline LocalResult multistart(int k, const std::function<double(const std::vector<double>&)>& g, const OptConfig& cfg,
                              const std::vector<std::vector<double>>& extra_starts = {}) {
  std::vector<double> p;
  Fn fx = [&](const std::vector<double>& x) {
    softmax(x, p);
    double v = g(p);
    return std::isfinite(v) ? v : 1e300;
  };
  LocalResult best{std::numeric_limits<double>::infinity(), std::vector<double>(k, 1.0 / k), 0};
  const int total = static_cast<int>(extra_starts.size()) + cfg.restarts;
  for (int r = 0; r < total; ++r) {
    auto p0 = r < static_cast<int>(extra_starts.size())
                  ? extra_starts[r]
                  : start_point(k, r - static_cast<int>(extra_starts.size()), cfg.seed);
    auto x = logit(p0);
    double v = nelder_mead(fx, x, cfg.max_evals);
    v = gradient_polish(fx, x, v, cfg.polish_iters);
    if (v < best.value) {
      best.value = v;
      softmax(x, best.probs);
    }
  }
  best.restarts = total;
  return best;
}

inline void fill_boundary(OptResult& r, double threshold) {
  std::vector<int> keep;
  for (int a = 0; a < r.support.k(); ++a)
    if (r.probs[a] >= threshold) keep.push_back(a);
  r.boundary = static_cast<int>(keep.size()) < r.support.k();
  if (!r.boundary) return;
  double s = 0;
  for (int a : keep) s += r.probs[a];
  for (int a : keep) r.reduced_probs.push_back(r.probs[a] / s);
  for (const auto& part : r.support.partitions()) {
    std::vector<int> labels;
    for (int a : keep) labels.push_back(part.block_of(a));
    r.reduced_columns.push_back(SetPartition::from_labels(labels));
  }
}

}  // namespace detail

/// Most negative Ingleton score reachable on a 4-variable support.
inline OptResult minimize_score(const Support& s, const OptConfig& cfg = {}) {
  if (s.n() != 4) throw ArityError("minimize_score needs a 4-variable support");
  MeetTable table(s);
  EntropicVector h(4);
  auto g = [&](const std::vector<double>& p) {
    table.entropies(p, h);
    return ingleton_score(h);
  };
  auto local = detail::multistart(s.k(), g, cfg);
  OptResult r;
  r.support = s;
  r.best_value = local.value;
  r.probs = local.probs;
  r.vector = table.entropies(r.probs);
  r.restarts_used = local.restarts;
  detail::fill_boundary(r, cfg.boundary);
  return r;
}

enum class CostScaling {
  raw,          // minimize c . h
  per_joint     // minimize c . h / h_N
};

/// Minimizes a linear cost over distributions on s. variable_perm relabels
/// the support's variables before the cost is applied (variable v becomes
/// variable variable_perm[v]).
inline OptResult minimize_cost(const Support& s, const CostFunction& c, const OptConfig& cfg = {},
                               CostScaling scaling = CostScaling::raw, std::vector<int> variable_perm = {},
                               const std::vector<std::vector<double>>& extra_starts = {}) {
  if (s.n() != 4) throw ArityError("minimize_cost needs a 4-variable support");
  if (variable_perm.empty()) variable_perm = {0, 1, 2, 3};
  MeetTable table(s);
  EntropicVector h(4);
  auto g = [&](const std::vector<double>& p) {
    table.entropies(p, h);
    auto hp = permute_variables(h, variable_perm);
    double v = c(hp);
    if (scaling == CostScaling::per_joint) {
      if (!(hp[0xF] > 1e-12)) return std::numeric_limits<double>::infinity();
      v /= hp[0xF];
    }
    return v;
  };
  auto local = detail::multistart(s.k(), g, cfg, extra_starts);
  OptResult r;
  r.support = s;
  r.best_value = local.value;
  r.probs = local.probs;
  r.vector = permute_variables(table.entropies(r.probs), variable_perm);
  r.restarts_used = local.restarts;
  detail::fill_boundary(r, cfg.boundary);
  return r;
}

/// The Ingleton_34 functional as a cost.
inline CostFunction ingleton34_cost() {
  CostFunction c;
  for (Mask m = 1; m < 16; ++m) {
    EntropicVector e(4);
    e[m] = 1;
    c.coeffs[m] = ingleton(e, 2, 3);
  }
  c.lambda.assign(14, 0.0);
  c.description = "Ingleton_34";
  return c;
}

/// Hyperplane through the 14 perturbed facet rays (r_i + lambda_i f_34)/(1 + lambda_i),
/// scaled so that c . f_34 = -1.
inline CostFunction random_cost(const std::vector<double>& lambda, std::uint64_t seed = 0) {
  if (lambda.size() != 14) throw SizeError("random_cost needs 14 lambda values");
  for (double l : lambda)
    if (!(l >= 0) || !std::isfinite(l)) throw ArgumentError("lambda values must be finite and nonnegative");
  auto facet = facet_rays();
  auto f34 = ray_f(3, 4).cast<double>();
  // c . r_i = lambda_i and c . f34 = -1 make every perturbed ray vanish.
  Eigen::Matrix<double, 15, 15> A;
  Eigen::Matrix<double, 15, 1> b;
  for (int i = 0; i < 14; ++i) {
    auto r = facet[i].ray.cast<double>();
    for (Mask m = 1; m < 16; ++m) A(i, m - 1) = r[m];
    b(i) = lambda[i];
  }
  for (Mask m = 1; m < 16; ++m) A(14, m - 1) = f34[m];
  b(14) = -1;
  Eigen::FullPivLU<Eigen::Matrix<double, 15, 15>> lu(A);
  if (lu.rank() < 15) throw DegeneracyError("ray system is singular");
  Eigen::Matrix<double, 15, 1> x = lu.solve(b);
  if (!x.allFinite() || (A * x - b).norm() > 1e-8 * (1 + b.norm()))
    throw DegeneracyError("cost hyperplane solve is numerically degenerate");
  CostFunction c;
  for (Mask m = 1; m < 16; ++m) c.coeffs[m] = x(m - 1);
  c.lambda = lambda;
  c.seed = seed;
  c.description = "random hyperplane";
  return c;
}

/// lambda_i = 10^U(-2, 2), independently, from the seed.
inline std::vector<double> random_lambda(std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  std::vector<double> l(14);
  for (auto& v : l) v = std::pow(10.0, u(rng));
  return l;
}

struct CensusResult {
  int k = 0;
  std::size_t supports_scanned = 0;
  std::vector<OptResult> violating;
};

inline constexpr double kViolationTol = 1e-6;

/// Scores every canonical 4-variable k-atom support and keeps those that violate.
inline CensusResult violating_census(int k, const OptConfig& cfg = {}) {
  if (k >= 7) throw CapacityError("violating_census: k <= 6 only (k = 6 needs long_run)");
  if (k == 6 && !cfg.long_run) throw CapacityError("violating_census: k = 6 needs long_run");
  auto records = enumerate_supports(4, k, Backend::leiterspiel, {.long_run = cfg.long_run});
  std::vector<OptResult> results(records.size());
  parallel_for(records.size(), cfg.threads, [&](std::size_t i) {
    OptConfig local = cfg;
    local.seed = derive_seed(cfg.seed, i);
    results[i] = minimize_score(records[i].canonical, local);
  });
  CensusResult out;
  out.k = k;
  out.supports_scanned = records.size();
  for (auto& r : results)
    if (r.best_value < -kViolationTol) out.violating.push_back(std::move(r));
  return out;
}

/// Violating 6-atom supports without the full census: a seeded sample of
/// the one-atom extensions of the violating 5-atom supports, each scored.
/// Every extension violates, since its 5-atom face does.
inline std::vector<OptResult> six_atom_sample(const std::vector<OptResult>& five, std::size_t count,
                                              const OptConfig& cfg = {}) {
  std::vector<Support> base;
  for (const auto& r : five) base.push_back(r.support);
  auto ext = one_atom_extensions(base);
  std::mt19937_64 rng(derive_seed(cfg.seed, 6));
  std::shuffle(ext.begin(), ext.end(), rng);
  ext.resize(std::min(count, ext.size()));
  std::sort(ext.begin(), ext.end());
  std::vector<OptResult> out(ext.size());
  parallel_for(ext.size(), cfg.threads, [&](std::size_t i) {
    OptConfig local = cfg;
    local.seed = derive_seed(cfg.seed, 600000 + i);
    out[i] = minimize_score(ext[i], local);
  });
  std::erase_if(out, [](const OptResult& r) { return !(r.best_value < -kViolationTol); });
  return out;
}

/// The pair (i, j) with the most negative Ingleton_ij at h.
inline std::pair<int, int> most_violated_pair(const EntropicVector& h) {
  std::pair<int, int> best = kPairs[0];
  double v = std::numeric_limits<double>::infinity();
  for (auto [i, j] : kPairs) {
    double x = ingleton(h, i, j);
    if (x < v) v = x, best = {i, j};
  }
  return best;
}

/// The four variable relabelings sending pair (i, j) onto (3, 4), 0-based (2, 3).
inline std::vector<std::vector<int>> orientations_onto_34(int i, int j) {
  std::vector<int> rest;
  for (int v = 0; v < 4; ++v)
    if (v != i && v != j) rest.push_back(v);
  std::vector<std::vector<int>> out;
  for (auto [a, b] : {std::pair{i, j}, std::pair{j, i}})
    for (auto [c, d] : {std::pair{rest[0], rest[1]}, std::pair{rest[1], rest[0]}}) {
      std::vector<int> perm(4);
      perm[a] = 2;
      perm[b] = 3;
      perm[c] = 0;
      perm[d] = 1;
      out.push_back(perm);
    }
  return out;
}

struct HarvestPoint {
  EntropicVector h;
  std::vector<std::string> support_rgs;
  std::uint64_t cost_seed = 0;
  double value = 0;
  std::vector<double> probs;
  std::vector<int> variable_perm;
};

struct HarvestConfig {
  OptConfig opt{.seed = 1, .restarts = 2, .max_evals = 800, .polish_iters = 20};
  double dedupe_tol = 1e-6;
  double ingleton_tol = 1e-9;
};

/// Minimizes num_costs random hyperplane costs (scaled per unit joint
/// entropy) over every violating support in every orientation onto the
/// pair (3,4), and keeps the optima inside G^34_4. Score optima of the
/// supports are included as the lambda = 0 members.
inline std::vector<HarvestPoint> harvest(const std::vector<OptResult>& violating, int num_costs,
                                         const HarvestConfig& hc = {}) {
  struct Task {
    std::size_t support;
    std::vector<int> perm;
  };
  std::vector<Task> tasks;
  for (std::size_t s = 0; s < violating.size(); ++s) {
    auto [i, j] = most_violated_pair(violating[s].vector);
    for (auto& perm : orientations_onto_34(i, j)) tasks.push_back({s, perm});
  }
  const std::size_t per_cost = tasks.size();
  const std::size_t total = per_cost * (static_cast<std::size_t>(num_costs) + 1);
  std::vector<std::optional<HarvestPoint>> found(total);
  parallel_for(total, hc.opt.threads, [&](std::size_t id) {
    const std::size_t cost_index = id / per_cost;
    const Task& t = tasks[id % per_cost];
    const OptResult& base = violating[t.support];
    HarvestPoint pt;
    pt.support_rgs = base.support.rgs();
    pt.variable_perm = t.perm;
    if (cost_index == 0) {
      pt.h = permute_variables(base.vector, t.perm);
      pt.probs = base.probs;
      pt.value = ingleton(pt.h, 2, 3) / pt.h[0xF];
    } else {
      const std::uint64_t cost_seed = derive_seed(hc.opt.seed, cost_index);
      auto cost = random_cost(random_lambda(cost_seed), cost_seed);
      OptConfig local = hc.opt;
      local.seed = derive_seed(cost_seed, id % per_cost);
      auto r = minimize_cost(base.support, cost, local, CostScaling::per_joint, t.perm, {base.probs});
      pt.h = r.vector;
      pt.probs = r.probs;
      pt.value = r.best_value;
      pt.cost_seed = cost_seed;
    }
    if (ingleton(pt.h, 2, 3) < -hc.ingleton_tol && pt.h[0xF] > 0) found[id] = std::move(pt);
  });
  std::vector<HarvestPoint> out;
  for (auto& f : found) {
    if (!f) continue;
    bool dup = false;
    for (const auto& o : out) {
      double diff = 0;
      for (Mask m = 1; m < 16; ++m) diff = std::max(diff, std::abs(f->h[m] / f->h[0xF] - o.h[m] / o.h[0xF]));
      if (diff <= hc.dedupe_tol) {
        dup = true;
        break;
      }
    }
    if (!dup) out.push_back(std::move(*f));
  }
  return out;
}

}  // namespace entrocone
