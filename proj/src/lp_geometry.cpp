#include "sphereiso/lp_geometry.hpp"

#include <algorithm>
#include <cmath>
#include <random>

namespace sphereiso {

LpVector::LpVector(FiniteMeasureSpace sp, std::vector<double> v, double p_)
    : space(std::move(sp)), values(std::move(v)), p(p_) {
  if ((int)values.size() != space.size())
    throw InputError("value count must equal atom count");
  if (!(p >= 1.0) || std::isinf(p))
    throw InputError("exponent p must lie in [1, inf)");
  for (int i = 0; i < space.size(); ++i) {
    if (!std::isfinite(values[i])) throw InputError("non-finite vector value");
    if (!space.weight(i).is_finite() && values[i] != 0.0)
      throw InputError("vector must vanish on infinite-weight atoms");
  }
}

double lp_norm(const LpVector& f) {
  double acc = 0.0;
  for (int i = 0; i < f.space.size(); ++i) {
    if (!f.space.weight(i).is_finite()) continue;  // value is 0 there
    acc += std::pow(std::abs(f.values[i]), f.p) *
           f.space.weight(i).finite().to_double();
  }
  return std::pow(acc, 1.0 / f.p);
}

NullClass support_class(const LpVector& f, double eps) {
  Mask m = 0;
  for (int i = 0; i < f.space.size(); ++i)
    if (std::abs(f.values[i]) > eps) m |= bit(i);
  return class_of(f.space, m);
}

SphereVector::SphereVector(LpVector f, double tol) : vec(std::move(f)) {
  for (double v : vec.values)
    if (v < 0.0) throw InputError("sphere vector must be nonnegative");
  if (std::abs(lp_norm(vec) - 1.0) > tol)
    throw InputError("sphere vector must have unit norm");
}

namespace {

double restricted_norm_p(const SphereVector& f, Mask F) {
  double acc = 0.0;
  const auto& sp = f.space();
  for (int i = 0; i < sp.size(); ++i) {
    if (!(F & bit(i)) || !sp.weight(i).is_finite()) continue;
    acc += std::pow(f.values()[i], f.p()) * sp.weight(i).finite().to_double();
  }
  return acc;  // ||f|_F||_p^p
}

}  // namespace

SphereVector nearest_restricted(const SphereVector& f, Mask F) {
  f.space().require_subset(F);
  double tp = restricted_norm_p(f, F);
  if (tp <= 0.0)
    throw PreconditionError(
        "restriction has zero norm: no minimizer exists (distance 2^{1/p})");
  double t = std::pow(tp, 1.0 / f.p());
  std::vector<double> v(f.space().size(), 0.0);
  for (int i = 0; i < f.space().size(); ++i)
    if (F & bit(i)) v[i] = f.values()[i] / t;
  return SphereVector(LpVector(f.space(), std::move(v), f.p()), 1e-9);
}

double dist_restricted_sphere(const SphereVector& f, Mask F) {
  f.space().require_subset(F);
  const double p = f.p();
  double tp = restricted_norm_p(f, F);
  if (tp <= 0.0) return std::pow(2.0, 1.0 / p);
  // Normalize by the actual total mass: the raw sphere tolerance would
  // otherwise be amplified by the p-th root near t = 1.
  double total = restricted_norm_p(f, f.space().all());
  tp = std::min(tp / total, 1.0);
  double t = std::pow(tp, 1.0 / p);
  double inner = 1.0 - tp + std::pow(std::max(1.0 - t, 0.0), p);
  return std::pow(std::max(inner, 0.0), 1.0 / p);
}

OracleDistance dist_oracle_bruteforce(const SphereVector& f, Mask F,
                                      const DescentBudget& budget) {
  const auto& sp = f.space();
  sp.require_subset(F);
  const double p = f.p();

  std::vector<int> idx;  // coordinates of the restricted sphere
  for (int i = 0; i < sp.size(); ++i)
    if ((F & bit(i)) && sp.weight(i).is_finite() &&
        sp.weight(i).is_positive())
      idx.push_back(i);
  if (idx.empty())
    throw PreconditionError("restricted positive sphere is empty");
  const int k = (int)idx.size();
  std::vector<double> w(k);
  for (int j = 0; j < k; ++j) w[j] = sp.weight(idx[j]).finite().to_double();

  // Mass of f outside the restricted coordinates, a constant offset.
  double off = 0.0;
  for (int i = 0; i < sp.size(); ++i) {
    bool in = std::find(idx.begin(), idx.end(), i) != idx.end();
    if (!in && sp.weight(i).is_finite())
      off += std::pow(f.values()[i], p) * sp.weight(i).finite().to_double();
  }

  auto objective_p = [&](const std::vector<double>& g) {
    double acc = off;
    for (int j = 0; j < k; ++j)
      acc += std::pow(std::abs(f.values()[idx[j]] - g[j]), p) * w[j];
    return acc;
  };
  auto normalize = [&](std::vector<double>& g) {
    double acc = 0.0;
    for (int j = 0; j < k; ++j) acc += std::pow(g[j], p) * w[j];
    if (acc <= 0.0) {
      g.assign(k, 0.0);
      g[0] = std::pow(1.0 / w[0], 1.0 / p);
      return;
    }
    double s = std::pow(acc, -1.0 / p);
    for (double& v : g) v *= s;
  };

  std::mt19937_64 rng(budget.seed);
  std::uniform_real_distribution<double> unif(0.0, 1.0);

  double best = std::numeric_limits<double>::infinity();
  std::vector<double> best_g(k, 0.0);
  bool converged = false;

  auto descend = [&](std::vector<double> g) {
    normalize(g);
    double cur = objective_p(g);
    double step = 0.5;
    for (int it = 0; it < budget.max_iters; ++it) {
      std::vector<double> grad(k);
      for (int j = 0; j < k; ++j) {
        double d = f.values()[idx[j]] - g[j];
        double mag = std::abs(d);
        grad[j] = -p * (d >= 0 ? 1.0 : -1.0) *
                  (p == 1.0 ? 1.0 : std::pow(mag, p - 1.0)) * w[j];
      }
      bool improved = false;
      while (step > 1e-12) {
        std::vector<double> cand(k);
        for (int j = 0; j < k; ++j) cand[j] = std::max(0.0, g[j] - step * grad[j]);
        normalize(cand);
        double val = objective_p(cand);
        if (val < cur - 1e-16) {
          g = std::move(cand);
          cur = val;
          improved = true;
          step *= 1.5;
          break;
        }
        step *= 0.5;
      }
      if (!improved) break;
    }
    if (cur < best) {
      best = cur;
      best_g = g;
    }
    converged = true;
  };

  // Starts: uniform direction, coordinate spikes, random points.
  {
    std::vector<double> g(k, 1.0);
    descend(g);
  }
  for (int j = 0; j < k && j < 8; ++j) {
    std::vector<double> g(k, 0.0);
    g[j] = 1.0;
    descend(g);
  }
  for (int s = 0; s < budget.starts; ++s) {
    std::vector<double> g(k);
    for (int j = 0; j < k; ++j) g[j] = -std::log(1.0 - unif(rng)) + 1e-9;
    descend(g);
  }

  // Dense sweep over the mass simplex in low dimension, then refine by
  // descent from the best grid point.
  if (k <= 3 && budget.grid_resolution > 0) {
    const int r = budget.grid_resolution;
    auto try_mass = [&](const std::vector<double>& t) {
      std::vector<double> g(k);
      for (int j = 0; j < k; ++j) g[j] = std::pow(t[j] / w[j], 1.0 / p);
      descend(g);
    };
    if (k == 1) {
      try_mass({1.0});
    } else if (k == 2) {
      for (int a = 0; a <= r; ++a)
        try_mass({(double)a / r, (double)(r - a) / r});
    } else {
      for (int a = 0; a <= r; ++a)
        for (int b = 0; a + b <= r; ++b)
          try_mass({(double)a / r, (double)b / r, (double)(r - a - b) / r});
    }
  }

  // Polish on the mass simplex: pairwise mass transfers with a shrinking
  // step give high-precision convergence near the optimum.
  {
    std::vector<double> t(k);
    for (int j = 0; j < k; ++j) t[j] = std::pow(best_g[j], p) * w[j];
    auto eval_mass = [&](const std::vector<double>& tt) {
      std::vector<double> g(k);
      for (int j = 0; j < k; ++j) g[j] = std::pow(tt[j] / w[j], 1.0 / p);
      return objective_p(g);
    };
    double cur = eval_mass(t);
    for (int sweep = 0; sweep < 80; ++sweep) {
      double before = cur;
      for (int i = 0; i < k; ++i)
        for (int j = 0; j < k; ++j) {
          if (i == j) continue;
          // Move s mass from coordinate j to i; ternary search on s.
          double lo = -t[i], hi = t[j];
          auto phi = [&](double s) {
            std::vector<double> tt = t;
            tt[i] = std::max(0.0, tt[i] + s);
            tt[j] = std::max(0.0, tt[j] - s);
            return eval_mass(tt);
          };
          for (int it = 0; it < 120 && hi - lo > 1e-15; ++it) {
            double m1 = lo + (hi - lo) / 3, m2 = hi - (hi - lo) / 3;
            if (phi(m1) <= phi(m2)) hi = m2; else lo = m1;
          }
          double s = (lo + hi) / 2;
          double val = phi(s);
          if (val < cur) {
            t[i] = std::max(0.0, t[i] + s);
            t[j] = std::max(0.0, t[j] - s);
            cur = val;
          }
        }
      if (before - cur < 1e-16) break;
    }
    best = std::min(best, cur);
  }

  return {std::pow(best, 1.0 / p), converged};
}

}  // namespace sphereiso
