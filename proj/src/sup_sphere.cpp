#include "sphereiso/sup_sphere.hpp"

#include <algorithm>
#include <cmath>
#include <random>

namespace sphereiso {

SupVector::SupVector(std::vector<std::string> pts, std::vector<double> vals)
    : points(std::move(pts)), values(std::move(vals)) {
  if (points.size() != values.size())
    throw InputError("point / value count mismatch");
  if (points.size() > 64) throw InputError("at most 64 points supported");
  for (std::size_t i = 0; i < points.size(); ++i)
    for (std::size_t j = i + 1; j < points.size(); ++j)
      if (points[i] == points[j])
        throw InputError("duplicate point id: " + points[i]);
  for (double v : values)
    if (!(v >= 0.0 && v <= 1.0))
      throw InputError("values must lie in [0, 1]");
}

bool SupVector::on_sphere(double tol) const {
  double mx = 0.0;
  for (double v : values) mx = std::max(mx, v);
  return values.size() && mx >= 1.0 - tol;
}

SupFeatures features(const SupVector& f, double tol) {
  if (!f.on_sphere(tol)) throw InputError("function is not on the sup sphere");
  SupFeatures out;
  for (int i = 0; i < f.size(); ++i) {
    if (f.values[i] >= 1.0 - tol) out.peak |= bit(i);
    if (f.values[i] <= tol) out.zero |= bit(i);
  }
  out.in_P = out.zero == 0;
  return out;
}

namespace {
Mask full_mask(int n) { return n == 64 ? ~Mask{0} : (bit(n) - 1); }
}  // namespace

SharpFamily sharp_of_set(const std::vector<SupVector>& S, int n_points) {
  Mask all = full_mask(n_points);
  SharpFamily fam{all, all, false};
  for (const auto& g : S) {
    if (g.size() != n_points) throw InputError("mixed point sets in family");
    SupFeatures ft = features(g);
    fam.E &= all & ~ft.zero;
    fam.F &= all & ~ft.peak;
  }
  fam.empty = fam.E == 0;
  return fam;
}

SharpFamily sharp_of_family(const SharpFamily& fam, int n_points) {
  Mask all = full_mask(n_points);
  if (fam.empty || fam.E == 0) return {all, all, false};
  SharpFamily out;
  out.E = all & ~fam.F;
  // A one-point E cannot be avoided by a member's peak set, so peaks of
  // sharp members are unconstrained at that point.
  if (popcount(fam.E) == 1) out.E |= fam.E;
  out.F = all & ~fam.E;
  out.empty = out.E == 0;
  return out;
}

bool member_symbolic(const SupVector& f, const SharpFamily& fam) {
  if (fam.empty) return false;
  SupFeatures ft = features(f);
  return (ft.peak & ~fam.E) == 0 && (ft.zero & ~fam.F) == 0;
}

bool member_quantifier(const SupVector& f, const std::vector<SupVector>& S) {
  for (const auto& g : S) {
    double d = 0.0;
    for (int i = 0; i < f.size(); ++i)
      d = std::max(d, std::abs(f.values[i] - g.values[i]));
    if (!(d < 1.0)) return false;
  }
  return true;
}

double dist_to_Px(const SupVector& f, int x) {
  if (!f.on_sphere()) throw InputError("function is not on the sup sphere");
  if (x < 0 || x >= f.size()) throw InputError("point index out of range");
  return 1.0 - f.values[x];
}

double dist_to_Px_bruteforce(const SupVector& f, int x) {
  if (!f.on_sphere()) throw InputError("function is not on the sup sphere");
  // Members of the family take value 1 at x and stay positive; on a grid
  // with step 1/m the best match per point is the nearest level in
  // [1/m, 1]. Refine m until the value stabilizes.
  double best = 2.0;
  for (double m = 2.0; m <= 2147483648.0; m *= 2.0) {
    double d = 1.0 - f.values[x];
    for (int i = 0; i < f.size(); ++i) {
      if (i == x) continue;
      double level = std::round(f.values[i] * m);
      level = std::min(std::max(level, 1.0), m);
      d = std::max(d, std::abs(f.values[i] - level / m));
    }
    best = std::min(best, d);
    if (best <= 1.0 - f.values[x] + 1e-12) break;
  }
  return best;
}

SupVector SupOracle::eval(const SupVector& f) const {
  if (f.points != X) throw InputError("input lives on the wrong point set");
  SupVector out = fn(f);
  if (out.points != Y)
    throw PreconditionError("oracle output lives on the wrong point set");
  if (!out.on_sphere(1e-9))
    throw PreconditionError("oracle output is off the sup sphere");
  return out;
}

SupOracle plant_sup_oracle(std::vector<std::string> X, std::vector<int> sigma) {
  if (X.size() != sigma.size()) throw InputError("permutation size mismatch");
  SupOracle o;
  o.X = X;
  o.Y = X;
  o.fn = [sigma, Y = o.Y](const SupVector& f) {
    std::vector<double> out(sigma.size());
    for (std::size_t y = 0; y < sigma.size(); ++y)
      out[y] = f.values[sigma[y]];
    return SupVector(Y, std::move(out));
  };
  return o;
}

HomeoReport extract_homeo(const SupOracle& oracle, double tol,
                          std::uint64_t seed) {
  HomeoReport rep;
  const int n = (int)oracle.X.size();
  if ((int)oracle.Y.size() != n) {
    rep.witness = "point sets have different sizes";
    return rep;
  }
  std::vector<int> tau(n, -1);  // tau[x] = peak of the image of f_x
  for (int x = 0; x < n; ++x) {
    std::vector<double> v(n, 0.5);
    v[x] = 1.0;
    SupVector img = oracle.eval(SupVector(oracle.X, std::move(v)));
    SupFeatures ft = features(img);
    if (popcount(ft.peak) != 1) {
      rep.witness = "image of the probe at " + oracle.X[x] +
                    " does not peak at a single point";
      return rep;
    }
    tau[x] = __builtin_ctzll(ft.peak);
  }
  rep.sigma.assign(n, -1);
  for (int x = 0; x < n; ++x) {
    if (rep.sigma[tau[x]] != -1) {
      rep.witness = "recovered point map is not injective";
      rep.sigma.clear();
      return rep;
    }
    rep.sigma[tau[x]] = x;
  }

  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  std::uniform_int_distribution<int> pick(0, n - 1);
  for (int s = 0; s < 64; ++s) {
    std::vector<double> v(n);
    for (double& t : v) {
      t = unif(rng);
      if (s % 2 == 0) t = std::round(t * 4.0) / 4.0;  // grid sample
    }
    v[pick(rng)] = 1.0;
    SupVector f(oracle.X, std::move(v));
    SupVector img = oracle.eval(f);
    for (int y = 0; y < n; ++y)
      rep.max_deviation = std::max(
          rep.max_deviation, std::abs(img.values[y] - f.values[rep.sigma[y]]));
  }
  if (rep.max_deviation <= tol) {
    rep.accepted = true;
  } else {
    rep.witness = "composition check fails with deviation " +
                  std::to_string(rep.max_deviation);
  }
  return rep;
}

}  // namespace sphereiso
