#include "sphereiso/lamperti.hpp"

#include <cmath>
#include <random>

namespace sphereiso {

LampertiOperator canonical_weight(const RegularSetIso& iso, double p) {
  if (!(p >= 1.0) || std::isinf(p))
    throw InputError("exponent p must lie in [1, inf)");
  const auto& cod = iso.codomain();
  LampertiOperator T;
  T.iso = iso;
  T.p = p;
  T.h.assign(cod.size(), 0.0);
  T.ratio.assign(cod.size(), Rat(0));
  for (int y = 0; y < cod.size(); ++y) {
    if (iso.preimage_atom(y) < 0) continue;
    Mass push = pushforward_measure(iso, bit(y));
    const Mass& ny = cod.weight(y);
    if (ny.is_zero()) {
      if (push.is_positive())
        throw PreconditionError(
            "pushforward not absolutely continuous at atom " + cod.id(y));
      continue;
    }
    T.ratio[y] = push.finite() / ny.finite();
    T.h[y] = std::pow(T.ratio[y].to_double(), 1.0 / p);
  }
  return T;
}

LampertiOperator with_weight(const RegularSetIso& iso, std::vector<double> h,
                             double p) {
  if ((int)h.size() != iso.codomain().size())
    throw InputError("weight size must equal codomain atom count");
  LampertiOperator T;
  T.iso = iso;
  T.p = p;
  T.h = std::move(h);
  T.ratio.assign(T.h.size(), Rat(0));
  for (std::size_t y = 0; y < T.h.size(); ++y) {
    if (T.h[y] < 0.0) throw InputError("weight must be nonnegative");
    T.ratio[y] = Rat::from_double(std::pow(T.h[y], p));
  }
  return T;
}

LpVector lamperti_apply(const LampertiOperator& T, const LpVector& f) {
  if (f.space.size() != T.domain().size() || f.space.ids() != T.domain().ids())
    throw InputError("vector lives on a different space than the operator");
  if (f.p != T.p) throw InputError("exponent mismatch");
  const auto& cod = T.codomain();
  std::vector<double> out(cod.size(), 0.0);
  for (int y = 0; y < cod.size(); ++y) {
    int x = T.iso.preimage_atom(y);
    if (x >= 0) out[y] = f.values[x] * T.h[y];
  }
  return LpVector(cod, std::move(out), T.p);
}

IsometryCertificate check_isometry(const LampertiOperator& T, int samples,
                                   std::uint64_t seed, double tol) {
  IsometryCertificate cert;
  const auto& dom = T.domain();
  const auto& cod = T.codomain();

  // Atomwise change of measure: h(y)^p nu(y) = mass of the preimage atom.
  for (int y = 0; y < cod.size(); ++y) {
    int x = T.iso.preimage_atom(y);
    if (x < 0) continue;
    if (!(T.h[y] > 0.0)) {
      cert.pass = false;
      cert.detail = "weight vanishes on image atom " + cod.id(y);
      return cert;
    }
    double lhs = std::pow(T.h[y], T.p) * cod.weight(y).finite().to_double();
    double rhs = dom.weight(x).finite().to_double();
    if (std::abs(lhs - rhs) > tol * std::max(1.0, rhs)) {
      cert.pass = false;
      cert.detail = "change-of-measure identity fails at atom " + cod.id(y);
      return cert;
    }
  }

  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unif(-1.0, 1.0);
  auto random_vec = [&](bool positive) {
    std::vector<double> v(dom.size(), 0.0);
    for (int i = 0; i < dom.size(); ++i) {
      if (!dom.weight(i).is_finite()) continue;
      double r = unif(rng);
      v[i] = positive ? std::abs(r) : r;
    }
    return LpVector(dom, std::move(v), T.p);
  };

  for (int s = 0; s < samples; ++s) {
    LpVector f = random_vec(s % 2 == 0);
    double a = lp_norm(f), b = lp_norm(lamperti_apply(T, f));
    if (std::abs(a - b) > tol * std::max(1.0, a)) {
      cert.pass = false;
      cert.detail = "norm not preserved on sample " + std::to_string(s);
      return cert;
    }
  }

  // Order preservation on pairs, both directions.
  Mask pos = dom.positive_atoms() & dom.finite_atoms();
  auto leq_vec = [&](const LpVector& a, const LpVector& b, Mask rel) {
    for (int i = 0; i < (int)a.values.size(); ++i)
      if ((rel & bit(i)) && a.values[i] > b.values[i] + 1e-15) return false;
    return true;
  };
  Mask cod_pos = cod.positive_atoms() & cod.finite_atoms();
  for (int s = 0; s < samples / 2; ++s) {
    LpVector f = random_vec(false), g = random_vec(false);
    bool before = leq_vec(f, g, pos);
    bool after = leq_vec(lamperti_apply(T, f), lamperti_apply(T, g), cod_pos);
    if (before != after) {
      cert.pass = false;
      cert.detail = "order not preserved on pair " + std::to_string(s);
      return cert;
    }
  }
  return cert;
}

}  // namespace sphereiso
