#include "sphereiso/tingley.hpp"

#include <algorithm>
#include <cmath>
#include <random>

namespace sphereiso {

namespace {

std::vector<int> positive_finite_list(const FiniteMeasureSpace& sp) {
  std::vector<int> out;
  Mask m = sp.positive_finite_atoms();
  for (int i = 0; i < sp.size(); ++i)
    if (m & bit(i)) out.push_back(i);
  return out;
}

/// Sphere vector with prescribed p-mass on each atom (masses sum to 1).
SphereVector from_masses(const FiniteMeasureSpace& sp, double p,
                         const std::vector<std::pair<int, double>>& masses) {
  std::vector<double> v(sp.size(), 0.0);
  for (auto [i, m] : masses)
    v[i] = std::pow(m / sp.weight(i).finite().to_double(), 1.0 / p);
  return SphereVector(LpVector(sp, std::move(v), p), 1e-9);
}

SphereVector indicator_probe(const FiniteMeasureSpace& sp, double p, int atom) {
  return from_masses(sp, p, {{atom, 1.0}});
}

SphereVector random_probe(const FiniteMeasureSpace& sp, double p,
                          const std::vector<int>& idx, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  std::vector<std::pair<int, double>> masses;
  double total = 0.0;
  for (int i : idx) {
    double m = -std::log(1.0 - unif(rng)) + 1e-12;
    masses.emplace_back(i, m);
    total += m;
  }
  for (auto& [i, m] : masses) m /= total;
  return from_masses(sp, p, masses);
}

double deviation_norm(const LpVector& a, const LpVector& b) {
  std::vector<double> d(a.values.size());
  for (std::size_t i = 0; i < d.size(); ++i) d[i] = a.values[i] - b.values[i];
  return lp_norm(LpVector(a.space, std::move(d), a.p));
}

}  // namespace

SphereVector SphereMapOracle::eval(const SphereVector& f) const {
  LpVector out = fn(f);
  if (out.space.ids() != cod.ids())
    throw PreconditionError("oracle output lives on the wrong space");
  try {
    return SphereVector(std::move(out), contract_tol);
  } catch (const InputError& e) {
    throw PreconditionError(std::string("oracle contract violation: ") +
                            e.what());
  }
}

SphereMapOracle plant_oracle(const LampertiOperator& T) {
  SphereMapOracle o;
  o.dom = T.domain();
  o.cod = T.codomain();
  o.p = T.p;
  o.fn = [T](const SphereVector& f) { return lamperti_apply(T, f.vec); };
  return o;
}

SphereMapOracle perturb_oracle(const LampertiOperator& T, int cod_atom,
                               double delta) {
  SphereMapOracle o;
  o.dom = T.domain();
  o.cod = T.codomain();
  o.p = T.p;
  o.fn = [T, cod_atom, delta](const SphereVector& f) {
    LpVector g = lamperti_apply(T, f.vec);
    g.values[cod_atom] *= 1.0 + delta;
    double n = lp_norm(g);
    for (double& v : g.values) v /= n;
    return g;
  };
  return o;
}

LpVector extend_linear(const LampertiOperator& T, const LpVector& f) {
  std::vector<double> pos(f.values.size()), neg(f.values.size());
  for (std::size_t i = 0; i < f.values.size(); ++i) {
    pos[i] = std::max(f.values[i], 0.0);
    neg[i] = std::max(-f.values[i], 0.0);
  }
  LpVector a = lamperti_apply(T, LpVector(f.space, std::move(pos), f.p));
  LpVector b = lamperti_apply(T, LpVector(f.space, std::move(neg), f.p));
  for (std::size_t i = 0; i < a.values.size(); ++i) a.values[i] -= b.values[i];
  return a;
}

AgreementReport verify_agreement(const SphereMapOracle& oracle,
                                 const LampertiOperator& T, int n_samples,
                                 std::uint64_t seed) {
  AgreementReport rep;
  const auto& dom = oracle.dom;
  const auto& cod = oracle.cod;
  auto idx = positive_finite_list(dom);
  if (idx.empty()) return rep;

  std::vector<SphereVector> samples;
  for (int a : idx) samples.push_back(indicator_probe(dom, oracle.p, a));
  for (std::size_t i = 0; i < idx.size() && (int)samples.size() < n_samples;
       ++i)
    for (std::size_t j = i + 1;
         j < idx.size() && (int)samples.size() < n_samples; ++j)
      for (double t : {0.25, 0.5, 0.75}) {
        if ((int)samples.size() >= n_samples) break;
        samples.push_back(from_masses(dom, oracle.p,
                                      {{idx[i], t}, {idx[j], 1.0 - t}}));
      }
  std::mt19937_64 rng(mix_seed(seed, 0));
  int dense = std::max(32, n_samples - (int)samples.size());
  for (int s = 0; s < dense; ++s)
    samples.push_back(random_probe(dom, oracle.p, idx, rng));

  // Codomain subsets for the restricted-distance cross-check.
  std::vector<Mask> subsets;
  if (cod.size() <= 12) {
    for (Mask F = 1; F < (Mask(1) << cod.size()); ++F) subsets.push_back(F);
  } else {
    std::mt19937_64 srng(mix_seed(seed, 1));
    for (int s = 0; s < 64; ++s) subsets.push_back(srng() & cod.all());
  }

  int dist_checked = 0;
  for (const auto& f : samples) {
    SphereVector img = oracle.eval(f);
    LpVector tv = lamperti_apply(T, f.vec);
    rep.max_deviation = std::max(rep.max_deviation, deviation_norm(img.vec, tv));
    if (dist_checked < 8) {
      SphereVector tvs(tv, 1e-6);
      Mask posfin = cod.positive_finite_atoms();
      for (Mask F : subsets) {
        if ((F & posfin) == 0) continue;
        double gap = std::abs(dist_restricted_sphere(img, F) -
                              dist_restricted_sphere(tvs, F));
        rep.max_dist_gap = std::max(rep.max_dist_gap, gap);
      }
      ++dist_checked;
    }
    ++rep.samples_run;
  }
  return rep;
}

ExtractionReport extract(const SphereMapOracle& oracle, double tol,
                         int n_samples, std::uint64_t seed) {
  ExtractionReport rep;
  const auto& dom = oracle.dom;
  const auto& cod = oracle.cod;
  auto idx = positive_finite_list(dom);
  if (idx.empty()) {
    rep.witness = "domain positive sphere is empty";
    return rep;
  }

  std::vector<int> atom_map(dom.size(), -1);
  Mask covered = 0;
  for (int a : idx) {
    SphereVector img = oracle.eval(indicator_probe(dom, oracle.p, a));
    Mask supp = support_class(img.vec, 1e-9).canonical;
    rep.probe_log.push_back({a, supp});
    if (popcount(supp) != 1) {
      rep.witness = "image of indicator " + dom.id(a) +
                    " is not supported on a single atom";
      return rep;
    }
    if (supp & covered) {
      rep.witness = "image supports overlap at indicator " + dom.id(a);
      return rep;
    }
    covered |= supp;
    atom_map[a] = __builtin_ctzll(supp);
  }
  if (covered != cod.positive_finite_atoms()) {
    rep.witness = "indicator images do not exhaust the codomain atoms";
    return rep;
  }

  LampertiOperator T;
  try {
    RegularSetIso iso = RegularSetIso::build(dom, cod, atom_map);
    T = canonical_weight(iso, oracle.p);
  } catch (const std::runtime_error& e) {
    rep.witness = std::string("recovered map is not a set isomorphism: ") +
                  e.what();
    return rep;
  }

  rep.agreement = verify_agreement(oracle, T, n_samples, seed);
  rep.recovered = T;
  if (rep.agreement.max_deviation <= tol && rep.agreement.max_dist_gap <= tol) {
    rep.verdict = ExtractionReport::Verdict::extendable;
  } else {
    rep.verdict = ExtractionReport::Verdict::rejected;
    rep.witness = "agreement deviation " +
                  std::to_string(std::max(rep.agreement.max_deviation,
                                          rep.agreement.max_dist_gap)) +
                  " exceeds tolerance";
  }
  return rep;
}

}  // namespace sphereiso
