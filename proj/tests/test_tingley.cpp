#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <random>

#include "doctest.h"
#include "sphereiso/subprocess.hpp"
#include "sphereiso/tingley.hpp"

using namespace sphereiso;

namespace {

LampertiOperator swap_example(double p) {
  auto mu = FiniteMeasureSpace({"a", "b"}, {Mass(1), Mass(1)});
  auto nu = FiniteMeasureSpace({"a", "b"}, {Mass(2), Mass(Rat(1, 2))});
  return canonical_weight(RegularSetIso::build(mu, nu, {1, 0}), p);
}

LampertiOperator random_planted(int n, double p, std::mt19937_64& rng) {
  auto rand_weight = [&] { return Mass(Rat((long long)(rng() % 9) + 1, (long long)(rng() % 4) + 1)); };
  std::vector<Mass> mu_w, nu_w;
  for (int i = 0; i < n; ++i) mu_w.push_back(rand_weight());
  for (int i = 0; i < n; ++i) nu_w.push_back(rand_weight());
  std::vector<int> perm(n);
  for (int i = 0; i < n; ++i) perm[i] = i;
  std::shuffle(perm.begin(), perm.end(), rng);
  auto mu = FiniteMeasureSpace::indexed(mu_w);
  auto nu = FiniteMeasureSpace::indexed(nu_w);
  return canonical_weight(RegularSetIso::build(mu, nu, perm), p);
}

SphereVector unit_indicator(const FiniteMeasureSpace& sp, double p, int atom) {
  std::vector<double> v(sp.size(), 0.0);
  v[atom] = std::pow(1.0 / sp.weight(atom).finite().to_double(), 1.0 / p);
  return SphereVector(LpVector(sp, std::move(v), p), 1e-9);
}

}  // namespace

TEST_CASE("round trip on the swap example") {
  auto T = swap_example(1.0);
  auto rep = extract(plant_oracle(T));
  REQUIRE(rep.verdict == ExtractionReport::Verdict::extendable);
  REQUIRE(rep.recovered.has_value());
  CHECK(rep.recovered->iso.atom_map() == T.iso.atom_map());
  CHECK(rep.recovered->ratio[0] == Rat(1, 2));
  CHECK(rep.recovered->ratio[1] == Rat(2));
  CHECK(rep.recovered->h[0] == doctest::Approx(0.5));
  CHECK(rep.recovered->h[1] == doctest::Approx(2.0));
  CHECK(rep.agreement.max_deviation == 0.0);
}

TEST_CASE("identity oracle recovers the identity") {
  auto sp = FiniteMeasureSpace::indexed({Mass(1), Mass(2), Mass(3)});
  auto T = canonical_weight(RegularSetIso::identity(sp), 2.0);
  auto rep = extract(plant_oracle(T));
  REQUIRE(rep.verdict == ExtractionReport::Verdict::extendable);
  for (int i = 0; i < 3; ++i) {
    CHECK(rep.recovered->iso.atom_map()[i] == i);
    CHECK(rep.recovered->h[i] == doctest::Approx(1.0));
  }
}

TEST_CASE("exact round trip on random planted operators") {
  std::mt19937_64 rng(41);
  for (int t = 0; t < 10; ++t) {
    double p = std::vector<double>{1.0, 2.0, 3.0}[rng() % 3];
    auto T = random_planted(3 + (int)(rng() % 8), p, rng);
    auto rep = extract(plant_oracle(T));
    REQUIRE(rep.verdict == ExtractionReport::Verdict::extendable);
    CHECK(rep.recovered->iso.atom_map() == T.iso.atom_map());
    CHECK(rep.recovered->ratio == T.ratio);  // exact rational weights
    CHECK(rep.agreement.max_deviation <= 1e-9);
    CHECK(rep.agreement.max_dist_gap <= 1e-9);
  }
}

TEST_CASE("overlapping image supports are rejected with a witness") {
  auto sp = FiniteMeasureSpace::indexed({Mass(1), Mass(1)});
  SphereMapOracle bad;
  bad.dom = sp;
  bad.cod = sp;
  bad.p = 2.0;
  double r = 1.0 / std::sqrt(2.0);
  bad.fn = [sp, r](const SphereVector&) {
    return LpVector(sp, {r, r}, 2.0);  // everything lands on the diagonal
  };
  auto rep = extract(bad);
  CHECK(rep.verdict == ExtractionReport::Verdict::rejected);
  CHECK(rep.witness.find("single atom") != std::string::npos);

  // Atomic but overlapping images.
  SphereMapOracle bad2 = bad;
  bad2.fn = [sp](const SphereVector&) { return LpVector(sp, {1, 0}, 2.0); };
  auto rep2 = extract(bad2);
  CHECK(rep2.verdict == ExtractionReport::Verdict::rejected);
  CHECK(rep2.witness.find("overlap") != std::string::npos);
}

TEST_CASE("perturbed oracles are rejected with a deviation witness") {
  std::mt19937_64 rng(43);
  for (int t = 0; t < 10; ++t) {
    double p = std::vector<double>{1.0, 2.0}[rng() % 2];
    auto T = random_planted(4 + (int)(rng() % 5), p, rng);
    int atom = (int)(rng() % T.codomain().size());
    auto rep = extract(perturb_oracle(T, atom, 0.01));
    CHECK(rep.verdict == ExtractionReport::Verdict::rejected);
    CHECK(std::max(rep.agreement.max_deviation, rep.agreement.max_dist_gap) >
          1e-3);
  }
}

TEST_CASE("oracle contract violations surface as errors") {
  auto sp = FiniteMeasureSpace::indexed({Mass(1), Mass(1)});
  SphereMapOracle off;
  off.dom = sp;
  off.cod = sp;
  off.p = 2.0;
  off.fn = [sp](const SphereVector&) {
    return LpVector(sp, {0.5, 0.5}, 2.0);  // norm < 1
  };
  CHECK_THROWS_AS(off.eval(unit_indicator(sp, 2.0, 0)), PreconditionError);
}

TEST_CASE("planted oracles preserve the sphere metric") {
  std::mt19937_64 rng(47);
  auto T = random_planted(6, 2.0, rng);
  auto oracle = plant_oracle(T);
  const auto& dom = T.domain();
  for (int t = 0; t < 20; ++t) {
    int a = (int)(rng() % dom.size()), b = (int)(rng() % dom.size());
    auto f = unit_indicator(dom, 2.0, a);
    auto g = unit_indicator(dom, 2.0, b);
    auto fi = oracle.eval(f), gi = oracle.eval(g);
    std::vector<double> d1(dom.size()), d2(dom.size());
    for (int i = 0; i < dom.size(); ++i) {
      d1[i] = f.values()[i] - g.values()[i];
      d2[i] = fi.values()[i] - gi.values()[i];
    }
    CHECK(lp_norm(LpVector(dom, d1, 2.0)) ==
          doctest::Approx(lp_norm(LpVector(T.codomain(), d2, 2.0))).epsilon(1e-12));
  }
}

TEST_CASE("operators agreeing on all probes are atomwise equal") {
  std::mt19937_64 rng(53);
  auto T = random_planted(5, 2.0, rng);
  auto oracle = plant_oracle(T);
  // Any distinct operator shows a deviation on indicator or mixture probes.
  auto T2 = T;
  T2.h[T.iso.atom_map()[0]] *= 1.0 + 1e-6;
  auto rep = verify_agreement(oracle, T2, 100);
  CHECK(rep.max_deviation > 0.0);
  auto rep_same = verify_agreement(oracle, T, 100);
  CHECK(rep_same.max_deviation == 0.0);
}

TEST_CASE("linear extension splits into positive and negative parts") {
  auto T = swap_example(2.0);
  std::mt19937_64 rng(59);
  std::uniform_real_distribution<double> unif(-1.0, 1.0);
  for (int t = 0; t < 100; ++t) {
    LpVector f(T.domain(), {unif(rng), unif(rng)}, 2.0);
    auto ext = extend_linear(T, f);
    auto direct = lamperti_apply(T, f);
    for (int i = 0; i < 2; ++i)
      CHECK(ext.values[i] == doctest::Approx(direct.values[i]));
    CHECK(lp_norm(ext) == doctest::Approx(lp_norm(f)).epsilon(1e-12));
  }
  // indicator images follow the composition rule
  auto ind = unit_indicator(T.domain(), 2.0, 0);
  auto img = extend_linear(T, ind.vec);
  CHECK(support_class(img).canonical == bit(T.iso.atom_map()[0]));
}

TEST_CASE("support equivariance of the recovered operator") {
  std::mt19937_64 rng(61);
  auto T = random_planted(6, 1.0, rng);
  auto rep = extract(plant_oracle(T));
  REQUIRE(rep.verdict == ExtractionReport::Verdict::extendable);
  for (const auto& probe : rep.probe_log)
    CHECK(probe.image_support == bit(T.iso.atom_map()[probe.atom]));
}

TEST_CASE("subprocess oracle speaks the line protocol") {
  // `cat` echoes each probe line: a well-formed identity oracle.
  auto sp = FiniteMeasureSpace::indexed({Mass(1), Mass(2)});
  auto oracle = subprocess_oracle(sp, sp, 2.0, {"/bin/cat"});
  auto rep = extract(oracle);
  REQUIRE(rep.verdict == ExtractionReport::Verdict::extendable);
  for (int i = 0; i < sp.size(); ++i)
    CHECK(rep.recovered->iso.atom_map()[i] == i);
}
