#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <iostream>
#include <random>
#include <sstream>
#include <thread>

#include "CLI11.hpp"
#include "sphereiso/json_io.hpp"
#include "sphereiso/subprocess.hpp"
#include "sphereiso/sup_sphere.hpp"
#include "sphereiso/tingley.hpp"

using namespace sphereiso;

namespace {

int worker_count() {
  int hw = (int)std::thread::hardware_concurrency();
  if (hw < 1) hw = 1;
  if (const char* env = std::getenv("SPHEREISO_WORKERS")) {
    int v = std::atoi(env);
    if (v >= 1) return std::min(v, hw);
  }
  return hw;
}

/// Runs fn(i) for i in [0, n) on the worker pool; fn must be pure per i.
void parallel_for(int n, const std::function<void(int)>& fn) {
  int workers = std::min(worker_count(), n > 0 ? n : 1);
  if (workers <= 1) {
    for (int i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<int> next{0};
  std::vector<std::thread> pool;
  for (int w = 0; w < workers; ++w)
    pool.emplace_back([&] {
      for (int i = next++; i < n; i = next++) fn(i);
    });
  for (auto& t : pool) t.join();
}

struct Report {
  json doc;
  bool pass{true};
  std::chrono::steady_clock::time_point start =
      std::chrono::steady_clock::now();

  Report(const std::string& command, json config) {
    doc["schema_version"] = 1;
    doc["command"] = command;
    doc["config"] = std::move(config);
    doc["results"] = json::array();
  }

  int finish(const std::string& out_path) {
    doc["pass"] = pass;
    doc["wall_time_ms"] =
        std::chrono::duration_cast<std::chrono::milliseconds>(
            std::chrono::steady_clock::now() - start)
            .count();
    if (out_path.empty())
      std::cout << doc.dump(2) << "\n";
    else
      save_json_file(out_path, doc);
    return pass ? 0 : 1;
  }
};

FiniteMeasureSpace random_space(int atoms, std::mt19937_64& rng,
                                bool allow_null = false) {
  std::vector<std::string> ids;
  std::vector<Mass> w;
  for (int i = 0; i < atoms; ++i) {
    ids.push_back("a" + std::to_string(i));
    if (allow_null && rng() % 8 == 0)
      w.push_back(Mass(0));
    else
      w.push_back(Mass(Rat((long long)(rng() % 12) + 1,
                           (long long)(rng() % 5) + 1)));
  }
  return FiniteMeasureSpace(std::move(ids), std::move(w));
}

LampertiOperator random_operator(int atoms, double p, std::mt19937_64& rng) {
  auto mu = random_space(atoms, rng);
  auto nu = random_space(atoms, rng);
  std::vector<int> perm(atoms);
  for (int i = 0; i < atoms; ++i) perm[i] = i;
  std::shuffle(perm.begin(), perm.end(), rng);
  return canonical_weight(RegularSetIso::build(mu, nu, perm), p);
}

SphereVector random_sphere_vec(const FiniteMeasureSpace& sp, double p,
                               std::mt19937_64& rng) {
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  std::vector<double> v(sp.size(), 0.0);
  double acc = 0.0;
  for (int i = 0; i < sp.size(); ++i) {
    if (!(sp.positive_finite_atoms() & bit(i))) continue;
    double m = -std::log(1.0 - unif(rng)) + 1e-12;
    v[i] = m;
    acc += m * sp.weight(i).finite().to_double();
  }
  for (int i = 0; i < sp.size(); ++i)
    if (v[i] > 0.0) v[i] = std::pow(v[i] / acc, 1.0 / p);
  return SphereVector(LpVector(sp, std::move(v), p), 1e-9);
}

SphereMapOracle oracle_from_dir(const std::string& dir,
                                const std::vector<std::string>& oracle_cmd) {
  auto dom = space_from_json(load_json_file(dir + "/domain.json"));
  auto cod = space_from_json(load_json_file(dir + "/codomain.json"));
  auto desc = load_json_file(dir + "/oracle.json");
  double p = desc.at("p").get<double>();
  if (!oracle_cmd.empty()) return subprocess_oracle(dom, cod, p, oracle_cmd);
  auto T = operator_from_json(dom, cod,
                              load_json_file(dir + "/operator.json"));
  std::string type = desc.at("type").get<std::string>();
  if (type == "planted") return plant_oracle(T);
  if (type == "perturbed")
    return perturb_oracle(T, cod.index_of(desc.at("cod_atom").get<std::string>()),
                          desc.at("delta").get<double>());
  throw ConfigError("unknown oracle type: " + type);
}

int cmd_gen(const std::string& out_dir, int atoms, double p,
            std::uint64_t seed, const std::string& adversarial) {
  std::mt19937_64 rng(mix_seed(seed, 0));
  auto T = random_operator(atoms, p, rng);
  save_json_file(out_dir + "/domain.json", space_to_json(T.domain()));
  save_json_file(out_dir + "/codomain.json", space_to_json(T.codomain()));
  save_json_file(out_dir + "/operator.json", operator_to_json(T));
  json desc{{"type", "planted"}, {"p", p}};
  if (!adversarial.empty()) {
    auto colon = adversarial.find(':');
    if (adversarial.substr(0, colon) != "perturb")
      throw ConfigError("unknown adversarial mode: " + adversarial);
    desc["type"] = "perturbed";
    desc["delta"] = std::stod(adversarial.substr(colon + 1));
    desc["cod_atom"] = T.codomain().id((int)(rng() % atoms));
  }
  save_json_file(out_dir + "/oracle.json", desc);
  return 0;
}

int cmd_extract(const std::string& dir,
                const std::vector<std::string>& oracle_cmd, double tol,
                int samples, std::uint64_t seed, const std::string& out) {
  Report rep("extract", {{"dir", dir}, {"tol", tol}, {"samples", samples},
                         {"seed", seed}});
  auto oracle = oracle_from_dir(dir, oracle_cmd);
  auto desc = load_json_file(dir + "/oracle.json");
  bool expect_reject = desc.at("type") == "perturbed";
  auto ex = extract(oracle, tol, samples, seed);
  bool extendable = ex.verdict == ExtractionReport::Verdict::extendable;
  json r{{"verdict", extendable ? "extendable" : "rejected"},
         {"max_deviation", ex.agreement.max_deviation},
         {"max_dist_gap", ex.agreement.max_dist_gap},
         {"probes", ex.probe_log.size()}};
  if (!extendable) r["witness"] = ex.witness;
  if (extendable && ex.recovered)
    r["recovered"] = operator_to_json(*ex.recovered);
  rep.doc["results"].push_back(r);
  rep.pass = extendable != expect_reject;
  return rep.finish(out);
}

int cmd_verify(const std::string& dir, int samples, std::uint64_t seed,
               const std::string& out) {
  Report rep("verify", {{"dir", dir}, {"samples", samples}, {"seed", seed}});
  auto dom = space_from_json(load_json_file(dir + "/domain.json"));
  auto cod = space_from_json(load_json_file(dir + "/codomain.json"));
  auto T = operator_from_json(dom, cod,
                              load_json_file(dir + "/operator.json"));
  auto cert = check_isometry(T, samples, seed);
  rep.doc["results"].push_back(
      {{"isometry", cert.pass}, {"detail", cert.detail}});
  rep.pass = cert.pass;
  return rep.finish(out);
}

int cmd_rn(int max_atoms, const std::string& out) {
  Report rep("rn", {{"exhaustive", max_atoms}});
  const std::vector<Mass> grid = {Mass(0), Mass(Rat(1, 2)), Mass(1), Mass(2),
                                  Mass::infinity()};
  long cases = 0, mismatches = 0;
  for (int n = 1; n <= max_atoms; ++n) {
    // enumerate weight assignments and partitions
    std::vector<int> widx(n, 0);
    while (true) {
      std::vector<Mass> w;
      for (int i = 0; i < n; ++i) w.push_back(grid[widx[i]]);
      auto sp = FiniteMeasureSpace::indexed(w);
      std::vector<int> assign(n, 0);
      auto rec = [&](auto&& self, int i, int maxb) -> void {
        if (i < n) {
          for (int b = 0; b <= maxb; ++b) {
            assign[i] = b;
            self(self, i + 1, b == maxb ? maxb + 1 : maxb);
          }
          return;
        }
        int nb = 0;
        for (int j = 0; j < n; ++j) nb = std::max(nb, assign[j] + 1);
        std::vector<Mask> blocks(nb, 0);
        for (int j = 0; j < n; ++j) blocks[assign[j]] |= bit(j);
        std::vector<int> lidx(nb, 0);
        while (true) {
          std::vector<Mass> lam;
          for (int k = 0; k < nb; ++k) lam.push_back(grid[lidx[k]]);
          SubSigmaAlgebra c(sp, blocks, lam);
          auto cond = rn_conditions(c);
          for (RNScope scope : {RNScope::sigma_only, RNScope::all_sets}) {
            auto res = rn_solve_bruteforce(c, scope);
            ++cases;
            const auto& exi = cond.existence(scope);
            const auto& uni = cond.uniqueness(scope);
            if (exi.kind == RNPrediction::Kind::iff &&
                exi.value != res.feasible)
              ++mismatches;
            if (exi.kind == RNPrediction::Kind::sufficient && exi.value &&
                !res.feasible)
              ++mismatches;
            if (res.feasible && uni.kind == RNPrediction::Kind::iff &&
                uni.value != res.solution->unique_mod_null)
              ++mismatches;
          }
          int k = 0;
          while (k < nb && ++lidx[k] == (int)grid.size()) lidx[k++] = 0;
          if (k == nb) break;
        }
      };
      rec(rec, 0, 0);
      int i = 0;
      while (i < n && ++widx[i] == (int)grid.size()) widx[i++] = 0;
      if (i == n) break;
    }
  }
  rep.doc["results"].push_back({{"cases", cases}, {"mismatches", mismatches}});
  rep.pass = mismatches == 0;
  return rep.finish(out);
}

int cmd_dist(int trials, std::uint64_t seed, double tol,
             const std::string& out) {
  Report rep("dist", {{"trials", trials}, {"seed", seed}, {"tol", tol}});
  std::vector<json> results(trials);
  std::atomic<bool> ok{true};
  parallel_for(trials, [&](int t) {
    std::mt19937_64 rng(mix_seed(seed, t));
    const double ps[] = {1.0, 1.5, 2.0, 3.0};
    double p = ps[rng() % 4];
    auto sp = random_space(2 + (int)(rng() % 7), rng, true);
    if (sp.positive_finite_atoms() == 0) {
      results[t] = {{"trial", t}, {"skipped", true}};
      return;
    }
    auto f = random_sphere_vec(sp, p, rng);
    Mask F = rng() & sp.all();
    if ((F & sp.positive_finite_atoms()) == 0)
      F = sp.positive_finite_atoms();
    DescentBudget budget;
    budget.seed = mix_seed(seed, t + 1);
    double gap = std::abs(dist_oracle_bruteforce(f, F, budget).value -
                          dist_restricted_sphere(f, F));
    results[t] = {{"trial", t}, {"gap", gap}};
    if (gap > tol) ok = false;
  });
  for (auto& r : results) rep.doc["results"].push_back(std::move(r));
  rep.pass = ok;
  return rep.finish(out);
}

int cmd_sharp(int n_points, int trials, std::uint64_t seed,
              const std::string& out) {
  Report rep("sharp", {{"points", n_points}, {"trials", trials},
                       {"seed", seed}});
  std::vector<std::string> pts;
  for (int i = 0; i < n_points; ++i) pts.push_back("x" + std::to_string(i));
  const double levels[] = {0.0, 0.25, 0.5, 0.75, 1.0};
  std::vector<SupVector> sphere;
  {
    std::vector<int> idx(n_points, 0);
    while (true) {
      bool peak = false;
      for (int i : idx) peak = peak || i == 4;
      if (peak) {
        std::vector<double> v(n_points);
        for (int i = 0; i < n_points; ++i) v[i] = levels[idx[i]];
        sphere.emplace_back(pts, v);
      }
      int i = 0;
      while (i < n_points && ++idx[i] == 5) idx[i++] = 0;
      if (i == n_points) break;
    }
  }
  std::mt19937_64 rng(seed);
  long checked = 0, failures = 0;
  for (int t = 0; t < trials; ++t) {
    int sz = (int)(rng() % 3) + 1;
    std::vector<SupVector> S;
    for (int i = 0; i < sz; ++i) S.push_back(sphere[rng() % sphere.size()]);
    auto fam = sharp_of_set(S, n_points);
    for (const auto& f : sphere) {
      ++checked;
      if (member_quantifier(f, S) != member_symbolic(f, fam)) ++failures;
    }
  }
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  for (int t = 0; t < trials; ++t) {
    std::vector<double> v(n_points);
    for (double& x : v) x = unif(rng);
    v[rng() % n_points] = 1.0;
    SupVector f(pts, v);
    int x = (int)(rng() % n_points);
    ++checked;
    if (std::abs(dist_to_Px(f, x) - dist_to_Px_bruteforce(f, x)) > 1e-9)
      ++failures;
  }
  rep.doc["results"].push_back({{"checked", checked}, {"failures", failures}});
  rep.pass = failures == 0;
  return rep.finish(out);
}

int cmd_homeo(int n_points, int trials, std::uint64_t seed,
              const std::string& out) {
  Report rep("homeo", {{"points", n_points}, {"trials", trials},
                       {"seed", seed}});
  std::vector<json> results(trials);
  std::atomic<bool> ok{true};
  parallel_for(trials, [&](int t) {
    std::mt19937_64 rng(mix_seed(seed, t));
    int n = 2 + (int)(rng() % std::max(1, n_points - 1));
    std::vector<std::string> pts;
    for (int i = 0; i < n; ++i) pts.push_back("x" + std::to_string(i));
    std::vector<int> sigma(n);
    for (int i = 0; i < n; ++i) sigma[i] = i;
    std::shuffle(sigma.begin(), sigma.end(), rng);
    auto got = extract_homeo(plant_sup_oracle(pts, sigma), 1e-9,
                             mix_seed(seed, t + 1));
    bool pass = got.accepted && got.sigma == sigma && got.max_deviation == 0.0;
    results[t] = {{"trial", t}, {"recovered", pass}};
    if (!pass) ok = false;
  });
  for (auto& r : results) rep.doc["results"].push_back(std::move(r));
  rep.pass = ok;
  return rep.finish(out);
}

int cmd_serve(const std::string& dir) {
  auto dom = space_from_json(load_json_file(dir + "/domain.json"));
  auto cod = space_from_json(load_json_file(dir + "/codomain.json"));
  auto T = operator_from_json(dom, cod,
                              load_json_file(dir + "/operator.json"));
  std::string line;
  while (std::getline(std::cin, line)) {
    if (line.empty()) continue;
    auto f = vector_from_json(dom, json::parse(line));
    std::cout << vector_to_json(lamperti_apply(T, f)).dump() << "\n"
              << std::flush;
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"positive-sphere isometry toolkit"};
  app.require_subcommand(1);

  std::uint64_t seed = 1;
  int atoms = 8, trials = 100, samples = 100, points = 4;
  double p = 2.0, tol = 1e-9;
  std::string out, dir, mode = "exact", adversarial, oracle_cmd_str;

  auto* gen = app.add_subcommand("gen", "generate instance files");
  gen->add_option("--atoms", atoms);
  gen->add_option("--p", p);
  gen->add_option("--seed", seed);
  gen->add_option("--mode", mode)->check(CLI::IsMember({"exact", "float"}));
  gen->add_option("--adversarial", adversarial);
  gen->add_option("--out", out)->required();

  auto* run = app.add_subcommand("run", "run an experiment");
  run->require_subcommand(1);
  auto add_common = [&](CLI::App* c) {
    c->add_option("--seed", seed);
    c->add_option("--tol", tol);
    c->add_option("--out", out);
  };
  auto* rex = run->add_subcommand("extract");
  rex->add_option("--dir", dir)->required();
  rex->add_option("--oracle-cmd", oracle_cmd_str,
                  "external oracle command line (space separated)");
  rex->add_option("--samples", samples);
  add_common(rex);
  auto* rver = run->add_subcommand("verify");
  rver->add_option("--dir", dir)->required();
  rver->add_option("--samples", samples);
  add_common(rver);
  auto* rrn = run->add_subcommand("rn");
  rrn->add_option("--exhaustive", atoms);
  add_common(rrn);
  auto* rdist = run->add_subcommand("dist");
  rdist->add_option("--trials", trials);
  add_common(rdist);
  auto* rsharp = run->add_subcommand("sharp");
  rsharp->add_option("--points", points);
  rsharp->add_option("--trials", trials);
  add_common(rsharp);
  auto* rhomeo = run->add_subcommand("homeo");
  rhomeo->add_option("--points", points);
  rhomeo->add_option("--trials", trials);
  add_common(rhomeo);

  auto* serve = app.add_subcommand("serve-oracle", "stdin/stdout oracle");
  serve->add_option("--dir", dir)->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (gen->parsed()) return cmd_gen(out, atoms, p, seed, adversarial);
    if (rex->parsed()) {
      std::vector<std::string> oracle_cmd;
      std::istringstream iss(oracle_cmd_str);
      for (std::string tok; iss >> tok;) oracle_cmd.push_back(tok);
      return cmd_extract(dir, oracle_cmd, tol, samples, seed, out);
    }
    if (rver->parsed()) return cmd_verify(dir, samples, seed, out);
    if (rrn->parsed()) return cmd_rn(std::min(atoms, 4), out);
    if (rdist->parsed())
      return cmd_dist(trials, seed, tol == 1e-9 ? 1e-6 : tol, out);
    if (rsharp->parsed())
      return cmd_sharp(std::min(points, 4), trials, seed, out);
    if (rhomeo->parsed()) return cmd_homeo(points, trials, seed, out);
    if (serve->parsed()) return cmd_serve(dir);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}
