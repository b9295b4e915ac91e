#include "sphereiso/radon_nikodym.hpp"

#include <algorithm>

#include "sphereiso/simplex.hpp"

namespace sphereiso {

SubSigmaAlgebra::SubSigmaAlgebra(FiniteMeasureSpace b, std::vector<Mask> blks,
                                 std::vector<Mass> lam)
    : base(std::move(b)), blocks(std::move(blks)), lambda(std::move(lam)) {
  if (blocks.size() != lambda.size())
    throw InputError("block / lambda count mismatch");
  Mask seen = 0;
  for (Mask blk : blocks) {
    base.require_subset(blk);
    if (blk == 0) throw InputError("empty partition block");
    if (seen & blk) throw InputError("partition blocks overlap");
    seen |= blk;
  }
  if (seen != base.all()) throw InputError("partition does not cover all atoms");
  block_index_.assign(base.size(), -1);
  for (std::size_t k = 0; k < blocks.size(); ++k)
    for (int i = 0; i < base.size(); ++i)
      if (blocks[k] & bit(i)) block_index_[i] = (int)k;
}

bool SubSigmaAlgebra::is_block_union(Mask e) const {
  base.require_subset(e);
  for (Mask blk : blocks) {
    Mask inter = e & blk;
    if (inter != 0 && inter != blk) return false;
  }
  return true;
}

Mass SubSigmaAlgebra::lambda_of(Mask e) const {
  if (!is_block_union(e)) throw InputError("set is not a C-measurable union");
  Mass m;
  for (std::size_t k = 0; k < blocks.size(); ++k)
    if (e & blocks[k]) m += lambda[k];
  return m;
}

Mask SubSigmaAlgebra::finite_lambda_blocks() const {
  Mask m = 0;
  for (std::size_t k = 0; k < blocks.size(); ++k)
    if (lambda[k].is_finite()) m |= blocks[k];
  return m;
}

namespace {

/// Constraint family: all nonempty unions over `block_ids`, as
/// (atom mask, lambda) pairs.
struct EFamily {
  std::vector<std::pair<Mask, Mass>> sets;
};

EFamily e_family(const SubSigmaAlgebra& c, RNScope scope) {
  std::vector<int> ids;
  for (std::size_t k = 0; k < c.blocks.size(); ++k)
    if (scope == RNScope::all_sets || c.lambda[k].is_finite())
      ids.push_back((int)k);
  EFamily fam;
  const int kN = (int)ids.size();
  for (unsigned sub = 1; sub < (1u << kN); ++sub) {
    Mask e = 0;
    Mass lam;
    for (int j = 0; j < kN; ++j)
      if (sub & (1u << j)) {
        e |= c.blocks[ids[j]];
        lam += c.lambda[ids[j]];
      }
    fam.sets.emplace_back(e, lam);
  }
  return fam;
}

}  // namespace

RNOracleResult rn_solve_bruteforce(const SubSigmaAlgebra& c, RNScope scope) {
  const auto& sp = c.base;
  std::vector<int> vars;  // atoms with nu in (0, inf): the LP variables
  for (int i = 0; i < sp.size(); ++i)
    if (sp.weight(i).is_positive() && sp.weight(i).is_finite())
      vars.push_back(i);
  std::vector<int> inf_atoms;
  for (int i = 0; i < sp.size(); ++i)
    if (!sp.weight(i).is_finite()) inf_atoms.push_back(i);

  const EFamily fam = e_family(c, scope);

  // A solution is (support pattern S on infinite-nu atoms, finite part x).
  // g(x) nu(x) is infinite exactly on S, so a constraint set E meeting S
  // must carry infinite lambda; the rest is an exact linear system.
  struct Rows {
    std::vector<std::vector<Rat>> A;
    std::vector<Rat> b;
  };
  auto rows_for = [&](Mask s) -> std::optional<Rows> {
    Rows r;
    for (const auto& [e, lam] : fam.sets) {
      if (e & s) {
        if (lam.is_finite()) return std::nullopt;
        continue;
      }
      if (!lam.is_finite()) return std::nullopt;
      std::vector<Rat> row(vars.size(), Rat(0));
      for (std::size_t j = 0; j < vars.size(); ++j)
        if (e & bit(vars[j])) row[j] = sp.weight(vars[j]).finite();
      r.A.push_back(std::move(row));
      r.b.push_back(lam.finite());
    }
    return r;
  };

  auto assemble = [&](Mask s, const std::vector<Rat>& x,
                      Rat inf_value) -> std::vector<Rat> {
    std::vector<Rat> g(sp.size(), Rat(0));
    for (std::size_t j = 0; j < vars.size(); ++j) g[vars[j]] = x[j];
    for (int i : inf_atoms)
      if (s & bit(i)) g[i] = inf_value;
    return g;
  };

  std::vector<Rat> zero_cost(vars.size(), Rat(0));
  std::optional<Mask> first_s;
  std::optional<std::vector<Rat>> first_x;
  bool nonempty_s_feasible = false;
  Mask nonempty_s = 0;
  std::vector<Rat> nonempty_x;

  const int n_inf = (int)inf_atoms.size();
  for (unsigned sub = 0; sub < (1u << n_inf); ++sub) {
    Mask s = 0;
    for (int j = 0; j < n_inf; ++j)
      if (sub & (1u << j)) s |= bit(inf_atoms[j]);
    auto rows = rows_for(s);
    if (!rows) continue;
    LpResult lp = solve_lp(rows->A, rows->b, zero_cost);
    if (lp.status != LpResult::Status::optimal) continue;
    if (!first_s) {
      first_s = s;
      first_x = lp.x;
    }
    if (s != 0 && !nonempty_s_feasible) {
      nonempty_s_feasible = true;
      nonempty_s = s;
      nonempty_x = lp.x;
    }
  }

  RNOracleResult res;
  if (!first_s) return res;
  res.feasible = true;

  RNSolution sol;
  sol.g = assemble(*first_s, *first_x, Rat(1));

  if (nonempty_s_feasible) {
    // g on an infinite-nu atom is never pinned: scaling it keeps every
    // constraint at infinity.
    sol.unique_mod_null = false;
    sol.witness = assemble(nonempty_s, nonempty_x, Rat(2));
  } else {
    // Only S = empty is feasible; probe each coordinate's range over the
    // solution polytope.
    auto rows = rows_for(0);
    for (std::size_t j = 0; j < vars.size() && sol.unique_mod_null; ++j) {
      for (int dir = 0; dir < 2; ++dir) {
        std::vector<Rat> cost(vars.size(), Rat(0));
        cost[j] = dir == 0 ? Rat(1) : Rat(-1);
        LpResult lp = solve_lp(rows->A, rows->b, cost);
        if (lp.status == LpResult::Status::unbounded ||
            (lp.status == LpResult::Status::optimal && lp.x[j] != (*first_x)[j])) {
          sol.unique_mod_null = false;
          if (lp.status == LpResult::Status::optimal)
            sol.witness = assemble(0, lp.x, Rat(0));
          else {
            // Unbounded coordinate: shift it by 1 along a feasible ray.
            // Re-solve with the coordinate pinned to its value + 1.
            Rows pinned = *rows;
            std::vector<Rat> row(vars.size(), Rat(0));
            row[j] = Rat(1);
            pinned.A.push_back(row);
            pinned.b.push_back((*first_x)[j] + Rat(1));
            LpResult lp2 = solve_lp(pinned.A, pinned.b, zero_cost);
            if (lp2.status == LpResult::Status::optimal)
              sol.witness = assemble(0, lp2.x, Rat(0));
          }
          break;
        }
      }
    }
  }
  res.solution = std::move(sol);
  return res;
}

RNConditionReport rn_conditions(const SubSigmaAlgebra& c) {
  const auto& sp = c.base;
  RNConditionReport r;

  r.nu_semifinite = sp.infinite_atoms() == 0;
  r.nu_localizable = r.nu_semifinite;  // finite spaces always have suprema

  r.C_semifinite = true;
  for (const Mass& lam : c.lambda)
    if (!lam.is_finite()) r.C_semifinite = false;

  r.abs_cont = true;
  for (std::size_t k = 0; k < c.blocks.size(); ++k)
    if ((c.blocks[k] & sp.positive_atoms()) == 0 && c.lambda[k].is_positive())
      r.abs_cont = false;

  // Inclusion flags.
  r.B_sigma_subset_C = true;
  r.B_sigma_subset_C_sigma = true;
  for (int i = 0; i < sp.size(); ++i) {
    if (!sp.weight(i).is_finite()) continue;
    int k = c.block_of(i);
    bool singleton = c.blocks[k] == bit(i);
    if (!singleton) {
      r.B_sigma_subset_C = false;
      r.B_sigma_subset_C_sigma = false;
    } else if (!c.lambda[k].is_finite()) {
      r.B_sigma_subset_C_sigma = false;
    }
  }
  r.C_sigma_subset_B_sigma = true;
  for (std::size_t k = 0; k < c.blocks.size(); ++k)
    if (c.lambda[k].is_finite() && (c.blocks[k] & sp.infinite_atoms()))
      r.C_sigma_subset_B_sigma = false;
  r.B_sigma_eq_C_sigma = r.B_sigma_subset_C_sigma && r.C_sigma_subset_B_sigma;

  // Carrier-set condition: some A0 with, for every E in C-sigma,
  // E ∩ A0 in B-sigma, E ∩ A0 in C, and lambda(E) = lambda(E ∩ A0).
  std::vector<Mask> csigma_sets;
  {
    std::vector<int> ids;
    for (std::size_t k = 0; k < c.blocks.size(); ++k)
      if (c.lambda[k].is_finite()) ids.push_back((int)k);
    for (unsigned sub = 0; sub < (1u << ids.size()); ++sub) {
      Mask e = 0;
      for (std::size_t j = 0; j < ids.size(); ++j)
        if (sub & (1u << j)) e |= c.blocks[ids[j]];
      csigma_sets.push_back(e);
    }
  }
  r.A0_exists = false;
  for (Mask a0 = 0; a0 <= sp.all() && !r.A0_exists; ++a0) {
    bool ok = true;
    for (Mask e : csigma_sets) {
      Mask cut = e & a0;
      if (!sp.in_sigma_ring(cut) || !c.is_block_union(cut) ||
          c.lambda_of(e) != c.lambda_of(cut)) {
        ok = false;
        break;
      }
    }
    if (ok) {
      r.A0_exists = true;
      r.A0_witness = a0;
    }
    if (a0 == sp.all()) break;  // wraparound guard for 64 atoms
  }

  // Saturation condition: every non-null A in B-sigma contains a
  // non-null C-sigma set. The maximal candidate is the union of the
  // finite-lambda blocks inside A.
  r.uniqueness_condition = true;
  const Mask bsigma = sp.finite_atoms();
  for (Mask a = bsigma;; a = (a - 1) & bsigma) {
    if (sp.measure(a).is_positive()) {
      Mask e = 0;
      for (std::size_t k = 0; k < c.blocks.size(); ++k)
        if (c.lambda[k].is_finite() && (c.blocks[k] & ~a) == 0)
          e |= c.blocks[k];
      if (!sp.measure(e).is_positive()) {
        r.uniqueness_condition = false;
        break;
      }
    }
    if (a == 0) break;
  }

  using K = RNPrediction::Kind;
  // sigma_only scope.
  if (r.nu_localizable && r.B_sigma_eq_C_sigma) {
    r.existence_sigma = {K::iff, r.abs_cont, "matching-sigma-rings absolute continuity"};
  } else if (r.nu_localizable && r.B_sigma_subset_C && r.abs_cont) {
    r.existence_sigma = {K::iff, r.A0_exists, "carrier-set existence condition"};
  } else if (r.nu_localizable && r.C_sigma_subset_B_sigma &&
             r.B_sigma_subset_C && r.abs_cont) {
    r.existence_sigma = {K::sufficient, true, "sigma-ring inclusion sufficiency"};
  }
  if (r.nu_localizable && r.B_sigma_subset_C) {
    r.uniqueness_sigma = {K::iff, r.uniqueness_condition, "saturation uniqueness condition"};
  }
  // all_sets scope.
  if (r.nu_localizable && r.B_sigma_subset_C) {
    r.existence_all =
        {K::iff, r.C_semifinite && r.abs_cont && r.A0_exists, "semi-finite full-scope characterization"};
    r.uniqueness_all = {K::iff, true, "semi-finite full-scope characterization"};
  }
  return r;
}

RNSolution rn_derivative(const SubSigmaAlgebra& c) {
  const RNConditionReport rep = rn_conditions(c);
  if (rep.existence_sigma.kind != RNPrediction::Kind::none &&
      !rep.existence_sigma.value)
    throw PreconditionError("existence predicted false by " +
                            rep.existence_sigma.source);
  // Direct per-block feasibility: a block with finite positive lambda
  // needs an atom of finite positive nu to carry the mass.
  for (std::size_t k = 0; k < c.blocks.size(); ++k) {
    if (!c.lambda[k].is_finite() || !c.lambda[k].is_positive()) continue;
    if ((c.blocks[k] & c.base.positive_finite_atoms()) == 0)
      throw PreconditionError("block " + std::to_string(k) +
                              " cannot carry finite positive mass");
  }

  const auto& sp = c.base;
  RNSolution sol;
  sol.g.assign(sp.size(), Rat(0));
  auto set_witness_from = [&](std::vector<Rat> w) {
    if (!sol.witness) sol.witness = std::move(w);
  };

  for (std::size_t k = 0; k < c.blocks.size(); ++k) {
    const Mask blk = c.blocks[k];
    std::vector<int> pos;  // atoms that can carry finite mass
    for (int i = 0; i < sp.size(); ++i)
      if ((blk & bit(i)) && (sp.positive_finite_atoms() & bit(i)))
        pos.push_back(i);

    if (!c.lambda[k].is_finite()) {
      // No sigma-scope constraint; any nu-positive atom makes the zero
      // choice non-unique.
      Mask blk_pos = blk & sp.positive_atoms();
      if (blk_pos != 0) {
        sol.unique_mod_null = false;
        std::vector<Rat> w = sol.g;
        w[__builtin_ctzll(blk_pos)] = Rat(1);
        set_witness_from(std::move(w));
      }
      continue;
    }
    const Rat lam = c.lambda[k].finite();
    if (lam.is_zero()) continue;  // g = 0 forced on the block
    if (pos.size() == 1) {
      sol.g[pos.front()] = lam / sp.weight(pos.front()).finite();
      continue;
    }
    // Non-unique block: proportional canonicalization, constant on the
    // finite-weight part of the block.
    Rat nu_b(0);
    for (int i : pos) nu_b += sp.weight(i).finite();
    Rat val = lam / nu_b;
    for (int i = 0; i < sp.size(); ++i)
      if ((blk & bit(i)) && sp.weight(i).is_finite()) sol.g[i] = val;
    sol.unique_mod_null = false;
    std::vector<Rat> w = sol.g;
    for (int i = 0; i < sp.size(); ++i)
      if (blk & bit(i)) w[i] = Rat(0);
    w[pos.front()] = lam / sp.weight(pos.front()).finite();
    set_witness_from(std::move(w));
  }
  return sol;
}

}  // namespace sphereiso
