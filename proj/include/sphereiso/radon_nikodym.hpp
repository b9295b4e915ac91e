#pragma once

#include <optional>
#include <string>
#include <vector>

#include "sphereiso/measure.hpp"

namespace sphereiso {

/// Sub-sigma-algebra of a finite atomic space: a partition of the atoms
/// into blocks, each carrying its own mass (the measure lambda on C).
/// The base space carries nu on the full power set B.
struct SubSigmaAlgebra {
  FiniteMeasureSpace base;
  std::vector<Mask> blocks;
  std::vector<Mass> lambda;

  SubSigmaAlgebra(FiniteMeasureSpace b, std::vector<Mask> blks,
                  std::vector<Mass> lam);

  int block_of(int atom) const { return block_index_[atom]; }
  bool is_block_union(Mask e) const;
  /// lambda of a block union (throws InputError otherwise).
  Mass lambda_of(Mask e) const;
  /// Union of the blocks with finite lambda: the largest C-sigma set.
  Mask finite_lambda_blocks() const;

 private:
  std::vector<int> block_index_;
};

enum class RNScope { sigma_only, all_sets };

struct RNSolution {
  std::vector<Rat> g;  // per base atom, >= 0 finite
  bool unique_mod_null{true};
  std::optional<std::vector<Rat>> witness;  // a second solution when non-unique
};

struct RNOracleResult {
  bool feasible{false};
  std::optional<RNSolution> solution;
};

/// Independent brute-force oracle: decides feasibility of
///   sum_{x in E} g(x) nu(x) = lambda(E)
/// over the required E-family (all of C, or C-sigma only) with g >= 0
/// finite, by exact linear feasibility; uniqueness modulo nu-null atoms
/// via per-coordinate range analysis of the solution polytope.
RNOracleResult rn_solve_bruteforce(const SubSigmaAlgebra& c, RNScope scope);

/// Which structural condition produced a prediction, if any.
struct RNPrediction {
  enum class Kind { none, iff, sufficient };
  Kind kind{Kind::none};
  bool value{false};  // meaningful unless kind == none
  std::string source;
};

struct RNConditionReport {
  // Hypothesis / condition flags, each decided by finite enumeration.
  bool nu_semifinite{false};   // no infinite nu-atom
  bool nu_localizable{false};  // == nu_semifinite at finite scale
  bool C_semifinite{false};    // no infinite-lambda block
  bool abs_cont{false};        // nu-null C-sets are lambda-null
  bool A0_exists{false};       // carrier-set condition
  std::optional<Mask> A0_witness;
  bool uniqueness_condition{false};  // saturation condition
  // Sigma-algebra inclusion flags.
  bool B_sigma_subset_C{false};
  bool C_sigma_subset_B{true};  // power-set base: always true
  bool C_sigma_subset_B_sigma{false};
  bool B_sigma_subset_C_sigma{false};
  bool B_sigma_eq_C_sigma{false};

  RNPrediction existence_sigma, uniqueness_sigma;
  RNPrediction existence_all, uniqueness_all;

  const RNPrediction& existence(RNScope s) const {
    return s == RNScope::sigma_only ? existence_sigma : existence_all;
  }
  const RNPrediction& uniqueness(RNScope s) const {
    return s == RNScope::sigma_only ? uniqueness_sigma : uniqueness_all;
  }
};

RNConditionReport rn_conditions(const SubSigmaAlgebra& c);

/// Fast-path derivative: blockwise ratios, proportional canonicalization
/// on blocks where uniqueness fails. Precondition: rn_conditions predicts
/// existence for the sigma_only scope (else PreconditionError naming the
/// violated condition).
RNSolution rn_derivative(const SubSigmaAlgebra& c);

}  // namespace sphereiso
