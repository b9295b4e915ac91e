#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "sphereiso/rational.hpp"

namespace sphereiso {

struct InputError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct PreconditionError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Subset of a space's atoms, as a bitmask over atom indices.
using Mask = std::uint64_t;

inline int popcount(Mask m) { return __builtin_popcountll(m); }
inline Mask bit(int i) { return Mask{1} << i; }

/// Finite atomic measure space: named atoms with masses in [0, inf].
/// The ambient sigma-algebra is the power set of the atoms.
class FiniteMeasureSpace {
 public:
  FiniteMeasureSpace() = default;
  FiniteMeasureSpace(std::vector<std::string> ids, std::vector<Mass> weights)
      : ids_(std::move(ids)), weight_(std::move(weights)) {
    if (ids_.size() != weight_.size())
      throw InputError("atom id / weight count mismatch");
    if (ids_.size() > 64) throw InputError("at most 64 atoms supported");
    for (std::size_t i = 0; i < ids_.size(); ++i)
      for (std::size_t j = i + 1; j < ids_.size(); ++j)
        if (ids_[i] == ids_[j])
          throw InputError("duplicate atom id: " + ids_[i]);
  }

  /// Space with unit names a0..a{n-1}.
  static FiniteMeasureSpace indexed(std::vector<Mass> weights) {
    std::vector<std::string> ids;
    for (std::size_t i = 0; i < weights.size(); ++i)
      ids.push_back("a" + std::to_string(i));
    return FiniteMeasureSpace(std::move(ids), std::move(weights));
  }

  int size() const { return static_cast<int>(ids_.size()); }
  Mask all() const {
    return size() == 64 ? ~Mask{0} : (bit(size()) - 1);
  }
  const std::string& id(int i) const { return ids_[i]; }
  const Mass& weight(int i) const { return weight_[i]; }
  const std::vector<std::string>& ids() const { return ids_; }

  int index_of(const std::string& id) const {
    for (int i = 0; i < size(); ++i)
      if (ids_[i] == id) return i;
    throw InputError("unknown atom identifier: " + id);
  }

  void require_subset(Mask a) const {
    if (a & ~all()) throw InputError("set contains unknown atom bits");
  }

  Mass measure(Mask a) const {
    require_subset(a);
    Mass m;
    for (int i = 0; i < size(); ++i)
      if (a & bit(i)) m += weight_[i];
    return m;
  }

  Mask null_atoms() const {
    Mask m = 0;
    for (int i = 0; i < size(); ++i)
      if (weight_[i].is_zero()) m |= bit(i);
    return m;
  }
  Mask infinite_atoms() const {
    Mask m = 0;
    for (int i = 0; i < size(); ++i)
      if (!weight_[i].is_finite()) m |= bit(i);
    return m;
  }
  /// Atoms with finite weight (possibly zero): the sigma-ring generators.
  Mask finite_atoms() const { return all() & ~infinite_atoms(); }
  /// Atoms with weight in (0, inf).
  Mask positive_finite_atoms() const { return finite_atoms() & ~null_atoms(); }
  Mask positive_atoms() const { return all() & ~null_atoms(); }

  bool in_sigma_ring(Mask a) const { return (a & infinite_atoms()) == 0; }

 private:
  std::vector<std::string> ids_;
  std::vector<Mass> weight_;
};

/// Equivalence class of a set modulo null atoms (the canonical
/// representative contains no zero-weight atoms).
struct NullClass {
  Mask canonical{0};
  friend bool operator==(NullClass a, NullClass b) {
    return a.canonical == b.canonical;
  }
  friend bool operator!=(NullClass a, NullClass b) { return !(a == b); }
  bool empty() const { return canonical == 0; }
};

inline NullClass class_of(const FiniteMeasureSpace& sp, Mask a) {
  sp.require_subset(a);
  return NullClass{a & ~sp.null_atoms()};
}

/// A precedes B modulo null sets: mu(A \ B) = 0.
inline bool preceq(const FiniteMeasureSpace& sp, Mask a, Mask b) {
  sp.require_subset(a);
  sp.require_subset(b);
  return class_of(sp, a & ~b).empty();
}

inline bool equiv(const FiniteMeasureSpace& sp, Mask a, Mask b) {
  return preceq(sp, a, b) && preceq(sp, b, a);
}

/// Boolean algebra operations on null classes.
inline NullClass meet(NullClass a, NullClass b) {
  return NullClass{a.canonical & b.canonical};
}
inline NullClass join(NullClass a, NullClass b) {
  return NullClass{a.canonical | b.canonical};
}
inline NullClass complement(const FiniteMeasureSpace& sp, NullClass a) {
  return class_of(sp, sp.all() & ~a.canonical);
}
inline bool leq(NullClass a, NullClass b) {
  return (a.canonical & ~b.canonical) == 0;
}

inline NullClass essential_supremum(const FiniteMeasureSpace& sp,
                                    const std::vector<Mask>& family) {
  Mask u = 0;
  for (Mask e : family) {
    sp.require_subset(e);
    u |= e;
  }
  return class_of(sp, u);
}

struct ClassifyFlags {
  bool in_A0{false};
  bool in_Af{false};
  bool in_Asigma{false};
  bool in_Asigma_c_sigma{false};
};

/// Membership of A in the nested measurability classes.
inline ClassifyFlags classify(const FiniteMeasureSpace& sp, Mask a) {
  sp.require_subset(a);
  ClassifyFlags f;
  f.in_A0 = sp.measure(a).is_zero();
  f.in_Af = sp.measure(a).is_finite();
  f.in_Asigma = sp.in_sigma_ring(a);
  f.in_Asigma_c_sigma = f.in_Asigma || sp.in_sigma_ring(sp.all() & ~a);
  return f;
}

/// Arbitrary set map between sigma-ring fragments, for certification.
using SetMap = std::function<Mask(Mask)>;

struct ConditionResult {
  bool pass{true};
  // Witness sets (one or two, depending on the condition).
  std::optional<std::pair<Mask, Mask>> witness;
};

struct RegCertificate {
  ConditionResult r1, r2, r3, r4, r5;
  bool all_pass() const {
    return r1.pass && r2.pass && r3.pass && r4.pass && r5.pass;
  }
};

struct RegCheckOptions {
  int exhaustive_bound = 12;   // max finite atoms for exhaustive single-set sweeps
  int pair_bound = 10;         // max finite atoms for exhaustive pair sweeps
  bool allow_sampling = false;
  std::uint64_t seed = 1;
  int samples = 20000;
};

RegCertificate check_regular_set_iso(const FiniteMeasureSpace& dom,
                                     const FiniteMeasureSpace& cod,
                                     const SetMap& map,
                                     const RegCheckOptions& opts = {});

/// Regular set isomorphism between sigma-rings, stored atom-level:
/// a bijection from positive-finite domain atoms onto positive-finite
/// codomain atoms. The set-level map is derived.
class RegularSetIso {
 public:
  RegularSetIso() = default;

  /// atom_map[i] = codomain atom index for domain atom i, or -1 for
  /// atoms outside the positive-finite fragment.
  static RegularSetIso build(FiniteMeasureSpace dom, FiniteMeasureSpace cod,
                             std::vector<int> atom_map,
                             const RegCheckOptions& opts = {});

  static RegularSetIso identity(const FiniteMeasureSpace& sp);

  const FiniteMeasureSpace& domain() const { return dom_; }
  const FiniteMeasureSpace& codomain() const { return cod_; }
  const std::vector<int>& atom_map() const { return map_; }
  const RegCertificate& certificate() const { return cert_; }

  /// Set-level action on a sigma-ring element.
  Mask apply(Mask a) const;
  /// Domain atom mapped onto codomain atom y, or -1.
  int preimage_atom(int y) const { return inverse_[y]; }

 private:
  FiniteMeasureSpace dom_, cod_;
  std::vector<int> map_;
  std::vector<int> inverse_;
  RegCertificate cert_;
};

/// Pushforward measure mu^Lambda on the codomain sigma-algebra fragment.
/// Sets in the sigma-ring get the mass of a Lambda-preimage; sets whose
/// complement is in the sigma-ring (but which are not) get infinity.
Mass pushforward_measure(const RegularSetIso& iso, Mask b);

/// Finite-scale regular-set-isomorphism existence criterion: positive
/// atom counts match within each finiteness class.
bool regular_iso_exists_criterion(const FiniteMeasureSpace& a,
                                  const FiniteMeasureSpace& b);

/// Exhaustive search for a compatible atom bijection (small spaces only);
/// the independent check of the counting criterion.
bool regular_iso_exists_bruteforce(const FiniteMeasureSpace& a,
                                   const FiniteMeasureSpace& b);

}  // namespace sphereiso
