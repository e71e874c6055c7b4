// Kodaira fiber catalog, Euler-budget and Shioda-Tate bookkeeping,
// Mordell-Weil groups as lattice quotients, constraint-based fiber-type
// inference and fiber-curve extraction for the explicit fibration maps.
#pragma once

#include <string>
#include <vector>

#include "refk3/invariants.hpp"
#include "refk3/lattices.hpp"
#include "refk3/multipoly.hpp"

namespace refk3 {

struct KodairaFiber {
  std::string label;    // canonical Kodaira symbol (In, In*, II..IV*)
  std::string alias;    // affine-diagram alias (A~n, D~n, E~n) when one exists
  int euler = 0;
  int components = 0;
  int rank = 0;  // rank of the root lattice spanned by non-identity components
};

// catalog lookup; accepts Kodaira symbols ("I2", "I3*", "IV*"), affine
// aliases ("A~1", "D~7", "E~8") and the sharp variants ("A~1#" = III,
// "A~2#" = IV); throws on unknown labels
KodairaFiber kodaira_info(const std::string& label);

struct FiberConfiguration {
  std::string id;
  std::vector<std::string> fibers;  // one label per singular fiber
  int rho = 0;                      // Picard number
  int mw_rank = 0;
  long mw_torsion = 1;  // order of the torsion subgroup
};

struct ConfigCheck {
  int euler_sum = 0;
  int forced_mw_rank = 0;  // rho - 2 - sum of fiber ranks (Shioda-Tate)
  bool consistent = false;
};

// Euler budget and Shioda-Tate accounting; throws when the forced
// Mordell-Weil rank would be negative
ConfigCheck config_check(const FiberConfiguration& cfg);

// rows "<id> | <fiber> <fiber> ... | rho | mw_rank | torsion_order"
std::vector<FiberConfiguration> load_fiber_table(const std::string& path);

struct MWGroup {
  long free_rank = 0;
  std::vector<Int> torsion;  // invariant factors > 1
};

// quotient of the span of the Picard generators by the trivial sublattice;
// generators may satisfy numerical relations (degenerate Gram), which are
// divided out
MWGroup mw_group(const GramLattice& pic,
                 const std::vector<std::vector<long>>& trivial);

struct InferenceConstraints {
  std::vector<std::string> known;  // fibers fixed in advance
  std::vector<int> slot_rank_min;  // minimal lattice rank per remaining fiber
  int euler_budget = 24;
  bool exact = true;  // the budget must be consumed exactly
};

// exhaustive search over Kodaira assignments for the open slots; each result
// lists the full configuration (known fibers plus assignment), sorted
std::vector<std::vector<std::string>> infer_config(const InferenceConstraints& C);

struct FiberCurve {
  std::vector<MultiPoly> equations;  // chart equations of the fiber
  std::vector<MultiPoly> factors;    // unit content, then irreducible-ish parts
  int components = 1;                // of the double cover, over field towers
};

// fiber of the surface's standard fibration map over the base point [b0:b1];
// b0 and b1 may involve the symbolic parameter variable of S.branch
FiberCurve fiber_curve(const QuotientSurface& S, const MultiPoly& b0,
                       const MultiPoly& b1);
FiberCurve fiber_curve(const QuotientSurface& S, const Rational& b0,
                       const Rational& b1);

}  // namespace refk3
