// ADE classification of plane-curve singular points over number fields,
// singular-point location by resultants, double-cover transfer, McKay typing
// of quotient singularities from stabilizer data, and chart verification.
#pragma once

#include <optional>
#include <string>
#include <vector>

#include "refk3/exactmath.hpp"
#include "refk3/invariants.hpp"
#include "refk3/multipoly.hpp"
#include "refk3/refgroup.hpp"

namespace refk3 {

struct ADEType {
  char family = 'A';  // 'A', 'D' or 'E'
  int n = 1;          // index; the Milnor number equals n

  int mu() const { return n; }
  std::string str() const { return std::string(1, family) + std::to_string(n); }
  bool operator==(const ADEType& o) const { return family == o.family && n == o.n; }
  bool operator<(const ADEType& o) const {
    return family != o.family ? family < o.family : n < o.n;
  }
};

struct CurveSingularityReport {
  std::vector<NFElem> point;  // projective coordinates [p0:p1:p2]
  FieldPtr F;                 // field of the coordinates
  ADEType type;
  int multiplicity = 0;            // local multiplicity (2 or 3 for ADE)
  int tangent_distinct_roots = 0;  // distinct projective roots of the tangent cone
};

// a Galois orbit of singular points whose coordinates need degree > 2
struct UnresolvedOrbit {
  QPoly minpoly;     // minimal polynomial of a primary coordinate
  std::string note;
};

struct SurfaceSingularityTable {
  std::string group;
  std::optional<Rational> lambda;
  std::vector<std::pair<std::string, ADEType>> entries;  // label -> type
  int total_milnor = 0;  // M = sum of Milnor numbers
};

// abstract structure probe of a projective stabilizer image
struct GroupProbe {
  std::size_t order = 1;
  bool cyclic = true;
  bool binary_dihedral = false;  // generalized quaternion of order 4n
};

// is the defining polynomial square-free (no repeated component)?
bool curve_is_squarefree(const MultiPoly& C);

// all singular points of the projective plane curve Z(C), C over Q, whose
// coordinates lie in Q or a quadratic field; larger Galois orbits are
// appended to *unresolved (when given) instead of being guessed
std::vector<CurveSingularityReport> singular_points_curve(
    const MultiPoly& C, std::vector<UnresolvedOrbit>* unresolved = nullptr);

// ADE type of the plane curve C at the projective point p (must be singular);
// throws on non-simple singularities
ADEType classify_ade(const MultiPoly& C, const std::vector<NFElem>& p);

// Milnor number at p: minimal vanishing order of the resultant of the two
// partials over seeded unimodular coordinate changes
int milnor_number(const MultiPoly& C, const std::vector<NFElem>& p);

// cyclic n -> A_{n-1}; generalized quaternion of order 4n -> D_{n+2};
// trivial -> nullopt (smooth); throws on unsupported structure
std::optional<ADEType> mckay_type(const GroupProbe& G);

// structure probe of Stab_{W'}([v]) / scalars for a projective point [v]
// given over an extension E of the group field (gen_image = image of the
// group-field generator in E)
GroupProbe projective_stabilizer_probe(const MatrixGroup& W, const NFVec& v,
                                       const FieldPtr& E, const NFElem& gen_image,
                                       bool* orbit_splits = nullptr,
                                       std::size_t* full_stab_order = nullptr);

// singularity table of the quotient surface: branch-curve transfer for G30 and
// G31, stabilizer/McKay analysis for G29 (which needs the group)
SurfaceSingularityTable surface_singularities(const QuotientSurface& S,
                                              const MatrixGroup* W = nullptr);

// p satisfies every chart equation and the Jacobian drops rank at p
bool verify_singular_point(const std::vector<MultiPoly>& chart,
                           const std::vector<NFElem>& p);

// Hypothesis (H_lambda): the fibration separates the singular points away
// from the excluded base points
bool separation_check(const QuotientSurface& S);

}  // namespace refk3
