// Fundamental invariants, the symmetrizer, the J^2-relation solver producing
// quotient-surface equations in weighted projective coordinates, normalization
// of weight vectors, special parameter values, and containment checks.
#pragma once

#include <optional>
#include <string>
#include <vector>

#include "refk3/multipoly.hpp"
#include "refk3/refgroup.hpp"

namespace refk3 {

// Sum over the distinct monomials in the S4-orbit of the exponent vector,
// each with coefficient 1.
MultiPoly symmetrize(const ExpVec& m, const FieldPtr& F);

// true iff f(g x) = f(x) exactly for every generator of W
bool verify_invariance(const MultiPoly& f, const MatrixGroup& W);

struct InvariantSystem {
  std::string group;            // "G29" | "G30" | "G31"
  FieldPtr F;                   // base field of the group
  std::vector<MultiPoly> f;     // f1..f4, invariant, integer coefficients
  std::vector<int> degrees;     // matching Table 1
  MultiPoly J;                  // product of the reflection-hyperplane forms
  // relation J^2 * gamma2 = P_fb(f1..f4): P_fb lives in basis symbols
  // F1..F4; gamma2 is the square of the J-normalization scalar chosen so
  // that the paper-facing equations come out with their printed
  // coefficients (relation coefficient of the pure-f4 power set to the
  // printed value).
  MultiPoly P_fb;               // vars {"F1","F2","F3","F4"}, base-field coeffs
  NFElem gamma2;                // reported normalization of J^2
};

// Build the invariant system for one of the three groups.  f-basis: printed
// formulas for G31 and for f1 of G29; Reynolds averages of seeded linear-form
// powers, triangularly reduced, elsewhere.  The returned relation has been
// verified as an exact polynomial identity.
InvariantSystem build_invariant_system(const MatrixGroup& W);

// canonical-text save/load of a computed system (data shipped with the tree)
bool save_invariant_system(const InvariantSystem& S, const std::string& path);
std::optional<InvariantSystem> load_invariant_system(const MatrixGroup& W,
                                                     const std::string& path);
// load from the shipped data directory, building (and writing) on a miss
InvariantSystem invariant_system_cached(const MatrixGroup& W);

// Exact identity check J^2 * gamma2 = P_fb(f1..f4), via a modular grid
// evaluation with a proven coefficient bound.  Exposed for the CLI verifier.
bool verify_relation(const InvariantSystem& S);

struct QuotientSurface {
  std::string group;
  std::optional<Rational> lambda;   // nullopt: symbolic (variable "l")
  std::vector<int> weights;         // ambient weights, normalized
  std::vector<std::string> coords;  // coordinate names incl. the square root
  MultiPoly branch;                 // r_lambda (or the G29 right-hand side)
  MultiPoly defining;               // j^2 - (...) written in the ambient coords
  std::string note;                 // degenerate-case warning, if any
};

// The quotient-surface equation of the paper's sections 4-6:
//   G29: [x2:x3:x4:j] in P(2,3,5,10), j^2 = branch(x2,x3,x4)
//   G30: [y1:y3:y4:j] in P(1,2,3,6),  j^2 = r_lambda(y1,y3,y4)
//   G31: [z1:z2:z4:t] in P(1,1,1,3),  t^2 = z2 * r_lambda(z1,z2,z4)
QuotientSurface quotient_equation(const InvariantSystem& S,
                                  std::optional<Rational> lambda);

// weight normalization: divide out the overall gcd, then for each index
// divide the *other* weights by their common gcd, until well-formed
struct WpsNormalization {
  std::vector<int> weights;
  std::vector<std::string> log;  // human-readable substitution steps
};
WpsNormalization wps_normalize(std::vector<int> w);

// -f(v)/g(v) for v spanning the fixed line of P; throws if g(v) = 0
Rational special_lambda(const ParabolicSubgroup& P, const MultiPoly& f,
                        const MultiPoly& g);
// field-valued variant (the G30 values live in Q(sqrt5))
NFElem special_lambda_nf(const ParabolicSubgroup& P, const MultiPoly& f,
                         const MultiPoly& g);

// containment of the conic {linear = quadric = 0} in Z(f): eliminate the
// linear form, then test divisibility by the quadric
bool contains_curve(const MultiPoly& f, const MultiPoly& linear,
                    const MultiPoly& quadric);

// is the line spanned by a, b contained in Z(f)?  (f may carry a trailing
// parameter variable beyond the 4 coordinates)
bool line_on_surface(const MultiPoly& f, const NFVec& a, const NFVec& b);

// evaluate a 4-variable polynomial (plus optional trailing parameter
// variables, which must not occur) at a vector over any field
NFElem eval_at_vector(const MultiPoly& f, const NFVec& v);

// --- torus matching (G29, Remark 4.3) ---
struct TorusMatch {
  bool matched = false;
  Rational epsilon;                  // f4 -> f4 + epsilon f2 f3 reduction
  // certificate: integer powers of the scaling torus (alpha_i^k, beta^k)
  std::vector<std::string> certificate;
};
// Match the G29 restricted relation against the printed degree-20 equation.
TorusMatch match_g29_remark(const InvariantSystem& S);

}  // namespace refk3
