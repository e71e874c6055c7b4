// Exact multivariate polynomials with number-field coefficients, optional
// weighted grading, Sylvester resultants, and canonical graded-lex text form.
#pragma once

#include <functional>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "refk3/exactmath.hpp"

namespace refk3 {

using ExpVec = std::vector<int>;

// graded-lexicographic order on exponent vectors (canonical term order)
struct GradedLex {
  bool operator()(const ExpVec& a, const ExpVec& b) const {
    long da = 0, db = 0;
    for (int x : a) da += x;
    for (int x : b) db += x;
    if (da != db) return da < db;
    return a < b;
  }
};

struct MultiPoly {
  std::vector<std::string> vars;
  std::map<ExpVec, NFElem, GradedLex> terms;  // no zero coefficients stored
  std::optional<std::vector<int>> weights;    // one positive weight per variable

  MultiPoly() = default;
  explicit MultiPoly(std::vector<std::string> v) : vars(std::move(v)) {}

  static MultiPoly constant(std::vector<std::string> vars, const NFElem& c);
  static MultiPoly monomial(std::vector<std::string> vars, const ExpVec& e, const NFElem& c);
  static MultiPoly variable(std::vector<std::string> vars, int index);

  int nvars() const { return (int)vars.size(); }
  bool is_zero() const { return terms.empty(); }
  void insert_term(const ExpVec& e, const NFElem& c);  // accumulates, drops zeros
  NFElem coeff(const ExpVec& e) const;

  MultiPoly operator+(const MultiPoly& o) const;
  MultiPoly operator-(const MultiPoly& o) const;
  MultiPoly operator-() const;
  MultiPoly operator*(const MultiPoly& o) const;
  MultiPoly operator*(const NFElem& s) const;
  MultiPoly pow(unsigned e) const;
  bool operator==(const MultiPoly& o) const;

  NFElem eval(const std::vector<NFElem>& point) const;
  // substitute each variable by the given polynomial (all in the same target
  // variable set)
  MultiPoly substitute(const std::vector<MultiPoly>& images) const;
  MultiPoly derivative(int var) const;

  long total_degree() const;  // max total degree, -1 for 0
  // common weighted degree, or nullopt plus the set of distinct degrees
  std::optional<long> weighted_degree(const std::vector<int>& w,
                                      std::set<long>* degrees_seen = nullptr) const;

  // view as univariate in variable `var`: coefficient list (low -> high) in
  // the remaining variables (variable set preserved, exponent of var zeroed)
  std::vector<MultiPoly> coeffs_in(int var) const;
  int degree_in(int var) const;

  // exact division (throws if not divisible)
  MultiPoly divide_exact(const MultiPoly& d) const;
  bool divides(const MultiPoly& a, MultiPoly* quotient = nullptr) const;  // this | a

  std::string str() const;  // canonical, graded-lex descending
};

// Sylvester resultant of f and g with respect to vars[var].
MultiPoly resultant(const MultiPoly& f, const MultiPoly& g, int var);

// gcd of two multivariate polynomials via primitive PRS in the given
// variable (adequate for the bivariate uses here)
MultiPoly multipoly_gcd(const MultiPoly& a, const MultiPoly& b);

// convert a univariate-in-one-variable MultiPoly to NFPoly (throws if other
// variables occur)
NFPoly to_nfpoly(const MultiPoly& f, int var, const FieldPtr& F);
MultiPoly from_nfpoly(const NFPoly& f, std::vector<std::string> vars, int var);

}  // namespace refk3
