// Integral lattices from curve-intersection graphs: Gram matrices,
// discriminant groups, even-overlattice exclusion certificates, binary
// quadratic form enumeration and divisor-class relation checking.
#pragma once

#include <array>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "refk3/exactmath.hpp"

namespace refk3 {

// weighted graph of curves on a surface; vertices carry self-intersections
// (default -2, a smooth rational curve on a K3), edges carry intersection
// numbers
struct IntersectionGraph {
  std::vector<std::string> labels;
  std::vector<long> self;                 // self-intersection per vertex
  std::map<std::pair<int, int>, long> edges;  // keyed by (i < j)

  void add_vertex(const std::string& label, long self_intersection = -2);
  void add_edge(const std::string& a, const std::string& b, long mult = 1);
  int index(const std::string& label) const;  // throws on unknown label
  std::size_t size() const { return labels.size(); }
};

// read a graph from a text file: lines "v <label> [self]" / "e <a> <b> [mult]"
IntersectionGraph load_graph(const std::string& path);

struct GramLattice {
  std::vector<std::string> labels;
  std::vector<std::vector<Int>> gram;

  bool is_even() const;  // all diagonal entries even
};

struct LatticeReport {
  Int det;
  bool even = false;
  std::vector<Int> invariant_factors;  // of the discriminant group, > 1 only
};

// one order-p discriminant class tested for the even-overlattice argument
struct GlueCandidate {
  std::vector<Rational> v;  // coordinates over the lattice basis
  long order = 1;           // order in the discriminant group
  Rational norm;            // v . G . v
  std::string failure;      // why the overlattice it would generate is not even
};

struct PrimitivityCertificate {
  Int det;
  std::vector<long> primes;  // p with p^2 dividing |det|
  std::vector<GlueCandidate> candidates;
  bool primitive = false;  // no index-p even integral overlattice exists
};

// Gram matrix of the subset (in the given order) of graph vertices
GramLattice gram_from_graph(const IntersectionGraph& G,
                            const std::vector<std::string>& subset);

// determinant, parity and invariant factors; throws on a degenerate lattice
LatticeReport lattice_report(const GramLattice& L);

// enumerate every order-p class of the discriminant group for each prime p
// with p^2 | det and certify that none spans an even integral overlattice
PrimitivityCertificate certify_primitivity(const GramLattice& L);

// is the class of v (rational coordinates) represented among the candidates
// (equality modulo the integral lattice)?
bool certificate_contains(const PrimitivityCertificate& C,
                          const std::vector<Rational>& v, long order);

// reduced positive-definite even binary forms (a, b, c) with det = disc;
// if a reference form and the scaling flag are given, keep only rational
// multiples of the reference
std::vector<std::array<Int, 3>> transcendental_match(
    const Int& disc, std::optional<std::array<Int, 3>> reference = std::nullopt,
    bool scaling = false);

// does lhs equal the integer combination rhs in the span of the full graph
// (identical pairing with every vertex)?
bool relation_check(const IntersectionGraph& G, const std::string& lhs,
                    const std::vector<std::pair<std::string, long>>& rhs);

}  // namespace refk3
