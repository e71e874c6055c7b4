#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <vector>

#include "refk3/lattices.hpp"

using namespace refk3;

namespace {

// basis of the Picard group: all vertices except a2.2
const std::vector<std::string> kBasis = {
    "a2+.1", "a2+.2", "a2-.1", "a2-.2", "a1.1",  "d4.1",  "d4.2",
    "d4.3",  "d4.4",  "C3",    "a4+.1", "a4+.2", "a4+.3", "a4+.4",
    "a4-.1", "a4-.2", "a4-.3", "a4-.4", "C2",    "a2.1"};

IntersectionGraph& curve_graph() {
  static IntersectionGraph G = load_graph(std::string(REFK3_DATA_DIR) + "/graph-g29.txt");
  return G;
}

std::vector<Rational> glue(const std::vector<std::pair<int, Rational>>& terms) {
  std::vector<Rational> v(20, Rational(0));
  for (auto& [i, c] : terms) v[i] += c;
  return v;
}

}  // namespace

TEST_CASE("graph loading and small Gram matrices") {
  IntersectionGraph& G = curve_graph();
  CHECK(G.size() == 21);
  GramLattice single = gram_from_graph(G, {"a1.1"});
  CHECK(single.gram[0][0] == -2);
  // an A2 chain of two -2 curves has determinant 3
  GramLattice a2 = gram_from_graph(G, {"a2+.1", "a2+.2"});
  CHECK(int(a2.gram[0][1].get_si()) == 1);
  LatticeReport r = lattice_report(a2);
  CHECK(r.det == 3);
  CHECK(r.even);
  CHECK(r.invariant_factors == std::vector<Int>{3});
  CHECK_THROWS(G.index("missing"));
}

TEST_CASE("permutation equivariance of gram_from_graph") {
  IntersectionGraph& G = curve_graph();
  std::vector<std::string> perm = kBasis;
  std::reverse(perm.begin(), perm.end());
  GramLattice A = gram_from_graph(G, kBasis);
  GramLattice B = gram_from_graph(G, perm);
  std::size_t n = kBasis.size();
  for (std::size_t i = 0; i < n; i++)
    for (std::size_t j = 0; j < n; j++)
      CHECK(A.gram[i][j] == B.gram[n - 1 - i][n - 1 - j]);
}

TEST_CASE("the 20-curve basis has determinant -360 and the full graph rank 20") {
  IntersectionGraph& G = curve_graph();
  GramLattice L = gram_from_graph(G, kBasis);
  LatticeReport R = lattice_report(L);
  CHECK(R.det == -360);
  CHECK(R.even);
  Int disc_order = 1;
  for (auto& f : R.invariant_factors) disc_order *= f;
  CHECK(disc_order == 360);
  CHECK(R.invariant_factors == std::vector<Int>{6, 60});
  // the full 21-vertex Gram matrix is degenerate
  GramLattice full = gram_from_graph(G, G.labels);
  CHECK_THROWS(lattice_report(full));
}

TEST_CASE("even-overlattice exclusion certificate") {
  GramLattice L = gram_from_graph(curve_graph(), kBasis);
  PrimitivityCertificate C = certify_primitivity(L);
  CHECK(C.det == -360);
  CHECK(C.primes == std::vector<long>{2, 3});
  CHECK(C.primitive);
  int order2 = 0, order3 = 0;
  for (auto& gc : C.candidates) {
    CHECK(!gc.failure.empty());
    (gc.order == 2 ? order2 : order3)++;
    // order * v is integral
    for (auto& x : gc.v) {
      Rational m = x * Rational(gc.order);
      m.canonicalize();
      CHECK(m.get_den() == 1);
    }
  }
  CHECK(order2 == 3);
  CHECK(order3 == 8);
  Rational h(1, 2), t(1, 3);
  // (1/2) D5, (1/2)(D6 + D7), (1/2)(D5 + D6 + D7) -- indices 4, 5, 6
  CHECK(certificate_contains(C, glue({{4, h}}), 2));
  CHECK(certificate_contains(C, glue({{5, h}, {6, h}}), 2));
  CHECK(certificate_contains(C, glue({{4, h}, {5, h}, {6, h}}), 2));
  // L_{a,b} = (a/3)(D1 - D2) + (b/3)(D3 - D4)
  for (int a = 0; a < 3; a++)
    for (int b = 0; b < 3; b++) {
      if (a == 0 && b == 0) continue;
      auto v = glue({{0, Rational(a) * t},
                     {1, Rational(-a) * t},
                     {2, Rational(b) * t},
                     {3, Rational(-b) * t}});
      CHECK(certificate_contains(C, v, 3));
    }
  // norms of the order-3 classes: 2/3 (a^2 + b^2) up to sign and mod 2Z
  for (auto& gc : C.candidates)
    if (gc.order == 3) {
      Rational n3 = gc.norm * 3;
      n3.canonicalize();
      CHECK(n3.get_den() == 1);
      CHECK(gc.norm.get_den() == 3);
    }
}

TEST_CASE("transcendental lattice identification") {
  std::array<Int, 3> mukai = {4, 0, 40};
  auto matched = transcendental_match(360, mukai, true);
  REQUIRE(matched.size() == 1);
  CHECK(matched[0] == std::array<Int, 3>{6, 0, 60});
  auto self_match = transcendental_match(160, mukai, true);
  REQUIRE(self_match.size() == 1);
  CHECK(self_match[0] == mukai);
  // unconstrained enumeration contains the matched form
  auto all = transcendental_match(360);
  CHECK(all.size() > 1);
  bool found = false;
  for (auto& f : all)
    if (f == std::array<Int, 3>{6, 0, 60}) found = true;
  CHECK(found);
  // every scaled match is an exact rational multiple of the reference
  for (auto& f : matched) {
    CHECK(f[0] * mukai[2] == f[2] * mukai[0]);
    CHECK(f[1] == 0);
  }
}

TEST_CASE("divisor-class relations in the span of the graph") {
  IntersectionGraph& G = curve_graph();
  std::vector<std::pair<std::string, long>> rhs = {
      {"d4.1", 1},  {"d4.2", 1},  {"d4.3", 2},  {"d4.4", 2},  {"C3", 2},
      {"a4+.1", 1}, {"a4-.1", 1}, {"a4+.3", -1}, {"a4-.3", -1}, {"a4+.4", -2},
      {"a4-.4", -2}, {"C2", -3},  {"a2.1", -2}};
  CHECK(relation_check(G, "a2.2", rhs));
  // identity combination
  CHECK(relation_check(G, "C2", {{"C2", 1}}));
  // perturbing the strict-transform coefficient from -3 to -2 breaks it
  auto bad = rhs;
  for (auto& [l, c] : bad)
    if (l == "C2") c = -2;
  CHECK_FALSE(relation_check(G, "a2.2", bad));
  CHECK_THROWS(relation_check(G, "nope", rhs));
}
