#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <algorithm>
#include <random>

#include "doctest.h"
#include "refk3/fibrations.hpp"
#include "refk3/invariants.hpp"
#include "refk3/lattices.hpp"
#include "refk3/refgroup.hpp"

using namespace refk3;

namespace {

const MatrixGroup& g31() {
  static MatrixGroup W = build_group(g31_model());
  return W;
}

const InvariantSystem& sys31() {
  static InvariantSystem S = invariant_system_cached(g31());
  return S;
}

const MatrixGroup& g29() {
  static MatrixGroup W = build_group(g29_model());
  return W;
}

const InvariantSystem& sys29() {
  static InvariantSystem S = invariant_system_cached(g29());
  return S;
}

std::string data_path(const std::string& name) {
  return std::string(REFK3_DATA_DIR) + "/" + name;
}

// the twenty-vertex basis of NS(X29): C = a2.2 is dropped
const std::vector<std::string> kBasis = {
    "a2+.1", "a2+.2", "a2-.1", "a2-.2", "a1.1", "d4.1", "d4.2",
    "d4.3",  "d4.4",  "C3",    "a4+.1", "a4+.2", "a4+.3", "a4+.4",
    "a4-.1", "a4-.2", "a4-.3", "a4-.4", "C2",    "a2.1"};

GramLattice picard_g29() {
  IntersectionGraph G = load_graph(data_path("graph-g29.txt"));
  return gram_from_graph(G, kBasis);
}

// Gram matrix of the trivial-plus-torsion lattice of the genus-one pencil
// at lambda = 1: O, F, seven I3* components, five I6 components, two I3
// components, three I2 components, and the two-torsion section Q.
//
// Component conventions: the identity component of each fiber is omitted
// (the zero section meets it); listed components are indexed along the
// affine Dynkin diagram minus the identity vertex.
GramLattice lambda1_lattice() {
  // generators: 0=O, 1=F, 2..8 = I3* comps, 9..13 = I6 comps, 14..15 = I3
  // comps, 16..18 = I2 comps, 19 = Q
  const int n = 20;
  GramLattice L;
  L.labels = {"O",    "F",    "d.1",  "d.2", "d.3", "d.4", "d.5",
              "d.6",  "d.7",  "s.1",  "s.2", "s.3", "s.4", "s.5",
              "c.1",  "c.2",  "b1.1", "b2.1", "b3.1", "Q"};
  L.gram.assign(n, std::vector<Int>(n, 0));
  auto set = [&](int i, int j, long v) {
    L.gram[i][j] = v;
    L.gram[j][i] = v;
  };
  set(0, 0, -2);
  set(1, 1, 0);
  set(0, 1, 1);
  for (int i = 2; i < 19; i++) set(i, i, -2);
  // I3* (D~7 diagram): identity comp - d.1 - d.2 - d.3 - d.4 - d.5 with the
  // fork d.6, d.7 attached at d.5; multiplicity-one tails at both ends
  set(2, 3, 1);
  set(3, 4, 1);
  set(4, 5, 1);
  set(5, 6, 1);
  set(6, 7, 1);
  set(6, 8, 1);
  // I6 cycle: identity - s.1 - s.2 - s.3 - s.4 - s.5 - identity
  set(9, 10, 1);
  set(10, 11, 1);
  set(11, 12, 1);
  set(12, 13, 1);
  // I3 triangle: identity - c.1 - c.2 - identity
  set(14, 15, 1);
  // I2: the identity and non-identity components meet twice
  // (single non-identity comp per fiber; no off-diagonal terms remain)
  set(19, 19, -2);
  set(19, 1, 1);
  // section Q: passes through the simple fork component of I3*, the
  // component opposite the identity in I6, the identity component of I3,
  // and the non-identity component of every I2
  set(19, 2, 1);
  set(19, 11, 1);
  set(19, 16, 1);
  set(19, 17, 1);
  set(19, 18, 1);
  return L;
}

std::vector<std::vector<long>> standard_trivial(int n, const std::vector<int>& gens) {
  std::vector<std::vector<long>> out;
  for (int g : gens) {
    std::vector<long> e(n, 0);
    e[g] = 1;
    out.push_back(e);
  }
  return out;
}

}  // namespace

TEST_CASE("fiber catalog matches the classical tables") {
  KodairaFiber d4 = kodaira_info("D~4");
  CHECK(d4.label == "I0*");
  CHECK(d4.euler == 6);
  CHECK(d4.components == 5);
  CHECK(d4.rank == 4);
  KodairaFiber a1 = kodaira_info("A~1");
  CHECK(a1.label == "I2");
  CHECK(a1.euler == 2);
  CHECK(a1.rank == 1);
  KodairaFiber e8 = kodaira_info("E~8");
  CHECK(e8.label == "II*");
  CHECK(e8.euler == 10);
  CHECK(e8.components == 9);
  CHECK(e8.rank == 8);
  KodairaFiber iii = kodaira_info("III");
  CHECK(iii.alias == "A~1#");
  CHECK(iii.euler == 3);
  CHECK(iii.rank == 1);
  KodairaFiber i7s = kodaira_info("I7*");
  CHECK(i7s.alias == "D~11");
  CHECK(i7s.euler == 13);
  CHECK_THROWS(kodaira_info("D~3"));
  CHECK_THROWS(kodaira_info("Z~5"));
}

TEST_CASE("catalog identities hold across the whole range") {
  std::vector<std::string> labels = {"II", "III", "IV"};
  for (int n = 1; n <= 14; n++) labels.push_back("A~" + std::to_string(n));
  for (int n = 4; n <= 14; n++) labels.push_back("D~" + std::to_string(n));
  for (int n = 6; n <= 8; n++) labels.push_back("E~" + std::to_string(n));
  for (auto& l : labels) {
    KodairaFiber k = kodaira_info(l);
    // the component count always exceeds the lattice rank by one for
    // additive fibers; multiplicative I_n has rank n-1 with n components
    if (k.label[0] == 'I' && k.label.back() != '*' && k.label != "II" &&
        k.label != "III" && k.label != "IV") {
      CHECK(k.components == k.rank + 1);
      CHECK(k.euler == k.components);
    } else {
      CHECK(k.euler == k.rank + 2);
    }
    // alias round trip
    if (!k.alias.empty()) {
      KodairaFiber k2 = kodaira_info(k.alias);
      CHECK(k2.label == k.label);
      CHECK(k2.euler == k.euler);
      CHECK(k2.components == k.components);
      CHECK(k2.rank == k.rank);
    }
  }
}

TEST_CASE("configuration checks enforce Euler number and Shioda-Tate") {
  FiberConfiguration cfg;
  cfg.fibers = {"E~6", "D~6", "A~2", "A~2", "A~1"};
  cfg.rho = 20;
  ConfigCheck c = config_check(cfg);
  CHECK(c.euler_sum == 24);
  CHECK(c.forced_mw_rank == 1);
  CHECK(c.consistent);

  cfg.fibers = {"D~7", "A~2", "A~2", "A~2", "A~1", "A~1", "A~1"};
  cfg.rho = 18;
  c = config_check(cfg);
  CHECK(c.euler_sum == 24);
  CHECK(c.forced_mw_rank == 0);

  cfg.fibers = {"D~9", "A~2", "A~2", "A~2", "A~1", "A~1"};
  cfg.rho = 19;
  c = config_check(cfg);
  CHECK(c.euler_sum == 24);
  CHECK(c.forced_mw_rank == 0);

  // rho too small for the fiber ranks
  cfg.fibers = {"E~8", "E~8", "A~1", "A~1"};
  cfg.rho = 18;
  CHECK_THROWS(config_check(cfg));
}

TEST_CASE("every tabulated configuration is consistent") {
  std::vector<FiberConfiguration> rows = load_fiber_table(data_path("fibers.txt"));
  CHECK(rows.size() == 13);
  std::set<std::string> ids;
  for (auto& r : rows) {
    CAPTURE(r.id);
    ids.insert(r.id);
    ConfigCheck c = config_check(r);
    CHECK(c.euler_sum == 24);
    CHECK(c.forced_mw_rank == r.mw_rank);
    CHECK(c.consistent);
    // torsion only occurs in the lambda = 1 member of the degree-20 pencil
    if (r.id != "g31-1") CHECK(r.mw_torsion == 1);
  }
  CHECK(ids.size() == 13);
  CHECK(ids.count("g29") == 1);
  CHECK(ids.count("g31-1") == 1);
  auto it = std::find_if(rows.begin(), rows.end(),
                         [](const FiberConfiguration& r) { return r.id == "g31-1"; });
  CHECK(it->mw_torsion == 2);
}

TEST_CASE("Mordell-Weil group of the degree-40 quotient is infinite cyclic") {
  GramLattice pic = picard_g29();
  // trivial lattice of the E~6 + D~6 + 2A~2 + A~1 pencil inside the
  // twenty-curve basis: every basis curve except the a4-.2 section
  std::vector<int> gens;
  for (int i = 0; i < 20; i++)
    if (kBasis[i] != "a4-.2") gens.push_back(i);
  CHECK(gens.size() == 19);
  MWGroup mw = mw_group(pic, standard_trivial(20, gens));
  CHECK(mw.free_rank == 1);
  CHECK(mw.torsion.empty());

  // taking the full basis as trivial leaves nothing
  std::vector<int> all(20);
  for (int i = 0; i < 20; i++) all[i] = i;
  MWGroup zero = mw_group(pic, standard_trivial(20, all));
  CHECK(zero.free_rank == 0);
  CHECK(zero.torsion.empty());
}

TEST_CASE("the lambda = 1 pencil has Mordell-Weil group Z/2") {
  GramLattice L = lambda1_lattice();
  // height pairing: Q has height 2 chi + 2 (Q.O) - sum of contributions
  //   = 4 + 0 - (1 + 3/2 + 1/2 + 1/2 + 1/2) = 0, so Q is torsion
  // the Gram matrix has rank 19: exactly one integral relation, 2Q ~ trivial
  CHECK_THROWS(lattice_report(L));
  std::vector<int> triv;
  for (int i = 0; i < 19; i++) triv.push_back(i);
  MWGroup mw = mw_group(L, standard_trivial(20, triv));
  CHECK(mw.free_rank == 0);
  REQUIRE(mw.torsion.size() == 1);
  CHECK(mw.torsion[0] == 2);
}

TEST_CASE("Mordell-Weil computation is basis independent") {
  GramLattice pic = picard_g29();
  std::mt19937 rng(20260826);
  std::vector<int> gens;
  for (int i = 0; i < 20; i++)
    if (kBasis[i] != "a4-.2") gens.push_back(i);
  auto triv = standard_trivial(20, gens);
  for (int round = 0; round < 5; round++) {
    // random unimodular change of the trivial generators
    auto t2 = triv;
    for (int k = 0; k < 30; k++) {
      int i = (int)(rng() % t2.size());
      int j = (int)(rng() % t2.size());
      if (i == j) continue;
      long s = (rng() % 2) ? 1 : -1;
      for (int c = 0; c < 20; c++) t2[i][c] += s * t2[j][c];
    }
    MWGroup mw = mw_group(pic, t2);
    CHECK(mw.free_rank == 1);
    CHECK(mw.torsion.empty());
  }
}

TEST_CASE("fiber inference pins down the generic dodecic configuration") {
  InferenceConstraints C;
  C.known = {"D~5"};
  C.slot_rank_min = {1, 1, 1, 2, 2, 4};
  auto out = infer_config(C);
  REQUIRE(out.size() == 1);
  std::vector<std::string> want = {"A~1", "A~1", "A~1", "A~2", "A~2", "A~4", "D~5"};
  CHECK(out[0] == want);
}

TEST_CASE("fiber inference completes the degree-40 configuration") {
  InferenceConstraints C;
  C.known = {"E~6", "D~6"};
  C.slot_rank_min = {1, 2, 2};
  auto out = infer_config(C);
  REQUIRE(out.size() == 1);
  std::vector<std::string> want = {"A~1", "A~2", "A~2", "D~6", "E~6"};
  CHECK(out[0] == want);
}

TEST_CASE("fiber inference rejects an overfull budget") {
  InferenceConstraints C;
  C.known = {"E~8", "E~8"};
  C.slot_rank_min = {4, 4};
  auto out = infer_config(C);
  CHECK(out.empty());
}

TEST_CASE("the fibers of the degree-40 pencil over the coordinate points") {
  QuotientSurface S = quotient_equation(sys29(), std::nullopt);
  // over [1:0] (x3 = 0) the cover normalizes to an irreducible conic
  FiberCurve c3 = fiber_curve(S, Rational(1), Rational(0));
  CHECK(c3.components == 1);
  REQUIRE(c3.equations.size() == 1);
  // after collapsing the chart weights the branch is -64 b c + 3125 c^2
  const MultiPoly& eq = c3.equations[0];
  ExpVec j2(4, 0);
  j2[3] = 2;
  CHECK(eq.coeff(j2) == NFElem(Rational(1)));
  ExpVec bc(4, 0);
  bc[0] = 1;
  bc[2] = 1;
  CHECK(eq.coeff(bc) == NFElem(Rational(64)));
  ExpVec cc(4, 0);
  cc[2] = 2;
  CHECK(eq.coeff(cc) == NFElem(Rational(-3125)));

  FiberCurve c2 = fiber_curve(S, Rational(0), Rational(1));
  CHECK(c2.components == 1);
}

TEST_CASE("the marked fiber of the degree-20 pencil splits exactly at -8/17") {
  // base point [1 : -4 lambda (lambda + 1)], fiber curve
  //   t^2 = -16 l^3 (2l+1)^3 z2^4 s_l(z1, z2)
  QuotientSurface S = quotient_equation(sys31(), std::nullopt);
  std::vector<std::string> lv = {"l"};
  FieldPtr F = NumberField::rationals();
  MultiPoly l = MultiPoly::variable(lv, 0);
  MultiPoly one = MultiPoly::constant(lv, NFElem(Rational(1)));
  MultiPoly b0 = one;
  MultiPoly b1 = -(l * (l + one) * NFElem(Rational(4)));
  FiberCurve f = fiber_curve(S, b0, b1);
  REQUIRE(f.factors.size() == 3);
  const MultiPoly& content = f.factors[0];
  const MultiPoly& z2pow = f.factors[1];
  const MultiPoly& s = f.factors[2];
  // the power of z2 in front is exactly four
  CHECK(z2pow.total_degree() == 4);
  // the parameter content is -16 l^3 (2l+1)^3 up to the monic normalization
  {
    std::vector<std::string> tv = content.vars;
    int li = (int)(std::find(tv.begin(), tv.end(), "l") - tv.begin());
    MultiPoly lt = MultiPoly::variable(tv, li);
    MultiPoly u = MultiPoly::constant(tv, NFElem(Rational(1)));
    MultiPoly ref = lt * lt * lt * (lt * NFElem(Rational(2)) + u).pow(3) *
                    NFElem(Rational(-16));
    CHECK(content == ref);
  }
  // the primitive factor is s_l = z1^2 + (-71 l^2 - 52 l - 8) z1 z2 + ...
  {
    std::vector<std::string> tv = s.vars;
    auto idx = [&](const std::string& n) {
      return (int)(std::find(tv.begin(), tv.end(), n) - tv.begin());
    };
    int z1 = idx("z1"), z2 = idx("z2"), li = idx("l");
    ExpVec e(tv.size(), 0);
    e[z1] = 2;
    CHECK(s.coeff(e) == NFElem(Rational(1)));
    e = ExpVec(tv.size(), 0);
    e[z1] = 1;
    e[z2] = 1;
    e[li] = 2;
    CHECK(s.coeff(e) == NFElem(Rational(-71)));
    e[li] = 1;
    CHECK(s.coeff(e) == NFElem(Rational(-52)));
    e[li] = 0;
    CHECK(s.coeff(e) == NFElem(Rational(-8)));
    e = ExpVec(tv.size(), 0);
    e[z2] = 2;
    e[li] = 4;
    CHECK(s.coeff(e) == NFElem(Rational(8)));
    e[li] = 0;
    CHECK(s.coeff(e) == NFElem(Rational(4)));
    // completion of the square: s_l = (z1 - (71 l^2 + 52 l + 8)/2 z2)^2
    //   - l ((17 l + 8)/4)^3 z2^2
    MultiPoly z1p = MultiPoly::variable(tv, z1);
    MultiPoly z2p = MultiPoly::variable(tv, z2);
    MultiPoly lp = MultiPoly::variable(tv, li);
    MultiPoly u = MultiPoly::constant(tv, NFElem(Rational(1)));
    MultiPoly half = lp * lp * NFElem(Rational(71, 2)) + lp * NFElem(Rational(26)) +
                     u * NFElem(Rational(4));
    MultiPoly disc = (lp * NFElem(Rational(17, 4)) + u * NFElem(Rational(2))).pow(3) * lp;
    MultiPoly rhs = (z1p - half * z2p) * (z1p - half * z2p) - disc * z2p * z2p;
    CHECK(s == rhs);
  }

  // specialization: the double cover of the marked fiber is irreducible for
  // generic lambda, and splits into two lines exactly at lambda = -8/17
  for (Rational lam : {Rational(1), Rational(-1, 2), Rational(2, 7)}) {
    QuotientSurface Sl = quotient_equation(sys31(), lam);
    FiberCurve fl = fiber_curve(Sl, Rational(1), Rational(-4) * lam * (lam + 1));
    CHECK(fl.components == 1);
  }
  {
    Rational lam(-8, 17);
    QuotientSurface Sl = quotient_equation(sys31(), lam);
    FiberCurve fl = fiber_curve(Sl, Rational(1), Rational(-4) * lam * (lam + 1));
    CHECK(fl.components == 2);
  }
}
