#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <map>
#include <random>
#include <vector>

#include "refk3/invariants.hpp"
#include "refk3/refgroup.hpp"
#include "refk3/singularities.hpp"

using namespace refk3;

namespace {

MatrixGroup& g29() {
  static MatrixGroup W = build_group(g29_model());
  return W;
}
MatrixGroup& g30() {
  static MatrixGroup W = build_group(g30_model());
  return W;
}
MatrixGroup& g31() {
  static MatrixGroup W = build_group(g31_model());
  return W;
}

InvariantSystem& sys29() {
  static InvariantSystem S = invariant_system_cached(g29());
  return S;
}
InvariantSystem& sys30() {
  static InvariantSystem S = invariant_system_cached(g30());
  return S;
}
InvariantSystem& sys31() {
  static InvariantSystem S = invariant_system_cached(g31());
  return S;
}

NFElem fc(const Rational& v) { return NFElem(v); }

MultiPoly table_poly(std::vector<std::string> vars,
                     const std::vector<std::pair<ExpVec, Rational>>& terms) {
  MultiPoly p(vars);
  for (auto& [e, c] : terms) p.insert_term(e, fc(c));
  return p;
}

// the smooth conic and the cubic of the lambda = 1 factorization
MultiPoly conic_q1() {
  return table_poly({"z1", "z2", "z4"}, {{{1, 1, 0}, Rational(1)},
                                         {{0, 2, 0}, Rational(-1, 108)},
                                         {{0, 1, 1}, Rational(1, 54)},
                                         {{0, 0, 2}, Rational(-1, 108)}});
}
MultiPoly cubic_c1() {
  return table_poly({"z1", "z2", "z4"}, {{{2, 1, 0}, Rational(1)},
                                         {{1, 2, 0}, Rational(-54)},
                                         {{2, 0, 1}, Rational(1, 8)},
                                         {{1, 1, 1}, Rational(-9)},
                                         {{1, 0, 2}, Rational(-1, 4)},
                                         {{0, 0, 3}, Rational(1, 8)}});
}

// the branch sextic of the double cover at a given parameter value
MultiPoly branch_sextic(const Rational& lambda) {
  QuotientSurface Q = quotient_equation(sys31(), lambda);
  MultiPoly z2 = MultiPoly::variable(Q.branch.vars, 1);
  return z2 * Q.branch;
}

// homogenize a local polynomial in (u, v) to a plane curve singular at [0:0:1]
MultiPoly homogenize(const MultiPoly& f) {
  long d = f.total_degree();
  MultiPoly out(std::vector<std::string>{"x", "y", "z"});
  for (auto& [e, c] : f.terms)
    out.insert_term({e[0], e[1], (int)(d - e[0] - e[1])}, c);
  return out;
}

MultiPoly local_poly(const std::vector<std::pair<ExpVec, Rational>>& terms) {
  return table_poly({"u", "v"}, terms);
}

MultiPoly linear_change(const MultiPoly& f, long a, long b, long c, long d) {
  std::vector<std::string> uv = {"u", "v"};
  MultiPoly nu = table_poly(uv, {{{1, 0}, Rational(a)}, {{0, 1}, Rational(b)}});
  MultiPoly nv = table_poly(uv, {{{1, 0}, Rational(c)}, {{0, 1}, Rational(d)}});
  return f.substitute({nu, nv});
}

std::vector<NFElem> qpoint(const std::vector<Rational>& p) {
  std::vector<NFElem> out;
  for (auto& x : p) out.push_back(fc(x));
  return out;
}

bool has_rational_point(const std::vector<CurveSingularityReport>& reports,
                        const std::vector<Rational>& p, const ADEType& t) {
  for (auto& r : reports) {
    if (!(r.type == t)) continue;
    bool ok = true;
    for (int i = 0; i < 3; i++) {
      if (!r.point[i].is_rational_value() || r.point[i].rat() != p[i]) ok = false;
    }
    if (ok) return true;
  }
  return false;
}

std::vector<std::string> type_multiset(const SurfaceSingularityTable& T) {
  std::vector<std::string> v;
  for (auto& [lbl, t] : T.entries) v.push_back(t.str());
  std::sort(v.begin(), v.end());
  return v;
}

std::vector<std::string> sorted_types(std::vector<std::string> v) {
  std::sort(v.begin(), v.end());
  return v;
}

// eq. (4.2): 64 b^5 = c P29(b, c, j)
MultiPoly g29_chart_equation() {
  std::vector<std::string> bcj = {"b", "c", "j"};
  MultiPoly P = table_poly(bcj, {{{4, 0, 0}, Rational(16)},
                                 {{3, 0, 0}, Rational(32)},
                                 {{2, 0, 0}, Rational(1800)},
                                 {{1, 1, 0}, Rational(-432)},
                                 {{1, 0, 0}, Rational(-5000)},
                                 {{0, 1, 0}, Rational(432)},
                                 {{0, 0, 0}, Rational(3125)},
                                 {{0, 0, 2}, Rational(-1)}});
  MultiPoly lhs = table_poly(bcj, {{{5, 0, 0}, Rational(64)}});
  MultiPoly c = MultiPoly::variable(bcj, 1);
  return lhs - c * P;
}

// the four special G30 parameters, keyed by the orbit size of the seed point
std::map<std::size_t, Rational>& g30_special_lambdas() {
  static std::map<std::size_t, Rational> out = [] {
    std::map<std::size_t, Rational> m;
    MultiPoly f16 = sys30().f[0].pow(6);
    for (auto& gens : std::vector<std::vector<int>>{
             {1, 2, 3}, {0, 2, 3}, {0, 1, 3}, {0, 1, 2}}) {
      NFVec v = parabolic_fixed_vector(g30(), gens);
      std::size_t orb = orbit_size_point(g30(), v).size;
      m[orb] = special_lambda(stabilizers(g30(), v), sys30().f[1], f16);
    }
    return m;
  }();
  return out;
}

}  // namespace

TEST_CASE("McKay types from stabilizer probes") {
  GroupProbe c5{5, true, false};
  GroupProbe q8{8, false, true};
  GroupProbe c1{1, true, false};
  GroupProbe c2{2, true, false};
  GroupProbe q12{12, false, true};
  CHECK(mckay_type(c5) == ADEType{'A', 4});
  CHECK(mckay_type(q8) == ADEType{'D', 4});
  CHECK(mckay_type(c2) == ADEType{'A', 1});
  CHECK(mckay_type(q12) == ADEType{'D', 5});
  CHECK(!mckay_type(c1).has_value());
  GroupProbe bad{24, false, false};
  CHECK_THROWS(mckay_type(bad));
}

TEST_CASE("cuspidal cubic is A2 at the origin") {
  MultiPoly C = homogenize(local_poly({{{0, 2}, Rational(1)}, {{3, 0}, Rational(1)}}));
  std::vector<NFElem> p = qpoint({Rational(0), Rational(0), Rational(1)});
  CHECK(classify_ade(C, p) == ADEType{'A', 2});
  CHECK(milnor_number(C, p) == 2);
}

TEST_CASE("normal forms are stable under random coordinate changes") {
  std::vector<std::pair<ADEType, MultiPoly>> forms;
  for (int n = 1; n <= 8; n++)
    forms.push_back({ADEType{'A', n},
                     local_poly({{{2, 0}, Rational(1)}, {{0, n + 1}, Rational(1)}})});
  for (int n = 4; n <= 8; n++)
    forms.push_back({ADEType{'D', n},
                     local_poly({{{2, 1}, Rational(1)}, {{0, n - 1}, Rational(1)}})});
  forms.push_back({ADEType{'E', 6},
                   local_poly({{{3, 0}, Rational(1)}, {{0, 4}, Rational(1)}})});
  forms.push_back({ADEType{'E', 7},
                   local_poly({{{3, 0}, Rational(1)}, {{1, 3}, Rational(1)}})});
  forms.push_back({ADEType{'E', 8},
                   local_poly({{{3, 0}, Rational(1)}, {{0, 5}, Rational(1)}})});
  std::mt19937 rng(20260826);
  std::uniform_int_distribution<long> coef(-4, 4);
  std::vector<NFElem> origin = qpoint({Rational(0), Rational(0), Rational(1)});
  for (auto& [t, f] : forms) {
    int previous_mu = -1;
    for (int trial = 0; trial < 20; trial++) {
      long a, b, c, d;
      do {
        a = coef(rng), b = coef(rng), c = coef(rng), d = coef(rng);
      } while (a * d - b * c == 0);
      MultiPoly C = homogenize(linear_change(f, a, b, c, d));
      CHECK(classify_ade(C, origin) == t);
      int mu = milnor_number(C, origin);
      CHECK(mu == t.mu());
      if (previous_mu >= 0) CHECK(mu == previous_mu);
      previous_mu = mu;
    }
  }
}

TEST_CASE("classifier rejects non-simple points") {
  // multiplicity 4 at the origin
  MultiPoly C = homogenize(local_poly({{{4, 0}, Rational(1)}, {{0, 5}, Rational(1)}}));
  CHECK_THROWS(classify_ade(C, qpoint({Rational(0), Rational(0), Rational(1)})));
}

TEST_CASE("smooth conic has no singular points") {
  MultiPoly q1 = conic_q1();
  CHECK(curve_is_squarefree(q1));
  CHECK(singular_points_curve(q1).empty());
}

TEST_CASE("the quintic at lambda 1 factors as -864 q1 c1") {
  QuotientSurface Q = quotient_equation(sys31(), Rational(1));
  MultiPoly prod = conic_q1() * cubic_c1() * fc(Rational(-864));
  CHECK(Q.branch == prod);
}

TEST_CASE("singular points of the branch sextic at lambda 1") {
  MultiPoly C = branch_sextic(Rational(1));
  std::vector<UnresolvedOrbit> unres;
  auto reports = singular_points_curve(C, &unres);
  CHECK(unres.empty());
  CHECK(reports.size() == 6);
  CHECK(has_rational_point(reports, {Rational(1), Rational(0), Rational(0)},
                           ADEType{'D', 6}));
  CHECK(has_rational_point(reports, {Rational(1), Rational(0), Rational(1)},
                           ADEType{'A', 3}));
  CHECK(has_rational_point(reports, {Rational(1), Rational(3), Rational(21)},
                           ADEType{'A', 5}));
  CHECK(has_rational_point(reports, {Rational(1), Rational(1, 27), Rational(-1, 3)},
                           ADEType{'A', 2}));
  // the remaining pair is conjugate over Q(sqrt 33)
  int quadratic_a1 = 0;
  for (auto& r : reports)
    if (r.F->degree() == 2 && r.type == ADEType{'A', 1}) quadratic_a1++;
  CHECK(quadratic_a1 == 2);
  // every reported point annihilates the curve and both affine partials
  for (auto& r : reports) {
    MultiPoly Ce = C;  // evaluate C and its partials at the reported point
    CHECK(Ce.eval(r.point).is_zero());
    for (int i = 0; i < 3; i++) CHECK(C.derivative(i).eval(r.point).is_zero());
  }
}

TEST_CASE("singular points of the branch sextic at lambda -1/2") {
  MultiPoly C = branch_sextic(Rational(-1, 2));
  std::vector<UnresolvedOrbit> unres;
  auto reports = singular_points_curve(C, &unres);
  CHECK(unres.empty());
  CHECK(has_rational_point(reports, {Rational(1), Rational(1, 32), Rational(7, 8)},
                           ADEType{'A', 1}));
  CHECK(has_rational_point(reports, {Rational(1), Rational(-16), Rational(-16)},
                           ADEType{'A', 1}));
  CHECK(has_rational_point(reports, {Rational(0), Rational(1), Rational(1)},
                           ADEType{'A', 3}));
  int quadratic_a2 = 0;
  for (auto& r : reports)
    if (r.F->degree() == 2 && r.type == ADEType{'A', 2}) quadratic_a2++;
  CHECK(quadratic_a2 == 2);
}

TEST_CASE("base point types depend on the parameter") {
  std::vector<Rational> d6 = {Rational(1), Rational(0), Rational(0)};
  std::vector<Rational> a3 = {Rational(1), Rational(0), Rational(1)};
  CHECK(classify_ade(branch_sextic(Rational(-8, 25)), qpoint(d6)) == ADEType{'D', 6});
  CHECK(classify_ade(branch_sextic(Rational(-1, 4)), qpoint(d6)) == ADEType{'D', 6});
  CHECK(classify_ade(branch_sextic(Rational(-1, 4)), qpoint(a3)) == ADEType{'A', 3});
  CHECK(classify_ade(branch_sextic(Rational(-1, 3)), qpoint(a3)) == ADEType{'D', 5});
}

TEST_CASE("quotient singularity tables for the degree-20 pencil") {
  std::vector<std::pair<Rational, std::vector<std::string>>> rows = {
      {Rational(-8, 25), {"A2", "A2", "A3", "D5", "D6"}},
      {Rational(-81, 175), {"A1", "A2", "A3", "D6", "E6"}},
      {Rational(1), {"A1", "A1", "A2", "A3", "A5", "D6"}},
      {Rational(-1, 3), {"A1", "A2", "A2", "A2", "D5", "D6"}},
      {Rational(-1, 2), {"A1", "A1", "A2", "A2", "A3", "A3", "D6"}},
      {Rational(-1, 4), {"A1", "A1", "A2", "A2", "A2", "A3", "D6"}}};
  for (auto& [lam, expected] : rows) {
    QuotientSurface Q = quotient_equation(sys31(), lam);
    SurfaceSingularityTable T = surface_singularities(Q);
    CHECK(type_multiset(T) == sorted_types(expected));
    int msum = 0;
    for (auto& [lbl, t] : T.entries) msum += t.mu();
    CHECK(T.total_milnor == msum);
    CHECK(T.total_milnor == (lam == Rational(-1, 4) ? 17 : 18));
  }
}

TEST_CASE("quotient singularity tables for the dodecic pencil") {
  std::map<std::size_t, std::vector<std::string>> rows = {
      {60, {"E8", "A2", "A2", "A2", "A1", "A1", "A1", "A1"}},
      {300, {"E6", "A4", "A2", "A2", "A1", "A1", "A1", "A1"}},
      {360, {"D7", "A2", "A2", "A2", "A2", "A1", "A1", "A1"}},
      {600, {"D5", "A4", "A2", "A2", "A2", "A1", "A1", "A1"}}};
  auto& lams = g30_special_lambdas();
  REQUIRE(lams.size() == 4);
  for (auto& [orb, expected] : rows) {
    QuotientSurface Q = quotient_equation(sys30(), lams.at(orb));
    SurfaceSingularityTable T = surface_singularities(Q);
    CHECK(type_multiset(T) == sorted_types(expected));
  }
  // a parameter away from the four special values: generic table
  Rational generic(7, 5);
  for (auto& [orb, lam] : lams) REQUIRE(lam != generic);
  SurfaceSingularityTable T =
      surface_singularities(quotient_equation(sys30(), generic));
  CHECK(type_multiset(T) ==
        sorted_types({"A4", "A2", "A2", "A2", "A2", "A1", "A1", "A1", "A1", "A1"}));
}

TEST_CASE("stabilizer table for the degree-40 quotient") {
  QuotientSurface Q = quotient_equation(sys29(), std::nullopt);
  SurfaceSingularityTable T = surface_singularities(Q, &g29());
  CHECK(type_multiset(T) == sorted_types({"D4", "A4", "A4", "A2", "A2", "A2", "A1"}));
  CHECK(T.total_milnor == 19);
}

TEST_CASE("chart verification of listed points") {
  MultiPoly E = g29_chart_equation();
  CHECK(verify_singular_point({E},
                              qpoint({Rational(-25, 2), Rational(3125, 54), Rational(0)})));
  // a smooth point of the same chart: 64 = -27 c at b = 1, j = 0
  CHECK_FALSE(verify_singular_point({E},
                                    qpoint({Rational(1), Rational(-64, 27), Rational(0)})));
  QuotientSurface Q = quotient_equation(sys29(), std::nullopt);
  CHECK(verify_singular_point({Q.defining},
                              qpoint({Rational(1), Rational(0), Rational(0), Rational(0)})));
  CHECK_THROWS(verify_singular_point({E}, qpoint({Rational(0), Rational(0)})));
}

TEST_CASE("separation of singular points by the fibrations") {
  CHECK(separation_check(quotient_equation(sys31(), Rational(-1, 4))));
  CHECK_FALSE(separation_check(quotient_equation(sys31(), Rational(-8, 17))));
  for (auto& [orb, lam] : g30_special_lambdas())
    CHECK(separation_check(quotient_equation(sys30(), lam)));
}
