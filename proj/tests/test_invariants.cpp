#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <numeric>

#include "refk3/invariants.hpp"
#include "refk3/refgroup.hpp"

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

NFElem fc(const FieldPtr& F, const Rational& v) {
  std::vector<Rational> c(F->degree(), Rational(0));
  c[0] = v;
  return NFElem(F, c);
}

MultiPoly table_poly(std::vector<std::string> vars, const FieldPtr& F,
                     const std::vector<std::pair<ExpVec, long>>& terms) {
  MultiPoly p(vars);
  for (auto& [e, c] : terms) p.insert_term(e, fc(F, Rational(c)));
  return p;
}

// the printed value of r_lambda for G31 (variables z1, z2, z4, l)
MultiPoly r_lambda_printed(const FieldPtr& F) {
  return table_poly(
      {"z1", "z2", "z4", "l"}, F,
      {{{3, 2, 0, 4}, -432},  {{3, 2, 0, 3}, -432},  {{3, 1, 1, 2}, -108},
       {{2, 3, 0, 6}, 12500}, {{2, 3, 0, 5}, 22500}, {{2, 3, 0, 4}, 10800},
       {{2, 3, 0, 3}, 864},   {{2, 2, 1, 4}, 4125},  {{2, 2, 1, 3}, 3420},
       {{2, 2, 1, 2}, 216},   {{2, 1, 2, 2}, 222},   {{2, 0, 3, 0}, 1},
       {{1, 4, 0, 3}, -432},  {{1, 3, 1, 3}, 900},   {{1, 3, 1, 2}, -108},
       {{1, 2, 2, 3}, -500},  {{1, 2, 2, 2}, 210},   {{1, 1, 3, 2}, -150},
       {{1, 1, 3, 1}, -24},   {{1, 1, 3, 0}, -2},    {{1, 0, 4, 0}, -2},
       {{0, 2, 3, 0}, 1},     {{0, 1, 4, 0}, -2},    {{0, 0, 5, 0}, 1}});
}

// specialize the symbolic (last-variable) parameter of a polynomial
MultiPoly specialize_last(const MultiPoly& p, const Rational& lambda,
                          std::vector<std::string> vars) {
  MultiPoly out(vars);
  for (auto& [e, c] : p.terms) {
    Rational l(1);
    for (int k = 0; k < e.back(); k++) l *= lambda;
    ExpVec ne(e.begin(), e.end() - 1);
    if (l != 0 || e.back() == 0) out.insert_term(ne, c * NFElem(l));
  }
  return out;
}

// the printed degree-20 right-hand side of the G29 model
MultiPoly g29_branch_printed(const FieldPtr& F) {
  return table_poly({"x2", "x3", "x4"}, F,
                    {{{5, 0, 2}, -64},
                     {{4, 4, 0}, 16},
                     {{3, 3, 1}, 32},
                     {{2, 2, 2}, 1800},
                     {{1, 6, 0}, -432},
                     {{1, 1, 3}, -5000},
                     {{0, 5, 1}, 432},
                     {{0, 0, 4}, 3125}});
}

// f_{3,lambda} = f3 + l * f1 * f2 with a trailing parameter variable
MultiPoly g31_pencil(const InvariantSystem& S) {
  std::vector<std::string> vars = {"x", "y", "z", "t", "l"};
  MultiPoly p(vars);
  for (auto& [e, c] : S.f[2].terms) p.insert_term({e[0], e[1], e[2], e[3], 0}, c);
  MultiPoly f12 = S.f[0] * S.f[1];
  for (auto& [e, c] : f12.terms) p.insert_term({e[0], e[1], e[2], e[3], 1}, c);
  return p;
}

}  // namespace

TEST_CASE("symmetrizer examples from section 2") {
  FieldPtr Q = NumberField::rationals();
  MultiPoly s41 = symmetrize({4, 1, 0, 0}, Q);
  CHECK(s41.terms.size() == 12);
  CHECK(s41.coeff({4, 0, 1, 0}) == NFElem(Rational(1)));
  CHECK(s41.coeff({0, 1, 0, 4}) == NFElem(Rational(1)));
  CHECK(symmetrize({1, 0, 0, 0}, Q).terms.size() == 4);
  CHECK(symmetrize({2, 2, 2, 2}, Q).terms.size() == 1);
  CHECK(symmetrize({4, 4, 0, 0}, Q).terms.size() == 6);
  // S4-invariance of the output
  MultiPoly s = symmetrize({3, 2, 1, 0}, Q);
  CHECK(s.terms.size() == 24);
  for (auto& [e, c] : s.terms) CHECK(c == NFElem(Rational(1)));
}

TEST_CASE("weight normalization") {
  CHECK(wps_normalize({8, 12, 24, 60}).weights == std::vector<int>{2, 1, 2, 5});
  CHECK(wps_normalize({2, 20, 30, 60}).weights == std::vector<int>{1, 2, 3, 6});
  CHECK(wps_normalize({3, 5, 10}).weights == std::vector<int>{3, 1, 2});
  CHECK(wps_normalize({2, 5, 10}).weights == std::vector<int>{1, 1, 1});
  CHECK(wps_normalize({2, 3, 5, 10}).weights == std::vector<int>{2, 3, 5, 10});
  // every proper subset has coprime gcd afterwards
  auto w = wps_normalize({8, 12, 24, 60}).weights;
  for (size_t i = 0; i < w.size(); i++) {
    int g = 0;
    for (size_t j = 0; j < w.size(); j++)
      if (j != i) g = std::gcd(g, w[j]);
    CHECK(g == 1);
  }
}

TEST_CASE("printed G31 invariants are invariant") {
  InvariantSystem& S = sys31();
  CHECK(S.degrees == std::vector<int>{8, 12, 20, 24});
  for (int i = 0; i < 4; i++) {
    CHECK(S.f[i].total_degree() == S.degrees[i]);
    CHECK(verify_invariance(S.f[i], g31()));
  }
  // a non-invariant rejected
  MultiPoly x8 = MultiPoly::monomial({"x", "y", "z", "t"}, {8, 0, 0, 0},
                                     NFElem(Rational(1)));
  CHECK_FALSE(verify_invariance(x8, g31()));
}

TEST_CASE("G31 relation: structure and certified identity") {
  InvariantSystem& S = sys31();
  CHECK(S.J.total_degree() == 60);
  CHECK((long)g31().reflections().size() == 60);
  CHECK_FALSE(S.gamma2.is_zero());
  CHECK(verify_relation(S));
}

TEST_CASE("G31 quotient equation reproduces the printed r_lambda") {
  InvariantSystem& S = sys31();
  QuotientSurface Q = quotient_equation(S, std::nullopt);
  CHECK(Q.weights == std::vector<int>{1, 1, 1, 3});
  MultiPoly expected = r_lambda_printed(S.F);
  CHECK(Q.branch == expected);
  // the five singular values, specialized coefficient-for-coefficient
  for (Rational l : {Rational(-8, 25), Rational(-81, 175), Rational(1),
                     Rational(-1, 3), Rational(-1, 2)}) {
    QuotientSurface Qn = quotient_equation(S, l);
    CHECK(Qn.branch == specialize_last(expected, l, {"z1", "z2", "z4"}));
    CHECK(Qn.note.empty());
  }
  // lambda = 0 degenerates (Remark 6.3)
  QuotientSurface Q0 = quotient_equation(S, Rational(0));
  CHECK_FALSE(Q0.note.empty());
  MultiPoly r0 = table_poly({"z1", "z2", "z4"}, S.F,
                            {{{2, 0, 3}, 1},
                             {{0, 2, 3}, 1},
                             {{0, 0, 5}, 1},
                             {{1, 1, 3}, -2},
                             {{1, 0, 4}, -2},
                             {{0, 1, 4}, -2}});
  CHECK(Q0.branch == r0);
}

TEST_CASE("G31 special lambda values") {
  InvariantSystem& S = sys31();
  MultiPoly f1f2 = S.f[0] * S.f[1];
  // parabolic classes identified by their orbit sizes (960, 480, 60)
  NFVec v145 = parabolic_fixed_vector(g31(), {0, 1, 3});
  NFVec v245 = parabolic_fixed_vector(g31(), {1, 3, 4});
  NFVec v1234 = parabolic_fixed_vector(g31(), {0, 3, 4});
  CHECK(orbit_size_point(g31(), v145).size == 960);
  CHECK(orbit_size_point(g31(), v245).size == 480);
  CHECK(orbit_size_point(g31(), v1234).size == 60);
  CHECK(special_lambda(stabilizers(g31(), v145), S.f[2], f1f2) == Rational(-8, 25));
  CHECK(special_lambda(stabilizers(g31(), v245), S.f[2], f1f2) == Rational(-81, 175));
  CHECK(special_lambda(stabilizers(g31(), v1234), S.f[2], f1f2) == Rational(0));
}

TEST_CASE("G31 Springer lines lie on every pencil member") {
  InvariantSystem& S = sys31();
  MultiPoly pencil = g31_pencil(S);
  for (int e : {8, 12}) {
    SpringerData sd = springer_data(g31(), e);
    REQUIRE(sd.V_e.size() == 2);
    CHECK(line_on_surface(pencil, sd.V_e[0], sd.V_e[1]));
  }
  // the regular e = 20 eigenvector is not in the base locus
  SpringerData sd20 = springer_data(g31(), 20);
  REQUIRE(sd20.V_e.size() == 1);
  NFElem a = eval_at_vector(S.f[2], sd20.V_e[0]);
  NFElem b = eval_at_vector(S.f[0] * S.f[1], sd20.V_e[0]);
  CHECK_FALSE((a.is_zero() && b.is_zero()));
}

TEST_CASE("G29 invariant system and the printed degree-20 model") {
  InvariantSystem& S = sys29();
  CHECK(S.degrees == std::vector<int>{4, 8, 12, 20});
  CHECK(S.J.total_degree() == 40);
  CHECK(verify_relation(S));
  // f1 is the printed quartic
  FieldPtr F = S.F;
  MultiPoly f1p = symmetrize({4, 0, 0, 0}, F) +
                  symmetrize({2, 2, 0, 0}, F) * fc(F, Rational(-6));
  CHECK(S.f[0] == f1p);
  for (int i = 0; i < 4; i++) CHECK(verify_invariance(S.f[i], g29()));
  TorusMatch tm = match_g29_remark(S);
  CHECK(tm.matched);
  QuotientSurface Q = quotient_equation(S, std::nullopt);
  CHECK(Q.weights == std::vector<int>{2, 3, 5, 10});
  CHECK(Q.branch == g29_branch_printed(F));
  // restrictions to the coordinate curves C2 and C3 (Prop 4.4)
  MultiPoly c2 = table_poly({"x2", "x3", "x4"}, F, {{{0, 5, 1}, 432}, {{0, 0, 4}, 3125}});
  MultiPoly c3 = table_poly({"x2", "x3", "x4"}, F, {{{5, 0, 2}, -64}, {{0, 0, 4}, 3125}});
  MultiPoly r2(Q.branch.vars), r3(Q.branch.vars);
  for (auto& [e, c] : Q.branch.terms) {
    if (e[0] == 0) r2.insert_term(e, c);
    if (e[1] == 0) r3.insert_term(e, c);
  }
  CHECK(r2 == c2);
  CHECK(r3 == c3);
}

TEST_CASE("G30 invariant system") {
  InvariantSystem& S = sys30();
  CHECK(S.degrees == std::vector<int>{2, 12, 20, 30});
  CHECK(S.J.total_degree() == 60);
  CHECK(verify_relation(S));
  CHECK(verify_invariance(S.f[0], g30()));
  CHECK(verify_invariance(S.f[1], g30()));
  QuotientSurface Q = quotient_equation(S, std::nullopt);
  CHECK(Q.weights == std::vector<int>{1, 2, 3, 6});
  // weighted-homogeneous of degree 12 for weights (1,2,3), any lambda
  auto deg = Q.branch.weighted_degree({1, 2, 3, 0});
  REQUIRE(deg.has_value());
  CHECK(*deg == 12);
  // pure y4 power normalized to the printed convention r(0,0,1) = 1
  CHECK(Q.branch.coeff({0, 0, 4, 0}) == fc(S.F, Rational(1)));
}

TEST_CASE("G30 special lambda values are pairwise distinct") {
  InvariantSystem& S = sys30();
  MultiPoly f16 = S.f[0].pow(6);
  std::vector<std::vector<int>> parts = {{1, 2, 3}, {0, 2, 3}, {0, 1, 3}, {0, 1, 2}};
  std::vector<std::size_t> orbits;
  std::vector<NFElem> lams;
  for (auto& gens : parts) {
    NFVec v = parabolic_fixed_vector(g30(), gens);
    orbits.push_back(orbit_size_point(g30(), v).size);
    lams.push_back(special_lambda_nf(stabilizers(g30(), v), S.f[1], f16));
  }
  std::sort(orbits.begin(), orbits.end());
  CHECK(orbits == std::vector<std::size_t>{60, 300, 360, 600});
  for (size_t i = 0; i < lams.size(); i++)
    for (size_t j = i + 1; j < lams.size(); j++) CHECK(lams[i] != lams[j]);
}

TEST_CASE("conic containment in the Mukai quartic") {
  // C1 and C2 of section 4.5 lie on Z(f1) of G29; a perturbed quadric does not
  FieldPtr Q10 = NumberField::quadratic(5 * 2);
  FieldPtr Q = NumberField::rationals();
  std::vector<std::string> v = {"x", "y", "z", "t"};
  MultiPoly f1 = symmetrize({4, 0, 0, 0}, Q) + symmetrize({2, 2, 0, 0}, Q) * NFElem(Rational(-6));
  MultiPoly lin(v);
  lin.insert_term({1, 0, 0, 0}, NFElem(Rational(1)));
  lin.insert_term({0, 1, 0, 0}, NFElem(Rational(1)));
  lin.insert_term({0, 0, 1, 0}, NFElem(Rational(1)));
  for (int sgn : {1, -1}) {
    MultiPoly quad(v);
    quad.insert_term({0, 2, 0, 0}, NFElem(Rational(1)));
    quad.insert_term({0, 1, 1, 0}, NFElem(Rational(1)));
    quad.insert_term({0, 0, 2, 0}, NFElem(Rational(1)));
    // (3 +- sqrt(10)) / 2
    quad.insert_term({0, 0, 0, 2},
                     NFElem(Q10, {Rational(3, 2), Rational(sgn, 2)}));
    CHECK(contains_curve(f1, lin, quad));
    MultiPoly bad = quad;
    bad.insert_term({0, 0, 0, 2}, NFElem(Rational(1)));
    CHECK_FALSE(contains_curve(f1, lin, bad));
  }
}

TEST_CASE("invariant system round trip") {
  InvariantSystem& S = sys31();
  std::string path = "invsys-roundtrip.tmp";
  REQUIRE(save_invariant_system(S, path));
  auto L = load_invariant_system(g31(), path);
  REQUIRE(L.has_value());
  CHECK(L->group == S.group);
  CHECK(L->degrees == S.degrees);
  CHECK(L->gamma2 == S.gamma2);
  for (int i = 0; i < 4; i++) CHECK(L->f[i] == S.f[i]);
  CHECK(L->J == S.J);
  CHECK(L->P_fb == S.P_fb);
  std::remove(path.c_str());
}
