// Fixed matrix models of the three rank-4 reflection groups used throughout:
// G29 and G31 over Q(i) with the explicit generator matrices, and G30 = W(H4)
// in the standard Coxeter representation over Q(sqrt 5).
#include "refk3/refgroup.hpp"

namespace refk3 {

namespace {

// entry a + b*g where g is the field generator
NFElem ent(const FieldPtr& F, const Rational& a, const Rational& b) {
  return NFElem(F, {a, b});
}

NFElem zero_of(const FieldPtr& F) {
  return NFElem(F, std::vector<Rational>(F->degree(), Rational(0)));
}

NFMat mat_rational(const FieldPtr& F, const std::vector<std::vector<int>>& m,
                   const Rational& scale = Rational(1)) {
  NFMat r(4, NFVec(4, zero_of(F)));
  for (int i = 0; i < 4; i++)
    for (int j = 0; j < 4; j++) r[i][j] = ent(F, Rational(m[i][j]) * scale, 0);
  return r;
}

}  // namespace

GroupModel g29_model() {
  FieldPtr F = NumberField::quadratic(-1);  // Q(i)
  Rational h(1, 2);
  NFMat s1 = mat_rational(F, {{1, 0, 0, 0}, {0, 1, 0, 0}, {0, 0, 1, 0}, {0, 0, 0, -1}});
  // (1/2) [[1,1,i,i],[1,1,-i,-i],[-i,i,1,-1],[-i,i,-1,1]]
  NFMat s2(4, NFVec(4, zero_of(F)));
  {
    int re[4][4] = {{1, 1, 0, 0}, {1, 1, 0, 0}, {0, 0, 1, -1}, {0, 0, -1, 1}};
    int im[4][4] = {{0, 0, 1, 1}, {0, 0, -1, -1}, {-1, 1, 0, 0}, {-1, 1, 0, 0}};
    for (int i = 0; i < 4; i++)
      for (int j = 0; j < 4; j++)
        s2[i][j] = ent(F, Rational(re[i][j]) * h, Rational(im[i][j]) * h);
  }
  NFMat s3 = mat_rational(F, {{0, 1, 0, 0}, {1, 0, 0, 0}, {0, 0, 1, 0}, {0, 0, 0, 1}});
  NFMat s4 = mat_rational(F, {{1, 0, 0, 0}, {0, 0, 1, 0}, {0, 1, 0, 0}, {0, 0, 0, 1}});
  return GroupModel{F, {s1, s2, s3, s4}, {4, 8, 12, 20}, {0, 8, 12, 16}, "G29"};
}

GroupModel g31_model() {
  FieldPtr F = NumberField::quadratic(-1);  // Q(i)
  Rational h(1, 2);
  NFMat s1 = mat_rational(F, {{0, 1, 0, 0}, {1, 0, 0, 0}, {0, 0, 1, 0}, {0, 0, 0, 1}});
  NFMat s2 = mat_rational(F, {{1, 0, 0, 0}, {0, 0, 1, 0}, {0, 1, 0, 0}, {0, 0, 0, 1}});
  NFMat s3 = mat_rational(F, {{1, 0, 0, 0}, {0, 1, 0, 0}, {0, 0, -1, 0}, {0, 0, 0, 1}});
  NFMat s4 = mat_rational(
      F, {{1, -1, -1, -1}, {-1, 1, -1, -1}, {-1, -1, 1, -1}, {-1, -1, -1, 1}}, h);
  NFMat s5(4, NFVec(4, zero_of(F)));
  s5[0][1] = ent(F, 0, 1);
  s5[1][0] = ent(F, 0, -1);
  s5[2][2] = ent(F, 1, 0);
  s5[3][3] = ent(F, 1, 0);
  return GroupModel{F, {s1, s2, s3, s4, s5}, {8, 12, 20, 24}, {0, 12, 16, 28}, "G31"};
}

GroupModel g30_model() {
  // Standard Coxeter representation of W(H4) over Q(sqrt 5) on the simple-root
  // basis: sigma_i(alpha_j) = alpha_j - 2 B_ij alpha_i with B_ii = 1,
  // B_12 = -cos(pi/5) = -(1+sqrt5)/4, B_23 = B_34 = -cos(pi/3) = -1/2.
  FieldPtr F = NumberField::quadratic(5);
  NFElem zero = zero_of(F);
  NFElem one = ent(F, 1, 0);
  std::vector<std::vector<NFElem>> B(4, std::vector<NFElem>(4, zero));
  for (int i = 0; i < 4; i++) B[i][i] = one;
  NFElem b12 = ent(F, Rational(-1, 4), Rational(-1, 4));  // -(1+sqrt5)/4
  NFElem b = ent(F, Rational(-1, 2), 0);
  B[0][1] = B[1][0] = b12;
  B[1][2] = B[2][1] = b;
  B[2][3] = B[3][2] = b;
  std::vector<NFMat> gens;
  for (int i = 0; i < 4; i++) {
    NFMat s(4, NFVec(4, zero));
    for (int k = 0; k < 4; k++)
      for (int j = 0; j < 4; j++) {
        s[k][j] = (k == j) ? one : zero;
        if (k == i) s[k][j] = s[k][j] - B[i][j] - B[i][j];
      }
    gens.push_back(s);
  }
  return GroupModel{F, gens, {2, 12, 20, 30}, {0, 10, 18, 28}, "G30"};
}

}  // namespace refk3
