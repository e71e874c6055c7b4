#include "refk3/nflinalg.hpp"

#include <stdexcept>

namespace refk3 {

NFMat nf_identity(int n) {
  NFMat m(n, NFVec(n, NFElem(Rational(0))));
  for (int i = 0; i < n; i++) m[i][i] = NFElem(Rational(1));
  return m;
}

NFMat nf_mat_mul(const NFMat& a, const NFMat& b) {
  int n = a.size(), k = b.size(), m = b.empty() ? 0 : b[0].size();
  NFMat r(n, NFVec(m, NFElem(Rational(0))));
  for (int i = 0; i < n; i++)
    for (int t = 0; t < k; t++) {
      if (a[i][t].is_zero()) continue;
      for (int j = 0; j < m; j++)
        if (!b[t][j].is_zero()) r[i][j] = r[i][j] + a[i][t] * b[t][j];
    }
  return r;
}

NFVec nf_mat_vec(const NFMat& a, const NFVec& v) {
  NFVec r(a.size(), NFElem(Rational(0)));
  for (size_t i = 0; i < a.size(); i++)
    for (size_t j = 0; j < v.size(); j++)
      if (!a[i][j].is_zero() && !v[j].is_zero()) r[i] = r[i] + a[i][j] * v[j];
  return r;
}

NFMat nf_mat_add(const NFMat& a, const NFMat& b) {
  NFMat r = a;
  for (size_t i = 0; i < r.size(); i++)
    for (size_t j = 0; j < r[i].size(); j++) r[i][j] = r[i][j] + b[i][j];
  return r;
}

NFMat nf_mat_sub(const NFMat& a, const NFMat& b) {
  NFMat r = a;
  for (size_t i = 0; i < r.size(); i++)
    for (size_t j = 0; j < r[i].size(); j++) r[i][j] = r[i][j] - b[i][j];
  return r;
}

NFMat nf_mat_scale(const NFMat& a, const NFElem& s) {
  NFMat r = a;
  for (auto& row : r)
    for (auto& x : row) x = x * s;
  return r;
}

NFMat nf_transpose(const NFMat& a) {
  if (a.empty()) return a;
  NFMat r(a[0].size(), NFVec(a.size(), NFElem(Rational(0))));
  for (size_t i = 0; i < a.size(); i++)
    for (size_t j = 0; j < a[i].size(); j++) r[j][i] = a[i][j];
  return r;
}

bool nf_mat_eq(const NFMat& a, const NFMat& b) {
  if (a.size() != b.size()) return false;
  for (size_t i = 0; i < a.size(); i++) {
    if (a[i].size() != b[i].size()) return false;
    for (size_t j = 0; j < a[i].size(); j++)
      if (!(a[i][j] == b[i][j])) return false;
  }
  return true;
}

std::vector<int> nf_rref(NFMat& a) {
  std::vector<int> pivots;
  int rows = a.size(), cols = rows ? a[0].size() : 0, r = 0;
  for (int c = 0; c < cols && r < rows; c++) {
    int piv = -1;
    for (int i = r; i < rows; i++)
      if (!a[i][c].is_zero()) { piv = i; break; }
    if (piv < 0) continue;
    std::swap(a[r], a[piv]);
    NFElem inv = a[r][c].inv();
    for (int j = c; j < cols; j++) a[r][j] = a[r][j] * inv;
    for (int i = 0; i < rows; i++) {
      if (i == r || a[i][c].is_zero()) continue;
      NFElem f = a[i][c];
      for (int j = c; j < cols; j++) a[i][j] = a[i][j] - f * a[r][j];
    }
    pivots.push_back(c);
    r++;
  }
  return pivots;
}

NFElem nf_det(NFMat a) {
  int n = a.size();
  NFElem det(Rational(1));
  for (int c = 0; c < n; c++) {
    int piv = -1;
    for (int i = c; i < n; i++)
      if (!a[i][c].is_zero()) { piv = i; break; }
    if (piv < 0) return NFElem(Rational(0));
    if (piv != c) {
      std::swap(a[c], a[piv]);
      det = -det;
    }
    det = det * a[c][c];
    NFElem inv = a[c][c].inv();
    for (int i = c + 1; i < n; i++) {
      if (a[i][c].is_zero()) continue;
      NFElem f = a[i][c] * inv;
      for (int j = c; j < n; j++) a[i][j] = a[i][j] - f * a[c][j];
    }
  }
  return det;
}

int nf_rank(NFMat a) { return nf_rref(a).size(); }

NFMat nf_inverse(const NFMat& a) {
  int n = a.size();
  NFMat aug = a;
  NFMat id = nf_identity(n);
  for (int i = 0; i < n; i++)
    aug[i].insert(aug[i].end(), id[i].begin(), id[i].end());
  auto piv = nf_rref(aug);
  if ((int)piv.size() != n) throw std::domain_error("matrix is singular");
  NFMat r(n, NFVec(n, NFElem(Rational(0))));
  for (int i = 0; i < n; i++)
    for (int j = 0; j < n; j++) r[i][j] = aug[i][n + j];
  return r;
}

std::vector<NFVec> nf_kernel(const NFMat& a) {
  NFMat m = a;
  int rows = m.size(), cols = rows ? m[0].size() : 0;
  auto piv = nf_rref(m);
  std::vector<bool> is_pivot(cols, false);
  for (int c : piv) is_pivot[c] = true;
  std::vector<NFVec> basis;
  for (int c = 0; c < cols; c++) {
    if (is_pivot[c]) continue;
    NFVec v(cols, NFElem(Rational(0)));
    v[c] = NFElem(Rational(1));
    for (size_t r = 0; r < piv.size(); r++) v[piv[r]] = -m[r][c];
    basis.push_back(v);
  }
  return basis;
}

std::optional<NFVec> nf_solve(const NFMat& a, const NFVec& b) {
  int rows = a.size(), cols = rows ? a[0].size() : 0;
  NFMat aug = a;
  for (int i = 0; i < rows; i++) aug[i].push_back(b[i]);
  auto piv = nf_rref(aug);
  // inconsistent iff a pivot lands in the last column
  if (!piv.empty() && piv.back() == cols) return std::nullopt;
  NFVec x(cols, NFElem(Rational(0)));
  for (size_t r = 0; r < piv.size(); r++) x[piv[r]] = aug[r][cols];
  return x;
}

NFPoly nf_charpoly(const NFMat& a, const FieldPtr& F) {
  // Faddeev–LeVerrier: M_0 = I, c_n = 1;
  // M_k = A M_{k-1} + c_{n-k+1} I,  c_{n-k} = -tr(A M_k)/k
  int n = a.size();
  std::vector<NFElem> coeff(n + 1, NFElem(Rational(0)));
  coeff[n] = NFElem(Rational(1));
  NFMat M = nf_identity(n);
  for (int k = 1; k <= n; k++) {
    NFMat AM = nf_mat_mul(a, M);
    NFElem tr(Rational(0));
    for (int i = 0; i < n; i++) tr = tr + AM[i][i];
    coeff[n - k] = tr * NFElem(Rational(-1, k));
    if (k < n) {
      M = AM;
      for (int i = 0; i < n; i++) M[i][i] = M[i][i] + coeff[n - k];
    }
  }
  NFPoly p(F);
  p.c = coeff;
  p.trim();
  return p;
}

NFMat nf_mat_embed(const NFMat& a, const FieldPtr& G, const NFElem& gen_image) {
  NFMat r = a;
  for (auto& row : r)
    for (auto& x : row) x = embed(x, G, gen_image);
  return r;
}

}  // namespace refk3
