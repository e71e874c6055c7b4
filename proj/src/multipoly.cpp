#include "refk3/multipoly.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>

namespace refk3 {

MultiPoly MultiPoly::constant(std::vector<std::string> vars, const NFElem& c) {
  MultiPoly p(std::move(vars));
  if (!c.is_zero()) p.terms[ExpVec(p.vars.size(), 0)] = c;
  return p;
}

MultiPoly MultiPoly::monomial(std::vector<std::string> vars, const ExpVec& e, const NFElem& c) {
  MultiPoly p(std::move(vars));
  if ((int)e.size() != p.nvars()) throw std::invalid_argument("monomial arity mismatch");
  if (!c.is_zero()) p.terms[e] = c;
  return p;
}

MultiPoly MultiPoly::variable(std::vector<std::string> vars, int index) {
  MultiPoly p(std::move(vars));
  ExpVec e(p.vars.size(), 0);
  e.at(index) = 1;
  p.terms[e] = NFElem(Rational(1));
  return p;
}

void MultiPoly::insert_term(const ExpVec& e, const NFElem& c) {
  if (c.is_zero()) return;
  auto it = terms.find(e);
  if (it == terms.end()) {
    terms.emplace(e, c);
  } else {
    it->second = it->second + c;
    if (it->second.is_zero()) terms.erase(it);
  }
}

NFElem MultiPoly::coeff(const ExpVec& e) const {
  auto it = terms.find(e);
  return it == terms.end() ? NFElem(Rational(0)) : it->second;
}

static void check_vars(const MultiPoly& a, const MultiPoly& b) {
  if (a.vars != b.vars) throw std::invalid_argument("variable set mismatch");
}

MultiPoly MultiPoly::operator+(const MultiPoly& o) const {
  check_vars(*this, o);
  MultiPoly r = *this;
  for (auto& [e, c] : o.terms) r.insert_term(e, c);
  return r;
}

MultiPoly MultiPoly::operator-(const MultiPoly& o) const {
  check_vars(*this, o);
  MultiPoly r = *this;
  for (auto& [e, c] : o.terms) r.insert_term(e, -c);
  return r;
}

MultiPoly MultiPoly::operator-() const {
  MultiPoly r = *this;
  for (auto& [e, c] : r.terms) c = -c;
  return r;
}

MultiPoly MultiPoly::operator*(const MultiPoly& o) const {
  check_vars(*this, o);
  MultiPoly r(vars);
  ExpVec e(nvars());
  for (auto& [ea, ca] : terms)
    for (auto& [eb, cb] : o.terms) {
      for (int i = 0; i < nvars(); i++) e[i] = ea[i] + eb[i];
      r.insert_term(e, ca * cb);
    }
  return r;
}

MultiPoly MultiPoly::operator*(const NFElem& s) const {
  MultiPoly r(vars);
  if (s.is_zero()) return r;
  for (auto& [e, c] : terms) r.terms[e] = c * s;
  return r;
}

MultiPoly MultiPoly::pow(unsigned e) const {
  MultiPoly r = MultiPoly::constant(vars, NFElem(Rational(1)));
  MultiPoly base = *this;
  while (e) {
    if (e & 1) r = r * base;
    if (e >>= 1) base = base * base;
  }
  return r;
}

bool MultiPoly::operator==(const MultiPoly& o) const {
  if (vars != o.vars) return false;
  if (terms.size() != o.terms.size()) return false;
  for (auto it = terms.begin(), jt = o.terms.begin(); it != terms.end(); ++it, ++jt)
    if (it->first != jt->first || !(it->second == jt->second)) return false;
  return true;
}

NFElem MultiPoly::eval(const std::vector<NFElem>& point) const {
  if ((int)point.size() != nvars()) throw std::invalid_argument("eval arity mismatch");
  NFElem acc(Rational(0));
  for (auto& [e, c] : terms) {
    NFElem t = c;
    for (int i = 0; i < nvars(); i++)
      if (e[i]) t = t * point[i].pow(e[i]);
    acc = acc + t;
  }
  return acc;
}

MultiPoly MultiPoly::substitute(const std::vector<MultiPoly>& images) const {
  if ((int)images.size() != nvars()) throw std::invalid_argument("substitute arity mismatch");
  if (images.empty()) throw std::invalid_argument("substitute with no variables");
  const auto& tv = images[0].vars;
  MultiPoly acc(tv);
  for (auto& [e, c] : terms) {
    MultiPoly t = MultiPoly::constant(tv, c);
    for (int i = 0; i < nvars(); i++)
      if (e[i]) t = t * images[i].pow(e[i]);
    acc = acc + t;
  }
  return acc;
}

MultiPoly MultiPoly::derivative(int var) const {
  MultiPoly r(vars);
  for (auto& [e, c] : terms) {
    if (e[var] == 0) continue;
    ExpVec e2 = e;
    e2[var]--;
    r.insert_term(e2, c * NFElem(Rational(e[var])));
  }
  return r;
}

long MultiPoly::total_degree() const {
  long d = -1;
  for (auto& [e, c] : terms) {
    long t = 0;
    for (int x : e) t += x;
    d = std::max(d, t);
  }
  return d;
}

std::optional<long> MultiPoly::weighted_degree(const std::vector<int>& w,
                                               std::set<long>* degrees_seen) const {
  if ((int)w.size() != nvars()) throw std::invalid_argument("weight arity mismatch");
  for (int x : w)
    if (x < 0) throw std::invalid_argument("weights must be non-negative");
  std::set<long> degs;
  for (auto& [e, c] : terms) {
    long d = 0;
    for (int i = 0; i < nvars(); i++) d += (long)e[i] * w[i];
    degs.insert(d);
  }
  if (degrees_seen) *degrees_seen = degs;
  if (degs.size() == 1) return *degs.begin();
  return std::nullopt;
}

std::vector<MultiPoly> MultiPoly::coeffs_in(int var) const {
  int d = degree_in(var);
  std::vector<MultiPoly> out(std::max(0, d + 1), MultiPoly(vars));
  for (auto& [e, c] : terms) {
    ExpVec e2 = e;
    int k = e2[var];
    e2[var] = 0;
    out[k].insert_term(e2, c);
  }
  return out;
}

int MultiPoly::degree_in(int var) const {
  int d = -1;
  for (auto& [e, c] : terms) d = std::max(d, e[var]);
  return d;
}

MultiPoly MultiPoly::divide_exact(const MultiPoly& d) const {
  MultiPoly q(vars);
  if (!d.divides(*this, &q))
    throw std::invalid_argument("divide_exact: not divisible");
  return q;
}

bool MultiPoly::divides(const MultiPoly& a, MultiPoly* quotient) const {
  // does *this divide a?
  const MultiPoly& d = *this;
  if (d.is_zero()) return false;
  MultiPoly r = a, q(a.vars);
  auto dl = d.terms.rbegin();  // leading term (graded-lex max)
  NFElem dinv = dl->second.inv();
  ExpVec e(a.vars.size());
  while (!r.is_zero()) {
    auto rl = r.terms.rbegin();
    bool ok = true;
    for (size_t i = 0; i < e.size(); i++) {
      e[i] = rl->first[i] - dl->first[i];
      if (e[i] < 0) ok = false;
    }
    if (!ok) return false;
    NFElem f = rl->second * dinv;
    q.insert_term(e, f);
    // r -= f * x^e * d
    ExpVec t(e.size());
    for (auto& [ed, cd] : d.terms) {
      for (size_t i = 0; i < t.size(); i++) t[i] = ed[i] + e[i];
      r.insert_term(t, -(f * cd));
    }
  }
  if (quotient) *quotient = q;
  return true;
}

std::string MultiPoly::str() const {
  if (terms.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (auto it = terms.rbegin(); it != terms.rend(); ++it) {
    if (!first) os << " + ";
    os << "(" << it->second.str() << ")";
    for (int i = 0; i < nvars(); i++) {
      if (it->first[i] == 0) continue;
      os << "*" << vars[i];
      if (it->first[i] > 1) os << "^" << it->first[i];
    }
    first = false;
  }
  return os.str();
}

MultiPoly resultant(const MultiPoly& f, const MultiPoly& g, int var) {
  int m = f.degree_in(var), n = g.degree_in(var);
  if (m < 0 || n < 0) throw std::invalid_argument("resultant of zero polynomial");
  if (m == 0 && n == 0)
    throw std::invalid_argument("variable absent from both inputs");
  auto fc = f.coeffs_in(var), gc = g.coeffs_in(var);
  int N = m + n;
  if (N == 0) return MultiPoly::constant(f.vars, NFElem(Rational(1)));
  // Sylvester matrix, then fraction-free (Bareiss) elimination; entries are
  // polynomials in the remaining variables, divisions are exact.
  std::vector<std::vector<MultiPoly>> M(N, std::vector<MultiPoly>(N, MultiPoly(f.vars)));
  for (int i = 0; i < n; i++)
    for (int j = 0; j <= m; j++) M[i][i + j] = fc[m - j];
  for (int i = 0; i < m; i++)
    for (int j = 0; j <= n; j++) M[n + i][i + j] = gc[n - j];
  MultiPoly prev = MultiPoly::constant(f.vars, NFElem(Rational(1)));
  int sign = 1;
  for (int k = 0; k < N - 1; k++) {
    if (M[k][k].is_zero()) {
      int piv = -1;
      for (int i = k + 1; i < N; i++)
        if (!M[i][k].is_zero()) { piv = i; break; }
      if (piv < 0) return MultiPoly(f.vars);  // determinant 0
      std::swap(M[k], M[piv]);
      sign = -sign;
    }
    for (int i = k + 1; i < N; i++)
      for (int j = k + 1; j < N; j++) {
        MultiPoly num = M[k][k] * M[i][j] - M[i][k] * M[k][j];
        M[i][j] = num.is_zero() ? num : num.divide_exact(prev);
      }
    prev = M[k][k];
    for (int i = k + 1; i < N; i++) M[i][k] = MultiPoly(f.vars);
  }
  MultiPoly det = M[N - 1][N - 1];
  if (sign < 0) det = -det;
  return det;
}

MultiPoly multipoly_gcd(const MultiPoly& a, const MultiPoly& b) {
  if (a.is_zero()) return b;
  if (b.is_zero()) return a;
  // pick a variable appearing in both; fall back to one appearing in either
  int var = -1;
  for (int i = 0; i < a.nvars(); i++)
    if (a.degree_in(i) > 0 && b.degree_in(i) > 0) { var = i; break; }
  if (var < 0) {
    // no common variable with positive degree: gcd of "contents" -> constant
    return MultiPoly::constant(a.vars, NFElem(Rational(1)));
  }
  // primitive pseudo-remainder sequence in `var`
  auto content = [&](const MultiPoly& p) -> MultiPoly {
    auto cs = p.coeffs_in(var);
    MultiPoly g(p.vars);
    for (auto& c : cs) {
      if (c.is_zero()) continue;
      g = g.is_zero() ? c : multipoly_gcd(g, c);
    }
    return g;
  };
  auto prem = [&](const MultiPoly& u, const MultiPoly& v) -> MultiPoly {
    // pseudo-remainder of u by v in var
    MultiPoly r = u;
    auto vc = v.coeffs_in(var);
    int dv = v.degree_in(var);
    MultiPoly lead_v = vc[dv];
    while (!r.is_zero() && r.degree_in(var) >= dv) {
      int dr = r.degree_in(var);
      MultiPoly lead_r = r.coeffs_in(var)[dr];
      MultiPoly shift = MultiPoly::variable(r.vars, var).pow(dr - dv);
      r = r * lead_v - v * (lead_r * shift);
    }
    return r;
  };
  MultiPoly u = a, v = b;
  if (u.degree_in(var) < v.degree_in(var)) std::swap(u, v);
  MultiPoly cu = content(u), cv = content(v);
  MultiPoly cg = multipoly_gcd(cu, cv);
  u = u.divide_exact(cu);
  v = v.divide_exact(cv);
  while (!v.is_zero()) {
    MultiPoly r = prem(u, v);
    if (!r.is_zero()) {
      MultiPoly cr = content(r);
      r = r.divide_exact(cr);
    }
    u = v;
    v = r;
  }
  MultiPoly g = cg * u;
  // normalize: make the leading graded-lex coefficient 1
  if (!g.is_zero()) g = g * g.terms.rbegin()->second.inv();
  return g;
}

NFPoly to_nfpoly(const MultiPoly& f, int var, const FieldPtr& F) {
  int d = f.degree_in(var);
  NFPoly p(F);
  p.c.assign(std::max(0, d + 1), NFElem(Rational(0)));
  for (auto& [e, c] : f.terms) {
    for (int i = 0; i < f.nvars(); i++)
      if (i != var && e[i] != 0)
        throw std::invalid_argument("to_nfpoly: polynomial is not univariate");
    NFElem cc = c;
    if (!F->is_rational() && cc.F->is_rational()) {
      std::vector<Rational> v(F->degree(), Rational(0));
      v[0] = cc.c[0];
      cc = NFElem(F, v);
    }
    p.c[e[var]] = cc;
  }
  p.trim();
  return p;
}

MultiPoly from_nfpoly(const NFPoly& f, std::vector<std::string> vars, int var) {
  MultiPoly p(std::move(vars));
  for (int i = 0; i <= f.deg(); i++) {
    if (f.c[i].is_zero()) continue;
    ExpVec e(p.nvars(), 0);
    e[var] = i;
    p.terms[e] = f.c[i];
  }
  return p;
}

}  // namespace refk3
