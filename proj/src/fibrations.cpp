#include "refk3/fibrations.hpp"

#include <algorithm>
#include <fstream>
#include <functional>
#include <map>
#include <numeric>
#include <set>
#include <sstream>
#include <stdexcept>

namespace refk3 {

namespace {

KodairaFiber make_fiber(std::string label, std::string alias, int euler,
                        int components, int rank) {
  return KodairaFiber{std::move(label), std::move(alias), euler, components, rank};
}

bool parse_indexed(const std::string& s, const std::string& prefix,
                   const std::string& suffix, long& n) {
  if (s.size() <= prefix.size() + suffix.size()) return false;
  if (s.compare(0, prefix.size(), prefix) != 0) return false;
  if (s.compare(s.size() - suffix.size(), suffix.size(), suffix) != 0) return false;
  std::string mid = s.substr(prefix.size(), s.size() - prefix.size() - suffix.size());
  if (mid.empty()) return false;
  for (char c : mid)
    if (!isdigit((unsigned char)c)) return false;
  n = std::stol(mid);
  return true;
}

}  // namespace

KodairaFiber kodaira_info(const std::string& label) {
  long n = 0;
  if (label == "II") return make_fiber("II", "", 2, 1, 0);
  if (label == "III" || label == "A~1#") return make_fiber("III", "A~1#", 3, 2, 1);
  if (label == "IV" || label == "A~2#") return make_fiber("IV", "A~2#", 4, 3, 2);
  if (label == "II*" || label == "E~8") return make_fiber("II*", "E~8", 10, 9, 8);
  if (label == "III*" || label == "E~7") return make_fiber("III*", "E~7", 9, 8, 7);
  if (label == "IV*" || label == "E~6") return make_fiber("IV*", "E~6", 8, 7, 6);
  if (parse_indexed(label, "A~", "", n) && n >= 1)
    return make_fiber("I" + std::to_string(n + 1), label, (int)n + 1, (int)n + 1,
                      (int)n);
  if (parse_indexed(label, "D~", "", n) && n >= 4)
    return make_fiber("I" + std::to_string(n - 4) + "*", label, (int)n + 2,
                      (int)n + 1, (int)n);
  if (parse_indexed(label, "I", "*", n))
    return make_fiber(label, "D~" + std::to_string(n + 4), (int)n + 6, (int)n + 5,
                      (int)n + 4);
  if (parse_indexed(label, "I", "", n) && n >= 1)
    return make_fiber(label, n >= 2 ? "A~" + std::to_string(n - 1) : "",
                      (int)n, (int)n, (int)n - 1);
  throw std::invalid_argument("kodaira_info: unknown label " + label);
}

ConfigCheck config_check(const FiberConfiguration& cfg) {
  ConfigCheck out;
  int rank_sum = 0;
  for (auto& f : cfg.fibers) {
    KodairaFiber k = kodaira_info(f);
    out.euler_sum += k.euler;
    rank_sum += k.rank;
  }
  out.forced_mw_rank = cfg.rho - 2 - rank_sum;
  if (out.forced_mw_rank < 0)
    throw std::invalid_argument("config_check: forced Mordell-Weil rank negative");
  out.consistent = out.euler_sum <= 24;
  return out;
}

std::vector<FiberConfiguration> load_fiber_table(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open fiber table: " + path);
  std::vector<FiberConfiguration> rows;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::vector<std::string> cells;
    std::string cell;
    std::istringstream ss(line);
    while (std::getline(ss, cell, '|')) cells.push_back(cell);
    if (cells.size() != 5) throw std::runtime_error("bad fiber table row: " + line);
    FiberConfiguration cfg;
    {
      std::istringstream c0(cells[0]);
      c0 >> cfg.id;
    }
    {
      std::istringstream c1(cells[1]);
      std::string f;
      while (c1 >> f) cfg.fibers.push_back(f);
    }
    cfg.rho = std::stoi(cells[2]);
    cfg.mw_rank = std::stoi(cells[3]);
    cfg.mw_torsion = std::stol(cells[4]);
    rows.push_back(cfg);
  }
  return rows;
}

namespace {

// invariant factors of an integer matrix (no transforms needed)
std::vector<Int> rect_smith(std::vector<std::vector<Int>> A) {
  std::size_t m = A.size();
  std::size_t n = m ? A[0].size() : 0;
  std::vector<Int> d;
  std::size_t k = 0;
  while (k < m && k < n) {
    while (true) {
      std::size_t pi = k, pj = k;
      bool found = false;
      for (std::size_t i = k; i < m; i++)
        for (std::size_t j = k; j < n; j++)
          if (A[i][j] != 0 && (!found || abs(A[i][j]) < abs(A[pi][pj]))) {
            pi = i, pj = j, found = true;
          }
      if (!found) {
        for (std::size_t i = k; i < m && i < n; i++) d.push_back(0);
        goto done;
      }
      std::swap(A[pi], A[k]);
      if (pj != k)
        for (std::size_t i = 0; i < m; i++) std::swap(A[i][pj], A[i][k]);
      bool clean = true;
      for (std::size_t i = k + 1; i < m; i++) {
        if (A[i][k] == 0) continue;
        Int q = A[i][k] / A[k][k];
        for (std::size_t j = k; j < n; j++) A[i][j] -= q * A[k][j];
        if (A[i][k] != 0) clean = false;
      }
      for (std::size_t j = k + 1; j < n; j++) {
        if (A[k][j] == 0) continue;
        Int q = A[k][j] / A[k][k];
        for (std::size_t i = k; i < m; i++) A[i][j] -= q * A[i][k];
        if (A[k][j] != 0) clean = false;
      }
      if (!clean) continue;
      bool offdiag = false;
      for (std::size_t i = k + 1; i < m && !offdiag; i++)
        if (A[i][k] != 0) offdiag = true;
      for (std::size_t j = k + 1; j < n && !offdiag; j++)
        if (A[k][j] != 0) offdiag = true;
      if (!offdiag) break;
    }
    d.push_back(abs(A[k][k]));
    k++;
  }
done:
  // regroup into divisibility chain
  for (std::size_t i = 0; i < d.size(); i++)
    for (std::size_t j = i + 1; j < d.size(); j++) {
      if (d[i] == 0 && d[j] == 0) continue;
      Int g = gcd(d[i], d[j]);
      if (g == 0) continue;
      Int l = d[i] / g * d[j];
      d[i] = g;
      d[j] = l;
    }
  return d;
}

// primitive integer basis of the rational kernel of an integer matrix
std::vector<std::vector<Int>> integer_kernel(const std::vector<std::vector<Int>>& G) {
  std::size_t n = G.size();
  std::vector<std::vector<Rational>> M(n, std::vector<Rational>(n));
  for (std::size_t i = 0; i < n; i++)
    for (std::size_t j = 0; j < n; j++) M[i][j] = Rational(G[i][j]);
  std::vector<int> pivot_col;
  std::size_t row = 0;
  for (std::size_t col = 0; col < n && row < n; col++) {
    std::size_t piv = row;
    while (piv < n && M[piv][col] == 0) piv++;
    if (piv == n) continue;
    std::swap(M[piv], M[row]);
    Rational iv = Rational(1) / M[row][col];
    for (std::size_t j = 0; j < n; j++) M[row][j] *= iv;
    for (std::size_t r = 0; r < n; r++) {
      if (r == row || M[r][col] == 0) continue;
      Rational f = M[r][col];
      for (std::size_t j = 0; j < n; j++) M[r][j] -= f * M[row][j];
    }
    pivot_col.push_back((int)col);
    row++;
  }
  std::vector<bool> is_piv(n, false);
  for (int c : pivot_col) is_piv[c] = true;
  std::vector<std::vector<Int>> kernel;
  for (std::size_t free = 0; free < n; free++) {
    if (is_piv[free]) continue;
    std::vector<Rational> v(n, Rational(0));
    v[free] = 1;
    for (std::size_t r = 0; r < pivot_col.size(); r++) v[pivot_col[r]] = -M[r][free];
    Int den = 1;
    for (auto& x : v) {
      x.canonicalize();
      den = den / gcd(den, Int(x.get_den())) * Int(x.get_den());
    }
    std::vector<Int> w(n);
    Int content = 0;
    for (std::size_t j = 0; j < n; j++) {
      Rational s = v[j] * Rational(den);
      s.canonicalize();
      w[j] = s.get_num();
      content = gcd(content, w[j]);
    }
    if (content > 1)
      for (auto& x : w) x /= content;
    kernel.push_back(w);
  }
  return kernel;
}

}  // namespace

MWGroup mw_group(const GramLattice& pic,
                 const std::vector<std::vector<long>>& trivial) {
  std::size_t n = pic.gram.size();
  std::vector<std::vector<Int>> rows = integer_kernel(pic.gram);
  for (auto& t : trivial) {
    if (t.size() != n)
      throw std::invalid_argument("mw_group: trivial vector arity mismatch");
    std::vector<Int> r(n);
    for (std::size_t j = 0; j < n; j++) r[j] = t[j];
    rows.push_back(r);
  }
  MWGroup out;
  if (rows.empty()) {
    out.free_rank = (long)n;
    return out;
  }
  std::vector<Int> d = rect_smith(rows);
  long nonzero = 0;
  for (auto& x : d)
    if (x != 0) {
      nonzero++;
      if (x > 1) out.torsion.push_back(x);
    }
  out.free_rank = (long)n - nonzero;
  return out;
}

std::vector<std::vector<std::string>> infer_config(const InferenceConstraints& C) {
  int base = 0;
  for (auto& k : C.known) base += kodaira_info(k).euler;
  std::vector<std::vector<std::string>> slot_opts;
  std::vector<int> slot_min_euler;
  for (int rmin : C.slot_rank_min) {
    std::vector<std::string> opts;
    int mn = 1 << 20;
    for (int r = std::max(1, rmin); r <= 20; r++) {
      std::vector<std::string> names;
      names.push_back("A~" + std::to_string(r));
      if (r >= 4) names.push_back("D~" + std::to_string(r));
      if (r >= 6 && r <= 8) names.push_back("E~" + std::to_string(r));
      for (auto& nm : names) {
        KodairaFiber k = kodaira_info(nm);
        if (base + k.euler > C.euler_budget) continue;
        opts.push_back(nm);
        mn = std::min(mn, k.euler);
      }
    }
    if (opts.empty()) return {};
    slot_opts.push_back(opts);
    slot_min_euler.push_back(mn);
  }
  if (base > C.euler_budget) return {};
  std::set<std::vector<std::string>> results;
  std::vector<std::string> chosen;
  std::function<void(std::size_t, int)> dfs = [&](std::size_t i, int used) {
    int rest = 0;
    for (std::size_t j = i; j < slot_opts.size(); j++) rest += slot_min_euler[j];
    if (used + rest > C.euler_budget) return;
    if (i == slot_opts.size()) {
      if (C.exact && used != C.euler_budget) return;
      std::vector<std::string> cfg = C.known;
      cfg.insert(cfg.end(), chosen.begin(), chosen.end());
      std::sort(cfg.begin(), cfg.end());
      results.insert(cfg);
      return;
    }
    for (auto& opt : slot_opts[i]) {
      int e = kodaira_info(opt).euler;
      if (used + e > C.euler_budget) continue;
      chosen.push_back(opt);
      dfs(i + 1, used + e);
      chosen.pop_back();
    }
  };
  dfs(0, base);
  return std::vector<std::vector<std::string>>(results.begin(), results.end());
}

namespace {

NFElem nf_const(const FieldPtr& F, const Rational& r) {
  std::vector<Rational> c(F->degree(), Rational(0));
  c[0] = r;
  return NFElem(F, c);
}

NFElem nf_one(const FieldPtr& F) { return nf_const(F, Rational(1)); }

// re-express a polynomial over a different variable list, matching by name
MultiPoly remap_vars(const MultiPoly& p, const std::vector<std::string>& tv,
                     const FieldPtr& F) {
  std::vector<MultiPoly> images;
  for (auto& v : p.vars) {
    auto it = std::find(tv.begin(), tv.end(), v);
    if (it == tv.end())
      throw std::invalid_argument("fiber_curve: base point uses unknown variable " + v);
    images.push_back(MultiPoly::variable(tv, (int)(it - tv.begin())));
  }
  if (p.terms.empty()) return MultiPoly(tv);
  return p.substitute(images);
}

// squarefree part with respect to the listed variables
MultiPoly squarefree_part(const MultiPoly& g, const std::vector<int>& vars_idx) {
  MultiPoly h = g;
  for (int i : vars_idx) {
    MultiPoly d = h.derivative(i);
    if (d.is_zero()) continue;
    MultiPoly gc = multipoly_gcd(h, d);
    if (gc.total_degree() > 0) h = h.divide_exact(gc);
  }
  return h;
}

// collapse a weighted projective chart to smaller weights: when every
// exponent of a variable is divisible by lcm(w)/w_i, divide it out
MultiPoly collapse_weights(const MultiPoly& f, std::vector<int> w) {
  std::vector<bool> occurs(w.size(), false);
  for (auto& [e, c] : f.terms)
    for (std::size_t i = 0; i < w.size(); i++)
      if (e[i] > 0) occurs[i] = true;
  long l = 1;
  for (std::size_t i = 0; i < w.size(); i++)
    if (occurs[i]) l = std::lcm(l, (long)w[i]);
  std::vector<long> fac(w.size());
  for (std::size_t i = 0; i < w.size(); i++) {
    fac[i] = occurs[i] ? l / w[i] : 1;
    for (auto& [e, c] : f.terms)
      if (e[i] % fac[i] != 0) {
        fac[i] = 1;
        break;
      }
  }
  MultiPoly out(f.vars);
  for (auto& [e, c] : f.terms) {
    ExpVec ne = e;
    for (std::size_t i = 0; i < w.size(); i++) ne[i] = (int)(ne[i] / fac[i]);
    out.insert_term(ne, c);
  }
  return out;
}

// content of g as a polynomial in the non-parameter variables: the gcd of
// its coefficients, which are polynomials in the parameter
MultiPoly parameter_content(const MultiPoly& g, const std::vector<int>& main_idx) {
  std::map<ExpVec, MultiPoly> coeffs;
  for (auto& [e, c] : g.terms) {
    ExpVec key(e.size(), 0);
    ExpVec rest = e;
    for (int i : main_idx) {
      key[i] = e[i];
      rest[i] = 0;
    }
    auto it = coeffs.find(key);
    if (it == coeffs.end()) it = coeffs.emplace(key, MultiPoly(g.vars)).first;
    it->second.insert_term(rest, c);
  }
  MultiPoly content(g.vars);
  bool first = true;
  for (auto& [k, c] : coeffs) {
    content = first ? c : multipoly_gcd(content, c);
    first = false;
  }
  return content;
}

}  // namespace

FiberCurve fiber_curve(const QuotientSurface& S, const MultiPoly& b0,
                       const MultiPoly& b1) {
  FiberCurve out;
  const FieldPtr F = S.defining.terms.begin()->second.F;
  const std::vector<std::string>& dv = S.defining.vars;
  bool symb = std::find(dv.begin(), dv.end(), "l") != dv.end();
  if (S.group == "G29") {
    // [x2^3 : x3^2]: only the coordinate base points are needed
    bool over10 = b1.is_zero(), over01 = b0.is_zero();
    if (!over10 && !over01)
      throw std::invalid_argument(
          "fiber_curve: only the base points [1:0] and [0:1] are supported");
    std::vector<MultiPoly> im;
    for (int i = 0; i < 4; i++) im.push_back(MultiPoly::variable(dv, i));
    im[over10 ? 1 : 0] = MultiPoly(dv);  // kill x3 (base [1:0]) or x2 ([0:1])
    MultiPoly eq = S.defining.substitute(im);
    if (eq.is_zero()) throw std::invalid_argument("fiber_curve: degenerate fiber");
    eq = collapse_weights(eq, {2, 3, 5, 10});
    out.equations = {eq};
    // double-cover component count from the branch part j^2 - g
    MultiPoly g = MultiPoly(dv);
    ExpVec j2(4, 0);
    j2[3] = 2;
    g = MultiPoly::monomial(dv, j2, nf_one(F)) - eq;
    MultiPoly sf = squarefree_part(g, {0, 1, 2});
    out.components = sf.total_degree() == 0 ? 2 : 1;
    return out;
  }
  if (S.group != "G31" && S.group != "G30")
    throw std::invalid_argument("fiber_curve: unknown group");
  // G31: [z2 : z4], fiber (z1, b0 z2, b1 z2); G30: [y1^2 : y3], fiber
  // (y1, b0 y3, ...) -- substitute y3 = (b1/b0) y1^2, so require b0 constant
  std::vector<std::string> tv;
  int cover_idx;
  std::vector<MultiPoly> im;
  if (S.group == "G31") {
    tv = symb ? std::vector<std::string>{"z1", "z2", "t", "l"}
              : std::vector<std::string>{"z1", "z2", "t"};
    cover_idx = 2;
    MultiPoly z2 = MultiPoly::variable(tv, 1);
    im = {MultiPoly::variable(tv, 0), remap_vars(b0, tv, F) * z2,
          remap_vars(b1, tv, F) * z2, MultiPoly::variable(tv, 2)};
    if (symb) im.push_back(MultiPoly::variable(tv, 3));
  } else {
    tv = symb ? std::vector<std::string>{"y1", "y4", "j", "l"}
              : std::vector<std::string>{"y1", "y4", "j"};
    cover_idx = 2;
    MultiPoly y1 = MultiPoly::variable(tv, 0);
    im = {y1, remap_vars(b1, tv, F) * y1 * y1, MultiPoly::variable(tv, 1),
          MultiPoly::variable(tv, 2)};
    MultiPoly c0 = remap_vars(b0, tv, F);
    if (c0.total_degree() != 0 || c0.is_zero())
      throw std::invalid_argument("fiber_curve: base must have constant b0 != 0");
    NFElem c = c0.terms.begin()->second;
    im[1] = im[1] * (nf_one(F) / c);
    if (symb) im.push_back(MultiPoly::variable(tv, 3));
  }
  MultiPoly eq = S.defining.substitute(im);
  if (eq.is_zero()) throw std::invalid_argument("fiber_curve: degenerate fiber");
  out.equations = {eq};
  ExpVec t2(tv.size(), 0);
  t2[cover_idx] = 2;
  MultiPoly g = MultiPoly::monomial(tv, t2, nf_one(F)) - eq;
  // factor the branch side: power of the second variable, parameter content,
  // primitive residual
  std::vector<int> main_idx = {0, 1};
  MultiPoly var2 = MultiPoly::variable(tv, 1);
  int pow2 = 0;
  while (!g.is_zero() && var2.divides(g)) {
    g = g.divide_exact(var2);
    pow2++;
  }
  MultiPoly content = parameter_content(g, main_idx);
  MultiPoly prim = content.is_zero() ? g : g.divide_exact(content);
  // normalize: make the primitive part's leading coefficient 1
  if (!prim.terms.empty()) {
    NFElem lead = prim.terms.begin()->second;
    prim = prim * (nf_one(F) / lead);
    content = content * lead;
  }
  MultiPoly z2pow = MultiPoly::constant(tv, nf_one(F));
  for (int k = 0; k < pow2; k++) z2pow = z2pow * var2;
  out.factors = {content, z2pow, prim};
  std::vector<int> sf_idx = main_idx;
  MultiPoly sf = squarefree_part(g, sf_idx);
  out.components = sf.total_degree() == 0 ? 2 : 1;
  return out;
}

FiberCurve fiber_curve(const QuotientSurface& S, const Rational& b0,
                       const Rational& b1) {
  const FieldPtr F = S.defining.terms.begin()->second.F;
  std::vector<std::string> one = {"l"};
  return fiber_curve(S, MultiPoly::constant(one, nf_const(F, b0)),
                     MultiPoly::constant(one, nf_const(F, b1)));
}

}  // namespace refk3
