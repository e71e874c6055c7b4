// ADE classification of curve singular points, resultant-based point location,
// double-cover transfer, and McKay typing of stabilizer quotients.
#include "refk3/singularities.hpp"

#include <algorithm>
#include <cctype>
#include <climits>
#include <map>
#include <set>
#include <sstream>
#include <stdexcept>

#include "refk3/nflinalg.hpp"

namespace refk3 {
namespace {

const std::vector<std::string> kUV = {"u", "v"};

NFElem fzero() { return NFElem(Rational(0)); }

// coerce every coefficient to a plain rational (the curves we analyse are
// defined over Q even when the ambient invariant field is larger)
MultiPoly rational_poly(const MultiPoly& f) {
  MultiPoly out(f.vars);
  for (const auto& [e, c] : f.terms) {
    if (!c.is_rational_value())
      throw std::runtime_error("rational_poly: irrational coefficient " + c.str());
    out.insert_term(e, NFElem(c.rat()));
  }
  return out;
}

FieldPtr field_of_point(const std::vector<NFElem>& p) {
  for (const auto& x : p)
    if (!x.is_rational_value()) return x.F;
  return NumberField::rationals();
}

// ---------------------------------------------------------------------------
// Quadratic square-root extensions.

struct SqrtExt {
  FieldPtr K;
  NFElem gen_img;  // image of the base-field generator in K
  NFElem root;     // a square root of the input in K
};

// delta = s * t^2 with s squarefree (sign carried by s)
void squarefree_split(const Int& m, Int& s, Int& t) {
  s = m < 0 ? Int(-1) : Int(1);
  t = 1;
  Int r = abs(m);
  for (Int p = 2; p <= 100000 && p * p <= r; p++) {
    int cnt = 0;
    while (r % p == 0) {
      r /= p;
      cnt++;
    }
    for (int k = 0; k < cnt / 2; k++) t *= p;
    if (cnt % 2) s *= p;
  }
  if (mpz_perfect_square_p(r.get_mpz_t())) {
    Int q;
    mpz_sqrt(q.get_mpz_t(), r.get_mpz_t());
    t *= q;
  } else {
    s *= r;  // may fail squarefreeness for huge inputs; quadratic() then throws
  }
}

std::optional<SqrtExt> adjoin_sqrt(const NFElem& delta) {
  if (delta.is_zero())
    return SqrtExt{delta.F, NFElem::gen(delta.F), fzero()};
  if (auto r = nf_sqrt(delta))
    return SqrtExt{delta.F, delta.F->degree() > 1 ? NFElem::gen(delta.F)
                                                  : NFElem(Rational(1)),
                   *r};
  if (delta.is_rational_value()) {
    Rational d = delta.rat();
    Int s, t;
    squarefree_split(d.get_num() * d.get_den(), s, t);
    try {
      FieldPtr K = NumberField::quadratic(s);
      NFElem root = NFElem::gen(K) * NFElem(Rational(t, d.get_den()));
      return SqrtExt{K, NFElem(Rational(1)), root};
    } catch (const std::exception&) {
      return std::nullopt;
    }
  }
  if (delta.F->degree() != 2) return std::nullopt;
  // base field Q(g), g^2 = d0; delta = a + b g
  Rational d0 = -delta.F->minpoly.coeff(0);
  Rational a = delta.c.size() > 0 ? delta.c[0] : Rational(0);
  Rational b = delta.c.size() > 1 ? delta.c[1] : Rational(0);
  try {
    if (b == 0) {
      if (a == d0) return std::nullopt;  // sqrt already in the field (handled above)
      // gamma = sqrt(d0) + sqrt(a)
      Rational s = d0 + a, q = d0 - a;
      QPoly mp({q * q, Rational(0), s * (-2), Rational(0), Rational(1)});
      FieldPtr K = NumberField::create(mp, "Qsqrt(" + a.get_str() + "," + d0.get_str() + ")");
      NFElem g = NFElem::gen(K);
      NFElem g3 = g.pow(3);
      NFElem gen_img = (g3 - g * NFElem(Rational(3) * d0 + a)) *
                       NFElem(Rational(1) / (Rational(2) * (a - d0)));
      NFElem root = (g3 - g * NFElem(d0 + Rational(3) * a)) *
                    NFElem(Rational(1) / (Rational(2) * (d0 - a)));
      return SqrtExt{K, gen_img, root};
    }
    // gamma^2 = a + b g  =>  gamma^4 - 2a gamma^2 + (a^2 - b^2 d0) = 0
    QPoly mp({a * a - b * b * d0, Rational(0), a * (-2), Rational(0), Rational(1)});
    FieldPtr K = NumberField::create(mp, "Qrt(" + a.get_str() + "+" + b.get_str() + "g)");
    NFElem g = NFElem::gen(K);
    NFElem gen_img = (g * g - NFElem(a)) * NFElem(Rational(1) / b);
    return SqrtExt{K, gen_img, g};
  } catch (const std::exception&) {
    return std::nullopt;
  }
}

NFElem lift_elem(const NFElem& x, const SqrtExt& E) {
  if (x.is_rational_value()) return NFElem(x.rat());
  return embed(x, E.K, E.gen_img);
}

// ---------------------------------------------------------------------------
// Root collection for univariate polynomials (degree <= 2 splitting, with
// explicit quadratic extensions for irrational roots).

QPoly qpoly_of(const NFPoly& f) {
  std::vector<Rational> c;
  for (const auto& x : f.c) {
    if (!x.is_rational_value())
      throw std::runtime_error("qpoly_of: irrational coefficient");
    c.push_back(x.rat());
  }
  return QPoly(c);
}

void record_unresolved(const NFPoly& f, std::vector<UnresolvedOrbit>* unres,
                       const std::string& note) {
  if (!unres) throw std::runtime_error("singular points need degree > 2: " + note);
  UnresolvedOrbit o;
  o.note = note + ": " + f.str();
  try {
    o.minpoly = qpoly_of(f.monic());
  } catch (const std::exception&) {
  }
  unres->push_back(o);
}

// roots of q; each root is returned with the context elements lifted into the
// root's field so callers can keep coordinate tuples coherent
void collect_roots(const NFPoly& q, const std::vector<NFElem>& ctx,
                   std::vector<std::pair<NFElem, std::vector<NFElem>>>& out,
                   std::vector<UnresolvedOrbit>* unres, const std::string& note) {
  if (q.is_zero()) throw std::runtime_error("collect_roots: zero polynomial");
  Factorization fac = factor_small(q);
  for (const Factor& f : fac.factors) {
    if (!f.resolved) {
      record_unresolved(f.poly, unres, note);
      continue;
    }
    int d = f.poly.deg();
    if (d == 0) continue;
    NFPoly m = f.poly.monic();
    if (d == 1) {
      out.push_back({-m.coeff(0), ctx});
      continue;
    }
    if (d != 2) throw std::runtime_error("collect_roots: unexpected factor degree");
    NFElem p = m.coeff(1), c0 = m.coeff(0);
    NFElem delta = p * p - NFElem(Rational(4)) * c0;
    NFElem half(Rational(1, 2));
    if (auto s = nf_sqrt(delta)) {
      out.push_back({(-p + *s) * half, ctx});
      out.push_back({(-p - *s) * half, ctx});
      continue;
    }
    auto ext = adjoin_sqrt(delta);
    if (!ext) {
      record_unresolved(f.poly, unres, note + " (no quadratic model)");
      continue;
    }
    NFElem pe = lift_elem(p, *ext);
    std::vector<NFElem> lctx;
    for (const auto& x : ctx) lctx.push_back(lift_elem(x, *ext));
    out.push_back({(-pe + ext->root) * half, lctx});
    out.push_back({(-pe - ext->root) * half, lctx});
  }
}

// ---------------------------------------------------------------------------
// Local analysis at the origin (two variables u, v).

MultiPoly truncate_deg(const MultiPoly& f, long D) {
  MultiPoly out(f.vars);
  for (const auto& [e, c] : f.terms) {
    long d = 0;
    for (int x : e) d += x;
    if (d <= D) out.insert_term(e, c);
  }
  return out;
}

int mult_at_origin(const MultiPoly& f) {
  long m = LONG_MAX;
  for (const auto& [e, c] : f.terms) {
    long d = 0;
    for (int x : e) d += x;
    m = std::min(m, d);
  }
  if (m == LONG_MAX) throw std::runtime_error("mult_at_origin: zero polynomial");
  return (int)m;
}

int ord_in_first_var(const MultiPoly& f) {
  int o = INT_MAX;
  for (const auto& [e, c] : f.terms) o = std::min(o, e[0]);
  return o;
}

MultiPoly shear(const MultiPoly& f, long a, long b) {
  MultiPoly u = MultiPoly::variable(kUV, 0), v = MultiPoly::variable(kUV, 1);
  return f.substitute({u + v * NFElem(a), u * NFElem(b) + v});
}

// Milnor number of an isolated plane-curve singularity at the origin:
// order at 0 of the resultant of the two partials, minimized over seeded
// unimodular coordinate changes, on an adaptively truncated jet.  A value
// mu accepted at truncation degree D with mu <= D-2 is exact by finite
// determinacy (the jet is then (mu+1)-determined).
int local_milnor(const MultiPoly& f) {
  static const long seeds[5][2] = {{0, 0}, {1, 0}, {0, 1}, {2, 1}, {1, -1}};
  long maxD = f.total_degree();
  for (long D : {4L, 6L, 8L, 10L, 12L, 14L}) {
    bool full = D >= maxD;
    MultiPoly fD = full ? f : truncate_deg(f, D);
    int best = INT_MAX;
    for (auto& s : seeds) {
      MultiPoly g = shear(fD, s[0], s[1]);
      MultiPoly gu = g.derivative(0), gv = g.derivative(1);
      if (gu.is_zero() || gv.is_zero()) continue;
      MultiPoly R = resultant(gu, gv, 1);
      if (R.is_zero()) continue;
      best = std::min(best, ord_in_first_var(R));
    }
    if (best != INT_MAX && (best <= D - 2 || full)) return best;
    if (full) throw std::runtime_error("local_milnor: non-isolated singularity");
  }
  throw std::runtime_error("local_milnor: truncation budget exceeded");
}

int cone_distinct_roots(const MultiPoly& f, int m, const FieldPtr& F) {
  std::vector<NFElem> c(m + 1, fzero());
  for (const auto& [e, cc] : f.terms)
    if (e[0] + e[1] == m) c[e[1]] = cc;
  NFPoly p(F, c);
  int dp = p.deg();
  NFPoly g = nfpoly_gcd(p, p.derivative());
  int distinct = dp - std::max(g.deg(), 0);
  if (dp < m) distinct += 1;  // root [0:1]
  return distinct;
}

FieldPtr field_of_poly(const MultiPoly& f) {
  for (const auto& [e, c] : f.terms)
    if (!c.is_rational_value()) return c.F;
  return NumberField::rationals();
}

ADEType classify_local(const MultiPoly& f, int* mult_out = nullptr,
                       int* cone_out = nullptr) {
  if (f.is_zero()) throw std::runtime_error("classify_local: zero polynomial");
  ExpVec zero(f.nvars(), 0);
  if (!f.coeff(zero).is_zero())
    throw std::runtime_error("classify_local: point not on the curve");
  int m = mult_at_origin(f);
  if (m < 2) throw std::runtime_error("classify_local: point is not singular");
  if (m > 3)
    throw std::runtime_error("classify_local: non-simple singularity (multiplicity >= 4)");
  int r = cone_distinct_roots(f, m, field_of_poly(f));
  int mu = local_milnor(f);
  if (mult_out) *mult_out = m;
  if (cone_out) *cone_out = r;
  if (m == 2) {
    if (r == 2 && mu != 1)
      throw std::runtime_error("classify_local: inconsistent Milnor number (A1)");
    return ADEType{'A', mu};
  }
  if (r == 3) {
    if (mu != 4) throw std::runtime_error("classify_local: inconsistent Milnor number (D4)");
    return ADEType{'D', 4};
  }
  if (r == 2) {
    if (mu < 5) throw std::runtime_error("classify_local: inconsistent Milnor number (D)");
    return ADEType{'D', mu};
  }
  if (mu < 6 || mu > 8)
    throw std::runtime_error("classify_local: non-simple singularity (E-branch mu = " +
                             std::to_string(mu) + ")");
  return ADEType{'E', mu};
}

// local equation at a projective point: chart at the first nonzero coordinate,
// translated so the point sits at the origin
MultiPoly local_form(const MultiPoly& C, const std::vector<NFElem>& p) {
  if (C.nvars() != 3 || p.size() != 3)
    throw std::runtime_error("local_form: expected a plane projective curve");
  int k = -1;
  for (int i = 0; i < 3 && k < 0; i++)
    if (!p[i].is_zero()) k = i;
  if (k < 0) throw std::runtime_error("local_form: zero point");
  NFElem inv = p[k].inv();
  std::vector<MultiPoly> img;
  int j = 0;
  for (int i = 0; i < 3; i++) {
    if (i == k) {
      img.push_back(MultiPoly::constant(kUV, NFElem(Rational(1))));
    } else {
      img.push_back(MultiPoly::variable(kUV, j) +
                    MultiPoly::constant(kUV, p[i] * inv));
      j++;
    }
  }
  return C.substitute(img);
}

// ---------------------------------------------------------------------------
// Affine singular-point location by resultants.

struct AffPoint {
  NFElem u, v;
};

std::string point_key(const NFElem& a, const NFElem& b) {
  return (a.is_rational_value() ? "Q" : a.F->label) + "|" + a.str() + "|" +
         (b.is_rational_value() ? "Q" : b.F->label) + "|" + b.str();
}

// f(x0, var): coefficientwise evaluation of a bivariate polynomial at the
// other variable, returned as a univariate polynomial over x0's field
NFPoly eval_other_var(const MultiPoly& f, int kept, const NFElem& x0) {
  FieldPtr K = x0.is_rational_value() ? NumberField::rationals() : x0.F;
  if (f.is_zero()) return NFPoly(K);
  int other = 1 - kept;
  std::vector<NFElem> out(std::max(f.degree_in(kept), 0) + 1, fzero());
  for (const auto& [e, c] : f.terms) {
    NFElem t = c;
    if (e[other]) t = t * x0.pow(e[other]);
    out[e[kept]] = out[e[kept]] + t;
  }
  return NFPoly(K, out);
}

NFPoly gcd_chain(const std::vector<NFPoly>& polys, const FieldPtr& K) {
  NFPoly g(K);
  for (const NFPoly& p : polys) {
    if (p.is_zero()) continue;
    g = g.is_zero() ? p : nfpoly_gcd(g, p);
  }
  return g;
}

std::vector<AffPoint> affine_singular_points(const MultiPoly& g,
                                             std::vector<UnresolvedOrbit>* unres) {
  if (g.nvars() != 2) throw std::runtime_error("affine_singular_points: need 2 variables");
  MultiPoly gu = g.derivative(0), gv = g.derivative(1);
  if (gu.is_zero() || gv.is_zero())
    throw std::runtime_error("affine_singular_points: degenerate curve");
  std::vector<std::pair<MultiPoly, MultiPoly>> systems;
  MultiPoly h = multipoly_gcd(gu, gv);
  if (h.total_degree() > 0) {
    systems.push_back({g, h});
    systems.push_back({gu.divide_exact(h), gv.divide_exact(h)});
  } else {
    systems.push_back({gu, gv});
  }
  std::vector<std::pair<NFElem, std::vector<NFElem>>> ucands;
  for (auto& [A, B] : systems) {
    if (B.total_degree() <= 0 || A.total_degree() < 0) continue;
    MultiPoly Ru = resultant(A, B, 1);
    if (Ru.is_zero())
      throw std::runtime_error("affine_singular_points: shared component persists");
    if (Ru.total_degree() == 0) continue;
    NFPoly pu = to_nfpoly(Ru, 0, NumberField::rationals());
    collect_roots(pu, {}, ucands, unres, "u-coordinate resultant");
  }
  std::vector<AffPoint> pts;
  std::set<std::string> seen_u, seen_pt;
  for (auto& [u0, ctx] : ucands) {
    std::string uk = point_key(u0, u0);
    if (!seen_u.insert(uk).second) continue;
    FieldPtr K = u0.is_rational_value() ? NumberField::rationals() : u0.F;
    NFPoly pg = eval_other_var(g, 1, u0);
    NFPoly pu = eval_other_var(gu, 1, u0);
    NFPoly pv = eval_other_var(gv, 1, u0);
    NFPoly q = gcd_chain({pg, pu, pv}, K);
    if (q.is_zero())
      throw std::runtime_error("affine_singular_points: vertical component of singular points");
    if (q.deg() <= 0) continue;
    std::vector<std::pair<NFElem, std::vector<NFElem>>> vroots;
    collect_roots(q, {u0}, vroots, unres, "fiber over u-coordinate");
    for (auto& [v0, lctx] : vroots) {
      NFElem uu = lctx.empty() ? u0 : lctx[0];
      if (seen_pt.insert(point_key(uu, v0)).second) pts.push_back({uu, v0});
    }
  }
  return pts;
}

std::string coord_str(const NFElem& x) { return x.str(); }

std::string proj_label(const std::vector<NFElem>& p) {
  std::string s = "[";
  for (size_t i = 0; i < p.size(); i++)
    s += (i ? ":" : "") + coord_str(p[i]);
  return s + "]";
}

// ---------------------------------------------------------------------------
// Projective normalization of matrices over a field (for stabilizer images).

NFMat proj_normalize(const NFMat& m) {
  for (const auto& row : m)
    for (const auto& x : row)
      if (!x.is_zero()) {
        NFElem inv = x.inv();
        NFMat out = m;
        for (auto& r : out)
          for (auto& y : r) y = y * inv;
        return out;
      }
  throw std::runtime_error("proj_normalize: zero matrix");
}

std::string mat_str(const NFMat& m) {
  std::string s;
  for (const auto& row : m)
    for (const auto& x : row) s += x.str() + ";";
  return s;
}

bool is_proj_identity(const NFMat& m) {
  int n = m.size();
  for (int i = 0; i < n; i++)
    for (int j = 0; j < n; j++) {
      if (i == j && !(m[i][j] == m[0][0])) return false;
      if (i != j && !m[i][j].is_zero()) return false;
    }
  return true;
}

}  // namespace

// ---------------------------------------------------------------------------

bool curve_is_squarefree(const MultiPoly& C) {
  MultiPoly G = C;
  for (int i = 0; i < C.nvars(); i++) {
    MultiPoly d = C.derivative(i);
    if (d.is_zero()) continue;
    G = multipoly_gcd(G, d);
  }
  return G.total_degree() <= 0;
}

ADEType classify_ade(const MultiPoly& C, const std::vector<NFElem>& p) {
  return classify_local(local_form(C, p));
}

int milnor_number(const MultiPoly& C, const std::vector<NFElem>& p) {
  return local_milnor(local_form(C, p));
}

std::vector<CurveSingularityReport> singular_points_curve(
    const MultiPoly& C, std::vector<UnresolvedOrbit>* unresolved) {
  MultiPoly CC = rational_poly(C);
  if (CC.nvars() != 3)
    throw std::runtime_error("singular_points_curve: need a plane projective curve");
  if (!curve_is_squarefree(CC))
    throw std::runtime_error("singular_points_curve: curve is not square-free");
  std::vector<CurveSingularityReport> reports;
  auto add_point = [&](std::vector<NFElem> p) {
    CurveSingularityReport rep;
    rep.point = p;
    rep.F = field_of_point(p);
    MultiPoly f = local_form(CC, p);
    rep.type = classify_local(f, &rep.multiplicity, &rep.tangent_distinct_roots);
    reports.push_back(std::move(rep));
  };
  // chart z0 = 1
  MultiPoly one = MultiPoly::constant(kUV, NFElem(Rational(1)));
  MultiPoly g = CC.substitute({one, MultiPoly::variable(kUV, 0),
                               MultiPoly::variable(kUV, 1)});
  for (const AffPoint& p : affine_singular_points(g, unresolved))
    add_point({NFElem(Rational(1)), p.u, p.v});
  // points with z0 = 0: [0:1:t] candidates, then [0:0:1]
  std::vector<NFPoly> qs;
  std::vector<std::string> tv = {"t"};
  MultiPoly c0 = MultiPoly::constant(tv, fzero());
  MultiPoly c1 = MultiPoly::constant(tv, NFElem(Rational(1)));
  MultiPoly vt = MultiPoly::variable(tv, 0);
  for (int i = 0; i < 3; i++)
    qs.push_back(to_nfpoly(CC.derivative(i).substitute({c0, c1, vt}), 0,
                           NumberField::rationals()));
  NFPoly G = gcd_chain(qs, NumberField::rationals());
  if (G.is_zero())
    throw std::runtime_error("singular_points_curve: singular along a line");
  if (G.deg() > 0) {
    std::vector<std::pair<NFElem, std::vector<NFElem>>> troots;
    collect_roots(G, {}, troots, unresolved, "line at infinity");
    for (auto& [t0, ctx] : troots) add_point({fzero(), NFElem(Rational(1)), t0});
  }
  bool corner = true;
  for (int i = 0; i < 3 && corner; i++)
    if (!CC.derivative(i).eval({fzero(), fzero(), NFElem(Rational(1))}).is_zero())
      corner = false;
  if (corner) add_point({fzero(), fzero(), NFElem(Rational(1))});
  return reports;
}

std::optional<ADEType> mckay_type(const GroupProbe& G) {
  if (G.order == 1) return std::nullopt;
  if (G.cyclic) return ADEType{'A', (int)G.order - 1};
  if (G.binary_dihedral && G.order % 4 == 0 && G.order >= 8)
    return ADEType{'D', (int)(G.order / 4) + 2};
  throw std::runtime_error("mckay_type: unsupported stabilizer structure (order " +
                           std::to_string(G.order) + ")");
}

GroupProbe projective_stabilizer_probe(const MatrixGroup& W, const NFVec& v,
                                       const FieldPtr& E, const NFElem& gen_image,
                                       bool* orbit_splits, std::size_t* full_stab_order) {
  int n = v.size();
  int piv = -1;
  for (int i = 0; i < n && piv < 0; i++)
    if (!v[i].is_zero()) piv = i;
  if (piv < 0) throw std::runtime_error("projective_stabilizer_probe: zero vector");
  const std::vector<char>& special = W.special_mask();
  std::size_t full = 0;
  std::map<std::string, NFMat> reps;
  for (size_t gi = 0; gi < W.elements.size(); gi++) {
    NFMat gE = nf_mat_embed(W.elements[gi], E, gen_image);
    NFVec w = nf_mat_vec(gE, v);
    NFElem lam = w[piv] * v[piv].inv();
    bool prop = true;
    for (int i = 0; i < n && prop; i++)
      if (!(w[i] == lam * v[i])) prop = false;
    if (!prop) continue;
    full++;
    if (!special[gi]) continue;
    NFMat P = proj_normalize(gE);
    reps.emplace(mat_str(P), std::move(P));
  }
  if (full_stab_order) *full_stab_order = full;
  GroupProbe probe;
  probe.order = reps.size();
  // structure probe on the small projective group
  std::vector<NFMat> elems;
  for (auto& [k, m] : reps) elems.push_back(m);
  auto elem_order = [&](const NFMat& m) {
    NFMat acc = m;
    int o = 1;
    while (!is_proj_identity(acc)) {
      acc = proj_normalize(nf_mat_mul(acc, m));
      o++;
      if (o > (int)probe.order) throw std::runtime_error("probe: order overflow");
    }
    return o;
  };
  bool cyclic = probe.order == 1;
  int involutions = 0;
  for (const NFMat& m : elems) {
    int o = elem_order(m);
    if ((std::size_t)o == probe.order) cyclic = true;
    if (o == 2) involutions++;
  }
  probe.cyclic = cyclic;
  probe.binary_dihedral = !cyclic && involutions == 1;
  if (orbit_splits) {
    // |Stab_{W'}([v])| = (projective order) * (special scalars); the W-orbit
    // splits into two W'-orbits exactly when the whole stabilizer is special
    std::size_t scalars = 0;
    for (int ci : W.center())
      if (special[ci]) scalars++;
    *orbit_splits = (probe.order * scalars == full);
  }
  return probe;
}

// ---------------------------------------------------------------------------
// Surface singularity tables.

namespace {

std::string type_label(const ADEType& t, int copy, int copies) {
  std::string base;
  base += (char)std::tolower(t.family);
  base += std::to_string(t.n);
  if (copies == 2) base += copy == 0 ? "+" : "-";
  if (copies > 2) base += "." + std::to_string(copy + 1);
  return base;
}

void add_entries(SurfaceSingularityTable& T, const ADEType& t, int copies,
                 std::map<std::string, int>& used) {
  for (int c = 0; c < copies; c++) {
    std::string lab = type_label(t, c, copies);
    if (used.count(lab)) lab += "'" + std::to_string(++used[lab]);
    else used[lab] = 0;
    T.entries.push_back({lab, t});
    T.total_milnor += t.mu();
  }
}

SurfaceSingularityTable g29_table(const MatrixGroup& W) {
  SurfaceSingularityTable T;
  T.group = "G29";
  std::map<std::string, int> used;
  const FieldPtr& F = W.F;
  // Springer points: regular eigenvalue orders 8, 20, 12 (e = 4 handled below)
  SpringerData sd8 = springer_data(W, 8);
  CycloExt ext8 = cyclo_extension(F, 8);
  for (int e : {8, 20, 12}) {
    SpringerData sd = e == 8 ? sd8 : springer_data(W, e);
    CycloExt ext = e == 8 ? ext8 : cyclo_extension(F, e);
    if (sd.V_e.empty())
      throw std::runtime_error("g29_table: missing Springer eigenvector (e=" +
                               std::to_string(e) + ")");
    bool splits = false;
    std::size_t full = 0;
    GroupProbe probe =
        projective_stabilizer_probe(W, sd.V_e[0], sd.E, ext.gen_image, &splits, &full);
    auto t = mckay_type(probe);
    if (!t) continue;
    add_entries(T, *t, splits ? 2 : 1, used);
  }
  // rank-2 parabolic lines through the four generator pairs
  MultiPoly f1 = reynolds(W, {4, 0, 0, 0});
  if (f1.is_zero()) f1 = reynolds(W, {2, 2, 0, 0});
  if (f1.is_zero()) throw std::runtime_error("g29_table: no degree-4 invariant");
  auto line_key = [&](const NFMat& basis2x4) {
    NFMat m = basis2x4;
    nf_rref(m);
    return mat_str(m);
  };
  NFMat I = nf_identity(4);
  struct Line {
    int i, j;
    NFVec a, b;
    std::string key;
  };
  std::vector<Line> lines;
  int ng = W.generators.size();
  for (int i = 0; i < ng; i++)
    for (int j = i + 1; j < ng; j++) {
      NFMat M;
      NFMat gi = nf_mat_sub(W.generators[i], I), gj = nf_mat_sub(W.generators[j], I);
      for (auto& r : gi) M.push_back(r);
      for (auto& r : gj) M.push_back(r);
      auto ker = nf_kernel(M);
      if (ker.size() != 2) continue;
      lines.push_back({i, j, ker[0], ker[1], line_key({ker[0], ker[1]})});
    }
  // the scalar w4 = zeta4 * Id generates the projective kernel of the cover
  NFMat w4 = nf_identity(4);
  for (int i = 0; i < 4; i++) w4[i][i] = NFElem::gen(F);
  std::vector<std::set<std::string>> class_orbits;
  const std::vector<char>& special = W.special_mask();
  for (const Line& L : lines) {
    bool dup = false;
    for (auto& orb : class_orbits)
      if (orb.count(L.key)) dup = true;
    if (dup) continue;
    std::set<std::string> orbit;
    std::vector<size_t> setwise_special;
    for (size_t gi = 0; gi < W.elements.size(); gi++) {
      NFVec ga = nf_mat_vec(W.elements[gi], L.a);
      NFVec gb = nf_mat_vec(W.elements[gi], L.b);
      std::string k = line_key({ga, gb});
      orbit.insert(k);
      if (k == L.key && special[gi]) setwise_special.push_back(gi);
    }
    class_orbits.push_back(orbit);
    // does the line carry Springer e=8 points (already counted as d4)?
    NFMat span(4, NFVec(2, fzero()));
    for (int r = 0; r < 4; r++) {
      span[r][0] = embed(L.a[r], sd8.E, ext8.gen_image);
      span[r][1] = embed(L.b[r], sd8.E, ext8.gen_image);
    }
    std::set<std::string> on_line;
    for (size_t gi = 0; gi < W.elements.size(); gi++) {
      NFMat gE = nf_mat_embed(W.elements[gi], sd8.E, ext8.gen_image);
      NFVec w = nf_mat_vec(gE, sd8.V_e[0]);
      if (auto sol = nf_solve(span, w)) {
        int piv = -1;
        for (int r = 0; r < 4 && piv < 0; r++)
          if (!w[r].is_zero()) piv = r;
        NFElem inv = w[piv].inv();
        std::string k;
        for (int r = 0; r < 4; r++) k += (w[r] * inv).str() + ";";
        on_line.insert(k);
      }
    }
    if (!on_line.empty()) {
      if (on_line.size() != 4)
        throw std::runtime_error("g29_table: partial Springer overlap on a line");
      continue;  // E_jk lies in the orbit of the e=8 Springer point
    }
    // restrict f1 to the line: binary quartic q(s,t) = f1(s a + t b)
    std::vector<std::string> st = {"s", "t"};
    std::vector<MultiPoly> img;
    for (int r = 0; r < 4; r++)
      img.push_back(MultiPoly::variable(st, 0) * L.a[r] +
                    MultiPoly::variable(st, 1) * L.b[r]);
    MultiPoly q = f1.substitute(img);
    if (q.total_degree() != 4)
      throw std::runtime_error("g29_table: restriction is not a quartic");
    if (q.degree_in(1) < 4) {
      // move the root away from [0:1] by a basis shear
      for (int r = 0; r < 4; r++)
        img[r] = MultiPoly::variable(st, 0) * L.a[r] +
                 MultiPoly::variable(st, 1) * (L.b[r] + L.a[r]);
      q = f1.substitute(img);
      if (q.degree_in(1) < 4)
        throw std::runtime_error("g29_table: could not normalize the quartic");
    }
    NFPoly q1 = to_nfpoly(
        [&] {
          // dehomogenize at s = 1
          std::vector<std::string> tv2 = {"t"};
          return q.substitute({MultiPoly::constant(tv2, NFElem(Rational(1))),
                               MultiPoly::variable(tv2, 0)});
        }(),
        0, F);
    if (q1.deg() != 4) throw std::runtime_error("g29_table: quartic degeneration");
    if (nfpoly_gcd(q1, q1.derivative()).deg() > 0)
      throw std::runtime_error("g29_table: non-transversal line intersection");
    // Moebius action of the special setwise stabilizer on the four roots
    NFMat span2(4, NFVec(2, fzero()));
    for (int r = 0; r < 4; r++) {
      span2[r][0] = L.a[r];
      span2[r][1] = L.b[r];
    }
    std::map<std::string, NFMat> moebius;
    for (size_t gi : setwise_special) {
      NFVec ga = nf_mat_vec(W.elements[gi], L.a);
      NFVec gb = nf_mat_vec(W.elements[gi], L.b);
      auto sa = nf_solve(span2, ga), sb = nf_solve(span2, gb);
      if (!sa || !sb) throw std::runtime_error("g29_table: line coordinates failed");
      NFMat M = {{(*sa)[0], (*sb)[0]}, {(*sa)[1], (*sb)[1]}};
      NFMat P = proj_normalize(M);
      moebius.emplace(mat_str(P), std::move(P));
    }
    long total_fixed = 0;
    for (auto& [k, M] : moebius) {
      if (is_proj_identity(M)) {
        total_fixed += 4;
        continue;
      }
      // fixed points of t -> (M10 + M11 t)/(M00 + M01 t)
      NFPoly fx(F, {-M[1][0], M[0][0] - M[1][1], M[0][1]});
      if (fx.is_zero()) {
        total_fixed += 4;
        continue;
      }
      NFPoly gg = nfpoly_gcd(q1, fx);
      total_fixed += std::max(gg.deg(), 0);
      // [0:1] is not a root of q1 (degree 4), so no infinity correction
    }
    if (moebius.empty() || total_fixed % (long)moebius.size())
      throw std::runtime_error("g29_table: Burnside count failed");
    long orbits = total_fixed / (long)moebius.size();
    // stabilizer type: (W' \cap W_ij) <w4> modulo scalars
    MatrixGroup H = close_group(F, {W.generators[L.i], W.generators[L.j], w4}, 1000);
    long det1 = 0, scal1 = 0;
    for (const NFMat& m : H.elements) {
      if (!(nf_det(m) == NFElem(Rational(1)))) continue;
      det1++;
      bool scal = true;
      for (int r = 0; r < 4 && scal; r++)
        for (int c = 0; c < 4 && scal; c++)
          if ((r == c && !(m[r][c] == m[0][0])) || (r != c && !m[r][c].is_zero()))
            scal = false;
      if (scal) scal1++;
    }
    if (scal1 == 0 || det1 % scal1)
      throw std::runtime_error("g29_table: stabilizer arithmetic failed");
    long pord = det1 / scal1;
    GroupProbe probe;
    probe.order = pord;
    probe.cyclic = true;  // orders arising here are 1, 2 or 3
    if (pord > 3) throw std::runtime_error("g29_table: unexpected stabilizer order");
    auto t = mckay_type(probe);
    if (!t) continue;
    add_entries(T, *t, (int)orbits, used);
  }
  std::sort(T.entries.begin(), T.entries.end(),
            [](const auto& x, const auto& y) { return x.first < y.first; });
  return T;
}

}  // namespace

SurfaceSingularityTable surface_singularities(const QuotientSurface& S,
                                              const MatrixGroup* W) {
  SurfaceSingularityTable T;
  T.group = S.group;
  T.lambda = S.lambda;
  if (S.group == "G29") {
    if (!W) throw std::runtime_error("surface_singularities: G29 needs the group");
    SurfaceSingularityTable R = g29_table(*W);
    R.lambda = S.lambda;
    return R;
  }
  if (!S.lambda)
    throw std::runtime_error("surface_singularities: specialize lambda first");
  if (S.group == "G31") {
    if (*S.lambda == 0)
      throw std::runtime_error("surface_singularities: degenerate lambda = 0");
    MultiPoly branch = rational_poly(S.branch);
    MultiPoly sextic = MultiPoly::variable(branch.vars, 1) * branch;
    std::vector<UnresolvedOrbit> unres;
    auto reports = singular_points_curve(sextic, &unres);
    if (!unres.empty())
      throw std::runtime_error("surface_singularities: unresolved point orbit: " +
                               unres[0].note);
    for (const auto& rep : reports) {
      T.entries.push_back({proj_label(rep.point), rep.type});
      T.total_milnor += rep.type.mu();
    }
    return T;
  }
  if (S.group == "G30") {
    MultiPoly branch = rational_poly(S.branch);
    // the paper's branch curve B never carries a singular point with y1 = 0;
    // verify this before working in the chart y1 = 1
    std::vector<std::string> tv = {"t"};
    MultiPoly c0 = MultiPoly::constant(tv, fzero());
    MultiPoly c1 = MultiPoly::constant(tv, NFElem(Rational(1)));
    MultiPoly vt = MultiPoly::variable(tv, 0);
    std::vector<NFPoly> qs;
    for (int i = 0; i < 3; i++)
      qs.push_back(to_nfpoly(branch.derivative(i).substitute({c0, c1, vt}), 0,
                             NumberField::rationals()));
    NFPoly G = gcd_chain(qs, NumberField::rationals());
    if (G.is_zero() || G.deg() > 0)
      throw std::runtime_error("surface_singularities: branch singular point on y1 = 0");
    bool corner = true;
    for (int i = 0; i < 3 && corner; i++)
      if (!branch.derivative(i).eval({fzero(), fzero(), NFElem(Rational(1))}).is_zero())
        corner = false;
    if (corner)
      throw std::runtime_error("surface_singularities: branch singular point on y1 = 0");
    // ambient quotient points of P(1,2,3) lie off the branch and lift to a_r^±
    if (branch.eval({fzero(), NFElem(Rational(1)), fzero()}).is_zero() ||
        branch.eval({fzero(), fzero(), NFElem(Rational(1))}).is_zero())
      throw std::runtime_error("surface_singularities: branch meets an ambient point");
    MultiPoly one = MultiPoly::constant(kUV, NFElem(Rational(1)));
    MultiPoly g = branch.substitute({one, MultiPoly::variable(kUV, 0),
                                     MultiPoly::variable(kUV, 1)});
    {
      MultiPoly sf = g;
      MultiPoly du = g.derivative(0), dv = g.derivative(1);
      if (!du.is_zero()) sf = multipoly_gcd(sf, du);
      if (!dv.is_zero()) sf = multipoly_gcd(sf, dv);
      if (sf.total_degree() > 0)
        throw std::runtime_error("surface_singularities: branch is not square-free");
    }
    std::vector<UnresolvedOrbit> unres;
    for (const AffPoint& p : affine_singular_points(g, &unres)) {
      MultiPoly f = g.substitute({MultiPoly::variable(kUV, 0) +
                                      MultiPoly::constant(kUV, p.u),
                                  MultiPoly::variable(kUV, 1) +
                                      MultiPoly::constant(kUV, p.v)});
      ADEType t = classify_local(f);
      T.entries.push_back({proj_label({NFElem(Rational(1)), p.u, p.v}), t});
      T.total_milnor += t.mu();
    }
    if (!unres.empty())
      throw std::runtime_error("surface_singularities: unresolved point orbit: " +
                               unres[0].note);
    T.entries.push_back({"a1+", ADEType{'A', 1}});
    T.entries.push_back({"a1-", ADEType{'A', 1}});
    T.entries.push_back({"a2+", ADEType{'A', 2}});
    T.entries.push_back({"a2-", ADEType{'A', 2}});
    T.total_milnor += 6;
    return T;
  }
  throw std::runtime_error("surface_singularities: unknown group " + S.group);
}

bool verify_singular_point(const std::vector<MultiPoly>& chart,
                           const std::vector<NFElem>& p) {
  if (chart.empty()) throw std::runtime_error("verify_singular_point: empty chart");
  int n = chart[0].nvars();
  if ((int)p.size() != n)
    throw std::runtime_error("verify_singular_point: arity mismatch");
  int m = chart.size();
  NFMat jac(m, NFVec(n, fzero()));
  for (int i = 0; i < m; i++) {
    if (chart[i].nvars() != n)
      throw std::runtime_error("verify_singular_point: arity mismatch");
    if (!chart[i].eval(p).is_zero()) return false;
    for (int j = 0; j < n; j++) jac[i][j] = chart[i].derivative(j).eval(p);
  }
  return nf_rank(jac) < std::min(m, n);
}

bool separation_check(const QuotientSurface& S) {
  if (!S.lambda)
    throw std::runtime_error("separation_check: specialize lambda first");
  Rational lam = *S.lambda;
  // value of the fibration coordinate at each non-excluded singular point;
  // nullopt encodes the point at infinity of the base P^1
  std::vector<std::optional<NFElem>> vals;
  auto same = [](const std::optional<NFElem>& a, const std::optional<NFElem>& b) {
    if (!a || !b) return !a && !b;
    if (a->is_rational_value() != b->is_rational_value()) return false;
    if (a->is_rational_value()) return a->rat() == b->rat();
    if (a->F != b->F) return false;
    return *a == *b;
  };
  std::vector<UnresolvedOrbit> unres;
  if (S.group == "G31") {
    if (lam == 0) throw std::runtime_error("separation_check: degenerate lambda = 0");
    MultiPoly branch = rational_poly(S.branch);
    MultiPoly sextic = MultiPoly::variable(branch.vars, 1) * branch;
    auto reports = singular_points_curve(sextic, &unres);
    for (const auto& rep : reports) {
      const auto& p = rep.point;
      if (p[1].is_zero() && p[2].is_zero()) continue;  // the excluded point d6
      // phi_{d6}([z1:z2:z4]) = [z2:z4]
      if (p[1].is_zero()) vals.push_back(std::nullopt);
      else vals.push_back(p[2] * p[1].inv());
    }
    // the resolution of d6 contributes an A1 point on the fiber z4 = -4l(l+1) z2;
    // a singular point on that fiber breaks the hypothesis as well
    NFElem afib(Rational(-4) * lam * (lam + 1));
    for (const auto& v : vals)
      if (same(v, afib)) return false;
  } else if (S.group == "G30") {
    MultiPoly branch = rational_poly(S.branch);
    MultiPoly one = MultiPoly::constant(kUV, NFElem(Rational(1)));
    MultiPoly g = branch.substitute({one, MultiPoly::variable(kUV, 0),
                                     MultiPoly::variable(kUV, 1)});
    // phi_lambda([y1:y3:y4:j]) = [y1^2:y3]; in the chart y1 = 1 this is y3
    for (const AffPoint& p : affine_singular_points(g, &unres))
      vals.push_back(p.u);
  } else {
    throw std::runtime_error("separation_check: no fibration for " + S.group);
  }
  for (size_t i = 0; i < vals.size(); i++)
    for (size_t j = i + 1; j < vals.size(); j++)
      if (same(vals[i], vals[j])) return false;
  // a collision above is conclusive even with unresolved orbits; a clean
  // "true" is only certified when every singular point was resolved
  if (!unres.empty())
    throw std::runtime_error("separation_check: unresolved point orbit: " +
                             unres[0].note);
  return true;
}

}  // namespace refk3
