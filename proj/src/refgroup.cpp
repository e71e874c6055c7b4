#include "refk3/refgroup.hpp"

#include <algorithm>
#include <deque>
#include <filesystem>
#include <fstream>
#include <functional>
#include <numeric>
#include <sstream>
#include <stdexcept>
#include <thread>

namespace refk3 {

namespace {

NFElem fzero(const FieldPtr& F) {
  return NFElem(F, std::vector<Rational>(F->degree(), Rational(0)));
}
NFElem fone(const FieldPtr& F) {
  std::vector<Rational> c(F->degree(), Rational(0));
  c[0] = 1;
  return NFElem(F, c);
}

NFMat identity_over(const FieldPtr& F, int n = 4) {
  NFMat m(n, NFVec(n, fzero(F)));
  for (int i = 0; i < n; i++) m[i][i] = fone(F);
  return m;
}

std::string vec_key(const NFVec& v) {
  // canonical across field representations: trailing zero coefficients of
  // each entry are dropped (mixed-field zeros arise from sparse products)
  std::string s;
  for (const auto& e : v) {
    int last = -1;
    for (int i = 0; i < (int)e.c.size(); i++)
      if (e.c[i] != 0) last = i;
    if (last < 0) {
      s += '0';
    } else {
      for (int i = 0; i <= last; i++) {
        s += e.c[i].get_str();
        if (i < last) s += ',';
      }
    }
    s += ';';
  }
  return s;
}

bool vectors_parallel(const NFVec& a, const NFVec& b) {
  int n = (int)a.size();
  for (int i = 0; i < n; i++)
    for (int j = i + 1; j < n; j++)
      if (a[i] * b[j] != a[j] * b[i]) return false;
  return true;
}

// normalize a projective representative: first nonzero coordinate = 1
NFVec normalize_point(const NFVec& v) {
  int p = -1;
  for (int i = 0; i < (int)v.size(); i++)
    if (!v[i].is_zero()) {
      p = i;
      break;
    }
  if (p < 0) throw std::invalid_argument("zero vector has no projective class");
  NFElem s = v[p].inv();
  NFVec r = v;
  for (auto& x : r) x = x * s;
  return r;
}

// canonical key of the span of the given (independent) vectors: rref rows
std::string span_key(std::vector<NFVec> rows) {
  NFMat m(rows.begin(), rows.end());
  nf_rref(m);
  std::string s;
  for (const auto& r : m) s += vec_key(r);
  return s;
}

bool in_span(const std::vector<NFVec>& basis, const NFVec& v) {
  NFMat m;
  for (const auto& b : basis) m.push_back(b);
  int r0 = nf_rank(m);
  m.push_back(v);
  return nf_rank(m) == r0;
}

// generic closure of a set of matrices under multiplication
std::vector<NFMat> closure(const FieldPtr& F, const std::vector<NFMat>& gens,
                           std::size_t cap) {
  std::vector<NFMat> elts;
  std::unordered_map<std::string, int> idx;
  NFMat id = identity_over(F);
  elts.push_back(id);
  idx[matrix_key(id)] = 0;
  std::deque<int> queue{0};
  while (!queue.empty()) {
    int cur = queue.front();
    queue.pop_front();
    for (const auto& g : gens) {
      NFMat p = nf_mat_mul(elts[cur], g);
      std::string k = matrix_key(p);
      if (idx.count(k)) continue;
      if (elts.size() >= cap) throw std::runtime_error("group closure cap exceeded");
      idx[k] = (int)elts.size();
      elts.push_back(std::move(p));
      queue.push_back((int)elts.size() - 1);
    }
  }
  return elts;
}

int parse_cyclo_label(const FieldPtr& F) {
  // "QQ(zetaN)" -> N, else 0
  const std::string& l = F->label;
  const std::string pre = "QQ(zeta";
  if (l.rfind(pre, 0) != 0) return 0;
  return std::atoi(l.substr(pre.size()).c_str());
}

// conductor of the group base field: smallest n with F ⊆ Q(zeta_n)
int base_conductor(const FieldPtr& F) {
  if (F->is_rational()) return 1;
  QPoly i_poly({Rational(1), Rational(0), Rational(1)});    // t^2+1
  QPoly s5_poly({Rational(-5), Rational(0), Rational(1)});  // t^2-5
  if (F->minpoly == i_poly) return 4;
  if (F->minpoly == s5_poly) return 5;
  int n = parse_cyclo_label(F);
  if (n) return n;
  throw std::invalid_argument("unsupported base field: " + F->label);
}

// image of the generator of F inside Q(zeta_n), n a multiple of the conductor
NFElem base_gen_image(const FieldPtr& F, const FieldPtr& E, int n) {
  if (F->is_rational()) return fzero(E);
  int m = base_conductor(F);
  NFElem z = NFElem::gen(E);
  if (m == 4) return z.pow(n / 4);                      // i -> zeta^(n/4)
  if (m == 5 && F->minpoly.deg() == 2) {                // sqrt5 -> 1+2(z^(n/5)+z^(4n/5))
    NFElem two = fone(E) + fone(E);
    return fone(E) + two * (z.pow(n / 5) + z.pow(4 * n / 5));
  }
  return z.pow(n / m);  // cyclotomic base
}

// group matrices lifted to the field of the given vector (the group field
// itself, or a cyclotomic extension of it)
struct LiftedGroup {
  std::vector<NFMat> gens;
  std::vector<NFMat> elts;
};

LiftedGroup lift_to_field(const MatrixGroup& W, const FieldPtr& E) {
  LiftedGroup L;
  if (E->minpoly == W.F->minpoly || E->is_rational()) {
    L.gens = W.generators;
    L.elts = W.elements;
    return L;
  }
  int n = parse_cyclo_label(E);
  if (!n)
    throw std::invalid_argument("vector field must be the group field or cyclotomic");
  NFElem gi = base_gen_image(W.F, E, n);
  for (const auto& g : W.generators) L.gens.push_back(nf_mat_embed(g, E, gi));
  for (const auto& g : W.elements) L.elts.push_back(nf_mat_embed(g, E, gi));
  return L;
}

}  // namespace

std::string matrix_key(const NFMat& m) {
  std::string s;
  for (const auto& row : m) s += vec_key(row);
  return s;
}

int MatrixGroup::index_of(const NFMat& m) const {
  auto it = index.find(matrix_key(m));
  if (it == index.end()) return -1;
  return it->second;
}

const std::vector<char>& MatrixGroup::special_mask() const {
  if (special_mask_.empty() && !elements.empty()) {
    special_mask_.resize(elements.size(), 0);
    NFElem one = fone(F);
    unsigned nthreads = std::max(1u, std::thread::hardware_concurrency());
    std::vector<std::thread> ts;
    std::size_t chunk = (elements.size() + nthreads - 1) / nthreads;
    for (unsigned t = 0; t < nthreads; t++) {
      std::size_t lo = t * chunk, hi = std::min(elements.size(), lo + chunk);
      if (lo >= hi) break;
      ts.emplace_back([this, lo, hi, &one] {
        for (std::size_t i = lo; i < hi; i++)
          special_mask_[i] = (nf_det(elements[i]) == one) ? 1 : 0;
      });
    }
    for (auto& t : ts) t.join();
  }
  return special_mask_;
}

const std::vector<int>& MatrixGroup::special_elements() const {
  if (special_.empty()) {
    const auto& mask = special_mask();
    for (std::size_t i = 0; i < mask.size(); i++)
      if (mask[i]) special_.push_back((int)i);
  }
  return special_;
}

const std::vector<int>& MatrixGroup::reflections() const {
  if (refl_.empty()) {
    NFMat id = identity_over(F);
    std::vector<char> flags(elements.size(), 0);
    unsigned nthreads = std::max(1u, std::thread::hardware_concurrency());
    std::vector<std::thread> ts;
    std::size_t chunk = (elements.size() + nthreads - 1) / nthreads;
    for (unsigned t = 0; t < nthreads; t++) {
      std::size_t lo = t * chunk, hi = std::min(elements.size(), lo + chunk);
      if (lo >= hi) break;
      ts.emplace_back([this, lo, hi, &id, &flags] {
        for (std::size_t i = lo; i < hi; i++)
          flags[i] = (nf_rank(nf_mat_sub(elements[i], id)) == 1) ? 1 : 0;
      });
    }
    for (auto& t : ts) t.join();
    for (std::size_t i = 0; i < flags.size(); i++)
      if (flags[i]) refl_.push_back((int)i);
  }
  return refl_;
}

const std::vector<int>& MatrixGroup::center() const {
  if (center_.empty()) {
    for (std::size_t i = 0; i < elements.size(); i++) {
      bool central = true;
      for (const auto& g : generators)
        if (!nf_mat_eq(nf_mat_mul(elements[i], g), nf_mat_mul(g, elements[i]))) {
          central = false;
          break;
        }
      if (central) center_.push_back((int)i);
    }
  }
  return center_;
}

std::size_t MatrixGroup::derived_order() const {
  if (derived_order_ == 0) {
    std::vector<NFMat> comms;
    for (const auto& a : generators)
      for (const auto& b : generators) {
        NFMat c = nf_mat_mul(nf_mat_mul(a, b),
                             nf_mat_mul(nf_inverse(a), nf_inverse(b)));
        comms.push_back(std::move(c));
      }
    // close; if not normal yet, saturate with generator conjugates
    for (;;) {
      std::vector<NFMat> elts = closure(F, comms, elements.size() + 1);
      std::unordered_map<std::string, int> idx;
      for (std::size_t i = 0; i < elts.size(); i++) idx[matrix_key(elts[i])] = (int)i;
      bool normal = true;
      std::size_t before = comms.size();
      for (const auto& g : generators) {
        NFMat gi = nf_inverse(g);
        for (const auto& c : comms) {
          NFMat conj = nf_mat_mul(nf_mat_mul(g, c), gi);
          if (!idx.count(matrix_key(conj))) {
            comms.push_back(std::move(conj));
            normal = false;
          }
        }
      }
      if (normal) {
        derived_order_ = elts.size();
        break;
      }
      if (comms.size() == before) throw std::logic_error("derived closure stalled");
    }
  }
  return derived_order_;
}

MatrixGroup close_group(const FieldPtr& F, const std::vector<NFMat>& generators,
                        std::size_t cap) {
  MatrixGroup W;
  W.F = F;
  W.generators = generators;
  W.elements = closure(F, generators, cap);
  for (std::size_t i = 0; i < W.elements.size(); i++)
    W.index[matrix_key(W.elements[i])] = (int)i;
  return W;
}

StructureReport structure_report(const MatrixGroup& W) {
  StructureReport r;
  r.order = W.order();
  r.reflection_count = (int)W.reflections().size();
  r.center_order = W.center().size();
  r.special_order = W.special_elements().size();
  r.derived_order = W.derived_order();
  r.derived_equals_special = (r.derived_order == r.special_order);
  if (!W.degrees.empty()) {
    long long prod = 1;
    for (int d : W.degrees) prod *= d;
    r.degree_product_ok = (prod == (long long)r.order);
  }
  return r;
}

ParabolicSubgroup stabilizers(const MatrixGroup& W, const NFVec& v) {
  ParabolicSubgroup P;
  P.vector = v;
  const auto& mask = W.special_mask();
  LiftedGroup L = lift_to_field(W, v[0].F);
  std::vector<int> fixator;
  std::size_t stab = 0, stab_sl = 0;
  for (std::size_t i = 0; i < L.elts.size(); i++) {
    NFVec w = nf_mat_vec(L.elts[i], v);
    if (vectors_parallel(w, v)) {
      stab++;
      if (mask[i]) stab_sl++;
      bool fixes = true;
      for (int k = 0; k < (int)v.size(); k++)
        if (w[k] != v[k]) {
          fixes = false;
          break;
        }
      if (fixes) fixator.push_back((int)i);
    }
  }
  P.fixator_order = fixator.size();
  P.stabilizer_order = stab;
  P.stabilizer_special_order = stab_sl;
  // N_W(W_v) = setwise stabilizer of the fixed space of W_v (parabolics are
  // the pointwise fixators of their fixed spaces)
  NFMat stacked;
  NFMat id = identity_over(v[0].F);
  for (int i : fixator) {
    NFMat d = nf_mat_sub(L.elts[i], id);
    for (auto& row : d) stacked.push_back(row);
  }
  std::vector<NFVec> fixed_basis = nf_kernel(stacked);
  std::size_t norm = 0;
  for (const auto& g : L.elts) {
    bool ok = true;
    for (const auto& b : fixed_basis)
      if (!in_span(fixed_basis, nf_mat_vec(g, b))) {
        ok = false;
        break;
      }
    if (ok) norm++;
  }
  P.normalizer_order = norm;
  return P;
}

OrbitInfo orbit_size_point(const MatrixGroup& W, const NFVec& v) {
  OrbitInfo info;
  NFVec start = normalize_point(v);
  LiftedGroup L = lift_to_field(W, start[0].F);
  std::unordered_map<std::string, int> seen;
  std::deque<NFVec> queue;
  seen[vec_key(start)] = 0;
  queue.push_back(start);
  while (!queue.empty()) {
    NFVec cur = queue.front();
    queue.pop_front();
    for (const auto& g : L.gens) {
      NFVec w = normalize_point(nf_mat_vec(g, cur));
      std::string k = vec_key(w);
      if (seen.count(k)) continue;
      seen[k] = (int)seen.size();
      queue.push_back(std::move(w));
    }
  }
  info.size = seen.size();
  // stabilizer and special-stabilizer orders by full scan
  const auto& mask = W.special_mask();
  std::size_t stab = 0, stab_sl = 0;
  for (std::size_t i = 0; i < L.elts.size(); i++) {
    NFVec w = nf_mat_vec(L.elts[i], start);
    if (vectors_parallel(w, start)) {
      stab++;
      if (mask[i]) stab_sl++;
    }
  }
  info.stabilizer_order = stab;
  std::size_t special = W.special_elements().size();
  // #(W^SL-orbits) = |W| |W_z ∩ W^SL| / (|W^SL| |W_z|)
  info.suborbits_special = W.order() * stab_sl / (special * stab);
  return info;
}

OrbitInfo orbit_size_line(const MatrixGroup& W, const NFVec& a, const NFVec& b) {
  OrbitInfo info;
  LiftedGroup L = lift_to_field(W, a[0].F);
  const auto& gens = L.gens;
  const auto& elts = L.elts;
  std::unordered_map<std::string, int> seen;
  std::deque<std::pair<NFVec, NFVec>> queue;
  seen[span_key({a, b})] = 0;
  queue.push_back({a, b});
  while (!queue.empty()) {
    auto [x, y] = queue.front();
    queue.pop_front();
    for (const auto& g : gens) {
      NFVec gx = nf_mat_vec(g, x), gy = nf_mat_vec(g, y);
      std::string k = span_key({gx, gy});
      if (seen.count(k)) continue;
      seen[k] = (int)seen.size();
      queue.push_back({std::move(gx), std::move(gy)});
    }
  }
  info.size = seen.size();
  const auto& mask = W.special_mask();
  std::vector<NFVec> basis{a, b};
  std::size_t stab = 0, stab_sl = 0;
  for (std::size_t i = 0; i < elts.size(); i++) {
    NFVec gx = nf_mat_vec(elts[i], a), gy = nf_mat_vec(elts[i], b);
    if (in_span(basis, gx) && in_span(basis, gy)) {
      stab++;
      if (mask[i]) stab_sl++;
    }
  }
  info.stabilizer_order = stab;
  std::size_t special = W.special_elements().size();
  info.suborbits_special = W.order() * stab_sl / (special * stab);
  return info;
}

CycloExt cyclo_extension(const FieldPtr& F, int e) {
  int m = base_conductor(F);
  int n = (int)std::lcm((long)e, (long)m);
  CycloExt ext;
  if (n <= 2) {
    ext.E = F;
    ext.zeta_e = (e <= 1) ? fone(F) : -fone(F);
    ext.gen_image = NFElem::gen(F);
    return ext;
  }
  ext.E = NumberField::cyclo((unsigned)n);
  NFElem z = NFElem::gen(ext.E);
  ext.zeta_e = z.pow(n / e);
  ext.gen_image = base_gen_image(F, ext.E, n);
  return ext;
}

int eigenspace_dim(const NFMat& w, const FieldPtr& F, const CycloExt& ext) {
  NFPoly p = nf_charpoly(w, F);
  // lift coefficients into the extension
  std::vector<NFElem> c;
  for (const auto& x : p.c) c.push_back(embed(x, ext.E, ext.gen_image));
  NFPoly q(ext.E, c);
  // multiplicity of zeta_e as a root (finite-order matrices are
  // diagonalizable, so eigenspace dim = root multiplicity)
  int mult = 0;
  while (q.deg() >= 1 && q.eval(ext.zeta_e).is_zero()) {
    // synthetic division by (t - zeta)
    std::vector<NFElem> d(q.deg());
    NFElem carry = q.c.back();
    for (int i = q.deg() - 1; i >= 0; i--) {
      d[i] = carry;
      carry = q.c[i] + carry * ext.zeta_e;
    }
    q = NFPoly(ext.E, d);
    mult++;
  }
  return mult;
}

SpringerData springer_data(const MatrixGroup& W, int e) {
  SpringerData S;
  S.e = e;
  for (int d : W.degrees)
    if (d % e == 0) S.delta++;
  for (int d : W.codegrees)
    if (d == 0 || d % e == 0) S.delta_star++;
  CycloExt ext = cyclo_extension(W.F, e);
  S.E = ext.E;
  S.zeta = ext.zeta_e;
  if (S.delta == 0) return S;
  // witness scan
  int witness = -1;
  for (std::size_t i = 0; i < W.elements.size(); i++)
    if (eigenspace_dim(W.elements[i], W.F, ext) == S.delta) {
      witness = (int)i;
      break;
    }
  if (witness < 0) throw std::logic_error("no Springer witness found");
  NFMat wE = nf_mat_embed(W.elements[witness], S.E, ext.gen_image);
  S.w_e = wE;
  NFMat shifted = wE;
  for (int i = 0; i < 4; i++) shifted[i][i] = shifted[i][i] - S.zeta;
  S.V_e = nf_kernel(shifted);
  if ((int)S.V_e.size() != S.delta) throw std::logic_error("eigenspace dim mismatch");
  // setwise stabilizer and pointwise fixator of V(e), parallel scan
  std::size_t n = W.elements.size();
  unsigned nthreads = std::max(1u, std::thread::hardware_concurrency());
  std::vector<std::size_t> setc(nthreads, 0), pointc(nthreads, 0);
  std::vector<std::thread> ts;
  std::size_t chunk = (n + nthreads - 1) / nthreads;
  for (unsigned t = 0; t < nthreads; t++) {
    std::size_t lo = t * chunk, hi = std::min(n, lo + chunk);
    if (lo >= hi) break;
    ts.emplace_back([&, t, lo, hi] {
      for (std::size_t i = lo; i < hi; i++) {
        NFMat gE = nf_mat_embed(W.elements[i], S.E, ext.gen_image);
        bool setwise = true, pointwise = true;
        for (const auto& b : S.V_e) {
          NFVec gb = nf_mat_vec(gE, b);
          if (!in_span(S.V_e, gb)) {
            setwise = pointwise = false;
            break;
          }
          for (std::size_t k = 0; k < b.size() && pointwise; k++)
            if (gb[k] != b[k]) pointwise = false;
        }
        if (setwise) setc[t]++;
        if (pointwise) pointc[t]++;
      }
    });
  }
  for (auto& t : ts) t.join();
  for (unsigned t = 0; t < nthreads; t++) {
    S.setwise_order += setc[t];
    S.pointwise_order += pointc[t];
  }
  S.We_order = S.setwise_order / S.pointwise_order;
  return S;
}

MultiPoly apply_matrix(const MultiPoly& f, const NFMat& g, const FieldPtr& F) {
  std::vector<MultiPoly> images;
  for (int i = 0; i < (int)f.vars.size(); i++) {
    MultiPoly li(f.vars);
    for (int j = 0; j < (int)f.vars.size(); j++) {
      if (g[i][j].is_zero()) continue;
      ExpVec e(f.vars.size(), 0);
      e[j] = 1;
      li.insert_term(e, g[i][j]);
    }
    images.push_back(li);
  }
  return f.substitute(images);
}

bool is_invariant(const MatrixGroup& W, const MultiPoly& f) {
  for (const auto& g : W.generators)
    if (!(apply_matrix(f, g, W.F) == f)) return false;
  return true;
}

MultiPoly reynolds(const MatrixGroup& W, const std::vector<int>& monomial) {
  std::vector<std::string> vars{"x", "y", "z", "t"};
  std::size_t n = W.order();
  unsigned nthreads = std::max(1u, std::thread::hardware_concurrency());
  std::vector<MultiPoly> acc(nthreads, MultiPoly(vars));
  std::vector<std::thread> ts;
  std::size_t chunk = (n + nthreads - 1) / nthreads;
  for (unsigned t = 0; t < nthreads; t++) {
    std::size_t lo = t * chunk, hi = std::min(n, lo + chunk);
    if (lo >= hi) break;
    ts.emplace_back([&, t, lo, hi] {
      MultiPoly sum(vars);
      for (std::size_t i = lo; i < hi; i++) {
        const NFMat& g = W.elements[i];
        MultiPoly term = MultiPoly::constant(vars, fone(W.F));
        for (int v = 0; v < 4; v++) {
          if (monomial[v] == 0) continue;
          MultiPoly li(vars);
          for (int j = 0; j < 4; j++) {
            if (g[v][j].is_zero()) continue;
            ExpVec e(4, 0);
            e[j] = 1;
            li.insert_term(e, g[v][j]);
          }
          term = term * li.pow((unsigned)monomial[v]);
        }
        sum = sum + term;
      }
      acc[t] = std::move(sum);
    });
  }
  for (auto& t : ts) t.join();
  MultiPoly total(vars);
  for (const auto& a : acc) total = total + a;
  return total * NFElem(Rational(1, (long)n));
}

NFVec parabolic_fixed_vector(const MatrixGroup& W, const std::vector<int>& gens) {
  NFMat stacked;
  NFMat id = identity_over(W.F);
  for (int gi : gens) {
    NFMat d = nf_mat_sub(W.generators.at(gi), id);
    for (auto& row : d) stacked.push_back(row);
  }
  std::vector<NFVec> ker = nf_kernel(stacked);
  if (ker.size() != 1) throw std::logic_error("fixed space is not a line");
  return ker[0];
}

// --- cache ---

std::string generators_hash(const FieldPtr& F, const std::vector<NFMat>& gens) {
  std::string s = F->label + "|";
  for (const auto& g : gens) s += matrix_key(g);
  std::size_t h = std::hash<std::string>{}(s);
  std::ostringstream os;
  os << std::hex << h;
  return os.str();
}

bool save_group_cache(const MatrixGroup& W, const std::string& dir) {
  namespace fs = std::filesystem;
  fs::create_directories(dir);
  std::string path = dir + "/" + generators_hash(W.F, W.generators) + ".grp";
  std::ofstream out(path);
  if (!out) return false;
  out << W.F->label << "\n" << W.order() << "\n";
  int d = W.F->degree();
  for (const auto& g : W.elements) {
    for (const auto& row : g)
      for (const auto& e : row)
        for (int k = 0; k < d; k++)
          out << (k < (int)e.c.size() ? e.c[k].get_str() : std::string("0")) << " ";
    out << "\n";
  }
  return (bool)out;
}

std::optional<MatrixGroup> load_group_cache(const FieldPtr& F,
                                            const std::vector<NFMat>& gens,
                                            const std::string& dir) {
  std::string path = dir + "/" + generators_hash(F, gens) + ".grp";
  std::ifstream in(path);
  if (!in) return std::nullopt;
  std::string label;
  std::size_t order;
  in >> label >> order;
  if (label != F->label) return std::nullopt;
  int d = F->degree();
  MatrixGroup W;
  W.F = F;
  W.generators = gens;
  for (std::size_t i = 0; i < order; i++) {
    NFMat m(4, NFVec(4, fzero(F)));
    for (int r = 0; r < 4; r++)
      for (int cidx = 0; cidx < 4; cidx++) {
        std::vector<Rational> cc(d);
        for (int k = 0; k < d; k++) {
          std::string tok;
          if (!(in >> tok)) return std::nullopt;
          cc[k] = Rational(tok);
        }
        m[r][cidx] = NFElem(F, cc);
      }
    W.elements.push_back(std::move(m));
  }
  for (std::size_t i = 0; i < W.elements.size(); i++)
    W.index[matrix_key(W.elements[i])] = (int)i;
  // sanity: generators must be present
  for (const auto& g : gens)
    if (!W.contains(g)) return std::nullopt;
  return W;
}

MatrixGroup build_group(const GroupModel& model, const std::string& cache_dir) {
  if (!cache_dir.empty()) {
    auto cached = load_group_cache(model.F, model.generators, cache_dir);
    if (cached) {
      cached->degrees = model.degrees;
      cached->codegrees = model.codegrees;
      cached->name = model.name;
      return std::move(*cached);
    }
  }
  MatrixGroup W = close_group(model.F, model.generators);
  W.degrees = model.degrees;
  W.codegrees = model.codegrees;
  W.name = model.name;
  if (!cache_dir.empty()) save_group_cache(W, cache_dir);
  return W;
}

}  // namespace refk3
