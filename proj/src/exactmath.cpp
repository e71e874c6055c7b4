#include "refk3/exactmath.hpp"

#include <algorithm>
#include <cctype>
#include <mutex>
#include <numeric>
#include <sstream>
#include <unordered_map>

namespace refk3 {

// ---------------------------------------------------------------------------
// rationals

Rational parse_rational(const std::string& s) {
  std::string t;
  for (char ch : s)
    if (!std::isspace((unsigned char)ch)) t += ch;
  if (t.empty()) throw std::invalid_argument("empty rational literal");
  for (char ch : t)
    if (!(std::isdigit((unsigned char)ch) || ch == '-' || ch == '+' || ch == '/'))
      throw std::invalid_argument("invalid rational literal: " + s);
  Rational r;
  if (r.set_str(t, 10) != 0) throw std::invalid_argument("invalid rational literal: " + s);
  r.canonicalize();
  return r;
}

std::string rational_str(const Rational& r) { return r.get_str(); }

namespace {

// Pollard rho with Miller-Rabin, good enough for the coefficient sizes here.
bool miller_rabin(const Int& n) {
  return mpz_probab_prime_p(n.get_mpz_t(), 32) != 0;
}

Int pollard_rho(const Int& n) {
  if (n % 2 == 0) return 2;
  gmp_randclass rng(gmp_randinit_default);
  rng.seed(12345);
  while (true) {
    Int x = rng.get_z_range(n - 2) + 2, y = x, c = rng.get_z_range(n - 1) + 1, d = 1;
    while (d == 1) {
      x = (x * x + c) % n;
      y = (y * y + c) % n;
      y = (y * y + c) % n;
      Int diff = x - y;
      if (diff < 0) diff = -diff;
      if (diff == 0) break;
      mpz_gcd(d.get_mpz_t(), diff.get_mpz_t(), n.get_mpz_t());
    }
    if (d != 1 && d != n) return d;
  }
}

void factor_rec(Int n, std::map<Int, unsigned>& out) {
  if (n == 1) return;
  if (miller_rabin(n)) {
    out[n]++;
    return;
  }
  Int d = pollard_rho(n);
  factor_rec(d, out);
  factor_rec(n / d, out);
}

}  // namespace

std::vector<std::pair<Int, unsigned>> factor_int(Int n) {
  if (n == 0) throw std::invalid_argument("factor_int(0)");
  if (n < 0) n = -n;
  std::map<Int, unsigned> m;
  for (long p : {2L, 3L, 5L, 7L, 11L, 13L, 17L, 19L, 23L, 29L, 31L, 37L})
    while (n % p == 0) { m[Int(p)]++; n /= p; }
  if (n > 1) factor_rec(n, m);
  return {m.begin(), m.end()};
}

Int squarefree_part(const Rational& r) {
  if (r == 0) throw std::invalid_argument("squarefree_part(0)");
  Int n = r.get_num() * r.get_den();  // same square class as r
  Int sign = n < 0 ? -1 : 1;
  Int out = sign;
  for (auto& [p, e] : factor_int(n))
    if (e % 2) out *= p;
  return out;
}

bool is_square(const Int& n, Int* root) {
  if (n < 0) return false;
  if (mpz_perfect_square_p(n.get_mpz_t()) == 0) return false;
  if (root) mpz_sqrt(root->get_mpz_t(), n.get_mpz_t());
  return true;
}

// ---------------------------------------------------------------------------
// QPoly

QPoly QPoly::constant(const Rational& r) {
  QPoly p;
  if (r != 0) p.c = {r};
  return p;
}

QPoly QPoly::x() { return QPoly({Rational(0), Rational(1)}); }

void QPoly::trim() {
  while (!c.empty() && c.back() == 0) c.pop_back();
}

Rational QPoly::lead() const {
  if (c.empty()) throw std::invalid_argument("lead of zero polynomial");
  return c.back();
}

QPoly QPoly::operator+(const QPoly& o) const {
  QPoly r;
  r.c.resize(std::max(c.size(), o.c.size()), Rational(0));
  for (size_t i = 0; i < c.size(); i++) r.c[i] += c[i];
  for (size_t i = 0; i < o.c.size(); i++) r.c[i] += o.c[i];
  r.trim();
  return r;
}

QPoly QPoly::operator-(const QPoly& o) const {
  QPoly r;
  r.c.resize(std::max(c.size(), o.c.size()), Rational(0));
  for (size_t i = 0; i < c.size(); i++) r.c[i] += c[i];
  for (size_t i = 0; i < o.c.size(); i++) r.c[i] -= o.c[i];
  r.trim();
  return r;
}

QPoly QPoly::operator*(const QPoly& o) const {
  if (c.empty() || o.c.empty()) return QPoly();
  QPoly r;
  r.c.assign(c.size() + o.c.size() - 1, Rational(0));
  for (size_t i = 0; i < c.size(); i++)
    for (size_t j = 0; j < o.c.size(); j++) r.c[i + j] += c[i] * o.c[j];
  r.trim();
  return r;
}

QPoly QPoly::operator*(const Rational& s) const {
  if (s == 0) return QPoly();
  QPoly r = *this;
  for (auto& x : r.c) x *= s;
  return r;
}

std::pair<QPoly, QPoly> QPoly::divmod(const QPoly& d) const {
  if (d.is_zero()) throw std::invalid_argument("division by zero polynomial");
  QPoly q, r = *this;
  q.c.assign(std::max<int>(0, deg() - d.deg() + 1), Rational(0));
  Rational dl = d.lead();
  while (!r.is_zero() && r.deg() >= d.deg()) {
    Rational f = r.lead() / dl;
    int shift = r.deg() - d.deg();
    q.c[shift] = f;
    for (int i = 0; i <= d.deg(); i++) r.c[i + shift] -= f * d.c[i];
    r.trim();
  }
  q.trim();
  return {q, r};
}

QPoly QPoly::derivative() const {
  QPoly r;
  for (int i = 1; i <= deg(); i++) r.c.push_back(c[i] * i);
  r.trim();
  return r;
}

Rational QPoly::eval(const Rational& x) const {
  Rational v(0);
  for (int i = deg(); i >= 0; i--) v = v * x + c[i];
  return v;
}

QPoly QPoly::monic() const {
  if (is_zero()) return *this;
  return *this * (Rational(1) / lead());
}

std::string QPoly::str(const std::string& var) const {
  if (is_zero()) return "0";
  std::ostringstream os;
  bool first = true;
  for (int i = deg(); i >= 0; i--) {
    if (c[i] == 0) continue;
    if (!first) os << " + ";
    os << "(" << c[i].get_str() << ")";
    if (i >= 1) os << "*" << var;
    if (i >= 2) os << "^" << i;
    first = false;
  }
  return os.str();
}

QPoly qpoly_gcd(QPoly a, QPoly b) {
  while (!b.is_zero()) {
    QPoly r = a.divmod(b).second;
    a = b;
    b = r;
  }
  return a.monic();
}

unsigned euler_phi(unsigned n) {
  unsigned r = n;
  for (unsigned p = 2; p * p <= n; p++)
    if (n % p == 0) {
      r -= r / p;
      while (n % p == 0) n /= p;
    }
  if (n > 1) r -= r / n;
  return r;
}

QPoly cyclotomic(unsigned n) {
  // x^n - 1 divided by the product of Phi_d over proper divisors d of n
  QPoly num;
  num.c.assign(n + 1, Rational(0));
  num.c[0] = -1;
  num.c[n] = 1;
  for (unsigned d = 1; d < n; d++)
    if (n % d == 0) {
      auto [q, r] = num.divmod(cyclotomic(d));
      if (!r.is_zero()) throw std::logic_error("cyclotomic division not exact");
      num = q;
    }
  return num;
}

// ---------------------------------------------------------------------------
// NumberField / NFElem

FieldPtr NumberField::rationals() {
  static FieldPtr q = std::make_shared<NumberField>(NumberField{QPoly::x(), "QQ"});
  return q;
}

FieldPtr NumberField::create(const QPoly& minpoly, const std::string& label) {
  if (minpoly.is_zero() || minpoly.lead() != 1)
    throw std::invalid_argument("minimal polynomial must be monic");
  if (minpoly.deg() >= 2 && minpoly.deg() <= 4) {
    // irreducibility check with the supported factorizer
    NFPoly p = NFPoly::from_qpoly(minpoly, rationals());
    auto f = factor_small(p);
    if (f.factors.size() != 1 || f.factors[0].multiplicity != 1 ||
        f.factors[0].poly.deg() != minpoly.deg())
      throw std::invalid_argument("minimal polynomial is reducible: " + minpoly.str());
  }
  return std::make_shared<NumberField>(NumberField{minpoly, label});
}

FieldPtr NumberField::quadratic(const Int& d) {
  if (d == 0 || d == 1) throw std::invalid_argument("quadratic field needs d != 0,1");
  QPoly m({Rational(-d), Rational(0), Rational(1)});
  return create(m, "QQ(sqrt(" + d.get_str() + "))");
}

FieldPtr NumberField::cyclo(unsigned n) {
  static std::mutex mu;
  static std::unordered_map<unsigned, FieldPtr> cache;
  std::lock_guard<std::mutex> lk(mu);
  auto it = cache.find(n);
  if (it != cache.end()) return it->second;
  FieldPtr f;
  if (n <= 2) {
    f = rationals();
  } else {
    f = std::make_shared<NumberField>(
        NumberField{cyclotomic(n), "QQ(zeta" + std::to_string(n) + ")"});
  }
  cache[n] = f;
  return f;
}

NFElem::NFElem(FieldPtr f, std::vector<Rational> cc) : F(std::move(f)), c(std::move(cc)) {
  if ((int)c.size() != F->degree())
    throw std::invalid_argument("coefficient vector length != field degree");
}

NFElem::NFElem(const Rational& r) : F(NumberField::rationals()), c{r} {}

NFElem NFElem::gen(const FieldPtr& f) {
  std::vector<Rational> c(f->degree(), Rational(0));
  if (f->degree() == 1) {
    // Q presented as Q[t]/(t): generator is 0
    return NFElem(f, c);
  }
  c[1] = 1;
  return NFElem(f, c);
}

bool NFElem::is_zero() const {
  for (auto& x : c)
    if (x != 0) return false;
  return true;
}

bool NFElem::is_rational_value() const {
  for (size_t i = 1; i < c.size(); i++)
    if (c[i] != 0) return false;
  return true;
}

Rational NFElem::rat() const {
  if (!is_rational_value()) throw std::invalid_argument("not a rational value: " + str());
  return c[0];
}

void align_fields(NFElem& a, NFElem& b) {
  if (a.F == b.F) return;
  if (a.F->is_rational() && !b.F->is_rational()) {
    std::vector<Rational> c(b.F->degree(), Rational(0));
    c[0] = a.c[0];
    a = NFElem(b.F, c);
    return;
  }
  if (b.F->is_rational() && !a.F->is_rational()) {
    std::vector<Rational> c(a.F->degree(), Rational(0));
    c[0] = b.c[0];
    b = NFElem(a.F, c);
    return;
  }
  if (a.F->minpoly == b.F->minpoly) {  // structurally equal field objects
    b = NFElem(a.F, b.c);
    return;
  }
  throw std::invalid_argument("field mismatch: " + a.F->label + " vs " + b.F->label);
}

NFElem NFElem::operator+(const NFElem& o) const {
  NFElem a = *this, b = o;
  align_fields(a, b);
  for (int i = 0; i < (int)a.c.size(); i++) a.c[i] += b.c[i];
  return a;
}

NFElem NFElem::operator-(const NFElem& o) const {
  NFElem a = *this, b = o;
  align_fields(a, b);
  for (int i = 0; i < (int)a.c.size(); i++) a.c[i] -= b.c[i];
  return a;
}

NFElem NFElem::operator-() const {
  NFElem a = *this;
  for (auto& x : a.c) x = -x;
  return a;
}

NFElem NFElem::operator*(const NFElem& o) const {
  NFElem a = *this, b = o;
  align_fields(a, b);
  int d = a.F->degree();
  if (d == 1) return NFElem(a.F, {a.c[0] * b.c[0]});
  // schoolbook product then reduction modulo the minimal polynomial
  std::vector<Rational> prod(2 * d - 1, Rational(0));
  for (int i = 0; i < d; i++) {
    if (a.c[i] == 0) continue;
    for (int j = 0; j < d; j++)
      if (b.c[j] != 0) prod[i + j] += a.c[i] * b.c[j];
  }
  const auto& m = a.F->minpoly.c;  // monic, degree d
  for (int k = 2 * d - 2; k >= d; k--) {
    if (prod[k] == 0) continue;
    Rational f = prod[k];
    prod[k] = 0;
    for (int i = 0; i < d; i++) prod[k - d + i] -= f * m[i];
  }
  prod.resize(d);
  return NFElem(a.F, std::move(prod));
}

NFElem NFElem::inv() const {
  if (is_zero()) throw std::domain_error("division by zero in number field");
  int d = F->degree();
  if (d == 1) return NFElem(F, {Rational(1) / c[0]});
  // extended Euclid in Q[t]: u * this + v * minpoly = 1
  QPoly a{std::vector<Rational>(c)};
  QPoly b = F->minpoly;
  QPoly r0 = b, r1 = a, s0 = QPoly(), s1 = QPoly::constant(1);
  while (r1.deg() > 0) {
    auto [q, r] = r0.divmod(r1);
    QPoly s = s0 - q * s1;
    r0 = r1;
    r1 = r;
    s0 = s1;
    s1 = s;
  }
  if (r1.is_zero()) throw std::domain_error("element not invertible (reducible modulus?)");
  QPoly u = s1 * (Rational(1) / r1.c[0]);
  std::vector<Rational> out(d, Rational(0));
  for (int i = 0; i <= u.deg() && i < d; i++) out[i] = u.c[i];
  return NFElem(F, std::move(out));
}

NFElem NFElem::operator/(const NFElem& o) const { return *this * o.inv(); }

bool NFElem::operator==(const NFElem& o) const {
  NFElem a = *this, b = o;
  try {
    align_fields(a, b);
  } catch (const std::invalid_argument&) {
    return false;
  }
  return a.c == b.c;
}

NFElem NFElem::pow(long e) const {
  if (e < 0) return inv().pow(-e);
  NFElem r(Rational(1)), base = *this;
  while (e) {
    if (e & 1) r = r * base;
    base = base * base;
    e >>= 1;
  }
  return r;
}

std::string NFElem::str() const {
  if (F->is_rational() || is_rational_value()) return c[0].get_str();
  std::ostringstream os;
  bool first = true;
  for (int i = 0; i < (int)c.size(); i++) {
    if (c[i] == 0) continue;
    if (!first) os << "+";
    os << "(" << c[i].get_str() << ")";
    if (i >= 1) os << "*g";
    if (i >= 2) os << "^" << i;
    first = false;
  }
  if (first) return "0";
  return os.str();
}

NFElem embed(const NFElem& x, const FieldPtr& G, const NFElem& gen_image) {
  NFElem v(Rational(0));
  std::vector<Rational> zero(G->degree(), Rational(0));
  v = NFElem(G, zero);
  NFElem p(Rational(1));
  for (int i = 0; i < (int)x.c.size(); i++) {
    if (x.c[i] != 0) v = v + p * NFElem(x.c[i]);
    if (i + 1 < (int)x.c.size()) p = p * gen_image;
  }
  return v;
}

std::optional<NFElem> nf_sqrt(const NFElem& x) {
  if (x.is_zero()) return NFElem(Rational(0));
  if (x.is_rational_value()) {
    Rational r = x.c[0];
    Int num_root, den_root;
    if (r > 0 && is_square(Int(r.get_num()), &num_root) && is_square(Int(r.get_den()), &den_root)) {
      Rational root(num_root, den_root);
      root.canonicalize();
      std::vector<Rational> c(x.F->degree(), Rational(0));
      c[0] = root;
      return NFElem(x.F, c);
    }
    if (x.F->degree() == 2 && x.F->minpoly.c[1] == 0) {
      // Q(sqrt(d)): maybe r = d * square
      Rational d = -x.F->minpoly.c[0];
      Rational q = r / d;
      if (q > 0 && is_square(Int(q.get_num()), &num_root) && is_square(Int(q.get_den()), &den_root)) {
        Rational root(num_root, den_root);
        root.canonicalize();
        return NFElem(x.F, {Rational(0), root});
      }
    }
    return std::nullopt;
  }
  if (x.F->degree() == 2 && x.F->minpoly.c[1] == 0) {
    // solve (a + b g)^2 = x0 + x1 g with g^2 = d:
    // a^2 + d b^2 = x0, 2ab = x1  =>  a^2 is a root of  t^2 - x0 t + d (x1/2)^2
    Rational d = -x.F->minpoly.c[0];
    Rational x0 = x.c[0], x1 = x.c[1];
    Rational C = d * (x1 / 2) * (x1 / 2);
    Rational disc = x0 * x0 - 4 * C;
    Int rt, num_root, den_root;
    if (disc < 0) return std::nullopt;
    Rational ds;
    {
      Int n2, d2;
      if (!is_square(Int(disc.get_num()), &n2) || !is_square(Int(disc.get_den()), &d2))
        return std::nullopt;
      ds = Rational(n2, d2);
      ds.canonicalize();
    }
    for (Rational a2 : {Rational((x0 + ds) / 2), Rational((x0 - ds) / 2)}) {
      if (a2 < 0) continue;
      Int n2, d2;
      if (is_square(Int(a2.get_num()), &n2) && is_square(Int(a2.get_den()), &d2)) {
        Rational a(n2, d2);
        a.canonicalize();
        if (a == 0) continue;
        Rational b = x1 / (2 * a);
        NFElem cand(x.F, {a, b});
        if (cand * cand == x) return cand;
      }
    }
    return std::nullopt;
  }
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// NFPoly

NFPoly NFPoly::from_qpoly(const QPoly& p, const FieldPtr& f) {
  NFPoly r(f);
  for (auto& x : p.c) {
    NFElem e{x};
    if (!f->is_rational()) {
      std::vector<Rational> c(f->degree(), Rational(0));
      c[0] = x;
      e = NFElem(f, c);
    }
    r.c.push_back(e);
  }
  r.trim();
  return r;
}

void NFPoly::trim() {
  while (!c.empty() && c.back().is_zero()) c.pop_back();
}

NFElem NFPoly::coeff(int i) const {
  if (i < 0 || i >= (int)c.size()) return NFElem(Rational(0));
  return c[i];
}

NFElem NFPoly::lead() const {
  if (c.empty()) throw std::invalid_argument("lead of zero polynomial");
  return c.back();
}

NFPoly NFPoly::operator+(const NFPoly& o) const {
  NFPoly r(F);
  r.c.resize(std::max(c.size(), o.c.size()), NFElem(Rational(0)));
  for (size_t i = 0; i < c.size(); i++) r.c[i] = r.c[i] + c[i];
  for (size_t i = 0; i < o.c.size(); i++) r.c[i] = r.c[i] + o.c[i];
  r.trim();
  return r;
}

NFPoly NFPoly::operator-(const NFPoly& o) const {
  NFPoly r(F);
  r.c.resize(std::max(c.size(), o.c.size()), NFElem(Rational(0)));
  for (size_t i = 0; i < c.size(); i++) r.c[i] = r.c[i] + c[i];
  for (size_t i = 0; i < o.c.size(); i++) r.c[i] = r.c[i] - o.c[i];
  r.trim();
  return r;
}

NFPoly NFPoly::operator*(const NFPoly& o) const {
  if (c.empty() || o.c.empty()) return NFPoly(F);
  NFPoly r(F);
  r.c.assign(c.size() + o.c.size() - 1, NFElem(Rational(0)));
  for (size_t i = 0; i < c.size(); i++) {
    if (c[i].is_zero()) continue;
    for (size_t j = 0; j < o.c.size(); j++)
      if (!o.c[j].is_zero()) r.c[i + j] = r.c[i + j] + c[i] * o.c[j];
  }
  r.trim();
  return r;
}

NFPoly NFPoly::operator*(const NFElem& s) const {
  NFPoly r = *this;
  for (auto& x : r.c) x = x * s;
  r.trim();
  return r;
}

std::pair<NFPoly, NFPoly> NFPoly::divmod(const NFPoly& d) const {
  if (d.is_zero()) throw std::invalid_argument("division by zero polynomial");
  NFPoly q(F), r = *this;
  q.c.assign(std::max<int>(0, deg() - d.deg() + 1), NFElem(Rational(0)));
  NFElem dl = d.lead().inv();
  while (!r.is_zero() && r.deg() >= d.deg()) {
    NFElem f = r.lead() * dl;
    int shift = r.deg() - d.deg();
    q.c[shift] = f;
    for (int i = 0; i <= d.deg(); i++) r.c[i + shift] = r.c[i + shift] - f * d.c[i];
    r.trim();
  }
  q.trim();
  return {q, r};
}

NFPoly NFPoly::derivative() const {
  NFPoly r(F);
  for (int i = 1; i <= deg(); i++) r.c.push_back(c[i] * NFElem(Rational(i)));
  r.trim();
  return r;
}

NFElem NFPoly::eval(const NFElem& x) const {
  NFElem v(Rational(0));
  for (int i = deg(); i >= 0; i--) v = v * x + c[i];
  return v;
}

NFPoly NFPoly::monic() const {
  if (is_zero()) return *this;
  return *this * lead().inv();
}

std::string NFPoly::str(const std::string& var) const {
  if (is_zero()) return "0";
  std::ostringstream os;
  bool first = true;
  for (int i = deg(); i >= 0; i--) {
    if (c[i].is_zero()) continue;
    if (!first) os << " + ";
    os << "(" << c[i].str() << ")";
    if (i >= 1) os << "*" << var;
    if (i >= 2) os << "^" << i;
    first = false;
  }
  return os.str();
}

NFPoly nfpoly_gcd(NFPoly a, NFPoly b) {
  while (!b.is_zero()) {
    NFPoly r = a.divmod(b).second;
    a = b;
    b = r;
  }
  if (a.is_zero()) return a;
  return a.monic();
}

// ---------------------------------------------------------------------------
// factor_small

namespace {

// all divisors of |n| (positive), from the prime factorization
std::vector<Int> divisors(const Int& n) {
  auto fac = factor_int(n);
  std::vector<Int> divs{Int(1)};
  for (auto& [p, e] : fac) {
    size_t old = divs.size();
    Int pk = 1;
    for (unsigned k = 1; k <= e; k++) {
      pk *= p;
      for (size_t i = 0; i < old; i++) divs.push_back(divs[i] * pk);
    }
  }
  return divs;
}

// rational roots of a polynomial with rational coefficients
std::vector<Rational> rational_roots(const NFPoly& f) {
  // clear denominators -> integer polynomial
  Int den = 1;
  for (auto& e : f.c) {
    if (!e.is_rational_value()) return {};
    Int d = e.c[0].get_den();
    den = den * d / Int(gcd(den, d));
  }
  std::vector<Int> ic;
  for (auto& e : f.c) {
    Rational v = e.c[0] * Rational(den);
    ic.push_back(Int(v.get_num()));
  }
  while (!ic.empty() && ic.back() == 0) ic.pop_back();
  if (ic.size() <= 1) return {};
  // strip trailing zero constant coefficients: root 0
  std::vector<Rational> roots;
  size_t low = 0;
  while (low < ic.size() && ic[low] == 0) low++;
  if (low > 0) roots.push_back(Rational(0));
  if (low + 1 >= ic.size()) return roots;
  Int a0 = ic[low], ad = ic.back();
  auto p_divs = divisors(a0), q_divs = divisors(ad);
  // limit explosion on huge coefficients
  if (p_divs.size() * q_divs.size() > 2000000) return roots;
  for (auto& p : p_divs)
    for (auto& q : q_divs) {
      Rational cand(p, q);
      cand.canonicalize();
      for (int s = 0; s < 2; s++) {
        Rational r = s ? -cand : cand;
        Rational v(0);
        for (int i = (int)ic.size() - 1; i >= (int)low; i--) v = v * r + Rational(ic[i]);
        if (v == 0) roots.push_back(r);
      }
    }
  std::sort(roots.begin(), roots.end(), [](const Rational& a, const Rational& b) {
    return cmp(a, b) < 0;
  });
  roots.erase(std::unique(roots.begin(), roots.end()), roots.end());
  return roots;
}

// roots of f inside its own (rational or quadratic) field
std::vector<NFElem> field_roots(const NFPoly& f) {
  std::vector<NFElem> roots;
  if (f.deg() == 1) {
    roots.push_back(-(f.c[0] / f.c[1]));
    return roots;
  }
  if (f.deg() == 2) {
    // quadratic formula; exact square root inside the field when it exists
    NFElem a = f.c[2], b = f.c[1], c0 = f.c[0];
    NFElem disc = b * b - NFElem(Rational(4)) * a * c0;
    auto s = nf_sqrt(disc);
    if (s) {
      NFElem inv2a = (NFElem(Rational(2)) * a).inv();
      roots.push_back((-b + *s) * inv2a);
      roots.push_back((-b - *s) * inv2a);
      if (roots[0] == roots[1]) roots.pop_back();
    }
    return roots;
  }
  bool rat_coeffs = true;
  for (auto& e : f.c)
    if (!e.is_rational_value()) rat_coeffs = false;
  if (rat_coeffs) {
    for (auto& r : rational_roots(f)) {
      NFElem e{r};
      if (!f.F->is_rational()) {
        std::vector<Rational> c(f.F->degree(), Rational(0));
        c[0] = r;
        e = NFElem(f.F, c);
      }
      roots.push_back(e);
    }
  }
  return roots;
}

// try to split a monic rational quartic into two rational monic quadratics
// via the resolvent cubic
std::optional<std::pair<NFPoly, NFPoly>> quartic_split(const NFPoly& f) {
  if (f.deg() != 4) return std::nullopt;
  for (auto& e : f.c)
    if (!e.is_rational_value()) return std::nullopt;
  Rational p = f.c[3].rat(), q = f.c[2].rat(), r = f.c[1].rat(), s = f.c[0].rat();
  // (x^2+ax+b)(x^2+cx+d), a+c=p, b+d+ac=q, ad+bc=r, bd=s.
  // u = a c satisfies the resolvent relation; search rational roots of
  // the cubic in v = b + d:  standard resolvent of the depressed quartic.
  // Work directly: for rational root candidates v of
  //   v^3 - q v^2 + (pr - 4s) v - (p^2 s - 4 q s + r^2) = 0
  NFPoly res(NumberField::rationals(),
             {NFElem(-(p * p * s - 4 * q * s + r * r)), NFElem(p * r - 4 * s), NFElem(-q),
              NFElem(Rational(1))});
  for (auto& v : rational_roots(res)) {
    // b + d = v, then a c = q - v, a + c = p, and a d + b c = r.
    // a, c are roots of  t^2 - p t + (q - v) : need rational sqrt of p^2-4(q-v)
    Rational disc = p * p - 4 * (q - v);
    Int n2, d2;
    if (disc < 0) continue;
    if (!is_square(Int(disc.get_num()), &n2) || !is_square(Int(disc.get_den()), &d2)) continue;
    Rational sq(n2, d2);
    sq.canonicalize();
    Rational a = (p + sq) / 2, cc = (p - sq) / 2;
    // b+d=v, ad+bc=r: if a != c solve; else need b=d=v/2
    Rational b, d;
    if (a != cc) {
      // d a + b cc = r and b + d = v
      d = Rational((r - v * cc) / (a - cc));
      b = Rational(v - d);
    } else {
      // b, d are the roots of t^2 - v t + s
      Rational disc2 = v * v - 4 * s;
      Int n3, d3;
      if (disc2 < 0) continue;
      if (!is_square(Int(disc2.get_num()), &n3) || !is_square(Int(disc2.get_den()), &d3)) continue;
      Rational sq2(n3, d3);
      sq2.canonicalize();
      b = Rational((v + sq2) / 2);
      d = Rational((v - sq2) / 2);
      if (a * d + b * cc != r) std::swap(b, d);
      if (a * d + b * cc != r) continue;
    }
    if (b * d != s) continue;
    NFPoly f1(f.F, {NFElem(b), NFElem(a), NFElem(Rational(1))});
    NFPoly f2(f.F, {NFElem(d), NFElem(cc), NFElem(Rational(1))});
    if ((f1 * f2 - f.monic()).is_zero()) return std::make_pair(f1, f2);
  }
  return std::nullopt;
}

}  // namespace

Factorization factor_small(const NFPoly& f0) {
  if (f0.is_zero()) throw std::invalid_argument("factor_small(0)");
  Factorization out;
  out.unit = f0.lead();
  NFPoly f = f0.monic();

  // squarefree (multiplicity) decomposition, Yun's algorithm (char 0)
  std::vector<std::pair<NFPoly, unsigned>> sqf;
  {
    NFPoly g = nfpoly_gcd(f, f.derivative());
    NFPoly w = f.divmod(g).first;  // product of the distinct prime factors
    unsigned i = 1;
    while (w.deg() > 0) {
      NFPoly y = nfpoly_gcd(w, g);
      NFPoly z = w.divmod(y).first;  // primes of multiplicity exactly i
      if (z.deg() > 0) sqf.push_back({z.monic(), i});
      w = y;
      g = g.divmod(y).first;
      i++;
    }
  }

  for (auto& [part, mult] : sqf) {
    NFPoly rem = part;
    // linear factors
    bool progress = true;
    while (progress && rem.deg() >= 1) {
      progress = false;
      for (auto& r : field_roots(rem)) {
        NFPoly lin(rem.F, {-r, NFElem(Rational(1))});
        auto [q, rr] = rem.divmod(lin);
        if (rr.is_zero()) {
          out.factors.push_back({lin, mult, true});
          rem = q;
          progress = true;
          break;
        }
      }
      if (!progress && rem.deg() == 4) {
        auto sp = quartic_split(rem);
        if (sp) {
          for (auto& quad : {sp->first, sp->second}) {
            auto roots = field_roots(quad);
            if (roots.size() == 2) {
              out.factors.push_back({NFPoly(rem.F, {-roots[0], NFElem(Rational(1))}), mult, true});
              out.factors.push_back({NFPoly(rem.F, {-roots[1], NFElem(Rational(1))}), mult, true});
            } else {
              out.factors.push_back({quad, mult, true});
            }
          }
          rem = NFPoly(rem.F, {NFElem(Rational(1))});
          break;
        }
      }
    }
    if (rem.deg() == 2) {
      auto roots = field_roots(rem);
      if (roots.size() == 2) {
        out.factors.push_back({NFPoly(rem.F, {-roots[0], NFElem(Rational(1))}), mult, true});
        out.factors.push_back({NFPoly(rem.F, {-roots[1], NFElem(Rational(1))}), mult, true});
      } else if (roots.size() == 1) {
        NFPoly lin(rem.F, {-roots[0], NFElem(Rational(1))});
        out.factors.push_back({lin, mult, true});
        out.factors.push_back({rem.divmod(lin).first.monic(), mult, true});
      } else {
        out.factors.push_back({rem, mult, true});  // irreducible quadratic
      }
    } else if (rem.deg() >= 3) {
      // degree 3 with no root in the field is irreducible over it; degree >= 4
      // residuals we do not attempt further
      bool known_irreducible = (rem.deg() == 3);
      out.factors.push_back({rem, mult, known_irreducible});
    } else if (rem.deg() == 1) {
      out.factors.push_back({rem, mult, true});
    }
  }
  return out;
}

std::vector<NFElem> nf_roots(const NFPoly& f) {
  std::vector<NFElem> roots;
  for (auto& fac : factor_small(f).factors)
    if (fac.poly.deg() == 1) roots.push_back(-(fac.poly.c[0] / fac.poly.c[1]));
  return roots;
}

// ---------------------------------------------------------------------------
// prime fields

PrimeField::PrimeField(uint64_t p_) : p(p_) {
  if (p < 5) throw std::invalid_argument("prime field needs p >= 5");
  Int n(std::to_string(p));
  if (!miller_rabin(n)) throw std::invalid_argument("modulus is not prime");
  chi.assign(p, 0);
  // mark squares
  for (uint64_t a = 1; a < p; a++) chi[a] = -1;
  for (uint64_t a = 1; a <= p / 2; a++) chi[(unsigned __int128)a * a % p] = 1;
}

uint64_t PrimeField::powmod(uint64_t a, uint64_t e) const {
  uint64_t r = 1;
  a %= p;
  while (e) {
    if (e & 1) r = mul(r, a);
    a = mul(a, a);
    e >>= 1;
  }
  return r;
}

uint64_t PrimeField::reduce(const Rational& r) const {
  Int num = r.get_num(), den = r.get_den();
  Int pz(std::to_string(p));
  if (den % pz == 0) throw std::domain_error("p divides a denominator");
  Int n = num % pz;
  if (n < 0) n += pz;
  uint64_t nv = mpz_get_ui(n.get_mpz_t());
  Int d = den % pz;
  uint64_t dv = mpz_get_ui(d.get_mpz_t());
  return mul(nv, inv(dv));
}

QuadExtField::QuadExtField(uint64_t p_) : base(p_), n(0) {
  for (uint64_t a = 2; a < p_; a++)
    if (base.chi[a] == -1) {
      n = a;
      break;
    }
  if (n == 0) throw std::logic_error("no non-residue found");
}

QuadExtField::Elem QuadExtField::mul(Elem x, Elem y) const {
  // (a + b s)(c + d s) = (ac + n bd) + (ad + bc) s
  uint64_t ac = base.mul(x.first, y.first);
  uint64_t bd = base.mul(x.second, y.second);
  uint64_t ad = base.mul(x.first, y.second);
  uint64_t bc = base.mul(x.second, y.first);
  return {base.add(ac, base.mul(n, bd)), base.add(ad, bc)};
}

uint64_t QuadExtField::norm(Elem x) const {
  uint64_t a2 = base.mul(x.first, x.first);
  uint64_t nb2 = base.mul(n, base.mul(x.second, x.second));
  return base.sub(a2, nb2);
}

}  // namespace refk3
