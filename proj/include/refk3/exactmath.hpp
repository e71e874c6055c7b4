// Exact arithmetic foundation: rationals, univariate polynomials over Q,
// number fields presented by an absolute minimal polynomial, prime fields
// with quadratic-character tables, and F_{p^2}.
#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <gmpxx.h>

namespace refk3 {

using Int = mpz_class;
using Rational = mpq_class;

// Parse an exact rational from "p/q" or "p" form; throws on floats/garbage.
Rational parse_rational(const std::string& s);
std::string rational_str(const Rational& r);

// Squarefree part of a nonzero rational, as an integer class representative
// modulo squares (sign preserved).  Uses trial division + Pollard rho.
Int squarefree_part(const Rational& r);
std::vector<std::pair<Int, unsigned>> factor_int(Int n);
bool is_square(const Int& n, Int* root = nullptr);

// ---------------------------------------------------------------------------
// Univariate polynomials over Q, coefficients low -> high.
struct QPoly {
  std::vector<Rational> c;

  QPoly() = default;
  explicit QPoly(std::vector<Rational> cc) : c(std::move(cc)) { trim(); }
  static QPoly constant(const Rational& r);
  static QPoly x();  // the monomial t

  void trim();
  int deg() const { return (int)c.size() - 1; }  // deg(0) = -1
  bool is_zero() const { return c.empty(); }
  Rational coeff(int i) const { return i >= 0 && i < (int)c.size() ? c[i] : Rational(0); }
  Rational lead() const;

  QPoly operator+(const QPoly& o) const;
  QPoly operator-(const QPoly& o) const;
  QPoly operator*(const QPoly& o) const;
  QPoly operator*(const Rational& r) const;
  bool operator==(const QPoly& o) const { return c == o.c; }

  // Euclidean division (coefficients in Q); returns {quotient, remainder}.
  std::pair<QPoly, QPoly> divmod(const QPoly& d) const;
  QPoly derivative() const;
  Rational eval(const Rational& x) const;
  QPoly monic() const;
  std::string str(const std::string& var = "t") const;
};

QPoly qpoly_gcd(QPoly a, QPoly b);          // monic gcd
QPoly cyclotomic(unsigned n);               // Phi_n
unsigned euler_phi(unsigned n);

// ---------------------------------------------------------------------------
// Number fields Q[t]/(m(t)), m monic irreducible.
struct NumberField;
using FieldPtr = std::shared_ptr<const NumberField>;

struct NumberField {
  QPoly minpoly;      // monic, degree >= 1; degree 1 with root 0 models Q
  std::string label;  // e.g. "QQ", "QQ(i)", "QQ(sqrt(5))", "QQ(zeta8)"

  int degree() const { return minpoly.deg(); }
  bool is_rational() const { return degree() == 1; }

  static FieldPtr rationals();
  // Checks irreducibility via the supported factorizer for degree <= 4.
  static FieldPtr create(const QPoly& minpoly, const std::string& label);
  static FieldPtr quadratic(const Int& d);      // Q(sqrt(d)), d squarefree != 0,1
  static FieldPtr cyclo(unsigned n);            // Q(zeta_n), minimal poly Phi_n
};

// An element of a number field: coefficient vector of length field->degree().
struct NFElem {
  FieldPtr F;
  std::vector<Rational> c;

  NFElem() : F(NumberField::rationals()), c{Rational(0)} {}
  NFElem(FieldPtr f, std::vector<Rational> cc);
  /*implicit*/ NFElem(const Rational& r);
  /*implicit*/ NFElem(long v) : NFElem(Rational(v)) {}
  static NFElem gen(const FieldPtr& f);  // the class of t

  bool is_zero() const;
  bool is_rational_value() const;  // all coeffs above constant vanish
  Rational rat() const;            // value as rational (requires is_rational_value)

  NFElem operator+(const NFElem& o) const;
  NFElem operator-(const NFElem& o) const;
  NFElem operator-() const;
  NFElem operator*(const NFElem& o) const;
  NFElem inv() const;
  NFElem operator/(const NFElem& o) const;
  bool operator==(const NFElem& o) const;
  bool operator!=(const NFElem& o) const { return !(*this == o); }
  NFElem pow(long e) const;

  std::string str() const;  // canonical text, e.g. "(1/2)+(-1/2)*g"
};

// Lift x (element of a field whose generator maps to gen_image in G) into G.
NFElem embed(const NFElem& x, const FieldPtr& G, const NFElem& gen_image);

// Coerce to a common field; throws on genuine mismatch (rationals promote).
void align_fields(NFElem& a, NFElem& b);

// Square root inside the field, when it exists (rational and quadratic
// fields supported; others return nullopt unless the element is a rational
// square).
std::optional<NFElem> nf_sqrt(const NFElem& x);

// ---------------------------------------------------------------------------
// Univariate polynomials with number-field coefficients (used by the
// factorizer and the singular-point solver).
struct NFPoly {
  FieldPtr F;
  std::vector<NFElem> c;  // low -> high

  explicit NFPoly(FieldPtr f = NumberField::rationals()) : F(std::move(f)) {}
  NFPoly(FieldPtr f, std::vector<NFElem> cc) : F(std::move(f)), c(std::move(cc)) { trim(); }
  static NFPoly from_qpoly(const QPoly& p, const FieldPtr& f);

  void trim();
  int deg() const { return (int)c.size() - 1; }
  bool is_zero() const { return c.empty(); }
  NFElem coeff(int i) const;
  NFElem lead() const;

  NFPoly operator+(const NFPoly& o) const;
  NFPoly operator-(const NFPoly& o) const;
  NFPoly operator*(const NFPoly& o) const;
  NFPoly operator*(const NFElem& s) const;
  std::pair<NFPoly, NFPoly> divmod(const NFPoly& d) const;
  NFPoly derivative() const;
  NFElem eval(const NFElem& x) const;
  NFPoly monic() const;
  std::string str(const std::string& var = "t") const;
};

NFPoly nfpoly_gcd(NFPoly a, NFPoly b);

// One factor of a (partial) factorization.
struct Factor {
  NFPoly poly;
  unsigned multiplicity = 1;
  bool resolved = true;  // false: residual factor of degree >= 3 we do not split
};

struct Factorization {
  NFElem unit;  // overall scalar so that unit * prod(factors^mult) = input
  std::vector<Factor> factors;
};

// Complete splitting into factors of degree <= 2 over the element's field
// (rational or quadratic); residual factors are returned marked unresolved.
// Linear factors are found by rational-root search (integer factorization of
// the extreme coefficients); quartics additionally try a rational quadratic
// split via the resolvent cubic.
Factorization factor_small(const NFPoly& f);

// Roots of f lying in field F itself (derived from factor_small).
std::vector<NFElem> nf_roots(const NFPoly& f);

// ---------------------------------------------------------------------------
// Prime fields and their quadratic extensions (machine-word sized).
struct PrimeField {
  uint64_t p;
  std::vector<int8_t> chi;  // chi[a] = Legendre symbol (a|p); chi[0] = 0

  explicit PrimeField(uint64_t p);
  uint64_t add(uint64_t a, uint64_t b) const { uint64_t s = a + b; return s >= p ? s - p : s; }
  uint64_t sub(uint64_t a, uint64_t b) const { return a >= b ? a - b : a + p - b; }
  uint64_t mul(uint64_t a, uint64_t b) const { return (unsigned __int128)a * b % p; }
  uint64_t powmod(uint64_t a, uint64_t e) const;
  uint64_t inv(uint64_t a) const { return powmod(a % p, p - 2); }
  uint64_t reduce(const Rational& r) const;  // throws if p | denominator
  int8_t quad_char(uint64_t a) const { return chi[a % p]; }
};

// F_{p^2} = F_p[s]/(s^2 - n), n the smallest positive non-residue mod p.
struct QuadExtField {
  PrimeField base;
  uint64_t n;  // non-residue

  explicit QuadExtField(uint64_t p);
  // elements are pairs (a, b) = a + b s
  using Elem = std::pair<uint64_t, uint64_t>;
  Elem add(Elem x, Elem y) const { return {base.add(x.first, y.first), base.add(x.second, y.second)}; }
  Elem mul(Elem x, Elem y) const;
  uint64_t norm(Elem x) const;  // a^2 - n b^2  (norm to F_p)
  // quadratic character of F_{p^2} = Legendre(Norm) since norm is onto F_p^*
  int8_t quad_char(Elem x) const { return base.quad_char(norm(x)); }
};

}  // namespace refk3
