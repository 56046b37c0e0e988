#pragma once

#include <deque>
#include <mutex>
#include <utility>

#include "vsw/expr.hpp"

namespace vsw::detail {

enum class AtomKind : std::uint8_t { Coord, Const, Func, Surd, Exp, Log, Tanh, Abs, Rad };

struct Atom {
  AtomKind kind;
  int coord = -1;
  std::string name;
  std::uint8_t argmask = 0;
  std::array<std::uint8_t, 4> derivs{0, 0, 0, 0};
  long prime = 0;
  std::optional<Expr> arg;  // special forms; Rad holds a primitive polynomial base
  std::uint64_t serial = 0;

  mutable std::array<std::optional<Expr>, 4> dcache;
};

int atom_cmp(const Atom* a, const Atom* b);

using Factor = std::pair<const Atom*, Q>;
using Mono = std::vector<Factor>;

struct Term {
  Mono m;
  mpq_class c;
};

// Sum of terms, sorted by descending monomial order, no zero coefficients.
using Poly = std::vector<Term>;

struct RatFn {
  Poly num;
  std::vector<std::pair<Poly, int>> den;  // primitive non-monomial factors with multiplicity
};

// Atom interning.
const Atom* intern_coord(int c);
const Atom* intern_const(const std::string& name);
const Atom* intern_func(const std::string& name, std::uint8_t argmask, std::array<std::uint8_t, 4> derivs);
const Atom* intern_surd(long p);
const Atom* intern_special(AtomKind k, const Expr& arg);

std::mutex& kernel_mutex();

// Monomials.
int mono_cmp(const Mono& a, const Mono& b);
// Product; may change the coefficient (surds) and merge exponentials.
Mono mono_mul(const Mono& a, const Mono& b, mpq_class& coef);
Mono mono_pow(const Mono& a, Q e, mpq_class& coef);
bool mono_divides(const Mono& d, const Mono& m);
Mono mono_div(const Mono& a, const Mono& b);
Mono mono_min(const Mono& a, const Mono& b);

// Polynomials.
int poly_cmp(const Poly& a, const Poly& b);
Poly poly_add(const Poly& a, const Poly& b);
Poly poly_sub(const Poly& a, const Poly& b);
Poly poly_neg(const Poly& a);
Poly poly_mul(const Poly& a, const Poly& b);
Poly poly_scale(const Poly& a, const mpq_class& c, const Mono& m);
Poly poly_pow(const Poly& a, int k);
Poly poly_const(const mpq_class& c);
Poly poly_atom(const Atom* a, Q e = Q(1));
void poly_sort(Poly& p);
std::optional<Poly> poly_div_exact(const Poly& n, const Poly& d);
std::optional<Poly> poly_root(const Poly& p, int k);
// p = root^k with the largest k <= 8 that works (k = 1 when p is no perfect power).
std::pair<Poly, int> poly_perfect_power(const Poly& p);
// Split p = coef * mono * primitive, primitive has integer coprime coefficients,
// positive leading coefficient and monomial gcd 1.
void poly_content(const Poly& p, mpq_class& coef, Mono& mono, Poly& prim);

// Rational functions.
RatFn rf_from_poly(Poly p);
RatFn rf_normalize(RatFn r);
Expr make(RatFn r);
Expr make(Poly p);

// Atom-level derivative.
Expr atom_diff(const Atom* a, int c);
Expr atom_expr(const Atom* a, Q e = Q(1));

std::string render_atom(const Atom* a);
std::string render_poly(const Poly& p);

}  // namespace vsw::detail
