#include <algorithm>

#include "kernel.hpp"

namespace vsw {

using namespace detail;

namespace {

const std::shared_ptr<const RatFn>& zero_rf() {
  static const auto z = std::make_shared<const RatFn>();
  return z;
}

int den_cmp(const std::vector<std::pair<Poly, int>>& a, const std::vector<std::pair<Poly, int>>& b) {
  std::size_t n = std::min(a.size(), b.size());
  for (std::size_t i = 0; i < n; ++i) {
    int c = poly_cmp(a[i].first, b[i].first);
    if (c) return c;
    if (a[i].second != b[i].second) return a[i].second < b[i].second ? -1 : 1;
  }
  if (a.size() != b.size()) return a.size() < b.size() ? -1 : 1;
  return 0;
}

void sort_den(std::vector<std::pair<Poly, int>>& d) {
  std::sort(d.begin(), d.end(), [](const auto& a, const auto& b) { return poly_cmp(a.first, b.first) < 0; });
  std::vector<std::pair<Poly, int>> out;
  for (auto& f : d) {
    if (!out.empty() && poly_cmp(out.back().first, f.first) == 0)
      out.back().second += f.second;
    else
      out.push_back(std::move(f));
  }
  out.erase(std::remove_if(out.begin(), out.end(), [](const auto& f) { return f.second == 0; }), out.end());
  d = std::move(out);
}

bool mono_has_bad_rad(const Mono& m, const Atom** which) {
  for (auto& f : m)
    if (f.first->kind == AtomKind::Rad && (f.second < Q(0) || !(f.second < Q(1)))) {
      *which = f.first;
      return true;
    }
  return false;
}

// Rewrite radical atoms so their exponents lie in [0,1).
void normalize_rads(RatFn& r) {
  for (int guard = 0; guard < 64; ++guard) {
    const Atom* a = nullptr;
    for (auto& t : r.num)
      if (mono_has_bad_rad(t.m, &a)) break;
    if (!a) return;
    const Poly& base = a->arg->raw().num;
    std::vector<std::int64_t> ks(r.num.size(), 0);
    std::int64_t kmin = 0;
    for (std::size_t i = 0; i < r.num.size(); ++i)
      for (auto& f : r.num[i].m)
        if (f.first == a) {
          ks[i] = f.second.floor();
          kmin = std::min(kmin, ks[i]);
        }
    Poly acc;
    for (std::size_t i = 0; i < r.num.size(); ++i) {
      Term t = r.num[i];
      for (auto& f : t.m)
        if (f.first == a) f.second = f.second - Q(ks[i]);
      t.m.erase(std::remove_if(t.m.begin(), t.m.end(), [](const Factor& f) { return f.second.is_zero(); }), t.m.end());
      Poly piece{t};
      std::int64_t k = ks[i] - kmin;
      if (k > 0) piece = poly_mul(piece, poly_pow(base, static_cast<int>(k)));
      acc = poly_add(acc, piece);
    }
    r.num = std::move(acc);
    if (kmin < 0) {
      if (base[0].c < 0) {
        r.den.push_back({poly_neg(base), static_cast<int>(-kmin)});
        if (kmin % 2) r.num = poly_neg(r.num);
      } else {
        r.den.push_back({base, static_cast<int>(-kmin)});
      }
    }
  }
}

// Split denominator factors that divide one another so the factor base stays coprime
// as far as exact division can tell.
void refine_den(RatFn& r) {
  for (bool changed = true; changed;) {
    changed = false;
    for (std::size_t i = 0; i < r.den.size() && !changed; ++i)
      for (std::size_t j = 0; j < r.den.size() && !changed; ++j) {
        if (i == j || r.den[i].first.size() <= r.den[j].first.size()) continue;
        auto q = poly_div_exact(r.den[i].first, r.den[j].first);
        if (!q) continue;
        int k = r.den[i].second;
        mpq_class coef;
        Mono mono;
        Poly prim;
        poly_content(*q, coef, mono, prim);
        mpq_class c = 1;
        Mono minv = mono_pow(mono, Q(-k), c);
        mpq_class ck = 1;
        for (int t = 0; t < k; ++t) ck *= coef;
        r.num = poly_scale(r.num, c / ck, minv);
        r.den[j].second += k;
        r.den.erase(r.den.begin() + static_cast<std::ptrdiff_t>(i));
        if (!(prim.size() == 1 && prim[0].m.empty())) r.den.push_back({prim, k});
        sort_den(r.den);
        changed = true;
      }
  }
}

}  // namespace

namespace detail {

RatFn rf_from_poly(Poly p) {
  RatFn r;
  r.num = std::move(p);
  return r;
}

RatFn rf_normalize(RatFn r) {
  if (r.num.empty()) return RatFn{};
  normalize_rads(r);
  if (r.num.empty()) return RatFn{};
  if (r.den.empty()) return r;
  sort_den(r.den);
  refine_den(r);
  for (auto& f : r.den) {
    while (f.second > 0) {
      auto q = poly_div_exact(r.num, f.first);
      if (!q) break;
      r.num = std::move(*q);
      --f.second;
    }
  }
  r.den.erase(std::remove_if(r.den.begin(), r.den.end(), [](const auto& f) { return f.second == 0; }), r.den.end());
  return r;
}

Expr make(RatFn r) {
  if (r.num.empty()) return Expr();
  return Expr(std::make_shared<const RatFn>(std::move(r)));
}

Expr make(Poly p) { return make(rf_normalize(rf_from_poly(std::move(p)))); }

}  // namespace detail

Expr::Expr() : p_(zero_rf()) {}

Expr::Expr(long n) {
  if (n == 0)
    p_ = zero_rf();
  else
    p_ = std::make_shared<const RatFn>(rf_from_poly(poly_const(mpq_class(n))));
}

Expr::Expr(const mpq_class& q) {
  if (q == 0)
    p_ = zero_rf();
  else
    p_ = std::make_shared<const RatFn>(rf_from_poly(poly_const(q)));
}

Expr Expr::rational(long p, long q) {
  mpq_class r(p, q);
  r.canonicalize();
  return Expr(r);
}

Expr Expr::coordinate(int c) { return make(poly_atom(intern_coord(c))); }

Expr Expr::constant(const std::string& name) { return make(poly_atom(intern_const(name))); }

Expr Expr::function(const FunctionSymbol& f, std::array<std::uint8_t, 4> derivs) {
  for (int c = 0; c < 4; ++c)
    if (derivs[c] && !(f.argmask & (1u << c))) return Expr();
  return make(poly_atom(intern_func(f.name, f.argmask, derivs)));
}

Expr Expr::function(const std::string& name, std::initializer_list<int> args) {
  FunctionSymbol f{name, 0};
  for (int c : args) f.argmask |= static_cast<std::uint8_t>(1u << c);
  return function(f);
}

bool Expr::is_zero() const { return p_->num.empty(); }

bool Expr::is_rational() const {
  return p_->num.empty() || (p_->den.empty() && p_->num.size() == 1 && p_->num[0].m.empty());
}

std::optional<mpq_class> Expr::as_rational() const {
  if (p_->num.empty()) return mpq_class(0);
  if (!is_rational()) return std::nullopt;
  return p_->num[0].c;
}

bool Expr::is_polynomial() const { return p_->den.empty(); }

bool Expr::is_monomial() const { return p_->den.empty() && p_->num.size() <= 1; }

std::size_t Expr::term_count() const {
  std::size_t n = p_->num.size();
  for (auto& f : p_->den) n += f.first.size();
  return n;
}

static bool atom_depends(const Atom* a, int c);

static bool poly_depends(const Poly& p, int c) {
  for (auto& t : p)
    for (auto& f : t.m)
      if (atom_depends(f.first, c)) return true;
  return false;
}

static bool atom_depends(const Atom* a, int c) {
  switch (a->kind) {
    case AtomKind::Coord:
      return a->coord == c;
    case AtomKind::Const:
    case AtomKind::Surd:
      return false;
    case AtomKind::Func:
      return (a->argmask & (1u << c)) != 0;
    default:
      return a->arg->depends_on(c);
  }
}

bool Expr::depends_on(int c) const {
  if (poly_depends(p_->num, c)) return true;
  for (auto& f : p_->den)
    if (poly_depends(f.first, c)) return true;
  return false;
}

int Expr::compare(const Expr& o) const {
  if (p_ == o.p_) return 0;
  int c = poly_cmp(p_->num, o.p_->num);
  if (c) return c;
  return den_cmp(p_->den, o.p_->den);
}

Expr operator+(const Expr& a, const Expr& b) {
  if (a.is_zero()) return b;
  if (b.is_zero()) return a;
  const RatFn& x = a.raw();
  const RatFn& y = b.raw();
  if (x.den.empty() && y.den.empty()) return make(rf_from_poly(poly_add(x.num, y.num)));
  if (den_cmp(x.den, y.den) == 0) {
    RatFn r;
    r.num = poly_add(x.num, y.num);
    r.den = x.den;
    return make(rf_normalize(std::move(r)));
  }
  // lcm of factored denominators
  std::vector<std::pair<Poly, int>> l = x.den;
  for (auto& f : y.den) {
    bool found = false;
    for (auto& g : l)
      if (poly_cmp(g.first, f.first) == 0) {
        g.second = std::max(g.second, f.second);
        found = true;
      }
    if (!found) l.push_back(f);
  }
  auto cofactor = [&](const std::vector<std::pair<Poly, int>>& d) {
    Poly m = poly_const(1);
    for (auto& g : l) {
      int have = 0;
      for (auto& f : d)
        if (poly_cmp(f.first, g.first) == 0) have = f.second;
      if (g.second > have) m = poly_mul(m, poly_pow(g.first, g.second - have));
    }
    return m;
  };
  RatFn r;
  r.num = poly_add(poly_mul(x.num, cofactor(x.den)), poly_mul(y.num, cofactor(y.den)));
  r.den = l;
  return make(rf_normalize(std::move(r)));
}

Expr operator-(const Expr& a) {
  if (a.is_zero()) return a;
  RatFn r = a.raw();
  r.num = poly_neg(r.num);
  return make(std::move(r));
}

Expr operator-(const Expr& a, const Expr& b) { return a + (-b); }

Expr operator*(const Expr& a, const Expr& b) {
  if (a.is_zero() || b.is_zero()) return Expr();
  const RatFn& x = a.raw();
  const RatFn& y = b.raw();
  RatFn r;
  r.num = poly_mul(x.num, y.num);
  if (x.den.empty() && y.den.empty()) return make(rf_normalize(std::move(r)));
  r.den = x.den;
  for (auto& f : y.den) r.den.push_back(f);
  return make(rf_normalize(std::move(r)));
}

Expr operator/(const Expr& a, const Expr& b) {
  if (b.is_zero()) throw DomainError("division by zero");
  if (a.is_zero()) return a;
  const RatFn& y = b.raw();
  mpq_class coef;
  Mono mono;
  Poly prim;
  poly_content(y.num, coef, mono, prim);
  mpq_class c = mpq_class(1) / coef;
  Mono minv = mono_pow(mono, Q(-1), c);
  RatFn inv;
  inv.num = Poly{Term{minv, c}};
  poly_sort(inv.num);
  for (auto& f : y.den) inv.num = poly_mul(inv.num, poly_pow(f.first, f.second));
  if (!(prim.size() == 1 && prim[0].m.empty())) inv.den.push_back(poly_perfect_power(prim));
  const RatFn& x = a.raw();
  RatFn r;
  r.num = poly_mul(x.num, inv.num);
  r.den = x.den;
  for (auto& f : inv.den) r.den.push_back(f);
  return make(rf_normalize(std::move(r)));
}

Expr& Expr::operator+=(const Expr& o) { return *this = *this + o; }
Expr& Expr::operator-=(const Expr& o) { return *this = *this - o; }
Expr& Expr::operator*=(const Expr& o) { return *this = *this * o; }
Expr& Expr::operator/=(const Expr& o) { return *this = *this / o; }

Expr canonicalize(const Expr& e) { return e; }

bool is_zero(const Expr& e) { return e.is_zero(); }

Expr numerator(const Expr& e) { return make(rf_from_poly(e.raw().num)); }

Expr denominator(const Expr& e) {
  Poly d = poly_const(1);
  for (auto& f : e.raw().den) d = poly_mul(d, poly_pow(f.first, f.second));
  return make(rf_from_poly(d));
}

int degree_in(const Expr& e, int c) {
  const Atom* a = intern_coord(c);
  int deg = 0;
  for (auto& t : e.raw().num)
    for (auto& f : t.m)
      if (f.first == a) {
        if (!f.second.is_integer()) throw DomainError("non-integer power of coordinate");
        deg = std::max<int>(deg, static_cast<int>(f.second.n));
      }
  return deg;
}

Expr coefficient(const Expr& e, int c, int k) {
  const Atom* a = intern_coord(c);
  for (auto& f : e.raw().den)
    if (poly_depends(f.first, c)) throw DomainError("coefficient: denominator depends on coordinate");
  Poly out;
  for (auto& t : e.raw().num) {
    Q have(0);
    Mono m;
    for (auto& f : t.m) {
      if (f.first == a)
        have = f.second;
      else
        m.push_back(f);
    }
    if (have == Q(k)) {
      for (auto& f : m)
        if (f.first->kind != AtomKind::Coord && f.first->kind != AtomKind::Const && f.first->kind != AtomKind::Surd &&
            atom_depends(f.first, c))
          throw DomainError("coefficient: non-polynomial dependence on coordinate");
      out.push_back({m, t.c});
    }
  }
  poly_sort(out);
  RatFn r;
  r.num = out;
  r.den = e.raw().den;
  return make(rf_normalize(std::move(r)));
}

// ---- special forms and powers ----

namespace {

// Factor a positive integer into primes by trial division; leftovers are kept as a single base.
std::vector<std::pair<long, long>> factor_int(mpz_class n) {
  std::vector<std::pair<long, long>> r;
  for (long p = 2; p < 100000 && n > 1; ++p) {
    if (mpz_class(p) * p > n) break;
    long k = 0;
    while (mpz_divisible_ui_p(n.get_mpz_t(), static_cast<unsigned long>(p))) {
      n /= p;
      ++k;
    }
    if (k) r.push_back({p, k});
  }
  if (n > 1) {
    if (!n.fits_slong_p()) throw DomainError("radical of a very large integer");
    r.push_back({n.get_si(), 1});
  }
  return r;
}

// c^e for rational c > 0, as coefficient times surd monomial.
void rational_power(const mpq_class& c, Q e, mpq_class& coef, Mono& m) {
  coef = 1;
  m.clear();
  auto apply = [&](const mpz_class& n, int sign) {
    for (auto [p, k] : factor_int(n)) {
      Q ee = e * Q(k * sign);
      mpq_class cc = 1;
      Mono mm = mono_pow(Mono{{intern_surd(p), Q(1)}}, ee, cc);
      coef *= cc;
      Mono prod = mono_mul(m, mm, coef);
      m = prod;
    }
  };
  apply(c.get_num(), 1);
  apply(c.get_den(), -1);
}

Expr monomial_power(const Term& t, Q e) {
  mpq_class c = t.c;
  mpq_class sign = 1;
  if (c < 0) {
    if (e.d % 2 == 0) throw DomainError("even root of a negative number");
    c = -c;
    if (e.n % 2 != 0) sign = -1;
  }
  mpq_class coef;
  Mono sm;
  if (e.is_integer()) {
    mpz_class num, den;
    mpz_pow_ui(num.get_mpz_t(), c.get_num_mpz_t(), static_cast<unsigned long>(e.n < 0 ? -e.n : e.n));
    mpz_pow_ui(den.get_mpz_t(), c.get_den_mpz_t(), static_cast<unsigned long>(e.n < 0 ? -e.n : e.n));
    coef = e.n < 0 ? mpq_class(den, num) : mpq_class(num, den);
    coef.canonicalize();
  } else {
    rational_power(c, e, coef, sm);
  }
  mpq_class c2 = 1;
  Mono mm = mono_pow(t.m, e, c2);
  mpq_class c3 = coef * c2 * sign;
  Mono all = mono_mul(mm, sm, c3);
  Poly p{Term{all, c3}};
  return make(rf_normalize(rf_from_poly(std::move(p))));
}

Expr poly_power(const Poly& p, Q e) {
  if (p.size() == 1) return monomial_power(p[0], e);
  if (e.is_integer()) {
    if (e.n >= 0) return make(rf_normalize(rf_from_poly(poly_pow(p, static_cast<int>(e.n)))));
    mpq_class coef;
    Mono mono;
    Poly prim;
    poly_content(p, coef, mono, prim);
    auto [root, k] = poly_perfect_power(prim);
    RatFn inv;
    inv.num = poly_const(1);
    inv.den.push_back({root, k * static_cast<int>(-e.n)});
    return monomial_power(Term{mono, coef}, e) * make(rf_normalize(std::move(inv)));
  }
  mpq_class coef;
  Mono mono;
  Poly prim;
  poly_content(p, coef, mono, prim);
  if (coef < 0) {
    // keep the coefficient positive so the root of the content stays real
    coef = -coef;
    prim = poly_neg(prim);
  }
  Expr head = monomial_power(Term{mono, coef}, e);
  Expr base = make(rf_from_poly(prim));
  Expr rad = make(rf_normalize(rf_from_poly(Poly{Term{{{intern_special(AtomKind::Rad, base), e}}, mpq_class(1)}})));
  return head * rad;
}

}  // namespace

Expr pow(const Expr& e, Q q) {
  if (q.is_zero()) return Expr(1);
  if (e.is_zero()) {
    if (q < Q(0)) throw DomainError("zero to a negative power");
    return e;
  }
  if (q == Q(1)) return e;
  const RatFn& r = e.raw();
  if (q.is_integer() && r.den.empty() && q.n > 0) return make(rf_normalize(rf_from_poly(poly_pow(r.num, static_cast<int>(q.n)))));
  if (q.is_integer() && q.n > 0) {
    Expr acc(1);
    Expr b = e;
    std::int64_t k = q.n;
    while (k) {
      if (k & 1) acc *= b;
      k >>= 1;
      if (k) b *= b;
    }
    return acc;
  }
  if (q.is_integer()) return Expr(1) / pow(e, -q);
  Expr out = poly_power(r.num, q);
  for (auto& f : r.den) out = out * poly_power(f.first, Q(-f.second) * q);
  return out;
}

Expr pow(const Expr& e, long k) { return pow(e, Q(k)); }

Expr sqrt(const Expr& e) { return pow(e, Q(1, 2)); }

Expr exp(const Expr& e) {
  if (e.is_zero()) return Expr(1);
  // pull out c*log(a) pieces: exp(c log a) = a^c
  Expr factor(1);
  Poly rest;
  if (e.raw().den.empty()) {
    for (auto& t : e.raw().num) {
      if (t.m.size() == 1 && t.m[0].first->kind == AtomKind::Log && t.m[0].second == Q(1) && t.c.get_den() == 1 &&
          t.c.get_num().fits_slong_p()) {
        factor *= pow(*t.m[0].first->arg, Q(t.c.get_num().get_si()));
      } else if (t.m.size() == 1 && t.m[0].first->kind == AtomKind::Log && t.m[0].second == Q(1) &&
                 t.c.get_num().fits_slong_p() && t.c.get_den().fits_slong_p()) {
        factor *= pow(*t.m[0].first->arg, Q(t.c.get_num().get_si(), t.c.get_den().get_si()));
      } else {
        rest.push_back(t);
      }
    }
  } else {
    return make(rf_from_poly(poly_atom(intern_special(AtomKind::Exp, e))));
  }
  if (rest.empty()) return factor;
  Expr arg = make(rf_from_poly(rest));
  return factor * make(rf_from_poly(poly_atom(intern_special(AtomKind::Exp, arg))));
}

static Expr log_atom(const Expr& x) { return make(rf_from_poly(poly_atom(intern_special(AtomKind::Log, x)))); }

static Expr log_positive_rational(const mpq_class& c) {
  Expr r;
  for (auto [p, k] : factor_int(c.get_num())) r += Expr(k) * log_atom(Expr(p));
  for (auto [p, k] : factor_int(c.get_den())) r -= Expr(k) * log_atom(Expr(p));
  return r;
}

// Only exponentials are split off; the remaining factor stays a single log atom, so no
// sign assumption is made about the other atoms.
Expr log(const Expr& e) {
  if (e.is_zero()) throw DomainError("log of zero");
  if (auto q = e.as_rational()) {
    if (*q < 0) throw DomainError("log of a negative number");
    return log_positive_rational(*q);
  }
  const RatFn& r = e.raw();
  mpq_class coef;
  Mono mono;
  Poly prim;
  poly_content(r.num, coef, mono, prim);
  Expr out;
  for (auto& f : mono)
    if (f.first->kind == AtomKind::Exp) out += *f.first->arg * Expr(mpq_class(f.second.n, f.second.d));
  if (out.is_zero()) return log_atom(e);
  Expr rest = e;
  for (auto& f : mono)
    if (f.first->kind == AtomKind::Exp) rest = rest * exp(-*f.first->arg * Expr(mpq_class(f.second.n, f.second.d)));
  if (auto q = rest.as_rational(); q && *q > 0) return out + log_positive_rational(*q);
  return out + log_atom(rest);
}

static bool leading_negative(const Expr& e) { return !e.raw().num.empty() && e.raw().num[0].c < 0; }

Expr tanh(const Expr& e) {
  if (e.is_zero()) return e;
  if (leading_negative(e)) return -tanh(-e);
  return make(rf_from_poly(poly_atom(intern_special(AtomKind::Tanh, e))));
}

Expr abs(const Expr& e) {
  if (e.is_zero()) return e;
  if (auto q = e.as_rational()) return Expr(::abs(*q));
  const RatFn& r = e.raw();
  if (r.den.empty() && r.num.size() == 1) {
    const Term& t = r.num[0];
    mpq_class c = ::abs(t.c);
    Expr inner = make(rf_from_poly(Poly{Term{t.m, mpq_class(1)}}));
    return Expr(c) * make(rf_from_poly(poly_atom(intern_special(AtomKind::Abs, inner))));
  }
  if (leading_negative(e)) return abs(-e);
  return make(rf_from_poly(poly_atom(intern_special(AtomKind::Abs, e))));
}

// ---- differentiation ----

static Expr poly_diff(const Poly& p, int c) {
  Poly fast;
  Expr slow;
  for (auto& t : p) {
    for (std::size_t i = 0; i < t.m.size(); ++i) {
      const Atom* a = t.m[i].first;
      if (!atom_depends(a, c)) continue;
      Expr da = atom_diff(a, c);
      if (da.is_zero()) continue;
      Mono rest;
      mpq_class coef = t.c * mpq_class(t.m[i].second.n, t.m[i].second.d);
      for (std::size_t j = 0; j < t.m.size(); ++j) {
        if (j == i) {
          Q e = t.m[i].second - Q(1);
          if (!e.is_zero()) rest.push_back({a, e});
        } else {
          rest.push_back(t.m[j]);
        }
      }
      // exponent of an exp atom is one, so no stray factor survives here
      if (da.raw().den.empty()) {
        Poly piece = poly_scale(da.raw().num, coef, rest);
        fast.insert(fast.end(), piece.begin(), piece.end());
      } else {
        Poly head{Term{rest, coef}};
        slow += make(rf_normalize(rf_from_poly(head))) * da;
      }
    }
  }
  poly_sort(fast);
  return make(rf_normalize(rf_from_poly(std::move(fast)))) + slow;
}

Expr diff(const Expr& e, int c) {
  if (e.is_zero() || !e.depends_on(c)) return Expr();
  const RatFn& r = e.raw();
  Expr dn = poly_diff(r.num, c);
  if (r.den.empty()) return dn;
  RatFn dd;
  dd.den = r.den;
  dd.num = poly_const(1);
  Expr invden = make(dd);
  Expr out = dn * invden;
  Expr num = make(rf_from_poly(r.num));
  for (auto& f : r.den) {
    if (!poly_depends(f.first, c)) continue;
    Expr fd = poly_diff(f.first, c);
    Expr base = make(rf_from_poly(f.first));
    out -= Expr(f.second) * num * fd * invden / base;
  }
  return out;
}

Expr diff(const Expr& e, int coord, int times) {
  Expr r = e;
  for (int i = 0; i < times; ++i) r = diff(r, coord);
  return r;
}

}  // namespace vsw
