#include <algorithm>
#include <numeric>

#include "kernel.hpp"

namespace vsw {

Q::Q(std::int64_t num, std::int64_t den) : n(num), d(den) {
  if (d == 0) throw DomainError("zero denominator in exponent");
  if (d < 0) {
    n = -n;
    d = -d;
  }
  std::int64_t g = std::gcd(n < 0 ? -n : n, d);
  if (g > 1) {
    n /= g;
    d /= g;
  }
}

std::int64_t Q::floor() const {
  if (n >= 0) return n / d;
  return -((-n + d - 1) / d);
}

std::string Q::str() const { return d == 1 ? std::to_string(n) : std::to_string(n) + "/" + std::to_string(d); }

Q operator+(Q a, Q b) { return Q(a.n * b.d + b.n * a.d, a.d * b.d); }
Q operator-(Q a, Q b) { return Q(a.n * b.d - b.n * a.d, a.d * b.d); }
Q operator*(Q a, Q b) { return Q(a.n * b.n, a.d * b.d); }
bool operator<(Q a, Q b) { return a.n * b.d < b.n * a.d; }

}  // namespace vsw

namespace vsw::detail {

namespace {

int qsign(Q q) { return (q.n > 0) - (q.n < 0); }

void sort_mono(Mono& m) {
  std::sort(m.begin(), m.end(), [](const Factor& a, const Factor& b) { return atom_cmp(a.first, b.first) < 0; });
}

mpq_class qpow(const mpq_class& base, long k) {
  mpq_class r = 1;
  mpq_class b = k < 0 ? mpq_class(1) / base : base;
  unsigned long e = k < 0 ? static_cast<unsigned long>(-k) : static_cast<unsigned long>(k);
  while (e) {
    if (e & 1) r *= b;
    b *= b;
    e >>= 1;
  }
  return r;
}

// Keep surd exponents in (0,1), moving integer parts into the coefficient.
void fix_surd(Factor& f, mpq_class& coef) {
  if (f.first->kind != AtomKind::Surd) return;
  std::int64_t k = f.second.floor();
  if (k != 0) {
    coef *= qpow(mpq_class(f.first->prime), k);
    f.second = f.second - Q(k);
  }
}

}  // namespace

int mono_cmp(const Mono& a, const Mono& b) {
  std::size_t i = 0, j = 0;
  while (i < a.size() && j < b.size()) {
    int c = atom_cmp(a[i].first, b[j].first);
    if (c == 0) {
      if (a[i].second != b[j].second) return a[i].second < b[j].second ? -1 : 1;
      ++i;
      ++j;
    } else if (c < 0) {
      return qsign(a[i].second);
    } else {
      return -qsign(b[j].second);
    }
  }
  if (i < a.size()) return qsign(a[i].second);
  if (j < b.size()) return -qsign(b[j].second);
  return 0;
}

static Mono merge_exps(Mono m, mpq_class& coef) {
  // at most one exp atom, exponent one
  const Atom* first = nullptr;
  Expr acc(0);
  bool need = false;
  int count = 0;
  for (auto& f : m)
    if (f.first->kind == AtomKind::Exp) {
      ++count;
      if (f.second != Q(1)) need = true;
      if (!first) first = f.first;
    }
  if (count <= 1 && !need) return m;
  Mono out;
  for (auto& f : m) {
    if (f.first->kind == AtomKind::Exp)
      acc += *f.first->arg * Expr(mpq_class(f.second.n, f.second.d));
    else
      out.push_back(f);
  }
  if (!acc.is_zero()) {
    Expr e = exp(acc);
    const Poly& p = e.raw().num;
    // exp() of a sum can split off log powers; fold them back in
    if (p.size() == 1 && e.raw().den.empty()) {
      coef *= p[0].c;
      Mono mm;
      mpq_class c2 = 1;
      mm = mono_mul(out, p[0].m, c2);
      coef *= c2;
      return mm;
    }
    out.push_back({intern_special(AtomKind::Exp, acc), Q(1)});
    sort_mono(out);
  }
  return out;
}

Mono mono_mul(const Mono& a, const Mono& b, mpq_class& coef) {
  Mono r;
  r.reserve(a.size() + b.size());
  std::size_t i = 0, j = 0;
  int exps = 0;
  while (i < a.size() || j < b.size()) {
    int c;
    if (i == a.size())
      c = 1;
    else if (j == b.size())
      c = -1;
    else
      c = atom_cmp(a[i].first, b[j].first);
    Factor f;
    if (c == 0) {
      f = {a[i].first, a[i].second + b[j].second};
      ++i;
      ++j;
    } else if (c < 0) {
      f = a[i++];
    } else {
      f = b[j++];
    }
    fix_surd(f, coef);
    if (f.second.is_zero()) continue;
    if (f.first->kind == AtomKind::Exp) ++exps;
    r.push_back(f);
  }
  if (exps > 1 || (exps == 1 && std::any_of(r.begin(), r.end(), [](const Factor& f) {
                     return f.first->kind == AtomKind::Exp && f.second != Q(1);
                   })))
    return merge_exps(std::move(r), coef);
  return r;
}

Mono mono_pow(const Mono& a, Q e, mpq_class& coef) {
  Mono r;
  bool has_exp = false;
  for (auto f : a) {
    f.second = f.second * e;
    fix_surd(f, coef);
    if (f.second.is_zero()) continue;
    if (f.first->kind == AtomKind::Exp) has_exp = true;
    r.push_back(f);
  }
  if (has_exp) return merge_exps(std::move(r), coef);
  return r;
}

bool mono_divides(const Mono& d, const Mono& m) {
  std::size_t j = 0;
  for (auto& f : d) {
    if (f.first->kind == AtomKind::Exp) continue;
    while (j < m.size() && atom_cmp(m[j].first, f.first) < 0) ++j;
    Q have = (j < m.size() && m[j].first == f.first) ? m[j].second : Q(0);
    if (have < f.second) return false;
  }
  return true;
}

Mono mono_div(const Mono& a, const Mono& b) {
  mpq_class c = 1;
  mpq_class c2 = 1;
  Mono inv = mono_pow(b, Q(-1), c);
  Mono r = mono_mul(a, inv, c2);
  return r;
}

Mono mono_min(const Mono& a, const Mono& b) {
  Mono r;
  std::size_t i = 0, j = 0;
  while (i < a.size() || j < b.size()) {
    int c;
    if (i == a.size())
      c = 1;
    else if (j == b.size())
      c = -1;
    else
      c = atom_cmp(a[i].first, b[j].first);
    if (c == 0) {
      if (a[i].first->kind != AtomKind::Exp) {
        Q m = a[i].second < b[j].second ? a[i].second : b[j].second;
        if (!m.is_zero()) r.push_back({a[i].first, m});
      } else {
        r.push_back(a[i]);
      }
      ++i;
      ++j;
    } else if (c < 0) {
      if (a[i].second < Q(0) && a[i].first->kind != AtomKind::Exp && a[i].first->kind != AtomKind::Surd)
        r.push_back(a[i]);
      ++i;
    } else {
      if (b[j].second < Q(0) && b[j].first->kind != AtomKind::Exp && b[j].first->kind != AtomKind::Surd)
        r.push_back(b[j]);
      ++j;
    }
  }
  return r;
}

void poly_sort(Poly& p) {
  std::sort(p.begin(), p.end(), [](const Term& a, const Term& b) { return mono_cmp(a.m, b.m) > 0; });
  Poly out;
  out.reserve(p.size());
  for (auto& t : p) {
    if (!out.empty() && mono_cmp(out.back().m, t.m) == 0) {
      out.back().c += t.c;
    } else {
      if (!out.empty() && out.back().c == 0) out.pop_back();
      out.push_back(std::move(t));
    }
  }
  if (!out.empty() && out.back().c == 0) out.pop_back();
  p = std::move(out);
}

int poly_cmp(const Poly& a, const Poly& b) {
  std::size_t n = std::min(a.size(), b.size());
  for (std::size_t i = 0; i < n; ++i) {
    int c = mono_cmp(a[i].m, b[i].m);
    if (c) return c;
    int cc = cmp(a[i].c, b[i].c);
    if (cc) return cc < 0 ? -1 : 1;
  }
  if (a.size() != b.size()) return a.size() < b.size() ? -1 : 1;
  return 0;
}

Poly poly_add(const Poly& a, const Poly& b) {
  Poly r;
  r.reserve(a.size() + b.size());
  std::size_t i = 0, j = 0;
  while (i < a.size() && j < b.size()) {
    int c = mono_cmp(a[i].m, b[j].m);
    if (c > 0) {
      r.push_back(a[i++]);
    } else if (c < 0) {
      r.push_back(b[j++]);
    } else {
      mpq_class s = a[i].c + b[j].c;
      if (s != 0) r.push_back({a[i].m, s});
      ++i;
      ++j;
    }
  }
  while (i < a.size()) r.push_back(a[i++]);
  while (j < b.size()) r.push_back(b[j++]);
  return r;
}

Poly poly_neg(const Poly& a) {
  Poly r = a;
  for (auto& t : r) t.c = -t.c;
  return r;
}

Poly poly_sub(const Poly& a, const Poly& b) { return poly_add(a, poly_neg(b)); }

Poly poly_mul(const Poly& a, const Poly& b) {
  if (a.empty() || b.empty()) return {};
  if (a.size() == 1 && a[0].m.empty()) return poly_scale(b, a[0].c, {});
  if (b.size() == 1 && b[0].m.empty()) return poly_scale(a, b[0].c, {});
  Poly r;
  r.reserve(a.size() * b.size());
  for (auto& x : a)
    for (auto& y : b) {
      mpq_class c = x.c * y.c;
      Mono m = mono_mul(x.m, y.m, c);
      r.push_back({std::move(m), std::move(c)});
    }
  poly_sort(r);
  return r;
}

Poly poly_scale(const Poly& a, const mpq_class& c, const Mono& m) {
  if (c == 0) return {};
  Poly r;
  r.reserve(a.size());
  bool resort = false;
  for (auto& t : a) {
    mpq_class cc = t.c * c;
    Mono mm = m.empty() ? t.m : mono_mul(t.m, m, cc);
    if (!m.empty()) resort = true;
    r.push_back({std::move(mm), std::move(cc)});
  }
  if (resort) poly_sort(r);
  return r;
}

Poly poly_pow(const Poly& a, int k) {
  Poly r = poly_const(1);
  Poly b = a;
  while (k > 0) {
    if (k & 1) r = poly_mul(r, b);
    k >>= 1;
    if (k) b = poly_mul(b, b);
  }
  return r;
}

Poly poly_const(const mpq_class& c) {
  if (c == 0) return {};
  return Poly{Term{{}, c}};
}

Poly poly_atom(const Atom* a, Q e) {
  mpq_class c = 1;
  Mono m{{a, e}};
  if (a->kind == AtomKind::Surd) {
    Factor f = m[0];
    std::int64_t k = f.second.floor();
    if (k) {
      mpq_class p = a->prime;
      mpq_class r = 1;
      for (std::int64_t i = 0; i < (k < 0 ? -k : k); ++i) r *= p;
      c = k < 0 ? mpq_class(1) / r : r;
      m[0].second = f.second - Q(k);
    }
    if (m[0].second.is_zero()) m.clear();
  }
  if (e.is_zero()) m.clear();
  return Poly{Term{m, c}};
}

void poly_content(const Poly& p, mpq_class& coef, Mono& mono, Poly& prim) {
  if (p.empty()) {
    coef = 0;
    mono.clear();
    prim.clear();
    return;
  }
  mpz_class g = 0, l = 1;
  mono = p[0].m;
  for (auto& t : p) {
    g = gcd(g, mpz_class(t.c.get_num()));
    l = lcm(l, mpz_class(t.c.get_den()));
    mono = mono_min(mono, t.m);
  }
  // exp atoms only count when every term has the same one
  Mono filtered;
  for (auto& f : mono) {
    if (f.first->kind == AtomKind::Exp) {
      bool all = std::all_of(p.begin(), p.end(), [&](const Term& t) {
        return std::any_of(t.m.begin(), t.m.end(), [&](const Factor& x) { return x.first == f.first; });
      });
      if (!all) continue;
    }
    if (f.first->kind == AtomKind::Surd) {
      bool all = std::all_of(p.begin(), p.end(), [&](const Term& t) {
        return std::any_of(t.m.begin(), t.m.end(), [&](const Factor& x) { return x.first == f.first; });
      });
      if (!all) continue;
    }
    filtered.push_back(f);
  }
  mono = filtered;
  coef = mpq_class(g, l);
  coef.canonicalize();
  if (p[0].c < 0) coef = -coef;
  mpq_class inv = mpq_class(1) / coef;
  mpq_class dummy = 1;
  Mono minv = mono_pow(mono, Q(-1), dummy);
  prim = poly_scale(p, inv * dummy, minv);
}

std::optional<Poly> poly_div_exact(const Poly& n, const Poly& d) {
  if (d.empty()) return std::nullopt;
  if (n.empty()) return Poly{};
  Poly r = n;
  Poly q;
  std::size_t cap = 8 * (n.size() + 4) * (d.size() + 4);
  const Term& lt = d[0];
  for (std::size_t step = 0; !r.empty(); ++step) {
    if (step > cap) return std::nullopt;
    if (!mono_divides(lt.m, r[0].m)) return std::nullopt;
    mpq_class c = r[0].c / lt.c;
    Mono m = mono_div(r[0].m, lt.m);
    // any negative exponent on an atom of d means no polynomial quotient
    for (auto& f : m)
      for (auto& t : d)
        for (auto& g : t.m)
          if (g.first == f.first && f.second < Q(0) && f.first->kind != AtomKind::Exp) return std::nullopt;
    Poly sub = poly_scale(d, c, m);
    Poly nr = poly_sub(r, sub);
    if (!nr.empty() && mono_cmp(nr[0].m, r[0].m) >= 0) return std::nullopt;
    r = std::move(nr);
    q.push_back({m, c});
  }
  poly_sort(q);
  return q;
}

namespace {

std::optional<Term> term_root(const Term& t, int k) {
  if (t.c <= 0) return std::nullopt;
  mpz_class n, d;
  if (!mpz_root(n.get_mpz_t(), t.c.get_num_mpz_t(), static_cast<unsigned long>(k))) return std::nullopt;
  if (!mpz_root(d.get_mpz_t(), t.c.get_den_mpz_t(), static_cast<unsigned long>(k))) return std::nullopt;
  Term r{{}, mpq_class(n, d)};
  for (auto& f : t.m) {
    Q e = f.second * Q(1, k);
    if (e.d != f.second.d || f.first->kind == AtomKind::Exp || f.first->kind == AtomKind::Surd) return std::nullopt;
    r.m.push_back({f.first, e});
  }
  return r;
}

}  // namespace

std::optional<Poly> poly_root(const Poly& p, int k) {
  if (p.empty() || k < 2) return std::nullopt;
  auto r1 = term_root(p[0], k);
  if (!r1) return std::nullopt;
  Poly r{*r1};
  mpq_class c0 = 1;
  Mono lead_pow = mono_pow(r1->m, Q(k - 1), c0);
  mpq_class denom = mpq_class(k) * c0;
  for (int t = 0; t < k; ++t)
    if (t < k - 1) denom *= r1->c;
  for (std::size_t it = 0; it <= p.size() + 1; ++it) {
    Poly e = poly_sub(p, poly_pow(r, k));
    if (e.empty()) return r;
    mpq_class cc = e[0].c / denom;
    Mono inv = mono_pow(lead_pow, Q(-1), cc);
    mpq_class c2 = cc;
    Mono m = mono_mul(e[0].m, inv, c2);
    if (mono_cmp(m, r.back().m) >= 0) return std::nullopt;
    r.push_back({m, c2});
  }
  return std::nullopt;
}

std::pair<Poly, int> poly_perfect_power(const Poly& p) {
  if (p.size() > 1)
    for (int k = 8; k >= 2; --k)
      if (auto r = poly_root(p, k)) return {*r, k};
  return {p, 1};
}

std::string render_poly(const Poly& p) {
  if (p.empty()) return "0";
  std::string s;
  bool first = true;
  for (auto& t : p) {
    mpq_class c = t.c;
    bool neg = c < 0;
    if (neg) c = -c;
    if (first) {
      if (neg) s += "-";
    } else {
      s += neg ? " - " : " + ";
    }
    first = false;
    std::string body;
    bool unit = (c == 1);
    if (!unit || t.m.empty()) body = c.get_str();
    for (auto& f : t.m) {
      if (!body.empty()) body += "*";
      body += render_atom(f.first);
      if (f.second != Q(1)) {
        if (f.second.is_integer() && f.second.n > 0)
          body += "^" + f.second.str();
        else
          body += "^(" + f.second.str() + ")";
      }
    }
    s += body;
  }
  return s;
}

}  // namespace vsw::detail
