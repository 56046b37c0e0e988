#include <cmath>
#include <set>

#include "kernel.hpp"

namespace vsw {

using namespace detail;

namespace {

double num_pow(double x, Q e) {
  if (e.is_integer()) return std::pow(x, static_cast<double>(e.n));
  if (x < 0) {
    if (e.d % 2 == 0) throw DomainError("even root of a negative value");
    double r = std::pow(-x, static_cast<double>(e.n) / static_cast<double>(e.d));
    return (e.n % 2 == 0) ? r : -r;
  }
  return std::pow(x, static_cast<double>(e.n) / static_cast<double>(e.d));
}

struct Evaluator {
  const NumericEnv& env;

  double atom(const Atom* a) {
    switch (a->kind) {
      case AtomKind::Coord:
        return env.point[a->coord];
      case AtomKind::Const: {
        auto it = env.constants.find(a->name);
        if (it == env.constants.end()) throw SymbolError("unbound constant " + a->name);
        return it->second;
      }
      case AtomKind::Surd:
        return static_cast<double>(a->prime);
      case AtomKind::Func: {
        std::string key = render_atom(a);
        auto it = env.instances.find(key);
        if (it != env.instances.end()) return it->second;
        if (env.func) return env.func(a->name, a->derivs, env.point);
        throw SymbolError("unbound function instance " + key);
      }
      case AtomKind::Exp:
        return std::exp(expr(*a->arg));
      case AtomKind::Log: {
        double x = expr(*a->arg);
        if (!(x > 0)) throw DomainError("log of a non-positive value");
        return std::log(x);
      }
      case AtomKind::Tanh:
        return std::tanh(expr(*a->arg));
      case AtomKind::Abs:
        return std::fabs(expr(*a->arg));
      case AtomKind::Rad:
        return expr(*a->arg);
    }
    return 0;
  }

  double poly(const Poly& p) {
    double s = 0;
    for (auto& t : p) {
      double x = t.c.get_d();
      for (auto& f : t.m) x *= num_pow(atom(f.first), f.second);
      s += x;
    }
    return s;
  }

  double expr(const Expr& e) {
    const RatFn& r = e.raw();
    double n = poly(r.num);
    if (r.den.empty()) return n;
    double d = 1;
    for (auto& f : r.den) d *= std::pow(poly(f.first), f.second);
    if (d == 0) throw DomainError("division by zero");
    return n / d;
  }
};

void collect(const Expr& e, std::set<const Atom*>& seen, std::set<std::string>& funcs, std::set<std::string>& consts);

void collect_poly(const Poly& p, std::set<const Atom*>& seen, std::set<std::string>& funcs, std::set<std::string>& consts) {
  for (auto& t : p)
    for (auto& f : t.m) {
      const Atom* a = f.first;
      if (!seen.insert(a).second) continue;
      if (a->kind == AtomKind::Func) funcs.insert(render_atom(a));
      if (a->kind == AtomKind::Const) consts.insert(a->name);
      if (a->arg) collect(*a->arg, seen, funcs, consts);
    }
}

void collect(const Expr& e, std::set<const Atom*>& seen, std::set<std::string>& funcs, std::set<std::string>& consts) {
  collect_poly(e.raw().num, seen, funcs, consts);
  for (auto& f : e.raw().den) collect_poly(f.first, seen, funcs, consts);
}

struct Substituter {
  const Bindings& b;
  std::map<const Atom*, Expr> memo;

  Expr atom(const Atom* a) {
    auto it = memo.find(a);
    if (it != memo.end()) return it->second;
    Expr r;
    switch (a->kind) {
      case AtomKind::Coord: {
        auto c = b.coords.find(a->coord);
        r = c != b.coords.end() ? c->second : atom_expr(a);
        break;
      }
      case AtomKind::Const: {
        auto c = b.constants.find(a->name);
        r = c != b.constants.end() ? c->second : atom_expr(a);
        break;
      }
      case AtomKind::Surd:
        r = atom_expr(a);
        break;
      case AtomKind::Func: {
        auto inst = b.instances.find(render_atom(a));
        if (inst != b.instances.end()) {
          r = inst->second;
          break;
        }
        auto fn = b.functions.find(a->name);
        if (fn != b.functions.end()) {
          r = fn->second;
          for (int c = 0; c < 4; ++c) r = diff(r, c, a->derivs[c]);
        } else {
          r = atom_expr(a);
        }
        // function arguments may themselves be rebound coordinates
        if (fn == b.functions.end() && !b.coords.empty())
          for (auto& [c, _] : b.coords)
            if (a->argmask & (1u << c)) throw DomainError("cannot rebind argument " + std::string(coord_name(c)) + " of " + a->name);
        break;
      }
      case AtomKind::Exp:
        r = exp(expr(*a->arg));
        break;
      case AtomKind::Log:
        r = log(expr(*a->arg));
        break;
      case AtomKind::Tanh:
        r = tanh(expr(*a->arg));
        break;
      case AtomKind::Abs:
        r = abs(expr(*a->arg));
        break;
      case AtomKind::Rad:
        r = expr(*a->arg);
        break;
    }
    memo.emplace(a, r);
    return r;
  }

  Expr poly(const Poly& p) {
    Expr s;
    for (auto& t : p) {
      Expr x(t.c);
      for (auto& f : t.m) x *= pow(atom(f.first), f.second);
      s += x;
    }
    return s;
  }

  Expr expr(const Expr& e) {
    const RatFn& r = e.raw();
    Expr n = poly(r.num);
    for (auto& f : r.den) n /= pow(poly(f.first), static_cast<long>(f.second));
    return n;
  }
};

}  // namespace

double eval_numeric(const Expr& e, const NumericEnv& env) {
  Evaluator ev{env};
  return ev.expr(e);
}

Expr substitute(const Expr& e, const Bindings& b) {
  if (b.empty()) return e;
  for (auto& [c, x] : b.coords)
    if (x.depends_on(c)) throw DomainError(std::string("cyclic binding of coordinate ") + coord_name(c));
  Substituter s{b, {}};
  return s.expr(e);
}

std::vector<std::string> function_instances(const Expr& e) {
  std::set<const Atom*> seen;
  std::set<std::string> f, c;
  collect(e, seen, f, c);
  return {f.begin(), f.end()};
}

std::vector<std::string> constants_in(const Expr& e) {
  std::set<const Atom*> seen;
  std::set<std::string> f, c;
  collect(e, seen, f, c);
  return {c.begin(), c.end()};
}

}  // namespace vsw
