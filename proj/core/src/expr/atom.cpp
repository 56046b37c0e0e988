#include <map>
#include <tuple>

#include "kernel.hpp"

namespace vsw::detail {

namespace {

struct AtomTable {
  std::deque<Atom> store;
  std::map<std::tuple<int, std::string>, const Atom*> named;  // coords, consts
  std::map<std::tuple<std::string, std::uint8_t, std::array<std::uint8_t, 4>>, const Atom*> funcs;
  std::map<long, const Atom*> surds;
  std::map<std::pair<int, Expr>, const Atom*> specials;
  std::uint64_t next = 1;
};

AtomTable& table() {
  static AtomTable t;
  return t;
}

int sgn(int x) { return (x > 0) - (x < 0); }

}  // namespace

std::mutex& kernel_mutex() {
  static std::mutex m;
  return m;
}

const Atom* intern_coord(int c) {
  static const Atom* cached[4] = {nullptr, nullptr, nullptr, nullptr};
  std::lock_guard<std::mutex> lk(kernel_mutex());
  if (cached[c]) return cached[c];
  auto& t = table();
  Atom a;
  a.kind = AtomKind::Coord;
  a.coord = c;
  a.name = coord_name(c);
  a.serial = t.next++;
  t.store.push_back(std::move(a));
  cached[c] = &t.store.back();
  return cached[c];
}

const Atom* intern_const(const std::string& name) {
  std::lock_guard<std::mutex> lk(kernel_mutex());
  auto& t = table();
  auto key = std::make_tuple(1, name);
  auto it = t.named.find(key);
  if (it != t.named.end()) return it->second;
  Atom a;
  a.kind = AtomKind::Const;
  a.name = name;
  a.serial = t.next++;
  t.store.push_back(std::move(a));
  t.named[key] = &t.store.back();
  return &t.store.back();
}

const Atom* intern_func(const std::string& name, std::uint8_t argmask, std::array<std::uint8_t, 4> derivs) {
  std::lock_guard<std::mutex> lk(kernel_mutex());
  auto& t = table();
  auto key = std::make_tuple(name, argmask, derivs);
  auto it = t.funcs.find(key);
  if (it != t.funcs.end()) return it->second;
  Atom a;
  a.kind = AtomKind::Func;
  a.name = name;
  a.argmask = argmask;
  a.derivs = derivs;
  a.serial = t.next++;
  t.store.push_back(std::move(a));
  t.funcs[key] = &t.store.back();
  return &t.store.back();
}

const Atom* intern_surd(long p) {
  std::lock_guard<std::mutex> lk(kernel_mutex());
  auto& t = table();
  auto it = t.surds.find(p);
  if (it != t.surds.end()) return it->second;
  Atom a;
  a.kind = AtomKind::Surd;
  a.prime = p;
  a.name = std::to_string(p);
  a.serial = t.next++;
  t.store.push_back(std::move(a));
  t.surds[p] = &t.store.back();
  return &t.store.back();
}

const Atom* intern_special(AtomKind k, const Expr& arg) {
  std::lock_guard<std::mutex> lk(kernel_mutex());
  auto& t = table();
  auto key = std::make_pair(static_cast<int>(k), arg);
  auto it = t.specials.find(key);
  if (it != t.specials.end()) return it->second;
  Atom a;
  a.kind = k;
  a.arg = arg;
  a.serial = t.next++;
  t.store.push_back(std::move(a));
  t.specials[key] = &t.store.back();
  return &t.store.back();
}

int atom_cmp(const Atom* a, const Atom* b) {
  if (a == b) return 0;
  if (a->kind != b->kind) return a->kind < b->kind ? -1 : 1;
  switch (a->kind) {
    case AtomKind::Coord:
      return sgn(a->coord - b->coord);
    case AtomKind::Const:
      return sgn(a->name.compare(b->name));
    case AtomKind::Func: {
      int c = sgn(a->name.compare(b->name));
      if (c) return c;
      int oa = 0, ob = 0;
      for (int i = 0; i < 4; ++i) {
        oa += a->derivs[i];
        ob += b->derivs[i];
      }
      if (oa != ob) return oa < ob ? -1 : 1;
      for (int i = 0; i < 4; ++i)
        if (a->derivs[i] != b->derivs[i]) return a->derivs[i] > b->derivs[i] ? -1 : 1;
      return sgn(static_cast<int>(a->argmask) - static_cast<int>(b->argmask));
    }
    case AtomKind::Surd:
      return a->prime < b->prime ? -1 : 1;
    default:
      return a->arg->compare(*b->arg);
  }
}

Expr atom_expr(const Atom* a, Q e) { return make(poly_atom(a, e)); }

Expr atom_diff(const Atom* a, int c) {
  {
    std::lock_guard<std::mutex> lk(kernel_mutex());
    if (a->dcache[c]) return *a->dcache[c];
  }
  Expr r;
  switch (a->kind) {
    case AtomKind::Coord:
      r = Expr(a->coord == c ? 1 : 0);
      break;
    case AtomKind::Const:
    case AtomKind::Surd:
      r = Expr(0);
      break;
    case AtomKind::Func:
      if (a->argmask & (1u << c)) {
        auto d = a->derivs;
        ++d[c];
        r = make(poly_atom(intern_func(a->name, a->argmask, d)));
      } else {
        r = Expr(0);
      }
      break;
    case AtomKind::Exp:
      r = atom_expr(a) * diff(*a->arg, c);
      break;
    case AtomKind::Log:
      r = diff(*a->arg, c) / *a->arg;
      break;
    case AtomKind::Tanh: {
      Expr t = atom_expr(a);
      r = (Expr(1) - t * t) * diff(*a->arg, c);
      break;
    }
    case AtomKind::Abs:
      r = diff(*a->arg, c) * atom_expr(a) / *a->arg;
      break;
    case AtomKind::Rad:
      r = diff(*a->arg, c);
      break;
  }
  std::lock_guard<std::mutex> lk(kernel_mutex());
  a->dcache[c] = r;
  return r;
}

std::string render_atom(const Atom* a) {
  switch (a->kind) {
    case AtomKind::Coord:
    case AtomKind::Const:
    case AtomKind::Surd:
      return a->name;
    case AtomKind::Func:
      return render_atom_name(FunctionSymbol{a->name, a->argmask}, a->derivs);
    case AtomKind::Exp:
      return "exp(" + render(*a->arg) + ")";
    case AtomKind::Log:
      return "log(" + render(*a->arg) + ")";
    case AtomKind::Tanh:
      return "tanh(" + render(*a->arg) + ")";
    case AtomKind::Abs:
      return "abs(" + render(*a->arg) + ")";
    case AtomKind::Rad:
      return "(" + render(*a->arg) + ")";
  }
  return "?";
}

}  // namespace vsw::detail

namespace vsw {

const char* coord_name(int c) {
  static const char* names[4] = {"u", "v", "U", "V"};
  return names[c];
}

std::optional<int> coord_from_name(const std::string& s) {
  if (s == "u") return 0;
  if (s == "v") return 1;
  if (s == "U") return 2;
  if (s == "V") return 3;
  return std::nullopt;
}

std::vector<int> FunctionSymbol::args() const {
  std::vector<int> r;
  for (int c = 0; c < 4; ++c)
    if (argmask & (1u << c)) r.push_back(c);
  return r;
}

std::string render_atom_name(const FunctionSymbol& f, std::array<std::uint8_t, 4> derivs) {
  std::string s = f.name;
  bool any = false;
  for (int c = 0; c < 4; ++c)
    for (int k = 0; k < derivs[c]; ++k) {
      s += any ? "," : "_{";
      s += coord_name(c);
      any = true;
    }
  if (any) s += "}";
  s += "(";
  bool first = true;
  for (int c : f.args()) {
    if (!first) s += ",";
    s += coord_name(c);
    first = false;
  }
  s += ")";
  return s;
}

}  // namespace vsw
