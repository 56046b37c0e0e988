#include <algorithm>
#include <cctype>

#include "kernel.hpp"

namespace vsw {

ParseError::ParseError(std::size_t off, const std::string& msg)
    : std::runtime_error("offset " + std::to_string(off) + ": " + msg), offset(off) {}

void Context::declare_function(const std::string& name, std::initializer_list<int> args) {
  declare_function(name, std::vector<int>(args));
}

void Context::declare_function(const std::string& name, const std::vector<int>& args) {
  FunctionSymbol f{name, 0};
  for (int c : args) f.argmask |= static_cast<std::uint8_t>(1u << c);
  functions[name] = f;
}

void Context::declare_constant(const std::string& name) {
  if (!has_constant(name)) constants.push_back(name);
}

bool Context::has_constant(const std::string& name) const {
  return std::find(constants.begin(), constants.end(), name) != constants.end();
}

namespace {

const char* kBuiltins[] = {"exp", "log", "tanh", "sqrt", "abs", "diff"};

bool is_builtin(const std::string& s) {
  return std::any_of(std::begin(kBuiltins), std::end(kBuiltins), [&](const char* b) { return s == b; });
}

class Parser {
 public:
  Parser(const std::string& s, const Context& ctx) : s_(s), ctx_(ctx) {}

  Expr run() {
    skip();
    if (pos_ == s_.size()) throw ParseError(pos_, "empty expression");
    Expr e = sum();
    skip();
    if (pos_ != s_.size()) throw ParseError(pos_, std::string("unexpected '") + s_[pos_] + "'");
    return e;
  }

 private:
  const std::string& s_;
  const Context& ctx_;
  std::size_t pos_ = 0;

  void skip() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }

  bool eat(char c) {
    skip();
    if (pos_ < s_.size() && s_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  void expect(char c) {
    if (!eat(c)) {
      skip();
      throw ParseError(pos_, std::string("expected '") + c + "'");
    }
  }

  std::string ident() {
    skip();
    std::size_t start = pos_;
    if (pos_ >= s_.size() || !std::isalpha(static_cast<unsigned char>(s_[pos_]))) throw ParseError(pos_, "expected identifier");
    while (pos_ < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_')) {
      // stop before a derivative suffix "_{"
      if (s_[pos_] == '_' && pos_ + 1 < s_.size() && s_[pos_ + 1] == '{') break;
      ++pos_;
    }
    return s_.substr(start, pos_ - start);
  }

  int coord() {
    skip();
    std::size_t at = pos_;
    std::string id = ident();
    auto c = coord_from_name(id);
    if (!c) throw ParseError(at, "expected coordinate, got '" + id + "'");
    return *c;
  }

  Expr sum() {
    Expr acc = product();
    for (;;) {
      if (eat('+'))
        acc += product();
      else if (eat('-'))
        acc -= product();
      else
        return acc;
    }
  }

  Expr product() {
    Expr acc = unary();
    for (;;) {
      skip();
      std::size_t at = pos_;
      if (eat('*')) {
        acc *= unary();
      } else if (eat('/')) {
        Expr d = unary();
        if (d.is_zero()) throw ParseError(at, "division by zero");
        acc /= d;
      } else {
        return acc;
      }
    }
  }

  Expr unary() {
    if (eat('-')) return -unary();
    if (eat('+')) return unary();
    return power();
  }

  Expr power() {
    Expr base = primary();
    skip();
    if (!eat('^')) return base;
    skip();
    std::size_t at = pos_;
    Expr ex = unary();
    auto q = ex.as_rational();
    if (!q) throw ParseError(at, "exponent must be a rational constant");
    if (!q->get_num().fits_slong_p() || !q->get_den().fits_slong_p()) throw ParseError(at, "exponent too large");
    try {
      return pow(base, Q(q->get_num().get_si(), q->get_den().get_si()));
    } catch (const DomainError& e) {
      throw ParseError(at, e.what());
    }
  }

  Expr number() {
    std::size_t start = pos_;
    while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    std::string digits = s_.substr(start, pos_ - start);
    mpz_class den = 1;
    if (pos_ < s_.size() && s_[pos_] == '.') {
      ++pos_;
      while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) {
        digits += s_[pos_++];
        den *= 10;
      }
    }
    mpq_class q(mpz_class(digits), den);
    q.canonicalize();
    return Expr(q);
  }

  std::array<std::uint8_t, 4> deriv_suffix(const FunctionSymbol& f) {
    std::array<std::uint8_t, 4> d{0, 0, 0, 0};
    if (!(pos_ + 1 < s_.size() && s_[pos_] == '_' && s_[pos_ + 1] == '{')) return d;
    pos_ += 2;
    do {
      skip();
      std::size_t at = pos_;
      int c = coord();
      if (!(f.argmask & (1u << c))) throw ParseError(at, "derivative with respect to a non-argument of " + f.name);
      ++d[c];
    } while (eat(','));
    expect('}');
    return d;
  }

  void arg_list(const FunctionSymbol& f) {
    skip();
    std::size_t at = pos_;
    if (!eat('(')) return;
    std::uint8_t mask = 0;
    int last = -1;
    if (!eat(')')) {
      do {
        int c = coord();
        if (c <= last) throw ParseError(at, "arguments of " + f.name + " must follow u,v,U,V order");
        last = c;
        mask |= static_cast<std::uint8_t>(1u << c);
      } while (eat(','));
      expect(')');
    }
    if (mask != f.argmask) throw ParseError(at, "argument list of " + f.name + " does not match its declaration");
  }

  Expr builtin(const std::string& name, std::size_t at) {
    expect('(');
    if (name == "diff") {
      Expr e = sum();
      int n = 0;
      while (eat(',')) {
        e = diff(e, coord());
        ++n;
      }
      if (n == 0) throw ParseError(at, "diff needs at least one coordinate");
      expect(')');
      return e;
    }
    Expr a = sum();
    expect(')');
    try {
      if (name == "exp") return exp(a);
      if (name == "log") return log(a);
      if (name == "tanh") return tanh(a);
      if (name == "sqrt") return sqrt(a);
      return abs(a);
    } catch (const DomainError& e) {
      throw ParseError(at, e.what());
    }
  }

  Expr primary() {
    skip();
    if (pos_ >= s_.size()) throw ParseError(pos_, "unexpected end of input");
    char ch = s_[pos_];
    if (std::isdigit(static_cast<unsigned char>(ch)) || ch == '.') return number();
    if (ch == '(') {
      ++pos_;
      Expr e = sum();
      expect(')');
      return e;
    }
    if (!std::isalpha(static_cast<unsigned char>(ch))) throw ParseError(pos_, std::string("unexpected '") + ch + "'");
    std::size_t at = pos_;
    std::string id = ident();
    if (is_builtin(id)) {
      skip();
      if (pos_ < s_.size() && s_[pos_] == '(') return builtin(id, at);
      throw ParseError(at, id + " needs an argument");
    }
    if (auto fit = ctx_.functions.find(id); fit != ctx_.functions.end()) {
      auto d = deriv_suffix(fit->second);
      arg_list(fit->second);
      return Expr::function(fit->second, d);
    }
    if (auto c = coord_from_name(id)) return Expr::coordinate(*c);
    if (ctx_.has_constant(id)) return Expr::constant(id);
    throw SymbolError("undeclared symbol '" + id + "' at offset " + std::to_string(at));
  }
};

}  // namespace

Expr parse(const std::string& text, const Context& ctx) { return Parser(text, ctx).run(); }

std::string render(const Expr& e) {
  const auto& r = e.raw();
  std::string num = detail::render_poly(r.num);
  if (r.den.empty()) return num;
  bool simple = r.num.size() == 1 && r.num[0].c > 0;
  std::string out = simple ? num : "(" + num + ")";
  for (auto& f : r.den) {
    out += "/(" + detail::render_poly(f.first) + ")";
    if (f.second != 1) out += "^" + std::to_string(f.second);
  }
  return out;
}

}  // namespace vsw
