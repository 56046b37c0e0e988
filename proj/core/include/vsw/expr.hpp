#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <gmpxx.h>

namespace vsw {

// Coordinates of the Walker chart, in this order everywhere.
enum Coord : int { u = 0, v = 1, U = 2, V = 3 };
inline constexpr int kDim = 4;

const char* coord_name(int c);
std::optional<int> coord_from_name(const std::string& s);

// Exact rational exponent.
struct Q {
  std::int64_t n = 0;
  std::int64_t d = 1;

  Q() = default;
  Q(std::int64_t num, std::int64_t den = 1);

  bool is_integer() const { return d == 1; }
  bool is_zero() const { return n == 0; }
  std::int64_t floor() const;
  std::string str() const;

  friend Q operator+(Q a, Q b);
  friend Q operator-(Q a, Q b);
  friend Q operator*(Q a, Q b);
  friend Q operator-(Q a) { return Q(-a.n, a.d); }
  friend bool operator==(Q a, Q b) { return a.n == b.n && a.d == b.d; }
  friend bool operator!=(Q a, Q b) { return !(a == b); }
  friend bool operator<(Q a, Q b);
};

namespace detail {
struct RatFn;
struct Atom;
}

class Expr;

struct FunctionSymbol {
  std::string name;
  std::uint8_t argmask = 0;  // bit c set iff coordinate c is an argument
  std::vector<int> args() const;
};

class Expr {
 public:
  Expr();
  Expr(long n);  // NOLINT
  explicit Expr(const mpq_class& q);

  static Expr rational(long p, long q);
  static Expr coordinate(int c);
  static Expr constant(const std::string& name);
  static Expr function(const FunctionSymbol& f, std::array<std::uint8_t, 4> derivs = {0, 0, 0, 0});
  static Expr function(const std::string& name, std::initializer_list<int> args);

  bool is_zero() const;
  bool is_rational() const;
  std::optional<mpq_class> as_rational() const;
  bool is_polynomial() const;  // no non-monomial denominator
  bool is_monomial() const;
  std::size_t term_count() const;
  bool depends_on(int c) const;

  // Structural comparison of canonical forms; a total order used for interning.
  int compare(const Expr& o) const;
  // Mathematical equality: structural match or a difference that cancels to zero.
  friend bool operator==(const Expr& a, const Expr& b) { return a.compare(b) == 0 || (a - b).is_zero(); }
  friend bool operator!=(const Expr& a, const Expr& b) { return !(a == b); }
  friend bool operator<(const Expr& a, const Expr& b) { return a.compare(b) < 0; }

  friend Expr operator+(const Expr& a, const Expr& b);
  friend Expr operator-(const Expr& a, const Expr& b);
  friend Expr operator*(const Expr& a, const Expr& b);
  friend Expr operator/(const Expr& a, const Expr& b);
  friend Expr operator-(const Expr& a);
  Expr& operator+=(const Expr& o);
  Expr& operator-=(const Expr& o);
  Expr& operator*=(const Expr& o);
  Expr& operator/=(const Expr& o);

  const detail::RatFn& raw() const { return *p_; }
  explicit Expr(std::shared_ptr<const detail::RatFn> p) : p_(std::move(p)) {}

 private:
  std::shared_ptr<const detail::RatFn> p_;
};

Expr pow(const Expr& e, Q exponent);
Expr pow(const Expr& e, long k);
Expr exp(const Expr& e);
Expr log(const Expr& e);
Expr tanh(const Expr& e);
Expr sqrt(const Expr& e);
Expr abs(const Expr& e);

Expr diff(const Expr& e, int coord);
Expr diff(const Expr& e, int coord, int times);
Expr canonicalize(const Expr& e);
bool is_zero(const Expr& e);

// Numerator and denominator as separate expressions (denominator is 1 when polynomial).
Expr numerator(const Expr& e);
Expr denominator(const Expr& e);

// Coefficient of coordinate power c^k when e is polynomial in c (other atoms treated as coefficients).
Expr coefficient(const Expr& e, int c, int k);
int degree_in(const Expr& e, int c);

struct ParseError : std::runtime_error {
  std::size_t offset;
  ParseError(std::size_t off, const std::string& msg);
};

struct SymbolError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct DomainError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Context {
  std::map<std::string, FunctionSymbol> functions;
  std::vector<std::string> constants;

  void declare_function(const std::string& name, std::initializer_list<int> args);
  void declare_function(const std::string& name, const std::vector<int>& args);
  void declare_constant(const std::string& name);
  bool has_constant(const std::string& name) const;
};

Expr parse(const std::string& text, const Context& ctx);
std::string render(const Expr& e);
std::string render_atom_name(const FunctionSymbol& f, std::array<std::uint8_t, 4> derivs);

struct Bindings {
  std::map<int, Expr> coords;
  std::map<std::string, Expr> constants;
  std::map<std::string, Expr> functions;  // by symbol name; derivatives follow by differentiation
  std::map<std::string, Expr> instances;  // by rendered instance, e.g. "B02_{u}(u,U)"
  bool empty() const { return coords.empty() && constants.empty() && functions.empty() && instances.empty(); }
};

Expr substitute(const Expr& e, const Bindings& b);

struct NumericEnv {
  std::array<double, 4> point{0, 0, 0, 0};
  std::map<std::string, double> constants;
  std::map<std::string, double> instances;
  // Fallback for function instances not listed in `instances`.
  std::function<double(const std::string& name, std::array<std::uint8_t, 4> derivs, const std::array<double, 4>& x)> func;
};

double eval_numeric(const Expr& e, const NumericEnv& env);

// Atoms appearing in e (function instances and constants), rendered.
std::vector<std::string> function_instances(const Expr& e);
std::vector<std::string> constants_in(const Expr& e);

}  // namespace vsw
