#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "vsw/expr.hpp"
#include "vsw/tensor.hpp"

namespace vsw {

// Coefficient keys of A, B, C:
//   A = v A1 + V A2 + A0
//   B = V (B10 + v B11) + B00 + v B01 + v^2 B02 + v^3 B03
//   C = v C11 + V C2 + C0
extern const std::vector<std::string> kWalkerKeys;

struct WalkerSpec {
  std::string name;
  Context ctx;
  std::map<std::string, Expr> coeffs;
  std::map<std::string, std::string> flags;
  std::map<std::string, std::map<std::string, std::string>> branches;  // name -> key -> expression text

  Expr coeff(const std::string& key) const;
  Expr A() const;
  Expr B() const;
  Expr C() const;
  TensorField metric() const;
  Geometry geometry() const;
  // Walker-family shape check: A, C linear in v, V; B linear in V with the listed v powers.
  bool in_family() const;
};

struct SpecError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Text format: [coordinates] [functions] [constants] [metric] [flags] and optional [branch NAME] sections.
WalkerSpec parse_spec(const std::string& text, const std::string& name = "");
WalkerSpec load_spec(const std::string& path);
// Re-evaluates the metric keys with the branch overrides applied (in order).
WalkerSpec apply_branches(const WalkerSpec& spec, const std::vector<std::string>& branch_names);

struct Example1Constants {
  Expr a, alpha, beta, c1, c2, d;
  static Example1Constants symbolic();
  // a = alpha d / c1, beta = 2 c2 alpha / c1
  static Example1Constants ricci_flat();
};

WalkerSpec build_example1(const Example1Constants& c);
Context example1_context();
// (beta c1 - 2 alpha c2) + (2 a c1 + beta d - 2 c2 a - 2 alpha d) u U, over 2 u U.
Expr example1_ricci13_reference(const Example1Constants& c);

// One solution branch of a polynomial system in the constants.
struct ConstantBranch {
  std::vector<std::pair<std::string, Expr>> assignments;
  std::vector<Expr> nonzero;     // assumed along the way
  std::vector<Expr> unresolved;  // equations of degree > 1 in every constant
  std::string text() const;
  Bindings bindings() const;
};

// Coefficients of every coordinate monomial in the numerators of the residuals.
std::vector<Expr> constant_conditions(const std::vector<Expr>& residuals);
// Case split: a constant factor x gives x = 0 or (x != 0, rest = 0); otherwise the first constant in
// priority order that enters linearly is solved for, splitting on its coefficient.
std::vector<ConstantBranch> solve_constant_conditions(const std::vector<Expr>& eqs,
                                                      const std::vector<std::string>& priority,
                                                      const std::vector<Expr>& nonzero = {});
// Every assignment of b holds after substituting the assignments of a.
bool branch_implies(const ConstantBranch& a, const ConstantBranch& b);
bool branches_equivalent(const ConstantBranch& a, const ConstantBranch& b);

// Ricci-flat branches of Example 1 with symbolic constants, for c1 = 0 or c1 != 0.
std::vector<ConstantBranch> example1_constant_branches(bool c1_zero);

struct Example2Inputs {
  Expr B02, B10, B01, B00, C0, G;
  static Example2Inputs generic(Context& ctx);
};

WalkerSpec build_example2(const Example2Inputs& in, const Context& ctx);

// Index labels used when quoting Example 2 components: label i (1..4) is frame slot slot[i-1]
// (0..3 = l1, n1, l2, n2) scaled by sign[i-1]; every component also carries the overall sign.
struct IndexConvention {
  std::array<int, 4> slot;
  std::array<int, 4> sign;
  int overall = 1;
};
extern const IndexConvention kExample2Labels;

// A1 - C2/2 and B10 - C11/2.
Expr script_a(const WalkerSpec& s);
Expr script_b(const WalkerSpec& s);

// Ricci-flat conditions of the general Walker form, one per independent coefficient of v and V.
// The second reduces to 2 B01,u + (script A) B01 = C11,U + (script B) C11 only when script A = 0 and B02 = 0.
InvariantList ricci_flat_residuals(const WalkerSpec& s);

struct RecurrenceForm {
  bool factorizable = false;
  Vector4 k;  // one-form components
};

// Factor nabla(l1 ^ l2) = (l1 ^ l2) (x) k.
RecurrenceForm invariant_plane_check(const WalkerSpec& s);
RecurrenceForm invariant_plane_check(const Geometry& geo);
Vector4 invariant_plane_reference(const WalkerSpec& s);

struct KinematicScalars {
  Expr norm;       // X_a X^a
  Expr expansion;  // X^a_{;a}
  Expr shear;      // X^{a;b} X_{(a;b)}
  Expr twist;      // X^{a;b} X_{[a;b]}
  Expr omega_sq;   // from (1/2) eps^{abcd} X_b X_{c;d} = omega X^a
  bool omega_proportional = false;
  TensorField geodesic;  // (X^b nabla_b X^a) wedge X, antisymmetric (2,0)
  // Screen projection h_a^c h_b^d X_{c;d}, h = delta - X Y - Y X with Y null and X.Y = 1.
  // In neutral signature the scalar contractions above can all vanish while this does not.
  Vector4 complement;
  TensorField projected;
  Expr screen_expansion;
  Expr screen_shear;  // first nonzero component of the trace-free symmetric part
  Expr screen_twist;  // first nonzero component of the antisymmetric part

  bool geodesic_zero() const { return geodesic.is_zero(); }
  bool expansion_free() const;
  bool shear_free() const;
  bool twist_free() const;
  bool kundt() const;
};

struct NotNull : std::runtime_error {
  using std::runtime_error::runtime_error;
};

KinematicScalars kinematics(const Vector4& x_up, const Geometry& geo);

enum class KundtVerdict { AlongL1, AlongL2, Doubly, NotKundt };
std::string to_string(KundtVerdict v);

struct KundtResult {
  KundtVerdict verdict = KundtVerdict::NotKundt;
  bool a_v_zero = false;   // A,V = 0
  bool b_v_zero = false;   // B,v = B,vv = 0
  std::vector<std::pair<std::string, KinematicScalars>> witnesses;  // "dv", "dV"
  // projection-operator obstruction h_a^c h_b^d X_{c;d} for the gradient witness
  std::vector<std::pair<std::string, Expr>> obstructions;
  bool consistent = false;  // verdict agrees with the witness kinematics
};

KundtResult kundt_classify(const WalkerSpec& s);

// The coordinate frame of the coframe l1 = du, n1 = dv + A du + C/2 dU, l2 = dU, n2 = dV + C/2 du + B dU:
// raised vectors in the order (l1, n1, l2, n2).
std::array<Vector4, 4> walker_frame_vectors(const WalkerSpec& s);

}  // namespace vsw
