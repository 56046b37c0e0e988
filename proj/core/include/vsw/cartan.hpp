#pragma once

#include <optional>
#include <string>
#include <vector>

#include "vsw/frame.hpp"
#include "vsw/holonomy.hpp"
#include "vsw/walker.hpp"

namespace vsw {

struct CartanError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// One fixed component of the curvature: R(e_a, e_b, e_c, e_d) in the calibrated tetrad.
struct FixedComponent {
  std::array<int, 4> slots;
  Expr before;  // value in the calibrated tetrad
  Expr after;   // value after the boost
};

struct ZerothOrderFix {
  Expr z1;  // boost of the (l, n) pair: l -> l / z1, n -> z1 n
  Expr z2;  // boost of the (m, mt) pair: m -> m / z2, mt -> z2 mt
  std::vector<FixedComponent> fixed;
  bool reduced = false;  // only one boost could be fixed
  std::string note;
};

// Requires a constant representative in each weight class (CartanError otherwise).
// Boosts two curvature components of independent boost weight to +-1 (sign chosen so the roots stay real).
// A single weight class (Psi = 0) gives a reduced fix; flat curvature gives the identity.
ZerothOrderFix fix_zeroth_order(const WalkerSpec& spec);

struct Invariant {
  std::string name;
  Expr value;
};

struct FunctionalRank {
  int rank = 0;
  bool symbolic = true;       // decided by the symbolic Jacobian
  std::vector<int> numeric;   // rank at each evaluation point
  bool inconclusive = false;
};

// Rank of d(invariant)/d(coordinate). The numeric points are fixed by the seed.
FunctionalRank functionally_independent_count(const std::vector<Expr>& invariants, unsigned seed = 7);

// Linearized so(2,2) action on tetrad components. Generators, in order: boost (l,n), boost (m,mt),
// rotations about l (mu, mu~), rotations about n (mu, mu~).
inline constexpr int kLorentzDim = 6;
const std::array<std::string, kLorentzDim>& lorentz_generator_names();
LabelMatrix lorentz_generator(int k);

struct IsotropyResult {
  int dimension = kLorentzDim;
  std::vector<std::string> kernel;  // kernel vectors in the generator basis, rendered
};

// Stabilizer dimension of a list of tensors given by their tetrad components.
IsotropyResult isotropy(const std::vector<TensorField>& frame_tensors);

struct CartanOrder {
  int q = 0;
  std::vector<Invariant> invariants;  // new at this order
  int t = 0;                          // functionally independent count, orders 0..q
  int isotropy_dim = kLorentzDim;
  std::vector<std::string> isotropy_kernel;
  std::vector<std::string> notes;
};

struct CartanState {
  WalkerSpec spec;
  Geometry geo;
  ZerothOrderFix fix;
  Tetrad frame;                        // boosted tetrad
  SpinCoefficientTable table;          // spin coefficients in the boosted tetrad
  std::vector<TensorField> curvature;  // tetrad components of R, grad R, ...
  std::vector<CartanOrder> orders;
  unsigned seed = 7;
};

CartanState cartan_begin(const WalkerSpec& spec, unsigned seed = 7);
// Boosted spin coefficients that are nonzero among the sixteen the rotations cannot remove.
CartanOrder first_order_invariants(CartanState& state);
CartanState cartan_step(const CartanState& state);

struct CartanReport {
  std::string spec_name;
  std::string status;  // "terminated", "bound exceeded", "zeroth order unavailable: ..."
  int terminal_order = -1;
  std::vector<CartanOrder> orders;
  std::string holonomy_label;
  int holonomy_dim = 0;
  ZerothOrderFix fix;
  std::vector<std::string> bound_audit;
  bool monotone = true;

  bool terminated() const { return status == "terminated"; }
};

CartanReport run(const WalkerSpec& spec, int max_order = 7, unsigned seed = 7);

struct Verdict {
  bool distinguished = false;
  std::string label;  // what distinguished them, or empty
  int compatible_order = -1;
  std::string text() const;
};

// Necessary-condition comparison of two reports.
Verdict compare(const CartanReport& a, const CartanReport& b, unsigned seed = 7);

// Stable key-value text with nested lists.
std::string serialize(const CartanReport& r);

}  // namespace vsw
