#pragma once

#include <array>
#include <string>
#include <utility>
#include <vector>

#include "vsw/expr.hpp"

namespace vsw {

enum class Slot : std::uint8_t { Up, Down };

// Dense 4^rank component array.
class TensorField {
 public:
  TensorField() = default;
  explicit TensorField(std::vector<Slot> valence);

  int rank() const { return static_cast<int>(valence_.size()); }
  const std::vector<Slot>& valence() const { return valence_; }
  std::size_t size() const { return comps_.size(); }

  Expr& operator[](std::size_t flat) { return comps_[flat]; }
  const Expr& operator[](std::size_t flat) const { return comps_[flat]; }
  Expr& at(std::initializer_list<int> idx);
  const Expr& at(std::initializer_list<int> idx) const;
  Expr& at(const std::vector<int>& idx);
  const Expr& at(const std::vector<int>& idx) const;

  static std::size_t flat(const std::vector<int>& idx);
  std::vector<int> unflat(std::size_t i) const;

  bool is_zero() const;
  std::vector<std::vector<int>> nonzero_indices() const;

 private:
  std::vector<Slot> valence_;
  std::vector<Expr> comps_;
};

struct DegenerateMetric : std::runtime_error {
  using std::runtime_error::runtime_error;
};

using Matrix4 = std::array<std::array<Expr, 4>, 4>;
using Vector4 = std::array<Expr, 4>;

TensorField metric_tensor(const Matrix4& g);
Expr determinant(const TensorField& g);
TensorField inverse_metric(const TensorField& g);
TensorField christoffel(const TensorField& g, const TensorField& ginv);

// Everything derived from a metric, computed once.
struct Geometry {
  TensorField g;
  TensorField ginv;
  TensorField gamma;       // Gamma^a_{bc}
  TensorField riemann_up;  // R^a_{bcd}
  TensorField riemann;     // R_{abcd}
  TensorField ricci;       // R_{ab} = R^c_{acb}
  Expr scalar;

  static Geometry compute(const TensorField& g);
};

TensorField christoffel(const TensorField& g);
TensorField riemann(const TensorField& g);
TensorField ricci(const TensorField& g);
Expr ricci_scalar(const TensorField& g);

// Ricci as g^{cd} R_{cadb}; a second contraction route used as a cross-check.
TensorField ricci_from_lowered(const Geometry& geo);

// Appends the derivative index last: (nabla T)_{...;e}.
TensorField covariant_derivative(const TensorField& t, const Geometry& geo);
TensorField partial_derivative(const TensorField& t);

TensorField raise(const TensorField& t, int slot, const TensorField& ginv);
TensorField lower(const TensorField& t, int slot, const TensorField& g);
TensorField raise_all(const TensorField& t, const TensorField& ginv);
TensorField contract(const TensorField& t, int i, int j);
TensorField tensor_product(const TensorField& a, const TensorField& b);
TensorField add(const TensorField& a, const TensorField& b);
TensorField scale(const TensorField& a, const Expr& s);
TensorField simplify(const TensorField& t);
// Sum over all indices of a_{...} b^{...}, with a and b both fully covariant.
Expr full_contraction(const TensorField& a, const TensorField& b, const TensorField& ginv);

// Vector and one-form helpers.
TensorField vector_field(const Vector4& comps);
TensorField one_form(const Vector4& comps);
Vector4 lower_vector(const Vector4& v, const TensorField& g);
Vector4 raise_form(const Vector4& w, const TensorField& ginv);
Expr inner(const Vector4& a, const Vector4& b, const TensorField& g);
Expr apply_vector(const Vector4& x, const Expr& f);  // x^a d_a f

using InvariantList = std::vector<std::pair<std::string, Expr>>;

// Fixed generating list of polynomial curvature invariants up to the given derivative order (0, 1 or 2).
InvariantList scalar_invariants(const Geometry& geo, int max_deriv_order);
std::vector<std::string> invariant_labels(int max_deriv_order);

// Frame components of a fully covariant tensor against frame vectors (l1, n1, l2, n2).
struct BoostWeightEntry {
  std::vector<int> slots;  // 0=l1, 1=n1, 2=l2, 3=n2
  int b1 = 0;              // #l1 - #n1
  int b2 = 0;              // #l2 - #n2
  Expr value;
};

std::vector<BoostWeightEntry> boost_weights(const TensorField& t_lower, const std::array<Vector4, 4>& frame_vectors);
// Every nonzero component has b1 <= 0, b2 <= 0 and (b1, b2) != (0, 0).
bool n_property(const std::vector<BoostWeightEntry>& entries);
std::string frame_slot_name(int s);

// Symmetry checks used by tests and the acceptance suite.
bool riemann_symmetries_hold(const TensorField& r_lower);
bool bianchi_first_holds(const TensorField& r_lower);
bool bianchi_second_holds(const TensorField& nabla_r_lower);

}  // namespace vsw
