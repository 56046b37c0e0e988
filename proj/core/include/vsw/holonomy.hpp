#pragma once

#include <optional>
#include <string>
#include <vector>

#include "vsw/frame.hpp"
#include "vsw/walker.hpp"

namespace vsw {

// Antisymmetric F^{ab}.
struct Bivector {
  Matrix4 up;

  static Bivector wedge(const Vector4& p, const Vector4& q);  // p^a q^b - q^a p^b
  Bivector operator+(const Bivector& o) const;
  Bivector operator-(const Bivector& o) const;
  Bivector operator*(const Expr& s) const;
  bool is_zero() const;
  bool is_antisymmetric() const;

  Matrix4 lower(const TensorField& g) const;        // F_ab
  Matrix4 endomorphism(const TensorField& g) const;  // F^a_b
  static Bivector from_lower(const Matrix4& f, const TensorField& ginv);
  static Bivector from_endomorphism(const Matrix4& e, const TensorField& ginv);
};

// Matrix rank (0, 2 or 4) over the field of rational functions.
int bivector_rank(const Bivector& F);

// P(F, G) = F_ab G^ab
Expr p_metric(const Bivector& F, const Bivector& G, const TensorField& g);
// F*^{ab} = 1/2 eps^{ab}_{cd} F^{cd} with eps_{uvUV} = orientation sqrt|det g|
Bivector dual(const Bivector& F, const TensorField& g, int orientation = 1);
std::pair<Bivector, Bivector> self_dual_split(const Bivector& F, const TensorField& g, int orientation = 1);

// From frame vectors (l, n, L, N) = (l1, n1, l2, n2).
struct FGBasis {
  std::array<Bivector, 3> F;
  std::array<Bivector, 3> G;
  std::array<Bivector, 6> all() const { return {F[0], F[1], F[2], G[0], G[1], G[2]}; }
};
FGBasis fg_basis(const std::array<Vector4, 4>& walker_vectors);
// Orientation under which the F_i are self-dual for this frame.
int self_dual_orientation(const FGBasis& b, const TensorField& g);
// Coordinates of F in the FG basis (6 entries, F1..F3, G1..G3).
std::optional<std::array<Expr, 6>> fg_coordinates(const Bivector& F, const FGBasis& b, const TensorField& g);

// Coefficients of a two-form on l1^n1, l1^l2, l1^n2, n1^l2, n1^n2, l2^n2 (Walker coframe wedges).
std::array<Expr, 6> coframe_wedge_coefficients(const Matrix4& f_lower, const std::array<Vector4, 4>& walker_vectors);

struct CurvatureGenerator {
  std::string label;  // e.g. "R(l1,n1)", "dR(l1,n1;n2)"
  Matrix4 endo;       // R^a_{bcd} X^c Y^d
};

// R^a_{bcd} X^c Y^d over the six frame pairs, then the derivative contractions up to the requested order.
std::vector<CurvatureGenerator> curvature_endomorphisms(const Geometry& geo, const std::array<Vector4, 4>& walker_vectors,
                                                        int include_derivatives);

enum class HolonomyClass { Trivial, A9, A10, A17, A26, Other };
std::string to_string(HolonomyClass c);

struct HolonomyAlgebra {
  std::vector<Matrix4> basis;  // endomorphisms, reduced
  int dimension = 0;
  HolonomyClass label = HolonomyClass::Other;
  std::string label_text;
  // Each basis element written in the FG basis built from the Walker frame.
  std::vector<std::array<Expr, 6>> certificate;
  std::vector<std::string> notes;
  bool closed = false;
};

// Span of the generators, closed under the commutator.
HolonomyAlgebra lie_closure(const std::vector<Matrix4>& gens);
// Whether m lies in the span of the basis.
bool in_span(const HolonomyAlgebra& alg, const Matrix4& m);
void classify(HolonomyAlgebra& alg, const TensorField& g, const std::array<Vector4, 4>& walker_vectors);

// Full pipeline for a spec.
HolonomyAlgebra holonomy(const WalkerSpec& s, int include_derivatives = 0);

struct CommonEigenvector {
  int frame_index;           // 0..3 = l1, n1, l2, n2
  std::vector<Expr> values;  // eigenvalue under each basis element
};

// Frame vectors that are eigenvectors of every basis element; directions sharing all eigenvalues span a
// subspace of common eigenvectors.
std::vector<CommonEigenvector> common_eigenvectors(const HolonomyAlgebra& alg, const std::array<Vector4, 4>& walker_vectors);

struct RecurrenceResult {
  bool recurrent = false;
  Vector4 omega;  // one-form
  bool parallel() const;
};

// nabla X = X (x) omega
RecurrenceResult verify_recurrent(const Vector4& x_up, const Geometry& geo);

struct RecurrentFamily {
  Expr f;  // d_v + f d_V
  Expr h;  // h d_v + d_V
  Expr h_reciprocal;  // 1/f
  Expr residual0;
  Expr residual1;
};

// alpha != 0: tanh family; alpha == 0: logarithmic family. Throws SpecError when the constants are not Ricci-flat.
RecurrentFamily recurrent_family_example1(const Expr& k0, const Example1Constants& c);

// Rank of the commutator closure of the generators evaluated at a point.
int numeric_dimension(const std::vector<Matrix4>& gens, const NumericEnv& env, double tol = 1e-8);

}  // namespace vsw
