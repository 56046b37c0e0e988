#pragma once

#include <array>
#include <string>
#include <vector>

#include "vsw/tensor.hpp"
#include "vsw/walker.hpp"

namespace vsw {

// Walker coframe l1 = du, n1 = dv + A du + C/2 dU, l2 = dU, n2 = dV + C/2 du + B dU.
struct NullFrame {
  std::array<Vector4, 4> forms;    // (l1, n1, l2, n2), covariant components
  std::array<Vector4, 4> vectors;  // the same four raised with g^{ab}
  int orientation = 1;
};

NullFrame coframe_from_walker(const WalkerSpec& s);
// l1.n1 = l2.n2 = 1, every other pairing zero.
bool frame_is_null(const NullFrame& f, const TensorField& ginv);
// g = 2 l1 (.) n1 + 2 l2 (.) n2
bool reconstructs_metric(const NullFrame& f, const TensorField& g);

// Tetrad in the labels used by the spin coefficients. Index 0..3 = l, n, m, mt with
// l.n = 1, m.mt = -1 and all other products zero.
enum Label : int { kL = 0, kN = 1, kM = 2, kMt = 3 };

struct Tetrad {
  std::array<Vector4, 4> forms;
  std::array<Vector4, 4> vectors;
};

// {l, n, m, mt} = {l2, n2, -l1, n1}
Tetrad calibrated_tetrad(const NullFrame& f);
Tetrad calibrated_tetrad(const WalkerSpec& s);
Tetrad tetrad_from_forms(const std::array<Vector4, 4>& forms, const TensorField& ginv);
// Pairing matrix of the labels: eta(l,n) = 1, eta(m,mt) = -1.
int label_pairing(int a, int b);

// T[a][b][c] = a^i c^j nabla_j b_i
using RotationCoefficients = std::array<std::array<std::array<Expr, 4>, 4>, 4>;

RotationCoefficients rotation_coefficients(const Tetrad& t, const Geometry& geo);

enum class Spin : int {
  kappa, rho, sigma, tau, kappa_t, rho_t, sigma_t, tau_t,
  eps, gamma, alpha, beta, eps_t, gamma_t, alpha_t, beta_t,
  kappa_p, rho_p, sigma_p, tau_p, kappa_tp, rho_tp, sigma_tp, tau_tp,
  eps_p, gamma_p, alpha_p, beta_p, eps_tp, gamma_tp, alpha_tp, beta_tp,
};
inline constexpr int kSpinCount = 32;

// "kappa", "kappa~", "kappa'", "kappa~'" ...
std::string spin_name(Spin s);
Spin spin_from_name(const std::string& name);
Spin spin_prime(Spin s);
const std::vector<Spin>& all_spins();

struct SpinCoefficientTable {
  std::array<Expr, kSpinCount> values;
  // Frame vectors (l, n, m, mt) the table was computed in; needed for the frame derivatives
  // that appear in the transformation laws.
  std::array<Vector4, 4> vectors;

  Expr& operator[](Spin s) { return values[static_cast<int>(s)]; }
  const Expr& operator[](Spin s) const { return values[static_cast<int>(s)]; }
  Expr& operator[](const std::string& n) { return (*this)[spin_from_name(n)]; }
  const Expr& operator[](const std::string& n) const { return (*this)[spin_from_name(n)]; }
};

struct FrameError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

SpinCoefficientTable table_from_rotation(const RotationCoefficients& T, const std::array<Vector4, 4>& vectors);
RotationCoefficients rotation_from_table(const SpinCoefficientTable& t);
SpinCoefficientTable spin_coefficients(const Tetrad& t, const Geometry& geo);
SpinCoefficientTable spin_coefficients(const WalkerSpec& s);

// eps = -gamma', alpha = beta', beta = alpha', gamma = -eps' and the tilded copies.
std::vector<std::pair<std::string, Expr>> law_relations(const SpinCoefficientTable& t);
bool law_relations_hold(const SpinCoefficientTable& t);

enum class FrameOp { D, Delta, delta, Dprime };
// D along l, D' along n, delta along m, Delta along mt.
Expr frame_derivative(FrameOp op, const Expr& e, const std::array<Vector4, 4>& vectors);
Expr frame_derivative(FrameOp op, const Expr& e, const SpinCoefficientTable& t);

// Frame change e'_a = M[a][i] e_i on the label basis.
using LabelMatrix = std::array<std::array<Expr, 4>, 4>;
LabelMatrix boost_matrix(const Expr& A, const Expr& B);
LabelMatrix null_rotation_l_matrix(const Expr& mu, const Expr& mu_t);
LabelMatrix null_rotation_n_matrix(const Expr& mu, const Expr& mu_t);

Tetrad transform_tetrad(const Tetrad& t, const LabelMatrix& M);
// Transformation law applied to the table alone (no metric, no Christoffel symbols).
SpinCoefficientTable transform_table(const SpinCoefficientTable& t, const LabelMatrix& M);

// {n, l, mt, m} -> {A n, l/A, B mt, m/B}
SpinCoefficientTable apply_boost(const SpinCoefficientTable& t, const Expr& A, const Expr& B);
// {n, l, mt, m} -> {n + mu~ mt - mu m - mu mu~ l, l, mt - mu l, m + mu~ l}
SpinCoefficientTable apply_null_rotation_l(const SpinCoefficientTable& t, const Expr& mu, const Expr& mu_t);
// prime . l-rotation(-mu, -mu~) . prime
SpinCoefficientTable apply_null_rotation_n(const SpinCoefficientTable& t, const Expr& mu, const Expr& mu_t);

// l <-> n, m -> -mt, mt -> -m; exchanges every coefficient with its primed partner.
SpinCoefficientTable prime(const SpinCoefficientTable& t);

// Signed relabeling: new frame vector a = sign[a] * old vector target[a].
struct DiscretePerm {
  std::array<int, 4> target{0, 1, 2, 3};
  std::array<int, 4> sign{1, 1, 1, 1};
};
bool admissible(const DiscretePerm& p);
// Every signed relabeling that maps null pairs to null pairs and keeps the pairings (32).
std::vector<DiscretePerm> admissible_perms();
DiscretePerm cross_swap();  // l -> m, m -> l, n -> -mt, mt -> -n
DiscretePerm prime_perm();
SpinCoefficientTable apply_discrete(const SpinCoefficientTable& t, const DiscretePerm& p);
Tetrad apply_discrete(const Tetrad& t, const DiscretePerm& p);

// Frame components R(e_a, e_b, e_c, e_d) of a fully covariant tensor in the tetrad.
TensorField frame_components(const TensorField& t_lower, const std::array<Vector4, 4>& vectors);

}  // namespace vsw
