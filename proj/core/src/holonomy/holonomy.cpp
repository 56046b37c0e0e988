#include "vsw/holonomy.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>

namespace vsw {

namespace {

using Flat = std::array<Expr, 16>;

Flat flatten(const Matrix4& m) {
  Flat f;
  for (int a = 0; a < 4; ++a)
    for (int b = 0; b < 4; ++b) f[a * 4 + b] = m[a][b];
  return f;
}

Matrix4 matmul(const Matrix4& x, const Matrix4& y) {
  Matrix4 r;
  for (int a = 0; a < 4; ++a)
    for (int k = 0; k < 4; ++k) {
      if (x[a][k].is_zero()) continue;
      for (int b = 0; b < 4; ++b)
        if (!y[k][b].is_zero()) r[a][b] += x[a][k] * y[k][b];
    }
  return r;
}

Matrix4 commutator(const Matrix4& x, const Matrix4& y) {
  Matrix4 p = matmul(x, y), q = matmul(y, x), r;
  for (int a = 0; a < 4; ++a)
    for (int b = 0; b < 4; ++b) r[a][b] = p[a][b] - q[a][b];
  return r;
}

bool matrix_zero(const Matrix4& m) {
  for (auto& row : m)
    for (auto& e : row)
      if (!e.is_zero()) return false;
  return true;
}

// Row echelon form over the rational-function field, pivots normalized to 1.
struct Echelon {
  std::vector<Flat> rows;
  std::vector<int> pivots;

  Flat reduce(Flat v) const {
    for (std::size_t r = 0; r < rows.size(); ++r) {
      const Expr c = v[pivots[r]];
      if (c.is_zero()) continue;
      for (int j = 0; j < 16; ++j)
        if (!rows[r][j].is_zero()) v[j] = v[j] - c * rows[r][j];
    }
    return v;
  }

  bool add(const Flat& v0) {
    Flat v = reduce(v0);
    int p = -1;
    for (int j = 0; j < 16 && p < 0; ++j)
      if (!v[j].is_zero()) p = j;
    if (p < 0) return false;
    Expr inv = Expr(1) / v[p];
    for (auto& e : v) e = e * inv;
    v[p] = Expr(1);
    for (auto& row : rows) {
      const Expr c = row[p];
      if (c.is_zero()) continue;
      for (int j = 0; j < 16; ++j)
        if (!v[j].is_zero()) row[j] = row[j] - c * v[j];
    }
    rows.push_back(v);
    pivots.push_back(p);
    return true;
  }
};

int matrix_rank(std::vector<std::vector<Expr>> m) {
  int rank = 0;
  std::size_t rows = m.size(), cols = rows ? m[0].size() : 0;
  for (std::size_t c = 0; c < cols && rank < static_cast<int>(rows); ++c) {
    std::size_t piv = rows;
    for (std::size_t r = rank; r < rows; ++r)
      if (!m[r][c].is_zero()) {
        piv = r;
        break;
      }
    if (piv == rows) continue;
    std::swap(m[piv], m[rank]);
    for (std::size_t r = rank + 1; r < rows; ++r) {
      if (m[r][c].is_zero()) continue;
      Expr f = m[r][c] / m[rank][c];
      for (std::size_t k = c; k < cols; ++k) m[r][k] = m[r][k] - f * m[rank][k];
    }
    ++rank;
  }
  return rank;
}

Expr volume(const TensorField& g) {
  Expr det = determinant(g);
  return sqrt(sqrt(det * det));
}

int perm_sign(std::array<int, 4> p) {
  int s = 1;
  for (int i = 0; i < 4; ++i)
    for (int j = i + 1; j < 4; ++j) {
      if (p[i] == p[j]) return 0;
      if (p[i] > p[j]) s = -s;
    }
  return s;
}

bool nilpotent(const Matrix4& m) {
  Matrix4 p = m;
  for (int k = 1; k < 4; ++k) p = matmul(p, m);
  return matrix_zero(p);
}

}  // namespace

Bivector Bivector::wedge(const Vector4& p, const Vector4& q) {
  Bivector b;
  for (int a = 0; a < 4; ++a)
    for (int c = 0; c < 4; ++c) b.up[a][c] = p[a] * q[c] - q[a] * p[c];
  return b;
}

Bivector Bivector::operator+(const Bivector& o) const {
  Bivector r;
  for (int a = 0; a < 4; ++a)
    for (int b = 0; b < 4; ++b) r.up[a][b] = up[a][b] + o.up[a][b];
  return r;
}

Bivector Bivector::operator-(const Bivector& o) const { return *this + o * Expr(-1); }

Bivector Bivector::operator*(const Expr& s) const {
  Bivector r;
  for (int a = 0; a < 4; ++a)
    for (int b = 0; b < 4; ++b) r.up[a][b] = up[a][b] * s;
  return r;
}

bool Bivector::is_zero() const { return matrix_zero(up); }

bool Bivector::is_antisymmetric() const {
  for (int a = 0; a < 4; ++a)
    for (int b = a; b < 4; ++b)
      if (up[a][b] != -up[b][a]) return false;
  return true;
}

Matrix4 Bivector::lower(const TensorField& g) const {
  Matrix4 r;
  for (int a = 0; a < 4; ++a)
    for (int b = 0; b < 4; ++b) {
      Expr s;
      for (int c = 0; c < 4; ++c) {
        if (g.at({a, c}).is_zero()) continue;
        for (int d = 0; d < 4; ++d)
          if (!g.at({b, d}).is_zero() && !up[c][d].is_zero()) s += g.at({a, c}) * g.at({b, d}) * up[c][d];
      }
      r[a][b] = s;
    }
  return r;
}

Matrix4 Bivector::endomorphism(const TensorField& g) const {
  Matrix4 r;
  for (int a = 0; a < 4; ++a)
    for (int b = 0; b < 4; ++b)
      for (int c = 0; c < 4; ++c)
        if (!up[a][c].is_zero() && !g.at({c, b}).is_zero()) r[a][b] += up[a][c] * g.at({c, b});
  return r;
}

Bivector Bivector::from_lower(const Matrix4& f, const TensorField& ginv) {
  Bivector r;
  for (int a = 0; a < 4; ++a)
    for (int b = 0; b < 4; ++b) {
      Expr s;
      for (int c = 0; c < 4; ++c) {
        if (ginv.at({a, c}).is_zero()) continue;
        for (int d = 0; d < 4; ++d)
          if (!ginv.at({b, d}).is_zero() && !f[c][d].is_zero()) s += ginv.at({a, c}) * ginv.at({b, d}) * f[c][d];
      }
      r.up[a][b] = s;
    }
  return r;
}

Bivector Bivector::from_endomorphism(const Matrix4& e, const TensorField& ginv) {
  Bivector r;
  for (int a = 0; a < 4; ++a)
    for (int b = 0; b < 4; ++b)
      for (int c = 0; c < 4; ++c)
        if (!e[a][c].is_zero() && !ginv.at({c, b}).is_zero()) r.up[a][b] += e[a][c] * ginv.at({c, b});
  return r;
}

int bivector_rank(const Bivector& F) {
  std::vector<std::vector<Expr>> m(4, std::vector<Expr>(4));
  for (int a = 0; a < 4; ++a)
    for (int b = 0; b < 4; ++b) m[a][b] = F.up[a][b];
  return matrix_rank(m);
}

Expr p_metric(const Bivector& F, const Bivector& G, const TensorField& g) {
  Matrix4 fl = F.lower(g);
  Expr s;
  for (int a = 0; a < 4; ++a)
    for (int b = 0; b < 4; ++b)
      if (!fl[a][b].is_zero() && !G.up[a][b].is_zero()) s += fl[a][b] * G.up[a][b];
  return s;
}

Bivector dual(const Bivector& F, const TensorField& g, int orientation) {
  Expr vol = volume(g) * Expr(orientation);
  Matrix4 low;
  for (int a = 0; a < 4; ++a)
    for (int b = 0; b < 4; ++b) {
      if (a == b) continue;
      Expr s;
      for (int c = 0; c < 4; ++c)
        for (int d = 0; d < 4; ++d) {
          int e = perm_sign({a, b, c, d});
          if (e != 0 && !F.up[c][d].is_zero()) s += Expr(e) * F.up[c][d];
        }
      low[a][b] = s * vol / Expr(2);
    }
  return Bivector::from_lower(low, inverse_metric(g));
}

std::pair<Bivector, Bivector> self_dual_split(const Bivector& F, const TensorField& g, int orientation) {
  Bivector d = dual(F, g, orientation);
  Expr h = Expr::rational(1, 2);
  return {(F + d) * h, (F - d) * h};
}

FGBasis fg_basis(const std::array<Vector4, 4>& w) {
  const Vector4 &l = w[0], &n = w[1], &L = w[2], &N = w[3];
  Expr h = Expr::rational(1, 2);
  FGBasis b;
  b.F[0] = (Bivector::wedge(l, n) - Bivector::wedge(L, N)) * h;
  b.F[1] = Bivector::wedge(l, N) * h;
  b.F[2] = Bivector::wedge(n, L) * h;
  b.G[0] = (Bivector::wedge(l, n) + Bivector::wedge(L, N)) * h;
  b.G[1] = Bivector::wedge(l, L) * h;
  b.G[2] = Bivector::wedge(n, N) * h;
  return b;
}

int self_dual_orientation(const FGBasis& b, const TensorField& g) {
  for (int o : {1, -1}) {
    bool ok = true;
    for (auto& F : b.F) ok = ok && (dual(F, g, o) - F).is_zero();
    if (ok) return o;
  }
  return 0;
}

std::optional<std::array<Expr, 6>> fg_coordinates(const Bivector& F, const FGBasis& b, const TensorField& g) {
  auto basis = b.all();
  // Solve the 6x6 Gram system P(B_i, B_j) x_j = P(B_i, F).
  std::vector<std::vector<Expr>> m(6, std::vector<Expr>(7));
  for (int i = 0; i < 6; ++i) {
    for (int j = 0; j < 6; ++j) m[i][j] = p_metric(basis[i], basis[j], g);
    m[i][6] = p_metric(basis[i], F, g);
  }
  for (int c = 0; c < 6; ++c) {
    int piv = -1;
    for (int r = c; r < 6 && piv < 0; ++r)
      if (!m[r][c].is_zero()) piv = r;
    if (piv < 0) return std::nullopt;
    std::swap(m[piv], m[c]);
    Expr inv = Expr(1) / m[c][c];
    for (int k = c; k < 7; ++k) m[c][k] = m[c][k] * inv;
    for (int r = 0; r < 6; ++r) {
      if (r == c || m[r][c].is_zero()) continue;
      Expr f = m[r][c];
      for (int k = c; k < 7; ++k) m[r][k] = m[r][k] - f * m[c][k];
    }
  }
  std::array<Expr, 6> x;
  Bivector check;
  for (int i = 0; i < 6; ++i) {
    x[i] = m[i][6];
    check = check + basis[i] * x[i];
  }
  if (!(check - F).is_zero()) return std::nullopt;
  return x;
}

std::array<Expr, 6> coframe_wedge_coefficients(const Matrix4& f, const std::array<Vector4, 4>& w) {
  // Dual basis of (l1, n1, l2, n2) is (n1, l1, n2, l2) as vectors.
  static const int dual_of[4] = {1, 0, 3, 2};
  static const int pairs[6][2] = {{0, 1}, {0, 2}, {0, 3}, {1, 2}, {1, 3}, {2, 3}};
  std::array<Expr, 6> out;
  for (int k = 0; k < 6; ++k) {
    const Vector4& x = w[dual_of[pairs[k][0]]];
    const Vector4& y = w[dual_of[pairs[k][1]]];
    Expr s;
    for (int a = 0; a < 4; ++a)
      for (int b = 0; b < 4; ++b)
        if (!f[a][b].is_zero() && !x[a].is_zero() && !y[b].is_zero()) s += f[a][b] * x[a] * y[b];
    out[k] = s;
  }
  return out;
}

std::vector<CurvatureGenerator> curvature_endomorphisms(const Geometry& geo, const std::array<Vector4, 4>& w,
                                                        int include_derivatives) {
  if (include_derivatives < 0 || include_derivatives > 2)
    throw std::invalid_argument("curvature_endomorphisms: derivative order must be 0, 1 or 2");
  static const char* names[4] = {"l1", "n1", "l2", "n2"};
  std::vector<CurvatureGenerator> out;
  std::vector<std::pair<int, int>> pairs;
  for (int x = 0; x < 4; ++x)
    for (int y = x + 1; y < 4; ++y) pairs.emplace_back(x, y);

  // T^a_{b c d ...}: contract slots 2,3 with the pair and trailing slots with the Z vectors.
  auto contract = [&](const TensorField& t, int x, int y, const std::vector<int>& zs) {
    Matrix4 m;
    int rank = t.rank();
    for (std::size_t i = 0; i < t.size(); ++i) {
      const Expr& c = t[i];
      if (c.is_zero()) continue;
      std::vector<int> idx = t.unflat(i);
      Expr f = w[x][idx[2]] * w[y][idx[3]];
      for (int k = 4; k < rank && !f.is_zero(); ++k) f = f * w[zs[k - 4]][idx[k]];
      if (!f.is_zero()) m[idx[0]][idx[1]] += f * c;
    }
    return m;
  };
  for (auto [x, y] : pairs) {
    Matrix4 m = contract(geo.riemann_up, x, y, {});
    if (!matrix_zero(m)) out.push_back({std::string("R(") + names[x] + "," + names[y] + ")", m});
  }
  if (include_derivatives >= 1) {
    TensorField d1 = covariant_derivative(geo.riemann_up, geo);
    for (auto [x, y] : pairs)
      for (int z = 0; z < 4; ++z) {
        Matrix4 m = contract(d1, x, y, {z});
        if (!matrix_zero(m))
          out.push_back({std::string("dR(") + names[x] + "," + names[y] + ";" + names[z] + ")", m});
      }
    if (include_derivatives >= 2) {
      TensorField d2 = covariant_derivative(d1, geo);
      for (auto [x, y] : pairs)
        for (int z = 0; z < 4; ++z)
          for (int z2 = 0; z2 < 4; ++z2) {
            Matrix4 m = contract(d2, x, y, {z, z2});
            if (!matrix_zero(m))
              out.push_back({std::string("ddR(") + names[x] + "," + names[y] + ";" + names[z] + "," + names[z2] + ")", m});
          }
    }
  }
  return out;
}

std::string to_string(HolonomyClass c) {
  switch (c) {
    case HolonomyClass::Trivial: return "trivial";
    case HolonomyClass::A9: return "A9";
    case HolonomyClass::A10: return "A10";
    case HolonomyClass::A17: return "A17";
    case HolonomyClass::A26: return "A26";
    case HolonomyClass::Other: return "other";
  }
  return "?";
}

HolonomyAlgebra lie_closure(const std::vector<Matrix4>& gens) {
  Echelon ech;
  std::vector<Matrix4> basis;
  for (auto& g : gens)
    if (ech.add(flatten(g))) basis.push_back(g);
  std::size_t done = 0;
  while (done < basis.size()) {
    std::size_t n = basis.size();
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = std::max(i + 1, done); j < n; ++j) {
        Matrix4 c = commutator(basis[i], basis[j]);
        if (!matrix_zero(c) && ech.add(flatten(c))) basis.push_back(c);
      }
    done = n;
    if (basis.size() > 16) break;
  }
  HolonomyAlgebra alg;
  alg.basis = basis;
  alg.dimension = static_cast<int>(basis.size());
  alg.closed = true;
  return alg;
}

bool in_span(const HolonomyAlgebra& alg, const Matrix4& m) {
  Echelon ech;
  for (auto& b : alg.basis) ech.add(flatten(b));
  Flat r = ech.reduce(flatten(m));
  for (auto& e : r)
    if (!e.is_zero()) return false;
  return true;
}

void classify(HolonomyAlgebra& alg, const TensorField& g, const std::array<Vector4, 4>& w) {
  TensorField ginv = inverse_metric(g);
  FGBasis fg = fg_basis(w);
  int orient = self_dual_orientation(fg, g);
  alg.certificate.clear();
  std::vector<Bivector> biv;
  for (auto& m : alg.basis) {
    Bivector b = Bivector::from_endomorphism(m, ginv);
    biv.push_back(b);
    auto c = fg_coordinates(b, fg, g);
    if (c) alg.certificate.push_back(*c);
  }
  bool abelian = true;
  for (std::size_t i = 0; i < alg.basis.size(); ++i)
    for (std::size_t j = i + 1; j < alg.basis.size(); ++j)
      if (!matrix_zero(commutator(alg.basis[i], alg.basis[j]))) abelian = false;
  bool all_nil = true;
  for (auto& m : alg.basis) all_nil = all_nil && nilpotent(m);

  alg.label = HolonomyClass::Other;
  alg.label_text = "other(" + std::to_string(alg.dimension) + ")";
  if (alg.dimension == 0) {
    alg.label = HolonomyClass::Trivial;
    alg.label_text = "trivial";
    return;
  }
  if (alg.dimension == 1) {
    if (all_nil && bivector_rank(biv[0]) == 2) {
      alg.label = HolonomyClass::A9;
      alg.label_text = "A9";
      alg.notes.push_back("single null simple nilpotent generator: two parallel null vectors");
    }
    return;
  }
  if (alg.dimension == 2) {
    if (abelian && all_nil) {
      alg.label = HolonomyClass::A17;
      alg.label_text = "A17";
      alg.notes.push_back("abelian, nilpotent: one parallel null vector field");
      return;
    }
    // Split each element into self-dual and anti-self-dual parts; 2(d) is one of each.
    if (orient != 0) {
      Echelon plus, minus;
      std::vector<Bivector> sp, sm;
      for (auto& b : biv) {
        auto [p, m] = self_dual_split(b, g, orient);
        if (!p.is_zero() && plus.add(flatten(p.up))) sp.push_back(p);
        if (!m.is_zero() && minus.add(flatten(m.up))) sm.push_back(m);
      }
      bool pure = true;
      for (auto& b : biv) {
        auto [p, m] = self_dual_split(b, g, orient);
        pure = pure && (p.is_zero() || m.is_zero());
      }
      if (!abelian) {
        alg.notes.push_back("non-abelian: self-dual rank " + std::to_string(sp.size()) + ", anti-self-dual rank " +
                            std::to_string(sm.size()));
      }
      if (sp.size() == 1 && sm.size() == 1) {
        Expr np = p_metric(sp[0], sp[0], g), nm = p_metric(sm[0], sm[0], g);
        if (abelian && !np.is_zero() && nm.is_zero()) {
          alg.label = HolonomyClass::A10;
          alg.label_text = "WH-2(d)/A10";
          alg.notes.push_back("span{F, G} with F self-dual, |F| = " + render(np) + ", G anti-self-dual null");
          alg.notes.push_back(pure ? "basis already split" : "basis mixes S+ and S-");
          alg.notes.push_back("two recurrent null vectors");
        }
      }
    }
    return;
  }
  if (alg.dimension == 3 && !abelian) {
    // derived algebra
    std::vector<Matrix4> der;
    for (std::size_t i = 0; i < alg.basis.size(); ++i)
      for (std::size_t j = i + 1; j < alg.basis.size(); ++j) der.push_back(commutator(alg.basis[i], alg.basis[j]));
    HolonomyAlgebra d = lie_closure(der);
    bool der_nil = true;
    for (auto& m : d.basis) der_nil = der_nil && nilpotent(m);
    bool has_nil = false;
    for (auto& m : alg.basis) has_nil = has_nil || nilpotent(m);
    if (d.dimension >= 1 && d.dimension <= 2 && der_nil && has_nil) {
      alg.label = HolonomyClass::A26;
      alg.label_text = "A26";
      alg.notes.push_back("solvable, derived algebra of dimension " + std::to_string(d.dimension) +
                          " and nilpotent: null 2-plane with a recurrent vector field");
    }
  }
}

HolonomyAlgebra holonomy(const WalkerSpec& s, int include_derivatives) {
  Geometry geo = s.geometry();
  auto w = walker_frame_vectors(s);
  std::vector<Matrix4> gens;
  for (auto& c : curvature_endomorphisms(geo, w, include_derivatives)) gens.push_back(c.endo);
  HolonomyAlgebra alg = lie_closure(gens);
  classify(alg, geo.g, w);
  return alg;
}

std::vector<CommonEigenvector> common_eigenvectors(const HolonomyAlgebra& alg, const std::array<Vector4, 4>& w) {
  std::vector<CommonEigenvector> out;
  for (int i = 0; i < 4; ++i) {
    const Vector4& e = w[i];
    int ref = -1;
    for (int k = 0; k < 4 && ref < 0; ++k)
      if (!e[k].is_zero()) ref = k;
    if (ref < 0) continue;
    CommonEigenvector ce{i, {}};
    bool ok = true;
    for (auto& m : alg.basis) {
      Vector4 me;
      for (int a = 0; a < 4; ++a)
        for (int b = 0; b < 4; ++b)
          if (!m[a][b].is_zero() && !e[b].is_zero()) me[a] += m[a][b] * e[b];
      Expr lam = me[ref] / e[ref];
      for (int a = 0; a < 4 && ok; ++a) ok = me[a] == lam * e[a];
      if (!ok) break;
      ce.values.push_back(lam);
    }
    if (ok) out.push_back(ce);
  }
  return out;
}

bool RecurrenceResult::parallel() const {
  if (!recurrent) return false;
  for (auto& c : omega)
    if (!c.is_zero()) return false;
  return true;
}

RecurrenceResult verify_recurrent(const Vector4& x, const Geometry& geo) {
  RecurrenceResult r;
  int ref = -1;
  for (int a = 0; a < 4 && ref < 0; ++a)
    if (!x[a].is_zero()) ref = a;
  if (ref < 0) throw std::invalid_argument("verify_recurrent: zero vector");
  TensorField dx = covariant_derivative(vector_field(x), geo);  // X^a_{;b}
  for (int b = 0; b < 4; ++b) r.omega[b] = dx.at({ref, b}) / x[ref];
  for (int a = 0; a < 4; ++a)
    for (int b = 0; b < 4; ++b)
      if (dx.at({a, b}) != x[a] * r.omega[b]) return r;
  r.recurrent = true;
  return r;
}

RecurrentFamily recurrent_family_example1(const Expr& k0, const Example1Constants& c) {
  if (!(c.beta * c.c1 - Expr(2) * c.alpha * c.c2).is_zero() ||
      !(Expr(2) * c.a * c.c1 + c.beta * c.d - Expr(2) * c.c2 * c.a - Expr(2) * c.alpha * c.d).is_zero())
    throw SpecError("recurrent_family_example1: constants are not Ricci-flat");
  if (c.c1.is_zero()) throw SpecError("recurrent_family_example1: needs c1 != 0");
  Expr uu = Expr::coordinate(u), UU = Expr::coordinate(U);
  Expr arg = c.c1 * log(abs(uu)) + c.c2 * log(abs(UU)) + c.d * uu * UU + k0;
  RecurrentFamily r;
  if (c.alpha.is_zero()) {
    r.f = -arg / Expr(2);
    r.h = Expr(1) / r.f;
  } else {
    r.f = -sqrt(c.c1 / (Expr(2) * c.alpha)) * tanh(sqrt(c.alpha / (Expr(2) * c.c1)) * arg);
    r.h = Expr(2) * c.alpha / c.c1 * r.f;
  }
  r.h_reciprocal = Expr(1) / r.f;
  Expr duU = c.d * uu * UU;
  r.residual0 = r.f * r.f * c.alpha * (duU / c.c1 + Expr(1)) - c.c1 / Expr(2) - duU / Expr(2) - uu * diff(r.f, u);
  r.residual1 = r.f * r.f * c.alpha * (duU / c.c1 + c.c2 / c.c1) - c.c2 / Expr(2) - duU / Expr(2) - UU * diff(r.f, U);
  return r;
}

int numeric_dimension(const std::vector<Matrix4>& gens, const NumericEnv& env, double tol) {
  using M = Eigen::Matrix4d;
  std::vector<M> basis;
  auto rank_of = [&](const std::vector<M>& ms) {
    if (ms.empty()) return 0;
    Eigen::MatrixXd A(static_cast<Eigen::Index>(ms.size()), 16);
    for (std::size_t i = 0; i < ms.size(); ++i)
      for (int k = 0; k < 16; ++k) A(static_cast<Eigen::Index>(i), k) = ms[i](k / 4, k % 4);
    Eigen::FullPivLU<Eigen::MatrixXd> lu(A);
    lu.setThreshold(tol);
    return static_cast<int>(lu.rank());
  };
  auto try_add = [&](const M& m) {
    if (m.norm() < tol) return false;
    basis.push_back(m / m.norm());
    if (rank_of(basis) < static_cast<int>(basis.size())) {
      basis.pop_back();
      return false;
    }
    return true;
  };
  for (auto& g : gens) {
    M m;
    for (int a = 0; a < 4; ++a)
      for (int b = 0; b < 4; ++b) m(a, b) = g[a][b].is_zero() ? 0.0 : eval_numeric(g[a][b], env);
    try_add(m);
  }
  std::size_t done = 0;
  while (done < basis.size() && basis.size() < 16) {
    std::size_t n = basis.size();
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = std::max(i + 1, done); j < n; ++j) try_add(basis[i] * basis[j] - basis[j] * basis[i]);
    done = n;
  }
  return static_cast<int>(basis.size());
}

}  // namespace vsw
