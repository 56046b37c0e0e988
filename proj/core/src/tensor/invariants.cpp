#include "vsw/tensor.hpp"

namespace vsw {

namespace {

// M[p][q] for p, q pair indices (a*4+b).
using PairMatrix = std::vector<std::vector<Expr>>;

Expr trace_cube(const PairMatrix& m) {
  std::size_t n = m.size();
  // m2 = m*m, then trace(m2*m)
  PairMatrix m2(n, std::vector<Expr>(n));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t k = 0; k < n; ++k) {
      if (m[i][k].is_zero()) continue;
      for (std::size_t j = 0; j < n; ++j)
        if (!m[k][j].is_zero()) m2[i][j] += m[i][k] * m[k][j];
    }
  Expr t;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t k = 0; k < n; ++k)
      if (!m2[i][k].is_zero() && !m[k][i].is_zero()) t += m2[i][k] * m[k][i];
  return t;
}

}  // namespace

std::vector<std::string> invariant_labels(int max_order) {
  std::vector<std::string> l = {"R", "Ric.Ric", "Riem.Riem", "Ric^3", "Riem^3 (pairs)", "Riem^3 (cross)", "Ric.Riem.Ric"};
  if (max_order >= 1) {
    for (const char* s : {"dR.dR", "dRic.dRic", "dRiem.dRiem", "dRic.dRic (crossed)"}) l.push_back(s);
  }
  if (max_order >= 2) {
    for (const char* s : {"box R", "ddRiem.ddRiem", "Riem.box Riem"}) l.push_back(s);
  }
  return l;
}

InvariantList scalar_invariants(const Geometry& geo, int max_order) {
  if (max_order < 0 || max_order > 2) throw std::invalid_argument("scalar_invariants: order must be 0, 1 or 2");
  auto labels = invariant_labels(max_order);
  InvariantList out;
  auto push = [&](const Expr& e) { out.emplace_back(labels[out.size()], canonicalize(e)); };
  const TensorField& ginv = geo.ginv;

  TensorField ric_up = raise_all(geo.ricci, ginv);
  TensorField ric_mixed = raise(geo.ricci, 1, ginv);  // R_a^b
  TensorField riem_up = raise_all(geo.riemann, ginv);

  push(geo.scalar);
  Expr ric2;
  for (std::size_t i = 0; i < 16; ++i)
    if (!geo.ricci[i].is_zero() && !ric_up[i].is_zero()) ric2 += geo.ricci[i] * ric_up[i];
  push(ric2);
  Expr riem2;
  for (std::size_t i = 0; i < 256; ++i)
    if (!geo.riemann[i].is_zero() && !riem_up[i].is_zero()) riem2 += geo.riemann[i] * riem_up[i];
  push(riem2);

  PairMatrix m3(4, std::vector<Expr>(4));
  for (int a = 0; a < 4; ++a)
    for (int b = 0; b < 4; ++b) m3[a][b] = ric_mixed.at({a, b});
  push(trace_cube(m3));

  // R_ab^cd
  TensorField r_abup = raise(raise(geo.riemann, 2, ginv), 3, ginv);
  PairMatrix pairs(16, std::vector<Expr>(16));
  for (int a = 0; a < 4; ++a)
    for (int b = 0; b < 4; ++b)
      for (int c = 0; c < 4; ++c)
        for (int d = 0; d < 4; ++d) pairs[a * 4 + b][c * 4 + d] = r_abup.at({a, b, c, d});
  push(trace_cube(pairs));

  // K[(a,b),(c,d)] = R_a^c_b^d = R_{a}{}^{c}{}_{b}{}^{d}
  TensorField r_cross = raise(raise(geo.riemann, 1, ginv), 3, ginv);
  PairMatrix cross(16, std::vector<Expr>(16));
  for (int a = 0; a < 4; ++a)
    for (int b = 0; b < 4; ++b)
      for (int c = 0; c < 4; ++c)
        for (int d = 0; d < 4; ++d) cross[a * 4 + b][c * 4 + d] = r_cross.at({a, c, b, d});
  push(trace_cube(cross));

  Expr rrr;
  for (int a = 0; a < 4; ++a)
    for (int b = 0; b < 4; ++b) {
      if (ric_up.at({a, b}).is_zero()) continue;
      for (int c = 0; c < 4; ++c)
        for (int d = 0; d < 4; ++d) {
          const Expr& r = geo.riemann.at({a, c, b, d});
          if (!r.is_zero() && !ric_up.at({c, d}).is_zero()) rrr += ric_up.at({a, b}) * r * ric_up.at({c, d});
        }
    }
  push(rrr);
  if (max_order == 0) return out;

  // first derivatives
  TensorField scalar_t(std::vector<Slot>{});
  scalar_t[0] = geo.scalar;
  TensorField dR = covariant_derivative(scalar_t, geo);
  TensorField dRic = covariant_derivative(geo.ricci, geo);
  TensorField dRiem = covariant_derivative(geo.riemann, geo);
  push(full_contraction(dR, dR, ginv));
  push(full_contraction(dRic, dRic, ginv));
  push(full_contraction(dRiem, dRiem, ginv));
  // nabla_a R_bc nabla^b R^ac, with dRic_{bc;a}
  TensorField dRic_up = raise_all(dRic, ginv);  // R^{bc;a}
  Expr crossed;
  for (int a = 0; a < 4; ++a)
    for (int b = 0; b < 4; ++b)
      for (int c = 0; c < 4; ++c) {
        const Expr& x = dRic.at({b, c, a});
        const Expr& y = dRic_up.at({a, c, b});
        if (!x.is_zero() && !y.is_zero()) crossed += x * y;
      }
  push(crossed);
  if (max_order == 1) return out;

  // second derivatives
  TensorField ddR = covariant_derivative(dR, geo);
  Expr box;
  for (int a = 0; a < 4; ++a)
    for (int b = 0; b < 4; ++b)
      if (!ginv.at({a, b}).is_zero() && !ddR.at({a, b}).is_zero()) box += ginv.at({a, b}) * ddR.at({a, b});
  push(box);
  TensorField ddRiem = covariant_derivative(dRiem, geo);
  push(full_contraction(ddRiem, ddRiem, ginv));
  // box R_abcd = g^{ef} R_{abcd;ef}
  Expr rbox;
  for (std::size_t i = 0; i < 256; ++i) {
    if (riem_up[i].is_zero()) continue;
    Expr bx;
    for (int e = 0; e < 4; ++e)
      for (int f = 0; f < 4; ++f)
        if (!ginv.at({e, f}).is_zero()) {
          const Expr& v = ddRiem[i * 16 + static_cast<std::size_t>(e * 4 + f)];
          if (!v.is_zero()) bx += ginv.at({e, f}) * v;
        }
    if (!bx.is_zero()) rbox += riem_up[i] * bx;
  }
  push(rbox);
  return out;
}

}  // namespace vsw
