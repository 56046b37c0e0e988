#include <algorithm>

#include "vsw/walker.hpp"

namespace vsw {

namespace {

Expr C_(const std::string& n) { return Expr::constant(n); }
Expr coord(int c) { return Expr::coordinate(c); }

}  // namespace

Example1Constants Example1Constants::symbolic() {
  return {C_("a"), C_("alpha"), C_("beta"), C_("c1"), C_("c2"), C_("d")};
}

Example1Constants Example1Constants::ricci_flat() {
  Example1Constants c = symbolic();
  c.a = c.alpha * c.d / c.c1;
  c.beta = Expr(2) * c.c2 * c.alpha / c.c1;
  return c;
}

Context example1_context() {
  Context ctx;
  for (const char* n : {"A0", "B00", "C0"}) ctx.declare_function(n, {u, U});
  for (const char* n : {"a", "alpha", "beta", "c1", "c2", "d"}) ctx.declare_constant(n);
  return ctx;
}

WalkerSpec build_example1(const Example1Constants& c) {
  WalkerSpec s;
  s.name = "example1";
  s.ctx = example1_context();
  s.flags["family"] = "example1";
  Expr uu = coord(u), UU = coord(U);
  Expr C2 = Expr(2) * c.a * uu + c.beta / UU;
  Expr C11 = c.c1 / uu + c.d * UU;
  auto put = [&](const std::string& k, const Expr& e) {
    if (!e.is_zero()) s.coeffs[k] = e;
  };
  put("C2", C2);
  put("C11", C11);
  put("A1", C2 / Expr(2));
  put("A2", c.a * UU + c.alpha / uu);
  put("B10", C11 / Expr(2));
  put("B01", (c.c2 / UU + c.d * uu) / Expr(2));
  put("A0", Expr::function("A0", {u, U}));
  put("B00", Expr::function("B00", {u, U}));
  put("C0", Expr::function("C0", {u, U}));
  return s;
}

Expr example1_ricci13_reference(const Example1Constants& c) {
  Expr uU = coord(u) * coord(U);
  Expr num = (c.beta * c.c1 - Expr(2) * c.alpha * c.c2) +
             (Expr(2) * c.a * c.c1 + c.beta * c.d - Expr(2) * c.c2 * c.a - Expr(2) * c.alpha * c.d) * uU;
  return num / (Expr(2) * uU);
}

const IndexConvention kExample2Labels{{2, 3, 0, 1}, {-1, -1, 1, 1}, -1};

Example2Inputs Example2Inputs::generic(Context& ctx) {
  for (const char* n : {"B02", "B10", "B01", "B00", "C0"}) ctx.declare_function(n, {u, U});
  ctx.declare_function("G", {U});
  return {Expr::function("B02", {u, U}), Expr::function("B10", {u, U}), Expr::function("B01", {u, U}),
          Expr::function("B00", {u, U}), Expr::function("C0", {u, U}), Expr::function("G", {U})};
}

WalkerSpec build_example2(const Example2Inputs& in, const Context& ctx) {
  if (in.B02.is_zero()) throw SpecError("example2 requires B02 != 0");
  WalkerSpec s;
  s.name = "example2";
  s.ctx = ctx;
  s.flags["family"] = "example2";
  Expr lb = log(in.B02);
  Expr A1 = diff(lb, u) / Expr(2);
  Expr C11 = Expr(2) * in.B10 + diff(lb, U) + in.G;
  Expr A0 = (Expr(-2) * in.B10 * C11 - Expr(4) * A1 * in.B01 + Expr(4) * diff(in.B01, u) - Expr(2) * diff(C11, U) +
             C11 * C11) /
            (Expr(8) * in.B02);
  auto put = [&](const std::string& k, const Expr& e) {
    if (!e.is_zero()) s.coeffs[k] = e;
  };
  put("A0", A0);
  put("A1", A1);
  put("B00", in.B00);
  put("B01", in.B01);
  put("B02", in.B02);
  put("B10", in.B10);
  put("C0", in.C0);
  put("C11", C11);
  return s;
}

Expr script_a(const WalkerSpec& s) { return s.coeff("A1") - s.coeff("C2") / Expr(2); }
Expr script_b(const WalkerSpec& s) { return s.coeff("B10") - s.coeff("C11") / Expr(2); }

InvariantList ricci_flat_residuals(const WalkerSpec& s) {
  Expr sa = script_a(s), sb = script_b(s);
  Expr A2 = s.coeff("A2"), C2 = s.coeff("C2"), C11 = s.coeff("C11"), B01 = s.coeff("B01"),
       B02 = s.coeff("B02");
  InvariantList out;
  out.emplace_back("RicciFlat1", diff(C2, u) + sa * C2 - Expr(2) * diff(A2, U) + Expr(2) * sb * A2);
  out.emplace_back("RicciFlat2", Expr(2) * diff(B01, u) - Expr(2) * sa * B01 - diff(C11, U) - sb * C11 -
                                     Expr(4) * s.coeff("A0") * B02);
  out.emplace_back("RicciFlat3", diff(sa, U) + diff(sb, u) - Expr(2) * A2 * B01 + C2 * C11 / Expr(2));
  out.emplace_back("A2*B02", A2 * B02);
  out.emplace_back("B02 transport", diff(B02, u) - (Expr(2) * s.coeff("A1") - C2 / Expr(2)) * B02);
  return out;
}

RecurrenceForm invariant_plane_check(const Geometry& geo) {
  TensorField F(std::vector<Slot>{Slot::Down, Slot::Down});
  F.at({u, U}) = Expr(1);
  F.at({U, u}) = Expr(-1);
  TensorField dF = covariant_derivative(F, geo);
  RecurrenceForm r;
  for (int c = 0; c < 4; ++c) r.k[c] = dF.at({u, U, c});
  for (int a = 0; a < 4; ++a)
    for (int b = 0; b < 4; ++b)
      for (int c = 0; c < 4; ++c)
        if (dF.at({a, b, c}) != F.at({a, b}) * r.k[c]) return r;
  r.factorizable = true;
  return r;
}

RecurrenceForm invariant_plane_check(const WalkerSpec& s) { return invariant_plane_check(s.geometry()); }

Vector4 invariant_plane_reference(const WalkerSpec& s) {
  Vector4 k;
  k[u] = s.coeff("C2") / Expr(2) + s.coeff("A1");
  k[U] = s.coeff("B10") + s.coeff("C11") / Expr(2);
  return k;
}

std::array<Vector4, 4> walker_frame_vectors(const WalkerSpec& s) {
  Expr A = s.A(), B = s.B(), hc = s.C() / Expr(2);
  std::array<Vector4, 4> f;
  f[0][v] = Expr(1);
  f[1][u] = Expr(1);
  f[1][v] = -A;
  f[1][V] = -hc;
  f[2][V] = Expr(1);
  f[3][U] = Expr(1);
  f[3][v] = -hc;
  f[3][V] = -B;
  return f;
}

bool KinematicScalars::kundt() const {
  return norm.is_zero() && geodesic.is_zero() && projected.is_zero();
}

bool KinematicScalars::expansion_free() const { return screen_expansion.is_zero(); }
bool KinematicScalars::shear_free() const { return screen_shear.is_zero(); }
bool KinematicScalars::twist_free() const { return screen_twist.is_zero(); }

KinematicScalars kinematics(const Vector4& x_up, const Geometry& geo) {
  KinematicScalars k;
  Vector4 x_dn = lower_vector(x_up, geo.g);
  k.norm = inner(x_up, x_up, geo.g);
  if (!k.norm.is_zero()) throw NotNull("kinematics: vector is not null");
  bool any = false;
  for (auto& c : x_up) any = any || !c.is_zero();
  if (!any) throw NotNull("kinematics: zero vector");

  TensorField dx = covariant_derivative(one_form(x_dn), geo);  // X_{a;b}
  TensorField dx_up = raise_all(dx, geo.ginv);                 // X^{a;b}
  for (int a = 0; a < 4; ++a)
    for (int b = 0; b < 4; ++b) {
      k.expansion += geo.ginv.at({a, b}) * dx.at({a, b});
      Expr sym = (dx.at({a, b}) + dx.at({b, a})) / Expr(2);
      Expr asym = (dx.at({a, b}) - dx.at({b, a})) / Expr(2);
      k.shear += dx_up.at({a, b}) * sym;
      k.twist += dx_up.at({a, b}) * asym;
    }

  // w^a = 1/2 eps^{abcd} X_b X_{c;d}, eps^{uvUV} = 1/sqrt|det g|
  Expr det = determinant(geo.g);
  Expr inv_vol = Expr(1) / sqrt(sqrt(det * det));
  Vector4 w;
  std::array<int, 4> p = {0, 1, 2, 3};
  do {
    int inv = 0;
    for (int i = 0; i < 4; ++i)
      for (int j = i + 1; j < 4; ++j)
        if (p[i] > p[j]) ++inv;
    Expr sgn = Expr(inv % 2 ? -1 : 1);
    const Expr& xb = x_dn[p[1]];
    const Expr& xcd = dx.at({p[2], p[3]});
    if (!xb.is_zero() && !xcd.is_zero()) w[p[0]] += sgn * xb * xcd;
  } while (std::next_permutation(p.begin(), p.end()));
  for (auto& c : w) c = c * inv_vol / Expr(2);
  int ref = -1;
  for (int a = 0; a < 4 && ref < 0; ++a)
    if (!x_up[a].is_zero()) ref = a;
  Expr omega = w[ref] / x_up[ref];
  k.omega_sq = omega * omega;
  k.omega_proportional = true;
  for (int a = 0; a < 4; ++a)
    if (w[a] != omega * x_up[a]) k.omega_proportional = false;

  // acceleration X^b nabla_b X^a, wedge X
  TensorField dxu = covariant_derivative(vector_field(x_up), geo);  // X^a_{;b}
  Vector4 acc;
  for (int a = 0; a < 4; ++a)
    for (int b = 0; b < 4; ++b)
      if (!x_up[b].is_zero()) acc[a] += x_up[b] * dxu.at({a, b});
  k.geodesic = TensorField(std::vector<Slot>{Slot::Up, Slot::Up});
  for (int a = 0; a < 4; ++a)
    for (int b = 0; b < 4; ++b) k.geodesic.at({a, b}) = acc[a] * x_up[b] - acc[b] * x_up[a];

  // complementary null Y with X.Y = 1, built from a coordinate vector e with X.e != 0
  Vector4 y_up;
  for (int c = 0; c < 4; ++c) {
    if (x_dn[c].is_zero()) continue;
    Vector4 e;
    e[c] = Expr(1);
    Expr xe = x_dn[c];
    Expr ee = geo.g.at({c, c});
    for (int a = 0; a < 4; ++a) y_up[a] = (e[a] - ee / (Expr(2) * xe) * x_up[a]) / xe;
    break;
  }
  Vector4 y_dn = lower_vector(y_up, geo.g);
  k.complement = y_up;
  // h_a^b = delta_a^b - X_a Y^b - Y_a X^b
  Matrix4 h;
  for (int a = 0; a < 4; ++a)
    for (int b = 0; b < 4; ++b) h[a][b] = Expr(a == b ? 1 : 0) - x_dn[a] * y_up[b] - y_dn[a] * x_up[b];
  k.projected = TensorField(std::vector<Slot>{Slot::Down, Slot::Down});
  for (int a = 0; a < 4; ++a)
    for (int b = 0; b < 4; ++b) {
      Expr s;
      for (int c = 0; c < 4; ++c) {
        if (h[a][c].is_zero()) continue;
        for (int d = 0; d < 4; ++d)
          if (!h[b][d].is_zero() && !dx.at({c, d}).is_zero()) s += h[a][c] * h[b][d] * dx.at({c, d});
      }
      k.projected.at({a, b}) = s;
    }
  // screen parts: trace with the screen metric h^{ab} = g^{ab} - X^a Y^b - Y^a X^b
  Matrix4 hup;
  for (int a = 0; a < 4; ++a)
    for (int b = 0; b < 4; ++b) hup[a][b] = geo.ginv.at({a, b}) - x_up[a] * y_up[b] - y_up[a] * x_up[b];
  for (int a = 0; a < 4; ++a)
    for (int b = 0; b < 4; ++b)
      if (!hup[a][b].is_zero()) k.screen_expansion += hup[a][b] * k.projected.at({a, b});
  for (int a = 0; a < 4 && k.screen_twist.is_zero(); ++a)
    for (int b = a + 1; b < 4 && k.screen_twist.is_zero(); ++b)
      k.screen_twist = (k.projected.at({a, b}) - k.projected.at({b, a})) / Expr(2);
  // trace-free symmetric part: S_ab = P_(ab) - theta/2 h_ab with h_ab = g_ab - X_a Y_b - Y_a X_b
  for (int a = 0; a < 4 && k.screen_shear.is_zero(); ++a)
    for (int b = 0; b < 4 && k.screen_shear.is_zero(); ++b) {
      Expr hab = geo.g.at({a, b}) - x_dn[a] * y_dn[b] - y_dn[a] * x_dn[b];
      Expr s = (k.projected.at({a, b}) + k.projected.at({b, a})) / Expr(2) - k.screen_expansion / Expr(2) * hab;
      if (!s.is_zero()) k.screen_shear = s;
    }
  return k;
}

std::string to_string(KundtVerdict v) {
  switch (v) {
    case KundtVerdict::AlongL1: return "KundtAlongL1";
    case KundtVerdict::AlongL2: return "KundtAlongL2";
    case KundtVerdict::Doubly: return "DoublyKundt";
    case KundtVerdict::NotKundt: return "NotKundt";
  }
  return "?";
}

KundtResult kundt_classify(const WalkerSpec& s) {
  if (!s.in_family()) throw SpecError("kundt_classify: spec outside the Walker family");
  KundtResult r;
  r.a_v_zero = diff(s.A(), V).is_zero();
  Expr bv = diff(s.B(), v);
  r.b_v_zero = bv.is_zero() && diff(bv, v).is_zero();
  Geometry geo = s.geometry();
  Vector4 dV, dv;
  dV[V] = Expr(1);
  dv[v] = Expr(1);
  bool kV = false, kv = false;
  for (auto& [label, x] : {std::pair<std::string, Vector4>{"d_V", dV}, std::pair<std::string, Vector4>{"d_v", dv}}) {
    KinematicScalars ks = kinematics(x, geo);
    Expr obstruction;
    for (std::size_t i = 0; i < ks.projected.size() && obstruction.is_zero(); ++i) obstruction = ks.projected[i];
    r.obstructions.emplace_back(label, obstruction);
    (label == "d_V" ? kV : kv) = ks.kundt();
    r.witnesses.emplace_back(label, std::move(ks));
  }
  if (r.a_v_zero && r.b_v_zero)
    r.verdict = KundtVerdict::Doubly;
  else if (r.a_v_zero)
    r.verdict = KundtVerdict::AlongL1;
  else if (r.b_v_zero)
    r.verdict = KundtVerdict::AlongL2;
  r.consistent = (kV == r.a_v_zero) && (kv == r.b_v_zero);
  return r;
}

std::string ConstantBranch::text() const {
  std::string out;
  for (const auto& [name, value] : assignments) {
    if (!out.empty()) out += ", ";
    out += name + " = " + render(value);
  }
  for (const auto& e : unresolved) {
    if (!out.empty()) out += ", ";
    out += render(e) + " = 0";
  }
  return out.empty() ? "(none)" : out;
}

Bindings ConstantBranch::bindings() const {
  Bindings b;
  for (const auto& [name, value] : assignments) b.constants[name] = value;
  return b;
}

std::vector<Expr> constant_conditions(const std::vector<Expr>& residuals) {
  std::vector<Expr> out;
  auto push = [&](const Expr& e) {
    if (e.is_zero()) return;
    for (const auto& o : out)
      if (o == e || o == -e) return;
    out.push_back(e);
  };
  for (const auto& r : residuals) {
    std::vector<Expr> parts{numerator(r)};
    for (int c = 0; c < kDim; ++c) {
      std::vector<Expr> next;
      for (auto p : parts) {
        // Laurent terms: shift until the coefficients rebuild p.
        for (int shift = 0; shift < 16; ++shift, p *= coord(c)) {
          int deg = degree_in(p, c);
          Expr rebuilt(0);
          std::vector<Expr> coeffs;
          for (int k = 0; k <= deg; ++k) {
            coeffs.push_back(coefficient(p, c, k));
            rebuilt += coeffs.back() * pow(coord(c), static_cast<long>(k));
          }
          if (rebuilt == p) {
            next.insert(next.end(), coeffs.begin(), coeffs.end());
            break;
          }
        }
      }
      parts = std::move(next);
    }
    for (const auto& p : parts) push(p);
  }
  return out;
}

namespace {

// Constant x stands in for coordinate v while reading off its degree and coefficients.
Expr as_v(const Expr& e, const std::string& x) {
  Bindings b;
  b.constants[x] = coord(v);
  return substitute(e, b);
}

Expr from_v(const Expr& e, const std::string& x) {
  Bindings b;
  b.coords[v] = C_(x);
  return substitute(e, b);
}

std::vector<std::string> ordered_constants(const Expr& e, const std::vector<std::string>& priority) {
  std::vector<std::string> present = constants_in(e), out;
  for (const auto& p : priority)
    if (std::find(present.begin(), present.end(), p) != present.end()) out.push_back(p);
  for (const auto& p : present)
    if (std::find(out.begin(), out.end(), p) == out.end()) out.push_back(p);
  return out;
}

Expr resolve(const Expr& e, const std::vector<std::pair<std::string, Expr>>& assignments) {
  Bindings b;
  for (const auto& [name, value] : assignments) b.constants[name] = value;
  Expr cur = e;
  for (std::size_t i = 0; i <= assignments.size(); ++i) {
    Expr next = canonicalize(substitute(cur, b));
    if (next == cur) break;
    cur = next;
  }
  return cur;
}

struct Solver {
  std::vector<std::string> priority;
  std::vector<ConstantBranch> out;

  void run(std::vector<Expr> eqs, ConstantBranch br) {
    for (auto& nz : br.nonzero) {
      nz = resolve(nz, br.assignments);
      if (nz.is_zero()) return;
    }
    std::vector<Expr> live;
    for (const auto& e : eqs) {
      Expr r = numerator(resolve(e, br.assignments));
      if (r.is_zero()) continue;
      if (constants_in(r).empty()) return;  // nonzero constant or a coordinate leftover: no solution
      live.push_back(r);
    }
    if (live.empty()) {
      for (auto& [name, value] : br.assignments) value = resolve(value, br.assignments);
      out.push_back(std::move(br));
      return;
    }
    Expr e = live.front();
    std::vector<Expr> rest(live.begin() + 1, live.end());
    std::vector<std::string> names = ordered_constants(e, priority);

    for (const auto& x : names) {
      Expr ev = as_v(e, x);
      if (!coefficient(ev, v, 0).is_zero()) continue;
      ConstantBranch zero = br;
      zero.assignments.emplace_back(x, Expr(0));
      run(rest, std::move(zero));
      ConstantBranch keep = br;
      keep.nonzero.push_back(C_(x));
      std::vector<Expr> eqs2 = rest;
      eqs2.insert(eqs2.begin(), from_v(ev / coord(v), x));
      run(std::move(eqs2), std::move(keep));
      return;
    }
    for (const auto& x : names) {
      Expr ev = as_v(e, x);
      if (degree_in(ev, v) != 1) continue;
      Expr c = from_v(coefficient(ev, v, 1), x);
      Expr c0 = from_v(coefficient(ev, v, 0), x);
      ConstantBranch solved = br;
      solved.assignments.emplace_back(x, canonicalize(-c0 / c));
      if (!c.is_rational()) solved.nonzero.push_back(c);
      run(rest, std::move(solved));
      if (!c.is_rational()) {
        std::vector<Expr> eqs2 = rest;
        eqs2.insert(eqs2.begin(), c0);
        eqs2.insert(eqs2.begin(), c);
        run(std::move(eqs2), br);
      }
      return;
    }
    br.unresolved.push_back(e);
    run(std::move(rest), std::move(br));
  }
};

}  // namespace

std::vector<ConstantBranch> solve_constant_conditions(const std::vector<Expr>& eqs, const std::vector<std::string>& priority,
                                                      const std::vector<Expr>& nonzero) {
  Solver s{priority, {}};
  ConstantBranch root;
  root.nonzero = nonzero;
  s.run(eqs, root);
  return s.out;
}

bool branch_implies(const ConstantBranch& a, const ConstantBranch& b) {
  Bindings ba = a.bindings();
  try {
    for (const auto& [name, value] : b.assignments) {
      Expr lhs = canonicalize(substitute(C_(name) - value, ba));
      if (!numerator(lhs).is_zero()) return false;
    }
    for (const auto& e : b.unresolved)
      if (!numerator(canonicalize(substitute(e, ba))).is_zero()) return false;
  } catch (const DomainError&) {
    return false;  // b divides by something a sets to zero
  }
  return true;
}

bool branches_equivalent(const ConstantBranch& a, const ConstantBranch& b) {
  return branch_implies(a, b) && branch_implies(b, a);
}

std::vector<ConstantBranch> example1_constant_branches(bool c1_zero) {
  Example1Constants c = Example1Constants::symbolic();
  if (c1_zero) c.c1 = Expr(0);
  Geometry geo = build_example1(c).geometry();
  std::vector<Expr> residuals;
  for (std::size_t i = 0; i < geo.ricci.size(); ++i) residuals.push_back(geo.ricci[i]);
  std::vector<Expr> nonzero;
  if (!c1_zero) nonzero.push_back(C_("c1"));
  return solve_constant_conditions(constant_conditions(residuals), {"beta", "a", "alpha", "c2", "d", "c1"}, nonzero);
}

}  // namespace vsw
