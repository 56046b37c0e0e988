#include "vsw/cartan.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <map>
#include <random>
#include <set>
#include <sstream>

namespace vsw {

namespace {

using Matrix = std::vector<std::vector<Expr>>;

// Reduced row echelon form in place; returns pivot columns.
std::vector<int> rref(Matrix& m) {
  std::vector<int> pivots;
  if (m.empty()) return pivots;
  std::size_t rows = m.size(), cols = m[0].size(), r = 0;
  for (std::size_t c = 0; c < cols && r < rows; ++c) {
    std::size_t piv = rows;
    for (std::size_t i = r; i < rows; ++i)
      if (!m[i][c].is_zero()) {
        piv = i;
        break;
      }
    if (piv == rows) continue;
    std::swap(m[piv], m[r]);
    Expr inv = Expr(1) / m[r][c];
    for (std::size_t k = c; k < cols; ++k)
      if (!m[r][k].is_zero()) m[r][k] = m[r][k] * inv;
    for (std::size_t i = 0; i < rows; ++i) {
      if (i == r || m[i][c].is_zero()) continue;
      Expr f = m[i][c];
      for (std::size_t k = c; k < cols; ++k)
        if (!m[r][k].is_zero()) m[i][k] = m[i][k] - f * m[r][k];
    }
    pivots.push_back(static_cast<int>(c));
    ++r;
  }
  m.resize(r);
  return pivots;
}

int label_count(const std::vector<int>& idx, int label) {
  return static_cast<int>(std::count(idx.begin(), idx.end(), label));
}

std::string slot_string(const std::vector<int>& idx) {
  static const char* names[4] = {"l", "n", "m", "mt"};
  std::string s = "(";
  for (std::size_t i = 0; i < idx.size(); ++i) {
    if (i) s += ",";
    s += names[idx[i]];
  }
  return s + ")";
}

bool depends_on_coordinates(const Expr& e) {
  for (int c = 0; c < 4; ++c)
    if (e.depends_on(c)) return true;
  return false;
}

// Deterministic positive value per constant name.
double constant_value(const std::string& name, unsigned seed) {
  std::size_t h = std::hash<std::string>{}(name) ^ (static_cast<std::size_t>(seed) * 0x9e3779b97f4a7c15ULL);
  return 0.5 + static_cast<double>(h % 1000) / 400.0;
}

NumericEnv numeric_env(const std::vector<Expr>& exprs, const std::array<double, 4>& x, unsigned seed) {
  NumericEnv env;
  env.point = x;
  for (auto& e : exprs)
    for (auto& c : constants_in(e)) env.constants[c] = constant_value(c, seed);
  // Unspecified functions: a smooth deterministic stand-in keyed by name and derivative pattern.
  env.func = [seed](const std::string& name, std::array<std::uint8_t, 4> d, const std::array<double, 4>& p) {
    double k = constant_value(name + std::to_string(d[0]) + std::to_string(d[1]) + std::to_string(d[2]) + std::to_string(d[3]), seed);
    return k * (1.0 + 0.3 * std::sin(p[0] + 2 * p[1] + 3 * p[2] + 5 * p[3] + k));
  };
  return env;
}

std::vector<std::array<double, 4>> sample_points(unsigned seed, int n) {
  std::mt19937 rng(seed);
  std::uniform_int_distribution<int> num(3, 29);
  std::vector<std::array<double, 4>> pts;
  for (int i = 0; i < n; ++i) {
    std::array<double, 4> p;
    for (auto& x : p) x = num(rng) / 7.0;
    pts.push_back(p);
  }
  return pts;
}

std::vector<int> nonzero_slots(const TensorField& t) {
  std::vector<int> out;
  for (std::size_t i = 0; i < t.size(); ++i)
    if (!t[i].is_zero()) out.push_back(static_cast<int>(i));
  return out;
}

// Zeroth order data in a given tetrad.
TensorField riemann_frame(const Geometry& geo, const Tetrad& t) { return frame_components(geo.riemann, t.vectors); }

const std::vector<Spin>& solvable_spins() {
  static const std::vector<Spin> v = {Spin::rho,     Spin::tau,     Spin::kappa,   Spin::sigma,   Spin::rho_t,  Spin::sigma_t,
                                      Spin::tau_t,   Spin::kappa_t, Spin::alpha,   Spin::alpha_p, Spin::alpha_t, Spin::alpha_tp,
                                      Spin::gamma,   Spin::gamma_p, Spin::gamma_t, Spin::gamma_tp};
  return v;
}

std::string suffixed(const std::string& spin) {
  auto p = spin.find('\'');
  std::string base = p == std::string::npos ? spin : spin.substr(0, p);
  return base + "_B" + (p == std::string::npos ? "" : "'");
}

int functional_rank_of_orders(const std::vector<CartanOrder>& orders, unsigned seed) {
  std::vector<Expr> all;
  for (auto& o : orders)
    for (auto& i : o.invariants) all.push_back(i.value);
  return functionally_independent_count(all, seed).rank;
}

}  // namespace

ZerothOrderFix fix_zeroth_order(const WalkerSpec& spec) {
  Geometry geo = spec.geometry();
  Tetrad t = calibrated_tetrad(spec);
  TensorField r = riemann_frame(geo, t);
  // One representative per boost-weight class.
  std::map<std::pair<int, int>, std::vector<int>> classes;
  std::vector<std::pair<int, int>> order;
  for (int i : nonzero_slots(r)) {
    auto idx = r.unflat(i);
    std::pair<int, int> w{label_count(idx, kN) - label_count(idx, kL), label_count(idx, kMt) - label_count(idx, kM)};
    if (!classes.count(w)) {
      classes[w] = idx;
      order.push_back(w);
    } else if (depends_on_coordinates(r.at(classes[w])) && !depends_on_coordinates(r[i])) {
      classes[w] = idx;
    }
  }
  for (auto& w : order)
    if (depends_on_coordinates(r.at(classes[w])))
      throw CartanError("curvature of boost weight (" + std::to_string(w.first) + "," + std::to_string(w.second) +
                        ") is not constant; only constant boost parameters are supported");
  if (order.empty()) {
    ZerothOrderFix flat;
    flat.z1 = Expr(1);
    flat.z2 = Expr(1);
    flat.note = "curvature vanishes; identity frame";
    return flat;
  }

  auto r_at = [&](const std::vector<int>& idx) { return r.at(idx); };
  ZerothOrderFix fix;
  // Target +1 or -1, whichever keeps the roots real for the formal coefficient sign.
  auto ratio = [&](const std::vector<int>& idx, Q e) {
    Expr r = Expr(1) / r_at(idx);
    try {
      (void)pow(r, e);
    } catch (const DomainError&) {
      r = -r;
    }
    return r;
  };
  auto comp = [&](const std::vector<int>& idx) { return r.at(idx); };

  auto record = [&](const std::vector<int>& idx, const Expr& z1, const Expr& z2) {
    auto w = std::make_pair(label_count(idx, kN) - label_count(idx, kL), label_count(idx, kMt) - label_count(idx, kM));
    Expr after = comp(idx) * pow(z1, static_cast<long>(w.first)) * pow(z2, static_cast<long>(w.second));
    fix.fixed.push_back({{idx[0], idx[1], idx[2], idx[3]}, comp(idx), canonicalize(after)});
  };

  // First pair of independent weight vectors.
  for (std::size_t i = 0; i < order.size(); ++i)
    for (std::size_t j = i + 1; j < order.size(); ++j) {
      auto [a1, b1] = order[i];
      auto [a2, b2] = order[j];
      long det = static_cast<long>(a1) * b2 - static_cast<long>(a2) * b1;
      if (det == 0) continue;
      // z1^a z2^b = target / value, solved in the exponents.
      Expr r1 = ratio(classes[order[i]], Q(1, det)), r2 = ratio(classes[order[j]], Q(1, det));
      Expr z1 = pow(r1, Q(b2, det)) * pow(r2, Q(-b1, det));
      Expr z2 = pow(r1, Q(-a2, det)) * pow(r2, Q(a1, det));
      fix.z1 = canonicalize(z1);
      fix.z2 = canonicalize(z2);
      record(classes[order[i]], fix.z1, fix.z2);
      record(classes[order[j]], fix.z1, fix.z2);
      return fix;
    }
  // Only one class: fix the boost it sees.
  auto [a, b] = order[0];
  Expr r1 = ratio(classes[order[0]], Q(1, a != 0 ? a : b));
  fix.reduced = true;
  if (a != 0) {
    fix.z1 = canonicalize(pow(r1, Q(1, a)));
    fix.z2 = Expr(1);
  } else {
    fix.z1 = Expr(1);
    fix.z2 = canonicalize(pow(r1, Q(1, b)));
  }
  record(classes[order[0]], fix.z1, fix.z2);
  fix.note = "single curvature weight class; one boost remains free";
  return fix;
}

FunctionalRank functionally_independent_count(const std::vector<Expr>& invariants, unsigned seed) {
  FunctionalRank out;
  Matrix jac;
  for (auto& e : invariants) {
    if (!depends_on_coordinates(e)) continue;
    std::vector<Expr> row(4);
    for (int c = 0; c < 4; ++c) row[c] = diff(e, c);
    jac.push_back(row);
  }
  if (jac.empty()) return out;
  Matrix m = jac;
  out.rank = static_cast<int>(rref(m).size());
  for (auto& p : sample_points(seed, 3)) {
    std::vector<Expr> flat;
    for (auto& row : jac)
      for (auto& e : row) flat.push_back(e);
    NumericEnv env = numeric_env(flat, p, seed);
    Eigen::MatrixXd J(static_cast<Eigen::Index>(jac.size()), 4);
    bool finite = true;
    for (std::size_t i = 0; i < jac.size(); ++i)
      for (int c = 0; c < 4; ++c) {
        double v = jac[i][c].is_zero() ? 0.0 : eval_numeric(jac[i][c], env);
        finite = finite && std::isfinite(v);
        J(static_cast<Eigen::Index>(i), c) = v;
      }
    if (!finite) {
      out.numeric.push_back(-1);
      continue;
    }
    Eigen::FullPivLU<Eigen::MatrixXd> lu(J);
    lu.setThreshold(1e-9);
    out.numeric.push_back(static_cast<int>(lu.rank()));
  }
  out.inconclusive = std::none_of(out.numeric.begin(), out.numeric.end(), [&](int k) { return k == out.rank; });
  return out;
}

const std::array<std::string, kLorentzDim>& lorentz_generator_names() {
  static const std::array<std::string, kLorentzDim> n = {"boost(l,n)", "boost(m,mt)", "rot_l(mu)",
                                                         "rot_l(mu~)", "rot_n(mu)",   "rot_n(mu~)"};
  return n;
}

LabelMatrix lorentz_generator(int k) {
  LabelMatrix X;
  Expr one(1), zero(0);
  auto linear = [&](LabelMatrix M) {
    for (int a = 0; a < 4; ++a) M[a][a] = M[a][a] - one;
    return M;
  };
  switch (k) {
    case 0: X[kL][kL] = Expr(-1); X[kN][kN] = one; break;
    case 1: X[kM][kM] = Expr(-1); X[kMt][kMt] = one; break;
    case 2: X = linear(null_rotation_l_matrix(one, zero)); break;
    case 3: X = linear(null_rotation_l_matrix(zero, one)); break;
    case 4: X = linear(null_rotation_n_matrix(one, zero)); break;
    case 5: X = linear(null_rotation_n_matrix(zero, one)); break;
    default: throw std::out_of_range("lorentz_generator");
  }
  return X;
}

IsotropyResult isotropy(const std::vector<TensorField>& tensors) {
  std::array<LabelMatrix, kLorentzDim> gens;
  for (int k = 0; k < kLorentzDim; ++k) gens[k] = lorentz_generator(k);
  Matrix rows;
  for (auto& t : tensors) {
    int rank = t.rank();
    for (std::size_t i = 0; i < t.size(); ++i) {
      std::vector<int> idx = t.unflat(i);
      std::vector<Expr> row(kLorentzDim);
      bool any = false;
      for (int k = 0; k < kLorentzDim; ++k) {
        Expr s;
        for (int slot = 0; slot < rank; ++slot) {
          int a = idx[slot];
          std::vector<int> j = idx;
          for (int b = 0; b < 4; ++b) {
            if (gens[k][a][b].is_zero()) continue;
            j[slot] = b;
            const Expr& c = t.at(j);
            if (!c.is_zero()) s += gens[k][a][b] * c;
          }
        }
        row[k] = s;
        any = any || !s.is_zero();
      }
      if (any) rows.push_back(row);
    }
  }
  IsotropyResult res;
  std::vector<int> piv = rref(rows);
  res.dimension = kLorentzDim - static_cast<int>(piv.size());
  const auto& names = lorentz_generator_names();
  for (int f = 0; f < kLorentzDim; ++f) {
    if (std::find(piv.begin(), piv.end(), f) != piv.end()) continue;
    std::string s = names[f];
    for (std::size_t r = 0; r < piv.size(); ++r) {
      if (rows[r][f].is_zero()) continue;
      s += " + (" + render(-rows[r][f]) + ") " + names[piv[r]];
    }
    res.kernel.push_back(s);
  }
  return res;
}

CartanState cartan_begin(const WalkerSpec& spec, unsigned seed) {
  CartanState st;
  st.spec = spec;
  st.seed = seed;
  st.geo = spec.geometry();
  st.fix = fix_zeroth_order(spec);
  Tetrad base = calibrated_tetrad(spec);
  st.frame = transform_tetrad(base, boost_matrix(st.fix.z1, st.fix.z2));
  st.curvature.push_back(riemann_frame(st.geo, st.frame));

  CartanOrder o;
  o.q = 0;
  for (int i : nonzero_slots(st.curvature[0])) {
    auto idx = st.curvature[0].unflat(i);
    // Independent components only: a <= b pairs, (a,b) <= (c,d).
    if (idx[0] >= idx[1] || idx[2] >= idx[3] || std::make_pair(idx[0], idx[1]) > std::make_pair(idx[2], idx[3])) continue;
    o.invariants.push_back({"R" + slot_string(idx), canonicalize(st.curvature[0][i])});
  }
  IsotropyResult iso = isotropy(st.curvature);
  o.isotropy_dim = iso.dimension;
  o.isotropy_kernel = iso.kernel;
  o.t = functionally_independent_count([&] {
          std::vector<Expr> v;
          for (auto& i : o.invariants) v.push_back(i.value);
          return v;
        }(), seed).rank;
  if (st.fix.reduced) o.notes.push_back(st.fix.note);
  st.orders.push_back(o);
  return st;
}

CartanOrder first_order_invariants(CartanState& st) {
  SpinCoefficientTable base = spin_coefficients(calibrated_tetrad(st.spec), st.geo);
  st.table = apply_boost(base, st.fix.z1, st.fix.z2);
  CartanOrder o;
  o.q = 1;
  for (Spin s : solvable_spins()) {
    Expr v = canonicalize(st.table[s]);
    if (!v.is_zero()) o.invariants.push_back({suffixed(spin_name(s)), v});
  }
  st.curvature.push_back(frame_components(covariant_derivative(st.geo.riemann, st.geo), st.frame.vectors));
  IsotropyResult iso = isotropy(st.curvature);
  o.isotropy_dim = iso.dimension;
  o.isotropy_kernel = iso.kernel;
  std::vector<CartanOrder> upto = st.orders;
  upto.push_back(o);
  o.t = functional_rank_of_orders(upto, st.seed);
  return o;
}

CartanState cartan_step(const CartanState& prev) {
  CartanState st = prev;
  if (st.orders.empty()) throw CartanError("cartan_step: zeroth order missing");
  int q = static_cast<int>(st.orders.size());
  CartanOrder o;
  if (q == 1) {
    o = first_order_invariants(st);
  } else {
    o.q = q;
    static const std::pair<FrameOp, const char*> ops[4] = {
        {FrameOp::D, "D"}, {FrameOp::Dprime, "D'"}, {FrameOp::delta, "delta"}, {FrameOp::Delta, "Delta"}};
    for (auto& inv : st.orders.back().invariants)
      for (auto& [op, name] : ops) {
        Expr d = canonicalize(frame_derivative(op, inv.value, st.table));
        if (!d.is_zero()) o.invariants.push_back({std::string(name) + " " + inv.name, d});
      }
  }
  if (q >= 2) {
    TensorField d = st.geo.riemann;
    for (int k = 0; k < q; ++k) d = covariant_derivative(d, st.geo);
    st.curvature.push_back(frame_components(d, st.frame.vectors));
    IsotropyResult iso = isotropy(st.curvature);
    o.isotropy_dim = iso.dimension;
    o.isotropy_kernel = iso.kernel;
    std::vector<CartanOrder> upto = st.orders;
    upto.push_back(o);
    o.t = functional_rank_of_orders(upto, st.seed);
  }
  st.orders.push_back(o);
  return st;
}

CartanReport run(const WalkerSpec& spec, int max_order, unsigned seed) {
  if (max_order > 7) throw CartanError("run: max_order must not exceed 7");
  CartanReport rep;
  rep.spec_name = spec.name;
  rep.bound_audit = {"q <= n + s0~ + 1 = 4 + 5 + 1 = 10", "q <= 8", "q <= n + s0 + 1 = 4 + 2 + 1 = 7"};
  {
    HolonomyAlgebra h = holonomy(spec, 0);
    rep.holonomy_label = h.label_text;
    rep.holonomy_dim = h.dimension;
  }
  CartanState st;
  try {
    st = cartan_begin(spec, seed);
  } catch (const CartanError& e) {
    rep.status = std::string("zeroth order unavailable: ") + e.what();
    Geometry geo = spec.geometry();
    CartanOrder o;
    IsotropyResult iso = isotropy({riemann_frame(geo, calibrated_tetrad(spec))});
    o.isotropy_dim = iso.dimension;
    o.isotropy_kernel = iso.kernel;
    o.notes.push_back("frame not normalized; only the isotropy dimension is recorded");
    rep.orders.push_back(o);
    return rep;
  }
  rep.fix = st.fix;
  rep.status = "bound exceeded";
  for (int q = 1; q <= max_order; ++q) {
    st = cartan_step(st);
    const CartanOrder& cur = st.orders[q];
    const CartanOrder& before = st.orders[q - 1];
    if (cur.t < before.t || cur.isotropy_dim > before.isotropy_dim) rep.monotone = false;
    if (cur.t == before.t && cur.isotropy_dim == before.isotropy_dim) {
      rep.status = "terminated";
      rep.terminal_order = q;
      break;
    }
  }
  rep.orders = st.orders;
  if (rep.terminated())
    rep.bound_audit.push_back("terminal q = " + std::to_string(rep.terminal_order) + " <= 7: " +
                              (rep.terminal_order <= 7 ? "ok" : "violated"));
  return rep;
}

std::string Verdict::text() const {
  if (distinguished) return "DistinguishedBy(" + label + ")";
  return "CompatibleUpTo(" + std::to_string(compatible_order) + ")";
}

namespace {

std::map<std::string, Expr> invariant_map(const CartanOrder& o) {
  std::map<std::string, Expr> m;
  for (auto& i : o.invariants) m[i.name] = i.value;
  return m;
}

std::vector<Expr> all_values(const CartanReport& r) {
  std::vector<Expr> v;
  for (auto& o : r.orders)
    for (auto& i : o.invariants) v.push_back(i.value);
  return v;
}

bool has_function_instances(const std::vector<Expr>& v) {
  for (auto& e : v)
    if (!function_instances(e).empty()) return true;
  return false;
}

// With one functionally independent invariant P, every other invariant is a function of P. Samples that
// relation from `a` and looks for matching values on `b` along a coordinate line.
std::optional<std::string> relation_mismatch(const CartanReport& a, const CartanReport& b, unsigned seed) {
  std::map<std::string, Expr> ia, ib;
  for (auto& o : a.orders)
    for (auto& i : o.invariants) ia[i.name] = i.value;
  for (auto& o : b.orders)
    for (auto& i : o.invariants) ib[i.name] = i.value;
  std::string pname;
  for (auto& o : a.orders)
    for (auto& i : o.invariants)
      if (pname.empty() && depends_on_coordinates(i.value) && ib.count(i.name) && depends_on_coordinates(ib[i.name]))
        pname = i.name;
  if (pname.empty()) return std::nullopt;
  int coord = -1;
  for (int c = 0; c < 4 && coord < 0; ++c)
    if (ib[pname].depends_on(c)) coord = c;
  std::vector<Expr> everything = all_values(a);
  for (auto& e : all_values(b)) everything.push_back(e);
  auto eval = [&](const Expr& e, const std::array<double, 4>& x) {
    NumericEnv env = numeric_env(everything, x, seed);
    return eval_numeric(e, env);
  };
  auto close = [](double x, double y) { return std::abs(x - y) <= 1e-7 * (1 + std::abs(x) + std::abs(y)); };
  int mismatched = 0, matched = 0;
  std::string which;
  for (auto& x : sample_points(seed + 1, 4)) {
    double target = eval(ia[pname], x);
    if (!std::isfinite(target)) continue;
    std::array<double, 4> y = x;
    auto f = [&](double s) {
      y[coord] = s;
      return eval(ib[pname], y) - target;
    };
    std::vector<double> roots;
    for (double sign : {1.0, -1.0}) {
      double prev_s = sign * 0.05, prev = f(prev_s);
      for (int k = 1; k <= 4000; ++k) {
        double s = sign * (0.05 + k * 0.005);
        double cur = f(s);
        if (std::isfinite(prev) && std::isfinite(cur) && (prev == 0 || prev * cur < 0) &&
            std::abs(prev - cur) < 1e3) {
          double lo = prev_s, hi = s, flo = prev;
          for (int it = 0; it < 200; ++it) {
            double mid = 0.5 * (lo + hi), fm = f(mid);
            if ((flo <= 0) == (fm <= 0)) {
              lo = mid;
              flo = fm;
            } else {
              hi = mid;
            }
          }
          roots.push_back(0.5 * (lo + hi));
        }
        prev_s = s;
        prev = cur;
      }
    }
    if (roots.empty()) continue;
    bool any_match = false;
    std::string bad;
    for (double r : roots) {
      y = x;
      y[coord] = r;
      bool ok = true;
      for (auto& [n, e] : ia) {
        if (!ib.count(n)) continue;
        if (!close(eval(e, x), eval(ib[n], y))) {
          ok = false;
          bad = n;
          break;
        }
      }
      any_match = any_match || ok;
    }
    if (any_match) {
      ++matched;
    } else {
      ++mismatched;
      which = bad;
    }
  }
  if (mismatched > 0 && matched == 0) return "relation " + which + "(" + pname + ")";
  return std::nullopt;
}

}  // namespace

Verdict compare(const CartanReport& a, const CartanReport& b, unsigned seed) {
  Verdict v;
  v.distinguished = true;
  if (a.holonomy_dim != b.holonomy_dim || a.holonomy_label != b.holonomy_label) {
    v.label = "holonomy " + a.holonomy_label + " vs " + b.holonomy_label;
    return v;
  }
  std::size_t n = std::min(a.orders.size(), b.orders.size());
  for (std::size_t q = 0; q < n; ++q)
    if (a.orders[q].isotropy_dim != b.orders[q].isotropy_dim) {
      v.label = "isotropy at order " + std::to_string(q);
      return v;
    }
  if (!a.terminated() || !b.terminated()) {
    v.distinguished = false;
    v.compatible_order = static_cast<int>(n) - 1;
    return v;
  }
  if (a.terminal_order != b.terminal_order) {
    v.label = "terminal order";
    return v;
  }
  for (std::size_t q = 0; q < n; ++q) {
    if (a.orders[q].t != b.orders[q].t) {
      v.label = "functional rank at order " + std::to_string(q);
      return v;
    }
    auto ma = invariant_map(a.orders[q]), mb = invariant_map(b.orders[q]);
    std::set<std::string> ka, kb;
    for (auto& [k, e] : ma) ka.insert(k);
    for (auto& [k, e] : mb) kb.insert(k);
    if (ka != kb) {
      v.label = "invariant set at order " + std::to_string(q);
      return v;
    }
    for (auto& [k, e] : ma)
      if (!depends_on_coordinates(e) && !depends_on_coordinates(mb[k]) && e != mb[k]) {
        v.label = "value of " + k;
        return v;
      }
  }
  int t = a.orders.back().t;
  std::vector<Expr> vals = all_values(a);
  for (auto& e : all_values(b)) vals.push_back(e);
  if (t == 1 && !has_function_instances(vals)) {
    if (auto m = relation_mismatch(a, b, seed)) {
      v.label = *m;
      return v;
    }
  }
  v.distinguished = false;
  v.compatible_order = a.terminal_order;
  return v;
}

std::string serialize(const CartanReport& r) {
  std::ostringstream os;
  os << "spec: " << r.spec_name << "\n";
  os << "status: " << r.status << "\n";
  os << "terminal_order: " << r.terminal_order << "\n";
  os << "holonomy: " << r.holonomy_label << "\n";
  os << "holonomy_dim: " << r.holonomy_dim << "\n";
  os << "zeroth_order:\n";
  os << "  z1: " << render(r.fix.z1) << "\n";
  os << "  z2: " << render(r.fix.z2) << "\n";
  os << "  reduced: " << (r.fix.reduced ? "true" : "false") << "\n";
  os << "  fixed:\n";
  for (auto& f : r.fix.fixed)
    os << "    - R" << slot_string({f.slots[0], f.slots[1], f.slots[2], f.slots[3]}) << ": " << render(f.before)
       << " -> " << render(f.after) << "\n";
  os << "orders:\n";
  for (auto& o : r.orders) {
    os << "  - q: " << o.q << "\n";
    os << "    t: " << o.t << "\n";
    os << "    isotropy_dim: " << o.isotropy_dim << "\n";
    os << "    isotropy_kernel:\n";
    for (auto& k : o.isotropy_kernel) os << "      - " << k << "\n";
    os << "    invariants:\n";
    for (auto& i : o.invariants) os << "      - " << i.name << ": " << render(i.value) << "\n";
    if (!o.notes.empty()) {
      os << "    notes:\n";
      for (auto& n : o.notes) os << "      - " << n << "\n";
    }
  }
  os << "bound_audit:\n";
  for (auto& b : r.bound_audit) os << "  - " << b << "\n";
  os << "monotone: " << (r.monotone ? "true" : "false") << "\n";
  return os.str();
}

}  // namespace vsw
