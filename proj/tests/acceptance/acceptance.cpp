#include <algorithm>
#include <chrono>
#include <cmath>
#include <functional>
#include <iostream>
#include <random>
#include <set>
#include <sstream>

#include "../oracle/fixtures.inc"
#include "../support/corpus.hpp"
#include "vsw/cartan.hpp"
#include "vsw/frame.hpp"
#include "vsw/holonomy.hpp"
#include "vsw/walker.hpp"

using namespace vsw;
using namespace vsw::testing;

namespace {

struct Outcome {
  bool pass = true;
  std::vector<std::string> details;
  std::vector<std::string> failures;

  void check(bool ok, const std::string& what) {
    if (ok) return;
    pass = false;
    failures.push_back(what);
  }
  void note(const std::string& s) { details.push_back(s); }
};

// Criteria that cannot pass as stated; the reason is printed with the FAIL line.
const std::map<int, std::string> kDocumentedDefects = {
    {4, "Psi depends on v and V unless B10,u = 0"},
    {5, "Example 1 closure is span{l1^n1 + l2^n2, l1^l2}, non-abelian, not A10"},
    {8, "printed boost formulas are not realizable in any frame"},
};

Expr coordinate(int c) { return Expr::coordinate(c); }

// ---------------------------------------------------------------- 1

Outcome walker_recurrence() {
  Outcome o;
  // B03 and B11 lie outside this family; B11 would add v*B11 to k_U.
  std::vector<std::string> keys;
  for (auto& k : kWalkerKeys)
    if (k != "B03" && k != "B11") keys.push_back(k);
  std::string text = "[functions]\n";
  for (auto& k : keys) text += k + "(u,U) ";
  text += "\n[metric]\n";
  for (auto& k : keys) text += k + " = " + k + "\n";
  WalkerSpec s = parse_spec(text, "walker-general");
  RecurrenceForm r = invariant_plane_check(s);
  o.check(r.factorizable, "nabla(l1^l2) does not factor");
  Vector4 k;
  k[u] = s.coeff("C2") / Expr(2) + s.coeff("A1");
  k[U] = s.coeff("B10") + s.coeff("C11") / Expr(2);
  for (int c = 0; c < 4; ++c) o.check(r.k[c] == k[c], std::string("k_") + coord_name(c) + " = " + render(r.k[c]));
  o.note("k = (" + render(r.k[u]) + ") du + (" + render(r.k[U]) + ") dU");
  return o;
}

// ---------------------------------------------------------------- 2

ConstantBranch bullet(const Context& ctx, std::vector<std::pair<std::string, std::string>> kv) {
  ConstantBranch b;
  for (auto& [k, t] : kv) b.assignments.emplace_back(k, parse(t, ctx));
  return b;
}

Outcome example1_ricci() {
  Outcome o;
  Example1Constants c = Example1Constants::symbolic();
  WalkerSpec s = build_example1(c);
  Geometry geo = s.geometry();
  std::vector<std::pair<int, int>> nz;
  for (int i = 0; i < 4; ++i)
    for (int j = i; j < 4; ++j)
      if (!geo.ricci.at({i, j}).is_zero()) nz.emplace_back(i, j);
  o.check(nz.size() == 1 && nz[0] == std::make_pair(int(u), int(U)), "Ricci has " + std::to_string(nz.size()) + " nonzero components");
  Expr ric = geo.ricci.at({u, U});
  o.check(ric == example1_ricci13_reference(c), "R_uU differs from the printed component");
  o.check(ric == parse(kSympyFixtures.at("ex1.ricci_uU"), s.ctx), "R_uU differs from the independent computation");

  WalkerSpec flat = build_example1(Example1Constants::ricci_flat());
  o.check(flat.geometry().ricci.is_zero(), "constant conditions do not annihilate Ricci");

  auto zero = example1_constant_branches(true);
  auto nonzero = example1_constant_branches(false);
  const Context& ctx = s.ctx;
  std::vector<std::pair<std::string, ConstantBranch>> printed = {
      {"c1=0 #1", bullet(ctx, {{"c1", "0"}, {"alpha", "0"}, {"beta", "2*a*c2*alpha/d"}})},
      {"c1=0 #2", bullet(ctx, {{"c1", "0"}, {"alpha", "0"}, {"d", "0"}, {"a", "0"}})},
      {"c1=0 #3", bullet(ctx, {{"c1", "0"}, {"alpha", "0"}, {"d", "0"}, {"c2", "0"}})},
      {"c1=0 #4", bullet(ctx, {{"c1", "0"}, {"c2", "0"}, {"d", "0"}})},
      {"c1=0 #5", bullet(ctx, {{"c1", "0"}, {"c2", "0"}, {"beta", "2*alpha"}})},
      {"c1=c2", bullet(ctx, {{"c2", "c1"}, {"beta", "2*alpha"}})},
  };
  std::vector<ConstantBranch> derived;
  for (auto b : zero) {
    b.assignments.insert(b.assignments.begin(), {"c1", Expr(0)});
    derived.push_back(b);
  }
  for (auto& b : nonzero) {
    bool degenerate = false;
    for (auto& [k, e] : b.assignments) degenerate = degenerate || k == "c2";
    if (degenerate) derived.push_back(b);
  }
  o.check(derived.size() == 6, "derived " + std::to_string(derived.size()) + " degenerate patterns, expected 6");

  // Each derived branch must kill the Ricci tensor.
  for (auto& b : derived) {
    Bindings bind = b.bindings();
    bool ok = true;
    for (std::size_t i = 0; i < geo.ricci.size(); ++i) ok = ok && numerator(substitute(geo.ricci[i], bind)).is_zero();
    o.check(ok, "derived branch {" + b.text() + "} leaves a Ricci residual");
  }
  int matched = 0;
  for (auto& [label, pb] : printed) {
    auto it = std::find_if(derived.begin(), derived.end(), [&](const ConstantBranch& d) { return branches_equivalent(d, pb); });
    if (it != derived.end()) {
      ++matched;
      o.note(label + ": matches {" + it->text() + "}");
      continue;
    }
    // Report the closest derived pattern: same assigned names.
    std::set<std::string> names;
    for (auto& [k, e] : pb.assignments) names.insert(k);
    std::string closest = "none";
    for (auto& d : derived) {
      std::set<std::string> dn;
      for (auto& [k, e] : d.assignments) dn.insert(k);
      if (dn == names) closest = d.text();
    }
    o.note(label + ": MISMATCH printed {" + pb.text() + "}, derived {" + closest + "}");
  }
  o.note(std::to_string(matched) + "/6 printed patterns reproduced; mismatches listed above");
  return o;
}

// ---------------------------------------------------------------- 3

Outcome vsi() {
  Outcome o;
  for (auto name : {"example1.wspec", "example2.wspec"}) {
    Geometry geo = load_spec(spec_path(name)).geometry();
    InvariantList inv = scalar_invariants(geo, 2);
    int zero = 0;
    for (auto& [n, e] : inv) zero += e.is_zero();
    o.check(inv.size() == 14, std::string(name) + ": invariant list has " + std::to_string(inv.size()) + " entries");
    o.check(zero == static_cast<int>(inv.size()), std::string(name) + ": nonzero invariant");
    o.note(std::string(name) + ": " + std::to_string(zero) + "/" + std::to_string(inv.size()) + " zero");
  }
  for (auto name : {"example1.wspec", "example2.wspec"}) {
    TensorField g = load_spec(spec_path(name)).metric();
    g.at({U, U}) = g.at({U, U}) + Expr(2) * coordinate(v) * coordinate(v);  // B00 + v^2
    g.at({u, u}) = g.at({u, u}) + Expr(2) * coordinate(V) * coordinate(V);  // A0 + V^2
    InvariantList inv = scalar_invariants(Geometry::compute(g), 2);
    std::string first;
    for (auto& [n, e] : inv)
      if (!e.is_zero() && first.empty()) first = n + " = " + render(e);
    o.check(!first.empty(), std::string(name) + " perturbed by v^2, V^2 is still VSI");
    o.note(std::string(name) + " perturbed: " + first);
  }
  WalkerSpec s = load_spec(spec_path("example2-subcase.wspec"));
  TensorField g = s.metric();
  g.at({v, v}) = coordinate(u);  // d_v no longer null
  InvariantList inv = scalar_invariants(Geometry::compute(g), 2);
  std::string first;
  for (auto& [n, e] : inv)
    if (!e.is_zero() && first.empty()) first = n + " = " + render(e);
  o.check(!first.empty(), "control metric is VSI");
  o.note("control: " + first);
  return o;
}

// ---------------------------------------------------------------- 4

// Component printed as Psi, in terms of A0, A1, C11 before they are expanded.
const char* kPrintedPsi =
    "-C0_{u,U} + B00_{u,u} - 3*v^2*A1*B02_{u} - 2*v^2*A1_{u}*B02 - B10*v*C11_{u} + B10*v*A1_{U} + A1*V*B10_{u}"
    " - A1*B10*C0 + 2*v^2*A1^2*B02 + B10*C11*A0 + (1/2)*v*C11*C11_{u} - 4*A0*v*B02_{u} - 2*A0_{u}*v*B02"
    " - v*A1*B01_{u} - v*A1_{u}*B01 + 4*v*A1*B02*A0 + A0_{U,U} + v^2*B02_{u,u} + V*B10_{u,u} - 2*A0*B01_{u}"
    " - A0_{u}*B01 - B10*C0_{u} - B10_{u}*C0 - A1*C0_{U} - A1_{U}*C0 + v*A1_{U,U} + C11*A0_{U} + C11_{U}*A0"
    " + 2*A0^2*B02 + (1/2)*C11_{u}*C0 - v*C11_{u,U} + v*B01_{u,u} + A1*B00_{u} + B10*A0_{U} - B10_{u}*v*C11";

bool same_prediction(const IndexConvention& a, const IndexConvention& b) {
  if (a.slot != b.slot || a.overall != b.overall) return false;
  // Components are products of four label signs, so a flip of all four predicts the same values.
  bool flipped = true;
  for (int i = 0; i < 4; ++i) flipped = flipped && a.sign[i] == -b.sign[i];
  return a.sign == b.sign || flipped;
}

Outcome example2_riemann() {
  Outcome o;
  WalkerSpec s = load_spec(spec_path("example2.wspec"));
  Geometry geo = s.geometry();
  auto vecs = walker_frame_vectors(s);
  TensorField R = frame_components(geo.riemann, vecs);

  Context ctx = s.ctx;
  for (auto n : {"A0", "A1", "C11"}) ctx.declare_function(n, {u, U});
  Bindings expand;
  for (auto n : {"A0", "A1", "C11"}) expand.functions[n] = s.coeff(n);
  Expr psi = canonicalize(substitute(parse(kPrintedPsi, ctx), expand));
  Expr b10u = diff(Expr::function("B10", {u, U}), u);
  Expr b02 = Expr::function("B02", {u, U});

  // Printed components, 1-based.
  std::map<std::array<int, 4>, Expr> printed = {
      {{1, 2, 2, 4}, b10u}, {{2, 4, 3, 4}, b10u}, {{2, 3, 2, 3}, Expr(2) * b02}, {{2, 4, 2, 4}, psi}};
  auto full = [&](const std::map<std::array<int, 4>, Expr>& p) {
    std::map<std::array<int, 4>, Expr> f;
    for (auto& [k, e] : p) {
      auto [a, b, c, d] = k;
      for (auto [q, sg] : std::vector<std::pair<std::array<int, 4>, int>>{
               {{a, b, c, d}, 1}, {{b, a, c, d}, -1}, {{a, b, d, c}, -1}, {{b, a, d, c}, 1},
               {{c, d, a, b}, 1}, {{d, c, a, b}, -1}, {{c, d, b, a}, -1}, {{d, c, b, a}, 1}})
        f[q] = sg > 0 ? e : -e;
    }
    return f;
  };
  auto P = full(printed);

  std::vector<IndexConvention> found;
  std::array<int, 4> perm{0, 1, 2, 3};
  do {
    for (int mask = 0; mask < 16; ++mask)
      for (int global : {1, -1}) {
        IndexConvention m{perm, {}, global};
        for (int i = 0; i < 4; ++i) m.sign[i] = (mask >> i) & 1 ? -1 : 1;
        bool ok = true;
        // Pattern first, then the cheap components, Psi last.
        for (int pass = 0; pass < 2 && ok; ++pass)
          for (int i = 1; i <= 4 && ok; ++i)
            for (int j = 1; j <= 4 && ok; ++j)
              for (int k = 1; k <= 4 && ok; ++k)
                for (int l = 1; l <= 4 && ok; ++l) {
                  const Expr& mine = R.at({m.slot[i - 1], m.slot[j - 1], m.slot[k - 1], m.slot[l - 1]});
                  auto it = P.find({i, j, k, l});
                  if (it == P.end()) {
                    ok = mine.is_zero();
                    continue;
                  }
                  bool is_psi = it->second.term_count() > 4;
                  if (is_psi != (pass == 1)) {
                    if (mine.is_zero()) ok = false;
                    continue;
                  }
                  int sg = m.overall * m.sign[i - 1] * m.sign[j - 1] * m.sign[k - 1] * m.sign[l - 1];
                  ok = mine == (sg > 0 ? it->second : -it->second);
                }
        if (ok) found.push_back(m);
      }
  } while (std::next_permutation(perm.begin(), perm.end()));
  bool persisted = std::any_of(found.begin(), found.end(), [](const IndexConvention& m) { return same_prediction(m, kExample2Labels); });
  o.check(!found.empty(), "no index permutation reproduces {2B02, B10,u, Psi}");
  o.check(persisted, "search result differs from the stored label convention");
  o.note(std::to_string(found.size()) + " signed permutations reproduce the printed set; stored convention among them: " +
         (persisted ? "yes" : "no"));

  Expr dv = canonicalize(diff(psi, v)), dV = canonicalize(diff(psi, V));
  o.note("d(Psi)/dv = " + render(dv));
  o.note("d(Psi)/dV = " + render(dV));
  o.check(dv.is_zero() && dV.is_zero(), "Psi depends on v or V for generic Example 2");
  const Expr& frame_psi = R.at({1, 3, 1, 3});
  o.check(diff(frame_psi, v) == parse(kSympyFixtures.at("ex2.dPsi_dv"), s.ctx) &&
              diff(frame_psi, V) == parse(kSympyFixtures.at("ex2.dPsi_dV"), s.ctx),
          "R(n1,n2,n1,n2) derivatives disagree with the independent computation");

  WalkerSpec h = apply_branches(s, {"B10u=0"});
  Bindings hb;
  hb.functions["B10"] = h.coeff("B10");
  Expr psi_h = canonicalize(substitute(psi, hb));
  bool restricted = diff(psi_h, v).is_zero() && diff(psi_h, V).is_zero();
  o.note(std::string("with B10 = H(U): Psi independent of v, V: ") + (restricted ? "yes" : "no"));
  if (!restricted) o.check(false, "Psi depends on v, V even when B10,u = 0");
  return o;
}

// ---------------------------------------------------------------- 5

Outcome holonomy_criterion() {
  Outcome o;
  WalkerSpec s1 = load_spec(spec_path("example1.wspec"));
  Geometry geo = s1.geometry();
  auto vecs = walker_frame_vectors(s1);
  HolonomyAlgebra alg = holonomy(s1, 0);
  o.check(alg.dimension == 2, "Example 1 dimension " + std::to_string(alg.dimension));

  auto endo = [&](const Bivector& b) { return b.endomorphism(geo.g); };
  Bivector l1n1 = Bivector::wedge(vecs[0], vecs[1]), l2n2 = Bivector::wedge(vecs[2], vecs[3]),
           l1l2 = Bivector::wedge(vecs[0], vecs[2]);
  bool minus = in_span(alg, endo(l1n1 - l2n2)), plus = in_span(alg, endo(l1n1 + l2n2)), null = in_span(alg, endo(l1l2));
  o.check(minus && null, "closure is not span{l1^n1 - l2^n2, l1^l2}");
  o.note(std::string("l1^n1 - l2^n2 in closure: ") + (minus ? "yes" : "no") + "; l1^n1 + l2^n2: " + (plus ? "yes" : "no") +
         "; l1^l2: " + (null ? "yes" : "no"));
  o.check(alg.label_text == "WH-2(d)/A10", "Example 1 classified " + alg.label_text);
  for (auto& n : alg.notes) o.note("Example 1: " + n);

  Bivector h = (plus ? l1n1 + l2n2 : l1n1 - l2n2) * Expr::rational(1, 2), e = l1l2 * Expr::rational(1, 2);
  Expr ph = canonicalize(p_metric(h, h, geo.g)), pe = canonicalize(p_metric(e, e, geo.g));
  o.note("P-norms (" + render(ph) + ", " + render(pe) + ")");
  o.check(ph == Expr(-1) && pe.is_zero(), "P-norms are not (-1, 0)");

  HolonomyAlgebra alg1 = holonomy(s1, 1);
  o.check(alg1.dimension == alg.dimension, "derivative contractions enlarge Example 1");

  struct Case {
    std::vector<std::string> branch;
    int dim;
    std::string label;
  };
  WalkerSpec s2 = load_spec(spec_path("example2.wspec"));
  for (auto& c : std::vector<Case>{{{}, 3, "A26"}, {{"B10u=0"}, 2, "A17"}, {{"Psi=0"}, 1, "A9"}}) {
    WalkerSpec b = apply_branches(s2, c.branch);
    HolonomyAlgebra a0 = holonomy(b, 0), a1 = holonomy(b, 1);
    std::string tag = "Example 2 " + (c.branch.empty() ? std::string("generic") : c.branch[0]);
    o.check(a0.dimension == c.dim && a0.label_text == c.label, tag + ": " + a0.label_text + " dim " + std::to_string(a0.dimension));
    o.check(a1.dimension == a0.dimension, tag + ": derivative contractions enlarge the algebra");
    o.note(tag + ": dim " + std::to_string(a0.dimension) + ", " + a0.label_text);
  }
  return o;
}

// ---------------------------------------------------------------- 6

Outcome recurrent() {
  Outcome o;
  Expr k0 = Expr::constant("k0");
  Example1Constants c = Example1Constants::ricci_flat();
  RecurrentFamily tanh_f = recurrent_family_example1(k0, c);
  o.check(tanh_f.residual0.is_zero() && tanh_f.residual1.is_zero(), "tanh family residuals");
  o.check(tanh_f.h == Expr(2) * c.alpha / c.c1 * tanh_f.f, "h != (2 alpha/c1) f");

  Example1Constants z = c;
  z.alpha = z.a = z.beta = Expr(0);
  RecurrentFamily log_f = recurrent_family_example1(k0, z);
  o.check(log_f.residual0.is_zero() && log_f.residual1.is_zero(), "logarithmic family residuals");
  o.check(log_f.h == Expr(1) / log_f.f, "h~ != 1/f~");

  // Direct recurrence of d_v + f d_V in the Ricci-flat metric.
  for (auto [fam, cc, label] : {std::tuple{&tanh_f, c, "tanh"}, std::tuple{&log_f, z, "log"}}) {
    Geometry geo = build_example1(cc).geometry();
    RecurrenceResult r = verify_recurrent(Vector4{Expr(0), Expr(1), Expr(0), fam->f}, geo);
    o.check(r.recurrent, std::string(label) + ": d_v + f d_V is not recurrent");
  }

  Bindings k1, k2;
  k1.constants["k0"] = Expr::constant("k1");
  k2.constants["k0"] = Expr::constant("k2");
  for (auto* fam : {&tanh_f, &log_f}) {
    Expr det = substitute(fam->f, k2) - substitute(fam->f, k1);  // minor of (d_v + f1 d_V, d_v + f2 d_V)
    o.check(!det.is_zero(), "members with k1 != k2 are dependent");
  }

  WalkerSpec s2 = load_spec(spec_path("example2.wspec"));
  Geometry g2 = s2.geometry();
  TensorField dX = covariant_derivative(vector_field(Vector4{Expr(0), Expr(0), Expr(0), Expr(1)}), g2);
  bool form = true;
  for (int a = 0; a < 4; ++a)
    for (int b = 0; b < 4; ++b) form = form && dX.at({a, b}) == (a == V && b == U ? s2.coeff("B10") : Expr(0));
  o.check(form, "nabla d_V != B10 d_V (x) dU");

  WalkerSpec zero = load_spec(spec_path("example2.wspec"));
  zero.branches["B10=0"]["B10"] = "0";
  for (auto [spec, expect] : {std::pair{apply_branches(zero, {"B10=0"}), true}, std::pair{s2, false},
                              std::pair{apply_branches(s2, {"B10u=0"}), false}}) {
    RecurrenceResult r = verify_recurrent(Vector4{Expr(0), Expr(0), Expr(0), Expr(1)}, spec.geometry());
    o.check(r.recurrent && r.parallel() == expect, spec.name + ": parallel = " + (r.parallel() ? "yes" : "no"));
  }
  return o;
}

// ---------------------------------------------------------------- 7

WalkerSpec random_walker(std::mt19937& rng, int i) {
  std::uniform_int_distribution<int> coin(0, 1), small(1, 3);
  auto poly = [&]() {
    std::ostringstream s;
    s << small(rng) << "*u + " << small(rng) << "*U^" << small(rng) << " + " << small(rng);
    return s.str();
  };
  std::ostringstream t;
  t << "[metric]\n";
  for (auto k : {"A0", "A1", "B00", "B10", "C0", "C11", "C2"}) t << k << " = " << poly() << "\n";
  for (auto k : {"A2", "B01", "B02", "B03", "B11"})
    if (coin(rng)) t << k << " = " << poly() << "\n";
  return parse_spec(t.str(), "random-" + std::to_string(i));
}

Outcome kundt() {
  Outcome o;
  std::mt19937 rng(20240611);
  int cases[2][2] = {{0, 0}, {0, 0}};  // [vector][kundt]
  for (int i = 0; i < 20; ++i) {
    WalkerSpec s = random_walker(rng, i);
    Geometry geo = s.geometry();
    KundtResult k = kundt_classify(s);
    bool direct[2];
    for (int w = 0; w < 2; ++w) {
      Vector4 x{Expr(0), Expr(w == 0 ? 1 : 0), Expr(0), Expr(w == 1 ? 1 : 0)};
      direct[w] = kinematics(x, geo).kundt();
      cases[w][direct[w]]++;
    }
    // L1 is the A,V = 0 condition, witnessed by d_V; L2 is B,v = B,vv = 0, witnessed by d_v.
    bool along1 = k.verdict == KundtVerdict::AlongL1 || k.verdict == KundtVerdict::Doubly;
    bool along2 = k.verdict == KundtVerdict::AlongL2 || k.verdict == KundtVerdict::Doubly;
    o.check(along1 == direct[1] && along2 == direct[0], s.name + ": verdict " + to_string(k.verdict) + " vs direct kinematics");
  }
  for (int w = 0; w < 2; ++w)
    o.check(cases[w][0] > 0 && cases[w][1] > 0, "random specs do not cover both directions for vector " + std::to_string(w));
  o.note("coverage d_v: " + std::to_string(cases[0][1]) + " Kundt / " + std::to_string(cases[0][0]) + " not; d_V: " +
         std::to_string(cases[1][1]) + " / " + std::to_string(cases[1][0]));

  Geometry g2 = load_spec(spec_path("example2.wspec")).geometry();
  KinematicScalars k2 = kinematics(Vector4{Expr(0), Expr(0), Expr(0), Expr(1)}, g2);
  o.check(k2.geodesic_zero() && k2.expansion_free() && k2.shear_free() && k2.twist_free(), "Example 2 d_V is not Kundt");
  Geometry g1 = load_spec(spec_path("example1-generic.wspec")).geometry();
  for (int w = 0; w < 2; ++w) {
    Vector4 x{Expr(0), Expr(w == 0 ? 1 : 0), Expr(0), Expr(w == 1 ? 1 : 0)};
    o.check(!kinematics(x, g1).shear_free(), "Example 1 generic vector " + std::to_string(w) + " is shear-free");
  }
  return o;
}

// ---------------------------------------------------------------- 8

// B10 = f(U), B00 = 0, B02 = exp(W(u) + Z(U)).
WalkerSpec section5_spec() {
  Context ctx;
  for (auto n : {"B01", "C0"}) ctx.declare_function(n, {u, U});
  ctx.declare_function("W", {u});
  for (auto n : {"Z", "f", "G"}) ctx.declare_function(n, {U});
  Example2Inputs in{exp(Expr::function("W", {u}) + Expr::function("Z", {U})), Expr::function("f", {U}),
                    Expr::function("B01", {u, U}), Expr(0), Expr::function("C0", {u, U}), Expr::function("G", {U})};
  WalkerSpec s = build_example2(in, ctx);
  s.name = "section5";
  return s;
}

bool tables_equal(const SpinCoefficientTable& a, const SpinCoefficientTable& b, std::string* which) {
  for (Spin s : all_spins())
    if (a[s] != b[s]) {
      if (which) *which = spin_name(s);
      return false;
    }
  return true;
}

Outcome transformation_laws() {
  Outcome o;
  WalkerSpec s = section5_spec();
  Geometry geo = s.geometry();
  Tetrad base = calibrated_tetrad(s);
  SpinCoefficientTable t = spin_coefficients(base, geo);
  for (auto n : {"z1", "z2", "mu", "mut"}) s.ctx.declare_function(n, {u, U});
  Expr z1 = Expr::function("z1", {u, U}), z2 = Expr::function("z2", {u, U});
  Expr mu = Expr::function("mu", {u, U}), mut = Expr::function("mut", {u, U});

  std::vector<std::pair<std::string, LabelMatrix>> moves = {{"boost", boost_matrix(z1, z2)},
                                                            {"l-rotation", null_rotation_l_matrix(mu, mut)}};
  for (auto& [name, M] : moves) {
    SpinCoefficientTable recomputed = spin_coefficients(transform_tetrad(base, M), geo);
    std::string which;
    o.check(tables_equal(recomputed, transform_table(t, M), &which), name + ": table law differs at " + which);
  }
  std::string which;
  o.check(tables_equal(spin_coefficients(transform_tetrad(base, boost_matrix(z1, z2)), geo), apply_boost(t, z1, z2), &which),
          "apply_boost differs at " + which);
  o.check(tables_equal(spin_coefficients(transform_tetrad(base, null_rotation_l_matrix(mu, mut)), geo),
                       apply_null_rotation_l(t, mu, mut), &which),
          "apply_null_rotation_l differs at " + which);

  // Numeric: concrete metric functions and parameters at random points.
  std::mt19937 rng(99);
  std::uniform_int_distribution<int> q(2, 9);
  double worst = 0;
  for (int draw = 0; draw < 20; ++draw) {
    Bindings fb = concrete_functions(s.ctx, rng());
    WalkerSpec c = s;
    for (auto& [k, e] : c.coeffs) e = canonicalize(substitute(e, fb));
    Geometry gc = c.geometry();
    Tetrad bc = calibrated_tetrad(c);
    SpinCoefficientTable tc = spin_coefficients(bc, gc);
    Expr a = Expr::rational(q(rng), 3) + coordinate(u) * Expr::rational(1, q(rng));
    Expr b = Expr::rational(q(rng), 4) + coordinate(U) * Expr::rational(1, q(rng));
    LabelMatrix M = draw % 2 ? boost_matrix(a, b) : null_rotation_l_matrix(a, b);
    SpinCoefficientTable lhs = spin_coefficients(transform_tetrad(bc, M), gc), rhs = transform_table(tc, M);
    NumericEnv env;
    env.point = {q(rng) / 5.0, q(rng) / 7.0, q(rng) / 5.0, q(rng) / 7.0};
    for (Spin sp : all_spins()) worst = std::max(worst, std::abs(eval_numeric(lhs[sp] - rhs[sp], env)));
  }
  o.check(worst < 1e-9, "numeric law mismatch " + std::to_string(worst));
  o.note("numeric: worst |difference| over 20 draws = " + std::to_string(worst));

  o.check(tables_equal(prime(prime(t)), t, &which), "prime is not an involution");
  o.check(tables_equal(apply_discrete(apply_discrete(t, cross_swap()), cross_swap()), t, &which), "x-swap is not an involution");

  // Printed boosted coefficients, entry by entry. The printed labels may differ from ours by a discrete
  // relabeling, and the parameters may enter as z or 1/z in either plane; every combination is tried.
  auto d = [](const Expr& e, int c) { return diff(e, c); };
  auto printed = [&](const SpinCoefficientTable& b, const SpinCoefficientTable& t) {
    return std::vector<std::tuple<std::string, Expr, Expr>>{
        {"alpha'", b["alpha'"], Expr::rational(-1, 4) * (d(z1, U) / (z1 * z2) + d(z2, U) / (z2 * z2))},
        {"alpha", b["alpha"], z2 * t["alpha"] / Expr(2)},
        {"alpha~'", b["alpha~'"], z2 * t["alpha~'"] / Expr(2)},
        {"alpha~", b["alpha~"], Expr::rational(1, 4) * (d(z2, U) / (z2 * z2) - d(z1, U) / (z1 * z2))},
        {"gamma", b["gamma"], z1 * t["gamma"]},
        {"gamma'", b["gamma'"], Expr::rational(1, 4) * (d(z1, u) / (z1 * z1) + d(z2, u) / (z1 * z2))},
        {"gamma~", b["gamma~"], t["gamma~"]},
        {"gamma~'", b["gamma~'"], Expr::rational(1, 4) * (d(z1, u) / (z1 * z1) - d(z2, u) / (z1 * z2))},
        {"sigma'", b["sigma'"], z1 * z2 * z2 * t["sigma'"] / Expr(2)},
        {"kappa'", b["kappa'"], z1 * z1 * z2 * t["kappa'"] / Expr(2)},
        {"rho~'", b["rho~'"], z1 * t["rho~'"] / Expr(2)},
        {"kappa~'", b["kappa~'"], z1 * z1 * t["kappa~'"] / (Expr(2) * z2 * z2)},
    };
  };
  std::vector<std::pair<std::string, Expr>> params = {{"z1", z1}, {"1/z1", Expr(1) / z1}, {"z2", z2}, {"1/z2", Expr(1) / z2}};
  std::size_t best = 0, total = 0, best_trivial = 0;
  std::string best_label, best_miss;
  auto perms = admissible_perms();
  for (std::size_t pi = 0; pi < perms.size(); ++pi) {
    SpinCoefficientTable tp = apply_discrete(t, perms[pi]);
    for (auto& [na, pa] : params)
      for (auto& [nb, pb] : params) {
        if (na.back() == nb.back()) continue;
        std::size_t hit = 0, trivial = 0;
        std::string miss;
        auto rows = printed(apply_boost(tp, pa, pb), tp);
        total = rows.size();
        for (auto& [name, mine, theirs] : rows) {
          if (mine == theirs) {
            ++hit;
            trivial += mine.is_zero();
          } else {
            miss += (miss.empty() ? "" : ", ") + name;
          }
        }
        if (hit - trivial > best - best_trivial || best_label.empty()) {
          best = hit;
          best_trivial = trivial;
          best_label = "relabeling " + std::to_string(pi) + ", (" + na + ", " + nb + ")";
          best_miss = miss;
        }
      }
  }
  o.note("printed boost formulas: best of 32 relabelings x 8 parameter assignments (" + best_label + ") reproduces " +
         std::to_string(best) + "/" + std::to_string(total) + " (" + std::to_string(best_trivial) + " of them as 0 = 0)" +
         (best_miss.empty() ? "" : "; differing: " + best_miss));
  // At z1 = z2 = 1 the boost is the identity, so a rule X_B = c X with c != 1 forces X = 0.
  SpinCoefficientTable same = apply_boost(t, Expr(1), Expr(1));
  o.check(tables_equal(same, t, nullptr), "identity boost changes the table");
  o.note("identity boost: rules of the form X_B = (1/2) z X require X = 0, yet those X are listed as non-vanishing");
  o.check(best == total, "printed boost formulas not recovered");
  return o;
}

// ---------------------------------------------------------------- 9

Outcome cartan_subcase() {
  Outcome o;
  WalkerSpec s = load_spec(spec_path("example2-subcase.wspec"));
  CartanReport r = run(s, 7, 7);
  o.check(r.terminated() && r.terminal_order == 2, "terminal order " + std::to_string(r.terminal_order) + " (" + r.status + ")");
  if (r.orders.size() < 3) {
    o.check(false, "fewer than three orders computed");
    return o;
  }
  auto names = [](const CartanOrder& q) {
    std::set<std::string> n;
    for (auto& i : q.invariants) n.insert(i.name);
    return n;
  };
  o.check(r.orders[0].t == 0, "t0 = " + std::to_string(r.orders[0].t));
  o.check(names(r.orders[1]) == std::set<std::string>{"gamma_B", "gamma~_B"}, "first-order invariants differ");
  o.check(r.orders[1].isotropy_dim == 2, "dim H1 = " + std::to_string(r.orders[1].isotropy_dim));
  bool about_l = r.orders[1].isotropy_kernel.size() == 2;
  for (auto& k : r.orders[1].isotropy_kernel) about_l = about_l && k.find("rot_l") != std::string::npos;
  o.check(about_l, "first-order isotropy is not the pair of null rotations about l");
  o.check(names(r.orders[2]) == std::set<std::string>{"D' gamma_B", "D' gamma~_B"}, "second-order invariants differ");
  std::map<std::string, Expr> first;
  for (auto& i : r.orders[1].invariants) {
    first[i.name] = i.value;
    o.check(diff(i.value, u).is_zero() && diff(i.value, v).is_zero() && diff(i.value, V).is_zero(), i.name + " depends on u, v or V");
  }
  // n = z1 (d_U + ...) in the fixed frame and the first-order invariants depend on U only.
  for (auto& i : r.orders[2].invariants) {
    std::string base = i.name.substr(3);
    o.check(first.count(base) && i.value == r.fix.z1 * diff(first[base], U), i.name + " != z1 d_U " + base);
  }
  o.check(r.orders[1].t == 1 && r.orders[2].t == 1, "t1, t2 != 1");
  o.check(r.orders[2].isotropy_dim == 2, "dim H2 = " + std::to_string(r.orders[2].isotropy_dim));
  bool audit = !r.bound_audit.empty() && r.bound_audit.back().find("ok") != std::string::npos && r.terminal_order <= 7;
  o.check(audit, "bound audit q <= 7 fails");
  for (auto& q : r.orders) {
    std::string line = "q = " + std::to_string(q.q) + ": t = " + std::to_string(q.t) + ", dim H = " + std::to_string(q.isotropy_dim) + ", {";
    for (std::size_t i = 0; i < q.invariants.size() && q.q > 0; ++i) line += (i ? ", " : "") + q.invariants[i].name;
    o.note(line + "}");
  }
  return o;
}

// ---------------------------------------------------------------- 10

Outcome property_suites() {
  Outcome o;
  int specs = 0;
  for (auto& s : corpus()) {
    ++specs;
    PropertyReport p = check_properties(s, 7);
    for (auto& f : p.failures) o.check(false, s.name + ": " + f);
  }
  o.note(std::to_string(specs) + " specs (files and branches)");
  return o;
}

}  // namespace

int main() {
  std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
      {"Walker recurrence factor", walker_recurrence},
      {"Example 1 Ricci and constant patterns", example1_ricci},
      {"VSI invariants", vsi},
      {"Example 2 Riemann", example2_riemann},
      {"Holonomy classification", holonomy_criterion},
      {"Recurrent vectors", recurrent},
      {"Kundt proposition", kundt},
      {"Transformation laws", transformation_laws},
      {"Cartan algorithm subcase", cartan_subcase},
      {"Property suites on the corpus", property_suites},
  };
  int undocumented = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    int id = static_cast<int>(i) + 1;
    auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o.check(false, std::string("exception: ") + e.what());
    }
    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    auto defect = kDocumentedDefects.find(id);
    std::string status = o.pass ? "PASS" : defect != kDocumentedDefects.end() ? "FAIL (documented: " + defect->second + ")" : "FAIL";
    std::printf("criterion %2d %-40s %s [%.1fs]\n", id, criteria[i].first.c_str(), status.c_str(), secs);
    for (auto& f : o.failures) std::printf("    - %s\n", f.c_str());
    for (auto& d : o.details) std::printf("    . %s\n", d.c_str());
    if (!o.pass && defect == kDocumentedDefects.end()) ++undocumented;
    if (o.pass && defect != kDocumentedDefects.end()) std::printf("    note: documented defect no longer reproduces\n");
  }
  return undocumented == 0 ? 0 : 1;
}
