#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "vsw/cartan.hpp"
#include "vsw/frame.hpp"
#include "vsw/holonomy.hpp"
#include "vsw/walker.hpp"

using json = nlohmann::ordered_json;
using namespace vsw;

namespace {

struct InputError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct RunConfig {
  std::string command;
  std::vector<std::string> inputs;
  std::string format = "text";
  std::optional<int> order;
  std::vector<std::string> branches;
  unsigned seed = 7;
  std::string out;
};

struct Report {
  json result = json::object();
  std::ostringstream text;
  int exit_code = 0;
};

const char* kVectorNames[4] = {"∂_v", "n1", "∂_V", "n2"};
const char* kFrameNames[4] = {"l1", "n1", "l2", "n2"};

std::string count_word(std::size_t n) {
  static const char* w[] = {"no", "one", "two", "three", "four"};
  return n < 5 ? w[n] : std::to_string(n);
}

// "path@b1,b2" selects branches for one input of compare.
std::pair<std::string, std::vector<std::string>> split_input(const std::string& s) {
  auto at = s.rfind('@');
  if (at == std::string::npos) return {s, {}};
  std::vector<std::string> names;
  std::string rest = s.substr(at + 1), item;
  std::istringstream in(rest);
  while (std::getline(in, item, ';'))
    if (!item.empty()) names.push_back(item);
  return {s.substr(0, at), names};
}

// A selection is a branch name from the file, a constant assignment (alpha=0) or a metric key override (B10=1/U).
WalkerSpec load_with_branches(const std::string& path, const std::vector<std::string>& selections) {
  if (!std::filesystem::exists(path)) throw InputError("no such file: " + path);
  WalkerSpec spec = load_spec(path);
  std::vector<std::string> names;
  Bindings constants;
  int overrides = 0;
  for (auto& sel : selections) {
    if (spec.branches.count(sel) && sel != "__base__") {
      names.push_back(sel);
      continue;
    }
    auto eq = sel.find('=');
    if (eq == std::string::npos) throw InputError("unknown branch '" + sel + "'");
    std::string key = sel.substr(0, eq), val = sel.substr(eq + 1);
    if (spec.ctx.has_constant(key)) {
      constants.constants[key] = parse(val, spec.ctx);
      continue;
    }
    std::string synthetic = "--branch " + std::to_string(overrides++);
    spec.branches[synthetic][key] = val;
    names.push_back(synthetic);
  }
  WalkerSpec out = apply_branches(spec, names);
  if (!constants.empty()) {
    for (auto it = out.coeffs.begin(); it != out.coeffs.end();) {
      it->second = canonicalize(substitute(it->second, constants));
      it = it->second.is_zero() ? out.coeffs.erase(it) : std::next(it);
    }
    for (auto& [k, e] : constants.constants) out.name += " [" + k + "=" + render(e) + "]";
  }
  return out;
}

std::string coord_indices(const std::vector<int>& idx) {
  std::string s;
  for (int i : idx) s += coord_name(i);
  return s;
}

std::string frame_indices(const std::vector<int>& idx) {
  std::string s;
  for (std::size_t i = 0; i < idx.size(); ++i) s += (i ? "," : "") + std::string(kFrameNames[idx[i]]);
  return s;
}

bool closed_form(const Vector4& w) {
  for (int a = 0; a < 4; ++a)
    for (int b = a + 1; b < 4; ++b)
      if (diff(w[b], a) != diff(w[a], b)) return false;
  return true;
}

json vector_json(const Vector4& x) {
  json j = json::array();
  for (auto& c : x) j.push_back(render(c));
  return j;
}

void require_order(const RunConfig& cfg, int lo, int hi) {
  if (cfg.order && (*cfg.order < lo || *cfg.order > hi))
    throw InputError(cfg.command + ": --order must be in [" + std::to_string(lo) + ", " + std::to_string(hi) + "]");
}

void reject_order(const RunConfig& cfg) {
  if (cfg.order) throw InputError(cfg.command + " does not take --order");
}

Report cmd_curvature(const RunConfig& cfg, const WalkerSpec& s) {
  reject_order(cfg);
  Report r;
  Geometry geo = s.geometry();
  json comps = json::array();
  for (auto& idx : geo.riemann.nonzero_indices()) {
    if (idx[0] >= idx[1] || idx[2] >= idx[3] || std::make_pair(idx[0], idx[1]) > std::make_pair(idx[2], idx[3])) continue;
    comps.push_back({{"index", coord_indices(idx)}, {"value", render(geo.riemann.at(idx))}});
  }
  auto weights = boost_weights(geo.riemann, walker_frame_vectors(s));
  json frame = json::array();
  for (auto& e : weights)
    frame.push_back({{"slots", frame_indices(e.slots)}, {"b1", e.b1}, {"b2", e.b2}, {"value", render(e.value)}});
  bool ricci_flat = geo.ricci.is_zero();
  r.result["riemann_zero"] = geo.riemann.is_zero();
  r.result["riemann"] = comps;
  r.result["ricci_flat"] = ricci_flat;
  r.result["ricci_scalar"] = render(geo.scalar);
  r.result["frame_components"] = frame;
  r.result["n_property"] = n_property(weights);

  if (geo.riemann.is_zero()) {
    r.text << "Riemann: all components zero\n";
  } else {
    r.text << "Riemann: " << comps.size() << " independent nonzero components\n";
    for (auto& c : comps) r.text << "  R_" << c["index"].get<std::string>() << " = " << c["value"].get<std::string>() << "\n";
    r.text << "frame components (l1, n1, l2, n2):\n";
    for (auto& e : weights)
      r.text << "  R(" << frame_indices(e.slots) << ") = " << render(e.value) << "  weight (" << e.b1 << "," << e.b2 << ")\n";
  }
  r.text << "Ricci-flat: " << (ricci_flat ? "yes" : "no") << "\n";
  r.text << "N-property: " << (n_property(weights) ? "yes" : "no") << "\n";
  return r;
}

Report cmd_vsi(const RunConfig& cfg, const WalkerSpec& s) {
  require_order(cfg, 0, 2);
  Report r;
  int order = cfg.order.value_or(2);
  InvariantList inv = scalar_invariants(s.geometry(), order);
  json list = json::array();
  std::vector<std::string> nonzero;
  for (auto& [name, e] : inv) {
    list.push_back({{"name", name}, {"value", render(e)}, {"zero", e.is_zero()}});
    if (!e.is_zero()) nonzero.push_back(name);
  }
  std::size_t zero = inv.size() - nonzero.size();
  r.result["order"] = order;
  r.result["invariants"] = list;
  r.result["zero"] = zero;
  r.result["total"] = inv.size();
  r.result["verdict"] = nonzero.empty() ? "PASS" : "FAIL";
  if (nonzero.empty()) {
    r.text << "VSI: PASS (" << zero << "/" << inv.size() << " invariants zero)\n";
  } else {
    r.text << "VSI: FAIL (" << nonzero.size() << "/" << inv.size() << " invariants nonzero)\n";
    for (auto& [name, e] : inv)
      if (!e.is_zero()) r.text << "  " << name << " = " << render(e) << "\n";
    r.exit_code = 1;
  }
  return r;
}

Report cmd_spin(const RunConfig& cfg, const WalkerSpec& s) {
  reject_order(cfg);
  Report r;
  SpinCoefficientTable t = spin_coefficients(s);
  json table = json::object();
  for (Spin sp : all_spins()) table[spin_name(sp)] = render(t[sp]);
  json laws = json::array();
  bool laws_ok = true;
  for (auto& [name, e] : law_relations(t)) {
    laws.push_back({{"relation", name}, {"residual", render(e)}});
    laws_ok = laws_ok && e.is_zero();
  }
  bool walker = true;
  for (const char* n : {"kappa", "rho", "sigma", "tau"}) walker = walker && t[n].is_zero();
  r.result["tetrad"] = "{l, n, m, mt} = {l2, n2, -l1, n1}";
  r.result["coefficients"] = table;
  r.result["law_relations"] = laws;
  r.result["law_relations_hold"] = laws_ok;
  r.result["walker_conditions"] = walker;

  r.text << "tetrad {l, n, m, mt} = {l2, n2, -l1, n1}\n";
  int zeros = 0;
  for (Spin sp : all_spins()) {
    if (t[sp].is_zero()) {
      ++zeros;
      continue;
    }
    r.text << "  " << spin_name(sp) << " = " << render(t[sp]) << "\n";
  }
  r.text << zeros << " of " << kSpinCount << " coefficients vanish\n";
  r.text << "kappa = rho = sigma = tau = 0: " << (walker ? "yes" : "no") << "\n";
  r.text << "Law relations: " << (laws_ok ? "hold" : "FAIL") << "\n";
  if (!laws_ok || !walker) r.exit_code = 1;
  return r;
}

struct RecurrentSummary {
  json list = json::array();
  std::vector<std::string> eigen, parallel, recurrent;
};

// Frame vectors that are common eigenvectors of the holonomy algebra, checked directly for recurrence.
RecurrentSummary recurrent_frame_vectors(const HolonomyAlgebra& alg, const WalkerSpec& s, const Geometry& geo) {
  RecurrentSummary out;
  auto vecs = walker_frame_vectors(s);
  for (auto& ev : common_eigenvectors(alg, vecs)) {
    RecurrenceResult rr = verify_recurrent(vecs[ev.frame_index], geo);
    bool closed = rr.recurrent && closed_form(rr.omega);
    std::string name = kVectorNames[ev.frame_index];
    std::string kind = !rr.recurrent ? "none" : rr.parallel() ? "parallel" : closed ? "parallel after rescaling" : "recurrent";
    json ej = {{"vector", name}, {"frame", kFrameNames[ev.frame_index]}, {"recurrent", rr.recurrent}, {"kind", kind},
               {"omega", vector_json(rr.omega)}};
    json vals = json::array();
    for (auto& v : ev.values) vals.push_back(render(v));
    ej["eigenvalues"] = vals;
    out.list.push_back(ej);
    out.eigen.push_back(name);
    if (closed)
      out.parallel.push_back(name);
    else if (rr.recurrent)
      out.recurrent.push_back(name);
  }
  return out;
}

std::string join(const std::vector<std::string>& v, const std::string& sep) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? sep : "") + v[i];
  return s;
}

std::string summary_line(const std::string& label, const RecurrentSummary& rs) {
  std::vector<std::string> parts;
  auto part = [&](const std::vector<std::string>& names, const std::string& kind) {
    if (names.empty()) return;
    parts.push_back(count_word(names.size()) + " " + kind + " vector field" + (names.size() > 1 ? "s " : " ") + join(names, ", "));
  };
  part(rs.parallel, "parallel");
  part(rs.recurrent, "recurrent");
  if (parts.empty()) parts.push_back("no recurrent frame vector");
  return label + ": " + join(parts, "; ");
}

Report cmd_holonomy(const RunConfig& cfg, const WalkerSpec& s) {
  require_order(cfg, 0, 2);
  Report r;
  int order = cfg.order.value_or(0);
  Geometry geo = s.geometry();
  HolonomyAlgebra alg = holonomy(s, order);
  RecurrentSummary rs = recurrent_frame_vectors(alg, s, geo);
  json basis = json::array();
  for (auto& c : alg.certificate) {
    json row = json::array();
    for (auto& e : c) row.push_back(render(e));
    basis.push_back(row);
  }
  r.result["derivative_order"] = order;
  r.result["dimension"] = alg.dimension;
  r.result["label"] = alg.label_text;
  r.result["closed"] = alg.closed;
  r.result["basis_fg"] = basis;
  r.result["notes"] = alg.notes;
  r.result["eigenvectors"] = rs.list;
  r.result["summary"] = summary_line(alg.label_text, rs);

  r.text << summary_line(alg.label_text, rs) << "\n";
  r.text << "dimension " << alg.dimension << " (derivative order " << order << ")\n";
  if (!rs.eigen.empty()) r.text << "common eigenvectors: " << join(rs.eigen, ", ") << "\n";
  r.text << "basis in (F1, F2, F3, G1, G2, G3):\n";
  for (auto& row : basis) {
    r.text << "  (";
    for (std::size_t i = 0; i < row.size(); ++i) r.text << (i ? ", " : "") << row[i].get<std::string>();
    r.text << ")\n";
  }
  for (auto& n : alg.notes) r.text << "note: " << n << "\n";
  return r;
}

Report cmd_kundt(const RunConfig& cfg, const WalkerSpec& s) {
  reject_order(cfg);
  Report r;
  KundtResult k = kundt_classify(s);
  json wit = json::array();
  for (auto& [name, ks] : k.witnesses)
    wit.push_back({{"witness", name},
                   {"geodesic", ks.geodesic_zero()},
                   {"expansion_free", ks.expansion_free()},
                   {"shear_free", ks.shear_free()},
                   {"twist_free", ks.twist_free()},
                   {"screen_expansion", render(ks.screen_expansion)},
                   {"screen_shear", render(ks.screen_shear)},
                   {"screen_twist", render(ks.screen_twist)}});
  r.result["verdict"] = to_string(k.verdict);
  r.result["A_V_zero"] = k.a_v_zero;
  r.result["B_v_zero"] = k.b_v_zero;
  r.result["witnesses"] = wit;
  r.result["consistent"] = k.consistent;

  r.text << "Kundt: " << to_string(k.verdict) << "\n";
  r.text << "  A,V = 0: " << (k.a_v_zero ? "yes" : "no") << "\n";
  r.text << "  B,v = B,vv = 0: " << (k.b_v_zero ? "yes" : "no") << "\n";
  for (auto& w : wit)
    r.text << "  " << w["witness"].get<std::string>() << ": geodesic " << w["geodesic"] << ", expansion-free "
           << w["expansion_free"] << ", shear-free " << w["shear_free"] << ", twist-free " << w["twist_free"] << "\n";
  r.text << "  kinematics agree with the verdict: " << (k.consistent ? "yes" : "no") << "\n";
  if (k.verdict == KundtVerdict::NotKundt) r.exit_code = 1;
  return r;
}

// Constants of the closed-form recurrent family, when the spec is one of the Ricci-flat Example 1 forms.
std::optional<Example1Constants> example1_constants(const WalkerSpec& s) {
  Example1Constants rf = Example1Constants::ricci_flat();
  Example1Constants zero = rf;
  zero.alpha = zero.a = zero.beta = Expr(0);
  for (auto& c : {rf, zero}) {
    WalkerSpec built = build_example1(c);
    bool same = built.coeffs.size() == s.coeffs.size();
    for (auto& [k, e] : built.coeffs) same = same && s.coeff(k) == e;
    if (same) return c;
  }
  return std::nullopt;
}

Report cmd_recurrent(const RunConfig& cfg, const WalkerSpec& s) {
  reject_order(cfg);
  Report r;
  Geometry geo = s.geometry();
  HolonomyAlgebra alg = holonomy(s, 0);
  RecurrentSummary rs = recurrent_frame_vectors(alg, s, geo);
  r.result["holonomy"] = alg.label_text;
  r.result["eigenvectors"] = rs.list;
  r.text << summary_line(alg.label_text, rs) << "\n";
  if (!rs.eigen.empty()) r.text << "common eigenvectors: " << join(rs.eigen, ", ") << "\n";
  for (auto& e : rs.list)
    if (e["recurrent"].get<bool>())
      r.text << "  " << e["vector"].get<std::string>() << ": " << e["kind"].get<std::string>() << ", omega = ("
             << join(e["omega"].get<std::vector<std::string>>(), ", ") << ")\n";

  bool family = false;
  if (auto c = example1_constants(s)) {
    family = true;
    RecurrentFamily fam = recurrent_family_example1(Expr::constant("k0"), *c);
    bool ok = fam.residual0.is_zero() && fam.residual1.is_zero();
    r.result["family"] = {{"kind", c->alpha.is_zero() ? "logarithmic" : "tanh"},
                          {"f", render(fam.f)},
                          {"h", render(fam.h)},
                          {"residual0", render(fam.residual0)},
                          {"residual1", render(fam.residual1)},
                          {"residuals_zero", ok}};
    r.text << "closed-form family (" << (c->alpha.is_zero() ? "logarithmic" : "tanh") << "):\n";
    r.text << "  f = " << render(fam.f) << "\n  h = " << render(fam.h) << "\n";
    r.text << "  residuals vanish: " << (ok ? "yes" : "no") << "\n";
    if (!ok) r.exit_code = 1;
  }
  if (rs.parallel.empty() && rs.recurrent.empty() && !family) r.exit_code = 1;
  return r;
}

json cartan_json(const CartanReport& rep) {
  json j;
  j["status"] = rep.status;
  j["terminal_order"] = rep.terminal_order;
  j["holonomy"] = rep.holonomy_label;
  j["holonomy_dim"] = rep.holonomy_dim;
  json fixed = json::array();
  for (auto& f : rep.fix.fixed)
    fixed.push_back({{"slots", std::vector<int>(f.slots.begin(), f.slots.end())}, {"before", render(f.before)}, {"after", render(f.after)}});
  j["zeroth_order"] = {{"z1", render(rep.fix.z1)}, {"z2", render(rep.fix.z2)}, {"reduced", rep.fix.reduced}, {"fixed", fixed}};
  json orders = json::array();
  for (auto& o : rep.orders) {
    json inv = json::array();
    for (auto& i : o.invariants) inv.push_back({{"name", i.name}, {"value", render(i.value)}});
    orders.push_back({{"q", o.q}, {"t", o.t}, {"isotropy_dim", o.isotropy_dim}, {"isotropy_kernel", o.isotropy_kernel},
                      {"invariants", inv}, {"notes", o.notes}});
  }
  j["orders"] = orders;
  j["bound_audit"] = rep.bound_audit;
  j["monotone"] = rep.monotone;
  return j;
}

void cartan_text(std::ostream& out, const CartanReport& rep) {
  out << rep.spec_name << ": " << rep.status;
  if (rep.terminated()) out << " at q = " << rep.terminal_order;
  out << "\n";
  out << "  holonomy " << rep.holonomy_label << " (dim " << rep.holonomy_dim << ")\n";
  out << "  z1 = " << render(rep.fix.z1) << ", z2 = " << render(rep.fix.z2) << (rep.fix.reduced ? " (reduced)" : "") << "\n";
  for (auto& o : rep.orders) {
    out << "  q = " << o.q << ": t = " << o.t << ", dim H = " << o.isotropy_dim << "\n";
    for (auto& i : o.invariants) out << "    " << i.name << " = " << render(i.value) << "\n";
    if (!o.isotropy_kernel.empty()) out << "    isotropy: " << join(o.isotropy_kernel, ", ") << "\n";
    for (auto& n : o.notes) out << "    note: " << n << "\n";
  }
  for (auto& b : rep.bound_audit) out << "  bound: " << b << "\n";
}

CartanReport checked_run(const WalkerSpec& s, int max_order, unsigned seed) {
  CartanReport rep = run(s, max_order, seed);
  if (rep.status.rfind("zeroth order unavailable", 0) == 0) throw InputError("cartan: " + rep.status);
  return rep;
}

Report cmd_cartan(const RunConfig& cfg, const WalkerSpec& s) {
  require_order(cfg, 1, 10);
  Report r;
  CartanReport rep = checked_run(s, cfg.order.value_or(7), cfg.seed);
  r.result = cartan_json(rep);
  cartan_text(r.text, rep);
  if (!rep.terminated()) r.exit_code = 1;
  return r;
}

Report cmd_compare(const RunConfig& cfg, const std::vector<WalkerSpec>& specs) {
  require_order(cfg, 1, 10);
  Report r;
  CartanReport a = checked_run(specs[0], cfg.order.value_or(7), cfg.seed);
  CartanReport b = checked_run(specs[1], cfg.order.value_or(7), cfg.seed);
  Verdict v = compare(a, b, cfg.seed);
  r.result["a"] = cartan_json(a);
  r.result["b"] = cartan_json(b);
  r.result["verdict"] = v.text();
  r.text << "Verdict: " << v.text() << "\n";
  cartan_text(r.text, a);
  cartan_text(r.text, b);
  if (v.distinguished) r.exit_code = 1;
  return r;
}

int run_command(const RunConfig& cfg) {
  std::size_t want = cfg.command == "compare" ? 2 : 1;
  if (cfg.inputs.size() != want)
    throw InputError(cfg.command + " takes " + std::to_string(want) + " spec file" + (want > 1 ? "s" : ""));
  std::vector<WalkerSpec> specs;
  for (auto& in : cfg.inputs) {
    auto [path, own] = split_input(in);
    std::vector<std::string> sel = cfg.branches;
    sel.insert(sel.end(), own.begin(), own.end());
    specs.push_back(load_with_branches(path, sel));
  }
  Report rep;
  const WalkerSpec& s = specs.front();
  if (cfg.command == "curvature") rep = cmd_curvature(cfg, s);
  else if (cfg.command == "vsi") rep = cmd_vsi(cfg, s);
  else if (cfg.command == "spin") rep = cmd_spin(cfg, s);
  else if (cfg.command == "holonomy") rep = cmd_holonomy(cfg, s);
  else if (cfg.command == "kundt") rep = cmd_kundt(cfg, s);
  else if (cfg.command == "recurrent") rep = cmd_recurrent(cfg, s);
  else if (cfg.command == "cartan") rep = cmd_cartan(cfg, s);
  else rep = cmd_compare(cfg, specs);

  std::string body;
  if (cfg.format == "structured") {
    json doc;
    doc["command"] = cfg.command;
    json names = json::array();
    for (auto& sp : specs) names.push_back(sp.name);
    doc["specs"] = names;
    doc["seed"] = cfg.seed;
    doc["exit_code"] = rep.exit_code;
    doc["result"] = rep.result;
    body = doc.dump(2) + "\n";
  } else {
    body = rep.text.str();
  }
  if (cfg.out.empty()) {
    std::cout << body;
  } else {
    std::ofstream f(cfg.out);
    if (!f) throw InputError("cannot write " + cfg.out);
    f << body;
  }
  return rep.exit_code;
}

}  // namespace

int main(int argc, char** argv) {
  RunConfig cfg;
  CLI::App app{"Symbolic analysis of neutral-signature Walker metrics"};
  app.add_option("command", cfg.command, "curvature | vsi | spin | holonomy | kundt | recurrent | cartan | compare")
      ->required()
      ->check(CLI::IsMember({"curvature", "vsi", "spin", "holonomy", "kundt", "recurrent", "cartan", "compare"}));
  app.add_option("specs", cfg.inputs, "spec file(s); compare takes two, each optionally path@branch;branch")->required();
  app.add_option("--order", cfg.order, "derivative order (vsi, holonomy) or maximum Cartan order");
  app.add_option("--branch", cfg.branches, "branch name, constant assignment K=V or metric key override K=V");
  app.add_option("--format", cfg.format, "text or structured")->check(CLI::IsMember({"text", "structured"}));
  app.add_option("--seed", cfg.seed, "seed for numeric checks");
  app.add_option("--out", cfg.out, "write the report here instead of stdout");
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }
  try {
    return run_command(cfg);
  } catch (const InputError& e) {
    std::cerr << "error: " << e.what() << "\n";
  } catch (const SpecError& e) {
    std::cerr << "error: " << e.what() << "\n";
  } catch (const ParseError& e) {
    std::cerr << "error: parse error at offset " << e.offset << ": " << e.what() << "\n";
  } catch (const SymbolError& e) {
    std::cerr << "error: " << e.what() << "\n";
  }
  return 2;
}
