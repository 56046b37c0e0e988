#include <algorithm>
#include <fstream>
#include <regex>
#include <sstream>

#include "vsw/walker.hpp"

namespace vsw {

const std::vector<std::string> kWalkerKeys = {"A0", "A1", "A2", "B00", "B01", "B02", "B03", "B10", "B11", "C0", "C11", "C2"};

namespace {

const std::vector<std::string> kExample2Inputs = {"B02", "B10", "B01", "B00", "C0", "G"};

std::string trim(const std::string& s) {
  auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

bool known_key(const std::string& k) { return std::find(kWalkerKeys.begin(), kWalkerKeys.end(), k) != kWalkerKeys.end(); }

}  // namespace

Expr WalkerSpec::coeff(const std::string& key) const {
  auto it = coeffs.find(key);
  return it == coeffs.end() ? Expr() : it->second;
}

Expr WalkerSpec::A() const {
  Expr v = Expr::coordinate(vsw::v), V = Expr::coordinate(vsw::V);
  return v * coeff("A1") + V * coeff("A2") + coeff("A0");
}

Expr WalkerSpec::B() const {
  Expr v = Expr::coordinate(vsw::v), V = Expr::coordinate(vsw::V);
  return V * (coeff("B10") + v * coeff("B11")) + coeff("B00") + v * coeff("B01") + v * v * coeff("B02") +
         v * v * v * coeff("B03");
}

Expr WalkerSpec::C() const {
  Expr v = Expr::coordinate(vsw::v), V = Expr::coordinate(vsw::V);
  return v * coeff("C11") + V * coeff("C2") + coeff("C0");
}

TensorField WalkerSpec::metric() const {
  Matrix4 g;
  Expr c = C();
  g[u][u] = Expr(2) * A();
  g[u][v] = g[v][u] = Expr(1);
  g[u][U] = g[U][u] = c;
  g[U][U] = Expr(2) * B();
  g[U][V] = g[V][U] = Expr(1);
  return metric_tensor(g);
}

Geometry WalkerSpec::geometry() const { return Geometry::compute(metric()); }

bool WalkerSpec::in_family() const {
  for (auto& [k, e] : coeffs)
    if (e.depends_on(vsw::v) || e.depends_on(vsw::V)) return false;
  return true;
}

namespace {

struct RawSpec {
  std::vector<std::string> coords;
  std::vector<std::pair<std::string, std::vector<int>>> functions;
  std::vector<std::string> constants;
  std::vector<std::pair<std::string, std::string>> metric;
  std::map<std::string, std::string> flags;
  std::map<std::string, std::map<std::string, std::string>> branches;
};

RawSpec read_raw(const std::string& text) {
  RawSpec raw;
  std::istringstream in(text);
  std::string line, section;
  int lineno = 0;
  std::regex fn_re(R"(([A-Za-z][A-Za-z0-9_]*)\s*\(([^)]*)\))");
  auto fail = [&](const std::string& msg) { throw SpecError("line " + std::to_string(lineno) + ": " + msg); };
  while (std::getline(in, line)) {
    ++lineno;
    auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']') fail("unterminated section header");
      section = trim(line.substr(1, line.size() - 2));
      if (section.rfind("branch", 0) == 0) {
        std::string name = trim(section.substr(6));
        if (name.empty()) fail("branch section needs a name");
        raw.branches[name];
        section = "branch " + name;
      } else if (section != "coordinates" && section != "functions" && section != "constants" && section != "metric" &&
                 section != "flags") {
        fail("unknown section [" + section + "]");
      }
      continue;
    }
    if (section.empty()) fail("content outside a section");
    if (section == "coordinates") {
      std::string s = line;
      std::replace(s.begin(), s.end(), ',', ' ');
      std::istringstream ws(s);
      std::string w;
      while (ws >> w) raw.coords.push_back(w);
    } else if (section == "functions") {
      auto begin = std::sregex_iterator(line.begin(), line.end(), fn_re);
      bool any = false;
      for (auto it = begin; it != std::sregex_iterator(); ++it) {
        any = true;
        std::vector<int> args;
        std::string a = (*it)[2];
        std::replace(a.begin(), a.end(), ',', ' ');
        std::istringstream ws(a);
        std::string w;
        while (ws >> w) {
          auto c = coord_from_name(w);
          if (!c) fail("function argument '" + w + "' is not a coordinate");
          args.push_back(*c);
        }
        std::sort(args.begin(), args.end());
        raw.functions.emplace_back((*it)[1], args);
      }
      if (!any) fail("expected declarations like Name(u,U)");
    } else if (section == "constants") {
      std::string s = line;
      std::replace(s.begin(), s.end(), ',', ' ');
      std::istringstream ws(s);
      std::string w;
      while (ws >> w) raw.constants.push_back(w);
    } else {
      auto eq = line.find('=');
      if (eq == std::string::npos) fail("expected key = value");
      std::string k = trim(line.substr(0, eq)), val = trim(line.substr(eq + 1));
      if (k.empty()) fail("empty key");
      if (section == "metric")
        raw.metric.emplace_back(k, val);
      else if (section == "flags")
        raw.flags[k] = val;
      else
        raw.branches[section.substr(7)][k] = val;
    }
  }
  return raw;
}

Expr parse_at(const std::string& key, const std::string& text, const Context& ctx) {
  try {
    return parse(text, ctx);
  } catch (const ParseError& e) {
    throw SpecError("metric key " + key + ": " + e.what());
  } catch (const SymbolError& e) {
    throw SpecError("metric key " + key + ": " + e.what());
  }
}

void realize(WalkerSpec& spec, const std::vector<std::pair<std::string, std::string>>& metric) {
  std::string builder = spec.flags.count("builder") ? spec.flags.at("builder") : "";
  spec.coeffs.clear();
  if (builder == "example2") {
    std::map<std::string, Expr> in;
    for (auto& [k, t] : metric) {
      if (std::find(kExample2Inputs.begin(), kExample2Inputs.end(), k) == kExample2Inputs.end())
        throw SpecError("example2 builder takes B02, B10, B01, B00, C0, G; got " + k);
      in[k] = parse_at(k, t, spec.ctx);
    }
    Example2Inputs x{in["B02"], in["B10"], in["B01"], in["B00"], in["C0"], in["G"]};
    if (x.B02.is_zero()) throw SpecError("example2 builder needs B02 != 0");
    WalkerSpec built = build_example2(x, spec.ctx);
    spec.coeffs = built.coeffs;
    return;
  }
  if (!builder.empty()) throw SpecError("unknown builder '" + builder + "'");
  for (auto& [k, t] : metric) {
    if (!known_key(k)) throw SpecError("unknown metric key " + k);
    Expr e = parse_at(k, t, spec.ctx);
    if (!e.is_zero()) spec.coeffs[k] = e;
  }
  if (!spec.in_family()) throw SpecError("metric coefficients must be independent of v and V");
}

}  // namespace

WalkerSpec parse_spec(const std::string& text, const std::string& name) {
  RawSpec raw = read_raw(text);
  if (!raw.coords.empty()) {
    std::vector<std::string> want = {"u", "v", "U", "V"};
    if (raw.coords != want) throw SpecError("[coordinates] must be exactly u v U V");
  }
  WalkerSpec spec;
  spec.name = name;
  for (auto& [f, args] : raw.functions) {
    if (coord_from_name(f)) throw SpecError("function name clashes with a coordinate: " + f);
    spec.ctx.declare_function(f, args);
  }
  for (auto& c : raw.constants) {
    if (coord_from_name(c) || spec.ctx.functions.count(c)) throw SpecError("constant name clashes: " + c);
    spec.ctx.declare_constant(c);
  }
  spec.flags = raw.flags;
  spec.branches = raw.branches;
  std::map<std::string, std::string> base;
  for (auto& [k, t] : raw.metric) {
    if (base.count(k)) throw SpecError("duplicate metric key " + k);
    base[k] = t;
  }
  spec.branches["__base__"] = base;
  realize(spec, raw.metric);
  return spec;
}

WalkerSpec load_spec(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw SpecError("cannot open " + path);
  std::stringstream ss;
  ss << f.rdbuf();
  std::string name = path;
  auto slash = name.find_last_of('/');
  if (slash != std::string::npos) name = name.substr(slash + 1);
  return parse_spec(ss.str(), name);
}

WalkerSpec apply_branches(const WalkerSpec& spec, const std::vector<std::string>& names) {
  if (names.empty()) return spec;
  WalkerSpec out = spec;
  auto base_it = spec.branches.find("__base__");
  std::map<std::string, std::string> merged = base_it == spec.branches.end() ? std::map<std::string, std::string>{} : base_it->second;
  for (auto& n : names) {
    auto it = spec.branches.find(n);
    if (it == spec.branches.end() || n == "__base__") throw SpecError("unknown branch '" + n + "'");
    for (auto& [k, t] : it->second) merged[k] = t;
    out.name += " [" + n + "]";
  }
  std::vector<std::pair<std::string, std::string>> metric(merged.begin(), merged.end());
  realize(out, metric);
  return out;
}

}  // namespace vsw
