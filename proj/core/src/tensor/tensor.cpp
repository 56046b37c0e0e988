#include "vsw/tensor.hpp"

#include <algorithm>

namespace vsw {

namespace {

std::size_t pow4(int k) { return std::size_t{1} << (2 * k); }

}  // namespace

TensorField::TensorField(std::vector<Slot> valence) : valence_(std::move(valence)), comps_(pow4(rank())) {}

std::size_t TensorField::flat(const std::vector<int>& idx) {
  std::size_t f = 0;
  for (int i : idx) f = f * 4 + static_cast<std::size_t>(i);
  return f;
}

std::vector<int> TensorField::unflat(std::size_t i) const {
  std::vector<int> idx(valence_.size());
  for (int k = rank() - 1; k >= 0; --k) {
    idx[k] = static_cast<int>(i % 4);
    i /= 4;
  }
  return idx;
}

Expr& TensorField::at(std::initializer_list<int> idx) { return comps_[flat(std::vector<int>(idx))]; }
const Expr& TensorField::at(std::initializer_list<int> idx) const { return comps_[flat(std::vector<int>(idx))]; }
Expr& TensorField::at(const std::vector<int>& idx) { return comps_[flat(idx)]; }
const Expr& TensorField::at(const std::vector<int>& idx) const { return comps_[flat(idx)]; }

bool TensorField::is_zero() const {
  return std::all_of(comps_.begin(), comps_.end(), [](const Expr& e) { return e.is_zero(); });
}

std::vector<std::vector<int>> TensorField::nonzero_indices() const {
  std::vector<std::vector<int>> r;
  for (std::size_t i = 0; i < comps_.size(); ++i)
    if (!comps_[i].is_zero()) r.push_back(unflat(i));
  return r;
}

TensorField metric_tensor(const Matrix4& g) {
  TensorField t({Slot::Down, Slot::Down});
  for (int a = 0; a < 4; ++a)
    for (int b = 0; b < 4; ++b) t.at({a, b}) = g[a][b];
  return t;
}

namespace {

Expr det3(const TensorField& g, const std::array<int, 3>& r, const std::array<int, 3>& c) {
  auto m = [&](int i, int j) -> const Expr& { return g.at({r[i], c[j]}); };
  return m(0, 0) * (m(1, 1) * m(2, 2) - m(1, 2) * m(2, 1)) - m(0, 1) * (m(1, 0) * m(2, 2) - m(1, 2) * m(2, 0)) +
         m(0, 2) * (m(1, 0) * m(2, 1) - m(1, 1) * m(2, 0));
}

std::array<int, 3> others(int k) {
  std::array<int, 3> r{};
  int n = 0;
  for (int i = 0; i < 4; ++i)
    if (i != k) r[n++] = i;
  return r;
}

Expr cofactor(const TensorField& g, int i, int j) {
  Expr m = det3(g, others(i), others(j));
  return (i + j) % 2 ? -m : m;
}

}  // namespace

Expr determinant(const TensorField& g) {
  Expr d;
  for (int j = 0; j < 4; ++j)
    if (!g.at({0, j}).is_zero()) d += g.at({0, j}) * cofactor(g, 0, j);
  return d;
}

TensorField inverse_metric(const TensorField& g) {
  Expr d = determinant(g);
  if (d.is_zero()) throw DegenerateMetric("metric determinant vanishes");
  TensorField inv({Slot::Up, Slot::Up});
  for (int a = 0; a < 4; ++a)
    for (int b = 0; b < 4; ++b) inv.at({a, b}) = cofactor(g, b, a) / d;
  return inv;
}

TensorField christoffel(const TensorField& g, const TensorField& ginv) {
  // dg[c][a][b] = d_c g_ab
  std::array<std::array<std::array<Expr, 4>, 4>, 4> dg;
  for (int c = 0; c < 4; ++c)
    for (int a = 0; a < 4; ++a)
      for (int b = a; b < 4; ++b) {
        dg[c][a][b] = diff(g.at({a, b}), c);
        dg[c][b][a] = dg[c][a][b];
      }
  TensorField gam({Slot::Up, Slot::Down, Slot::Down});
  for (int b = 0; b < 4; ++b)
    for (int c = b; c < 4; ++c) {
      std::array<Expr, 4> low;  // Gamma_{d b c}
      for (int d = 0; d < 4; ++d) low[d] = (dg[b][d][c] + dg[c][d][b] - dg[d][b][c]) / Expr(2);
      for (int a = 0; a < 4; ++a) {
        Expr s;
        for (int d = 0; d < 4; ++d)
          if (!ginv.at({a, d}).is_zero() && !low[d].is_zero()) s += ginv.at({a, d}) * low[d];
        gam.at({a, b, c}) = s;
        gam.at({a, c, b}) = s;
      }
    }
  return gam;
}

Geometry Geometry::compute(const TensorField& g) {
  Geometry geo;
  geo.g = g;
  geo.ginv = inverse_metric(g);
  geo.gamma = christoffel(g, geo.ginv);
  const TensorField& G = geo.gamma;
  TensorField r({Slot::Up, Slot::Down, Slot::Down, Slot::Down});
  for (int a = 0; a < 4; ++a)
    for (int b = 0; b < 4; ++b)
      for (int c = 0; c < 4; ++c)
        for (int d = c + 1; d < 4; ++d) {
          Expr s = diff(G.at({a, d, b}), c) - diff(G.at({a, c, b}), d);
          for (int e = 0; e < 4; ++e) {
            if (!G.at({a, c, e}).is_zero() && !G.at({e, d, b}).is_zero()) s += G.at({a, c, e}) * G.at({e, d, b});
            if (!G.at({a, d, e}).is_zero() && !G.at({e, c, b}).is_zero()) s -= G.at({a, d, e}) * G.at({e, c, b});
          }
          r.at({a, b, c, d}) = s;
          r.at({a, b, d, c}) = -s;
        }
  geo.riemann_up = r;
  geo.riemann = lower(r, 0, g);
  TensorField ric({Slot::Down, Slot::Down});
  for (int a = 0; a < 4; ++a)
    for (int b = 0; b < 4; ++b) {
      Expr s;
      for (int c = 0; c < 4; ++c) s += r.at({c, a, c, b});
      ric.at({a, b}) = s;
    }
  geo.ricci = ric;
  Expr sc;
  for (int a = 0; a < 4; ++a)
    for (int b = 0; b < 4; ++b)
      if (!geo.ginv.at({a, b}).is_zero() && !ric.at({a, b}).is_zero()) sc += geo.ginv.at({a, b}) * ric.at({a, b});
  geo.scalar = sc;
  return geo;
}

TensorField christoffel(const TensorField& g) { return christoffel(g, inverse_metric(g)); }
TensorField riemann(const TensorField& g) { return Geometry::compute(g).riemann_up; }
TensorField ricci(const TensorField& g) { return Geometry::compute(g).ricci; }
Expr ricci_scalar(const TensorField& g) { return Geometry::compute(g).scalar; }

TensorField ricci_from_lowered(const Geometry& geo) {
  TensorField ric({Slot::Down, Slot::Down});
  for (int a = 0; a < 4; ++a)
    for (int b = 0; b < 4; ++b) {
      Expr s;
      for (int c = 0; c < 4; ++c)
        for (int d = 0; d < 4; ++d)
          if (!geo.ginv.at({c, d}).is_zero() && !geo.riemann.at({c, a, d, b}).is_zero())
            s += geo.ginv.at({c, d}) * geo.riemann.at({c, a, d, b});
      ric.at({a, b}) = s;
    }
  return ric;
}

TensorField partial_derivative(const TensorField& t) {
  auto val = t.valence();
  val.push_back(Slot::Down);
  TensorField r(val);
  for (std::size_t i = 0; i < t.size(); ++i)
    if (!t[i].is_zero())
      for (int e = 0; e < 4; ++e) r[i * 4 + static_cast<std::size_t>(e)] = diff(t[i], e);
  return r;
}

TensorField covariant_derivative(const TensorField& t, const Geometry& geo) {
  TensorField r = partial_derivative(t);
  const TensorField& G = geo.gamma;
  int k = t.rank();
  for (std::size_t i = 0; i < r.size(); ++i) {
    std::vector<int> idx = r.unflat(i);
    int e = idx[k];
    Expr s = r[i];
    for (int p = 0; p < k; ++p) {
      int orig = idx[p];
      for (int f = 0; f < 4; ++f) {
        idx[p] = f;
        const Expr& tv = t.at(std::vector<int>(idx.begin(), idx.begin() + k));
        idx[p] = orig;
        if (tv.is_zero()) continue;
        if (t.valence()[p] == Slot::Up) {
          const Expr& g = G.at({orig, e, f});
          if (!g.is_zero()) s += g * tv;
        } else {
          const Expr& g = G.at({f, e, orig});
          if (!g.is_zero()) s -= g * tv;
        }
      }
    }
    r[i] = s;
  }
  return r;
}

TensorField raise(const TensorField& t, int slot, const TensorField& ginv) {
  if (t.valence()[slot] != Slot::Down) throw std::invalid_argument("raise: slot is not covariant");
  auto val = t.valence();
  val[slot] = Slot::Up;
  TensorField r(val);
  for (std::size_t i = 0; i < r.size(); ++i) {
    std::vector<int> idx = r.unflat(i);
    int a = idx[slot];
    Expr s;
    for (int b = 0; b < 4; ++b) {
      if (ginv.at({a, b}).is_zero()) continue;
      idx[slot] = b;
      const Expr& v = t.at(idx);
      if (!v.is_zero()) s += ginv.at({a, b}) * v;
    }
    r[i] = s;
  }
  return r;
}

TensorField lower(const TensorField& t, int slot, const TensorField& g) {
  if (t.valence()[slot] != Slot::Up) throw std::invalid_argument("lower: slot is not contravariant");
  auto val = t.valence();
  val[slot] = Slot::Down;
  TensorField r(val);
  for (std::size_t i = 0; i < r.size(); ++i) {
    std::vector<int> idx = r.unflat(i);
    int a = idx[slot];
    Expr s;
    for (int b = 0; b < 4; ++b) {
      if (g.at({a, b}).is_zero()) continue;
      idx[slot] = b;
      const Expr& v = t.at(idx);
      if (!v.is_zero()) s += g.at({a, b}) * v;
    }
    r[i] = s;
  }
  return r;
}

TensorField raise_all(const TensorField& t, const TensorField& ginv) {
  TensorField r = t;
  for (int s = 0; s < t.rank(); ++s)
    if (r.valence()[s] == Slot::Down) r = raise(r, s, ginv);
  return r;
}

TensorField contract(const TensorField& t, int i, int j) {
  if (t.valence()[i] == t.valence()[j]) throw std::invalid_argument("contract: need one upper and one lower slot");
  std::vector<Slot> val;
  for (int k = 0; k < t.rank(); ++k)
    if (k != i && k != j) val.push_back(t.valence()[k]);
  TensorField r(val);
  for (std::size_t f = 0; f < r.size(); ++f) {
    std::vector<int> sub = r.unflat(f);
    Expr s;
    for (int c = 0; c < 4; ++c) {
      std::vector<int> idx;
      std::size_t n = 0;
      for (int k = 0; k < t.rank(); ++k) idx.push_back(k == i || k == j ? c : sub[n++]);
      s += t.at(idx);
    }
    r[f] = s;
  }
  return r;
}

TensorField tensor_product(const TensorField& a, const TensorField& b) {
  auto val = a.valence();
  val.insert(val.end(), b.valence().begin(), b.valence().end());
  TensorField r(val);
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i].is_zero()) continue;
    for (std::size_t j = 0; j < b.size(); ++j)
      if (!b[j].is_zero()) r[i * b.size() + j] = a[i] * b[j];
  }
  return r;
}

TensorField add(const TensorField& a, const TensorField& b) {
  if (a.valence() != b.valence()) throw std::invalid_argument("add: valence mismatch");
  TensorField r = a;
  for (std::size_t i = 0; i < r.size(); ++i) r[i] += b[i];
  return r;
}

TensorField scale(const TensorField& a, const Expr& s) {
  TensorField r = a;
  for (std::size_t i = 0; i < r.size(); ++i)
    if (!r[i].is_zero()) r[i] *= s;
  return r;
}

TensorField simplify(const TensorField& t) {
  TensorField r = t;
  for (std::size_t i = 0; i < r.size(); ++i) r[i] = canonicalize(r[i]);
  return r;
}

Expr full_contraction(const TensorField& a, const TensorField& b, const TensorField& ginv) {
  TensorField bu = raise_all(b, ginv);
  Expr s;
  for (std::size_t i = 0; i < a.size(); ++i)
    if (!a[i].is_zero() && !bu[i].is_zero()) s += a[i] * bu[i];
  return s;
}

TensorField vector_field(const Vector4& comps) {
  TensorField t({Slot::Up});
  for (int a = 0; a < 4; ++a) t.at({a}) = comps[a];
  return t;
}

TensorField one_form(const Vector4& comps) {
  TensorField t({Slot::Down});
  for (int a = 0; a < 4; ++a) t.at({a}) = comps[a];
  return t;
}

Vector4 lower_vector(const Vector4& v, const TensorField& g) {
  Vector4 r;
  for (int a = 0; a < 4; ++a)
    for (int b = 0; b < 4; ++b)
      if (!g.at({a, b}).is_zero() && !v[b].is_zero()) r[a] += g.at({a, b}) * v[b];
  return r;
}

Vector4 raise_form(const Vector4& w, const TensorField& ginv) {
  Vector4 r;
  for (int a = 0; a < 4; ++a)
    for (int b = 0; b < 4; ++b)
      if (!ginv.at({a, b}).is_zero() && !w[b].is_zero()) r[a] += ginv.at({a, b}) * w[b];
  return r;
}

Expr inner(const Vector4& a, const Vector4& b, const TensorField& g) {
  Expr s;
  Vector4 bl = lower_vector(b, g);
  for (int i = 0; i < 4; ++i)
    if (!a[i].is_zero() && !bl[i].is_zero()) s += a[i] * bl[i];
  return s;
}

Expr apply_vector(const Vector4& x, const Expr& f) {
  Expr s;
  for (int a = 0; a < 4; ++a)
    if (!x[a].is_zero()) s += x[a] * diff(f, a);
  return s;
}

std::string frame_slot_name(int s) {
  static const char* n[4] = {"l1", "n1", "l2", "n2"};
  return n[s];
}

std::vector<BoostWeightEntry> boost_weights(const TensorField& t, const std::array<Vector4, 4>& fv) {
  int k = t.rank();
  // contract one slot at a time: T(e_{s1}, ...)
  std::vector<Expr> cur(t.size());
  for (std::size_t i = 0; i < t.size(); ++i) cur[i] = t[i];
  std::size_t stride = t.size();
  for (int p = 0; p < k; ++p) {
    stride /= 4;
    std::size_t outer = cur.size() / (4 * stride);
    std::vector<Expr> next(cur.size());
    for (std::size_t o = 0; o < outer; ++o)
      for (int s = 0; s < 4; ++s)
        for (std::size_t in = 0; in < stride; ++in) {
          Expr acc;
          for (int a = 0; a < 4; ++a) {
            const Expr& v = fv[s][a];
            const Expr& c = cur[(o * 4 + static_cast<std::size_t>(a)) * stride + in];
            if (!v.is_zero() && !c.is_zero()) acc += v * c;
          }
          next[(o * 4 + static_cast<std::size_t>(s)) * stride + in] = acc;
        }
    cur = std::move(next);
  }
  std::vector<BoostWeightEntry> out;
  for (std::size_t i = 0; i < cur.size(); ++i) {
    if (cur[i].is_zero()) continue;
    BoostWeightEntry e;
    e.slots = t.unflat(i);
    for (int s : e.slots) {
      if (s == 0) ++e.b1;
      if (s == 1) --e.b1;
      if (s == 2) ++e.b2;
      if (s == 3) --e.b2;
    }
    e.value = cur[i];
    out.push_back(std::move(e));
  }
  return out;
}

bool n_property(const std::vector<BoostWeightEntry>& entries) {
  return std::all_of(entries.begin(), entries.end(),
                     [](const BoostWeightEntry& e) { return e.b1 <= 0 && e.b2 <= 0 && (e.b1 != 0 || e.b2 != 0); });
}

bool riemann_symmetries_hold(const TensorField& r) {
  for (int a = 0; a < 4; ++a)
    for (int b = 0; b < 4; ++b)
      for (int c = 0; c < 4; ++c)
        for (int d = 0; d < 4; ++d) {
          const Expr& x = r.at({a, b, c, d});
          if (!is_zero(x + r.at({b, a, c, d})) || !is_zero(x + r.at({a, b, d, c})) || !is_zero(x - r.at({c, d, a, b})))
            return false;
        }
  return true;
}

bool bianchi_first_holds(const TensorField& r) {
  for (int a = 0; a < 4; ++a)
    for (int b = 0; b < 4; ++b)
      for (int c = 0; c < 4; ++c)
        for (int d = 0; d < 4; ++d)
          if (!is_zero(r.at({a, b, c, d}) + r.at({a, c, d, b}) + r.at({a, d, b, c}))) return false;
  return true;
}

bool bianchi_second_holds(const TensorField& dr) {
  // dr_{abcd;e}: cyclic sum over (c,d,e)
  for (int a = 0; a < 4; ++a)
    for (int b = a + 1; b < 4; ++b)
      for (int c = 0; c < 4; ++c)
        for (int d = 0; d < 4; ++d)
          for (int e = 0; e < 4; ++e)
            if (!is_zero(dr.at({a, b, c, d, e}) + dr.at({a, b, d, e, c}) + dr.at({a, b, e, c, d}))) return false;
  return true;
}

}  // namespace vsw
