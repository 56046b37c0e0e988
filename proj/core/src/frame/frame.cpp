#include "vsw/frame.hpp"

#include <algorithm>

namespace vsw {

NullFrame coframe_from_walker(const WalkerSpec& s) {
  NullFrame f;
  Expr A = s.A(), B = s.B(), hc = s.C() / Expr(2);
  f.forms[0][u] = Expr(1);
  f.forms[1][u] = A;
  f.forms[1][v] = Expr(1);
  f.forms[1][U] = hc;
  f.forms[2][U] = Expr(1);
  f.forms[3][u] = hc;
  f.forms[3][U] = B;
  f.forms[3][V] = Expr(1);
  f.vectors = walker_frame_vectors(s);
  return f;
}

namespace {

Expr pair_form(const Vector4& a, const Vector4& b, const TensorField& ginv) {
  Expr s;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j)
      if (!a[i].is_zero() && !b[j].is_zero() && !ginv.at({i, j}).is_zero()) s += ginv.at({i, j}) * a[i] * b[j];
  return s;
}

}  // namespace

bool frame_is_null(const NullFrame& f, const TensorField& ginv) {
  for (int a = 0; a < 4; ++a)
    for (int b = a; b < 4; ++b) {
      int want = ((a == 0 && b == 1) || (a == 2 && b == 3)) ? 1 : 0;
      if (pair_form(f.forms[a], f.forms[b], ginv) != Expr(want)) return false;
    }
  return true;
}

bool reconstructs_metric(const NullFrame& f, const TensorField& g) {
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) {
      Expr s = f.forms[0][i] * f.forms[1][j] + f.forms[1][i] * f.forms[0][j] + f.forms[2][i] * f.forms[3][j] +
               f.forms[3][i] * f.forms[2][j];
      if (s != g.at({i, j})) return false;
    }
  return true;
}

int label_pairing(int a, int b) {
  if ((a == kL && b == kN) || (a == kN && b == kL)) return 1;
  if ((a == kM && b == kMt) || (a == kMt && b == kM)) return -1;
  return 0;
}

Tetrad calibrated_tetrad(const NullFrame& f) {
  Tetrad t;
  auto neg = [](const Vector4& x) {
    Vector4 r;
    for (int i = 0; i < 4; ++i) r[i] = -x[i];
    return r;
  };
  t.forms = {f.forms[2], f.forms[3], neg(f.forms[0]), f.forms[1]};
  t.vectors = {f.vectors[2], f.vectors[3], neg(f.vectors[0]), f.vectors[1]};
  return t;
}

Tetrad calibrated_tetrad(const WalkerSpec& s) { return calibrated_tetrad(coframe_from_walker(s)); }

Tetrad tetrad_from_forms(const std::array<Vector4, 4>& forms, const TensorField& ginv) {
  Tetrad t;
  t.forms = forms;
  for (int a = 0; a < 4; ++a) t.vectors[a] = raise_form(forms[a], ginv);
  for (int a = 0; a < 4; ++a)
    for (int b = a; b < 4; ++b)
      if (pair_form(forms[a], forms[b], ginv) != Expr(label_pairing(a, b)))
        throw FrameError("tetrad is not null-normalized");
  return t;
}

RotationCoefficients rotation_coefficients(const Tetrad& t, const Geometry& geo) {
  RotationCoefficients T;
  for (int b = 0; b < 4; ++b) {
    TensorField db = covariant_derivative(one_form(t.forms[b]), geo);  // b_{i;j}
    for (int a = 0; a < 4; ++a)
      for (int c = 0; c < 4; ++c) {
        Expr s;
        for (int i = 0; i < 4; ++i) {
          if (t.vectors[a][i].is_zero()) continue;
          for (int j = 0; j < 4; ++j)
            if (!t.vectors[c][j].is_zero() && !db.at({i, j}).is_zero()) s += t.vectors[a][i] * t.vectors[c][j] * db.at({i, j});
        }
        T[a][b][c] = s;
      }
  }
  return T;
}

namespace {

const char* kBase[16] = {"kappa", "rho", "sigma", "tau", "kappa~", "rho~", "sigma~", "tau~",
                         "eps", "gamma", "alpha", "beta", "eps~", "gamma~", "alpha~", "beta~"};

// Signed relabeling used for the primed half: l -> n, n -> l, m -> -mt, mt -> -m.
struct Relabel {
  std::array<int, 4> to{0, 1, 2, 3};
  std::array<int, 4> sign{1, 1, 1, 1};
};

const Relabel kIdentity{};
const Relabel kPrime{{kN, kL, kMt, kM}, {1, 1, -1, -1}};

// The sixteen unprimed definitions, evaluated on T through a relabeling.
std::array<Expr, 16> unprimed(const RotationCoefficients& T, const Relabel& r) {
  auto t = [&](int a, int b, int c) {
    int s = r.sign[a] * r.sign[b] * r.sign[c];
    return Expr(s) * T[r.to[a]][r.to[b]][r.to[c]];
  };
  auto P = [&](int X) { return t(kN, kL, X); };
  auto Q = [&](int X) { return t(kMt, kM, X); };
  Expr h = Expr::rational(1, 2);
  return {t(kM, kL, kL),   t(kM, kL, kMt),  t(kM, kL, kM),   t(kM, kL, kN),
          t(kMt, kL, kL),  t(kMt, kL, kM),  t(kMt, kL, kMt), t(kMt, kL, kN),
          h * (P(kL) - Q(kL)), h * (P(kN) - Q(kN)), h * (P(kMt) - Q(kMt)), h * (P(kM) - Q(kM)),
          h * (P(kL) + Q(kL)), h * (P(kN) + Q(kN)), h * (P(kM) + Q(kM)), h * (P(kMt) + Q(kMt))};
}

}  // namespace

std::string spin_name(Spin s) {
  int i = static_cast<int>(s);
  std::string n = kBase[i % 16];
  if (i >= 16) n += "'";
  return n;
}

Spin spin_from_name(const std::string& name) {
  for (int i = 0; i < kSpinCount; ++i)
    if (spin_name(static_cast<Spin>(i)) == name) return static_cast<Spin>(i);
  throw std::invalid_argument("unknown spin coefficient '" + name + "'");
}

Spin spin_prime(Spin s) { return static_cast<Spin>((static_cast<int>(s) + 16) % 32); }

const std::vector<Spin>& all_spins() {
  static const std::vector<Spin> all = [] {
    std::vector<Spin> v;
    for (int i = 0; i < kSpinCount; ++i) v.push_back(static_cast<Spin>(i));
    return v;
  }();
  return all;
}

SpinCoefficientTable table_from_rotation(const RotationCoefficients& T, const std::array<Vector4, 4>& vectors) {
  SpinCoefficientTable t;
  t.vectors = vectors;
  auto a = unprimed(T, kIdentity);
  auto b = unprimed(T, kPrime);
  for (int i = 0; i < 16; ++i) {
    t.values[i] = canonicalize(a[i]);
    t.values[i + 16] = canonicalize(b[i]);
  }
  return t;
}

RotationCoefficients rotation_from_table(const SpinCoefficientTable& s) {
  RotationCoefficients T;
  auto set = [&](int a, int b, int c, const Expr& e) {
    T[a][b][c] = e;
    T[b][a][c] = -e;
  };
  auto g = [&](const char* n) { return s[n]; };
  set(kM, kL, kL, g("kappa"));
  set(kM, kL, kMt, g("rho"));
  set(kM, kL, kM, g("sigma"));
  set(kM, kL, kN, g("tau"));
  set(kMt, kL, kL, g("kappa~"));
  set(kMt, kL, kM, g("rho~"));
  set(kMt, kL, kMt, g("sigma~"));
  set(kMt, kL, kN, g("tau~"));
  set(kN, kL, kL, g("eps") + g("eps~"));
  set(kMt, kM, kL, g("eps~") - g("eps"));
  set(kN, kL, kN, g("gamma") + g("gamma~"));
  set(kMt, kM, kN, g("gamma~") - g("gamma"));
  set(kN, kL, kMt, g("alpha") + g("beta~"));
  set(kMt, kM, kMt, g("beta~") - g("alpha"));
  set(kN, kL, kM, g("beta") + g("alpha~"));
  set(kMt, kM, kM, g("alpha~") - g("beta"));
  set(kMt, kN, kN, -g("kappa'"));
  set(kMt, kN, kM, g("rho'"));
  set(kMt, kN, kMt, g("sigma'"));
  set(kMt, kN, kL, -g("tau'"));
  set(kM, kN, kN, -g("kappa~'"));
  set(kM, kN, kMt, g("rho~'"));
  set(kM, kN, kM, g("sigma~'"));
  set(kM, kN, kL, -g("tau~'"));
  return T;
}

SpinCoefficientTable spin_coefficients(const Tetrad& t, const Geometry& geo) {
  return table_from_rotation(rotation_coefficients(t, geo), t.vectors);
}

SpinCoefficientTable spin_coefficients(const WalkerSpec& s) {
  Geometry geo = s.geometry();
  return spin_coefficients(calibrated_tetrad(s), geo);
}

std::vector<std::pair<std::string, Expr>> law_relations(const SpinCoefficientTable& t) {
  return {{"eps + gamma'", t["eps"] + t["gamma'"]},       {"alpha - beta'", t["alpha"] - t["beta'"]},
          {"beta - alpha'", t["beta"] - t["alpha'"]},     {"gamma + eps'", t["gamma"] + t["eps'"]},
          {"eps~ + gamma~'", t["eps~"] + t["gamma~'"]},   {"alpha~ - beta~'", t["alpha~"] - t["beta~'"]},
          {"beta~ - alpha~'", t["beta~"] - t["alpha~'"]}, {"gamma~ + eps~'", t["gamma~"] + t["eps~'"]}};
}

bool law_relations_hold(const SpinCoefficientTable& t) {
  for (auto& [k, e] : law_relations(t))
    if (!e.is_zero()) return false;
  return true;
}

Expr frame_derivative(FrameOp op, const Expr& e, const std::array<Vector4, 4>& vectors) {
  switch (op) {
    case FrameOp::D: return apply_vector(vectors[kL], e);
    case FrameOp::Dprime: return apply_vector(vectors[kN], e);
    case FrameOp::delta: return apply_vector(vectors[kM], e);
    case FrameOp::Delta: return apply_vector(vectors[kMt], e);
  }
  return Expr();
}

Expr frame_derivative(FrameOp op, const Expr& e, const SpinCoefficientTable& t) {
  return frame_derivative(op, e, t.vectors);
}

LabelMatrix boost_matrix(const Expr& A, const Expr& B) {
  if (A.is_zero() || B.is_zero()) throw FrameError("boost parameter is zero");
  LabelMatrix M;
  M[kL][kL] = Expr(1) / A;
  M[kN][kN] = A;
  M[kM][kM] = Expr(1) / B;
  M[kMt][kMt] = B;
  return M;
}

LabelMatrix null_rotation_l_matrix(const Expr& mu, const Expr& mt) {
  LabelMatrix M;
  M[kL][kL] = Expr(1);
  M[kN][kN] = Expr(1);
  M[kN][kMt] = mt;
  M[kN][kM] = -mu;
  M[kN][kL] = -mu * mt;
  M[kMt][kMt] = Expr(1);
  M[kMt][kL] = -mu;
  M[kM][kM] = Expr(1);
  M[kM][kL] = mt;
  return M;
}

LabelMatrix null_rotation_n_matrix(const Expr& mu, const Expr& mt) {
  LabelMatrix M;
  M[kN][kN] = Expr(1);
  M[kL][kL] = Expr(1);
  M[kL][kM] = -mt;
  M[kL][kMt] = mu;
  M[kL][kN] = -mu * mt;
  M[kM][kM] = Expr(1);
  M[kM][kN] = mu;
  M[kMt][kMt] = Expr(1);
  M[kMt][kN] = -mt;
  return M;
}

Tetrad transform_tetrad(const Tetrad& t, const LabelMatrix& M) {
  Tetrad r;
  for (int a = 0; a < 4; ++a)
    for (int i = 0; i < 4; ++i) {
      if (M[a][i].is_zero()) continue;
      for (int c = 0; c < 4; ++c) {
        r.forms[a][c] += M[a][i] * t.forms[i][c];
        r.vectors[a][c] += M[a][i] * t.vectors[i][c];
      }
    }
  return r;
}

SpinCoefficientTable transform_table(const SpinCoefficientTable& t, const LabelMatrix& M) {
  RotationCoefficients T = rotation_from_table(t);
  std::array<Vector4, 4> vec;
  for (int a = 0; a < 4; ++a)
    for (int i = 0; i < 4; ++i)
      if (!M[a][i].is_zero())
        for (int c = 0; c < 4; ++c) vec[a][c] += M[a][i] * t.vectors[i][c];
  // derivative of every matrix entry along every old frame vector
  std::array<std::array<std::array<Expr, 4>, 4>, 4> dM;  // dM[k][b][j] = e_k(M[b][j])
  for (int k = 0; k < 4; ++k)
    for (int b = 0; b < 4; ++b)
      for (int j = 0; j < 4; ++j)
        if (!M[b][j].is_zero() && !M[b][j].is_rational()) dM[k][b][j] = apply_vector(t.vectors[k], M[b][j]);
  RotationCoefficients R;
  for (int a = 0; a < 4; ++a)
    for (int b = 0; b < 4; ++b)
      for (int c = 0; c < 4; ++c) {
        Expr s;
        for (int i = 0; i < 4; ++i) {
          if (M[a][i].is_zero()) continue;
          for (int k = 0; k < 4; ++k) {
            if (M[c][k].is_zero()) continue;
            Expr inner;
            for (int j = 0; j < 4; ++j) {
              if (!M[b][j].is_zero() && !T[i][j][k].is_zero()) inner += M[b][j] * T[i][j][k];
              int eta = label_pairing(i, j);
              if (eta != 0 && !dM[k][b][j].is_zero()) inner += Expr(eta) * dM[k][b][j];
            }
            if (!inner.is_zero()) s += M[a][i] * M[c][k] * inner;
          }
        }
        R[a][b][c] = s;
      }
  return table_from_rotation(R, vec);
}

SpinCoefficientTable apply_boost(const SpinCoefficientTable& t, const Expr& A, const Expr& B) {
  return transform_table(t, boost_matrix(A, B));
}

SpinCoefficientTable apply_null_rotation_l(const SpinCoefficientTable& t, const Expr& mu, const Expr& mu_t) {
  return transform_table(t, null_rotation_l_matrix(mu, mu_t));
}

SpinCoefficientTable prime(const SpinCoefficientTable& t) {
  SpinCoefficientTable r;
  for (int i = 0; i < kSpinCount; ++i) r.values[i] = t.values[(i + 16) % 32];
  r.vectors = {t.vectors[kN], t.vectors[kL], t.vectors[kMt], t.vectors[kM]};
  for (int c = 0; c < 4; ++c) {
    r.vectors[kM][c] = -r.vectors[kM][c];
    r.vectors[kMt][c] = -r.vectors[kMt][c];
  }
  return r;
}

SpinCoefficientTable apply_null_rotation_n(const SpinCoefficientTable& t, const Expr& mu, const Expr& mu_t) {
  return prime(apply_null_rotation_l(prime(t), mu, mu_t));
}

bool admissible(const DiscretePerm& p) {
  std::array<int, 4> seen{0, 0, 0, 0};
  for (int a = 0; a < 4; ++a) {
    if (p.target[a] < 0 || p.target[a] > 3) return false;
    if (p.sign[a] != 1 && p.sign[a] != -1) return false;
    if (seen[p.target[a]]++) return false;
  }
  for (int a = 0; a < 4; ++a)
    for (int b = 0; b < 4; ++b)
      if (p.sign[a] * p.sign[b] * label_pairing(p.target[a], p.target[b]) != label_pairing(a, b)) return false;
  return true;
}

std::vector<DiscretePerm> admissible_perms() {
  std::vector<DiscretePerm> out;
  std::array<int, 4> perm{0, 1, 2, 3};
  do {
    for (int s = 0; s < 16; ++s) {
      DiscretePerm p;
      p.target = perm;
      for (int a = 0; a < 4; ++a) p.sign[a] = (s >> a) & 1 ? -1 : 1;
      if (admissible(p)) out.push_back(p);
    }
  } while (std::next_permutation(perm.begin(), perm.end()));
  return out;
}

DiscretePerm cross_swap() { return {{kM, kMt, kL, kN}, {1, -1, 1, -1}}; }
DiscretePerm prime_perm() { return {{kN, kL, kMt, kM}, {1, 1, -1, -1}}; }

namespace {

LabelMatrix perm_matrix(const DiscretePerm& p) {
  if (!admissible(p)) throw FrameError("inadmissible frame permutation");
  LabelMatrix M;
  for (int a = 0; a < 4; ++a) M[a][p.target[a]] = Expr(p.sign[a]);
  return M;
}

}  // namespace

SpinCoefficientTable apply_discrete(const SpinCoefficientTable& t, const DiscretePerm& p) {
  return transform_table(t, perm_matrix(p));
}

Tetrad apply_discrete(const Tetrad& t, const DiscretePerm& p) { return transform_tetrad(t, perm_matrix(p)); }

TensorField frame_components(const TensorField& t_lower, const std::array<Vector4, 4>& vectors) {
  TensorField cur = t_lower;
  int r = t_lower.rank();
  for (int slot = 0; slot < r; ++slot) {
    TensorField next(t_lower.valence());
    for (std::size_t i = 0; i < cur.size(); ++i) {
      std::vector<int> idx = next.unflat(i);
      int a = idx[slot];
      Expr s;
      for (int k = 0; k < 4; ++k) {
        if (vectors[a][k].is_zero()) continue;
        idx[slot] = k;
        const Expr& c = cur.at(idx);
        if (!c.is_zero()) s += vectors[a][k] * c;
      }
      next[i] = s;
    }
    cur = std::move(next);
  }
  return cur;
}

}  // namespace vsw
