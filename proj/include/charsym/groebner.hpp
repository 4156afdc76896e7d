#pragma once
#include <algorithm>
#include <array>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "common.hpp"

namespace charsym::groebner {

/* Polynomials over F_p in <= 3 variables; exact arithmetic for the
   characteristic-p layer (the truncated-series layer stays in series::). */

using Exp = std::array<int, 3>;

enum class MonoOrder { grevlex, lex };

inline int exp_deg(const Exp& e) { return e[0] + e[1] + e[2]; }

/* variable 0 is strongest in both orders */
inline bool mono_less(const Exp& a, const Exp& b, MonoOrder o) {
  if (o == MonoOrder::lex) return a < b;
  int da = exp_deg(a), db = exp_deg(b);
  if (da != db) return da < db;
  for (int i = 2; i >= 0; --i)
    if (a[i] != b[i]) return a[i] > b[i];
  return false;
}

inline bool exp_divides(const Exp& a, const Exp& b) {
  return a[0] <= b[0] && a[1] <= b[1] && a[2] <= b[2];
}

inline Exp exp_add(const Exp& a, const Exp& b) { return {a[0] + b[0], a[1] + b[1], a[2] + b[2]}; }
inline Exp exp_sub(const Exp& a, const Exp& b) { return {a[0] - b[0], a[1] - b[1], a[2] - b[2]}; }
inline Exp exp_lcm(const Exp& a, const Exp& b) {
  return {std::max(a[0], b[0]), std::max(a[1], b[1]), std::max(a[2], b[2])};
}

struct PolyFp {
  u64 p = 0;
  int nvars = 0;
  std::map<Exp, u64> terms;  // coefficients in [1, p)

  static PolyFp zero(u64 p, int nvars) { return {p, nvars, {}}; }
  static PolyFp constant(u64 p, int nvars, i64 c) {
    PolyFp f{p, nvars, {}};
    f.set({0, 0, 0}, c);
    return f;
  }
  static PolyFp variable(u64 p, int nvars, int i, int e = 1) {
    if (i < 0 || i >= nvars) throw PreconditionError("variable index out of range");
    PolyFp f{p, nvars, {}};
    Exp ex{0, 0, 0};
    ex[i] = e;
    f.set(ex, 1);
    return f;
  }

  void set(const Exp& e, i64 c) {
    u64 v = u64(((c % i64(p)) + i64(p)) % i64(p));
    if (v)
      terms[e] = v;
    else
      terms.erase(e);
  }
  void addin(const Exp& e, u64 c) {
    u64 v = (terms.count(e) ? terms[e] + c : c) % p;
    if (v)
      terms[e] = v;
    else
      terms.erase(e);
  }
  bool is_zero() const { return terms.empty(); }
  int degree() const {
    int d = -1;
    for (const auto& [e, c] : terms) d = std::max(d, exp_deg(e));
    return d;
  }
};

inline void check_ctx(const PolyFp& f, const PolyFp& g) {
  if (f.p != g.p || f.nvars != g.nvars)
    throw PreconditionError("polynomial context mismatch");
}

inline PolyFp fp_add(const PolyFp& f, const PolyFp& g) {
  check_ctx(f, g);
  PolyFp h = f;
  for (const auto& [e, c] : g.terms) h.addin(e, c);
  return h;
}

inline PolyFp fp_scale(const PolyFp& f, u64 c) {
  PolyFp h{f.p, f.nvars, {}};
  c %= f.p;
  if (!c) return h;
  for (const auto& [e, v] : f.terms) h.terms[e] = v * c % f.p;
  return h;
}

inline PolyFp fp_neg(const PolyFp& f) { return fp_scale(f, f.p - 1); }

inline PolyFp fp_sub(const PolyFp& f, const PolyFp& g) { return fp_add(f, fp_neg(g)); }

inline PolyFp fp_mono_mul(const PolyFp& f, const Exp& e, u64 c) {
  PolyFp h{f.p, f.nvars, {}};
  c %= f.p;
  if (!c) return h;
  for (const auto& [m, v] : f.terms) h.terms[exp_add(m, e)] = v * c % f.p;
  return h;
}

inline PolyFp fp_mul(const PolyFp& f, const PolyFp& g) {
  check_ctx(f, g);
  PolyFp h{f.p, f.nvars, {}};
  for (const auto& [e, c] : f.terms) h = fp_add(h, fp_mono_mul(g, e, c));
  return h;
}

/* leading term under the given order */
inline std::pair<Exp, u64> fp_leading(const PolyFp& f, MonoOrder o) {
  if (f.is_zero()) throw PreconditionError("leading term of zero");
  auto best = f.terms.begin();
  for (auto it = std::next(f.terms.begin()); it != f.terms.end(); ++it)
    if (mono_less(best->first, it->first, o)) best = it;
  return {best->first, best->second};
}

/* ---------- free-module layer: vectors with position-over-term order ---------- */

using VecFp = std::vector<PolyFp>;

inline bool vec_is_zero(const VecFp& v) {
  for (const auto& f : v)
    if (!f.is_zero()) return false;
  return true;
}

inline VecFp vec_add(const VecFp& a, const VecFp& b) {
  VecFp c = a;
  for (size_t i = 0; i < c.size(); ++i) c[i] = fp_add(c[i], b[i]);
  return c;
}

inline VecFp vec_mono_mul(const VecFp& v, const Exp& e, u64 c) {
  VecFp out = v;
  for (auto& f : out) f = fp_mono_mul(f, e, c);
  return out;
}

inline VecFp vec_scale(const VecFp& v, u64 c) {
  VecFp out = v;
  for (auto& f : out) f = fp_scale(f, c);
  return out;
}

struct ModTerm {
  int comp = 0;
  Exp e{0, 0, 0};
  u64 coeff = 0;
};

/* POT: lower component index dominates; ties by the monomial order */
inline ModTerm vec_leading(const VecFp& v, MonoOrder o) {
  for (size_t i = 0; i < v.size(); ++i)
    if (!v[i].is_zero()) {
      auto [e, c] = fp_leading(v[i], o);
      return {int(i), e, c};
    }
  throw PreconditionError("leading term of zero vector");
}

/* multivariate division: v = sum q_j B_j + r with no r-term divisible by a
   leading term of B; deterministic (first matching divisor wins) */
struct Division {
  std::vector<PolyFp> q;
  VecFp r;
};

inline Division vec_divide(VecFp v, const std::vector<VecFp>& B, MonoOrder o) {
  u64 p = 0;
  int nv = 0;
  for (const auto& f : v)
    if (f.p) { p = f.p; nv = f.nvars; }
  Division out;
  out.q.assign(B.size(), PolyFp::zero(p, nv));
  out.r.assign(v.size(), PolyFp::zero(p, nv));
  while (!vec_is_zero(v)) {
    ModTerm lt = vec_leading(v, o);
    bool reduced = false;
    for (size_t j = 0; j < B.size(); ++j) {
      if (vec_is_zero(B[j])) continue;
      ModTerm bt = vec_leading(B[j], o);
      if (bt.comp != lt.comp || !exp_divides(bt.e, lt.e)) continue;
      u64 c = lt.coeff * powmod(bt.coeff, p - 2, p) % p;
      Exp sh = exp_sub(lt.e, bt.e);
      out.q[j].addin(sh, c);
      v = vec_add(v, vec_mono_mul(B[j], sh, p - c));
      reduced = true;
      break;
    }
    if (!reduced) {
      out.r[lt.comp].addin(lt.e, lt.coeff);
      v[lt.comp].addin(lt.e, p - lt.coeff);
    }
  }
  return out;
}

/* ---------- Buchberger with input tracking ----------
   Computes a reduced module Groebner basis; every basis element carries its
   representation over the original generators, which powers membership
   lifts and syzygies of arbitrary generating sets. */

class ModuleBasis {
 public:
  ModuleBasis(std::vector<VecFp> gens, MonoOrder order, u64 p, int nvars, int rank)
      : ord_(order), p_(p), nvars_(nvars), rank_(rank), ngens_(int(gens.size())) {
    for (int l = 0; l < ngens_; ++l) {
      if (vec_is_zero(gens[l])) continue;
      VecFp rep(ngens_, PolyFp::zero(p_, nvars_));
      rep[l] = PolyFp::constant(p_, nvars_, 1);
      int sugar = 0;
      for (const auto& f : gens[l]) sugar = std::max(sugar, f.degree());
      push(gens[l], rep, sugar);
    }
    run();
    interreduce();
  }

  const std::vector<VecFp>& basis() const { return basis_; }
  const std::vector<VecFp>& reps() const { return reps_; }
  MonoOrder order() const { return ord_; }

  /* membership with representation over the ORIGINAL generators */
  bool contains(const VecFp& w, VecFp* lift = nullptr) const {
    Division d = vec_divide(w, basis_, ord_);
    if (!vec_is_zero(d.r)) return false;
    if (lift) {
      VecFp acc(ngens_, PolyFp::zero(p_, nvars_));
      for (size_t j = 0; j < basis_.size(); ++j)
        if (!d.q[j].is_zero())
          for (int l = 0; l < ngens_; ++l)
            acc[l] = fp_add(acc[l], fp_mul(d.q[j], reps_[j][l]));
      *lift = std::move(acc);
    }
    return true;
  }

  /* Schreyer generators of the syzygy module of basis() */
  std::vector<VecFp> schreyer() const {
    std::vector<VecFp> out;
    for (size_t i = 0; i < basis_.size(); ++i)
      for (size_t j = i + 1; j < basis_.size(); ++j) {
        ModTerm a = vec_leading(basis_[i], ord_);
        ModTerm b = vec_leading(basis_[j], ord_);
        if (a.comp != b.comp) continue;
        Exp l = exp_lcm(a.e, b.e);
        VecFp s = vec_add(vec_mono_mul(basis_[i], exp_sub(l, a.e), 1),
                          vec_mono_mul(basis_[j], exp_sub(l, b.e), p_ - 1));
        Division d = vec_divide(s, basis_, ord_);
        if (!vec_is_zero(d.r)) throw PreconditionError("schreyer: input is not a Groebner basis");
        VecFp syz(basis_.size(), PolyFp::zero(p_, nvars_));
        syz[i].addin(exp_sub(l, a.e), 1);
        syz[j].addin(exp_sub(l, b.e), p_ - 1);
        for (size_t k = 0; k < basis_.size(); ++k) syz[k] = fp_sub(syz[k], d.q[k]);
        if (!vec_is_zero(syz)) out.push_back(std::move(syz));
      }
    return out;
  }

  /* generating set of relations among the ORIGINAL generators */
  std::vector<VecFp> input_syzygies(const std::vector<VecFp>& gens) const {
    std::vector<VecFp> out;
    // rows of (Id - Q*A): each input re-expressed through the basis
    for (int l = 0; l < ngens_; ++l) {
      VecFp lift;
      if (!contains(gens[l], &lift)) throw std::logic_error("input escapes its own module");
      lift[l] = fp_sub(lift[l], PolyFp::constant(p_, nvars_, 1));
      if (!vec_is_zero(lift)) out.push_back(vec_scale(lift, p_ - 1));
    }
    // Schreyer syzygies of the basis, pushed through the representations
    for (const auto& s : schreyer()) {
      VecFp acc(ngens_, PolyFp::zero(p_, nvars_));
      for (size_t j = 0; j < basis_.size(); ++j)
        if (!s[j].is_zero())
          for (int l = 0; l < ngens_; ++l) acc[l] = fp_add(acc[l], fp_mul(s[j], reps_[j][l]));
      if (!vec_is_zero(acc)) out.push_back(std::move(acc));
    }
    return out;
  }

 private:
  struct Pair {
    size_t i, j;
    Exp lcm;
    int sugar;
  };

  void push(VecFp v, VecFp rep, int sugar) {
    ModTerm lt = vec_leading(v, ord_);
    u64 inv = powmod(lt.coeff, p_ - 2, p_);
    v = vec_scale(v, inv);
    rep = vec_scale(rep, inv);
    for (size_t i = 0; i < basis_.size(); ++i) {
      ModTerm a = vec_leading(basis_[i], ord_);
      if (a.comp != lt.comp) continue;
      Exp l = exp_lcm(a.e, lt.e);
      // product criterion, valid on the polynomial (rank-1) layer only
      if (rank_ == 1 && l == exp_add(a.e, lt.e)) continue;
      int sg = std::max(sugars_[i] + exp_deg(exp_sub(l, a.e)), sugar + exp_deg(exp_sub(l, lt.e)));
      pairs_.push_back({i, basis_.size(), l, sg});
    }
    basis_.push_back(std::move(v));
    reps_.push_back(std::move(rep));
    sugars_.push_back(sugar);
  }

  void run() {
    while (!pairs_.empty()) {
      // normal selection with sugar: lowest sugar, then smallest lcm, then index
      size_t best = 0;
      for (size_t k = 1; k < pairs_.size(); ++k) {
        const Pair& a = pairs_[k];
        const Pair& b = pairs_[best];
        bool better = a.sugar != b.sugar
                          ? a.sugar < b.sugar
                          : (a.lcm != b.lcm ? mono_less(a.lcm, b.lcm, ord_)
                                            : std::tie(a.i, a.j) < std::tie(b.i, b.j));
        if (better) best = k;
      }
      Pair pr = pairs_[best];
      pairs_.erase(pairs_.begin() + best);
      ModTerm a = vec_leading(basis_[pr.i], ord_);
      ModTerm b = vec_leading(basis_[pr.j], ord_);
      VecFp s = vec_add(vec_mono_mul(basis_[pr.i], exp_sub(pr.lcm, a.e), 1),
                        vec_mono_mul(basis_[pr.j], exp_sub(pr.lcm, b.e), p_ - 1));
      VecFp rep = vec_add(vec_mono_mul(reps_[pr.i], exp_sub(pr.lcm, a.e), 1),
                          vec_mono_mul(reps_[pr.j], exp_sub(pr.lcm, b.e), p_ - 1));
      Division d = vec_divide(s, basis_, ord_);
      for (size_t k = 0; k < basis_.size(); ++k)
        if (!d.q[k].is_zero())
          for (int c = 0; c < ngens_; ++c)
            rep[c] = fp_add(rep[c], fp_mul(fp_neg(d.q[k]), reps_[k][c]));
      if (!vec_is_zero(d.r)) push(std::move(d.r), std::move(rep), pr.sugar);
    }
  }

  void interreduce() {
    // drop elements whose leading term another leading term divides
    for (size_t i = 0; i < basis_.size();) {
      ModTerm a = vec_leading(basis_[i], ord_);
      bool redundant = false;
      for (size_t j = 0; j < basis_.size() && !redundant; ++j) {
        if (i == j) continue;
        ModTerm b = vec_leading(basis_[j], ord_);
        redundant = b.comp == a.comp && exp_divides(b.e, a.e) &&
                    (b.e != a.e || j < i);
      }
      if (redundant) {
        basis_.erase(basis_.begin() + i);
        reps_.erase(reps_.begin() + i);
        sugars_.erase(sugars_.begin() + i);
      } else {
        ++i;
      }
    }
    // tail-reduce every element against the others
    for (size_t i = 0; i < basis_.size(); ++i) {
      std::vector<VecFp> others;
      std::vector<size_t> idx;
      for (size_t j = 0; j < basis_.size(); ++j)
        if (j != i) { others.push_back(basis_[j]); idx.push_back(j); }
      Division d = vec_divide(basis_[i], others, ord_);
      basis_[i] = d.r;
      for (size_t k = 0; k < others.size(); ++k)
        if (!d.q[k].is_zero())
          for (int c = 0; c < ngens_; ++c)
            reps_[i][c] = fp_add(reps_[i][c], fp_mul(fp_neg(d.q[k]), reps_[idx[k]][c]));
    }
    // deterministic ordering: descending leading module term
    std::vector<size_t> perm(basis_.size());
    for (size_t i = 0; i < perm.size(); ++i) perm[i] = i;
    std::sort(perm.begin(), perm.end(), [&](size_t x, size_t y) {
      ModTerm a = vec_leading(basis_[x], ord_);
      ModTerm b = vec_leading(basis_[y], ord_);
      if (a.comp != b.comp) return a.comp < b.comp;
      return mono_less(b.e, a.e, ord_);
    });
    std::vector<VecFp> nb, nr;
    std::vector<int> ns;
    for (size_t i : perm) {
      nb.push_back(basis_[i]);
      nr.push_back(reps_[i]);
      ns.push_back(sugars_[i]);
    }
    basis_ = std::move(nb);
    reps_ = std::move(nr);
    sugars_ = std::move(ns);
  }

  MonoOrder ord_;
  u64 p_;
  int nvars_, rank_, ngens_;
  std::vector<VecFp> basis_, reps_;
  std::vector<int> sugars_;
  std::vector<Pair> pairs_;
};

/* ---------- ideal-level interface ---------- */

struct GBasis {
  std::vector<PolyFp> gens;  // reduced, monic, deterministic order
  MonoOrder order = MonoOrder::grevlex;
  u64 p = 0;
  int nvars = 0;
};

inline GBasis buchberger(const std::vector<PolyFp>& gens, MonoOrder order = MonoOrder::grevlex) {
  if (gens.empty()) throw PreconditionError("buchberger: empty generator list");
  u64 p = gens[0].p;
  int nv = gens[0].nvars;
  std::vector<VecFp> vgens;
  for (const auto& g : gens) vgens.push_back({g});
  ModuleBasis mb(vgens, order, p, nv, 1);
  GBasis out{{}, order, p, nv};
  for (const auto& v : mb.basis()) out.gens.push_back(v[0]);
  return out;
}

inline PolyFp normal_form(const PolyFp& f, const GBasis& B) {
  std::vector<VecFp> vb;
  for (const auto& g : B.gens) vb.push_back({g});
  return vec_divide({f}, vb, B.order).r[0];
}

/* number of standard monomials; nullopt = infinite staircase */
inline std::optional<i64> staircase_count(const std::vector<Exp>& lts, int nvars) {
  for (const auto& e : lts)
    if (e == Exp{0, 0, 0}) return 0;  // unit ideal
  Exp box{1, 1, 1};
  for (int i = 0; i < nvars; ++i) {
    int bound = -1;
    for (const auto& e : lts) {
      bool pure = exp_deg(e) == e[i];
      if (pure) bound = bound < 0 ? e[i] : std::min(bound, e[i]);
    }
    if (bound < 0) return std::nullopt;
    box[i] = bound;
  }
  i64 count = 0;
  Exp m{0, 0, 0};
  for (m[0] = 0; m[0] < box[0]; ++m[0])
    for (m[1] = 0; m[1] < box[1]; ++m[1])
      for (m[2] = 0; m[2] < box[2]; ++m[2]) {
        bool divisible = false;
        for (const auto& e : lts)
          if (exp_divides(e, m)) { divisible = true; break; }
        if (!divisible) ++count;
      }
  return count;
}

inline std::optional<i64> quotient_dim(const GBasis& B) {
  std::vector<Exp> lts;
  for (const auto& g : B.gens) lts.push_back(fp_leading(g, B.order).first);
  return staircase_count(lts, B.nvars);
}

/* F_p-dimension of R^rank / <rows>; nullopt = infinite */
inline std::optional<i64> module_quotient_dim(const std::vector<VecFp>& rows, int rank,
                                              MonoOrder order, u64 p, int nvars) {
  ModuleBasis mb(rows, order, p, nvars, rank);
  std::vector<std::vector<Exp>> lts(rank);
  for (const auto& v : mb.basis()) {
    ModTerm t = vec_leading(v, order);
    lts[t.comp].push_back(t.e);
  }
  i64 total = 0;
  for (int c = 0; c < rank; ++c) {
    auto n = staircase_count(lts[c], nvars);
    if (!n) return std::nullopt;
    total += *n;
  }
  return total;
}

inline std::vector<VecFp> syzygies(const GBasis& B) {
  std::vector<VecFp> vb;
  for (const auto& g : B.gens) vb.push_back({g});
  ModuleBasis mb(vb, B.order, B.p, B.nvars, 1);
  // basis() of an input Groebner basis is the same list (up to ordering);
  // Schreyer syzygies are requested over the ORIGINAL indexing
  return mb.input_syzygies(vb);
}

/* syzygies of an arbitrary generator list inside R^rank */
inline std::vector<VecFp> syzygies_of(const std::vector<VecFp>& gens, int rank, MonoOrder order,
                                      u64 p, int nvars) {
  ModuleBasis mb(gens, order, p, nvars, rank);
  return mb.input_syzygies(gens);
}

/* ---------- parsing and printing ---------- */

inline PolyFp parse_fp(const std::string& text, u64 p, int nvars,
                       const std::vector<std::string>& names = {"x", "y", "z"}) {
  PolyFp out = PolyFp::zero(p, nvars);
  size_t i = 0;
  auto skip = [&] { while (i < text.size() && std::isspace(unsigned(text[i]))) ++i; };
  auto fail = [&](const std::string& m) {
    throw ParseError(m + " at column " + std::to_string(i + 1));
  };
  skip();
  bool expect_term = true;
  i64 sign = 1;
  while (i < text.size()) {
    if (!expect_term) {
      if (text[i] == '+') { sign = 1; ++i; }
      else if (text[i] == '-') { sign = -1; ++i; }
      else fail("expected '+' or '-'");
      skip();
      expect_term = true;
      continue;
    }
    if (text[i] == '-') { sign = -sign; ++i; skip(); continue; }
    i64 coeff = 1;
    Exp e{0, 0, 0};
    bool any = false;
    bool want_factor = true;
    while (want_factor) {
      skip();
      if (i < text.size() && std::isdigit(unsigned(text[i]))) {
        i64 v = 0;
        while (i < text.size() && std::isdigit(unsigned(text[i]))) {
          v = (v * 10 + (text[i] - '0')) % i64(p);
          ++i;
        }
        coeff = coeff * v % i64(p);
        any = true;
      } else {
        size_t var = names.size();
        for (size_t k = 0; k < names.size(); ++k)
          if (text.compare(i, names[k].size(), names[k]) == 0) { var = k; break; }
        if (var == names.size() || int(var) >= nvars) fail("expected coefficient or variable");
        i += names[var].size();
        int pw = 1;
        skip();
        if (i < text.size() && text[i] == '^') {
          ++i;
          skip();
          if (i >= text.size() || !std::isdigit(unsigned(text[i]))) fail("expected exponent");
          pw = 0;
          while (i < text.size() && std::isdigit(unsigned(text[i]))) pw = pw * 10 + (text[i++] - '0');
        }
        e[var] += pw;
        any = true;
      }
      skip();
      if (i < text.size() && text[i] == '*') { ++i; want_factor = true; }
      else want_factor = false;
    }
    if (!any) fail("empty term");
    i64 prev = out.terms.count(e) ? i64(out.terms[e]) : 0;
    out.set(e, prev + sign * coeff);
    sign = 1;
    expect_term = false;
    skip();
  }
  if (expect_term) fail("dangling operator");
  return out;
}

inline std::string fp_string(const PolyFp& f, MonoOrder order = MonoOrder::grevlex,
                             const std::vector<std::string>& names = {"x", "y", "z"}) {
  if (f.is_zero()) return "0";
  std::vector<Exp> exps;
  for (const auto& [e, c] : f.terms) exps.push_back(e);
  std::sort(exps.begin(), exps.end(),
            [&](const Exp& a, const Exp& b) { return mono_less(b, a, order); });
  std::string out;
  for (const auto& e : exps) {
    u64 c = f.terms.at(e);
    if (!out.empty()) out += " + ";
    std::string mono;
    for (int v = 0; v < f.nvars; ++v) {
      if (!e[v]) continue;
      if (!mono.empty()) mono += "*";
      mono += names[v];
      if (e[v] > 1) mono += "^" + std::to_string(e[v]);
    }
    if (mono.empty())
      out += std::to_string(c);
    else if (c == 1)
      out += mono;
    else
      out += std::to_string(c) + "*" + mono;
  }
  return out;
}

}  // namespace charsym::groebner
