#ifndef LCY_POLY_HPP
#define LCY_POLY_HPP

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "lcy/ext.hpp"
#include "lcy/rat.hpp"

namespace lcy {

using Expo = std::vector<uint32_t>;

inline uint32_t expo_total(const Expo& e) {
  uint32_t s = 0;
  for (auto x : e) s += x;
  return s;
}

// Graded lexicographic, descending, so map.begin() is the leading term.
// Variables earlier in the (alphabetically sorted) list are more significant.
struct GrlexDesc {
  bool operator()(const Expo& a, const Expo& b) const {
    uint32_t ta = expo_total(a), tb = expo_total(b);
    if (ta != tb) return ta > tb;
    return a > b;  // lexicographic on exponent vectors
  }
};

// Sparse multivariate polynomial with exact coefficients over a field K
// (K = Rat or ExtElem). Canonical form: no zero coefficients, variables
// sorted by name with unused variables stripped, terms in graded-lex order.
template <class K>
class PolyT {
 public:
  using Terms = std::map<Expo, K, GrlexDesc>;

  PolyT() = default;
  explicit PolyT(const K& c) {
    if (!lcy::is_zero(c)) terms_[Expo{}] = c;
  }
  PolyT(long n) : PolyT(K(n)) {}

  static PolyT zero() { return PolyT(); }
  static PolyT constant(const K& c) { return PolyT(c); }
  static PolyT variable(const std::string& name) {
    PolyT p;
    p.vars_ = {name};
    p.terms_[Expo{1}] = K(1);
    return p;
  }
  static PolyT monomial(const std::vector<std::string>& vars, Expo e, const K& c) {
    PolyT p;
    p.vars_ = vars;
    if (!lcy::is_zero(c)) p.terms_[std::move(e)] = c;
    p.normalize();
    return p;
  }

  const std::vector<std::string>& vars() const { return vars_; }
  const Terms& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  bool is_constant() const { return terms_.empty() || (terms_.size() == 1 && expo_total(terms_.begin()->first) == 0); }
  K constant_value() const {
    if (terms_.empty()) return K(0);
    if (!is_constant()) throw std::logic_error("constant_value on non-constant polynomial");
    return terms_.begin()->second;
  }
  size_t term_count() const { return terms_.size(); }

  int degree() const {
    if (terms_.empty()) return -1;
    return int(expo_total(terms_.begin()->first));
  }

  int degree_in(const std::string& var) const {
    int idx = var_index(var);
    if (idx < 0) return 0;
    int d = 0;
    for (const auto& [e, c] : terms_) d = std::max<int>(d, e[idx]);
    return d;
  }

  K leading_coeff() const { return terms_.empty() ? K(0) : terms_.begin()->second; }
  Expo leading_expo() const { return terms_.empty() ? Expo{} : terms_.begin()->first; }

  bool has_var(const std::string& var) const { return var_index(var) >= 0; }

  friend bool operator==(const PolyT& a, const PolyT& b) {
    return a.vars_ == b.vars_ && a.terms_ == b.terms_;
  }
  friend bool operator!=(const PolyT& a, const PolyT& b) { return !(a == b); }
  // Canonical total order (for sorting boundary factors deterministically).
  friend bool operator<(const PolyT& a, const PolyT& b) {
    if (a.vars_ != b.vars_) return a.vars_ < b.vars_;
    auto ia = a.terms_.begin(), ib = b.terms_.begin();
    GrlexDesc lt;
    for (; ia != a.terms_.end() && ib != b.terms_.end(); ++ia, ++ib) {
      if (ia->first != ib->first) return lt(ia->first, ib->first);
      if (ia->second != ib->second) return ia->second < ib->second;
    }
    return ia == a.terms_.end() && ib != b.terms_.end();
  }

  friend PolyT operator+(const PolyT& a, const PolyT& b) {
    auto [va, vb, vars] = aligned(a, b);
    PolyT r;
    r.vars_ = vars;
    r.terms_ = va;
    for (auto& [e, c] : vb) {
      auto it = r.terms_.find(e);
      if (it == r.terms_.end())
        r.terms_.emplace(e, c);
      else {
        it->second += c;
        if (lcy::is_zero(it->second)) r.terms_.erase(it);
      }
    }
    r.strip_vars();
    return r;
  }
  friend PolyT operator-(const PolyT& a, const PolyT& b) { return a + (-b); }
  PolyT operator-() const {
    PolyT r = *this;
    for (auto& [e, c] : r.terms_) c = -c;
    return r;
  }

  friend PolyT operator*(const PolyT& a, const PolyT& b) {
    if (a.is_zero() || b.is_zero()) return PolyT();
    auto [va, vb, vars] = aligned(a, b);
    PolyT r;
    r.vars_ = vars;
    size_t n = vars.size();
    for (const auto& [ea, ca] : va)
      for (const auto& [eb, cb] : vb) {
        Expo e(n);
        for (size_t i = 0; i < n; ++i) e[i] = ea[i] + eb[i];
        K prod = ca * cb;
        auto it = r.terms_.find(e);
        if (it == r.terms_.end()) {
          if (!lcy::is_zero(prod)) r.terms_.emplace(std::move(e), std::move(prod));
        } else {
          it->second += prod;
          if (lcy::is_zero(it->second)) r.terms_.erase(it);
        }
      }
    r.strip_vars();
    return r;
  }

  friend PolyT operator*(const K& c, const PolyT& p) {
    if (lcy::is_zero(c)) return PolyT();
    PolyT r = p;
    for (auto& [e, x] : r.terms_) x *= c;
    return r;
  }
  friend PolyT operator*(const PolyT& p, const K& c) { return c * p; }
  PolyT operator/(const K& c) const { return K(K(1) / c) * (*this); }

  friend PolyT operator+(const PolyT& a, const K& c) { return a + PolyT(c); }
  friend PolyT operator+(const K& c, const PolyT& a) { return a + PolyT(c); }
  friend PolyT operator-(const PolyT& a, const K& c) { return a - PolyT(c); }
  friend PolyT operator-(const K& c, const PolyT& a) { return PolyT(c) - a; }

  PolyT& operator+=(const PolyT& b) { return *this = *this + b; }
  PolyT& operator-=(const PolyT& b) { return *this = *this - b; }
  PolyT& operator*=(const PolyT& b) { return *this = *this * b; }

  PolyT pow(uint32_t n) const {
    PolyT r(K(1)), base = *this;
    while (n) {
      if (n & 1) r *= base;
      base = n > 1 ? base * base : base;
      n >>= 1;
    }
    return r;
  }

  // Formal partial derivative.
  PolyT derivative(const std::string& var) const {
    int idx = var_index(var);
    if (idx < 0) return PolyT();
    PolyT r;
    r.vars_ = vars_;
    for (const auto& [e, c] : terms_) {
      if (e[idx] == 0) continue;
      Expo e2 = e;
      e2[idx] -= 1;
      r.terms_[std::move(e2)] = c * K(long(e[idx]));
    }
    r.strip_vars();
    return r;
  }

  // Minimum weighted degree over stored terms; weights default to 0 for
  // variables absent from the map. Errors on the zero polynomial.
  long weighted_order(const std::map<std::string, long>& weights) const {
    if (terms_.empty()) throw std::domain_error("order of zero polynomial");
    long best = 0;
    bool first = true;
    for (const auto& [e, c] : terms_) {
      long w = 0;
      for (size_t i = 0; i < vars_.size(); ++i) {
        auto it = weights.find(vars_[i]);
        if (it != weights.end()) w += it->second * long(e[i]);
      }
      if (first || w < best) best = w, first = false;
    }
    return best;
  }

  long weighted_degree_max(const std::map<std::string, long>& weights) const {
    if (terms_.empty()) throw std::domain_error("degree of zero polynomial");
    long best = 0;
    bool first = true;
    for (const auto& [e, c] : terms_) {
      long w = 0;
      for (size_t i = 0; i < vars_.size(); ++i) {
        auto it = weights.find(vars_[i]);
        if (it != weights.end()) w += it->second * long(e[i]);
      }
      if (first || w > best) best = w, first = false;
    }
    return best;
  }

  bool is_weighted_homogeneous(const std::map<std::string, long>& weights) const {
    return is_zero() || weighted_order(weights) == weighted_degree_max(weights);
  }

  // The part of this polynomial of exact weighted degree d.
  PolyT weighted_part(const std::map<std::string, long>& weights, long d) const {
    PolyT r;
    r.vars_ = vars_;
    for (const auto& [e, c] : terms_) {
      long w = 0;
      for (size_t i = 0; i < vars_.size(); ++i) {
        auto it = weights.find(vars_[i]);
        if (it != weights.end()) w += it->second * long(e[i]);
      }
      if (w == d) r.terms_.emplace(e, c);
    }
    r.strip_vars();
    return r;
  }

  // Coefficient of var^k, a polynomial in the remaining variables.
  PolyT coeff_of(const std::string& var, uint32_t k) const {
    int idx = var_index(var);
    if (idx < 0) return k == 0 ? *this : PolyT();
    PolyT r;
    r.vars_ = vars_;
    for (const auto& [e, c] : terms_) {
      if (e[idx] != k) continue;
      Expo e2 = e;
      e2[idx] = 0;
      r.terms_.emplace(std::move(e2), c);
    }
    r.strip_vars();
    return r;
  }

  std::vector<PolyT> as_univariate(const std::string& var) const {
    int d = degree_in(var);
    std::vector<PolyT> out;
    out.reserve(d + 1);
    for (int k = 0; k <= d; ++k) out.push_back(coeff_of(var, uint32_t(k)));
    return out;
  }

  // Substitute polynomials for variables. Unassigned variables persist.
  PolyT substitute_poly(const std::map<std::string, PolyT>& assignment) const {
    PolyT result;
    for (const auto& [e, c] : terms_) {
      PolyT term(c);
      for (size_t i = 0; i < vars_.size(); ++i) {
        if (e[i] == 0) continue;
        auto it = assignment.find(vars_[i]);
        PolyT base = it != assignment.end() ? it->second : variable(vars_[i]);
        term *= base.pow(e[i]);
      }
      result += term;
    }
    return result;
  }

  // Rename variables (target names must keep terms well-defined).
  PolyT rename(const std::map<std::string, std::string>& m) const {
    std::map<std::string, PolyT> a;
    for (const auto& [from, to] : m) a[from] = variable(to);
    return substitute_poly(a);
  }

  // Set a single variable to a constant.
  PolyT set_var(const std::string& var, const K& value) const {
    int idx = var_index(var);
    if (idx < 0) return *this;
    PolyT r;
    r.vars_ = vars_;
    for (const auto& [e, c] : terms_) {
      K coeff = c;
      for (uint32_t k = 0; k < e[idx]; ++k) coeff *= value;
      if (lcy::is_zero(coeff)) continue;
      Expo e2 = e;
      e2[idx] = 0;
      auto it = r.terms_.find(e2);
      if (it == r.terms_.end())
        r.terms_.emplace(std::move(e2), std::move(coeff));
      else {
        it->second += coeff;
        if (lcy::is_zero(it->second)) r.terms_.erase(it);
      }
    }
    r.strip_vars();
    return r;
  }

  // Full evaluation; missing variables are an error. K2 admits evaluating a
  // rational polynomial at extension-field coordinates.
  template <class K2>
  K2 evaluate(const std::map<std::string, K2>& point) const {
    K2 acc(0);
    for (const auto& [e, c] : terms_) {
      K2 term = lift<K2>(c);
      for (size_t i = 0; i < vars_.size(); ++i) {
        if (e[i] == 0) continue;
        auto it = point.find(vars_[i]);
        if (it == point.end()) throw std::invalid_argument("evaluate: unassigned variable " + vars_[i]);
        for (uint32_t k = 0; k < e[i]; ++k) term *= it->second;
      }
      acc += term;
    }
    return acc;
  }

  // Exact division: returns f/g when g divides exactly, nullopt otherwise.
  static std::optional<PolyT> exact_divide(const PolyT& f, const PolyT& g) {
    if (g.is_zero()) throw std::domain_error("division by zero polynomial");
    if (f.is_zero()) return PolyT();
    auto [vf, vg, vars] = aligned(f, g);
    size_t n = vars.size();
    Terms rem = vf;
    const Expo& ge = vg.begin()->first;
    const K& gc = vg.begin()->second;
    PolyT q;
    q.vars_ = vars;
    while (!rem.empty()) {
      const Expo& re = rem.begin()->first;
      Expo qe(n);
      for (size_t i = 0; i < n; ++i) {
        if (re[i] < ge[i]) return std::nullopt;
        qe[i] = re[i] - ge[i];
      }
      K qc = rem.begin()->second / gc;
      // rem -= (qc * x^qe) * g
      for (const auto& [e, c] : vg) {
        Expo e2(n);
        for (size_t i = 0; i < n; ++i) e2[i] = e[i] + qe[i];
        K delta = qc * c;
        auto it = rem.find(e2);
        if (it == rem.end())
          rem.emplace(std::move(e2), -delta);
        else {
          it->second -= delta;
          if (lcy::is_zero(it->second)) rem.erase(it);
        }
      }
      q.terms_.emplace(std::move(qe), std::move(qc));
    }
    q.strip_vars();
    return q;
  }

  // Divides out g as many times as possible; returns the multiplicity.
  static int strip_factor(PolyT& f, const PolyT& g) {
    int k = 0;
    for (;;) {
      auto q = exact_divide(f, g);
      if (!q) return k;
      f = *q;
      ++k;
    }
  }

  // Sylvester resultant eliminating var. Degenerate conventions: matrix is
  // built on actual degrees; two var-free inputs give 1; a single var-free
  // input g gives g^{deg_var f}.
  static PolyT resultant(const PolyT& f, const PolyT& g, const std::string& var);

  // Leading-coefficient normalization: divide by the grlex leading coeff.
  PolyT monic() const {
    if (is_zero()) return *this;
    return *this / leading_coeff();
  }

  std::string str() const;

  void normalize() {
    for (auto it = terms_.begin(); it != terms_.end();)
      it = lcy::is_zero(it->second) ? terms_.erase(it) : std::next(it);
    strip_vars();
  }

 private:
  template <class K2>
  static K2 lift(const K& c) {
    if constexpr (std::is_same_v<K, K2>)
      return c;
    else
      return K2(c);
  }

  int var_index(const std::string& var) const {
    auto it = std::lower_bound(vars_.begin(), vars_.end(), var);
    if (it == vars_.end() || *it != var) return -1;
    return int(it - vars_.begin());
  }

  // Align two polynomials over the sorted union of their variables.
  static std::tuple<Terms, Terms, std::vector<std::string>> aligned(const PolyT& a, const PolyT& b) {
    if (a.vars_ == b.vars_) return {a.terms_, b.terms_, a.vars_};
    std::vector<std::string> vars;
    std::set_union(a.vars_.begin(), a.vars_.end(), b.vars_.begin(), b.vars_.end(), std::back_inserter(vars));
    return {remap(a, vars), remap(b, vars), vars};
  }

  static Terms remap(const PolyT& p, const std::vector<std::string>& vars) {
    std::vector<size_t> pos(p.vars_.size());
    for (size_t i = 0; i < p.vars_.size(); ++i)
      pos[i] = std::lower_bound(vars.begin(), vars.end(), p.vars_[i]) - vars.begin();
    Terms out;
    for (const auto& [e, c] : p.terms_) {
      Expo e2(vars.size(), 0);
      for (size_t i = 0; i < e.size(); ++i) e2[pos[i]] = e[i];
      out.emplace(std::move(e2), c);
    }
    return out;
  }

  // Drop variables that appear in no term; keeps canonical form minimal.
  void strip_vars() {
    if (vars_.empty()) return;
    std::vector<bool> used(vars_.size(), false);
    for (const auto& [e, c] : terms_)
      for (size_t i = 0; i < e.size(); ++i)
        if (e[i]) used[i] = true;
    if (std::all_of(used.begin(), used.end(), [](bool b) { return b; })) return;
    std::vector<std::string> nv;
    std::vector<size_t> keep;
    for (size_t i = 0; i < vars_.size(); ++i)
      if (used[i]) nv.push_back(vars_[i]), keep.push_back(i);
    Terms nt;
    for (const auto& [e, c] : terms_) {
      Expo e2(keep.size());
      for (size_t i = 0; i < keep.size(); ++i) e2[i] = e[keep[i]];
      nt.emplace(std::move(e2), c);
    }
    vars_ = std::move(nv);
    terms_ = std::move(nt);
  }

  std::vector<std::string> vars_;  // sorted by name
  Terms terms_;
};

// ---------------------------------------------------------------------------
// Determinant of a polynomial matrix, fraction-free (Bareiss). Used for
// Sylvester resultants; divisions are exact by construction.
template <class K>
PolyT<K> poly_matrix_det(std::vector<std::vector<PolyT<K>>> m) {
  size_t n = m.size();
  if (n == 0) return PolyT<K>(K(1));
  PolyT<K> prev(K(1));
  int sign = 1;
  for (size_t k = 0; k + 1 < n; ++k) {
    if (m[k][k].is_zero()) {
      size_t swap_row = k + 1;
      while (swap_row < n && m[swap_row][k].is_zero()) ++swap_row;
      if (swap_row == n) return PolyT<K>();
      std::swap(m[k], m[swap_row]);
      sign = -sign;
    }
    for (size_t i = k + 1; i < n; ++i)
      for (size_t j = k + 1; j < n; ++j) {
        PolyT<K> num = m[i][j] * m[k][k] - m[i][k] * m[k][j];
        auto q = PolyT<K>::exact_divide(num, prev);
        if (!q) throw std::logic_error("Bareiss division failed");
        m[i][j] = *q;
      }
    prev = m[k][k];
  }
  PolyT<K> det = m[n - 1][n - 1];
  return sign < 0 ? -det : det;
}

template <class K>
PolyT<K> PolyT<K>::resultant(const PolyT& f, const PolyT& g, const std::string& var) {
  if (f.is_zero() || g.is_zero()) throw std::domain_error("resultant of zero polynomial");
  int df = f.degree_in(var), dg = g.degree_in(var);
  if (df == 0 && dg == 0) return PolyT(K(1));
  if (df == 0) return f.pow(uint32_t(dg));
  if (dg == 0) return g.pow(uint32_t(df));
  auto fc = f.as_univariate(var);
  auto gc = g.as_univariate(var);
  size_t n = size_t(df + dg);
  std::vector<std::vector<PolyT>> m(n, std::vector<PolyT>(n));
  for (int r = 0; r < dg; ++r)
    for (int i = 0; i <= df; ++i) m[r][r + df - i] = fc[i];
  for (int r = 0; r < df; ++r)
    for (int i = 0; i <= dg; ++i) m[dg + r][r + dg - i] = gc[i];
  return poly_matrix_det(std::move(m));
}

// ---------------------------------------------------------------------------
// Rendering: canonical graded-lex descending, explicit '*', '^', reduced
// fractions. parse(render(p)) == p.
template <class K>
std::string PolyT<K>::str() const {
  if (terms_.empty()) return "0";
  std::string out;
  bool first = true;
  for (const auto& [e, c] : terms_) {
    std::string cs = lcy::to_string(c);
    bool neg = !cs.empty() && cs[0] == '-';
    if (neg) cs = cs.substr(1);
    if (first) {
      if (neg) out += "-";
      first = false;
    } else {
      out += neg ? " - " : " + ";
    }
    std::string mono;
    for (size_t i = 0; i < vars_.size(); ++i) {
      if (e[i] == 0) continue;
      if (!mono.empty()) mono += "*";
      mono += vars_[i];
      if (e[i] > 1) mono += "^" + std::to_string(e[i]);
    }
    if (mono.empty())
      out += cs;
    else if (cs == "1")
      out += mono;
    else
      out += cs + "*" + mono;
  }
  return out;
}

using Poly = PolyT<Rat>;
using EPoly = PolyT<ExtElem>;

// Lift a rational polynomial into an extension coefficient ring.
inline EPoly lift_ext(const Poly& p) {
  EPoly out;
  for (const auto& [e, c] : p.terms()) out += EPoly::monomial(p.vars(), e, ExtElem(c));
  return out;
}

// Content of a rational polynomial: positive rational c with p/c integral
// primitive; the zero polynomial has content 1.
inline Rat rat_content(const Poly& p) {
  if (p.is_zero()) return Rat(1);
  Int num_gcd = 0, den_lcm = 1;
  for (const auto& [e, c] : p.terms()) {
    mpz_gcd(num_gcd.get_mpz_t(), num_gcd.get_mpz_t(), c.get_num().get_mpz_t());
    mpz_lcm(den_lcm.get_mpz_t(), den_lcm.get_mpz_t(), c.get_den().get_mpz_t());
  }
  Rat content(num_gcd, den_lcm);
  content.canonicalize();
  return content;
}

}  // namespace lcy

#endif
