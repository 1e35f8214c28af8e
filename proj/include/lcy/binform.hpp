#ifndef LCY_BINFORM_HPP
#define LCY_BINFORM_HPP

#include <optional>
#include <vector>

#include "lcy/poly.hpp"

namespace lcy {

// Dense univariate polynomial over Q, coefficient of x^i at index i.
using UPoly = std::vector<Rat>;

inline int udeg(const UPoly& p) {
  for (size_t i = p.size(); i-- > 0;)
    if (!is_zero(p[i])) return int(i);
  return -1;
}

inline UPoly utrim(UPoly p) {
  while (!p.empty() && is_zero(p.back())) p.pop_back();
  return p;
}

inline UPoly umul(const UPoly& a, const UPoly& b) {
  if (udeg(a) < 0 || udeg(b) < 0) return {};
  UPoly c(a.size() + b.size() - 1, Rat(0));
  for (size_t i = 0; i < a.size(); ++i)
    for (size_t j = 0; j < b.size(); ++j) c[i + j] += a[i] * b[j];
  return utrim(c);
}

inline UPoly uderiv(const UPoly& p) {
  UPoly d;
  for (size_t i = 1; i < p.size(); ++i) d.push_back(p[i] * Rat(long(i)));
  return utrim(d);
}

inline UPoly urem(UPoly a, const UPoly& b) {
  int db = udeg(b);
  if (db < 0) throw std::domain_error("remainder by zero");
  int da = udeg(a);
  while (da >= db) {
    Rat f = a[da] / b[db];
    for (int i = 0; i <= db; ++i) a[da - db + i] -= f * b[i];
    da = udeg(utrim(a));
    a = utrim(a);
  }
  return a;
}

inline UPoly umonic(UPoly p) {
  int d = udeg(p);
  if (d < 0) return p;
  Rat lead = p[d];
  for (auto& c : p) c /= lead;
  return utrim(p);
}

inline UPoly ugcd(UPoly a, UPoly b) {
  a = utrim(a);
  b = utrim(b);
  while (udeg(b) >= 0) {
    UPoly r = urem(a, b);
    a = std::move(b);
    b = utrim(r);
  }
  return umonic(a);
}

inline Rat ueval(const UPoly& p, const Rat& x) {
  Rat acc(0);
  for (size_t i = p.size(); i-- > 0;) acc = acc * x + p[i];
  return acc;
}

// Multiplicity of root x in p.
inline int uroot_multiplicity(UPoly p, const Rat& x) {
  int m = 0;
  while (udeg(p) >= 0 && is_zero(ueval(p, x))) {
    // synthetic division by (X - x)
    UPoly q(std::max<int>(udeg(p), 1), Rat(0));
    Rat carry(0);
    for (int i = udeg(p); i >= 1; --i) {
      carry = p[i] + carry * x;  // iterating Horner
      q[i - 1] = carry;
    }
    p = utrim(q);
    ++m;
  }
  return m;
}

// Divisors of |n| up to a search cap; empty result means the cap was hit
// and the caller should treat root search as inconclusive.
inline std::optional<std::vector<Int>> int_divisors(const Int& n, long cap = 400000) {
  Int a = abs(n);
  if (a == 0) return std::vector<Int>{};
  std::vector<Int> divs;
  Int i = 1;
  long steps = 0;
  for (; i * i <= a; ++i) {
    if (++steps > cap) return std::nullopt;
    if (a % i == 0) {
      divs.push_back(i);
      divs.push_back(a / i);
    }
  }
  return divs;
}

// All rational roots of p (exact, via the rational root theorem after
// clearing denominators). nullopt when the coefficient factorizations
// exceed the search cap.
inline std::optional<std::vector<Rat>> rational_roots(const UPoly& p) {
  int d = udeg(p);
  if (d <= 0) return std::vector<Rat>{};
  // clear denominators -> integer polynomial
  Int den_lcm = 1;
  for (const auto& c : p)
    mpz_lcm(den_lcm.get_mpz_t(), den_lcm.get_mpz_t(), c.get_den().get_mpz_t());
  std::vector<Int> z(d + 1);
  for (int i = 0; i <= d; ++i) {
    Rat c = p[i] * Rat(den_lcm);
    z[i] = c.get_num();
  }
  // strip trailing zeros (root 0)
  std::vector<Rat> roots;
  int low = 0;
  while (low <= d && z[low] == 0) ++low;
  if (low > 0) roots.push_back(Rat(0));
  if (low > d) return roots;
  auto pdivs = int_divisors(z[low]);
  auto qdivs = int_divisors(z[d]);
  if (!pdivs || !qdivs) return std::nullopt;
  for (const auto& pn : *pdivs)
    for (const auto& qd : *qdivs) {
      for (int s = -1; s <= 1; s += 2) {
        Rat cand(s * pn, qd);
        cand.canonicalize();
        if (is_zero(ueval(p, cand))) {
          if (std::find(roots.begin(), roots.end(), cand) == roots.end()) roots.push_back(cand);
        }
      }
    }
  std::sort(roots.begin(), roots.end());
  return roots;
}

// ---------------------------------------------------------------------------
// Binary forms f(s, t) homogeneous in two variables, stored densely by the
// s-exponent: coeff[i] * s^i t^{d-i}.
struct BinForm {
  std::vector<Rat> c;  // size d+1
  int degree() const { return int(c.size()) - 1; }
  bool is_zero() const {
    for (const auto& x : c)
      if (!lcy::is_zero(x)) return false;
    return true;
  }
  // multiplicity of the root at infinity (s:t) = (1:0)
  int inf_multiplicity() const {
    int m = 0;
    for (size_t i = c.size(); i-- > 0;) {
      if (!lcy::is_zero(c[i])) break;
      ++m;
    }
    return m;
  }
  UPoly dehomogenized() const {  // f(s, 1)
    return utrim(c);
  }
};

// Extract a binary form in (a, b) from a polynomial supported on exactly
// those two variables.
inline BinForm binform_of(const Poly& p, const std::string& a, const std::string& b, int degree) {
  BinForm f;
  f.c.assign(degree + 1, Rat(0));
  for (const auto& [e, coef] : p.terms()) {
    uint32_t ea = 0, eb = 0;
    for (size_t i = 0; i < p.vars().size(); ++i) {
      if (p.vars()[i] == a) ea = e[i];
      else if (p.vars()[i] == b) eb = e[i];
      else if (e[i] != 0) throw std::invalid_argument("binform_of: extra variable " + p.vars()[i]);
    }
    if (int(ea + eb) != degree) throw std::invalid_argument("binform_of: not homogeneous of expected degree");
    f.c[ea] += coef;
  }
  return f;
}

// Squarefree over C: gcd(f, f') trivial, counting the root at infinity.
inline bool binform_squarefree(const BinForm& f) {
  if (f.is_zero()) return false;
  if (f.inf_multiplicity() >= 2) return false;
  UPoly u = f.dehomogenized();
  if (udeg(u) <= 0) return true;
  return udeg(ugcd(u, uderiv(u))) <= 0;
}

struct BinRoot {
  Rat value;     // root s/t = value (finite)
  bool at_infinity = false;
  int multiplicity = 1;
};

// Rational roots with multiplicities, plus the root at infinity. The bool
// is false when rational root extraction was inconclusive (huge coefficients)
// or when non-rational roots remain undetected by design.
struct BinRootReport {
  std::vector<BinRoot> roots;       // rational (and infinite) roots found
  bool complete_over_Q = true;      // all rational roots found
  int residual_degree = 0;          // degree left after removing found roots
  bool squarefree = false;
  bool has_multiple_root_somewhere = false;  // over C, via gcd
};

inline BinRootReport binform_roots(const BinForm& f) {
  BinRootReport rep;
  if (f.is_zero()) {
    rep.complete_over_Q = false;
    return rep;
  }
  rep.squarefree = binform_squarefree(f);
  UPoly u = f.dehomogenized();
  rep.has_multiple_root_somewhere = !rep.squarefree;
  int residual = f.degree();
  int infm = f.inf_multiplicity();
  if (infm > 0) {
    rep.roots.push_back({Rat(0), true, infm});
    residual -= infm;
  }
  if (udeg(u) >= 1) {
    auto roots = rational_roots(u);
    if (!roots) {
      rep.complete_over_Q = false;
    } else {
      for (const auto& r : *roots) {
        int m = uroot_multiplicity(u, r);
        rep.roots.push_back({r, false, m});
        residual -= m;
      }
    }
  }
  rep.residual_degree = residual;
  return rep;
}

}  // namespace lcy

#endif
