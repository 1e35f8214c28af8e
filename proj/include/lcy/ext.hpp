#ifndef LCY_EXT_HPP
#define LCY_EXT_HPP

#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

#include "lcy/rat.hpp"

namespace lcy {

// Simple algebraic extension Q(alpha), alpha a root of a monic irreducible
// minimal polynomial of degree <= 4. Irreducibility is asserted by the
// caller; we only enforce monic and the degree cap.
struct ExtContext {
  std::string generator;            // display name, e.g. "w" or "lambda"
  std::vector<Rat> minpoly;         // monic: x^n + c[n-1] x^{n-1} + ... + c[0]
                                    // stored as c[0..n-1], degree n = size()
  static std::shared_ptr<const ExtContext> make(std::string gen, std::vector<Rat> coeffs) {
    if (coeffs.empty() || coeffs.size() > 4)
      throw std::invalid_argument("extension degree must be between 1 and 4");
    auto ctx = std::make_shared<ExtContext>();
    ctx->generator = std::move(gen);
    ctx->minpoly = std::move(coeffs);
    return ctx;
  }
  size_t degree() const { return minpoly.size(); }
};

// Element of Q(alpha): representative of degree < deg(minpoly). A null
// context means the element is a plain rational; contexts unify on use.
class ExtElem {
 public:
  ExtElem() : c_(1, Rat(0)) {}
  ExtElem(const Rat& r) : c_(1, r) {}
  ExtElem(long n) : c_(1, Rat(n)) {}
  ExtElem(std::shared_ptr<const ExtContext> ctx, std::vector<Rat> coeffs)
      : ctx_(std::move(ctx)), c_(std::move(coeffs)) {
    reduce();
  }

  static ExtElem generator(std::shared_ptr<const ExtContext> ctx) {
    std::vector<Rat> c(2, Rat(0));
    c[1] = 1;
    return ExtElem(std::move(ctx), std::move(c));
  }

  const std::shared_ptr<const ExtContext>& context() const { return ctx_; }
  const std::vector<Rat>& coeffs() const { return c_; }

  bool is_zero() const {
    for (const auto& x : c_)
      if (!lcy::is_zero(x)) return false;
    return true;
  }
  bool is_rational() const { return c_.size() <= 1; }
  Rat rational_part() const { return c_.empty() ? Rat(0) : c_[0]; }

  friend ExtElem operator+(const ExtElem& a, const ExtElem& b) {
    auto ctx = unify(a, b);
    std::vector<Rat> c(std::max(a.c_.size(), b.c_.size()), Rat(0));
    for (size_t i = 0; i < a.c_.size(); ++i) c[i] += a.c_[i];
    for (size_t i = 0; i < b.c_.size(); ++i) c[i] += b.c_[i];
    return ExtElem(ctx, std::move(c));
  }
  friend ExtElem operator-(const ExtElem& a, const ExtElem& b) {
    auto ctx = unify(a, b);
    std::vector<Rat> c(std::max(a.c_.size(), b.c_.size()), Rat(0));
    for (size_t i = 0; i < a.c_.size(); ++i) c[i] += a.c_[i];
    for (size_t i = 0; i < b.c_.size(); ++i) c[i] -= b.c_[i];
    return ExtElem(ctx, std::move(c));
  }
  ExtElem operator-() const {
    std::vector<Rat> c = c_;
    for (auto& x : c) x = -x;
    return ExtElem(ctx_, std::move(c));
  }
  friend ExtElem operator*(const ExtElem& a, const ExtElem& b) {
    auto ctx = unify(a, b);
    std::vector<Rat> c(a.c_.size() + b.c_.size() - 1, Rat(0));
    for (size_t i = 0; i < a.c_.size(); ++i)
      for (size_t j = 0; j < b.c_.size(); ++j) c[i + j] += a.c_[i] * b.c_[j];
    return ExtElem(ctx, std::move(c));
  }
  friend ExtElem operator/(const ExtElem& a, const ExtElem& b) { return a * b.inverse(); }

  ExtElem& operator+=(const ExtElem& b) { return *this = *this + b; }
  ExtElem& operator-=(const ExtElem& b) { return *this = *this - b; }
  ExtElem& operator*=(const ExtElem& b) { return *this = *this * b; }
  ExtElem& operator/=(const ExtElem& b) { return *this = *this / b; }

  // Inverse via the extended Euclidean algorithm on representative / minpoly.
  ExtElem inverse() const {
    if (is_zero()) throw std::domain_error("division by zero extension element");
    if (is_rational()) return ExtElem(Rat(1) / c_[0]);
    std::vector<Rat> m = ctx_->minpoly;
    m.push_back(Rat(1));  // monic top coefficient
    // r0 = minpoly, r1 = this; track s with r = s * this mod minpoly.
    std::vector<Rat> r0 = m, r1 = c_, s0 = {Rat(0)}, s1 = {Rat(1)};
    auto deg = [](const std::vector<Rat>& p) {
      int d = -1;
      for (size_t i = 0; i < p.size(); ++i)
        if (!lcy::is_zero(p[i])) d = int(i);
      return d;
    };
    while (true) {
      int d1 = deg(r1);
      if (d1 < 0) throw std::domain_error("non-invertible element (minimal polynomial not irreducible?)");
      if (d1 == 0) break;
      // r0 = q*r1 + r, replace (r0,r1) <- (r1,r)
      std::vector<Rat> r = r0, q(std::max<int>(deg(r0) - d1 + 1, 1), Rat(0));
      int dr = deg(r);
      while (dr >= d1) {
        Rat f = r[dr] / r1[d1];
        q[dr - d1] = f;
        for (int i = 0; i <= d1; ++i) r[dr - d1 + i] -= f * r1[i];
        dr = deg(r);
      }
      std::vector<Rat> s(std::max(s0.size(), q.size() + s1.size()), Rat(0));
      for (size_t i = 0; i < s0.size(); ++i) s[i] += s0[i];
      for (size_t i = 0; i < q.size(); ++i)
        for (size_t j = 0; j < s1.size(); ++j) s[i + j] -= q[i] * s1[j];
      r0 = std::move(r1); r1 = std::move(r);
      s0 = std::move(s1); s1 = std::move(s);
    }
    Rat lead = r1[0];
    std::vector<Rat> inv = s1;
    for (auto& x : inv) x /= lead;
    return ExtElem(ctx_, std::move(inv));
  }

  friend bool operator==(const ExtElem& a, const ExtElem& b) { return (a - b).is_zero(); }
  friend bool operator!=(const ExtElem& a, const ExtElem& b) { return !(a == b); }

  // Total order for canonical term maps: compare coefficient vectors.
  friend bool operator<(const ExtElem& a, const ExtElem& b) {
    size_t n = std::max(a.c_.size(), b.c_.size());
    for (size_t i = n; i-- > 0;) {
      Rat x = i < a.c_.size() ? a.c_[i] : Rat(0);
      Rat y = i < b.c_.size() ? b.c_[i] : Rat(0);
      if (x != y) return x < y;
    }
    return false;
  }

  std::string str() const {
    if (is_rational()) return lcy::to_string(rational_part());
    std::string g = ctx_->generator;
    std::string out;
    for (size_t i = c_.size(); i-- > 0;) {
      if (lcy::is_zero(c_[i])) continue;
      if (!out.empty()) out += " + ";
      out += lcy::to_string(c_[i]);
      if (i >= 1) out += "*" + g;
      if (i >= 2) out += "^" + std::to_string(i);
    }
    return out.empty() ? "0" : out;
  }

 private:
  static std::shared_ptr<const ExtContext> unify(const ExtElem& a, const ExtElem& b) {
    if (a.ctx_ && b.ctx_ && a.ctx_ != b.ctx_ && a.ctx_->minpoly != b.ctx_->minpoly)
      throw std::invalid_argument("mixing incompatible extension fields");
    return a.ctx_ ? a.ctx_ : b.ctx_;
  }
  void reduce() {
    if (ctx_) {
      size_t n = ctx_->degree();
      // rewrite alpha^k for k >= n via alpha^n = -(c[n-1] alpha^{n-1} + ... + c[0])
      while (c_.size() > n) {
        Rat top = c_.back();
        c_.pop_back();
        if (!lcy::is_zero(top)) {
          size_t k = c_.size() - n;  // alpha^{n+k-?}: top multiplies alpha^{n + k}
          for (size_t i = 0; i < n; ++i) c_[k + i] -= top * ctx_->minpoly[i];
        }
      }
    }
    while (c_.size() > 1 && lcy::is_zero(c_.back())) c_.pop_back();
    if (c_.empty()) c_.assign(1, Rat(0));
    if (is_rational()) ctx_ = nullptr;
  }

  std::shared_ptr<const ExtContext> ctx_;
  std::vector<Rat> c_;  // c_[i] * alpha^i
};

inline bool is_zero(const ExtElem& e) { return e.is_zero(); }
inline std::string to_string(const ExtElem& e) { return e.str(); }

}  // namespace lcy

#endif
