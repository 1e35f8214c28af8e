#ifndef LCY_GEOM_HPP
#define LCY_GEOM_HPP

#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "lcy/ratfn.hpp"

namespace lcy {

// A weighted projective space, or a product of such (one grading block per
// factor). All weights are >= 1; product boundaries are bihomogeneous.
struct Space {
  struct Block {
    std::vector<std::string> vars;
    std::vector<long> weights;
  };
  std::string name;
  std::vector<Block> blocks;

  static Space weighted(std::string name, std::vector<std::string> vars, std::vector<long> weights) {
    for (long w : weights)
      if (w < 1) throw std::invalid_argument("space weights must be >= 1");
    Space s;
    s.name = std::move(name);
    s.blocks.push_back({std::move(vars), std::move(weights)});
    return s;
  }
  static Space P3() { return weighted("P3", {"t", "x", "y", "z"}, {1, 1, 1, 1}); }
  static Space P2(std::vector<std::string> vars = {"x", "y", "z"}) {
    return weighted("P2", std::move(vars), {1, 1, 1});
  }
  static Space product(std::string name, Space a, Space b) {
    Space s;
    s.name = std::move(name);
    for (auto& blk : a.blocks) s.blocks.push_back(blk);
    for (auto& blk : b.blocks) s.blocks.push_back(blk);
    return s;
  }
  static Space P1xP2() {
    return product("P1xP2", weighted("P1", {"s0", "s1"}, {1, 1}), P2());
  }

  std::vector<std::string> all_vars() const {
    std::vector<std::string> v;
    for (const auto& b : blocks) v.insert(v.end(), b.vars.begin(), b.vars.end());
    return v;
  }
  size_t var_count() const {
    size_t n = 0;
    for (const auto& b : blocks) n += b.vars.size();
    return n;
  }
  int block_of(const std::string& var) const {
    for (size_t i = 0; i < blocks.size(); ++i)
      for (const auto& v : blocks[i].vars)
        if (v == var) return int(i);
    return -1;
  }
  long weight_of(const std::string& var) const {
    for (const auto& b : blocks)
      for (size_t i = 0; i < b.vars.size(); ++i)
        if (b.vars[i] == var) return b.weights[i];
    throw std::invalid_argument("unknown variable " + var);
  }
  std::map<std::string, long> block_weight_map(size_t block) const {
    std::map<std::string, long> m;
    for (size_t i = 0; i < blocks[block].vars.size(); ++i) m[blocks[block].vars[i]] = blocks[block].weights[i];
    return m;
  }
  // anticanonical degree of each block: the sum of its weights
  std::vector<long> anticanonical_degree() const {
    std::vector<long> d;
    for (const auto& b : blocks) {
      long s = 0;
      for (long w : b.weights) s += w;
      d.push_back(s);
    }
    return d;
  }
  // dimension of the space
  size_t dim() const { return var_count() - blocks.size(); }

  friend bool operator==(const Space& a, const Space& b) {
    if (a.blocks.size() != b.blocks.size()) return false;
    for (size_t i = 0; i < a.blocks.size(); ++i)
      if (a.blocks[i].vars != b.blocks[i].vars || a.blocks[i].weights != b.blocks[i].weights) return false;
    return true;
  }
  friend bool operator!=(const Space& a, const Space& b) { return !(a == b); }
};

// multidegree of a polynomial, one entry per block; nullopt when not
// homogeneous for the block gradings
template <class K>
std::optional<std::vector<long>> multidegree(const Space& sp, const PolyT<K>& f) {
  if (f.is_zero()) return std::nullopt;
  std::vector<long> d;
  for (size_t b = 0; b < sp.blocks.size(); ++b) {
    auto wm = sp.block_weight_map(b);
    if (!f.is_weighted_homogeneous(wm)) return std::nullopt;
    d.push_back(f.weighted_order(wm));
  }
  return d;
}

// An affine chart: one weight-1 variable per block set to 1.
struct Chart {
  Space space;
  std::vector<std::string> chart_vars;  // one per block

  static Chart at(const Space& sp, std::vector<std::string> vars) {
    if (vars.size() != sp.blocks.size()) throw std::invalid_argument("chart needs one variable per block");
    for (size_t b = 0; b < sp.blocks.size(); ++b) {
      bool found = false;
      for (size_t i = 0; i < sp.blocks[b].vars.size(); ++i)
        if (sp.blocks[b].vars[i] == vars[b]) {
          if (sp.blocks[b].weights[i] != 1) throw std::invalid_argument("chart variable must have weight 1");
          found = true;
        }
      if (!found) throw std::invalid_argument("chart variable not in block");
    }
    Chart c;
    c.space = sp;
    c.chart_vars = std::move(vars);
    return c;
  }
  static Chart at(const Space& sp, const std::string& var) { return at(sp, std::vector<std::string>{var}); }

  bool is_chart_var(const std::string& v) const {
    return std::find(chart_vars.begin(), chart_vars.end(), v) != chart_vars.end();
  }
  // affine coordinates: non-chart variables in space order
  std::vector<std::string> affine_vars() const {
    std::vector<std::string> out;
    for (const auto& v : space.all_vars())
      if (!is_chart_var(v)) out.push_back(v);
    return out;
  }
  template <class K>
  PolyT<K> dehomogenize(const PolyT<K>& f) const {
    PolyT<K> g = f;
    for (const auto& v : chart_vars) g = g.set_var(v, K(1));
    return g;
  }
};

// Log Calabi-Yau pair: a space together with a reduced anticanonical
// boundary given as a list of (as-supplied irreducible) factors.
template <class K>
struct LogPairT {
  Space space;
  std::vector<PolyT<K>> boundary;

  PolyT<K> boundary_product() const {
    PolyT<K> p(K(1));
    for (const auto& f : boundary) p *= f;
    return p;
  }
  std::string str() const {
    std::string s = space.name + ", V(";
    for (size_t i = 0; i < boundary.size(); ++i) {
      if (i) s += ") * V(";
      s += boundary[i].str();
    }
    return s + ")";
  }
};

// Validates homogeneity, the anticanonical degree condition and reducedness.
template <class K>
LogPairT<K> make_pair(const Space& sp, std::vector<PolyT<K>> factors) {
  if (factors.empty()) throw std::invalid_argument("boundary must have at least one factor");
  std::vector<long> total(sp.blocks.size(), 0);
  for (auto& f : factors) {
    auto d = multidegree(sp, f);
    if (!d) throw std::invalid_argument("boundary factor not homogeneous for the grading");
    for (size_t b = 0; b < total.size(); ++b) total[b] += (*d)[b];
  }
  if (total != sp.anticanonical_degree()) throw std::invalid_argument("not anticanonical");
  // reducedness: no factor may divide another (catches repeats and powers)
  for (size_t i = 0; i < factors.size(); ++i)
    for (size_t j = 0; j < factors.size(); ++j) {
      if (i == j) continue;
      if (factors[i].is_constant()) throw std::invalid_argument("constant boundary factor");
      if (PolyT<K>::exact_divide(factors[j], factors[i])) throw std::invalid_argument("boundary not reduced");
    }
  LogPairT<K> p;
  p.space = sp;
  p.boundary = std::move(factors);
  return p;
}

// Rational map between (weighted, possibly product) spaces. Component i is
// homogeneous of multidegree scale[block(i)] * weight(i).
template <class K>
struct RatMapT {
  Space source, target;
  std::vector<PolyT<K>> components;  // aligned with target.all_vars()

  std::string str() const {
    std::string s = "(";
    for (size_t i = 0; i < components.size(); ++i) {
      if (i) s += " : ";
      s += components[i].str();
    }
    return s + ")";
  }
};

template <class K>
RatMapT<K> make_map(const Space& src, const Space& tgt, std::vector<PolyT<K>> components) {
  if (components.size() != tgt.var_count()) throw std::invalid_argument("component count mismatch");
  auto tvars = tgt.all_vars();
  // per-target-block degree scale over source blocks
  size_t idx = 0;
  for (size_t b = 0; b < tgt.blocks.size(); ++b) {
    std::optional<std::vector<Rat>> scale;
    bool any_nonzero = false;
    for (size_t i = 0; i < tgt.blocks[b].vars.size(); ++i, ++idx) {
      const auto& comp = components[idx];
      if (comp.is_zero()) continue;
      any_nonzero = true;
      auto d = multidegree(src, comp);
      if (!d) throw std::invalid_argument("map component not homogeneous: " + comp.str());
      long w = tgt.blocks[b].weights[i];
      std::vector<Rat> s;
      for (long di : *d) s.push_back(rat_of(di, w));
      if (!scale)
        scale = s;
      else if (*scale != s)
        throw std::invalid_argument("map components not compatibly graded");
    }
    if (!any_nonzero) throw std::invalid_argument("all components of a block vanish");
    for (const auto& r : *scale)
      if (r.get_den() != 1) throw std::invalid_argument("map components not compatibly graded");
  }
  RatMapT<K> m;
  m.source = src;
  m.target = tgt;
  m.components = std::move(components);
  return m;
}

template <class K>
std::map<std::string, PolyT<K>> component_assignment(const RatMapT<K>& m) {
  std::map<std::string, PolyT<K>> a;
  auto tv = m.target.all_vars();
  for (size_t i = 0; i < tv.size(); ++i) a[tv[i]] = m.components[i];
  return a;
}

// gcd of two polynomials via complete fraction reduction
template <class K>
PolyT<K> poly_gcd(const PolyT<K>& a, const PolyT<K>& b) {
  if (a.is_zero()) return b;
  if (b.is_zero()) return a;
  RatFnT<K> r(a, b);
  auto g = PolyT<K>::exact_divide(a, r.num());
  if (!g) throw std::logic_error("poly_gcd: reduction produced a non-divisor");
  return *g;
}

// g . f with common factors of the composite removed
template <class K>
RatMapT<K> compose(const RatMapT<K>& g, const RatMapT<K>& f) {
  if (f.target != g.source) throw std::invalid_argument("compose: middle spaces differ");
  auto assign = component_assignment(f);
  std::vector<PolyT<K>> comps;
  for (const auto& c : g.components) comps.push_back(c.substitute_poly(assign));
  bool all_zero = true;
  for (const auto& c : comps) all_zero = all_zero && c.is_zero();
  if (all_zero) throw std::invalid_argument("undefined composite");
  // strip the common factor of all components
  PolyT<K> common;
  for (const auto& c : comps) common = poly_gcd(common, c);
  if (!common.is_constant())
    for (auto& c : comps) c = *PolyT<K>::exact_divide(c, common);
  return make_map(f.source, g.target, std::move(comps));
}

template <class K>
RatMapT<K> identity_map(const Space& sp) {
  std::vector<PolyT<K>> comps;
  for (const auto& v : sp.all_vars()) comps.push_back(PolyT<K>::variable(v));
  return make_map(sp, sp, std::move(comps));
}

// Affine coordinate functions of the map between two charts: for each
// non-chart target variable v, component_v / component_chart^{weight(v)},
// written in source chart coordinates.
template <class K>
std::vector<RatFnT<K>> restrict_to_chart(const RatMapT<K>& m, const Chart& src, const Chart& dst) {
  if (src.space != m.source || dst.space != m.target) throw std::invalid_argument("chart spaces do not match map");
  auto tvars = m.target.all_vars();
  // chart components per target block
  std::vector<PolyT<K>> chart_comp(m.target.blocks.size());
  for (size_t i = 0; i < tvars.size(); ++i) {
    for (size_t b = 0; b < dst.chart_vars.size(); ++b)
      if (tvars[i] == dst.chart_vars[b]) chart_comp[b] = m.components[i];
  }
  for (const auto& cc : chart_comp)
    if (cc.is_zero()) throw std::invalid_argument("map does not meet chart");
  std::vector<RatFnT<K>> out;
  for (size_t i = 0; i < tvars.size(); ++i) {
    if (dst.is_chart_var(tvars[i])) continue;
    int b = m.target.block_of(tvars[i]);
    long w = m.target.weight_of(tvars[i]);
    PolyT<K> num = src.dehomogenize(m.components[i]);
    PolyT<K> den = src.dehomogenize(chart_comp[b].pow(uint32_t(w)));
    if (den.is_zero()) throw std::invalid_argument("map does not meet chart");
    out.emplace_back(std::move(num), std::move(den));
  }
  return out;
}

using LogPair = LogPairT<Rat>;
using RatMap = RatMapT<Rat>;
using ELogPair = LogPairT<ExtElem>;
using ERatMap = RatMapT<ExtElem>;

inline LogPair make_pair(const Space& sp, std::vector<Poly> factors) {
  return make_pair<Rat>(sp, std::move(factors));
}
inline RatMap make_map(const Space& src, const Space& tgt, std::vector<Poly> components) {
  return make_map<Rat>(src, tgt, std::move(components));
}

}  // namespace lcy

#endif
