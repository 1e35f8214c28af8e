#ifndef LCY_VOLUME_HPP
#define LCY_VOLUME_HPP

#include <random>
#include <string>
#include <vector>

#include "lcy/geom.hpp"

namespace lcy {

// The log volume form on a chart: wedge of the affine coordinate
// differentials over the dehomogenized boundary.
template <class K>
struct LogVolumeFormT {
  Chart chart;
  PolyT<K> denominator;
};

template <class K>
LogVolumeFormT<K> log_form(const LogPairT<K>& pair, const Chart& chart) {
  PolyT<K> den(K(1));
  for (const auto& f : pair.boundary) den *= chart.dehomogenize(f);
  if (den.is_zero()) throw std::invalid_argument("boundary contains chart hyperplane entirely");
  return {chart, std::move(den)};
}

enum class VPStatus { VolumePreserving, NotProportional, Indeterminate };

template <class K>
struct VPVerdictT {
  VPStatus status = VPStatus::Indeterminate;
  K scalar = K(0);                         // nonzero when VolumePreserving
  std::string reason;                      // for Indeterminate
  std::map<std::string, Rat> witness;      // for NotProportional
  K witness_lhs = K(0), witness_rhs = K(0);  // cross-multiplied side values

  bool ok() const { return status == VPStatus::VolumePreserving; }
  std::string str() const {
    switch (status) {
      case VPStatus::VolumePreserving: return "VolumePreserving(c=" + lcy::to_string(scalar) + ")";
      case VPStatus::NotProportional: return "NotProportional";
      default: return "Indeterminate(" + reason + ")";
    }
  }
};

using VPVerdict = VPVerdictT<Rat>;

// Exact verification that m pulls the target log volume form back to a
// scalar multiple of the source one, in the given charts. The identity
//   J / (den_target . m) == c / den_source
// is checked by cross multiplication in the polynomial ring; parameters
// ride along as extra variables.
template <class K>
VPVerdictT<K> pullback_compare(const RatMapT<K>& m, const LogPairT<K>& source, const LogPairT<K>& target,
                               const Chart& src_chart, const Chart& dst_chart) {
  VPVerdictT<K> verdict;
  std::vector<RatFnT<K>> rc;
  try {
    rc = restrict_to_chart(m, src_chart, dst_chart);
  } catch (const std::exception& e) {
    verdict.reason = std::string("chart miss: ") + e.what();
    return verdict;
  }
  auto src_affine = src_chart.affine_vars();
  RatFnT<K> J = jacobian_det(rc, src_affine);
  if (J.is_zero()) {
    verdict.reason = "non-dominant in chart";
    return verdict;
  }
  PolyT<K> den_src = log_form(source, src_chart).denominator;
  PolyT<K> den_tgt = log_form(target, dst_chart).denominator;
  auto dst_affine = dst_chart.affine_vars();
  std::map<std::string, RatFnT<K>> assign;
  for (size_t i = 0; i < dst_affine.size(); ++i) assign[dst_affine[i]] = rc[i];
  for (const auto& v : den_tgt.vars())
    if (!assign.count(v)) assign[v] = RatFnT<K>(PolyT<K>::variable(v));
  RatFnT<K> B = RatFnT<K>::compose(den_tgt, assign);
  if (B.is_zero()) {
    verdict.reason = "target boundary pulls back to zero";
    return verdict;
  }
  PolyT<K> lhs = J.num() * B.den() * den_src;
  PolyT<K> rhs = B.num() * J.den();
  // solve c from the leading coefficients, then assert the full identity
  if (lhs.is_zero()) {
    verdict.reason = "degenerate pullback";
    return verdict;
  }
  K c = K(0);
  bool proportional = false;
  if (lhs.vars() == rhs.vars() && lhs.leading_expo() == rhs.leading_expo()) {
    c = lhs.leading_coeff() / rhs.leading_coeff();
    proportional = (lhs - c * rhs).is_zero();
  }
  if (proportional) {
    verdict.status = VPStatus::VolumePreserving;
    verdict.scalar = c;
    return verdict;
  }
  // find a rational witness point where the scaled sides differ
  verdict.status = VPStatus::NotProportional;
  if (lcy::is_zero(c) && !rhs.is_zero()) c = K(1);
  std::vector<std::string> vars;
  std::set_union(lhs.vars().begin(), lhs.vars().end(), rhs.vars().begin(), rhs.vars().end(),
                 std::back_inserter(vars));
  std::mt19937_64 rng(0x5eedbeef);
  for (int attempt = 0; attempt < 1000; ++attempt) {
    std::map<std::string, Rat> pt;
    std::map<std::string, K> ptk;
    for (const auto& v : vars) {
      Rat r = random_rat(rng, 9, 4);
      pt[v] = r;
      ptk[v] = K(r);
    }
    K lv = lhs.template evaluate<K>(ptk);
    K rv = rhs.template evaluate<K>(ptk);
    if (lv != c * rv) {
      verdict.witness = pt;
      verdict.witness_lhs = lv;
      verdict.witness_rhs = c * rv;
      return verdict;
    }
  }
  verdict.status = VPStatus::Indeterminate;
  verdict.reason = "sides differ but no witness found";
  return verdict;
}

// Chart selection: per block, prefer the weight-1 variable dividing the
// fewest boundary factors (smaller dehomogenized expressions).
template <class K>
Chart preferred_chart(const LogPairT<K>& pair) {
  std::vector<std::string> choice;
  for (size_t b = 0; b < pair.space.blocks.size(); ++b) {
    const auto& blk = pair.space.blocks[b];
    std::string best;
    int best_count = -1;
    for (size_t i = 0; i < blk.vars.size(); ++i) {
      if (blk.weights[i] != 1) continue;
      int count = 0;
      for (const auto& f : pair.boundary) {
        if (PolyT<K>::exact_divide(f, PolyT<K>::variable(blk.vars[i]))) ++count;
      }
      if (best_count < 0 || count < best_count) {
        best = blk.vars[i];
        best_count = count;
      }
    }
    if (best.empty()) throw std::invalid_argument("block has no weight-1 variable");
    choice.push_back(best);
  }
  return Chart::at(pair.space, choice);
}

// Try chart pairs until one is admissible (source chart choices x target
// chart preference), so callers need not pick charts by hand.
template <class K>
VPVerdictT<K> pullback_compare_auto(const RatMapT<K>& m, const LogPairT<K>& source, const LogPairT<K>& target) {
  Chart dst = preferred_chart(target);
  VPVerdictT<K> last;
  // enumerate source charts in preference order
  std::vector<Chart> srcs;
  srcs.push_back(preferred_chart(source));
  // all other weight-1 combinations as fallbacks (single block spaces: each var)
  if (source.space.blocks.size() == 1) {
    const auto& blk = source.space.blocks[0];
    for (size_t i = 0; i < blk.vars.size(); ++i)
      if (blk.weights[i] == 1) srcs.push_back(Chart::at(source.space, blk.vars[i]));
  }
  std::vector<Chart> dsts;
  dsts.push_back(dst);
  if (target.space.blocks.size() == 1) {
    const auto& blk = target.space.blocks[0];
    for (size_t i = 0; i < blk.vars.size(); ++i)
      if (blk.weights[i] == 1) dsts.push_back(Chart::at(target.space, blk.vars[i]));
  }
  for (const auto& dc : dsts)
    for (const auto& sc : srcs) {
      last = pullback_compare(m, source, target, sc, dc);
      if (last.status != VPStatus::Indeterminate) return last;
    }
  return last;
}

// A certified reduction-chain step for certify_chain.
template <class K>
struct ChainStepT {
  RatMapT<K> map;
  LogPairT<K> source, target;
};

template <class K>
bool pairs_equal(const LogPairT<K>& a, const LogPairT<K>& b) {
  if (a.space != b.space || a.boundary.size() != b.boundary.size()) return false;
  auto canon = [](const LogPairT<K>& p) {
    std::vector<PolyT<K>> fs;
    for (const auto& f : p.boundary) fs.push_back(f.monic());
    std::sort(fs.begin(), fs.end());
    return fs;
  };
  return canon(a) == canon(b);
}

template <class K>
struct ChainVerdictT {
  std::vector<VPVerdictT<K>> steps;
  VPVerdictT<K> overall;
  int failing_index = -1;
};

template <class K>
ChainVerdictT<K> certify_chain(const std::vector<ChainStepT<K>>& steps) {
  ChainVerdictT<K> out;
  for (size_t k = 0; k + 1 < steps.size(); ++k)
    if (!pairs_equal(steps[k].target, steps[k + 1].source))
      throw std::invalid_argument("chain junction mismatch at step " + std::to_string(k));
  K scalar(1);
  out.overall.status = VPStatus::VolumePreserving;
  for (size_t k = 0; k < steps.size(); ++k) {
    auto v = pullback_compare_auto(steps[k].map, steps[k].source, steps[k].target);
    out.steps.push_back(v);
    if (v.status == VPStatus::VolumePreserving) {
      scalar *= v.scalar;
    } else if (out.overall.status == VPStatus::VolumePreserving) {
      out.overall = v;
      out.failing_index = int(k);
    }
  }
  if (out.overall.status == VPStatus::VolumePreserving) out.overall.scalar = scalar;
  return out;
}

// Homogeneous Jacobian determinant of a self-map's components.
template <class K>
PolyT<K> homogeneous_jacobian(const RatMapT<K>& m) {
  auto vars = m.source.all_vars();
  std::vector<std::vector<PolyT<K>>> mat;
  for (const auto& c : m.components) {
    std::vector<PolyT<K>> row;
    for (const auto& v : vars) row.push_back(c.derivative(v));
    mat.push_back(std::move(row));
  }
  return poly_matrix_det(std::move(mat));
}

// Solve for the target boundary of a birational self-map of an unweighted
// projective space from the volume-form transformation law
//   F_target . m == c * F_source * Jac(m).
// Returns the target boundary (content-normalized) when the solution space
// is one-dimensional with a nonzero scalar.
template <class K>
std::optional<PolyT<K>> solve_target_boundary(const RatMapT<K>& m, const PolyT<K>& f_src) {
  const Space& sp = m.target;
  if (sp.blocks.size() != 1 || m.source.blocks.size() != 1) return std::nullopt;
  for (long w : sp.blocks[0].weights)
    if (w != 1) return std::nullopt;
  long deg = sp.anticanonical_degree()[0];
  auto tvars = sp.all_vars();
  PolyT<K> rhs_poly = f_src * homogeneous_jacobian(m);
  if (rhs_poly.is_zero()) return std::nullopt;
  // unknowns: coefficients of F_target on degree-d monomials, plus c
  std::vector<Expo> mons;
  for (auto& e : monomials_up_to(tvars.size(), int(deg)))
    if (long(expo_total(e)) == deg) mons.push_back(e);
  auto assign = component_assignment(m);
  // rows indexed by source monomials of F_target . m  and of rhs
  std::map<Expo, size_t, GrlexDesc> rows;
  std::vector<std::vector<std::pair<size_t, K>>> cols(mons.size() + 1);
  auto row_of = [&](const Expo& e) {
    auto it = rows.find(e);
    if (it != rows.end()) return it->second;
    size_t id = rows.size();
    rows.emplace(e, id);
    return id;
  };
  std::vector<std::string> svars = m.source.all_vars();
  auto embed = [&](const PolyT<K>& p, size_t col, bool negate) {
    std::vector<size_t> pos(p.vars().size());
    for (size_t i = 0; i < p.vars().size(); ++i) {
      size_t j = 0;
      while (j < svars.size() && svars[j] != p.vars()[i]) ++j;
      if (j == svars.size()) throw std::logic_error("component has a variable outside the source space");
      pos[i] = j;
    }
    for (const auto& [e, c] : p.terms()) {
      Expo full(svars.size(), 0);
      for (size_t i = 0; i < e.size(); ++i) full[pos[i]] = e[i];
      cols[col].push_back({row_of(full), negate ? K(-c) : c});
    }
  };
  for (size_t mi = 0; mi < mons.size(); ++mi) {
    PolyT<K> mono = PolyT<K>::constant(K(1));
    for (size_t i = 0; i < tvars.size(); ++i)
      if (mons[mi][i]) mono *= assign.at(tvars[i]).pow(mons[mi][i]);
    embed(mono, mi, false);
  }
  embed(rhs_poly, mons.size(), true);
  MatT<K> mat(rows.size(), std::vector<K>(mons.size() + 1, K(0)));
  for (size_t c = 0; c < cols.size(); ++c)
    for (auto& [r, v] : cols[c]) mat[r][c] += v;
  auto basis = nullspace(std::move(mat));
  if (basis.size() != 1) return std::nullopt;
  const auto& sol = basis.front();
  if (lcy::is_zero(sol[mons.size()])) return std::nullopt;
  PolyT<K> f_tgt;
  // sort the target variable list for monomial construction
  for (size_t mi = 0; mi < mons.size(); ++mi) {
    if (lcy::is_zero(sol[mi])) continue;
    PolyT<K> mono = PolyT<K>::constant(sol[mi]);
    for (size_t i = 0; i < tvars.size(); ++i)
      if (mons[mi][i]) mono *= PolyT<K>::variable(tvars[i]).pow(mons[mi][i]);
    f_tgt += mono;
  }
  if (f_tgt.is_zero()) return std::nullopt;
  if constexpr (std::is_same_v<K, Rat>) {
    f_tgt = f_tgt / rat_content(f_tgt);
    if (f_tgt.leading_coeff() < 0) f_tgt = -f_tgt;
  } else {
    f_tgt = f_tgt.monic();
  }
  return f_tgt;
}

}  // namespace lcy

#endif
