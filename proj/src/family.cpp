#include "lcy/family.hpp"

#include <sstream>

namespace lcy {

std::string to_string(FamilyTag t) {
  switch (t) {
    case FamilyTag::A1: return "A.1";
    case FamilyTag::A2: return "A.2";
    case FamilyTag::A3: return "A.3";
    case FamilyTag::A4: return "A.4";
    case FamilyTag::A2star: return "A.2*";
    case FamilyTag::A3star: return "A.3*";
    case FamilyTag::B1: return "B.1";
    case FamilyTag::B2: return "B.2";
    case FamilyTag::B3: return "B.3";
    case FamilyTag::B4: return "B.4";
    case FamilyTag::B1star: return "B.1*";
    case FamilyTag::C1: return "C.1";
    case FamilyTag::C2: return "C.2";
    case FamilyTag::C3: return "C.3";
    case FamilyTag::C4: return "C.4";
    case FamilyTag::D1: return "D.1";
    case FamilyTag::D2: return "D.2";
    case FamilyTag::Coreg2: return "Coreg2";
    default: return "Unresolved";
  }
}

std::optional<FamilyTag> family_tag_of(const std::string& name) {
  static const std::vector<std::pair<std::string, FamilyTag>> table = {
      {"A.1", FamilyTag::A1},   {"A1", FamilyTag::A1},   {"A.2", FamilyTag::A2},   {"A2", FamilyTag::A2},
      {"A.3", FamilyTag::A3},   {"A3", FamilyTag::A3},   {"A.4", FamilyTag::A4},   {"A4", FamilyTag::A4},
      {"A.2*", FamilyTag::A2star}, {"A.3*", FamilyTag::A3star},
      {"B.1", FamilyTag::B1},   {"B1", FamilyTag::B1},   {"B.2", FamilyTag::B2},   {"B2", FamilyTag::B2},
      {"B.3", FamilyTag::B3},   {"B3", FamilyTag::B3},   {"B.4", FamilyTag::B4},   {"B4", FamilyTag::B4},
      {"B.1*", FamilyTag::B1star},
      {"C.1", FamilyTag::C1},   {"C1", FamilyTag::C1},   {"C.2", FamilyTag::C2},   {"C2", FamilyTag::C2},
      {"C.3", FamilyTag::C3},   {"C3", FamilyTag::C3},   {"C.4", FamilyTag::C4},   {"C4", FamilyTag::C4},
      {"D.1", FamilyTag::D1},   {"D1", FamilyTag::D1},   {"D.2", FamilyTag::D2},   {"D2", FamilyTag::D2}};
  for (auto& [n, t] : table)
    if (n == name) return t;
  return std::nullopt;
}

std::optional<FamilyTag> reroute_of(FamilyTag t) {
  switch (t) {
    case FamilyTag::A2star: return FamilyTag::A2;
    case FamilyTag::A3star: return FamilyTag::A3;
    case FamilyTag::B4: return FamilyTag::A1;
    case FamilyTag::B1star: return FamilyTag::B1;
    default: return std::nullopt;
  }
}

std::string witness_str(const Witness& w) {
  struct V {
    std::string operator()(const PointW& p) const {
      std::string s = "point(";
      for (size_t i = 0; i < p.coords.size(); ++i) s += (i ? "," : "") + to_string(p.coords[i]);
      return s + ")";
    }
    std::string operator()(const LineOnSurfaceW& l) const { return "line(" + l.f1.str() + "; " + l.f2.str() + ")"; }
    std::string operator()(const ConicOnSurfaceW& c) const {
      return "conic(" + c.plane.str() + "; " + c.quadric.str() + ")";
    }
    std::string operator()(const TwistedCubicFrameW& f) const {
      return "frame(" + f.xi1.str() + "; " + f.xi2.str() + "; " + f.xi3.str() + ")";
    }
    std::string operator()(const LambdaRootW& l) const {
      if (l.rational)
        return "lambda(" + to_string(l.lambda) + "; alpha=" + to_string(l.alpha) + ",beta=" + to_string(l.beta) +
               ",gamma=" + to_string(l.gamma) + ",delta=" + to_string(l.delta) + ")";
      return "lambda(" + l.elambda.str() + "; extension)";
    }
    std::string operator()(const SkewLineTripleW&) const { return "skew-line-triple"; }
    std::string operator()(const SecantLineTripleW&) const { return "secant-line-triple"; }
  };
  return std::visit(V{}, w);
}

// ---------------------------------------------------------------------------
// witness validation and transformation

static bool poly_vanishes_on_param(const Poly& f, const Space& sp, const CurveParam& c) {
  std::map<std::string, Poly> a;
  auto vars = sp.all_vars();
  for (size_t i = 0; i < vars.size(); ++i) a[vars[i]] = c.components[i];
  return f.substitute_poly(a).is_zero();
}

bool validate_witness(const LogPair& pair, const Witness& w) {
  Poly F = pair.boundary_product();
  const Space& sp = pair.space;
  struct V {
    const LogPair& pair;
    const Poly& F;
    const Space& sp;
    bool operator()(const PointW& p) const {
      if (p.coords.size() != sp.var_count()) return false;
      for (const auto& f : pair.boundary)
        if (vanishes_at(f, sp, p.coords)) return true;
      return false;
    }
    bool operator()(const LineOnSurfaceW& l) const {
      // the locus V(f1, f2) must lie on some boundary component: check that
      // the component is in the ideal by substitution along the canonical
      // parameterization when the forms are coordinate-like, else accept a
      // membership certificate via exact division structure
      for (const auto& g : pair.boundary) {
        // divide g by the ideal: g = A f1 + B f2 solvable?
        // cheap membership: g vanishes wherever f1 = f2 = 0; use a linear
        // solve g = A f1 + B f2 with A, B of complementary degree
        auto d = multidegree(sp, g);
        if (!d) continue;
        // try to write g = A f1 + B f2 by linear algebra over monomials
        auto dg1 = multidegree(sp, l.f1), dg2 = multidegree(sp, l.f2);
        if (!dg1 || !dg2) continue;
        // build candidate monomials for A and B
        auto mons_of_deg = [&](const std::vector<long>& deg) {
          std::vector<Poly> out;
          auto vars = sp.all_vars();
          std::function<void(size_t, Poly, std::vector<long>)> rec = [&](size_t i, Poly cur, std::vector<long> rem) {
            if (i == vars.size()) {
              bool ok = true;
              for (long r : rem) ok = ok && r == 0;
              if (ok) out.push_back(cur);
              return;
            }
            long w = sp.weight_of(vars[i]);
            int b = sp.block_of(vars[i]);
            Poly p = cur;
            for (int k = 0;; ++k) {
              std::vector<long> r2 = rem;
              r2[b] -= k * w;
              if (r2[b] < 0) break;
              rec(i + 1, p, r2);
              p *= Poly::variable(vars[i]);
            }
          };
          rec(0, Poly(Rat(1)), deg);
          return out;
        };
        std::vector<long> da(d->size()), db(d->size());
        bool okdeg = true;
        for (size_t b = 0; b < d->size(); ++b) {
          da[b] = (*d)[b] - (*dg1)[b];
          db[b] = (*d)[b] - (*dg2)[b];
          if (da[b] < 0 || db[b] < 0) okdeg = false;
        }
        if (!okdeg) continue;
        auto am = mons_of_deg(da), bm = mons_of_deg(db);
        std::vector<Poly> gens;
        for (auto& m : am) gens.push_back(m * l.f1);
        for (auto& m : bm) gens.push_back(m * l.f2);
        // solve g = sum c_i gens_i
        std::vector<std::string> vars = sp.all_vars();
        std::sort(vars.begin(), vars.end());
        std::map<Expo, size_t, GrlexDesc> rows;
        auto row_of = [&](const Expo& e) {
          auto it = rows.find(e);
          if (it != rows.end()) return it->second;
          size_t id = rows.size();
          rows.emplace(e, id);
          return id;
        };
        std::vector<std::vector<std::pair<size_t, Rat>>> cols(gens.size() + 1);
        auto embed = [&](const Poly& p, size_t col) {
          std::vector<size_t> pos(p.vars().size());
          for (size_t i = 0; i < p.vars().size(); ++i)
            pos[i] = std::lower_bound(vars.begin(), vars.end(), p.vars()[i]) - vars.begin();
          for (const auto& [e, c] : p.terms()) {
            Expo full(vars.size(), 0);
            for (size_t i = 0; i < e.size(); ++i) full[pos[i]] = e[i];
            cols[col].push_back({row_of(full), c});
          }
        };
        for (size_t i = 0; i < gens.size(); ++i) embed(gens[i], i);
        embed(g, gens.size());
        MatQ mat(rows.size(), std::vector<Rat>(gens.size(), Rat(0)));
        std::vector<Rat> rhs(rows.size(), Rat(0));
        for (size_t c = 0; c < gens.size(); ++c)
          for (auto& [r, v] : cols[c]) mat[r][c] += v;
        for (auto& [r, v] : cols[gens.size()]) rhs[r] += v;
        if (solve(std::move(mat), std::move(rhs))) return true;
      }
      return false;
    }
    bool operator()(const ConicOnSurfaceW& c) const {
      // conic = V(plane) cap V(quadric); base point on both and on the boundary
      if (!vanishes_at(c.plane, sp, c.base_point) || !vanishes_at(c.quadric, sp, c.base_point)) return false;
      auto par = conic_param(sp, c.plane, c.quadric, c.base_point, 17);
      if (!par) return false;
      for (const auto& g : pair.boundary)
        if (poly_vanishes_on_param(g, sp, *par)) return true;
      return false;
    }
    bool operator()(const TwistedCubicFrameW& f) const {
      CurveSquareness sq = double_along_twisted_cubic(F, {f.xi1, f.xi2, f.xi3});
      return sq.holds;
    }
    bool operator()(const LambdaRootW&) const { return true; }  // checked by the step
    bool operator()(const SkewLineTripleW& s) const {
      for (const auto& line : s.lines) {
        bool on = false;
        for (const auto& g : pair.boundary) on = on || poly_vanishes_on_param(g, sp, line);
        if (!on) return false;
      }
      return true;
    }
    bool operator()(const SecantLineTripleW&) const { return true; }  // checked by the step
  };
  return std::visit(V{pair, F, sp}, w);
}

static MatQ mat_inverse(const MatQ& m) {
  size_t n = m.size();
  MatQ a = m;
  for (size_t i = 0; i < n; ++i) {
    for (size_t j = 0; j < n; ++j) a[i].push_back(i == j ? Rat(1) : Rat(0));
  }
  rref(a);
  MatQ inv(n, std::vector<Rat>(n));
  for (size_t i = 0; i < n; ++i) {
    // verify pivot structure
    if (is_zero(a[i][i])) throw std::invalid_argument("singular transformation");
    for (size_t j = 0; j < n; ++j) inv[i][j] = a[i][j + n];
  }
  return inv;
}

LogPair transform_pair(const LogPair& pair, const MatQ& m) {
  auto vars = pair.space.all_vars();
  std::map<std::string, Poly> sub;
  for (size_t i = 0; i < vars.size(); ++i) {
    Poly s;
    for (size_t j = 0; j < vars.size(); ++j)
      if (!is_zero(m[i][j])) s += m[i][j] * Poly::variable(vars[j]);
    sub[vars[i]] = s;
  }
  std::vector<Poly> factors;
  for (const auto& f : pair.boundary) factors.push_back(f.substitute_poly(sub));
  return make_pair(pair.space, std::move(factors));
}

Witness transform_witness(const Space& sp, const Witness& w, const MatQ& m) {
  auto vars = sp.all_vars();
  MatQ minv = mat_inverse(m);
  std::map<std::string, Poly> sub;
  for (size_t i = 0; i < vars.size(); ++i) {
    Poly s;
    for (size_t j = 0; j < vars.size(); ++j)
      if (!is_zero(m[i][j])) s += m[i][j] * Poly::variable(vars[j]);
    sub[vars[i]] = s;
  }
  auto tr_point = [&](const Point& p) {
    Point q(p.size(), Rat(0));
    for (size_t i = 0; i < p.size(); ++i)
      for (size_t j = 0; j < p.size(); ++j) q[i] += minv[i][j] * p[j];
    return q;
  };
  auto tr_param = [&](const CurveParam& c) {
    CurveParam out;
    out.components.resize(c.components.size());
    for (size_t i = 0; i < c.components.size(); ++i) {
      Poly s;
      for (size_t j = 0; j < c.components.size(); ++j)
        if (!is_zero(minv[i][j])) s += minv[i][j] * c.components[j];
      out.components[i] = s;
    }
    return out;
  };
  struct V {
    const std::map<std::string, Poly>& sub;
    decltype(tr_point)& tp;
    decltype(tr_param)& tc;
    Witness operator()(const PointW& p) const { return PointW{tp(p.coords)}; }
    Witness operator()(const LineOnSurfaceW& l) const {
      return LineOnSurfaceW{l.f1.substitute_poly(sub), l.f2.substitute_poly(sub)};
    }
    Witness operator()(const ConicOnSurfaceW& c) const {
      return ConicOnSurfaceW{c.plane.substitute_poly(sub), c.quadric.substitute_poly(sub), tp(c.base_point)};
    }
    Witness operator()(const TwistedCubicFrameW& f) const {
      return TwistedCubicFrameW{f.xi1.substitute_poly(sub), f.xi2.substitute_poly(sub), f.xi3.substitute_poly(sub)};
    }
    Witness operator()(const LambdaRootW& l) const { return l; }
    Witness operator()(const SkewLineTripleW& s) const {
      SkewLineTripleW out;
      for (size_t i = 0; i < 3; ++i) out.lines[i] = tc(s.lines[i]);
      return out;
    }
    Witness operator()(const SecantLineTripleW& s) const { return s; }
  };
  return std::visit(V{sub, tr_point, tr_param}, w);
}

// ---------------------------------------------------------------------------
// perfect squares

std::optional<Poly> poly_square_root(const Poly& f) {
  if (f.is_zero()) return Poly();
  // leading term must be a square
  Expo le = f.leading_expo();
  for (auto e : le)
    if (e % 2) return std::nullopt;
  Rat lc = f.leading_coeff();
  if (sgn(lc.get_num()) < 0) return std::nullopt;
  Int ns, ds;
  mpz_sqrt(ns.get_mpz_t(), lc.get_num().get_mpz_t());
  mpz_sqrt(ds.get_mpz_t(), lc.get_den().get_mpz_t());
  if (ns * ns != lc.get_num() || ds * ds != lc.get_den()) return std::nullopt;
  Expo he = le;
  for (auto& e : he) e /= 2;
  Poly root = Poly::monomial(f.vars(), he, Rat(ns, ds));
  // iterate: root += correction from the next unmatched term
  for (int guard = 0; guard < 4096; ++guard) {
    Poly rem = f - root * root;
    if (rem.is_zero()) return root;
    // next term of the root: lead(rem) / (2 lead(root))
    Expo re = rem.leading_expo();
    // align variable sets by dividing as polynomials
    Poly lead_term = Poly::monomial(rem.vars(), re, rem.leading_coeff());
    Poly twice = Rat(2) * Poly::monomial(root.vars(), root.leading_expo(), root.leading_coeff());
    auto q = Poly::exact_divide(lead_term, twice);
    if (!q || q->is_zero()) return std::nullopt;
    // ensure strictly decreasing terms to terminate
    root += *q;
  }
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// surface singular points (elimination in a 3-space)

namespace {

// common zeros of a set of bivariate polynomials in (a, b)
std::optional<std::vector<std::pair<Rat, Rat>>> bivariate_common_zeros(const std::vector<Poly>& polys,
                                                                       const std::string& av, const std::string& bv) {
  std::vector<Poly> nz;
  for (const auto& p : polys)
    if (!p.is_zero()) nz.push_back(p);
  if (nz.empty()) return std::nullopt;  // everything vanishes: not finite
  // eliminate b pairwise
  UPoly acc;
  bool started = false;
  if (nz.size() == 1) {
    // single polynomial: common zeros form a curve unless constant
    if (nz[0].is_constant()) return std::vector<std::pair<Rat, Rat>>{};
    return std::nullopt;
  }
  for (size_t i = 0; i < nz.size(); ++i)
    for (size_t j = i + 1; j < nz.size(); ++j) {
      Poly r = Poly::resultant(nz[i], nz[j], bv);
      if (r.is_zero()) continue;
      UPoly u(std::max(r.degree_in(av), 0) + 1, Rat(0));
      for (int k = 0; k <= r.degree_in(av); ++k) {
        Poly c = r.coeff_of(av, uint32_t(k));
        if (!c.is_constant()) return std::nullopt;
        u[k] = c.is_zero() ? Rat(0) : c.constant_value();
      }
      u = utrim(u);
      if (udeg(u) < 0) continue;
      if (!started) {
        acc = u;
        started = true;
      } else
        acc = ugcd(acc, u);
    }
  if (!started) return std::nullopt;
  std::vector<std::pair<Rat, Rat>> out;
  if (udeg(acc) == 0) {
    // no common a-value; but common zeros could still hide where所有 pairs
    // degenerate -- handled by caller verification; also check pure-b zeros
    // via the b-specialization below with a arbitrary? none needed: resultant
    // kernel argument covers all common zeros with finite coordinates
    return out;
  }
  auto roots = rational_roots(acc);
  if (!roots) return std::nullopt;
  int resolved = 0;
  for (const auto& r : *roots) resolved += uroot_multiplicity(acc, r);
  if (resolved < udeg(acc)) return std::nullopt;  // irrational candidates
  for (const auto& a0 : *roots) {
    // common b-roots
    UPoly cz;
    bool st = false;
    bool all_zero = true;
    for (const auto& p : nz) {
      Poly s = p.set_var(av, a0);
      UPoly u(std::max(s.degree_in(bv), 0) + 1, Rat(0));
      for (int k = 0; k <= s.degree_in(bv); ++k) {
        Poly c = s.coeff_of(bv, uint32_t(k));
        if (!c.is_constant()) return std::nullopt;
        u[k] = c.is_zero() ? Rat(0) : c.constant_value();
      }
      u = utrim(u);
      if (udeg(u) < 0) continue;
      all_zero = false;
      if (udeg(u) == 0) {
        st = true;
        cz = {Rat(1)};
        break;
      }
      if (!st) {
        cz = u;
        st = true;
      } else
        cz = ugcd(cz, u);
    }
    if (all_zero) return std::nullopt;  // a whole line of zeros
    if (!st || udeg(cz) == 0) continue;
    auto broots = rational_roots(cz);
    if (!broots) return std::nullopt;
    int res2 = 0;
    for (const auto& b0 : *broots) res2 += uroot_multiplicity(cz, b0);
    if (res2 < udeg(cz)) return std::nullopt;
    for (const auto& b0 : *broots) out.push_back({a0, b0});
  }
  return out;
}

}  // namespace

SurfaceSingReport surface_singular_points(const Poly& F, const Space& sp) {
  SurfaceSingReport rep;
  auto vars = sp.all_vars();
  if (vars.size() != 4 || sp.blocks.size() != 1) {
    rep.unresolved = true;
    rep.reason = "surface analysis supports 3-spaces only";
    return rep;
  }
  for (long w : sp.blocks[0].weights)
    if (w != 1) {
      rep.unresolved = true;
      rep.reason = "surface analysis supports unweighted spaces only";
      return rep;
    }
  const std::string T = vars[0], X = vars[1], Y = vars[2], Z = vars[3];
  static const long shearsets[][3] = {{0, 0, 0}, {1, 2, 3}, {-2, 1, 2}, {3, -1, 1}};
  for (const auto& sh : shearsets) {
    // substitution t -> t + s0 x + s1 y + s2 z keeps other variables fixed
    std::map<std::string, Poly> fwd{{T, Poly::variable(T) + Rat(sh[0]) * Poly::variable(X) +
                                            Rat(sh[1]) * Poly::variable(Y) + Rat(sh[2]) * Poly::variable(Z)}};
    Poly g = F.substitute_poly(fwd);
    std::vector<Poly> parts;
    for (const auto& v : vars) parts.push_back(g.derivative(v));
    std::vector<Poly> nz;
    for (auto& p : parts)
      if (!p.is_zero()) nz.push_back(p);
    if (nz.empty()) {
      rep.unresolved = true;
      rep.reason = "zero gradient";
      return rep;
    }
    bool regular = true;
    for (const auto& p : nz) regular = regular && p.degree_in(T) >= 1;
    if (!regular && !(sh[0] == 0 && sh[1] == 0 && sh[2] == 0)) continue;
    if (!regular) continue;
    // eliminate T pairwise
    std::vector<Poly> rs;
    bool curve = false;
    for (size_t i = 0; i < nz.size(); ++i)
      for (size_t j = i + 1; j < nz.size(); ++j) {
        Poly r = Poly::resultant(nz[i], nz[j], T);
        if (r.is_zero()) {
          curve = true;
          break;
        }
        rs.push_back(std::move(r));
      }
    if (curve) {
      rep.unresolved = false;
      rep.smooth = false;
      rep.reason = "positive-dimensional singular locus";
      rep.has_irrational = true;  // locus not enumerated pointwise
      return rep;
    }
    // candidates in (X : Y : Z): common zeros of the ternary resultants.
    // eliminate Z pairwise, gcd over (X, Y)
    UPoly acc;
    bool started = false;
    bool zbad = false;
    for (size_t i = 0; i < rs.size() && !zbad; ++i)
      for (size_t j = i + 1; j < rs.size() && !zbad; ++j) {
        if (rs[i].degree_in(Z) < 1 && rs[j].degree_in(Z) < 1) continue;
        Poly r = Poly::resultant(rs[i], rs[j], Z);
        if (r.is_zero()) continue;  // shared factor among two resultants is
                                    // not yet a singular curve of F
        BinForm bf;
        try {
          bf = binform_of(r, X, Y, r.degree());
        } catch (const std::exception&) {
          zbad = true;
          break;
        }
        UPoly u = bf.dehomogenized();
        if (udeg(u) < 0) continue;
        if (!started) {
          acc = u;
          started = true;
        } else
          acc = ugcd(acc, u);
      }
    if (zbad) continue;
    std::vector<std::pair<Rat, Rat>> xy;  // finite (X, Y=1) candidates
    if (started && udeg(acc) >= 1) {
      auto roots = rational_roots(acc);
      if (!roots) {
        rep.unresolved = true;
        rep.reason = "root extraction exceeded bounds";
        return rep;
      }
      int resolved = 0;
      for (const auto& r : *roots) resolved += uroot_multiplicity(acc, r);
      if (resolved < udeg(acc)) rep.has_irrational = true;
      for (const auto& r : *roots) xy.push_back({r, Rat(1)});
    }
    // always also: (X : Y) = (1 : 0), and the elimination centres
    xy.push_back({Rat(1), Rat(0)});
    auto consider_line = [&](const Rat& x0, const Rat& y0) {
      // solve for (T, Z) on the line (X, Y) = (x0, y0)
      std::vector<Poly> spec;
      for (const auto& p : nz) spec.push_back(p.set_var(X, x0).set_var(Y, y0));
      auto sols = bivariate_common_zeros(spec, Z, T);
      if (!sols) {
        // could be a curve of solutions or irrational点
        // verify whether the entire line is singular
        bool all_zero = true;
        for (auto& p : spec) all_zero = all_zero && p.is_zero();
        if (all_zero) {
          rep.smooth = false;
          rep.reason = "singular along a coordinate line";
          rep.has_irrational = true;
          return;
        }
        rep.has_irrational = true;
        return;
      }
      for (auto& [z0, t0] : *sols) {
        Point p = {t0, x0, y0, z0};
        bool ok = true;
        for (const auto& q : parts) ok = ok && vanishes_at(q, sp, p);
        if (ok) rep.rational_points.push_back(p);
      }
    };
    for (auto& [x0, y0] : xy) consider_line(x0, y0);
    // the centre point (1,0,0,0) in sheared coordinates
    {
      Point c = {Rat(1), Rat(0), Rat(0), Rat(0)};
      bool ok = true;
      for (const auto& q : parts) ok = ok && vanishes_at(q, sp, c);
      if (ok) rep.rational_points.push_back(c);
    }
    // map points back through the shear: g(P) = F(M P)
    for (auto& p : rep.rational_points) {
      p[0] = p[0] + Rat(sh[0]) * p[1] + Rat(sh[1]) * p[2] + Rat(sh[2]) * p[3];
    }
    // dedupe projectively
    std::vector<Point> uniq;
    for (auto& p : rep.rational_points) {
      bool dup = false;
      for (auto& q : uniq) {
        MatQ m{std::vector<Rat>(p.begin(), p.end()), std::vector<Rat>(q.begin(), q.end())};
        if (rank(std::move(m)) < 2) dup = true;
      }
      if (!dup) uniq.push_back(p);
    }
    rep.rational_points = uniq;
    rep.smooth = rep.rational_points.empty() && !rep.has_irrational;
    return rep;
  }
  rep.unresolved = true;
  rep.reason = "no admissible shear";
  return rep;
}

}  // namespace lcy
