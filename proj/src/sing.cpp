#include "lcy/sing.hpp"

#include <functional>
#include <sstream>

namespace lcy {

std::string to_string(SingTag t) {
  switch (t) {
    case SingTag::NonSingular: return "NonSingular";
    case SingTag::DuVal: return "DuVal";
    case SingTag::SimpleElliptic: return "SimpleElliptic";
    case SingTag::Cusp: return "Cusp";
    case SingTag::NormalCrossing: return "NormalCrossing";
    case SingTag::PinchPoint: return "PinchPoint";
    case SingTag::DegenerateCusp: return "DegenerateCusp";
    case SingTag::WorseThanSLC: return "WorseThanSLC";
    default: return "Unresolved";
  }
}

std::string to_string(EllipticKind k) {
  switch (k) {
    case EllipticKind::E6: return "E6~";
    case EllipticKind::E7: return "E7~";
    case EllipticKind::E8: return "E8~";
    default: return "";
  }
}

std::string to_string(CurveType t) {
  switch (t) {
    case CurveType::SmoothElliptic: return "SmoothElliptic";
    case CurveType::Nodal: return "Nodal";
    case CurveType::Other: return "Other";
    default: return "Unresolved";
  }
}

std::string SingularityType::str() const {
  std::string s = to_string(tag);
  if (elliptic != EllipticKind::None) s += "(" + to_string(elliptic) + ")";
  if (!detail.empty()) s += "[" + detail + "]";
  return s;
}

// ---------------------------------------------------------------------------
// local equations

std::pair<Poly, std::vector<std::string>> local_equation(const Poly& F, const Space& sp, const Point& p) {
  auto vars = sp.all_vars();
  if (vars.size() != p.size()) throw std::invalid_argument("point size mismatch");
  int chart = -1;
  for (size_t i = 0; i < vars.size(); ++i)
    if (!is_zero(p[i]) && sp.weight_of(vars[i]) == 1) {
      chart = int(i);
      break;
    }
  if (chart < 0) throw std::invalid_argument("point not in a weight-one chart");
  // scale so the chart coordinate is 1
  Point q = p;
  Rat scale = q[chart];
  for (auto& c : q) c /= scale;
  Poly f = F.set_var(vars[chart], Rat(1));
  std::map<std::string, Poly> shift;
  std::vector<std::string> avars;
  for (size_t i = 0; i < vars.size(); ++i) {
    if (int(i) == chart) continue;
    avars.push_back(vars[i]);
    shift[vars[i]] = Poly::variable(vars[i]) + Poly(q[i]);
  }
  return {f.substitute_poly(shift), avars};
}

int origin_order(const Poly& f) {
  if (f.is_zero()) return -1;
  std::map<std::string, long> w;
  for (const auto& v : f.vars()) w[v] = 1;
  return int(f.weighted_order(w));
}

// total-degree graded part
Poly total_degree_part(const Poly& f, long d) {
  std::map<std::string, long> w;
  for (const auto& v : f.vars()) w[v] = 1;
  if (f.is_zero()) return f;
  return f.weighted_part(w, d);
}

int multiplicity_at(const Poly& F, const Space& sp, const Point& p) {
  auto [f, avars] = local_equation(F, sp, p);
  int ord = origin_order(f);
  if (ord == -1) throw std::invalid_argument("surface is zero");
  if (ord == 0) throw std::invalid_argument("point not on the surface");
  return ord;
}

// ---------------------------------------------------------------------------
// quadratic forms

int quadratic_rank(const Poly& q, const std::vector<std::string>& vars) {
  size_t n = vars.size();
  MatQ m(n, std::vector<Rat>(n, Rat(0)));
  for (size_t i = 0; i < n; ++i)
    for (size_t j = 0; j < n; ++j) {
      Poly c = i == j ? q.coeff_of(vars[i], 2)
                      : q.coeff_of(vars[i], 1).coeff_of(vars[j], 1);
      Rat val = c.is_zero() ? Rat(0) : c.constant_value();
      if (i == j)
        m[i][j] = val;
      else {
        m[i][j] = val / 2;
      }
    }
  // strip parts that belong to other variables: all handled by coeff_of
  return int(rank(std::move(m)));
}

// rank-one quadratic: q = c * l^2; returns l (integral, content-free)
std::optional<Poly> quadratic_rank_one_direction(const Poly& q, const std::vector<std::string>& vars) {
  size_t n = vars.size();
  MatQ m(n, std::vector<Rat>(n, Rat(0)));
  for (size_t i = 0; i < n; ++i)
    for (size_t j = 0; j < n; ++j) {
      Poly c = i == j ? q.coeff_of(vars[i], 2) : q.coeff_of(vars[i], 1).coeff_of(vars[j], 1);
      Rat val = c.is_zero() ? Rat(0) : c.constant_value();
      m[i][j] = i == j ? val : val / 2;
    }
  for (size_t i = 0; i < n; ++i) {
    bool nonzero = false;
    for (size_t j = 0; j < n; ++j) nonzero = nonzero || !is_zero(m[i][j]);
    if (!nonzero) continue;
    Poly l;
    for (size_t j = 0; j < n; ++j)
      if (!is_zero(m[i][j])) l += m[i][j] * Poly::variable(vars[j]);
    l = l / rat_content(l);
    // verify q is proportional to l^2
    Poly l2 = l * l;
    // find scale from leading coefficients
    if (l2.is_zero()) return std::nullopt;
    Rat scale = q.leading_coeff() / l2.leading_coeff();
    if ((q - scale * l2).is_zero()) return l;
    return std::nullopt;
  }
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// univariate machinery over an extension field (for conjugate node pairs)

using EUPoly = std::vector<ExtElem>;

static int eudeg(const EUPoly& p) {
  for (size_t i = p.size(); i-- > 0;)
    if (!p[i].is_zero()) return int(i);
  return -1;
}

static EUPoly eutrim(EUPoly p) {
  while (!p.empty() && p.back().is_zero()) p.pop_back();
  return p;
}

static EUPoly eurem(EUPoly a, const EUPoly& b) {
  int db = eudeg(b);
  int da = eudeg(a);
  while (da >= db && db >= 0) {
    ExtElem f = a[da] / b[db];
    for (int i = 0; i <= db; ++i) a[da - db + i] -= f * b[i];
    a = eutrim(a);
    da = eudeg(a);
  }
  return a;
}

static EUPoly eugcd(EUPoly a, EUPoly b) {
  a = eutrim(a);
  b = eutrim(b);
  while (eudeg(b) >= 0) {
    EUPoly r = eurem(a, b);
    a = std::move(b);
    b = eutrim(r);
  }
  int d = eudeg(a);
  if (d >= 0) {
    ExtElem lead = a[d];
    for (auto& c : a) c /= lead;
  }
  return a;
}

// ---------------------------------------------------------------------------
// projective singular points of a ternary form

struct ProjPoint {
  std::vector<Rat> rational;                    // size 3 when rational
  std::shared_ptr<const ExtContext> ctx;        // set for extension points
  std::vector<ExtElem> ext;                     // size 3 when extension
  bool is_rational() const { return !rational.empty(); }
};

struct ProjSingReport {
  bool finite = true;
  bool unresolved = false;
  std::string reason;
  std::vector<ProjPoint> points;
};

// multiplicity structure of a binary form: list of multiplicities of all
// roots over C (via repeated gcd), plus rational root extraction
struct MultSpectrum {
  bool squarefree = false;
  int max_multiplicity = 1;
  bool any_multiple = false;
};

static MultSpectrum binform_mult_spectrum(const BinForm& f) {
  MultSpectrum s;
  if (f.is_zero()) {
    s.max_multiplicity = 1000;
    s.any_multiple = true;
    return s;
  }
  UPoly u = f.dehomogenized();
  int infm = f.inf_multiplicity();
  UPoly g = udeg(u) >= 1 ? ugcd(u, uderiv(u)) : UPoly{Rat(1)};
  int gd = std::max(udeg(g), 0);
  s.any_multiple = gd > 0 || infm >= 2;
  s.squarefree = !s.any_multiple;
  // max multiplicity: iterate gcd chain
  int maxm = infm;
  UPoly cur = u;
  int m = 1;
  while (udeg(cur) >= 1) {
    UPoly gg = ugcd(cur, uderiv(cur));
    if (udeg(gg) <= 0) break;
    ++m;
    cur = gg;
  }
  s.max_multiplicity = std::max(maxm, m);
  return s;
}

// evaluation of a polynomial at a projective point over Q or Q(rho)
static bool vanishes_at_proj(const Poly& f, const std::vector<std::string>& vars, const ProjPoint& p) {
  if (p.is_rational()) {
    std::map<std::string, Rat> a;
    for (size_t i = 0; i < vars.size(); ++i) a[vars[i]] = p.rational[i];
    return is_zero(f.evaluate<Rat>(a));
  }
  std::map<std::string, ExtElem> a;
  for (size_t i = 0; i < vars.size(); ++i) a[vars[i]] = p.ext[i];
  return f.evaluate<ExtElem>(a).is_zero();
}

// nodality of a projective plane curve at a singular point: 2-jet of the
// local equation is a nondegenerate binary quadratic
static std::optional<bool> is_node_at(const Poly& g, const std::vector<std::string>& vars, const ProjPoint& p) {
  // dehomogenize at a coordinate where p is nonzero, shift, inspect 2-jet
  auto jet_disc = [&](auto point, auto zero, auto one) -> std::optional<bool> {
    using KK = decltype(zero);
    int chart = -1;
    for (size_t i = 0; i < 3; ++i)
      if (!lcy::is_zero(point[i])) chart = int(i);
    if (chart < 0) return std::nullopt;
    // local coordinates: the other two variables
    std::vector<size_t> others;
    for (size_t i = 0; i < 3; ++i)
      if (int(i) != chart) others.push_back(i);
    // f(u, v) = g at (p + u e_a + v e_b) scaled so p[chart] stays
    // substitute x_a -> p_a + u * p_chart, etc. keeps homogeneity harmless
    PolyT<KK> f;
    // build g with coefficients lifted and variables substituted
    std::map<std::string, PolyT<KK>> a;
    for (size_t i = 0; i < 3; ++i) {
      PolyT<KK> val(point[i]);
      if (i == others[0]) val += PolyT<KK>::variable("loc_u");
      if (i == others[1]) val += PolyT<KK>::variable("loc_v");
      a[vars[i]] = val;
    }
    PolyT<KK> lifted;
    for (const auto& [e, c] : g.terms()) lifted += PolyT<KK>::monomial(g.vars(), e, KK(c));
    f = lifted.substitute_poly(a);
    // 2-jet coefficients
    KK c20 = f.coeff_of("loc_u", 2).coeff_of("loc_v", 0).is_zero()
                 ? zero
                 : f.coeff_of("loc_u", 2).coeff_of("loc_v", 0).constant_value();
    KK c11 = f.coeff_of("loc_u", 1).coeff_of("loc_v", 1).is_zero()
                 ? zero
                 : f.coeff_of("loc_u", 1).coeff_of("loc_v", 1).constant_value();
    KK c02 = f.coeff_of("loc_u", 0).coeff_of("loc_v", 2).is_zero()
                 ? zero
                 : f.coeff_of("loc_u", 0).coeff_of("loc_v", 2).constant_value();
    // order must be exactly 2 with nondegenerate quadratic
    KK c00 = f.coeff_of("loc_u", 0).coeff_of("loc_v", 0).is_zero()
                 ? zero
                 : f.coeff_of("loc_u", 0).coeff_of("loc_v", 0).constant_value();
    KK c10 = f.coeff_of("loc_u", 1).coeff_of("loc_v", 0).is_zero()
                 ? zero
                 : f.coeff_of("loc_u", 1).coeff_of("loc_v", 0).constant_value();
    KK c01 = f.coeff_of("loc_u", 0).coeff_of("loc_v", 1).is_zero()
                 ? zero
                 : f.coeff_of("loc_u", 0).coeff_of("loc_v", 1).constant_value();
    if (!lcy::is_zero(c00) || !lcy::is_zero(c10) || !lcy::is_zero(c01)) return std::nullopt;  // not singular here
    KK disc = c11 * c11 - KK(4) * c20 * c02;
    if (lcy::is_zero(c20) && lcy::is_zero(c11) && lcy::is_zero(c02)) return false;  // multiplicity >= 3
    return !lcy::is_zero(disc);
  };
  if (p.is_rational()) return jet_disc(p.rational, Rat(0), Rat(1));
  return jet_disc(p.ext, ExtElem(Rat(0)), ExtElem(Rat(1)));
}

static ProjSingReport proj_sing_points(const Poly& g_in, const std::vector<std::string>& vars) {
  ProjSingReport rep;
  if (vars.size() != 3) throw std::invalid_argument("proj_sing_points expects three variables");
  const std::string &X = vars[0], &Y = vars[1], &Z = vars[2];
  // try a few deterministic shears to regularize resultants
  static const long shears[][3] = {{0, 0, 0}, {1, 2, 3}, {2, -1, 1}, {-3, 1, 2}};
  for (const auto& sh : shears) {
    std::map<std::string, Poly> fwd{{X, Poly::variable(X) + Rat(sh[0]) * Poly::variable(Z)},
                                    {Y, Poly::variable(Y) + Rat(sh[1]) * Poly::variable(Z)},
                                    {Z, Poly::variable(Z) + Rat(sh[2]) * Poly::variable(X)}};
    Poly g = g_in.substitute_poly(fwd);
    Poly gx = g.derivative(X), gy = g.derivative(Y), gz = g.derivative(Z);
    std::vector<const Poly*> nz;
    for (const Poly* p : {&gx, &gy, &gz})
      if (!p->is_zero()) nz.push_back(p);
    if (nz.empty()) {
      rep.unresolved = true;
      rep.reason = "zero gradient";
      return rep;
    }
    if (nz.size() == 1) {
      // singular exactly where the one nonzero partial vanishes: a curve
      rep.finite = false;
      return rep;
    }
    // require z-regularity so elimination in Z is meaningful
    bool regular = true;
    for (const Poly* p : nz) regular = regular && p->degree_in(Z) >= 1;
    if (!regular) continue;
    std::vector<Poly> rs;
    bool bad = false;
    for (size_t i = 0; i < nz.size() && !bad; ++i)
      for (size_t j = i + 1; j < nz.size() && !bad; ++j) {
        Poly r = Poly::resultant(*nz[i], *nz[j], Z);
        if (r.is_zero()) {
          // common factor of positive Z-degree: the singular locus contains
          // a curve
          rep.finite = false;
          return rep;
        }
        rs.push_back(std::move(r));
      }
    if (bad) continue;
    // gcd of the resultants as binary forms in (X, Y)
    UPoly acc;
    int acc_inf = 0;
    bool acc_valid = false;
    for (const auto& r : rs) {
      BinForm bf;
      try {
        bf = binform_of(r, X, Y, r.degree());
      } catch (const std::exception&) {
        bad = true;
        break;
      }
      if (!acc_valid) {
        acc = bf.dehomogenized();
        acc_inf = bf.inf_multiplicity();
        acc_valid = true;
      } else {
        acc = ugcd(acc, bf.dehomogenized());
        acc_inf = std::min(acc_inf, bf.inf_multiplicity());
      }
    }
    if (bad || !acc_valid) continue;
    // the projection centre (0 : 0 : 1) escapes the elimination; check it
    {
      ProjPoint p0;
      p0.rational = {Rat(0), Rat(0), Rat(1)};
      if (vanishes_at_proj(gx, vars, p0) && vanishes_at_proj(gy, vars, p0) && vanishes_at_proj(gz, vars, p0))
        rep.points.push_back(p0);
    }
    // candidate (X:Y) values: rational roots of acc, plus infinity
    std::vector<std::pair<Rat, Rat>> xy;  // (X, Y) projective pairs
    if (acc_inf > 0) xy.push_back({Rat(1), Rat(0)});
    int unresolved_degree = 0;
    std::vector<UPoly> leftover_quadratics;
    if (udeg(acc) >= 1) {
      auto roots = rational_roots(acc);
      if (!roots) {
        rep.unresolved = true;
        rep.reason = "root extraction exceeded bounds";
        return rep;
      }
      UPoly residual = acc;
      for (const auto& r : *roots) {
        xy.push_back({r, Rat(1)});
        int m = uroot_multiplicity(residual, r);
        // divide out
        for (int k = 0; k < m; ++k) {
          UPoly q(std::max<int>(udeg(residual), 1), Rat(0));
          Rat carry(0);
          for (int i = udeg(residual); i >= 1; --i) {
            carry = residual[i] + carry * r;
            q[i - 1] = carry;
          }
          residual = utrim(q);
        }
      }
      // leftover irreducible part: allow one quadratic factor via gcd trick
      int rd = udeg(residual);
      if (rd > 0) {
        UPoly sqfree = residual;
        UPoly gg = ugcd(residual, uderiv(residual));
        if (udeg(gg) > 0) {
          // use the squarefree part
          // residual / gg
          sqfree = gg;  // roots of gg are也 roots; but to stay safe treat whole residual
          sqfree = residual;
        }
        if (rd == 2) {
          leftover_quadratics.push_back(umonic(residual));
        } else if (udeg(ugcd(residual, uderiv(residual))) == rd - 2 && rd % 2 == 0) {
          // power of a quadratic: extract it
          UPoly base = residual;
          while (udeg(base) > 2) {
            base = ugcd(base, uderiv(base));
          }
          if (udeg(base) == 2)
            leftover_quadratics.push_back(umonic(base));
          else
            unresolved_degree = rd;
        } else {
          unresolved_degree = rd;
        }
      }
    }
    // resolve candidates: find Z for each (X0, Y0)
    for (auto& [x0, y0] : xy) {
      // common Z-roots of the partials at (x0, y0)
      std::map<std::string, Poly> a{{X, Poly(x0)}, {Y, Poly(y0)}};
      UPoly u1, u2;
      auto to_upoly = [&](const Poly& p) {
        Poly s = p.substitute_poly(a);
        UPoly u(std::max(s.degree_in(Z), 0) + 1, Rat(0));
        for (int k = 0; k <= s.degree_in(Z); ++k) {
          Poly c = s.coeff_of(Z, uint32_t(k));
          u[k] = c.is_zero() ? Rat(0) : c.constant_value();
        }
        return utrim(u);
      };
      std::vector<UPoly> specialized;
      for (const Poly* pp : {&gx, &gy, &gz}) specialized.push_back(to_upoly(*pp));
      UPoly common_z;
      bool started = false;
      bool all_const_zero = true;
      for (auto& u : specialized) {
        if (udeg(u) < 0) continue;  // identically zero: no constraint
        all_const_zero = false;
        if (udeg(u) == 0) { started = true; common_z = {Rat(1)}; break; }
        if (!started) { common_z = u; started = true; }
        else common_z = ugcd(common_z, u);
      }
      if (all_const_zero) {
        // partials vanish along the whole line (X0:Y0:*)
        rep.finite = false;
        return rep;
      }
      if (!started || udeg(common_z) == 0) continue;  // no common zero on this line
      auto zroots = rational_roots(common_z);
      if (!zroots) {
        rep.unresolved = true;
        rep.reason = "z-root extraction exceeded bounds";
        return rep;
      }
      int found_deg = 0;
      for (const auto& z0 : *zroots) {
        found_deg += 1;
        ProjPoint p;
        p.rational = {x0, y0, z0};
        // verify all partials vanish
        bool ok = vanishes_at_proj(gx, vars, p) && vanishes_at_proj(gy, vars, p) && vanishes_at_proj(gz, vars, p);
        if (ok) rep.points.push_back(p);
      }
      // leftover irrational z-roots over this rational (X0:Y0)
      int cz = udeg(common_z);
      if (found_deg < cz) {
        // try quadratic leftover
        UPoly residual = common_z;
        for (const auto& z0 : *zroots) {
          int m = uroot_multiplicity(residual, z0);
          for (int k = 0; k < m; ++k) {
            UPoly q(std::max<int>(udeg(residual), 1), Rat(0));
            Rat carry(0);
            for (int i = udeg(residual); i >= 1; --i) {
              carry = residual[i] + carry * z0;
              q[i - 1] = carry;
            }
            residual = utrim(q);
          }
        }
        if (udeg(residual) == 2) {
          UPoly mm = umonic(residual);
          auto ctx = ExtContext::make("rho", {mm[0], mm[1]});
          ProjPoint p;
          p.ctx = ctx;
          p.ext = {ExtElem(x0), ExtElem(y0), ExtElem::generator(ctx)};
          bool ok = vanishes_at_proj(gx, vars, p) && vanishes_at_proj(gy, vars, p) && vanishes_at_proj(gz, vars, p);
          if (ok) rep.points.push_back(p);
          else {
            rep.unresolved = true;
            rep.reason = "irrational singular z beyond supported extensions";
            return rep;
          }
        } else if (udeg(residual) > 0) {
          rep.unresolved = true;
          rep.reason = "irrational singular locus beyond supported extensions";
          return rep;
        }
      }
    }
    // extension candidates in (X:Y) from a leftover quadratic
    for (const auto& q : leftover_quadratics) {
      auto ctx = ExtContext::make("rho", {q[0], q[1]});
      ExtElem rho = ExtElem::generator(ctx);
      // specialize partials at (rho, 1, Z): find common Z root over Q(rho)
      std::vector<EUPoly> specialized;
      for (const Poly* pp : {&gx, &gy, &gz}) {
        int dz = pp->degree_in(Z);
        EUPoly u(dz + 1, ExtElem(Rat(0)));
        for (int k = 0; k <= dz; ++k) {
          Poly c = pp->coeff_of(Z, uint32_t(k));
          // evaluate c at X=rho, Y=1
          std::map<std::string, ExtElem> a{{X, rho}, {Y, ExtElem(Rat(1))}};
          for (const auto& v : c.vars())
            if (!a.count(v)) a[v] = ExtElem(Rat(0));
          u[k] = c.is_zero() ? ExtElem(Rat(0)) : c.evaluate<ExtElem>(a);
        }
        specialized.push_back(eutrim(u));
      }
      EUPoly common_z;
      bool started = false;
      for (auto& u : specialized) {
        if (eudeg(u) < 0) continue;
        if (eudeg(u) == 0) { started = true; common_z = {ExtElem(Rat(1))}; break; }
        if (!started) { common_z = u; started = true; }
        else common_z = eugcd(common_z, u);
      }
      if (!started || eudeg(common_z) == 0) continue;
      if (eudeg(common_z) == 1) {
        ExtElem z0 = -common_z[0] / common_z[1];
        ProjPoint p;
        p.ctx = ctx;
        p.ext = {rho, ExtElem(Rat(1)), z0};
        bool ok = vanishes_at_proj(gx, vars, p) && vanishes_at_proj(gy, vars, p) && vanishes_at_proj(gz, vars, p);
        if (ok) rep.points.push_back(p);
        else {
          rep.unresolved = true;
          rep.reason = "extension candidate failed verification";
          return rep;
        }
      } else {
        rep.unresolved = true;
        rep.reason = "singular points beyond degree-2 extensions";
        return rep;
      }
    }
    if (unresolved_degree > 0) {
      rep.unresolved = true;
      rep.reason = "singular locus has an unresolved factor of degree " + std::to_string(unresolved_degree);
      return rep;
    }
    // map sheared-frame points back: g_sheared(P) = g(M P), so the original
    // singular points are M P with M = [[1,0,s0],[0,1,s1],[s2,0,1]]
    {
      MatQ M{{Rat(1), Rat(0), Rat(sh[0])}, {Rat(0), Rat(1), Rat(sh[1])}, {Rat(sh[2]), Rat(0), Rat(1)}};
      for (auto& p : rep.points) {
        if (p.is_rational()) {
          std::vector<Rat> q(3, Rat(0));
          for (size_t i = 0; i < 3; ++i)
            for (size_t j = 0; j < 3; ++j) q[i] += M[i][j] * p.rational[j];
          p.rational = q;
        } else {
          std::vector<ExtElem> q(3, ExtElem(Rat(0)));
          for (size_t i = 0; i < 3; ++i)
            for (size_t j = 0; j < 3; ++j) q[i] += ExtElem(M[i][j]) * p.ext[j];
          p.ext = q;
        }
      }
    }
    return rep;
  }
  rep.unresolved = true;
  rep.reason = "no admissible shear";
  return rep;
}

// ---------------------------------------------------------------------------
// ordinary curve test

CurveTypeVerdict ordinary_curve_test(const Poly& g, const std::vector<std::string>& vars) {
  CurveTypeVerdict v;
  if (g.is_zero()) throw std::invalid_argument("zero curve");
  if (vars.size() != 3) throw std::invalid_argument("plane curve needs three ambient variables");
  auto rep = proj_sing_points(g, vars);
  if (rep.unresolved) {
    v.type = CurveType::Unresolved;
    v.reason = rep.reason;
    return v;
  }
  if (!rep.finite) {
    v.type = CurveType::Other;
    v.reason = "singular locus is not finite (non-reduced curve)";
    return v;
  }
  // keep only singular points lying on the curve
  std::vector<ProjPoint> on_curve;
  for (const auto& p : rep.points)
    if (vanishes_at_proj(g, vars, p)) on_curve.push_back(p);
  if (on_curve.empty()) {
    if (g.degree() == 3) {
      v.type = CurveType::SmoothElliptic;
    } else {
      v.type = CurveType::Other;
      v.reason = "smooth but not a plane cubic";
    }
    return v;
  }
  int nodes = 0;
  for (const auto& p : on_curve) {
    auto nd = is_node_at(g, vars, p);
    if (!nd) {
      v.type = CurveType::Unresolved;
      v.reason = "could not certify local structure";
      return v;
    }
    if (!*nd) {
      v.type = CurveType::Other;
      v.reason = "non-nodal singular point";
      return v;
    }
    nodes += p.is_rational() ? 1 : 2;  // conjugate pairs count twice
  }
  v.type = CurveType::Nodal;
  v.node_count = nodes;
  return v;
}

CurveTypeVerdict ordinary_curve_test(const Poly& g) {
  std::vector<std::string> vars = g.vars();
  if (vars.size() > 3) throw std::invalid_argument("curve has more than three variables");
  int pad = 0;
  while (vars.size() < 3) vars.push_back("pad" + std::to_string(pad++));
  std::sort(vars.begin(), vars.end());
  return ordinary_curve_test(g, vars);
}

// ---------------------------------------------------------------------------
// affine curve analysis (used chart-wise on weighted cones)

AffineCurveReport affine_curve_singularities(const Poly& f, const std::string& uvar, const std::string& vvar) {
  AffineCurveReport rep;
  Poly fu = f.derivative(uvar), fv = f.derivative(vvar);
  if (fu.is_zero() && fv.is_zero()) {
    rep.unresolved = true;
    rep.reason = "constant gradient";
    return rep;
  }
  // eliminate v
  auto safe_res = [&](const Poly& a, const Poly& b) -> Poly {
    return Poly::resultant(a, b, vvar);
  };
  std::vector<Poly> rs;
  if (!fu.is_zero()) rs.push_back(safe_res(f, fu));
  if (!fv.is_zero()) rs.push_back(safe_res(f, fv));
  if (!fu.is_zero() && !fv.is_zero()) rs.push_back(safe_res(fu, fv));
  UPoly acc;
  bool started = false;
  for (const auto& r : rs) {
    if (r.is_zero()) continue;
    UPoly u(std::max(r.degree_in(uvar), 0) + 1, Rat(0));
    for (int k = 0; k <= r.degree_in(uvar); ++k) {
      Poly c = r.coeff_of(uvar, uint32_t(k));
      if (!c.is_constant()) { rep.unresolved = true; rep.reason = "resultant carries extra variables"; return rep; }
      u[k] = c.is_zero() ? Rat(0) : c.constant_value();
    }
    u = utrim(u);
    if (udeg(u) < 0) continue;
    if (!started) { acc = u; started = true; }
    else acc = ugcd(acc, u);
  }
  if (!started) {
    rep.unresolved = true;
    rep.reason = "all elimination resultants vanish (non-reduced curve)";
    return rep;
  }
  if (udeg(acc) == 0) {
    rep.smooth = true;
    return rep;
  }
  auto roots = rational_roots(acc);
  if (!roots) {
    rep.unresolved = true;
    rep.reason = "root extraction exceeded bounds";
    return rep;
  }
  int resolved = 0;
  for (const auto& r : *roots) resolved += uroot_multiplicity(acc, r);
  for (const auto& u0 : *roots) {
    // common v-roots of f, fu, fv at u = u0
    Poly fs = f.set_var(uvar, u0), fus = fu.set_var(uvar, u0), fvs = fv.set_var(uvar, u0);
    UPoly cz;
    bool st = false;
    bool constraint_nonzero = false;
    for (const Poly* pp : {&fs, &fus, &fvs}) {
      UPoly u(std::max(pp->degree_in(vvar), 0) + 1, Rat(0));
      for (int k = 0; k <= pp->degree_in(vvar); ++k) {
        Poly c = pp->coeff_of(vvar, uint32_t(k));
        u[k] = c.is_zero() ? Rat(0) : c.constant_value();
      }
      u = utrim(u);
      if (udeg(u) < 0) continue;
      constraint_nonzero = true;
      if (udeg(u) == 0) { st = true; cz = {Rat(1)}; break; }
      if (!st) { cz = u; st = true; }
      else cz = ugcd(cz, u);
    }
    if (!constraint_nonzero) { rep.unresolved = true; rep.reason = "curve singular along a rule"; return rep; }
    if (!st || udeg(cz) == 0) continue;
    auto vroots = rational_roots(cz);
    if (!vroots) { rep.unresolved = true; rep.reason = "v-root extraction exceeded bounds"; return rep; }
    UPoly residual = cz;
    for (const auto& v0 : *vroots) {
      // verify and classify
      std::map<std::string, Rat> pt{{uvar, u0}, {vvar, v0}};
      for (const auto& var : f.vars())
        if (!pt.count(var)) pt[var] = Rat(0);
      if (!is_zero(f.evaluate<Rat>(pt)) || !is_zero(fu.evaluate<Rat>(pt)) || !is_zero(fv.evaluate<Rat>(pt)))
        continue;
      AffineCurveReport::SingPoint sp;
      sp.u = u0;
      sp.v = v0;
      // 2-jet at the point
      std::map<std::string, Poly> shift{{uvar, Poly::variable(uvar) + Poly(u0)}, {vvar, Poly::variable(vvar) + Poly(v0)}};
      Poly loc = f.substitute_poly(shift);
      Poly q = total_degree_part(loc, 2);
      Rat c20 = q.coeff_of(uvar, 2).is_zero() ? Rat(0) : q.coeff_of(uvar, 2).constant_value();
      Rat c02 = q.coeff_of(vvar, 2).is_zero() ? Rat(0) : q.coeff_of(vvar, 2).constant_value();
      Rat c11 = q.coeff_of(uvar, 1).coeff_of(vvar, 1).is_zero() ? Rat(0)
                                                                : q.coeff_of(uvar, 1).coeff_of(vvar, 1).constant_value();
      sp.is_node = !is_zero(c11 * c11 - 4 * c20 * c02);
      rep.points.push_back(sp);
      int m = uroot_multiplicity(residual, v0);
      for (int k = 0; k < m; ++k) {
        UPoly qq(std::max<int>(udeg(residual), 1), Rat(0));
        Rat carry(0);
        for (int i = udeg(residual); i >= 1; --i) {
          carry = residual[i] + carry * v0;
          qq[i - 1] = carry;
        }
        residual = utrim(qq);
      }
    }
    if (udeg(residual) > 0) {
      rep.unresolved = true;
      rep.reason = "irrational singular point on the curve";
      return rep;
    }
  }
  if (resolved < udeg(acc)) {
    // irrational candidate u-values remain: they may or may not be真 singular
    rep.unresolved = true;
    rep.reason = "irrational candidates unresolved";
    return rep;
  }
  rep.smooth = rep.points.empty();
  return rep;
}

CurveTypeVerdict weighted_cone_curve_test(const Poly& cone, const std::vector<std::string>& vars,
                                          const std::vector<long>& weights) {
  CurveTypeVerdict v;
  bool any_chart = false;
  bool all_smooth = true;
  int nodes = 0;
  for (size_t i = 0; i < vars.size(); ++i) {
    if (weights[i] != 1) continue;
    any_chart = true;
    Poly chart = cone.set_var(vars[i], Rat(1));
    std::vector<std::string> rest;
    for (size_t j = 0; j < vars.size(); ++j)
      if (j != i) rest.push_back(vars[j]);
    auto rep = affine_curve_singularities(chart, rest[0], rest[1]);
    if (rep.unresolved) {
      v.type = CurveType::Unresolved;
      v.reason = rep.reason;
      return v;
    }
    if (!rep.smooth) {
      all_smooth = false;
      for (const auto& p : rep.points) {
        if (!p.is_node) {
          v.type = CurveType::Other;
          v.reason = "non-nodal point in weight-one chart";
          return v;
        }
        ++nodes;
      }
    }
  }
  if (!any_chart) {
    v.type = CurveType::Unresolved;
    v.reason = "no weight-one chart";
    return v;
  }
  v.type = all_smooth ? CurveType::SmoothElliptic : CurveType::Nodal;
  v.node_count = nodes;
  if (all_smooth) v.reason = "smooth in all weight-one charts";
  return v;
}

// ---------------------------------------------------------------------------
// the local classifier

namespace {

// rotate two variables so that the line l (in span(x,y)) becomes y
Poly rotate_line_to_y(const Poly& f, const std::string& xv, const std::string& yv, const Poly& l) {
  Rat a = l.coeff_of(xv, 1).is_zero() ? Rat(0) : l.coeff_of(xv, 1).constant_value();
  Rat b = l.coeff_of(yv, 1).is_zero() ? Rat(0) : l.coeff_of(yv, 1).constant_value();
  // new y = a x + b y; choose new x independent
  // substitution: express old (x, y) in terms of new (x', y')
  std::map<std::string, Poly> sub;
  Poly X = Poly::variable(xv), Y = Poly::variable(yv);
  if (!is_zero(a)) {
    // x = (y' - b x') / a with y = x'   (new x := old y)
    sub[xv] = (Y - b * X) / a;
    sub[yv] = X;
  } else {
    // l = b y: y = y'/b, x = x'
    sub[yv] = Y / b;
    sub[xv] = X;
  }
  return f.substitute_poly(sub);
}

// weighted ray through the chart point (c1, c2) of the weight-1 chart of a
// quasihomogeneous cone: tests whether every graded piece of every partial
// of f vanishes there (equivalently f is singular along the weighted orbit)
bool singular_along_weighted_ray(const Poly& f, const std::vector<std::string>& vars,
                                 const std::vector<long>& weights, const std::map<std::string, Rat>& chart_point) {
  std::map<std::string, long> wmap;
  for (size_t i = 0; i < vars.size(); ++i) wmap[vars[i]] = weights[i];
  for (const auto& var : vars) {
    Poly p = f.derivative(var);
    if (p.is_zero()) continue;
    long lo = p.weighted_order(wmap), hi = p.weighted_degree_max(wmap);
    for (long d = lo; d <= hi; ++d) {
      Poly part = p.weighted_part(wmap, d);
      if (part.is_zero()) continue;
      std::map<std::string, Rat> pt = chart_point;
      for (const auto& v : part.vars())
        if (!pt.count(v)) pt[v] = Rat(0);
      if (!is_zero(part.evaluate<Rat>(pt))) return false;
    }
  }
  return true;
}

bool singular_along_ray_ext(const Poly& f, const std::vector<std::string>& vars, const std::vector<long>& weights,
                            const std::map<std::string, ExtElem>& chart_point) {
  std::map<std::string, long> wmap;
  for (size_t i = 0; i < vars.size(); ++i) wmap[vars[i]] = weights[i];
  for (const auto& var : vars) {
    Poly p = f.derivative(var);
    if (p.is_zero()) continue;
    long lo = p.weighted_order(wmap), hi = p.weighted_degree_max(wmap);
    for (long d = lo; d <= hi; ++d) {
      Poly part = p.weighted_part(wmap, d);
      if (part.is_zero()) continue;
      std::map<std::string, ExtElem> pt = chart_point;
      for (const auto& v : part.vars())
        if (!pt.count(v)) pt[v] = ExtElem(Rat(0));
      if (!part.evaluate<ExtElem>(pt).is_zero()) return false;
    }
  }
  return true;
}

// Cusp versus degenerate cusp: given a (weighted) cone with nodal chart
// curve, decide whether f is singular along one of the node rays.
// Returns nullopt when a node could not be located exactly.
std::optional<bool> has_singular_node_ray(const Poly& f, const std::vector<std::string>& vars,
                                          const std::vector<long>& weights) {
  for (size_t i = 0; i < vars.size(); ++i) {
    if (weights[i] != 1) continue;
    std::map<std::string, long> wmap;
    for (size_t k = 0; k < vars.size(); ++k) wmap[vars[k]] = weights[k];
    long d = f.weighted_order(wmap);
    Poly cone = f.weighted_part(wmap, d);
    Poly chart = cone.set_var(vars[i], Rat(1));
    std::vector<std::string> rest;
    for (size_t j = 0; j < vars.size(); ++j)
      if (j != i) rest.push_back(vars[j]);
    auto rep = affine_curve_singularities(chart, rest[0], rest[1]);
    if (rep.unresolved) return std::nullopt;
    for (const auto& p : rep.points) {
      std::map<std::string, Rat> pt{{rest[0], p.u}, {rest[1], p.v}, {vars[i], Rat(1)}};
      if (singular_along_weighted_ray(f, vars, weights, pt)) return true;
    }
  }
  return false;
}

SingularityType unresolved(const std::string& why) {
  SingularityType s;
  s.tag = SingTag::Unresolved;
  s.detail = why;
  return s;
}

}  // namespace

SingularityType classify_local(const Poly& f_in, const std::vector<std::string>& vars) {
  if (vars.size() != 3) throw std::invalid_argument("classify_local expects three local coordinates");
  SingularityType out;
  Poly f = f_in;
  if (f.is_zero()) return unresolved("zero equation");
  int ord = origin_order(f);
  if (ord == 0) throw std::invalid_argument("point not on the surface");
  out.multiplicity = ord;
  if (ord == 1) {
    out.tag = SingTag::NonSingular;
    return out;
  }
  if (ord >= 4) {
    out.tag = SingTag::WorseThanSLC;
    out.detail = "multiplicity >= 4";
    return out;
  }
  if (ord == 3) {
    Poly tc = total_degree_part(f, 3);
    auto cv = ordinary_curve_test(tc, vars);
    out.weights_used = {1, 1, 1};
    out.weighted_order_found = 3;
    out.cone_curve_verdict = to_string(cv.type);
    if (cv.type == CurveType::SmoothElliptic) {
      out.tag = SingTag::SimpleElliptic;
      out.elliptic = EllipticKind::E6;
      return out;
    }
    if (cv.type == CurveType::Nodal) {
      // singular ray through a node means non-isolated: degenerate cusp
      auto rep = proj_sing_points(tc, vars);
      if (rep.unresolved || !rep.finite) return unresolved("tangent-cone nodes not certified");
      bool any_ray = false, any_unknown = false;
      for (const auto& p : rep.points) {
        if (!vanishes_at_proj(tc, vars, p)) continue;
        std::vector<long> w{1, 1, 1};
        if (p.is_rational()) {
          std::map<std::string, Rat> pt;
          for (size_t i = 0; i < 3; ++i) pt[vars[i]] = p.rational[i];
          if (singular_along_weighted_ray(f, vars, w, pt)) any_ray = true;
        } else {
          std::map<std::string, ExtElem> pt;
          for (size_t i = 0; i < 3; ++i) pt[vars[i]] = p.ext[i];
          if (singular_along_ray_ext(f, vars, w, pt)) any_ray = true;
        }
      }
      (void)any_unknown;
      out.tag = any_ray ? SingTag::DegenerateCusp : SingTag::Cusp;
      out.elliptic = EllipticKind::E6;
      out.detail = any_ray ? "cone direction in the singular locus" : "isolated with nodal tangent cone";
      return out;
    }
    if (cv.type == CurveType::Other) {
      out.tag = SingTag::WorseThanSLC;
      out.detail = "tangent cone is not the cone over an ordinary curve: " + cv.reason;
      return out;
    }
    return unresolved("tangent cone curve: " + cv.reason);
  }

  // multiplicity 2
  Poly q = total_degree_part(f, 2);
  int r = quadratic_rank(q, vars);
  out.quadratic_rank = r;
  if (r == 3) {
    out.tag = SingTag::DuVal;
    out.detail = "A1";
    return out;
  }
  if (r == 2) {
    // split two squares, inspect the residual single-variable part
    // bring to alpha u^2 + beta v^2 + rest via exact diagonalization of q
    // choose coordinates: find variable with nonzero square coefficient
    Poly g = f;
    std::vector<std::string> vs = vars;
    auto sq_coeff = [&](const Poly& p, const std::string& v) {
      Poly c = p.coeff_of(v, 2);
      c = total_degree_part(c.is_zero() ? Poly() : c, 0);
      return c.is_zero() ? Rat(0) : c.constant_value();
    };
    // ensure first diagonal entry nonzero, mixing if needed
    {
      Poly q2 = total_degree_part(g, 2);
      bool have = false;
      for (const auto& v : vs)
        if (!is_zero(sq_coeff(q2, v))) have = true;
      if (!have) {
        // q is a sum of cross terms: substitute x -> x + y for a cross pair
        for (size_t i = 0; i < 3 && !have; ++i)
          for (size_t j = 0; j < 3 && !have; ++j) {
            if (i == j) continue;
            Poly c = q2.coeff_of(vs[i], 1).coeff_of(vs[j], 1);
            if (!c.is_zero()) {
              std::map<std::string, Poly> sub{{vs[i], Poly::variable(vs[i]) + Poly::variable(vs[j])}};
              g = g.substitute_poly(sub);
              have = true;
            }
          }
      }
    }
    // iterate: pick the two diagonal directions of the (rank-2) quadratic
    Poly q2 = total_degree_part(g, 2);
    std::string u1, u2, rest;
    for (const auto& v : vs)
      if (!is_zero(sq_coeff(q2, v)) && u1.empty()) u1 = v;
    // complete the square in u1 to clear its cross terms (exact: degree-2)
    {
      Rat alpha = sq_coeff(q2, u1);
      Poly cross = q2.coeff_of(u1, 1);  // linear form in the others
      std::map<std::string, Poly> sub{{u1, Poly::variable(u1) - cross / (2 * alpha)}};
      g = g.substitute_poly(sub);
      q2 = total_degree_part(g, 2);
    }
    for (const auto& v : vs)
      if (v != u1 && !is_zero(sq_coeff(q2, v)) && u2.empty()) u2 = v;
    if (u2.empty()) return unresolved("rank-2 diagonalization failed");
    {
      Rat beta = sq_coeff(q2, u2);
      Poly cross = q2.coeff_of(u2, 1);
      std::map<std::string, Poly> sub{{u2, Poly::variable(u2) - cross / (2 * beta)}};
      g = g.substitute_poly(sub);
    }
    for (const auto& v : vs)
      if (v != u1 && v != u2) rest = v;
    // now kill mixed terms u1 * h, u2 * h to bounded order
    const int CUTOFF = 12;
    bool exact = false;
    for (int round = 0; round < 40; ++round) {
      Poly c1 = g.coeff_of(u1, 1);
      Poly c2g = g.coeff_of(u2, 1);
      int o1 = c1.is_zero() ? 1000 : origin_order(c1);
      int o2 = c2g.is_zero() ? 1000 : origin_order(c2g);
      if (o1 >= CUTOFF && o2 >= CUTOFF) {
        exact = c1.is_zero() && c2g.is_zero();
        break;
      }
      if (o1 <= o2) {
        Rat alpha = sq_coeff(total_degree_part(g, 2), u1);
        Poly low = total_degree_part(c1, o1).set_var(u1, Rat(0));
        if (low.is_zero()) low = total_degree_part(c1, o1);
        std::map<std::string, Poly> sub{{u1, Poly::variable(u1) - low / (2 * alpha)}};
        g = g.substitute_poly(sub);
      } else {
        Rat beta = sq_coeff(total_degree_part(g, 2), u2);
        Poly low = total_degree_part(c2g, o2).set_var(u2, Rat(0));
        if (low.is_zero()) low = total_degree_part(c2g, o2);
        std::map<std::string, Poly> sub{{u2, Poly::variable(u2) - low / (2 * beta)}};
        g = g.substitute_poly(sub);
      }
    }
    Poly h = g.set_var(u1, Rat(0)).set_var(u2, Rat(0));
    if (h.is_zero()) {
      if (exact) {
        out.tag = SingTag::NormalCrossing;
        out.detail = "A-infinity";
        return out;
      }
      return unresolved("A-type beyond computation cutoff");
    }
    int k = origin_order(h);
    if (k >= CUTOFF) return unresolved("A-type beyond computation cutoff");
    out.tag = SingTag::DuVal;
    out.detail = "A" + std::to_string(k - 1);
    return out;
  }
  if (r != 1) return unresolved("degenerate quadratic part of rank 0");

  // rank one: normalize the double direction to a coordinate
  auto l = quadratic_rank_one_direction(q, vars);
  if (!l) return unresolved("rank-one direction not rational");
  // choose target coordinate: a variable appearing in l
  std::string zv;
  for (const auto& v : vars)
    if (l->has_var(v)) zv = v;
  // build substitution sending l to the coordinate zv: swap roles
  Poly g = f;
  {
    // linear change: zv_new = l; solve for zv_old
    Rat a = l->coeff_of(zv, 1).constant_value();
    Poly restpart = *l - a * Poly::variable(zv);
    std::map<std::string, Poly> sub{{zv, (Poly::variable(zv) - restpart) / a}};
    g = g.substitute_poly(sub);
  }
  std::vector<std::string> others;
  for (const auto& v : vars)
    if (v != zv) others.push_back(v);
  // kill the z-linear coefficient to bounded order
  const int CUTOFF = 14;
  Rat a0 = total_degree_part(g, 2).coeff_of(zv, 2).constant_value();
  for (int round = 0; round < 60; ++round) {
    Poly c1 = g.coeff_of(zv, 1);
    if (c1.is_zero()) break;
    int o = origin_order(c1);
    if (o >= CUTOFF) break;
    Poly low = total_degree_part(c1, o);
    std::map<std::string, Poly> sub{{zv, Poly::variable(zv) - low / (2 * a0)}};
    g = g.substitute_poly(sub);
  }
  Poly gz = g.coeff_of(zv, 0);  // the z-free part
  const std::string &xv0 = others[0], &yv0 = others[1];
  if (gz.is_zero()) {
    out.tag = SingTag::WorseThanSLC;
    out.detail = "non-reduced (double plane to computed order)";
    return out;
  }
  int og = origin_order(gz);
  if (og == 3) {
    Poly g3 = total_degree_part(gz, 3);
    BinForm bf;
    try {
      bf = binform_of(g3, xv0, yv0, 3);
    } catch (const std::exception&) {
      return unresolved("cubic part not binary");
    }
    // multiplicity structure of the binary cubic
    UPoly u = bf.dehomogenized();
    int infm = bf.inf_multiplicity();
    UPoly G = udeg(u) >= 1 ? ugcd(u, uderiv(u)) : UPoly{Rat(1)};
    int repeated_finite = std::max(udeg(G), 0);
    int rep_total = repeated_finite + std::max(infm - 1, 0);
    if (rep_total == 0) {
      out.tag = SingTag::DuVal;
      out.detail = "D4";
      return out;
    }
    // locate the repeated line
    Poly repline;  // in xv0, yv0
    if (infm >= 2) {
      // the root at (xv0 : yv0) = (1 : 0) corresponds to the factor yv0
      repline = Poly::variable(yv0);
    } else if (repeated_finite >= 1) {
      // roots of G are the repeated x/y values
      UPoly sq = G;
      UPoly gg = ugcd(G, uderiv(G));
      if (udeg(gg) > 0) {
        // triple root: G = l^2; take squarefree part
        sq = gg;
      }
      if (udeg(sq) != 1) return unresolved("repeated line not rational");
      // root r: line x - r y
      Rat rr = -sq[0] / sq[1];
      repline = Poly::variable(xv0) - rr * Poly::variable(yv0);
    }
    bool is_cube = (rep_total >= 2) || infm >= 3;
    // rotate so the repeated line becomes the y-coordinate
    Poly grot = rotate_line_to_y(g, xv0, yv0, repline);
    Poly gzrot = grot.coeff_of(zv, 0);
    if (!is_cube) {
      // square times distinct line: pinch point when g = y^2 * h with
      // dh/dx(0) nonzero
      auto quot = Poly::exact_divide(gzrot, Poly::variable(yv0) * Poly::variable(yv0));
      if (quot) {
        Poly lin = total_degree_part(*quot, 1);
        Rat cx = lin.coeff_of(xv0, 1).is_zero() ? Rat(0) : lin.coeff_of(xv0, 1).constant_value();
        if (!is_zero(cx)) {
          out.tag = SingTag::PinchPoint;
          out.detail = "D-infinity";
          return out;
        }
        return unresolved("double line with degenerate transverse direction");
      }
      // residual pure-x part bounds a D-type Du Val point
      Poly purex = gzrot.set_var(yv0, Rat(0));
      if (!purex.is_zero()) {
        int m = origin_order(purex);
        out.tag = SingTag::DuVal;
        out.detail = "D" + std::to_string(m + 1);
        return out;
      }
      return unresolved("degenerate double-line structure");
    }
    // cube branch: weights z=3, y=2, x=1
    std::map<std::string, long> w8{{zv, 3}, {yv0, 2}, {xv0, 1}};
    long o8 = grot.weighted_order(w8);
    out.weights_used = {3, 2, 1};
    out.weighted_order_found = o8;
    if (o8 < 6) return unresolved("cube family with weighted order < 6");
    Poly cone = grot.weighted_part(w8, 6);
    auto cv = weighted_cone_curve_test(cone, {zv, yv0, xv0}, {3, 2, 1});
    out.cone_curve_verdict = to_string(cv.type);
    if (cv.type == CurveType::SmoothElliptic) {
      out.tag = SingTag::SimpleElliptic;
      out.elliptic = EllipticKind::E8;
      return out;
    }
    if (cv.type == CurveType::Nodal) {
      auto ray = has_singular_node_ray(grot, {zv, yv0, xv0}, {3, 2, 1});
      if (!ray) return unresolved("node ray not certified");
      out.tag = *ray ? SingTag::DegenerateCusp : SingTag::Cusp;
      out.elliptic = EllipticKind::E8;
      return out;
    }
    if (cv.type == CurveType::Other) {
      out.tag = SingTag::WorseThanSLC;
      out.detail = "weighted tangent cone not ordinary: " + cv.reason;
      return out;
    }
    return unresolved("weighted cone curve: " + cv.reason);
  }
  if (og == 4) {
    std::map<std::string, long> w7{{zv, 2}, {xv0, 1}, {yv0, 1}};
    long o7 = g.weighted_order(w7);
    out.weights_used = {2, 1, 1};
    out.weighted_order_found = o7;
    if (o7 < 4) return unresolved("unexpected weighted order below 4");
    Poly cone = g.weighted_part(w7, 4);
    auto cv = weighted_cone_curve_test(cone, {zv, xv0, yv0}, {2, 1, 1});
    out.cone_curve_verdict = to_string(cv.type);
    if (cv.type == CurveType::SmoothElliptic) {
      out.tag = SingTag::SimpleElliptic;
      out.elliptic = EllipticKind::E7;
      return out;
    }
    if (cv.type == CurveType::Nodal) {
      auto ray = has_singular_node_ray(g, {zv, xv0, yv0}, {2, 1, 1});
      if (!ray) return unresolved("node ray not certified");
      out.tag = *ray ? SingTag::DegenerateCusp : SingTag::Cusp;
      out.elliptic = EllipticKind::E7;
      return out;
    }
    if (cv.type == CurveType::Other) {
      if (gz.degree() <= 4) {
        out.tag = SingTag::WorseThanSLC;
        out.detail = "weighted tangent cone not ordinary: " + cv.reason;
        return out;
      }
      return unresolved("cone curve not ordinary and residual beyond quartic");
    }
    return unresolved("weighted cone curve: " + cv.reason);
  }
  return unresolved("double point with vanishing 3- and 4-jet residual");
}

SingularityType classify_at_point(const Poly& F, const Space& sp, const Point& p) {
  auto [f, avars] = local_equation(F, sp, p);
  if (!f.is_zero() && origin_order(f) == 0) throw std::invalid_argument("point not on the surface");
  return classify_local(f, avars);
}

// ---------------------------------------------------------------------------
// curve-ideal square membership

TwistedCubicFrame TwistedCubicFrame::standard() {
  Poly x = Poly::variable("x"), y = Poly::variable("y"), z = Poly::variable("z"), t = Poly::variable("t");
  return {x * z - y * y, x * t - y * z, y * t - z * z};
}

CurveSquareness double_along_line(const Poly& F, const LineIdeal& line) {
  CurveSquareness out;
  // greedily peel F = A v1^2 + B v1 v2 + C v2^2 by exact division
  Poly rem = F;
  Poly v1 = line.v1, v2 = line.v2;
  Poly A, B, C;
  // A: all of rem divisible by v1^2
  auto peel = [&](const Poly& g) -> Poly {
    // largest multiple: use division of the full remainder and keep quotient
    auto q = Poly::exact_divide(rem, g);
    if (q) {
      rem = Poly();
      return *q;
    }
    return Poly();
  };
  (void)peel;
  // work coefficient-wise when the line is coordinate (common case V(y,z));
  // otherwise substitute coordinates
  if (v1.degree() == 1 && v2.degree() == 1 && v1.term_count() == 1 && v2.term_count() == 1) {
    std::string y = v1.vars()[0], z = v2.vars()[0];
    for (const auto& [e, c] : F.terms()) {
      uint32_t ey = 0, ez = 0;
      for (size_t i = 0; i < F.vars().size(); ++i) {
        if (F.vars()[i] == y) ey = e[i];
        if (F.vars()[i] == z) ez = e[i];
      }
      Poly mono = Poly::monomial(F.vars(), e, c);
      if (ey >= 2)
        A += *Poly::exact_divide(mono, v1 * v1);
      else if (ey == 1 && ez >= 1)
        B += *Poly::exact_divide(mono, v1 * v2);
      else if (ez >= 2)
        C += *Poly::exact_divide(mono, v2 * v2);
      else {
        out.holds = false;
        return out;
      }
    }
    out.holds = true;
    out.decomposition = {A, B, C};
    return out;
  }
  // general line: reduce to the coordinate case by a linear change
  throw std::invalid_argument("double_along_line expects coordinate linear forms");
}

CurveSquareness double_along_conic(const Poly& F, const ConicIdeal& conic) {
  CurveSquareness out;
  const Poly& t = conic.plane;
  const Poly& q = conic.quadric;
  // F = a q^2 + b t q + c t^2: match by successive exact division
  // set t = 0 (requires t to be a coordinate) or work generally:
  // solve a from F mod t proportional to q^2 mod t
  // general approach: a is the unique scalar with (F - a q^2) in (t)
  // try candidates: a = coefficient comparison on a monomial of q^2 not in (t)
  // use linear algebra: F - a q^2 - b t q - c t^2 = 0 over unknown scalar a,
  // linear b, quadratic c
  std::vector<std::string> vars;
  {
    std::set_union(F.vars().begin(), F.vars().end(), q.vars().begin(), q.vars().end(), std::back_inserter(vars));
    std::vector<std::string> vars2;
    std::set_union(vars.begin(), vars.end(), t.vars().begin(), t.vars().end(), std::back_inserter(vars2));
    vars = vars2;
  }
  // unknowns: a (1), b over linear monomials, c over quadratic monomials
  std::vector<Poly> bbasis, cbasis;
  for (const auto& v : vars) bbasis.push_back(Poly::variable(v));
  for (size_t i = 0; i < vars.size(); ++i)
    for (size_t j = i; j < vars.size(); ++j) cbasis.push_back(Poly::variable(vars[i]) * Poly::variable(vars[j]));
  std::vector<Poly> gens;
  gens.push_back(q * q);
  for (auto& b : bbasis) gens.push_back(t * q * b);
  for (auto& c : cbasis) gens.push_back(t * t * c);
  // solve F = sum x_i gens_i
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
    for (size_t i = 0; i < p.vars().size(); ++i) {
      size_t j = 0;
      while (j < vars.size() && vars[j] != p.vars()[i]) ++j;
      pos[i] = j;
    }
    for (const auto& [e, c] : p.terms()) {
      Expo full(vars.size(), 0);
      for (size_t i = 0; i < e.size(); ++i) full[pos[i]] = e[i];
      cols[col].push_back({row_of(full), c});
    }
  };
  for (size_t i = 0; i < gens.size(); ++i) embed(gens[i], i);
  embed(F, gens.size());
  MatQ mat(rows.size(), std::vector<Rat>(gens.size(), Rat(0)));
  std::vector<Rat> rhs(rows.size(), Rat(0));
  for (size_t c = 0; c < gens.size(); ++c)
    for (auto& [r, v] : cols[c]) mat[r][c] += v;
  for (auto& [r, v] : cols[gens.size()]) rhs[r] += v;
  auto sol = solve(std::move(mat), std::move(rhs));
  if (!sol) {
    out.holds = false;
    return out;
  }
  // rebuild a, b, c
  Poly a{Rat((*sol)[0])};
  Poly b, c;
  for (size_t i = 0; i < bbasis.size(); ++i) b += (*sol)[1 + i] * bbasis[i];
  for (size_t i = 0; i < cbasis.size(); ++i) c += (*sol)[1 + bbasis.size() + i] * cbasis[i];
  out.holds = true;
  out.decomposition = {a, b, c};
  return out;
}

CurveSquareness double_along_twisted_cubic(const Poly& F, const TwistedCubicFrame& frame) {
  CurveSquareness out;
  std::vector<Poly> gens = {frame.xi1 * frame.xi1, frame.xi1 * frame.xi2, frame.xi1 * frame.xi3,
                            frame.xi2 * frame.xi2, frame.xi2 * frame.xi3, frame.xi3 * frame.xi3};
  std::vector<std::string> vars = {"t", "x", "y", "z"};
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
    for (size_t i = 0; i < p.vars().size(); ++i) {
      size_t j = 0;
      while (j < vars.size() && vars[j] != p.vars()[i]) ++j;
      if (j == vars.size()) throw std::invalid_argument("unexpected variable in twisted-cubic test");
      pos[i] = j;
    }
    for (const auto& [e, c] : p.terms()) {
      Expo full(vars.size(), 0);
      for (size_t i = 0; i < e.size(); ++i) full[pos[i]] = e[i];
      cols[col].push_back({row_of(full), c});
    }
  };
  for (size_t i = 0; i < gens.size(); ++i) embed(gens[i], i);
  embed(F, gens.size());
  MatQ mat(rows.size(), std::vector<Rat>(gens.size(), Rat(0)));
  std::vector<Rat> rhs(rows.size(), Rat(0));
  for (size_t c = 0; c < gens.size(); ++c)
    for (auto& [r, v] : cols[c]) mat[r][c] += v;
  for (auto& [r, v] : cols[gens.size()]) rhs[r] += v;
  auto sol = solve(std::move(mat), std::move(rhs));
  if (!sol) {
    out.holds = false;
    return out;
  }
  // verify (solve() zeroes free vars; here the system is determined)
  Poly recon;
  for (size_t i = 0; i < gens.size(); ++i) recon += (*sol)[i] * gens[i];
  if (!(recon - F).is_zero()) {
    out.holds = false;
    return out;
  }
  out.holds = true;
  out.frame_coefficients = *sol;
  return out;
}

// ---------------------------------------------------------------------------
// pinch and cusp scan

CurveTypeVerdict double_cover_curve_type(const BinForm& disc) {
  CurveTypeVerdict v;
  if (disc.is_zero()) {
    v.type = CurveType::Other;
    v.reason = "identically degenerate branch form";
    return v;
  }
  auto spec = binform_mult_spectrum(disc);
  if (spec.squarefree) {
    v.type = CurveType::SmoothElliptic;
    return v;
  }
  if (spec.max_multiplicity == 2) {
    v.type = CurveType::Nodal;
    return v;
  }
  v.type = CurveType::Other;
  v.reason = "branch point of multiplicity >= 3";
  return v;
}

PinchCuspReport pinch_and_cusp_scan(const Poly& F, const Space& sp) {
  PinchCuspReport rep;
  // normal-direction quadratic along V(y,z): the (y,z)-degree-2 part
  std::map<std::string, long> w{{"y", 1}, {"z", 1}};
  Poly p2 = F.weighted_part(w, 2);
  Poly A = p2.coeff_of("y", 2), B = p2.coeff_of("y", 1).coeff_of("z", 1), C = p2.coeff_of("z", 2);
  Poly disc_poly = B * B - Rat(4) * (A * C);
  if (disc_poly.is_zero()) {
    rep.identically_degenerate = true;
    rep.double_curve.type = CurveType::Other;
    rep.double_curve.reason = "identically degenerate normal quadratic";
    return rep;
  }
  rep.discriminant = binform_of(disc_poly, "t", "x", 4);
  rep.double_curve = double_cover_curve_type(rep.discriminant);
  auto roots = binform_roots(rep.discriminant);
  rep.complete_over_Q = roots.complete_over_Q && roots.residual_degree == 0;
  auto rank_at = [&](const Rat& t0, const Rat& x0) {
    // normal quadratic at the line point (t0 : x0)
    std::map<std::string, Rat> pt{{"t", t0}, {"x", x0}};
    auto ev = [&](const Poly& p) {
      std::map<std::string, Rat> a = pt;
      for (const auto& v : p.vars())
        if (!a.count(v)) a[v] = Rat(0);
      return p.is_zero() ? Rat(0) : p.evaluate<Rat>(a);
    };
    Rat av = ev(A), bv = ev(B), cv = ev(C);
    if (is_zero(av) && is_zero(bv) && is_zero(cv)) return 0;
    if (is_zero(bv * bv - 4 * av * cv)) return 1;
    return 2;
  };
  for (const auto& r : roots.roots) {
    Rat t0 = r.at_infinity ? Rat(1) : r.value;
    Rat x0 = r.at_infinity ? Rat(0) : Rat(1);
    if (r.multiplicity == 1) {
      if (r.at_infinity)
        rep.pinch_at_infinity = true;
      else
        rep.pinch_points.push_back(r.value);
    } else {
      PinchCuspReport::DegenerateLocus d;
      d.parameter = r.value;
      d.at_infinity = r.at_infinity;
      d.multiplicity = r.multiplicity;
      d.triple_point = rank_at(t0, x0) == 0;
      rep.degenerate_loci.push_back(d);
    }
  }
  return rep;
}

// ---------------------------------------------------------------------------
// quadric pencils

static MatQ quadric_matrix(const Poly& q, const std::vector<std::string>& vars) {
  size_t n = vars.size();
  MatQ m(n, std::vector<Rat>(n, Rat(0)));
  for (size_t i = 0; i < n; ++i)
    for (size_t j = 0; j < n; ++j) {
      Poly c = i == j ? q.coeff_of(vars[i], 2) : q.coeff_of(vars[i], 1).coeff_of(vars[j], 1);
      Rat val = c.is_zero() ? Rat(0) : c.constant_value();
      m[i][j] = i == j ? val : val / 2;
    }
  return m;
}

CurveTypeVerdict quadric_pencil_curve_type(const Poly& q1, const Poly& q2, const Space& sp) {
  CurveTypeVerdict v;
  auto vars = sp.all_vars();
  MatQ A = quadric_matrix(q1, vars), B = quadric_matrix(q2, vars);
  // det(s A + u B) as a binary quartic
  Poly s = Poly::variable("s"), u = Poly::variable("u");
  std::vector<std::vector<Poly>> M(vars.size(), std::vector<Poly>(vars.size()));
  for (size_t i = 0; i < vars.size(); ++i)
    for (size_t j = 0; j < vars.size(); ++j) M[i][j] = A[i][j] * s + B[i][j] * u;
  Poly det = poly_matrix_det(std::move(M));
  if (det.is_zero()) {
    v.type = CurveType::Other;
    v.reason = "degenerate pencil (vanishing discriminant)";
    return v;
  }
  BinForm disc = binform_of(det, "s", "u", int(vars.size()));
  auto spec = binform_mult_spectrum(disc);
  if (spec.squarefree) {
    v.type = CurveType::SmoothElliptic;
    return v;
  }
  if (spec.max_multiplicity > 2) {
    v.type = CurveType::Other;
    v.reason = "pencil member of multiplicity >= 3";
    return v;
  }
  // all multiple roots are double; require rank 3 at each for nodes
  auto roots = binform_roots(disc);
  if (!roots.complete_over_Q || roots.residual_degree > 0) {
    // double roots may be irrational: try the quadratic-extension rank
    UPoly dh = disc.dehomogenized();
    UPoly G = ugcd(dh, uderiv(dh));
    if (udeg(G) == 2) {
      UPoly mm = umonic(G);
      auto ctx = ExtContext::make("rho", {mm[0], mm[1]});
      ExtElem rho = ExtElem::generator(ctx);
      MatT<ExtElem> mat(vars.size(), std::vector<ExtElem>(vars.size(), ExtElem(Rat(0))));
      for (size_t i = 0; i < vars.size(); ++i)
        for (size_t j = 0; j < vars.size(); ++j) mat[i][j] = ExtElem(A[i][j]) * rho + ExtElem(B[i][j]);
      size_t rk = rank(std::move(mat));
      if (rk == 3) {
        v.type = CurveType::Nodal;
        v.node_count = 2;
        return v;
      }
      v.type = CurveType::Other;
      v.reason = "pencil degeneration of low rank";
      return v;
    }
    v.type = CurveType::Unresolved;
    v.reason = "pencil double roots beyond supported extensions";
    return v;
  }
  int nodes = 0;
  for (const auto& r : roots.roots) {
    if (r.multiplicity != 2) continue;
    MatQ mat(vars.size(), std::vector<Rat>(vars.size(), Rat(0)));
    Rat s0 = r.at_infinity ? Rat(1) : r.value;
    Rat u0 = r.at_infinity ? Rat(0) : Rat(1);
    for (size_t i = 0; i < vars.size(); ++i)
      for (size_t j = 0; j < vars.size(); ++j) mat[i][j] = A[i][j] * s0 + B[i][j] * u0;
    if (rank(std::move(mat)) != 3) {
      v.type = CurveType::Other;
      v.reason = "pencil degeneration of low rank";
      return v;
    }
    ++nodes;
  }
  v.type = CurveType::Nodal;
  v.node_count = nodes;
  return v;
}

// ---------------------------------------------------------------------------
// coregularity

CoregularityResult coregularity(const CoregularityInput& in) {
  CoregularityResult res;
  if (!in.inventory_complete) {
    res.reason = "witnesses insufficient";
    return res;
  }
  for (const auto& p : in.points) {
    if (p.tag == SingTag::Unresolved) {
      res.reason = "unresolved singular point: " + p.detail;
      return res;
    }
    if (p.tag == SingTag::WorseThanSLC) {
      res.reason = "not semi-log canonical";
      return res;
    }
  }
  for (const auto& c : in.lc_curves)
    if (c.type == CurveType::Unresolved) {
      res.reason = "unresolved log canonical centre curve: " + c.reason;
      return res;
    } else if (c.type == CurveType::Other) {
      res.reason = "log canonical centre curve not ordinary";
      return res;
    }
  bool coreg0 = in.has_triple_intersection_point;
  for (const auto& p : in.points)
    coreg0 = coreg0 || p.tag == SingTag::Cusp || p.tag == SingTag::DegenerateCusp;
  for (const auto& c : in.lc_curves) coreg0 = coreg0 || c.type == CurveType::Nodal;
  if (coreg0) {
    res.value = 0;
    return res;
  }
  bool strict = !in.lc_curves.empty();
  for (const auto& p : in.points) strict = strict || p.strictly_lc();
  if (strict) {
    res.value = 1;
    return res;
  }
  res.value = 2;
  return res;
}

}  // namespace lcy
