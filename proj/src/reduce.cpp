#include "lcy/reduce.hpp"

#include <random>

namespace lcy {

namespace {

Poly pvar(const std::string& v) { return Poly::variable(v); }

Space W1_space() { return Space::weighted("P(1,1,2,3)", {"y", "z", "u", "v"}, {1, 1, 2, 3}); }
Space W2_space() { return Space::weighted("P(1,1,1,2)", {"x", "y", "z", "u"}, {1, 1, 1, 2}); }

// append one certified chain link
void add_link(StepResult& res, const RatMap& m, const LogPair& src, const LogPair& tgt) {
  res.chain.push_back(ChainStepT<Rat>{m, src, tgt});
}

void certify(StepResult& res) {
  if (res.chain.empty()) {
    res.verdict.overall.status = VPStatus::VolumePreserving;
    res.verdict.overall.scalar = Rat(1);
    return;
  }
  res.verdict = certify_chain(res.chain);
}

// linear self-map of a space given by the matrix of new coordinates in terms
// of old ones; the boundary moves along (F -> F . A^{-1})
RatMap change_map(const Space& sp, const MatQ& rows) {
  auto vars = sp.all_vars();
  std::vector<Poly> comps;
  for (size_t i = 0; i < vars.size(); ++i) {
    Poly c;
    for (size_t j = 0; j < vars.size(); ++j)
      if (!is_zero(rows[i][j])) c += rows[i][j] * pvar(vars[j]);
    comps.push_back(c);
  }
  return make_map(sp, sp, std::move(comps));
}

MatQ mat_inverse4(const MatQ& m) {
  size_t n = m.size();
  MatQ a = m;
  for (size_t i = 0; i < n; ++i)
    for (size_t j = 0; j < n; ++j) a[i].push_back(i == j ? Rat(1) : Rat(0));
  rref(a);
  MatQ inv(n, std::vector<Rat>(n));
  for (size_t i = 0; i < n; ++i) {
    if (is_zero(a[i][i])) throw std::invalid_argument("singular change of coordinates");
    for (size_t j = 0; j < n; ++j) inv[i][j] = a[i][j + n];
  }
  return inv;
}

// transform F by the change with rows R (new = R old): the moved polynomial
// is F . R^{-1}
Poly move_poly(const Space& sp, const Poly& f, const MatQ& rows) {
  MatQ inv = mat_inverse4(rows);
  auto vars = sp.all_vars();
  std::map<std::string, Poly> sub;
  for (size_t i = 0; i < vars.size(); ++i) {
    Poly s;
    for (size_t j = 0; j < vars.size(); ++j)
      if (!is_zero(inv[i][j])) s += inv[i][j] * pvar(vars[j]);
    sub[vars[i]] = s;
  }
  return f.substitute_poly(sub);
}

Point move_point(const MatQ& rows, const Point& p) {
  Point q(p.size(), Rat(0));
  for (size_t i = 0; i < p.size(); ++i)
    for (size_t j = 0; j < p.size(); ++j) q[i] += rows[i][j] * p[j];
  return q;
}

// image of a point under a rational map (throws if in the base locus)
Point push_point(const RatMap& m, const Point& p) {
  auto a = point_assignment(m.source, p);
  Point out;
  bool all_zero = true;
  for (const auto& c : m.components) {
    std::map<std::string, Rat> full = a;
    for (const auto& v : c.vars())
      if (!full.count(v)) full[v] = Rat(0);
    Rat val = c.is_zero() ? Rat(0) : c.evaluate<Rat>(full);
    all_zero = all_zero && is_zero(val);
    out.push_back(val);
  }
  if (all_zero) throw std::invalid_argument("point maps into the base locus");
  return out;
}

// change of coordinates moving p to (1,0,...,0) (weight-one spaces)
MatQ move_point_to_origin(const Space& sp, const Point& p) {
  size_t n = p.size();
  // first row: a form with value 1 at p; rest: forms vanishing at p
  MatQ rows;
  // find a coordinate with nonzero value
  size_t piv = 0;
  while (piv < n && is_zero(p[piv])) ++piv;
  if (piv == n) throw std::invalid_argument("zero point");
  {
    std::vector<Rat> r(n, Rat(0));
    r[piv] = Rat(1) / p[piv];
    rows.push_back(r);
  }
  MatQ m(1, std::vector<Rat>(n));
  for (size_t i = 0; i < n; ++i) m[0][i] = p[i];
  for (const auto& v : nullspace(m)) rows.push_back(v);
  if (rows.size() != n) throw std::invalid_argument("degenerate point move");
  return rows;
}

// split a boundary polynomial by a known factor; throws when not exact
std::pair<Poly, Poly> split_by(const Poly& total, const Poly& factor) {
  auto q = Poly::exact_divide(total, factor);
  if (!q) throw std::runtime_error("target boundary does not split along the expected component");
  return {factor, *q};
}

Poly normalize_int(const Poly& f) {
  Poly g = f / rat_content(f);
  if (g.leading_coeff() < 0) g = -g;
  return g;
}

FamilyInstance instance_of(const LogPair& pair, FamilyTag tag, std::vector<Witness> ws, bool nodal) {
  FamilyInstance out;
  out.pair = pair;
  out.tag = tag;
  out.witnesses = std::move(ws);
  out.nodal_flavor = nodal;
  return out;
}

// forward the point-style witnesses through a map (dropping those that die)
std::vector<Witness> push_point_witnesses(const RatMap& m, const std::vector<Witness>& ws) {
  std::vector<Witness> out;
  for (const auto& w : ws) {
    if (std::holds_alternative<PointW>(w)) {
      try {
        out.push_back(PointW{push_point(m, std::get<PointW>(w).coords)});
      } catch (const std::exception&) {
      }
    }
  }
  return out;
}

// rational points of a plane (for image-quadric interpolation)
std::vector<Point> plane_points(const Space& sp, const Poly& plane, size_t count, uint64_t seed) {
  std::mt19937_64 rng(seed);
  auto vars = sp.all_vars();
  MatQ m(1, std::vector<Rat>(vars.size(), Rat(0)));
  for (size_t i = 0; i < vars.size(); ++i) {
    Poly c = plane.coeff_of(vars[i], 1);
    m[0][i] = c.is_zero() ? Rat(0) : c.constant_value();
  }
  auto basis = nullspace(std::move(m));
  std::vector<Point> out;
  for (int guard = 0; guard < 500 && out.size() < count; ++guard) {
    Point p(vars.size(), Rat(0));
    for (const auto& b : basis) {
      Rat c = random_rat(rng, 7);
      for (size_t i = 0; i < p.size(); ++i) p[i] += c * b[i];
    }
    bool zero = true;
    for (auto& c : p) zero = zero && is_zero(c);
    if (!zero) out.push_back(p);
  }
  return out;
}

// interpolate the quadric through given points (expects a 1-dim solution)
std::optional<Poly> quadric_through_points(const Space& sp, const std::vector<Point>& pts) {
  auto basis = monomial_basis(sp, 2);
  MatQ m;
  for (const auto& p : pts) {
    std::vector<Rat> row;
    for (const auto& b : basis) row.push_back(evaluate_at(b, sp, p));
    m.push_back(std::move(row));
  }
  auto ns = nullspace(std::move(m));
  if (ns.size() != 1) return std::nullopt;
  Poly q;
  for (size_t i = 0; i < basis.size(); ++i)
    if (!is_zero(ns[0][i])) q += ns[0][i] * basis[i];
  return normalize_int(q);
}

// the quadric through a parameterized family of curves
std::optional<Poly> quadric_through_curves(const Space& sp, const std::vector<CurveParam>& curves) {
  auto basis = monomial_basis(sp, 2);
  auto vars = sp.all_vars();
  MatQ m;
  for (const auto& c : curves) {
    std::map<std::string, Poly> a;
    for (size_t i = 0; i < vars.size(); ++i) a[vars[i]] = c.components[i];
    std::vector<std::vector<Rat>> rows;
    size_t nrows = 0;
    std::vector<Poly> images;
    for (const auto& b : basis) images.push_back(b.substitute_poly(a));
    int ds = 0, du = 0;
    for (const auto& im : images) {
      ds = std::max(ds, im.degree_in("s"));
      du = std::max(du, im.degree_in("u"));
    }
    for (int i = 0; i <= ds; ++i)
      for (int j = 0; j <= du; ++j) {
        std::vector<Rat> row;
        bool nonzero = false;
        for (const auto& im : images) {
          Poly cc = im.coeff_of("s", i).coeff_of("u", j);
          Rat v = cc.is_zero() ? Rat(0) : cc.constant_value();
          nonzero = nonzero || !is_zero(v);
          row.push_back(v);
        }
        if (nonzero) m.push_back(std::move(row)), ++nrows;
      }
    (void)nrows;
  }
  auto ns = nullspace(std::move(m));
  if (ns.size() != 1) return std::nullopt;
  Poly q;
  for (size_t i = 0; i < basis.size(); ++i)
    if (!is_zero(ns[0][i])) q += ns[0][i] * basis[i];
  return normalize_int(q);
}

// image of a line: the span of the images of two (validated three) points
std::optional<CurveParam> push_line(const RatMap& m, const CurveParam& line, uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::vector<Point> imgs;
  for (int guard = 0; guard < 200 && imgs.size() < 3; ++guard) {
    Rat s = random_rat(rng, 9), u = random_rat(rng, 9, 2);
    Point p = line.at(s, u);
    bool zero = true;
    for (auto& c : p) zero = zero && is_zero(c);
    if (zero) continue;
    try {
      Point q = push_point(m, p);
      bool dup = false;
      for (const auto& prev : imgs) {
        MatQ mm{std::vector<Rat>(prev.begin(), prev.end()), std::vector<Rat>(q.begin(), q.end())};
        if (rank(std::move(mm)) < 2) dup = true;
      }
      if (!dup) imgs.push_back(q);
    } catch (const std::exception&) {
    }
  }
  if (imgs.size() < 3) return std::nullopt;
  // the three images must be collinear for a genuine line image
  MatQ mm{std::vector<Rat>(imgs[0].begin(), imgs[0].end()), std::vector<Rat>(imgs[1].begin(), imgs[1].end()),
          std::vector<Rat>(imgs[2].begin(), imgs[2].end())};
  if (rank(std::move(mm)) != 2) return std::nullopt;
  return line_through(imgs[0], imgs[1]);
}

// A4-shape extraction: F = mu1 (tz+x^2)^2 + mu2 t y^3 + (2 a1 x + b2)(tz+x^2)
//                        + c2 x^2 + d3 x + e4
struct DoubleDirShape {
  Rat mu1, mu2;
  Poly a1, b2, c2, d3, e4;  // in y, z
};

std::optional<DoubleDirShape> extract_double_dir_shape(const Poly& F) {
  DoubleDirShape s;
  Poly t = pvar("t"), x = pvar("x"), y = pvar("y"), z = pvar("z");
  Poly t2 = F.coeff_of("t", 2);
  // t^2 part: mu1 z^2
  Poly m1 = t2.coeff_of("z", 2);
  if (!m1.is_constant()) return std::nullopt;
  s.mu1 = m1.is_zero() ? Rat(0) : m1.constant_value();
  if ((t2 - s.mu1 * z * z).is_zero() == false) return std::nullopt;
  Poly t1 = F.coeff_of("t", 1);
  // t part: 2 mu1 z x^2 + mu2 y^3 + (2 a1 x + b2) z
  Poly m2 = t1.coeff_of("y", 3);
  if (!m2.is_constant()) return std::nullopt;
  s.mu2 = m2.is_zero() ? Rat(0) : m2.constant_value();
  Poly rest1 = t1 - Rat(2) * s.mu1 * z * x * x - s.mu2 * y.pow(3);
  auto overz = Poly::exact_divide(rest1, z);
  if (!overz) return std::nullopt;
  Poly two_a1 = overz->coeff_of("x", 1);
  if (overz->degree_in("x") > 1) return std::nullopt;
  s.a1 = two_a1 / Rat(2);
  s.b2 = overz->coeff_of("x", 0);
  if (s.a1.has_var("t") || s.a1.has_var("x") || s.b2.has_var("t") || s.b2.has_var("x")) return std::nullopt;
  // t^0 part: mu1 x^4 + (2 a1 x + b2) x^2 + c2 x^2 + d3 x + e4
  Poly t0 = F.coeff_of("t", 0);
  Poly rest0 = t0 - s.mu1 * x.pow(4) - (Rat(2) * s.a1 * x + s.b2) * x * x;
  if (rest0.degree_in("x") > 2) return std::nullopt;
  s.c2 = rest0.coeff_of("x", 2);
  s.d3 = rest0.coeff_of("x", 1);
  s.e4 = rest0.coeff_of("x", 0);
  return s;
}

// B1-shape coefficients A, B, C with F = A y^2 + B yz + C z^2 (A, B, C free
// of y and z is not required here)
std::optional<std::array<Poly, 3>> extract_double_line_shape(const Poly& F) {
  auto sq = double_along_line(F, {pvar("y"), pvar("z")});
  if (!sq.holds) return std::nullopt;
  return std::array<Poly, 3>{sq.decomposition[0], sq.decomposition[1], sq.decomposition[2]};
}

// the plane factor and the other factor of a two-component pair
std::optional<std::pair<Poly, Poly>> plane_and_rest(const LogPair& pair) {
  for (size_t i = 0; i < pair.boundary.size(); ++i) {
    auto d = multidegree(pair.space, pair.boundary[i]);
    if (d && (*d)[0] == 1) {
      Poly rest(Rat(1));
      for (size_t j = 0; j < pair.boundary.size(); ++j)
        if (j != i) rest *= pair.boundary[j];
      return std::make_pair(pair.boundary[i], rest);
    }
  }
  return std::nullopt;
}

const LineOnSurfaceW* find_line_witness(const std::vector<Witness>& ws, size_t skip = 0) {
  size_t seen = 0;
  for (const auto& w : ws)
    if (std::holds_alternative<LineOnSurfaceW>(w)) {
      if (seen++ == skip) return &std::get<LineOnSurfaceW>(w);
    }
  return nullptr;
}

const PointW* find_point_witness(const std::vector<Witness>& ws, size_t skip = 0) {
  size_t seen = 0;
  for (const auto& w : ws)
    if (std::holds_alternative<PointW>(w)) {
      if (seen++ == skip) return &std::get<PointW>(w);
    }
  return nullptr;
}

}  // namespace

// ---------------------------------------------------------------------------
// discriminant of the conic bundle

Poly double_direction_wform(const Poly& a1, const Poly& b2, const Poly& c2, const Poly& d3, const Poly& e4) {
  Poly u = pvar("u"), v = pvar("v"), w = pvar("w"), y = pvar("y"), z = pvar("z");
  return z.pow(4) * u * u + Rat(2) * a1 * z.pow(3) * u * v + (y.pow(3) + b2 * z) * z * u * w +
         (c2 * z - y.pow(3)) * z * v * v + d3 * z * v * w + e4 * w * w;
}

Poly conic_discriminant(const Poly& wform) {
  // symmetric matrix of the quadratic form in (u, v, w); discriminant is
  // 4 det = 4ADF + BCE - A E^2 - D C^2 - F B^2
  Poly A = wform.coeff_of("u", 2);
  Poly D = wform.coeff_of("v", 2);
  Poly F = wform.coeff_of("w", 2);
  Poly B = wform.coeff_of("u", 1).coeff_of("v", 1);
  Poly C = wform.coeff_of("u", 1).coeff_of("w", 1);
  Poly E = wform.coeff_of("v", 1).coeff_of("w", 1);
  return Rat(4) * (A * D * F) + B * C * E - A * E * E - D * C * C - F * B * B;
}

// ---------------------------------------------------------------------------
// step (x): triple point

StepResult step_x_triple_point(const FamilyInstance& inst) {
  StepResult res;
  res.tag = "x";
  res.source = inst;
  Space P3 = inst.pair.space;
  Poly t = pvar("t"), x = pvar("x"), y = pvar("y"), z = pvar("z");
  const PointW* pw = find_point_witness(inst.witnesses);
  if (!pw) throw std::invalid_argument("triple-point step needs a point witness");
  LogPair cur = inst.pair;
  std::vector<Witness> riders(inst.witnesses.begin(), inst.witnesses.end());
  // move the witness to (1,0,0,0)
  MatQ rows = move_point_to_origin(P3, pw->coords);
  bool is_id = true;
  for (size_t i = 0; i < rows.size(); ++i)
    for (size_t j = 0; j < rows.size(); ++j) is_id = is_id && rows[i][j] == (i == j ? Rat(1) : Rat(0));
  Poly F = cur.boundary_product();
  if (!is_id) {
    RatMap mv = change_map(P3, mat_inverse4(rows));  // map with target boundary = moved F
    Poly F2 = normalize_int(move_poly(P3, F, rows));
    LogPair moved = make_pair(P3, {F2});
    add_link(res, mv, cur, moved);
    cur = moved;
    F = F2;
  }
  if (F.degree_in("t") > 1) throw std::invalid_argument("witness does not exhibit triple point");
  Poly a3 = F.coeff_of("t", 1);
  Poly b4 = F.coeff_of("t", 0);
  if (a3.is_zero()) throw std::invalid_argument("witness does not exhibit triple point");
  if (b4.is_zero()) {
    // already a plane plus cone
    res.notes.push_back("degenerate input: boundary already splits as plane plus cone");
    LogPair tgt = make_pair(P3, {t, a3});
    add_link(res, identity_map<Rat>(P3), cur, tgt);
    certify(res);
    res.target = instance_of(tgt, FamilyTag::C4, {PointW{{Rat(1), Rat(0), Rat(0), Rat(0)}}}, inst.nodal_flavor);
    return res;
  }
  RatMap m = make_map(P3, P3, {a3 * t + b4, a3 * x, a3 * y, a3 * z});
  LogPair tgt = make_pair(P3, {t, normalize_int(a3)});
  add_link(res, m, cur, tgt);
  certify(res);
  std::vector<Witness> tws{PointW{{Rat(1), Rat(0), Rat(0), Rat(0)}}};
  res.target = instance_of(tgt, FamilyTag::C4, tws, inst.nodal_flavor);
  return res;
}

// ---------------------------------------------------------------------------
// the weighted links

namespace {

// transport of a quartic of the triple-direction shape to the sextic model
std::optional<Poly> sextic_model(const Poly& F) {
  Poly out;
  for (const auto& [e, cc] : F.terms()) {
    uint32_t ea = 0, eb = 0, ec = 0, ed = 0;
    for (size_t i = 0; i < F.vars().size(); ++i) {
      const std::string& vn = F.vars()[i];
      if (vn == "t") ea = e[i];
      else if (vn == "x") eb = e[i];
      else if (vn == "y") ec = e[i];
      else if (vn == "z") ed = e[i];
    }
    long zexp = long(ed) + 2 - 2 * long(ea) - long(eb);
    if (zexp < 0) return std::nullopt;
    out += Poly::monomial({"u", "v", "y", "z"}, Expo{eb, ea, ec, uint32_t(zexp)}, cc);
  }
  return out;
}

// transport to the degree-four model (weights (0,1,1,2)): t^a x^b y^c z^d ->
// u^a x^b y^c z^(d - a)
std::optional<Poly> quartic_model(const Poly& F) {
  Poly out;
  for (const auto& [e, cc] : F.terms()) {
    uint32_t ea = 0, eb = 0, ec = 0, ed = 0;
    for (size_t i = 0; i < F.vars().size(); ++i) {
      const std::string& vn = F.vars()[i];
      if (vn == "t") ea = e[i];
      else if (vn == "x") eb = e[i];
      else if (vn == "y") ec = e[i];
      else if (vn == "z") ed = e[i];
    }
    if (ed < ea) return std::nullopt;
    out += Poly::monomial({"u", "x", "y", "z"}, Expo{eb, ec, uint32_t(ed - ea), ea}, cc);
  }
  return out;
}

}  // namespace

StepResult phi_link(const FamilyInstance& inst, PhiLink which) {
  StepResult res;
  res.source = inst;
  Space P3 = Space::P3();
  Space W1 = W1_space(), W2 = W2_space();
  Poly t = pvar("t"), x = pvar("x"), y = pvar("y"), z = pvar("z"), u = pvar("u"), v = pvar("v");
  switch (which) {
    case PhiLink::Phi1: {
      res.tag = "phi1";
      Poly F = inst.pair.boundary_product();
      auto g6 = sextic_model(F);
      if (!g6)
        throw std::invalid_argument(
            "shape mismatch: weighted order below six for the weights (0,1,2,3)");
      RatMap m = make_map(P3, W1, {y, z, x * z, t * z * z});
      LogPair tgt = make_pair<Rat>(W1, {z, normalize_int(*g6)});
      add_link(res, m, inst.pair, tgt);
      certify(res);
      res.target = instance_of(tgt, FamilyTag::D1, push_point_witnesses(m, inst.witnesses), inst.nodal_flavor);
      return res;
    }
    case PhiLink::Phi2: {
      res.tag = "phi2";
      Poly F = inst.pair.boundary_product();
      auto g4 = quartic_model(F);
      if (!g4)
        throw std::invalid_argument(
            "shape mismatch: weighted order below four for the weights (0,1,1,2)");
      RatMap m = make_map(P3, W2, {x, y, z, t * z});
      LogPair tgt = make_pair<Rat>(W2, {z, normalize_int(*g4)});
      add_link(res, m, inst.pair, tgt);
      certify(res);
      res.target = instance_of(tgt, FamilyTag::D2, push_point_witnesses(m, inst.witnesses), inst.nodal_flavor);
      return res;
    }
    case PhiLink::Phi3: {
      res.tag = "phi3";
      // source: D1 pair (W1, plane z * sextic G6) with line witness V(u, v)
      auto pr = plane_and_rest(inst.pair);
      if (!pr) throw std::invalid_argument("phi3 expects a plane plus del Pezzo boundary");
      Poly F6 = pr->second;
      // decompose F6 = a4(z,y,u) u + b3(z,y,u) v + c0 v^2
      Poly c0p = F6.coeff_of("v", 2);
      Poly b3p = F6.coeff_of("v", 1);
      Poly rest = F6.coeff_of("v", 0);
      auto a4p = Poly::exact_divide(rest, u);
      if (!a4p || !c0p.is_constant() || F6.degree_in("v") > 2)
        throw std::invalid_argument("missing line witness: del Pezzo member does not contain V(u, v)");
      // G4 on W2 (x,y,z,u): a4(z->z, y->x, u->u) + b3(...) y + c0 y^2 u
      std::map<std::string, Poly> ren{{"y", pvar("x")}};
      Poly G4 = a4p->substitute_poly(ren) + b3p.substitute_poly(ren) * pvar("y") +
                c0p * pvar("y") * pvar("y") * pvar("u");
      RatMap m = make_map(W1, W2, {y * u, v, z * u, u.pow(3)});
      LogPair tgt = make_pair<Rat>(W2, {z, normalize_int(G4)});
      add_link(res, m, inst.pair, tgt);
      certify(res);
      res.target = instance_of(tgt, FamilyTag::D2, push_point_witnesses(m, inst.witnesses), inst.nodal_flavor);
      return res;
    }
    case PhiLink::Phi4: {
      res.tag = "phi4";
      // source: D2 pair (W2, plane x * quartic) with the line V(z, u) on the
      // quartic member (after normalization; see step_ii for the general case)
      auto pr = plane_and_rest(inst.pair);
      if (!pr) throw std::invalid_argument("phi4 expects a plane plus del Pezzo boundary");
      Poly G4 = pr->second;
      Poly c0p = G4.coeff_of("u", 2);
      Poly b2p = G4.coeff_of("u", 1);
      Poly rest = G4.coeff_of("u", 0);
      auto a3p = Poly::exact_divide(rest, z);
      if (!a3p || !c0p.is_constant() || G4.degree_in("u") > 2)
        throw std::invalid_argument("missing line witness: del Pezzo member does not contain V(z, u)");
      // target cubic: a3(x->t, y->x, z->y) + b2(...) z + c0 z^2 y
      std::map<std::string, Poly> ren{{"x", pvar("t")}, {"y", pvar("x")}, {"z", pvar("y")}};
      Poly G3 = a3p->substitute_poly(ren) + b2p.substitute_poly(ren) * pvar("z") +
                c0p * pvar("z") * pvar("z") * pvar("y");
      RatMap m = make_map(W2, P3, {x * z, y * z, z * z, u});
      LogPair tgt = make_pair(P3, {t, normalize_int(G3)});
      add_link(res, m, inst.pair, tgt);
      certify(res);
      res.target = instance_of(tgt, FamilyTag::C1, push_point_witnesses(m, inst.witnesses), inst.nodal_flavor);
      return res;
    }
  }
  throw std::logic_error("unreachable");
}

// ---------------------------------------------------------------------------
// step (i): the composite tour through the weighted models

StepResult step_i(const FamilyInstance& inst) {
  StepResult res;
  res.tag = "i";
  res.source = inst;
  Space P3 = Space::P3();
  Space W1 = W1_space(), W2 = W2_space();
  Poly t = pvar("t"), x = pvar("x"), y = pvar("y"), z = pvar("z"), u = pvar("u"), v = pvar("v");
  // witness: the line {u = q2(y,z), v = c3(y,z)} on the sextic model
  const LineOnSurfaceW* lw = nullptr;
  for (const auto& w : inst.witnesses)
    if (std::holds_alternative<LineOnSurfaceW>(w)) {
      const auto& cand = std::get<LineOnSurfaceW>(w);
      if (cand.f1.has_var("u") || cand.f1.has_var("v")) {
        lw = &cand;
        break;
      }
    }
  if (!lw) throw std::invalid_argument("missing line witness for the sextic model");
  Poly q2 = u - lw->f1;  // f1 = u - q2
  Poly c3 = v - lw->f2;
  // leg 1: phi1
  StepResult leg1 = phi_link(inst, PhiLink::Phi1);
  for (auto& c : leg1.chain) res.chain.push_back(c);
  LogPair d1 = leg1.chain.back().target;
  // leg 2: shift the line to V(u, v)
  {
    std::vector<Poly> comps{y, z, u - q2, v - c3};
    RatMap shift = make_map(W1, W1, comps);
    // boundary transforms by the inverse substitution
    std::map<std::string, Poly> inv{{"u", u + q2}, {"v", v + c3}};
    std::vector<Poly> nf;
    for (const auto& f : d1.boundary) nf.push_back(normalize_int(f.substitute_poly(inv)));
    LogPair d1n = make_pair<Rat>(W1, nf);
    add_link(res, shift, d1, d1n);
    d1 = d1n;
  }
  // leg 3: phi3
  FamilyInstance d1i = instance_of(d1, FamilyTag::D1, {LineOnSurfaceW{u, v}}, inst.nodal_flavor);
  StepResult leg3 = phi_link(d1i, PhiLink::Phi3);
  for (auto& c : leg3.chain) res.chain.push_back(c);
  LogPair d2 = leg3.chain.back().target;
  // leg 4: the inverse of phi2 from the plane V(z) model back to the 3-space
  {
    RatMap m = make_map(W2, P3, {u, x * z, y * z, z * z});
    // target quartic: G4(x, y, z, t z)
    auto pr = plane_and_rest(d2);
    Poly G4 = pr->second;
    std::map<std::string, Poly> sub{{"u", t * z}};
    Poly F4 = normalize_int(G4.substitute_poly(sub));
    LogPair tgt = make_pair(P3, {F4});
    add_link(res, m, d2, tgt);
    certify(res);
    // transported witnesses: the degree-two-model line for the next link and
    // any riding points
    std::vector<Witness> ws{PointW{{Rat(1), Rat(0), Rat(0), Rat(0)}}};
    for (const auto& w : inst.witnesses) {
      if (std::holds_alternative<LineOnSurfaceW>(w)) {
        const auto& cand = std::get<LineOnSurfaceW>(w);
        if (&cand == lw) continue;
        ws.push_back(cand);  // the degree-two-model line, already in W2 names
      }
    }
    // forward point witnesses through the whole chain
    for (const auto& w : inst.witnesses) {
      if (!std::holds_alternative<PointW>(w)) continue;
      try {
        Point p = std::get<PointW>(w).coords;
        for (const auto& link : res.chain) p = push_point(link.map, p);
        // skip the elliptic point itself (it maps into base loci); only
        // riders in general position survive
        ws.push_back(PointW{p});
      } catch (const std::exception&) {
      }
    }
    res.target = instance_of(tgt, FamilyTag::A2, ws, inst.nodal_flavor);
  }
  return res;
}

// ---------------------------------------------------------------------------
// step (ii): phi4 . phi2 with a line normalization between

StepResult step_ii(const FamilyInstance& inst) {
  StepResult res;
  res.tag = "ii";
  res.source = inst;
  Space P3 = Space::P3();
  Space W2 = W2_space();
  Poly x = pvar("x"), y = pvar("y"), z = pvar("z"), u = pvar("u"), t = pvar("t");
  // witness: a line {f1 = 0, u = q} on the degree-two model, f1 linear in x,y,z
  const LineOnSurfaceW* lw = nullptr;
  for (const auto& w : inst.witnesses)
    if (std::holds_alternative<LineOnSurfaceW>(w)) {
      const auto& cand = std::get<LineOnSurfaceW>(w);
      if (cand.f2.has_var("u")) {
        lw = &cand;
        break;
      }
    }
  if (!lw) throw std::invalid_argument("missing line witness for the degree-two model");
  StepResult leg1 = phi_link(inst, PhiLink::Phi2);
  for (auto& c : leg1.chain) res.chain.push_back(c);
  LogPair d2 = leg1.chain.back().target;
  // normalization: new coordinates
  //   x' = z (the boundary plane), y' = complement, z' = f1, u' = u - q
  Poly f1 = lw->f1;          // linear in x, y, z
  Poly q = u - lw->f2;       // f2 = u - q with q quadratic in x, y, z
  {
    // weight-one block change
    auto coeffs = [&](const Poly& f) {
      std::vector<Rat> r(3, Rat(0));
      const char* names[3] = {"x", "y", "z"};
      for (int i = 0; i < 3; ++i) {
        Poly c = f.coeff_of(names[i], 1);
        r[size_t(i)] = c.is_zero() ? Rat(0) : c.constant_value();
      }
      return r;
    };
    std::vector<Rat> rz{Rat(0), Rat(0), Rat(1)};  // the plane coordinate z
    std::vector<Rat> rf = coeffs(f1);
    // complement row: a unit vector keeping the rank full
    std::vector<Rat> rc;
    for (int i = 0; i < 3; ++i) {
      std::vector<Rat> e(3, Rat(0));
      e[size_t(i)] = 1;
      MatQ mm{rz, rf, e};
      if (rank(std::move(mm)) == 3) {
        rc = e;
        break;
      }
    }
    if (rc.empty()) throw std::invalid_argument("degenerate line witness");
    // new coordinates as functions of old: x' = z, y' = rc . (x,y,z), z' = f1, u' = u - q
    std::vector<Poly> comps;
    comps.push_back(z);
    Poly yc;
    const char* names[3] = {"x", "y", "z"};
    for (int i = 0; i < 3; ++i)
      if (!is_zero(rc[size_t(i)])) yc += rc[size_t(i)] * pvar(names[i]);
    comps.push_back(yc);
    comps.push_back(f1);
    comps.push_back(u - q);
    RatMap chg = make_map(W2, W2, comps);
    // boundary moves by the inverse: solve old in terms of new
    // (x,y,z) block: invert the 3x3; u = u' + q(old(x,y,z))
    MatQ rows{rz, rf, rc};  // careful: order corresponds to (x', z', y')?
    rows = MatQ{rz, rc, rf};
    MatQ inv3 = mat_inverse4(rows);  // 3x3 works through the same routine
    std::map<std::string, Poly> old_of_new;
    for (int i = 0; i < 3; ++i) {
      Poly s;
      const char* newnames[3] = {"x", "y", "z"};
      for (int j = 0; j < 3; ++j)
        if (!is_zero(inv3[size_t(i)][size_t(j)])) s += inv3[size_t(i)][size_t(j)] * pvar(newnames[j]);
      old_of_new[names[i]] = s;
    }
    old_of_new["u"] = u + q.substitute_poly(old_of_new);
    std::vector<Poly> nf;
    for (const auto& f : d2.boundary) nf.push_back(normalize_int(f.substitute_poly(old_of_new)));
    LogPair d2n = make_pair<Rat>(W2, nf);
    add_link(res, chg, d2, d2n);
    d2 = d2n;
  }
  // phi4 with the plane now at V(x) and the line at V(z, u):
  {
    auto pr = plane_and_rest(d2);
    if (!pr) throw std::invalid_argument("degenerate degree-two model");
    Poly G4 = pr->second;
    Poly c0p = G4.coeff_of("u", 2);
    Poly b2p = G4.coeff_of("u", 1);
    Poly rest = G4.coeff_of("u", 0);
    auto a3p = Poly::exact_divide(rest, z);
    if (!a3p || !c0p.is_constant())
      throw std::invalid_argument("line normalization failed for the degree-two model");
    std::map<std::string, Poly> ren{{"x", pvar("t")}, {"y", pvar("x")}, {"z", pvar("y")}};
    Poly G3 = a3p->substitute_poly(ren) + b2p.substitute_poly(ren) * pvar("z") +
              c0p * pvar("z") * pvar("z") * pvar("y");
    RatMap m = make_map(W2, P3, {x * z, y * z, z * z, u});
    LogPair tgt = make_pair(P3, {t, normalize_int(G3)});
    add_link(res, m, d2, tgt);
    certify(res);
    std::vector<Witness> ws;
    for (const auto& w : inst.witnesses) {
      if (!std::holds_alternative<PointW>(w)) continue;
      try {
        Point p = std::get<PointW>(w).coords;
        for (const auto& link : res.chain) p = push_point(link.map, p);
        ws.push_back(PointW{p});
      } catch (const std::exception&) {
      }
    }
    res.target = instance_of(tgt, FamilyTag::C1, ws, inst.nodal_flavor);
  }
  return res;
}

// ---------------------------------------------------------------------------
// step (iii): the double-direction family to the double line

StepResult step_iii(const FamilyInstance& inst) {
  StepResult res;
  res.tag = "iii";
  res.source = inst;
  Space P3 = Space::P3();
  Poly t = pvar("t"), x = pvar("x"), y = pvar("y"), z = pvar("z");
  Poly F = inst.pair.boundary_product();
  auto shape = extract_double_dir_shape(F);
  if (!shape) throw std::invalid_argument("boundary is not in the double-direction shape");
  if (is_zero(shape->mu1) || is_zero(shape->mu2))
    throw std::invalid_argument(
        "degenerate leading coefficients: treat as a triple point or a degenerate quadratic-rank case");
  if (shape->mu1 != Rat(1) || shape->mu2 != Rat(1))
    throw std::invalid_argument("shape must be normalized so both leading coefficients are one");
  const LambdaRootW* lam = nullptr;
  for (const auto& w : inst.witnesses)
    if (std::holds_alternative<LambdaRootW>(w)) lam = &std::get<LambdaRootW>(w);
  if (!lam) throw std::invalid_argument("missing lambda witness");
  if (!lam->rational) throw std::invalid_argument("extension witnesses run through the extension variant");
  auto evl = [&](const Poly& p) {
    std::map<std::string, Rat> a{{"y", lam->lambda}, {"z", Rat(1)}};
    for (const auto& vv : p.vars())
      if (!a.count(vv)) a[vv] = Rat(0);
    return p.is_zero() ? Rat(0) : p.evaluate<Rat>(a);
  };
  Rat l = lam->lambda, al = lam->alpha, be = lam->beta, ga = lam->gamma, de = lam->delta;
  bool rel_ok = (al + ga == 2 * evl(shape->a1)) && (be + de == evl(shape->b2) + l * l * l) &&
                (al * ga == evl(shape->c2) - l * l * l) && (al * de + be * ga == evl(shape->d3)) &&
                (be * de == evl(shape->e4));
  if (!rel_ok) throw std::invalid_argument("invalid lambda witness");
  Poly Q = t * z + x * x + al * (x * z) + be * (z * z);
  Poly lyz = y - l * z;
  RatMap m = make_map(P3, P3, {Q, x * lyz, y * lyz, z * lyz});
  auto ftgt = solve_target_boundary(m, F);
  if (!ftgt) throw std::runtime_error("target boundary solve failed");
  auto sq = double_along_line(*ftgt, {y, z});
  if (!sq.holds) throw std::runtime_error("target is not double along the expected line");
  LogPair tgt = make_pair(P3, {normalize_int(*ftgt)});
  add_link(res, m, inst.pair, tgt);
  certify(res);
  // discriminant evidence
  Poly Xi = conic_discriminant(double_direction_wform(shape->a1, shape->b2, shape->c2, shape->d3, shape->e4));
  res.notes.push_back("discriminant y-degree " + std::to_string(Xi.degree_in("y")));
  std::vector<Witness> ws{LineOnSurfaceW{y, z}};
  for (auto& w : push_point_witnesses(m, inst.witnesses)) ws.push_back(w);
  res.target = instance_of(tgt, FamilyTag::B1, ws, inst.nodal_flavor);
  return res;
}

// ---------------------------------------------------------------------------
// step (iv): double line dispatch

StepResult step_iv(const FamilyInstance& inst) {
  StepResult res;
  res.tag = "iv";
  res.source = inst;
  Space P3 = Space::P3();
  Poly t = pvar("t"), x = pvar("x"), y = pvar("y"), z = pvar("z");
  Poly F = inst.pair.boundary_product();
  // assume the line is already V(y,z) (generators and upstream steps arrange it)
  auto shaped = extract_double_line_shape(F);
  if (!shaped) throw std::invalid_argument("boundary is not double along V(y, z)");
  auto scan = pinch_and_cusp_scan(F, P3);
  // (b): degenerate cusp reroutes
  for (const auto& d : scan.degenerate_loci) {
    res.tag = "iv(b)";
    Rat t0 = d.at_infinity ? Rat(1) : d.parameter;
    Rat x0 = d.at_infinity ? Rat(0) : Rat(1);
    Point p{t0, x0, Rat(0), Rat(0)};
    if (d.triple_point) {
      res.reroute = FamilyTag::A1;
      res.notes.push_back("triple point on the double line; continue as a triple-point pair");
      res.target = instance_of(inst.pair, FamilyTag::A1, {PointW{p}}, inst.nodal_flavor);
    } else {
      res.reroute = FamilyTag::A3;
      res.notes.push_back("degenerate cusp on the double line; continue as a triple-direction pair");
      // weighted-order evidence for the reroute
      std::map<std::string, long> w{{"t", 0}, {"x", 1}, {"y", 2}, {"z", 3}};
      res.notes.push_back("weighted order " + std::to_string(F.weighted_order(w)) + " for weights (0,1,2,3)");
      res.target = instance_of(inst.pair, FamilyTag::A3, {PointW{p}}, inst.nodal_flavor);
    }
    certify(res);
    return res;
  }
  // (a): a singular point off the line
  for (const auto& w : inst.witnesses) {
    if (!std::holds_alternative<PointW>(w)) continue;
    const Point& p = std::get<PointW>(w).coords;
    if (is_zero(p[2]) && is_zero(p[3])) continue;  // on the line
    auto st = classify_at_point(F, P3, p);
    if (st.tag == SingTag::NonSingular) continue;
    res.tag = "iv(a)";
    LogPair cur = inst.pair;
    Poly Fc = F;
    // move p to (0,0,0,1) preserving the line V(y, z)
    {
      // rows: t' = t - (pt/pz-part) ..., x' = ..., y' = y-combination vanishing
      // at p, z' = (y,z)-form with value 1
      Rat py = p[2], pz = p[3];
      std::vector<Rat> zrow(4, Rat(0)), yrow(4, Rat(0));
      if (!is_zero(pz)) {
        zrow[3] = Rat(1) / pz;
        yrow[2] = Rat(1);
        yrow[3] = is_zero(py) ? Rat(0) : -py / pz / (Rat(1) / pz) * 0;  // fixed below
        yrow = {Rat(0), Rat(0), Rat(1), -py / pz};
      } else {
        zrow = {Rat(0), Rat(0), Rat(1) / py, Rat(0)};
        yrow = {Rat(0), Rat(0), Rat(0), Rat(1)};
      }
      // t' = t - p_t * z'(p-normalized), x' = x - p_x * z'
      std::vector<Rat> trow{Rat(1), Rat(0), Rat(0), Rat(0)};
      std::vector<Rat> xrow{Rat(0), Rat(1), Rat(0), Rat(0)};
      // subtract multiples of zrow so the new coordinates vanish at p
      Rat zval(0);
      for (int i = 0; i < 4; ++i) zval += zrow[size_t(i)] * p[size_t(i)];
      // zval = 1 by construction
      for (int i = 0; i < 4; ++i) {
        trow[size_t(i)] -= p[0] * zrow[size_t(i)];
        xrow[size_t(i)] -= p[1] * zrow[size_t(i)];
      }
      MatQ rows{trow, xrow, yrow, zrow};
      bool is_id = true;
      for (size_t i = 0; i < 4; ++i)
        for (size_t j = 0; j < 4; ++j) is_id = is_id && rows[i][j] == (i == j ? Rat(1) : Rat(0));
      if (!is_id) {
        RatMap mv = change_map(P3, mat_inverse4(rows));
        Poly F2 = normalize_int(move_poly(P3, Fc, rows));
        LogPair moved = make_pair(P3, {F2});
        add_link(res, mv, cur, moved);
        cur = moved;
        Fc = F2;
      }
    }
    // decompose F = g2 y^2 + h2 yz + i2 z^2 with g2,h2,i2 free of z
    auto sq2 = double_along_line(Fc, {y, z});
    if (!sq2.holds) throw std::runtime_error("line structure lost in normalization");
    Poly A = sq2.decomposition[0], B = sq2.decomposition[1], C = sq2.decomposition[2];
    // push z-parts downward
    Poly A0 = A.coeff_of("z", 0), A1 = A - A0;
    Poly Bp = B + *Poly::exact_divide(A1, z) * y;
    Poly B0 = Bp.coeff_of("z", 0), B1 = Bp - B0;
    Poly Cp = C + *Poly::exact_divide(B1, z) * y;
    if (Cp.degree_in("z") > 0)
      throw std::invalid_argument("witness point is not singular enough for the quadric-cone move");
    Poly g2 = A0, h2 = B0, i2 = Cp;
    RatMap m = make_map(P3, P3, {t * z, x * z, y * z, g2});
    Poly Ftgt = normalize_int(y * y * z * z + h2 * y * z + g2 * i2);
    LogPair tgt = make_pair(P3, {Ftgt});
    add_link(res, m, cur, tgt);
    certify(res);
    std::vector<Witness> ws{PointW{{Rat(0), Rat(0), Rat(0), Rat(1)}}};
    // transport remaining riders through the chain
    for (const auto& w2 : inst.witnesses) {
      if (!std::holds_alternative<PointW>(w2)) continue;
      if (&w2 == &w) continue;
      try {
        Point q = std::get<PointW>(w2).coords;
        for (const auto& link : res.chain) q = push_point(link.map, q);
        ws.push_back(PointW{q});
      } catch (const std::exception&) {
      }
    }
    // line witness for the degree-two model of the target: planted by the
    // generators in the standard position after the coordinate permutation
    for (const auto& w2 : inst.witnesses)
      if (std::holds_alternative<LineOnSurfaceW>(w2)) {
        const auto& cand = std::get<LineOnSurfaceW>(w2);
        if (cand.f2.has_var("u")) ws.push_back(cand);
      }
    res.target = instance_of(tgt, FamilyTag::A2, ws, inst.nodal_flavor);
    return res;
  }
  // (c): generic case via three reducible fibres
  {
    res.tag = "iv(c)";
    const SkewLineTripleW* sk = nullptr;
    for (const auto& w : inst.witnesses)
      if (std::holds_alternative<SkewLineTripleW>(w)) sk = &std::get<SkewLineTripleW>(w);
    if (!sk) throw std::invalid_argument("missing reducible-fibre line witnesses");
    // l0 = V(y,z)
    CurveParam l0;
    {
      Poly s = pvar("s"), uu = pvar("u");
      l0.components = {s, uu, Poly(), Poly()};
    }
    std::vector<LinCondition> conds{LinCondition::double_on(l0)};
    for (const auto& li : sk->lines) conds.push_back(LinCondition::vanish_on(li));
    RatMap m = linear_system_map(P3, P3, 3, conds);
    auto total = solve_target_boundary(m, F);
    if (!total) throw std::runtime_error("target boundary solve failed");
    // the image plane: spanned by the images of the three fibre planes
    std::vector<Point> ppts;
    std::mt19937_64 rng(2024);
    for (const auto& li : sk->lines) {
      // plane containing l0 and li: through two points of l0 and one of li
      Point a = l0.at(Rat(1), Rat(0)), b = l0.at(Rat(0), Rat(1)), c = li.at(Rat(1), random_rat(rng, 5));
      Poly pl = plane_through(P3, a, b, c);
      // image point of that plane
      bool pushed = false;
      for (int guard = 0; guard < 100 && !pushed; ++guard) {
        auto pts = plane_points(P3, pl, 1, rng());
        if (pts.empty()) continue;
        try {
          ppts.push_back(push_point(m, pts[0]));
          pushed = true;
        } catch (const std::exception&) {
        }
      }
      if (!pushed) throw std::runtime_error("could not push a fibre plane forward");
    }
    Poly plane_img = plane_through(P3, ppts[0], ppts[1], ppts[2]);
    auto [pl, cubic] = split_by(*total, normalize_int(plane_img));
    LogPair tgt = make_pair(P3, {pl, normalize_int(cubic)});
    add_link(res, m, inst.pair, tgt);
    certify(res);
    std::vector<Witness> ws;
    for (const auto& p : ppts) ws.push_back(PointW{p});
    for (auto& w : push_point_witnesses(m, inst.witnesses)) ws.push_back(w);
    res.target = instance_of(tgt, FamilyTag::C1, ws, inst.nodal_flavor);
    return res;
  }
}

// ---------------------------------------------------------------------------
// step (v): double conic via the quadric threefold

StepResult step_v(const FamilyInstance& inst) {
  StepResult res;
  res.tag = "v";
  res.source = inst;
  Space P3 = Space::P3();
  Poly t = pvar("t"), x = pvar("x"), y = pvar("y"), z = pvar("z");
  Poly F = inst.pair.boundary_product();
  const ConicOnSurfaceW* cw = nullptr;
  for (const auto& w : inst.witnesses)
    if (std::holds_alternative<ConicOnSurfaceW>(w)) cw = &std::get<ConicOnSurfaceW>(w);
  if (!cw) throw std::invalid_argument("missing conic witness");
  auto dec = double_along_conic(F, {cw->plane, cw->quadric});
  if (!dec.holds) throw std::invalid_argument("boundary is not double along the witness conic");
  // require the standard plane t for the chart bookkeeping
  if (!(cw->plane == t)) throw std::invalid_argument("conic witness must lie in the coordinate plane");
  Poly q2 = cw->quadric;
  if (!dec.decomposition[0].is_constant()) throw std::invalid_argument("non-constant leading decomposition");
  Rat a0 = dec.decomposition[0].constant_value();
  Poly a1 = dec.decomposition[1] / a0;
  Poly b2 = dec.decomposition[2] / a0;
  // reducible conic reroutes to the double-line family
  {
    // q2 restricted to the plane t=0 must be irreducible: test rank 3
    Poly q0 = q2.set_var("t", Rat(0));
    std::vector<std::string> vars3{"x", "y", "z"};
    if (quadratic_rank(q0, vars3) < 3) {
      res.reroute = FamilyTag::B1;
      res.notes.push_back("witness conic is reducible; continue as a double-line pair");
      res.target = instance_of(inst.pair, FamilyTag::B1, inst.witnesses, inst.nodal_flavor);
      certify(res);
      return res;
    }
  }
  // verification of the threefold factorization: F - t^2(u^2 + a1 u + b2)
  // divisible by (q2 - t u)
  {
    Poly uu = pvar("u");
    Poly expr = F - t * t * (uu * uu + a1 * uu + b2);
    auto div = Poly::exact_divide(expr, q2 - t * uu);
    if (!div) throw std::runtime_error("threefold factorization failed");
    res.notes.push_back("threefold factorization verified");
  }
  // witness point on the double-cover curve: a conic point with a rational
  // sheet value
  std::mt19937_64 rng(0xb2b2 + inst.pair.boundary_product().term_count());
  auto par = conic_param(P3, cw->plane, q2, cw->base_point, rng());
  if (!par) throw std::invalid_argument("conic parameterization failed");
  for (int attempt = 0; attempt < 40; ++attempt) {
    Rat s = random_rat(rng, 9), uu = Rat(1);
    Point cp = par->at(s, uu);
    bool zero = true;
    for (auto& c : cp) zero = zero && is_zero(c);
    if (zero) continue;
    // sheets: u^2 + a1(cp) u + b2(cp) = 0
    std::map<std::string, Rat> a = point_assignment(P3, cp);
    auto evp = [&](const Poly& p) {
      std::map<std::string, Rat> full = a;
      for (const auto& v : p.vars())
        if (!full.count(v)) full[v] = Rat(0);
      return p.is_zero() ? Rat(0) : p.evaluate<Rat>(full);
    };
    Rat av = evp(a1), bv = evp(b2);
    Rat disc = av * av - 4 * bv;
    if (sgn(disc.get_num()) < 0) continue;
    Int ns, ds;
    mpz_sqrt(ns.get_mpz_t(), disc.get_num().get_mpz_t());
    mpz_sqrt(ds.get_mpz_t(), disc.get_den().get_mpz_t());
    if (ns * ns != disc.get_num() || ds * ds != disc.get_den()) continue;
    Rat root(ns, ds);
    Rat u0 = (-av + root) / 2;
    // the point q = (cp, u0) on the threefold; the projection centre
    std::vector<Rat> q5 = {cp[0], cp[1], cp[2], cp[3], u0};
    // forms vanishing at q: nullspace of the 1x5 matrix
    MatQ mq(1, std::vector<Rat>(5));
    for (int i = 0; i < 5; ++i) mq[0][i] = q5[size_t(i)];
    auto Lbasis = nullspace(std::move(mq));
    if (Lbasis.size() != 4) continue;
    // map components: L_i(t^2, t x, t y, t z, q2)
    std::vector<Poly> fives{t * t, t * x, t * y, t * z, q2};
    std::vector<Poly> comps;
    for (const auto& L : Lbasis) {
      Poly c;
      for (int i = 0; i < 5; ++i)
        if (!is_zero(L[size_t(i)])) c += L[size_t(i)] * fives[size_t(i)];
      comps.push_back(c);
    }
    RatMap m;
    try {
      m = make_map(P3, P3, comps);
    } catch (const std::exception&) {
      continue;
    }
    auto total = solve_target_boundary(m, F);
    if (!total) continue;
    // the image plane: t as a combination of the L-forms
    // t = sum d_i L_i since t(q) = 0
    MatQ sys(5, std::vector<Rat>(4, Rat(0)));
    std::vector<Rat> rhs(5, Rat(0));
    for (int i = 0; i < 5; ++i)
      for (int j = 0; j < 4; ++j) sys[size_t(i)][size_t(j)] = Lbasis[size_t(j)][size_t(i)];
    rhs[0] = 1;  // t is the first standard coordinate of the 4-space
    auto dsol = solve(std::move(sys), std::move(rhs));
    if (!dsol) continue;
    const char* tgtnames[4] = {"t", "x", "y", "z"};
    Poly plane_img;
    for (int j = 0; j < 4; ++j)
      if (!is_zero((*dsol)[size_t(j)])) plane_img += (*dsol)[size_t(j)] * pvar(tgtnames[j]);
    Poly cubic;
    try {
      auto [pl, cb] = split_by(*total, normalize_int(plane_img));
      cubic = cb;
    } catch (const std::exception&) {
      continue;
    }
    LogPair tgt = make_pair(P3, {normalize_int(plane_img), normalize_int(cubic)});
    StepResult attempt_res;
    attempt_res.tag = res.tag;
    attempt_res.source = res.source;
    attempt_res.notes = res.notes;
    add_link(attempt_res, m, inst.pair, tgt);
    certify(attempt_res);
    if (!attempt_res.ok()) continue;  // retry with a new witness point
    std::vector<Witness> ws = push_point_witnesses(m, inst.witnesses);
    attempt_res.target = instance_of(tgt, FamilyTag::C1, ws, inst.nodal_flavor);
    return attempt_res;
  }
  throw std::runtime_error("no admissible projection point found (retry witness)");
}

// ---------------------------------------------------------------------------
// step (vi): plane plus smooth cubic via the three skew lines

StepResult step_vi(const FamilyInstance& inst) {
  StepResult res;
  res.tag = "vi";
  res.source = inst;
  Space P3 = Space::P3();
  Poly F = inst.pair.boundary_product();
  auto pr = plane_and_rest(inst.pair);
  if (!pr) throw std::invalid_argument("expected a plane plus cubic boundary");
  const SkewLineTripleW* sk = nullptr;
  const LineOnSurfaceW* trans = nullptr;
  for (const auto& w : inst.witnesses) {
    if (std::holds_alternative<SkewLineTripleW>(w)) sk = &std::get<SkewLineTripleW>(w);
    if (std::holds_alternative<LineOnSurfaceW>(w)) trans = &std::get<LineOnSurfaceW>(w);
  }
  if (!sk || !trans) throw std::invalid_argument("missing line witnesses");
  CurveParam l0 = line_from_forms(P3, trans->f1, trans->f2);
  // incidence: l0 meets each line, lines pairwise skew
  for (int i = 0; i < 3; ++i) {
    if (!lines_meet(P3, l0, sk->lines[size_t(i)])) throw std::invalid_argument("witness incidence fails");
    for (int j = i + 1; j < 3; ++j)
      if (lines_meet(P3, sk->lines[size_t(i)], sk->lines[size_t(j)]))
        throw std::invalid_argument("witness incidence fails");
  }
  std::vector<LinCondition> conds{LinCondition::double_on(l0)};
  for (const auto& li : sk->lines) conds.push_back(LinCondition::vanish_on(li));
  RatMap m = linear_system_map(P3, P3, 3, conds);
  auto total = solve_target_boundary(m, F);
  if (!total) throw std::runtime_error("target boundary solve failed");
  // image of the plane: a quadric through images of plane points
  std::mt19937_64 rng(0x6a6a);
  std::vector<Point> imgs;
  for (int guard = 0; guard < 400 && imgs.size() < 11; ++guard) {
    auto pts = plane_points(P3, pr->first, 1, rng());
    if (pts.empty()) continue;
    try {
      imgs.push_back(push_point(m, pts[0]));
    } catch (const std::exception&) {
    }
  }
  if (imgs.size() < 11) throw std::runtime_error("could not sample the plane image");
  auto d1q = quadric_through_points(P3, imgs);
  if (!d1q) throw std::runtime_error("plane image is not a quadric");
  auto [d1, d2] = split_by(*total, *d1q);
  LogPair tgt = make_pair(P3, {d1, normalize_int(d2)});
  add_link(res, m, inst.pair, tgt);
  certify(res);
  // witnesses downstream: the three contracted-plane images lie on the
  // intersection curve of the two quadrics
  std::vector<Witness> ws;
  for (int i = 0; i < 3; ++i) {
    Point a = l0.at(Rat(1), Rat(0)), b = l0.at(Rat(0), Rat(1)), c = sk->lines[size_t(i)].at(Rat(1), Rat(2));
    Poly pl = plane_through(P3, a, b, c);
    for (int guard = 0; guard < 100; ++guard) {
      auto pts = plane_points(P3, pl, 1, rng());
      if (pts.empty()) continue;
      try {
        ws.push_back(PointW{push_point(m, pts[0])});
        break;
      } catch (const std::exception&) {
      }
    }
  }
  for (auto& w : push_point_witnesses(m, inst.witnesses)) ws.push_back(w);
  res.target = instance_of(tgt, FamilyTag::C2, ws, inst.nodal_flavor);
  return res;
}

// ---------------------------------------------------------------------------
// step (vii): double twisted cubic via the special cubo-cubic map

StepResult step_vii(const FamilyInstance& inst) {
  StepResult res;
  res.tag = "vii";
  res.source = inst;
  Space P3 = Space::P3();
  Poly t = pvar("t"), x = pvar("x"), y = pvar("y"), z = pvar("z");
  Poly F = inst.pair.boundary_product();
  const TwistedCubicFrameW* fw = nullptr;
  const SecantLineTripleW* sec = nullptr;
  for (const auto& w : inst.witnesses) {
    if (std::holds_alternative<TwistedCubicFrameW>(w)) fw = &std::get<TwistedCubicFrameW>(w);
    if (std::holds_alternative<SecantLineTripleW>(w)) sec = &std::get<SecantLineTripleW>(w);
  }
  if (!fw || !sec) throw std::invalid_argument("missing frame or secant witnesses");
  auto dec = double_along_twisted_cubic(F, {fw->xi1, fw->xi2, fw->xi3});
  if (!dec.holds) {
    res.reroute = FamilyTag::B1;
    res.notes.push_back("degenerate frame; continue as a double-line pair");
    res.target = instance_of(inst.pair, FamilyTag::B1, inst.witnesses, inst.nodal_flavor);
    certify(res);
    return res;
  }
  // the twisted cubic parameterization and the secant lines
  CurveParam sigma;
  {
    Poly s = pvar("s"), uu = pvar("u");
    sigma.components = {uu.pow(3), s * uu * uu, s * s * uu, s.pow(3)};
    // convention: (x, y, z, t) = (u^3, s u^2, s^2 u, s^3) matches the frame
    // xi1 = xz - y^2 etc with variables ordered (t,x,y,z)
    sigma.components = {s.pow(3), uu.pow(3), s * uu * uu, s * s * uu};
  }
  std::vector<CurveParam> secants;
  for (const auto& c : sec->gamma_points) {
    // secant line: V(c3 x - c2 y + c1 z, c3 y - c2 z + c1 t)
    Poly f1 = c[2] * x - c[1] * y + c[0] * z;
    Poly f2 = c[2] * y - c[1] * z + c[0] * t;
    secants.push_back(line_from_forms(P3, f1, f2));
    // incidence: the secant meets the curve twice (roots of c1 th^2 - c2 th + c3)
  }
  std::vector<LinCondition> conds{LinCondition::vanish_on(sigma)};
  for (const auto& li : secants) conds.push_back(LinCondition::vanish_on(li));
  RatMap m = linear_system_map(P3, P3, 3, conds);
  auto total = solve_target_boundary(m, F);
  if (!total) throw std::runtime_error("target boundary solve failed");
  // image lines of the frame quadrics F'_k (through sigma and two secants)
  std::mt19937_64 rng(0x77);
  std::vector<CurveParam> img_lines;
  for (int k = 0; k < 3; ++k) {
    std::vector<CurveParam> gens{sigma};
    for (int i = 0; i < 3; ++i)
      if (i != k) gens.push_back(secants[size_t(i)]);
    auto fk = quadric_through_curves(P3, gens);
    if (!fk) throw std::runtime_error("frame quadric interpolation failed");
    // rational points on fk via stereographic from a sigma point
    Point base = sigma.at(Rat(k + 2), Rat(1));
    auto pts = quadric_points(*fk, P3, base, 8, rng());
    std::vector<Point> imgs;
    for (const auto& p : pts) {
      try {
        Point q = push_point(m, p);
        bool dup = false;
        for (const auto& prev : imgs) {
          MatQ mm{std::vector<Rat>(prev.begin(), prev.end()), std::vector<Rat>(q.begin(), q.end())};
          if (rank(std::move(mm)) < 2) dup = true;
        }
        if (!dup) imgs.push_back(q);
        if (imgs.size() >= 2) break;
      } catch (const std::exception&) {
      }
    }
    if (imgs.size() < 2) throw std::runtime_error("frame quadric image sampling failed");
    img_lines.push_back(line_through(imgs[0], imgs[1]));
  }
  auto d2q = quadric_through_curves(P3, img_lines);
  if (!d2q) throw std::runtime_error("image quadric interpolation failed");
  auto [d2, d1] = split_by(*total, *d2q);
  LogPair tgt = make_pair(P3, {normalize_int(d1), d2});
  add_link(res, m, inst.pair, tgt);
  certify(res);
  // downstream point witnesses: rational intersections of the image lines
  // with the other quadric
  std::vector<Witness> ws;
  for (const auto& li : img_lines) {
    // restrict d1 to the line
    std::map<std::string, Poly> a;
    auto vars = P3.all_vars();
    for (size_t i = 0; i < vars.size(); ++i) a[vars[i]] = li.components[i];
    Poly r = d1.substitute_poly(a);
    if (r.is_zero()) continue;
    BinForm bf = binform_of(r, "s", "u", r.degree());
    auto roots = binform_roots(bf);
    for (const auto& rt : roots.roots) {
      Point p = rt.at_infinity ? li.at(Rat(1), Rat(0)) : li.at(rt.value, Rat(1));
      ws.push_back(PointW{p});
      if (ws.size() >= 2) break;
    }
    if (ws.size() >= 2) break;
  }
  for (auto& w : push_point_witnesses(m, inst.witnesses)) ws.push_back(w);
  res.target = instance_of(tgt, FamilyTag::C2, ws, inst.nodal_flavor);
  return res;
}

// ---------------------------------------------------------------------------
// step (viii): two quadrics to plane plus nodal cubic

StepResult step_viii(const FamilyInstance& inst) {
  StepResult res;
  res.tag = "viii";
  res.source = inst;
  Space P3 = Space::P3();
  if (inst.pair.boundary.size() != 2) throw std::invalid_argument("expected two boundary components");
  Poly D1 = inst.pair.boundary[0], D2 = inst.pair.boundary[1];
  auto deg = [&](const Poly& f) { return (*multidegree(P3, f))[0]; };
  if (deg(D1) != 2 || deg(D2) != 2) throw std::invalid_argument("expected two quadrics");
  Poly F = inst.pair.boundary_product();
  // a rational point on the intersection curve
  std::vector<Point> sigma_points;
  for (const auto& w : inst.witnesses) {
    if (!std::holds_alternative<PointW>(w)) continue;
    const Point& p = std::get<PointW>(w).coords;
    if (vanishes_at(D1, P3, p) && vanishes_at(D2, P3, p)) sigma_points.push_back(p);
  }
  if (sigma_points.empty()) throw std::invalid_argument("missing intersection-point witness");
  std::mt19937_64 rng(0x8888 ^ F.term_count());
  for (int attempt = 0; attempt < 25; ++attempt) {
    const Point& p = sigma_points[size_t(attempt) % sigma_points.size()];
    // conic on D1: a plane section whose plane misses p; parameterize from a
    // second rational point of D1 in that plane
    // sample a point on D1 and a plane through it
    Point q0;
    {
      auto pts = quadric_points(D1, P3, p, 1, rng());
      if (pts.empty()) continue;
      q0 = pts[0];
    }
    // plane through q0 (and not through p)
    Poly h;
    {
      auto vars = P3.all_vars();
      Poly cand;
      for (int guard = 0; guard < 50; ++guard) {
        cand = Poly();
        for (const auto& v : vars) cand += random_rat(rng, 5) * pvar(v);
        if (cand.is_zero()) continue;
        if (is_zero(evaluate_at(cand, P3, q0)) || !is_zero(evaluate_at(cand, P3, p))) {
          // adjust so cand(q0) = 0, then verify cand(p) != 0
          Rat val = evaluate_at(cand, P3, q0);
          // subtract val * (l0/l0(q0)) for a coordinate with q0 != 0
          size_t piv = 0;
          while (piv < vars.size() && is_zero(q0[piv])) ++piv;
          if (piv == vars.size()) continue;
          cand -= val / q0[piv] * pvar(vars[piv]);
        }
        if (is_zero(evaluate_at(cand, P3, q0)) && !is_zero(evaluate_at(cand, P3, p))) break;
        cand = Poly();
      }
      if (cand.is_zero()) continue;
      h = cand;
    }
    auto par = conic_param(P3, h, D1, q0, rng());
    if (!par) continue;
    std::vector<LinCondition> conds{LinCondition::vanish_on(*par), LinCondition::through(p)};
    RatMap m;
    try {
      m = linear_system_map(P3, P3, 2, conds);
    } catch (const std::exception&) {
      continue;
    }
    auto total = solve_target_boundary(m, F);
    if (!total) continue;
    // target plane: image of D1 (through three image points)
    std::vector<Point> imgs;
    for (int guard = 0; guard < 200 && imgs.size() < 3; ++guard) {
      auto pts = quadric_points(D1, P3, p, 1, rng());
      if (pts.empty()) continue;
      try {
        Point q = push_point(m, pts[0]);
        bool dup = false;
        for (const auto& prev : imgs) {
          MatQ mm{std::vector<Rat>(prev.begin(), prev.end()), std::vector<Rat>(q.begin(), q.end())};
          if (rank(std::move(mm)) < 2) dup = true;
        }
        if (!dup) imgs.push_back(q);
      } catch (const std::exception&) {
      }
    }
    if (imgs.size() < 3) continue;
    Poly plane_img;
    try {
      plane_img = plane_through(P3, imgs[0], imgs[1], imgs[2]);
    } catch (const std::exception&) {
      continue;
    }
    Poly cubic;
    try {
      auto [pl, cb] = split_by(*total, normalize_int(plane_img));
      cubic = cb;
    } catch (const std::exception&) {
      continue;
    }
    // p' = image of the contracted plane of the conic
    Point pprime;
    try {
      auto hpts = plane_points(P3, h, 3, rng());
      bool got = false;
      for (const auto& hp : hpts) {
        try {
          pprime = push_point(m, hp);
          got = true;
          break;
        } catch (const std::exception&) {
        }
      }
      if (!got) continue;
    } catch (const std::exception&) {
      continue;
    }
    LogPair tgt;
    try {
      tgt = make_pair(P3, {normalize_int(plane_img), normalize_int(cubic)});
    } catch (const std::exception&) {
      continue;
    }
    StepResult att;
    att.tag = res.tag;
    att.source = res.source;
    add_link(att, m, inst.pair, tgt);
    certify(att);
    if (!att.ok()) continue;
    // the target cubic must be double at p'
    if (multiplicity_at(normalize_int(cubic), P3, pprime) < 2) continue;
    std::vector<Witness> ws{PointW{pprime}};
    for (auto& w : push_point_witnesses(m, inst.witnesses)) ws.push_back(w);
    att.target = instance_of(tgt, FamilyTag::C3, ws, inst.nodal_flavor);
    att.notes.push_back("double point at the contracted-plane image verified");
    return att;
  }
  throw std::runtime_error("no admissible conic-and-point witness found (retry witness)");
}

// ---------------------------------------------------------------------------
// step (ix): plane plus singular cubic to plane plus cone

StepResult step_ix(const FamilyInstance& inst) {
  StepResult res;
  res.tag = "ix";
  res.source = inst;
  Space P3 = Space::P3();
  Poly t = pvar("t"), x = pvar("x"), y = pvar("y"), z = pvar("z");
  auto pr = plane_and_rest(inst.pair);
  if (!pr) throw std::invalid_argument("expected a plane plus cubic boundary");
  Poly h = pr->first, cubic = pr->second;
  // cone check: reroute to the triple-point family
  {
    auto vars = P3.all_vars();
    MatQ m2;
    for (size_t i = 0; i < vars.size(); ++i)
      for (size_t j = i; j < vars.size(); ++j) {
        Poly d2 = cubic.derivative(vars[i]).derivative(vars[j]);
        std::vector<Rat> row(vars.size(), Rat(0));
        for (size_t k = 0; k < vars.size(); ++k) {
          Poly c = d2.coeff_of(vars[k], 1);
          row[k] = c.is_zero() ? Rat(0) : c.constant_value();
        }
        m2.push_back(std::move(row));
      }
    auto vertex = nullspace(m2);
    if (!vertex.empty()) {
      res.reroute = FamilyTag::A1;
      res.notes.push_back("cubic component is a cone; continue as a triple-point pair");
      Point v(vertex[0].begin(), vertex[0].end());
      res.target = instance_of(inst.pair, FamilyTag::A1, {PointW{v}}, inst.nodal_flavor);
      certify(res);
      return res;
    }
  }
  // the double point witness off the plane
  const PointW* pw = nullptr;
  for (const auto& w : inst.witnesses) {
    if (!std::holds_alternative<PointW>(w)) continue;
    const Point& p = std::get<PointW>(w).coords;
    if (!vanishes_at(cubic, P3, p)) continue;
    if (is_zero(evaluate_at(h, P3, p))) continue;  // on the intersection curve: reroute territory
    if (multiplicity_at(cubic, P3, p) >= 2) {
      pw = &std::get<PointW>(w);
      break;
    }
  }
  if (!pw) throw std::invalid_argument("missing double-point witness off the plane");
  LogPair cur = inst.pair;
  // normalize: plane to V(t), point to (1,0,0,0)
  {
    auto vars = P3.all_vars();
    std::vector<Rat> trow(4, Rat(0));
    for (size_t i = 0; i < vars.size(); ++i) {
      Poly c = h.coeff_of(vars[i], 1);
      trow[i] = c.is_zero() ? Rat(0) : c.constant_value();
    }
    Rat hval(0);
    for (size_t i = 0; i < 4; ++i) hval += trow[i] * pw->coords[i];
    for (auto& c : trow) c /= hval;  // t'(p) = 1... but we want t'(p) = 0? p off plane: t' is the plane form
    // rows: t' = h (plane), x', y', z' vanish at p and complete the basis
    MatQ rows{trow};
    MatQ m1(1, std::vector<Rat>(4));
    for (size_t i = 0; i < 4; ++i) m1[0][i] = pw->coords[i];
    for (const auto& vrow : nullspace(m1)) {
      MatQ probe = rows;
      probe.push_back(vrow);
      if (rank(probe) == rows.size() + 1) rows.push_back(vrow);
    }
    if (rows.size() != 4) throw std::invalid_argument("degenerate normalization");
    // hmm: p must become (1,0,0,0): t'(p) = 1 (after scaling), others 0
    bool is_id = true;
    for (size_t i = 0; i < 4; ++i)
      for (size_t j = 0; j < 4; ++j) is_id = is_id && rows[i][j] == (i == j ? Rat(1) : Rat(0));
    if (!is_id) {
      RatMap mv = change_map(P3, mat_inverse4(rows));
      Poly h2 = normalize_int(move_poly(P3, h, rows));
      Poly c2 = normalize_int(move_poly(P3, cubic, rows));
      LogPair moved = make_pair(P3, {h2, c2});
      add_link(res, mv, cur, moved);
      cur = moved;
      h = h2;
      cubic = c2;
    }
  }
  if (!(h == t)) throw std::runtime_error("plane normalization failed");
  if (cubic.degree_in("t") > 1) throw std::invalid_argument("cubic not double at the witness point");
  Poly a2 = cubic.coeff_of("t", 1);
  Poly b3 = cubic.coeff_of("t", 0);
  if (a2.is_zero()) {
    res.reroute = FamilyTag::A1;
    res.notes.push_back("cubic singular along the intersection with the plane; treat as a triple point");
    res.target = instance_of(cur, FamilyTag::A1, {PointW{{Rat(1), Rat(0), Rat(0), Rat(0)}}}, inst.nodal_flavor);
    certify(res);
    return res;
  }
  RatMap m = make_map(P3, P3, {a2 * t * z, x * (a2 * t + b3), y * (a2 * t + b3), z * (a2 * t + b3)});
  LogPair tgt = make_pair(P3, {t, normalize_int(b3)});
  add_link(res, m, cur, tgt);
  certify(res);
  res.target = instance_of(tgt, FamilyTag::C4, {PointW{{Rat(1), Rat(0), Rat(0), Rat(0)}}}, inst.nodal_flavor);
  return res;
}

// ---------------------------------------------------------------------------
// plane quadratic moves and the endgame

namespace {

// basepoint images of a plane quadratic map: q_i = image of the line through
// the other two basepoints
std::vector<Point> quadratic_basepoint_images(const RatMap& m, const std::vector<Point>& bps, uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::vector<Point> out(3);
  for (int i = 0; i < 3; ++i) {
    const Point& a = bps[size_t((i + 1) % 3)];
    const Point& b = bps[size_t((i + 2) % 3)];
    CurveParam join = line_through(a, b);
    bool done = false;
    for (int guard = 0; guard < 100 && !done; ++guard) {
      Point p = join.at(random_rat(rng, 9), Rat(1));
      bool zero = true;
      for (auto& c : p) zero = zero && is_zero(c);
      if (zero) continue;
      try {
        out[size_t(i)] = push_point(m, p);
        done = true;
      } catch (const std::exception&) {
      }
    }
    if (!done) throw std::runtime_error("could not push a join line forward");
  }
  return out;
}

}  // namespace

StepResult plane_quadratic(const LogPair& pair2, const std::vector<Point>& basepoints) {
  StepResult res;
  res.tag = "plane-quadratic";
  Space P2 = pair2.space;
  if (basepoints.size() != 3) throw std::invalid_argument("three basepoints required");
  {
    MatQ m;
    for (const auto& p : basepoints) m.push_back(std::vector<Rat>(p.begin(), p.end()));
    if (rank(std::move(m)) != 3) throw std::invalid_argument("collinear basepoints");
  }
  Poly F = pair2.boundary_product();
  for (const auto& p : basepoints)
    if (!vanishes_at(F, P2, p)) throw std::invalid_argument("basepoint not on the boundary");
  std::vector<LinCondition> conds;
  for (const auto& p : basepoints) conds.push_back(LinCondition::through(p));
  RatMap m = linear_system_map(P2, P2, 2, conds);
  auto total = solve_target_boundary(m, F);
  if (!total) throw std::runtime_error("target boundary solve failed");
  // split into components: push each source component forward, using the
  // basepoint images for exceptional bookkeeping
  auto qimgs = quadratic_basepoint_images(m, basepoints, 0x93);
  // components of the image: for each source component compute its image
  // degree 2*d - sum of basepoint multiplicities, interpolate through pushed
  // points; the remainder of the total is exceptional lines
  Poly remaining = *total;
  std::mt19937_64 rng(0x2d);
  // exceptional components: the image of basepoint i is the join of q_j, q_k
  // when the basepoint is a singular point of the boundary (it enters the
  // boundary); compute all three joins and test divisibility
  std::vector<Poly> out_factors;
  for (int i = 0; i < 3; ++i) {
    const Point& a = qimgs[size_t((i + 1) % 3)];
    const Point& b = qimgs[size_t((i + 2) % 3)];
    // the line through the two images
    MatQ mm{std::vector<Rat>(a.begin(), a.end()), std::vector<Rat>(b.begin(), b.end())};
    auto ns = nullspace(std::move(mm));
    if (ns.size() != 1) continue;
    Poly join;
    auto vars = P2.all_vars();
    for (size_t k = 0; k < vars.size(); ++k)
      if (!is_zero(ns[0][k])) join += ns[0][k] * pvar(vars[k]);
    join = normalize_int(join);
    auto q = Poly::exact_divide(remaining, join);
    if (q) {
      // only accept when the exceptional line genuinely enters the boundary:
      // basepoint i is a singular point of the total boundary
      if (multiplicity_at(F, P2, basepoints[size_t(i)]) >= 2) {
        out_factors.push_back(join);
        remaining = *q;
      }
    }
  }
  if (!remaining.is_constant()) {
    // the strict transforms of the components: factor the remainder by the
    // pushed component images via interpolation; with at most two components
    // we can divide by the image of the line component (a line) when present
    // and keep the rest as a single factor
    // try splitting линий via joins of pushed points of a line component
    for (const auto& comp : pair2.boundary) {
      if (remaining.is_constant()) break;
      if (comp.degree() == 1) {
        // image of a line: through images of two of its points
        CurveParam lp;
        auto forms = comp;  // line as a single form: parameterize
        // basis of the line
        MatQ m1(1, std::vector<Rat>(3, Rat(0)));
        auto vars = P2.all_vars();
        for (size_t i = 0; i < 3; ++i) {
          Poly c = comp.coeff_of(vars[i], 1);
          m1[0][i] = c.is_zero() ? Rat(0) : c.constant_value();
        }
        auto basis = nullspace(std::move(m1));
        if (basis.size() != 2) continue;
        CurveParam param = line_through(Point(basis[0].begin(), basis[0].end()),
                                        Point(basis[1].begin(), basis[1].end()));
        auto img = push_line(m, param, rng());
        if (!img) continue;
        auto lforms = line_forms(P2, *img);
        // in the plane a line has a single form: line_forms returns n-2 = 1
        Poly lf = normalize_int(lforms[0]);
        auto q = Poly::exact_divide(remaining, lf);
        if (q) {
          out_factors.push_back(lf);
          remaining = *q;
        }
      }
    }
  }
  if (!remaining.is_constant()) out_factors.push_back(normalize_int(remaining));
  LogPair tgt = make_pair<Rat>(P2, out_factors);
  add_link(res, m, pair2, tgt);
  certify(res);
  res.target.pair = tgt;
  return res;
}

StepResult endgame_to_toric(const FamilyInstance& inst) {
  StepResult res;
  res.tag = "endgame";
  res.source = inst;
  Space P3 = Space::P3();
  Space T = Space::P1xP2();
  Poly t = pvar("t"), x = pvar("x"), y = pvar("y"), z = pvar("z");
  auto pr = plane_and_rest(inst.pair);
  if (!pr) throw std::invalid_argument("expected a plane plus cone boundary");
  LogPair cur = inst.pair;
  Poly h = pr->first, cone = pr->second;
  // normalize: vertex to (1,0,0,0), plane to V(t)
  {
    auto vars = P3.all_vars();
    MatQ m2;
    for (size_t i = 0; i < vars.size(); ++i)
      for (size_t j = i; j < vars.size(); ++j) {
        Poly d2 = cone.derivative(vars[i]).derivative(vars[j]);
        std::vector<Rat> row(vars.size(), Rat(0));
        for (size_t k = 0; k < vars.size(); ++k) {
          Poly c = d2.coeff_of(vars[k], 1);
          row[k] = c.is_zero() ? Rat(0) : c.constant_value();
        }
        m2.push_back(std::move(row));
      }
    auto vertex = nullspace(std::move(m2));
    if (vertex.empty()) throw std::invalid_argument("cubic component is not a cone");
    Point v(vertex[0].begin(), vertex[0].end());
    Rat hv = evaluate_at(h, P3, v);
    if (is_zero(hv)) throw std::invalid_argument("cone vertex lies on the plane (not a product shape)");
    std::vector<Rat> trow(4, Rat(0));
    for (size_t i = 0; i < vars.size(); ++i) {
      Poly c = h.coeff_of(vars[i], 1);
      trow[i] = c.is_zero() ? Rat(0) : c.constant_value();
    }
    for (auto& c : trow) c /= hv;
    MatQ rows{trow};
    MatQ m1(1, std::vector<Rat>(4));
    for (size_t i = 0; i < 4; ++i) m1[0][i] = v[i];
    for (const auto& vrow : nullspace(m1)) {
      MatQ probe = rows;
      probe.push_back(vrow);
      if (rank(probe) == rows.size() + 1) rows.push_back(vrow);
    }
    if (rows.size() != 4) throw std::invalid_argument("degenerate endgame normalization");
    bool is_id = true;
    for (size_t i = 0; i < 4; ++i)
      for (size_t j = 0; j < 4; ++j) is_id = is_id && rows[i][j] == (i == j ? Rat(1) : Rat(0));
    if (!is_id) {
      RatMap mv = change_map(P3, mat_inverse4(rows));
      Poly h2 = normalize_int(move_poly(P3, h, rows));
      Poly c2 = normalize_int(move_poly(P3, cone, rows));
      LogPair moved = make_pair(P3, {h2, c2});
      add_link(res, mv, cur, moved);
      cur = moved;
      h = h2;
      cone = c2;
    }
  }
  // ensure the last coordinate does not divide the cone cubic
  if (Poly::exact_divide(cone, z)) {
    // rotate z with a coordinate not dividing
    std::vector<Poly> candidates{y, x, x + y, y + z, x + z};
    Poly pick;
    for (const auto& c : candidates)
      if (!Poly::exact_divide(cone, c)) {
        pick = c;
        break;
      }
    if (pick.is_zero()) throw std::invalid_argument("cone cubic divisible by every candidate direction");
    // change z' = pick: complete to a basis with t fixed
    MatQ rows{{Rat(1), Rat(0), Rat(0), Rat(0)}};
    std::vector<Rat> prow(4, Rat(0));
    auto vars = P3.all_vars();
    for (size_t i = 0; i < 4; ++i) {
      Poly c = pick.coeff_of(vars[i], 1);
      prow[i] = c.is_zero() ? Rat(0) : c.constant_value();
    }
    // new coordinates: (t, x?, y?, z' = pick): complete
    MatQ base{rows[0], prow};
    MatQ full{rows[0]};
    for (size_t i = 1; i < 4; ++i) {
      std::vector<Rat> e(4, Rat(0));
      e[i] = 1;
      MatQ probe = full;
      probe.push_back(e);
      probe.push_back(prow);
      if (rank(std::move(probe)) == full.size() + 2) full.push_back(e);
      if (full.size() == 3) break;
    }
    full.push_back(prow);
    RatMap mv = change_map(P3, mat_inverse4(full));
    Poly h2 = normalize_int(move_poly(P3, h, full));
    Poly c2 = normalize_int(move_poly(P3, cone, full));
    LogPair moved = make_pair(P3, {h2, c2});
    add_link(res, mv, cur, moved);
    cur = moved;
    h = h2;
    cone = c2;
  }
  // the product map
  RatMap m = make_map(P3, T, {t, z, x, y, z});
  LogPair tgt = make_pair<Rat>(T, {pvar("s0"), pvar("s1"), cone});
  add_link(res, m, cur, tgt);
  // plane-quadratic moves on the plane-curve factor until toric
  Poly E = cone;
  auto verdict = ordinary_curve_test(E, {"x", "y", "z"});
  if (verdict.type == CurveType::SmoothElliptic) {
    certify(res);
    res.notes.push_back("final form: smooth plane cubic fibre");
    res.target = instance_of(tgt, FamilyTag::C4, {}, false);
    res.target.provenance = "coreg1";
    return res;
  }
  if (verdict.type != CurveType::Nodal) {
    throw std::invalid_argument("fibre curve is not ordinary in this chart: " + verdict.reason);
  }
  Space P2 = Space::P2();
  // iterate quadratic moves on the P2 factor
  std::mt19937_64 rng(0xabcd);
  LogPair cur2 = make_pair<Rat>(P2, {E});
  int rounds = 0;
  while (rounds++ < 4) {
    // factor status
    std::vector<Poly> lines, others;
    for (const auto& f : cur2.boundary) (f.degree() == 1 ? lines : others).push_back(f);
    if (others.empty() && lines.size() == 3) break;  // toric triangle
    // find a rational node of the total curve via the pairwise intersections
    // or the single-component analysis
    Point node;
    bool have_node = false;
    if (cur2.boundary.size() >= 2) {
      // intersection point of two components
      const Poly& f1 = cur2.boundary[0];
      const Poly& f2 = cur2.boundary[1];
      if (f1.degree() == 1) {
        // restrict f2 to the line f1
        MatQ m1(1, std::vector<Rat>(3, Rat(0)));
        auto vars = P2.all_vars();
        for (size_t i = 0; i < 3; ++i) {
          Poly c = f1.coeff_of(vars[i], 1);
          m1[0][i] = c.is_zero() ? Rat(0) : c.constant_value();
        }
        auto basis = nullspace(std::move(m1));
        CurveParam lp = line_through(Point(basis[0].begin(), basis[0].end()),
                                     Point(basis[1].begin(), basis[1].end()));
        std::map<std::string, Poly> a;
        for (size_t i = 0; i < 3; ++i) a[vars[i]] = lp.components[i];
        Poly r = f2.substitute_poly(a);
        BinForm bf = binform_of(r, "s", "u", r.degree());
        auto roots = binform_roots(bf);
        for (const auto& rt : roots.roots) {
          node = rt.at_infinity ? lp.at(Rat(1), Rat(0)) : lp.at(rt.value, Rat(1));
          have_node = true;
          break;
        }
      } else {
        // two conics would not appear here
      }
    } else {
      // irreducible nodal cubic: locate the rational node chartwise
      Poly f = cur2.boundary[0];
      // use the affine machinery chartwise
      for (const auto& ch : {"z", "y", "x"}) {
        Poly fc = f.set_var(ch, Rat(1));
        std::vector<std::string> rest;
        for (const auto& v : P2.all_vars())
          if (v != ch) rest.push_back(v);
        auto rep = affine_curve_singularities(fc, rest[0], rest[1]);
        if (!rep.unresolved && !rep.points.empty()) {
          std::map<std::string, Rat> coords{{rest[0], rep.points[0].u}, {rest[1], rep.points[0].v}, {ch, Rat(1)}};
          node = {coords["x"], coords["y"], coords["z"]};
          have_node = true;
          break;
        }
      }
    }
    if (!have_node) throw std::runtime_error("no rational node found on the fibre curve");
    // two more rational points on a component through... choose on the
    // highest-degree component via parameterization from the node or
    // stereographic for conics
    std::vector<Point> bps{node};
    Poly carrier;
    for (const auto& f : cur2.boundary)
      if (f.degree() >= 2) carrier = f;
    if (carrier.is_zero()) break;  // already lines only
    if (carrier.degree() == 3) {
      // rational parameterization through the node: third intersection of
      // lines through the node
      for (int guard = 0; guard < 200 && bps.size() < 3; ++guard) {
        Point dir{random_rat(rng, 9), random_rat(rng, 9), random_rat(rng, 9)};
        // X(w) = node + w dir; cubic restricted has a double root at w = 0
        std::map<std::string, Poly> a;
        auto vars = P2.all_vars();
        Poly w = pvar("w");
        for (size_t i = 0; i < 3; ++i) a[vars[i]] = Poly(node[i]) + dir[i] * w;
        Poly r = carrier.substitute_poly(a);
        Poly c2p = r.coeff_of("w", 2), c3p = r.coeff_of("w", 3);
        if (c3p.is_zero() || c2p.is_zero()) continue;
        Rat wstar = -c2p.constant_value() / c3p.constant_value();
        if (is_zero(wstar)) continue;
        Point p(3);
        for (size_t i = 0; i < 3; ++i) p[i] = node[i] + wstar * dir[i];
        // non-collinear check happens below
        MatQ mm;
        for (const auto& b : bps) mm.push_back(std::vector<Rat>(b.begin(), b.end()));
        mm.push_back(std::vector<Rat>(p.begin(), p.end()));
        if (rank(std::move(mm)) == std::min<size_t>(bps.size() + 1, 3)) bps.push_back(p);
      }
    } else {
      // conic: stereographic from a rational point: the node lies on the
      // conic (it is an intersection point of the components)
      for (int guard = 0; guard < 200 && bps.size() < 3; ++guard) {
        Point dir{random_rat(rng, 9), random_rat(rng, 9), random_rat(rng, 9)};
        try {
          auto p = second_quadric_point(carrier, P2, node, dir);
          if (!p) continue;
          MatQ mm;
          for (const auto& b : bps) mm.push_back(std::vector<Rat>(b.begin(), b.end()));
          mm.push_back(std::vector<Rat>(p->begin(), p->end()));
          if (rank(std::move(mm)) == std::min<size_t>(bps.size() + 1, 3)) bps.push_back(*p);
        } catch (const std::exception&) {
        }
      }
    }
    if (bps.size() < 3) throw std::runtime_error("could not choose quadratic basepoints");
    StepResult move = plane_quadratic(cur2, bps);
    if (!move.ok()) throw std::runtime_error("plane quadratic move failed to certify");
    // lift to the product space: id x phi
    const RatMap& mp = move.chain.back().map;
    std::vector<Poly> comps{pvar("s0"), pvar("s1")};
    for (const auto& c : mp.components) comps.push_back(c);
    RatMap lifted = make_map<Rat>(T, T, comps);
    std::vector<Poly> nb{pvar("s0"), pvar("s1")};
    for (const auto& f : move.chain.back().target.boundary) nb.push_back(f);
    LogPair t2 = make_pair<Rat>(T, nb);
    add_link(res, lifted, res.chain.back().target, t2);
    cur2 = move.chain.back().target;
  }
  certify(res);
  // final verdict
  std::vector<Poly> lines;
  for (const auto& f : cur2.boundary)
    if (f.degree() == 1) lines.push_back(f);
  if (lines.size() == 3) {
    res.notes.push_back("final form: toric boundary");
    res.target = instance_of(res.chain.back().target, FamilyTag::C4, {}, true);
    res.target.provenance = "toric";
  } else {
    res.notes.push_back("final form: nodal fibre not fully reduced");
    res.target = instance_of(res.chain.back().target, FamilyTag::C4, {}, true);
    res.target.provenance = "partial";
  }
  return res;
}

// ---------------------------------------------------------------------------
// the pipeline

ReductionTrace run_pipeline(const FamilyInstance& inst0) {
  ReductionTrace trace;
  trace.initial = inst0;
  FamilyInstance cur = inst0;
  for (int step = 0; step < 30; ++step) {
    FamilyTag tag = cur.tag;
    if (auto rr = reroute_of(tag)) tag = *rr;
    StepResult sr;
    try {
      switch (tag) {
        case FamilyTag::A1: sr = step_x_triple_point(cur); break;
        case FamilyTag::A2: sr = step_ii(cur); break;
        case FamilyTag::A3: sr = step_i(cur); break;
        case FamilyTag::A4: sr = step_iii(cur); break;
        case FamilyTag::B1: sr = step_iv(cur); break;
        case FamilyTag::B2: sr = step_v(cur); break;
        case FamilyTag::B3: sr = step_vii(cur); break;
        case FamilyTag::C1: sr = step_vi(cur); break;
        case FamilyTag::C2: sr = step_viii(cur); break;
        case FamilyTag::C3: sr = step_ix(cur); break;
        case FamilyTag::C4: {
          sr = endgame_to_toric(cur);
          trace.steps.push_back(sr);
          if (!sr.ok()) {
            trace.notes.push_back("endgame failed to certify");
            return trace;
          }
          for (const auto& v : sr.verdict.steps)
            if (v.status == VPStatus::VolumePreserving) trace.overall_scalar *= v.scalar;
          trace.final_instance = sr.target;
          trace.final_form = sr.target.provenance == "toric" ? "toric" : "coreg1";
          trace.complete = sr.target.provenance != "partial";
          return trace;
        }
        default:
          trace.notes.push_back("no reduction defined for " + to_string(tag));
          return trace;
      }
    } catch (const std::exception& e) {
      trace.notes.push_back(std::string("step failed: ") + e.what());
      return trace;
    }
    trace.steps.push_back(sr);
    if (!sr.ok()) {
      trace.notes.push_back("step did not certify");
      return trace;
    }
    for (const auto& v : sr.verdict.steps)
      if (v.status == VPStatus::VolumePreserving) trace.overall_scalar *= v.scalar;
    // recognized target drives the next step: keep the step's declared tag,
    // refined by the plane-cubic recognizer when a singular cubic shortcut
    // applies
    cur = sr.target;
    if (!sr.reroute && (cur.tag == FamilyTag::C1)) {
      // singular cubic shortcut: the carried node makes it a C3 pair
      auto pr = plane_and_rest(cur.pair);
      if (pr) {
        for (const auto& w : cur.witnesses) {
          if (!std::holds_alternative<PointW>(w)) continue;
          const Point& p = std::get<PointW>(w).coords;
          try {
            if (!is_zero(evaluate_at(pr->first, cur.pair.space, p)) &&
                vanishes_at(pr->second, cur.pair.space, p) &&
                multiplicity_at(pr->second, cur.pair.space, p) >= 2) {
              cur.tag = FamilyTag::C3;
              break;
            }
          } catch (const std::exception&) {
          }
        }
      }
    }
  }
  trace.notes.push_back("step budget exceeded");
  return trace;
}

}  // namespace lcy
