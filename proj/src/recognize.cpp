#include "lcy/family.hpp"

namespace lcy {

namespace {

// ---------------------------------------------------------------------------
// coordinate normalizations for the weighted-order shape tests

// linear change sending the line V(f1, f2) to V(y, z): returns the matrix m
// with new coordinates = m-substitution (pair transforms via transform_pair)
std::optional<MatQ> line_normalizing_change(const Space& sp, const Poly& f1, const Poly& f2) {
  auto vars = sp.all_vars();
  size_t n = vars.size();
  if (n != 4) return std::nullopt;
  // rows of the new coordinate functions in terms of old: want
  // (t', x', y', z') = (c0, c1, f1, f2) with c0, c1 completing a basis
  auto coeffs = [&](const Poly& f) {
    std::vector<Rat> row(n, Rat(0));
    for (size_t i = 0; i < n; ++i) {
      Poly c = f.coeff_of(vars[i], 1);
      row[i] = c.is_zero() ? Rat(0) : c.constant_value();
    }
    return row;
  };
  std::vector<Rat> r1 = coeffs(f1), r2 = coeffs(f2);
  // complete to a basis with unit vectors
  MatQ m;
  for (size_t i = 0; i < n && m.size() < 2; ++i) {
    std::vector<Rat> e(n, Rat(0));
    e[i] = 1;
    MatQ probe = m;
    probe.push_back(e);
    probe.push_back(r1);
    probe.push_back(r2);
    if (rank(probe) == m.size() + 3) m.push_back(e);
  }
  if (m.size() != 2) return std::nullopt;
  m.push_back(r1);
  m.push_back(r2);
  // new coords C = m * old: but transform_pair substitutes old_i -> sum m[i][j] new_j
  // we need the inverse relation: old = m^{-1} C, so substitute with m^{-1}
  // transform_pair(pair, M) maps F to F(M v); we want G(v') = F(old(v')) = F(m^{-1} v')
  MatQ a = m;
  for (size_t i = 0; i < n; ++i)
    for (size_t j = 0; j < n; ++j) a[i].push_back(i == j ? Rat(1) : Rat(0));
  rref(a);
  MatQ inv(n, std::vector<Rat>(n));
  for (size_t i = 0; i < n; ++i) {
    if (is_zero(a[i][i])) return std::nullopt;
    for (size_t j = 0; j < n; ++j) inv[i][j] = a[i][j + n];
  }
  return inv;
}

struct ANormalized {
  bool ok = false;
  Poly f;         // local affine equation with roles assigned
  std::string zv, yv, xv;
  std::string note;
};

// normalize a multiplicity-two local equation: rank-one 2-jet direction to
// zv, the cube direction of the residual cubic to yv
ANormalized a_normalize(const Poly& f_in, const std::vector<std::string>& vars) {
  ANormalized out;
  Poly f = f_in;
  if (origin_order(f) != 2) {
    out.note = "multiplicity is not two";
    return out;
  }
  Poly q = total_degree_part(f, 2);
  if (quadratic_rank(q, vars) != 1) {
    out.note = "quadratic rank is not one";
    return out;
  }
  auto l = quadratic_rank_one_direction(q, vars);
  if (!l) {
    out.note = "rank-one direction not rational";
    return out;
  }
  std::string zv;
  for (const auto& v : vars)
    if (l->has_var(v)) zv = v;
  {
    Rat a = l->coeff_of(zv, 1).constant_value();
    Poly rest = *l - a * Poly::variable(zv);
    std::map<std::string, Poly> sub{{zv, (Poly::variable(zv) - rest) / a}};
    f = f.substitute_poly(sub);
  }
  std::vector<std::string> others;
  for (const auto& v : vars)
    if (v != zv) others.push_back(v);
  // cube direction from the z-free cubic part
  Poly g3 = total_degree_part(f.coeff_of(zv, 0), 3);
  if (g3.is_zero()) {
    out.note = "no cubic residual";
    return out;
  }
  BinForm bf;
  try {
    bf = binform_of(g3, others[0], others[1], 3);
  } catch (const std::exception&) {
    out.note = "cubic residual not binary";
    return out;
  }
  // g3 must be a perfect cube of a line
  UPoly u = bf.dehomogenized();
  int infm = bf.inf_multiplicity();
  std::string yv, xv;
  if (infm == 3) {
    yv = others[1];
    xv = others[0];
  } else if (udeg(u) == 3) {
    UPoly G = ugcd(u, uderiv(u));
    if (udeg(G) != 2) {
      out.note = "cubic residual is not a cube";
      return out;
    }
    UPoly G2 = ugcd(G, uderiv(G));
    if (udeg(G2) != 1) {
      out.note = "cubic residual is not a cube";
      return out;
    }
    Rat r = -G2[0] / G2[1];
    // repeated line: x - r y; rotate it to the y role
    Poly X = Poly::variable(others[0]), Y = Poly::variable(others[1]);
    if (is_zero(r)) {
      yv = others[0];
      xv = others[1];
    } else {
      std::map<std::string, Poly> sub{{others[0], X + r * Y}};
      // after x -> x + r y the factor (x - r y) becomes... substitute so the
      // line becomes a coordinate: new x := x - r y means old x = new x + r y
      f = f.substitute_poly(sub);
      yv = others[0];
      xv = others[1];
      // verify: cubic part should now be proportional to yv^3
      Poly g3b = total_degree_part(f.coeff_of(zv, 0), 3);
      Poly probe = g3b.coeff_of(yv, 3);
      if ((g3b - Poly::variable(yv).pow(3) * probe).is_zero() && probe.is_constant()) {
        // fine
      } else {
        out.note = "cube normalization failed";
        return out;
      }
    }
  } else {
    out.note = "cubic residual is not a cube";
    return out;
  }
  out.ok = true;
  out.f = f;
  out.zv = zv;
  out.yv = yv;
  out.xv = xv;
  return out;
}

bool a1_test(const Poly& F, const Space& sp, const Point& p, std::string& ev) {
  int m = multiplicity_at(F, sp, p);
  if (m >= 3) {
    ev = "multiplicity " + std::to_string(m) + " at " + witness_str(PointW{p});
    return true;
  }
  return false;
}

bool a2_test(const Poly& F, const Space& sp, const Point& p, std::string& ev) {
  auto [f, vars] = local_equation(F, sp, p);
  if (origin_order(f) != 2) return false;
  Poly q = total_degree_part(f, 2);
  if (quadratic_rank(q, vars) != 1) return false;
  auto l = quadratic_rank_one_direction(q, vars);
  if (!l) return false;
  std::string zv;
  for (const auto& v : vars)
    if (l->has_var(v)) zv = v;
  Rat a = l->coeff_of(zv, 1).constant_value();
  Poly rest = *l - a * Poly::variable(zv);
  std::map<std::string, Poly> sub{{zv, (Poly::variable(zv) - rest) / a}};
  Poly g = f.substitute_poly(sub);
  std::map<std::string, long> w;
  for (const auto& v : vars) w[v] = v == zv ? 2 : 1;
  long ord = g.weighted_order(w);
  if (ord >= 4) {
    ev = "weighted order " + std::to_string(ord) + " >= 4 for weights (0,1,1,2)";
    return true;
  }
  return false;
}

bool a3_test(const Poly& F, const Space& sp, const Point& p, std::string& ev) {
  auto [f, vars] = local_equation(F, sp, p);
  auto n = a_normalize(f, vars);
  if (!n.ok) return false;
  std::map<std::string, long> w{{n.zv, 3}, {n.yv, 2}, {n.xv, 1}};
  long ord = n.f.weighted_order(w);
  if (ord >= 6) {
    ev = "weighted order " + std::to_string(ord) + " >= 6 for weights (0,1,2,3)";
    return true;
  }
  return false;
}

bool a4_test(const Poly& F, const Space& sp, const Point& p, std::string& ev) {
  auto [f, vars] = local_equation(F, sp, p);
  auto n = a_normalize(f, vars);
  if (!n.ok) return false;
  // substituted weight: remove the x^2-part of the double direction
  Poly a0p = total_degree_part(n.f, 2).coeff_of(n.zv, 2);
  if (!a0p.is_constant() || a0p.is_zero()) return false;
  Rat a0 = a0p.constant_value();
  Poly c1 = n.f.coeff_of(n.zv, 1);
  Poly kq = c1.coeff_of(n.xv, 2);
  Rat kappa = kq.is_zero() ? Rat(0) : (kq.coeff_of(n.yv, 0).is_zero() ? Rat(0) : kq.coeff_of(n.yv, 0).constant_value());
  if (is_zero(kappa)) return false;  // no tz + x^2 structure
  std::map<std::string, Poly> sub{
      {n.zv, Poly::variable(n.zv) - (kappa / (2 * a0)) * Poly::variable(n.xv) * Poly::variable(n.xv)}};
  Poly g = n.f.substitute_poly(sub);
  std::map<std::string, long> w{{n.zv, 3}, {n.yv, 2}, {n.xv, 1}};
  long ord = g.weighted_order(w);
  if (ord >= 6) {
    ev = "weighted order " + std::to_string(ord) + " >= 6 for the substituted weights (0,1,2,2,3)";
    return true;
  }
  return false;
}

}  // namespace

// ---------------------------------------------------------------------------
// coregularity assembly

CoregularityResult pair_coregularity(const LogPair& pair, const std::vector<Witness>& witnesses) {
  CoregularityInput in;
  in.boundary_irreducible = pair.boundary.size() == 1;
  const Space& sp = pair.space;
  Poly F = pair.boundary_product();
  bool weighted = false;
  for (const auto& b : sp.blocks)
    for (long w : b.weights) weighted = weighted || w != 1;

  if (pair.boundary.size() >= 3 || sp.blocks.size() > 1) {
    // triple intersections force maximality; product boundaries include the
    // two torus-fixed fibres meeting the horizontal part
    if (sp.blocks.size() > 1) {
      // boundary of the product threefold: fibre components and a horizontal
      // component cut by a plane curve E: coregularity is decided by E
      for (const auto& f : pair.boundary) {
        auto d = multidegree(sp, f);
        if (!d) continue;
        // horizontal component: degree 0 in the first block
        if ((*d)[0] == 0 && (*d)[1] == 3) {
          auto cv = ordinary_curve_test(f, sp.blocks[1].vars);
          in.lc_curves.push_back(cv);
        }
      }
      if (in.lc_curves.empty()) {
        // toric boundary with no horizontal cubic
        in.has_triple_intersection_point = true;
      } else if (in.lc_curves[0].type == CurveType::Nodal) {
        in.has_triple_intersection_point = true;
      }
      return coregularity(in);
    }
    // three or more components in a projective space: look for a triple point
    for (size_t i = 0; i < pair.boundary.size() && !in.has_triple_intersection_point; ++i)
      for (size_t j = i + 1; j < pair.boundary.size() && !in.has_triple_intersection_point; ++j) {
        auto d1 = multidegree(sp, pair.boundary[i]);
        auto d2 = multidegree(sp, pair.boundary[j]);
        if ((*d1)[0] != 1 || (*d2)[0] != 1) continue;
        CurveParam line;
        try {
          line = line_from_forms(sp, pair.boundary[i], pair.boundary[j]);
        } catch (const std::exception&) {
          continue;
        }
        for (size_t k = 0; k < pair.boundary.size(); ++k) {
          if (k == i || k == j) continue;
          std::map<std::string, Poly> a;
          auto vars = sp.all_vars();
          for (size_t v = 0; v < vars.size(); ++v) a[vars[v]] = line.components[v];
          Poly restr = pair.boundary[k].substitute_poly(a);
          if (!restr.is_constant()) in.has_triple_intersection_point = true;  // a form on the line has zeros
          if (restr.is_zero()) in.has_triple_intersection_point = true;
        }
      }
    return coregularity(in);
  }

  if (pair.boundary.size() == 2 && !weighted) {
    // intersection curve
    std::vector<long> degs;
    for (const auto& f : pair.boundary) degs.push_back((*multidegree(sp, f))[0]);
    if ((degs[0] == 1 && degs[1] == 3) || (degs[0] == 3 && degs[1] == 1)) {
      const Poly& plane = degs[0] == 1 ? pair.boundary[0] : pair.boundary[1];
      const Poly& cubic = degs[0] == 1 ? pair.boundary[1] : pair.boundary[0];
      // restrict the cubic to the plane via a basis parameterization
      auto vars = sp.all_vars();
      MatQ m(1, std::vector<Rat>(vars.size(), Rat(0)));
      for (size_t i = 0; i < vars.size(); ++i) {
        Poly c = plane.coeff_of(vars[i], 1);
        m[0][i] = c.is_zero() ? Rat(0) : c.constant_value();
      }
      auto basis = nullspace(std::move(m));
      std::map<std::string, Poly> subst;
      std::vector<std::string> pvars = {"pu", "pv", "pw"};
      for (size_t i = 0; i < vars.size(); ++i) {
        Poly s;
        for (size_t b = 0; b < 3; ++b)
          if (!is_zero(basis[b][i])) s += basis[b][i] * Poly::variable(pvars[b]);
        subst[vars[i]] = s;
      }
      Poly sigma = cubic.substitute_poly(subst);
      in.lc_curves.push_back(ordinary_curve_test(sigma, pvars));
      // singular points of the cubic component contribute
      auto rep = surface_singular_points(cubic, sp);
      if (rep.unresolved) in.inventory_complete = false;
      for (const auto& p : rep.rational_points) in.points.push_back(classify_at_point(F, sp, p));
      if (rep.has_irrational && !rep.smooth && rep.reason != "positive-dimensional singular locus")
        in.inventory_complete = false;
      if (rep.reason == "positive-dimensional singular locus") {
        // a non-normal cubic component: the union has a richer structure;
        // treat only the cone case, where the double structure lies in the
        // intersection inventory already
      }
    } else if (degs[0] == 2 && degs[1] == 2) {
      in.lc_curves.push_back(quadric_pencil_curve_type(pair.boundary[0], pair.boundary[1], sp));
      for (const auto& qd : pair.boundary) {
        auto rep = surface_singular_points(qd, sp);
        for (const auto& p : rep.rational_points) in.points.push_back(classify_at_point(F, sp, p));
      }
    }
    return coregularity(in);
  }

  if (pair.boundary.size() == 2 && weighted) {
    // weighted-space pairs: the plane and the del Pezzo member meet in a
    // curve; certify via the weight-one chart of the plane component
    in.inventory_complete = false;  // detailed orbifold bookkeeping is not
                                    // attempted; the pipeline re-certifies on
                                    // the projective models
    return coregularity(in);
  }

  // irreducible quartic
  std::vector<Point> pts;
  for (const auto& w : witnesses)
    if (std::holds_alternative<PointW>(w)) pts.push_back(std::get<PointW>(w).coords);
  bool have_curve_witness = false;
  for (const auto& w : witnesses) {
    if (std::holds_alternative<LineOnSurfaceW>(w)) {
      const auto& lw = std::get<LineOnSurfaceW>(w);
      auto chg = line_normalizing_change(sp, lw.f1, lw.f2);
      if (!chg) continue;
      LogPair moved = transform_pair(pair, *chg);
      auto scan = pinch_and_cusp_scan(moved.boundary_product(), sp);
      in.lc_curves.push_back(scan.double_curve);
      have_curve_witness = true;
      for (const auto& d : scan.degenerate_loci) {
        SingularityType st;
        st.tag = SingTag::DegenerateCusp;
        st.detail = "degenerate cusp locus on the double line";
        if (d.triple_point) st.detail = "triple point on the double line";
        in.points.push_back(st);
      }
    } else if (std::holds_alternative<ConicOnSurfaceW>(w)) {
      const auto& cw = std::get<ConicOnSurfaceW>(w);
      // branch form of the normalization double curve over the conic
      auto par = conic_param(sp, cw.plane, cw.quadric, cw.base_point, 23);
      if (!par) continue;
      auto dec = double_along_conic(F, {cw.plane, cw.quadric});
      if (!dec.holds) continue;
      // F = a q^2 + b t q + c t^2; branch where b^2 - 4 a c = 0 on the conic
      Poly delta = dec.decomposition[1] * dec.decomposition[1] -
                   Rat(4) * (dec.decomposition[0] * dec.decomposition[2]);
      std::map<std::string, Poly> a;
      auto vars = sp.all_vars();
      for (size_t i = 0; i < vars.size(); ++i) a[vars[i]] = par->components[i];
      Poly branch = delta.substitute_poly(a);
      if (branch.is_zero()) {
        CurveTypeVerdict v;
        v.type = CurveType::Other;
        v.reason = "identically degenerate branch form";
        in.lc_curves.push_back(v);
      } else {
        BinForm bf = binform_of(branch, "s", "u", branch.degree());
        in.lc_curves.push_back(double_cover_curve_type(bf));
      }
      have_curve_witness = true;
    } else if (std::holds_alternative<TwistedCubicFrameW>(w)) {
      const auto& fw = std::get<TwistedCubicFrameW>(w);
      auto dec = double_along_twisted_cubic(F, {fw.xi1, fw.xi2, fw.xi3});
      if (!dec.holds) continue;
      // secant tangency branch form on the conic in frame space
      // conic: sum a_ij c_i c_j; tangency locus: c2^2 - 4 c1 c3
      // parameterize the conic from a rational point if supplied
      const SecantLineTripleW* sec = nullptr;
      for (const auto& w2 : witnesses)
        if (std::holds_alternative<SecantLineTripleW>(w2)) sec = &std::get<SecantLineTripleW>(w2);
      if (!sec) {
        in.inventory_complete = false;
        continue;
      }
      // build the conic as a polynomial in frame coordinates (c1, c2, c3)
      Poly c1 = Poly::variable("c1"), c2 = Poly::variable("c2"), c3 = Poly::variable("c3");
      const auto& a = dec.frame_coefficients;  // a11 a12 a13 a22 a23 a33
      Poly gamma = a[0] * c1 * c1 + a[1] * c1 * c2 + a[2] * c1 * c3 + a[3] * c2 * c2 + a[4] * c2 * c3 +
                   a[5] * c3 * c3;
      Space frame_space = Space::weighted("frame", {"c1", "c2", "c3"}, {1, 1, 1});
      auto par = conic_param(frame_space, Poly(), gamma, sec->gamma_points[0], 29);
      // conic_param expects a plane form: in the plane P2 case pass zero
      if (!par) {
        in.inventory_complete = false;
        continue;
      }
      Poly disc = c2 * c2 - Rat(4) * (c1 * c3);
      std::map<std::string, Poly> sub{{"c1", par->components[0]}, {"c2", par->components[1]}, {"c3", par->components[2]}};
      Poly branch = disc.substitute_poly(sub);
      if (branch.is_zero()) {
        CurveTypeVerdict v;
        v.type = CurveType::Other;
        v.reason = "identically degenerate tangency form";
        in.lc_curves.push_back(v);
      } else {
        BinForm bf = binform_of(branch, "s", "u", branch.degree());
        in.lc_curves.push_back(double_cover_curve_type(bf));
      }
      have_curve_witness = true;
    }
  }
  for (const auto& p : pts) in.points.push_back(classify_at_point(F, sp, p));
  if (pts.empty() && !have_curve_witness) {
    auto rep = surface_singular_points(F, sp);
    if (rep.unresolved || rep.has_irrational) in.inventory_complete = false;
    if (!rep.unresolved)
      for (const auto& p : rep.rational_points) in.points.push_back(classify_at_point(F, sp, p));
  }
  return coregularity(in);
}

// ---------------------------------------------------------------------------
// the recognizer

RecognitionResult recognize_family(const LogPair& pair, const std::vector<Witness>& witnesses) {
  RecognitionResult R;
  const Space& sp = pair.space;
  auto add = [&](FamilyTag t, const std::string& ev) {
    if (!R.has(t)) R.matches.push_back(t);
    R.evidence.push_back(to_string(t) + ": " + ev);
  };

  bool weighted = false;
  for (const auto& b : sp.blocks)
    for (long w : b.weights) weighted = weighted || w != 1;
  if (weighted && sp.blocks.size() == 1) {
    // the auxiliary weighted-space families: a weight-one plane plus a
    // del Pezzo member
    long anti = sp.anticanonical_degree()[0];
    if (pair.boundary.size() == 2) {
      if (anti == 7) add(FamilyTag::D1, "plane plus sextic on P(1,1,2,3)");
      if (anti == 5) add(FamilyTag::D2, "plane plus quartic on P(1,1,1,2)");
    }
    if (!R.matches.empty()) {
      R.tag = R.matches.front();
      R.coreg = pair_coregularity(pair, witnesses);
      return R;
    }
  }

  if (pair.boundary.size() >= 2 && !weighted && sp.blocks.size() == 1) {
    std::vector<long> degs;
    for (const auto& f : pair.boundary) degs.push_back((*multidegree(sp, f))[0]);
    // plane + cubic style partitions
    auto vars = sp.all_vars();
    for (size_t pi = 0; pi < pair.boundary.size(); ++pi) {
      if (degs[pi] != 1) continue;
      Poly cubic(Rat(1));
      for (size_t j = 0; j < pair.boundary.size(); ++j)
        if (j != pi) cubic *= pair.boundary[j];
      // cone test: all second partials share a zero (rank of the coefficient
      // matrix of the ten linear forms)
      MatQ m;
      for (size_t i = 0; i < vars.size(); ++i)
        for (size_t j = i; j < vars.size(); ++j) {
          Poly d2 = cubic.derivative(vars[i]).derivative(vars[j]);
          std::vector<Rat> row(vars.size(), Rat(0));
          for (size_t k = 0; k < vars.size(); ++k) {
            Poly c = d2.coeff_of(vars[k], 1);
            row[k] = c.is_zero() ? Rat(0) : c.constant_value();
          }
          m.push_back(std::move(row));
        }
      auto vertex = nullspace(m);
      if (!vertex.empty()) {
        add(FamilyTag::C4, "plane plus cone over a cubic curve");
      } else {
        auto rep = surface_singular_points(cubic, sp);
        if (!rep.unresolved && !rep.smooth)
          add(FamilyTag::C3, "plane plus singular cubic surface");
        else if (!rep.unresolved && rep.smooth)
          add(FamilyTag::C1, "plane plus smooth cubic surface");
      }
    }
    // two-quadric partitions
    if (pair.boundary.size() == 2 && degs[0] == 2 && degs[1] == 2) add(FamilyTag::C2, "union of two quadrics");
    if (pair.boundary.size() == 3) {
      // e.g. plane + plane + quadric partitions as two quadrics
      int ones = 0, twos = 0;
      for (long d : degs) (d == 1 ? ones : twos)++;
      if (ones == 2 && twos == 1) add(FamilyTag::C2, "plane pair plus quadric as two quadrics");
    }
    // precedence: most reduced first
    for (FamilyTag t : {FamilyTag::C4, FamilyTag::C3, FamilyTag::C2, FamilyTag::C1})
      if (R.has(t)) {
        R.tag = t;
        break;
      }
    R.coreg = pair_coregularity(pair, witnesses);
    return R;
  }

  // irreducible quartic in a 3-space
  Poly F = pair.boundary_product();

  // B-shape tests from witnesses
  std::vector<LineOnSurfaceW> line_ws;
  for (const auto& w : witnesses) {
    if (std::holds_alternative<LineOnSurfaceW>(w)) {
      const auto& lw = std::get<LineOnSurfaceW>(w);
      auto chg = line_normalizing_change(sp, lw.f1, lw.f2);
      if (!chg) continue;
      LogPair moved = transform_pair(pair, *chg);
      auto sq = double_along_line(moved.boundary_product(), {Poly::variable("y"), Poly::variable("z")});
      if (sq.holds) {
        line_ws.push_back(lw);
      }
    } else if (std::holds_alternative<ConicOnSurfaceW>(w)) {
      const auto& cw = std::get<ConicOnSurfaceW>(w);
      auto sq = double_along_conic(F, {cw.plane, cw.quadric});
      if (sq.holds) add(FamilyTag::B2, "double points along the conic " + witness_str(w));
    } else if (std::holds_alternative<TwistedCubicFrameW>(w)) {
      const auto& fw = std::get<TwistedCubicFrameW>(w);
      auto sq = double_along_twisted_cubic(F, {fw.xi1, fw.xi2, fw.xi3});
      if (sq.holds) add(FamilyTag::B3, "double points along the twisted cubic frame");
    }
  }
  // witness-free search in standard position: coordinate lines, coordinate
  // plane conics, the standard frame
  if (line_ws.empty()) {
    auto vars = sp.all_vars();
    for (size_t i = 0; i < vars.size(); ++i)
      for (size_t j = i + 1; j < vars.size(); ++j) {
        auto chg = line_normalizing_change(sp, Poly::variable(vars[i]), Poly::variable(vars[j]));
        if (!chg) continue;
        LogPair moved = transform_pair(pair, *chg);
        auto sq = double_along_line(moved.boundary_product(), {Poly::variable("y"), Poly::variable("z")});
        if (sq.holds) {
          line_ws.push_back(LineOnSurfaceW{Poly::variable(vars[i]), Poly::variable(vars[j])});
          break;
        }
      }
  }
  if (!R.has(FamilyTag::B2)) {
    auto vars = sp.all_vars();
    for (const auto& v : vars) {
      Poly f0 = F.set_var(v, Rat(0));
      if (f0.is_zero()) continue;
      Rat lead = f0.leading_coeff();
      auto root = poly_square_root(f0 / lead);
      if (!root) continue;
      // F0 = lead * root^2; fold the scale into the quadric when square
      auto sq = double_along_conic(F, {Poly::variable(v), *root});
      if (sq.holds) add(FamilyTag::B2, "double points along a coordinate-plane conic");
    }
  }
  if (!R.has(FamilyTag::B3) && sp.all_vars() == std::vector<std::string>{"t", "x", "y", "z"}) {
    auto fr = TwistedCubicFrame::standard();
    auto sq = double_along_twisted_cubic(F, fr);
    if (sq.holds) add(FamilyTag::B3, "double points along the standard twisted cubic");
  }
  if (!line_ws.empty()) {
    if (line_ws.size() >= 3) {
      add(FamilyTag::B4, "double along three lines; reroute to the triple point");
    } else if (line_ws.size() == 2) {
      add(FamilyTag::B1star, "double along two skew lines; treated as a single-line case");
    } else {
      add(FamilyTag::B1, "double points along the line " + witness_str(Witness(line_ws.front())));
    }
  }

  // A-shape tests at witnessed or discovered points
  std::vector<Point> pts;
  for (const auto& w : witnesses)
    if (std::holds_alternative<PointW>(w)) pts.push_back(std::get<PointW>(w).coords);
  if (pts.empty() && line_ws.empty() && !R.has(FamilyTag::B2) && !R.has(FamilyTag::B3)) {
    auto rep = surface_singular_points(F, sp);
    if (!rep.unresolved)
      for (const auto& p : rep.rational_points) pts.push_back(p);
    if (rep.smooth) {
      add(FamilyTag::Coreg2, "smooth quartic surface");
    }
  }
  int e7_points = 0, e8_points = 0;
  for (const auto& p : pts) {
    std::string ev;
    if (a1_test(F, sp, p, ev)) {
      add(FamilyTag::A1, ev);
      continue;
    }
    if (a2_test(F, sp, p, ev)) {
      add(FamilyTag::A2, ev);
      ++e7_points;
      continue;
    }
    if (a3_test(F, sp, p, ev)) {
      add(FamilyTag::A3, ev);
      ++e8_points;
      continue;
    }
    if (a4_test(F, sp, p, ev)) {
      add(FamilyTag::A4, ev);
      ++e8_points;
      continue;
    }
  }
  if (e7_points >= 2) add(FamilyTag::A2star, "two elliptic points of the same kind");
  if (e8_points >= 2) add(FamilyTag::A3star, "two elliptic points of the same kind");
  if (R.matches.empty() && pts.empty()) {
    // no singular structure found
    R.tag = FamilyTag::Unresolved;
    R.evidence.push_back("no witnesses and no rational singular points found");
    R.coreg = pair_coregularity(pair, witnesses);
    return R;
  }
  if (R.matches.empty()) {
    // singular points exist but match no shape: points may be Du Val only
    bool all_duval = true;
    for (const auto& p : pts) {
      auto st = classify_at_point(F, sp, p);
      all_duval = all_duval && (st.tag == SingTag::DuVal || st.tag == SingTag::NonSingular);
    }
    if (all_duval)
      add(FamilyTag::Coreg2, "only Du Val singular points");
    else
      R.evidence.push_back("singular points match no catalogued shape");
  }
  static const FamilyTag precedence[] = {FamilyTag::C4, FamilyTag::C3,     FamilyTag::C2, FamilyTag::C1,
                                         FamilyTag::B4, FamilyTag::A1,     FamilyTag::B3, FamilyTag::B2,
                                         FamilyTag::B1star, FamilyTag::B1, FamilyTag::A2, FamilyTag::A3,
                                         FamilyTag::A4, FamilyTag::Coreg2};
  for (FamilyTag t : precedence)
    if (R.has(t)) {
      R.tag = t;
      break;
    }
  if (R.tag == FamilyTag::Unresolved && !R.matches.empty()) R.tag = R.matches.front();
  R.reroute = reroute_of(R.tag);
  R.coreg = pair_coregularity(pair, witnesses);
  return R;
}

}  // namespace lcy
