#include "lcy/linsys.hpp"

#include <random>

namespace lcy {

std::map<std::string, Rat> point_assignment(const Space& sp, const Point& p) {
  auto vars = sp.all_vars();
  if (vars.size() != p.size()) throw std::invalid_argument("point size mismatch");
  std::map<std::string, Rat> m;
  for (size_t i = 0; i < vars.size(); ++i) m[vars[i]] = p[i];
  return m;
}

Rat evaluate_at(const Poly& f, const Space& sp, const Point& p) {
  return f.evaluate<Rat>(point_assignment(sp, p));
}

bool vanishes_at(const Poly& f, const Space& sp, const Point& p) {
  return is_zero(evaluate_at(f, sp, p));
}

Point CurveParam::at(const Rat& s, const Rat& u) const {
  std::map<std::string, Rat> a{{"s", s}, {"u", u}};
  Point out;
  for (const auto& c : components) out.push_back(c.evaluate<Rat>(a));
  return out;
}

CurveParam line_through(const Point& p, const Point& q) {
  Poly s = Poly::variable("s"), u = Poly::variable("u");
  CurveParam c;
  for (size_t i = 0; i < p.size(); ++i) c.components.push_back(Rat(p[i]) * s + Rat(q[i]) * u);
  return c;
}

std::vector<Poly> line_forms(const Space& sp, const CurveParam& line) {
  auto vars = sp.all_vars();
  // forms a.v with a . P(s,u) = 0 identically: nullspace of the 2x n matrix
  // of parameter coefficients
  MatQ m(2, std::vector<Rat>(vars.size(), Rat(0)));
  for (size_t i = 0; i < vars.size(); ++i) {
    const Poly& comp = line.components[i];
    m[0][i] = comp.coeff_of("s", 1).is_zero() ? Rat(0) : comp.coeff_of("s", 1).constant_value();
    m[1][i] = comp.coeff_of("u", 1).is_zero() ? Rat(0) : comp.coeff_of("u", 1).constant_value();
  }
  auto basis = nullspace(std::move(m));
  if (basis.size() != vars.size() - 2) throw std::invalid_argument("degenerate line parameterization");
  std::vector<Poly> out;
  for (const auto& v : basis) {
    Poly f;
    for (size_t i = 0; i < vars.size(); ++i)
      if (!is_zero(v[i])) f += Rat(v[i]) * Poly::variable(vars[i]);
    out.push_back(f / rat_content(f));
  }
  return out;
}

CurveParam line_from_forms(const Space& sp, const Poly& f1, const Poly& f2) {
  auto vars = sp.all_vars();
  MatQ m(2, std::vector<Rat>(vars.size(), Rat(0)));
  for (size_t i = 0; i < vars.size(); ++i) {
    m[0][i] = f1.coeff_of(vars[i], 1).is_constant() && !f1.coeff_of(vars[i], 1).is_zero()
                  ? f1.coeff_of(vars[i], 1).constant_value()
                  : Rat(0);
    m[1][i] = f2.coeff_of(vars[i], 1).is_constant() && !f2.coeff_of(vars[i], 1).is_zero()
                  ? f2.coeff_of(vars[i], 1).constant_value()
                  : Rat(0);
  }
  auto basis = nullspace(std::move(m));
  if (basis.size() != 2) throw std::invalid_argument("forms do not cut a line");
  return line_through(Point(basis[0].begin(), basis[0].end()), Point(basis[1].begin(), basis[1].end()));
}

Poly plane_through(const Space& sp, const Point& a, const Point& b, const Point& c) {
  auto vars = sp.all_vars();
  if (vars.size() != 4) throw std::invalid_argument("plane_through expects a 3-space");
  MatQ m{std::vector<Rat>(a.begin(), a.end()), std::vector<Rat>(b.begin(), b.end()),
         std::vector<Rat>(c.begin(), c.end())};
  auto basis = nullspace(std::move(m));
  if (basis.size() != 1) throw std::invalid_argument("points do not span a plane");
  Poly f;
  for (size_t i = 0; i < vars.size(); ++i)
    if (!is_zero(basis[0][i])) f += Rat(basis[0][i]) * Poly::variable(vars[i]);
  return f / rat_content(f);
}

bool lines_meet(const Space& sp, const CurveParam& a, const CurveParam& b) {
  // rank of the 4 x n matrix of the two spanning pairs
  auto vars = sp.all_vars();
  MatQ m;
  for (const CurveParam* line : {&a, &b}) {
    for (const char* pv : {"s", "u"}) {
      std::vector<Rat> row;
      for (size_t i = 0; i < vars.size(); ++i) {
        Poly c = line->components[i].coeff_of(pv, 1);
        row.push_back(c.is_zero() ? Rat(0) : c.constant_value());
      }
      m.push_back(std::move(row));
    }
  }
  return rank(std::move(m)) <= 3;
}

std::optional<Point> second_quadric_point(const Poly& q, const Space& sp, const Point& p, const Point& dir) {
  // q(p + s dir) = s * (2 B(p, dir) + s q(dir)); second root s = -2B/q(dir)
  auto vars = sp.all_vars();
  Poly s = Poly::variable("s");
  std::map<std::string, Poly> a;
  for (size_t i = 0; i < vars.size(); ++i) a[vars[i]] = Poly(Rat(p[i])) + Rat(dir[i]) * s;
  Poly restricted = q.substitute_poly(a);
  // restricted = c1 s + c2 s^2 (c0 = 0 since p lies on q)
  Poly c0 = restricted.coeff_of("s", 0);
  if (!c0.is_zero()) throw std::invalid_argument("base point not on quadric");
  Poly c1 = restricted.coeff_of("s", 1), c2 = restricted.coeff_of("s", 2);
  if (c2.is_zero()) return std::nullopt;           // line hits q once more at infinity only
  if (c1.is_zero()) return std::nullopt;           // line tangent or inside
  Rat sstar = -c1.constant_value() / c2.constant_value();
  Point out(p.size());
  bool all_zero = true;
  for (size_t i = 0; i < p.size(); ++i) {
    out[i] = p[i] + sstar * dir[i];
    all_zero = all_zero && is_zero(out[i]);
  }
  if (all_zero) return std::nullopt;
  return out;
}

std::vector<Point> quadric_points(const Poly& q, const Space& sp, const Point& p, size_t count, uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::vector<Point> out;
  size_t n = p.size();
  for (int attempt = 0; attempt < 400 && out.size() < count; ++attempt) {
    Point dir(n);
    for (auto& c : dir) c = random_rat(rng, 7);
    try {
      auto pt = second_quadric_point(q, sp, p, dir);
      if (!pt) continue;
      bool dup = false;
      for (const auto& prev : out) {
        // projective comparison
        MatQ m{std::vector<Rat>(prev.begin(), prev.end()), std::vector<Rat>(pt->begin(), pt->end())};
        if (rank(std::move(m)) < 2) dup = true;
      }
      if (!dup) out.push_back(*pt);
    } catch (const std::exception&) {
      continue;
    }
  }
  return out;
}

std::optional<CurveParam> conic_param(const Space& sp, const Poly& plane_form, const Poly& quadric,
                                      const Point& base_point, uint64_t seed) {
  // two more points spanning the plane with base_point
  auto vars = sp.all_vars();
  if (!vanishes_at(plane_form, sp, base_point) || !vanishes_at(quadric, sp, base_point)) return std::nullopt;
  // basis of the plane: nullspace of the 1 x n coefficient matrix
  MatQ m(1, std::vector<Rat>(vars.size(), Rat(0)));
  for (size_t i = 0; i < vars.size(); ++i) {
    Poly c = plane_form.coeff_of(vars[i], 1);
    m[0][i] = c.is_zero() ? Rat(0) : c.constant_value();
  }
  auto basis = nullspace(std::move(m));
  if (basis.size() != 3) return std::nullopt;
  // plane points: base + s b1 + u b2 for a basis adapted so base_point is a member
  // parameterize conic by lines in the plane through base_point:
  // P(s, u) = second intersection of line base->(s b1 + u b2 + suitable) with quadric
  // use the classical trick: point = q(dir) * base - 2B(base, dir) * dir, dir in the plane
  std::mt19937_64 rng(seed);
  Poly s = Poly::variable("s"), u = Poly::variable("u");
  // dir(s, u) = s * d1 + u * d2 where d1, d2 are plane points independent of base
  std::vector<Point> dirs;
  for (const auto& v : basis) {
    Point d(v.begin(), v.end());
    MatQ chk{std::vector<Rat>(base_point.begin(), base_point.end()), std::vector<Rat>(d.begin(), d.end())};
    if (rank(std::move(chk)) == 2) dirs.push_back(d);
    if (dirs.size() == 2) break;
  }
  if (dirs.size() < 2) return std::nullopt;
  // symbolic second-intersection formula
  std::map<std::string, Poly> a;
  for (size_t i = 0; i < vars.size(); ++i)
    a[vars[i]] = Poly(Rat(base_point[i])) + (Rat(dirs[0][i]) * s + Rat(dirs[1][i]) * u) * Poly::variable("w");
  Poly restricted = quadric.substitute_poly(a);
  Poly c1 = restricted.coeff_of("w", 1), c2 = restricted.coeff_of("w", 2);
  if (c2.is_zero()) return std::nullopt;
  CurveParam out;
  for (size_t i = 0; i < vars.size(); ++i) {
    // second intersection of the line base + w * dir(s,u): c2 * base - c1 * dir
    Poly comp = c2 * Rat(base_point[i]) - c1 * (Rat(dirs[0][i]) * s + Rat(dirs[1][i]) * u);
    out.components.push_back(comp);
  }
  // validate
  std::map<std::string, Poly> chk;
  for (size_t i = 0; i < vars.size(); ++i) chk[vars[i]] = out.components[i];
  if (!quadric.substitute_poly(chk).is_zero() || !plane_form.substitute_poly(chk).is_zero()) return std::nullopt;
  return out;
}

std::vector<Poly> monomial_basis(const Space& sp, long degree) {
  if (sp.blocks.size() != 1) throw std::invalid_argument("monomial_basis expects a single grading block");
  for (long w : sp.blocks[0].weights)
    if (w != 1) throw std::invalid_argument("monomial_basis expects weight-one variables");
  auto vars = sp.all_vars();
  std::vector<Poly> out;
  for (auto& e : monomials_up_to(vars.size(), int(degree))) {
    if (long(expo_total(e)) != degree) continue;
    Poly m(Rat(1));
    for (size_t i = 0; i < vars.size(); ++i)
      if (e[i]) m *= Poly::variable(vars[i]).pow(e[i]);
    out.push_back(m);
  }
  return out;
}

std::vector<Poly> solve_linear_system(const Space& sp, long degree, const std::vector<LinCondition>& conds) {
  auto basis = monomial_basis(sp, degree);
  auto vars = sp.all_vars();
  MatQ rows;
  auto add_curve_rows = [&](const CurveParam& curve, const Poly& form) {
    // coefficients of form(P(s,u)) as a binary form in (s, u)
    std::map<std::string, Poly> a;
    for (size_t i = 0; i < vars.size(); ++i) a[vars[i]] = curve.components[i];
    return form.substitute_poly(a);
  };
  std::vector<std::vector<Poly>> row_groups;  // per condition, per basis element: residual
  size_t ncols = basis.size();
  std::vector<std::vector<Poly>> residuals;
  for (const auto& cond : conds) {
    std::vector<Poly> res;
    switch (cond.kind) {
      case LinCondition::VanishOnCurve:
        for (const auto& b : basis) res.push_back(add_curve_rows(cond.curve, b));
        residuals.push_back(std::move(res));
        break;
      case LinCondition::DoubleOnCurve: {
        for (const auto& v : vars) {
          std::vector<Poly> part;
          for (const auto& b : basis) part.push_back(add_curve_rows(cond.curve, b.derivative(v)));
          residuals.push_back(std::move(part));
        }
        break;
      }
      case LinCondition::ThroughPoint: {
        std::vector<Poly> part;
        for (const auto& b : basis) part.push_back(Poly(evaluate_at(b, sp, cond.point)));
        residuals.push_back(std::move(part));
        break;
      }
      case LinCondition::DoublePoint: {
        for (const auto& v : vars) {
          std::vector<Poly> part;
          for (const auto& b : basis) part.push_back(Poly(evaluate_at(b.derivative(v), sp, cond.point)));
          residuals.push_back(std::move(part));
        }
        break;
      }
    }
  }
  // expand each residual group into coefficient rows over (s, u) monomials
  for (const auto& group : residuals) {
    // collect all (s,u) exponents appearing
    std::map<std::pair<int, int>, size_t> keys;
    for (const auto& r : group)
      for (int ds = 0; ds <= r.degree_in("s"); ++ds)
        for (int du = 0; du <= r.degree_in("u"); ++du) {
          Poly c = r.coeff_of("s", ds).coeff_of("u", du);
          if (!c.is_zero()) keys.emplace(std::make_pair(ds, du), 0);
        }
    if (keys.empty()) continue;
    size_t base_row = rows.size();
    size_t k = 0;
    for (auto& [key, idx] : keys) idx = k++;
    rows.resize(base_row + keys.size(), std::vector<Rat>(ncols, Rat(0)));
    for (size_t c = 0; c < group.size(); ++c) {
      for (auto& [key, idx] : keys) {
        Poly coeff = group[c].coeff_of("s", key.first).coeff_of("u", key.second);
        rows[base_row + idx][c] = coeff.is_zero() ? Rat(0) : coeff.constant_value();
      }
    }
  }
  if (rows.empty()) rows.assign(1, std::vector<Rat>(ncols, Rat(0)));
  auto null_basis = nullspace(std::move(rows));
  std::vector<Poly> out;
  for (const auto& v : null_basis) {
    Poly f;
    for (size_t i = 0; i < ncols; ++i)
      if (!is_zero(v[i])) f += Rat(v[i]) * basis[i];
    out.push_back(f / rat_content(f));
  }
  return out;
}

RatMap linear_system_map(const Space& src, const Space& tgt, long degree, const std::vector<LinCondition>& conds) {
  auto sols = solve_linear_system(src, degree, conds);
  size_t expected = tgt.var_count();
  if (sols.size() != expected)
    throw std::invalid_argument("linear system dimension " + std::to_string(sols.size()) + ", expected " +
                                std::to_string(expected));
  return make_map(src, tgt, std::move(sols));
}

}  // namespace lcy
