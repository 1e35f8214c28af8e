#include "lcy/family.hpp"

#include <cstdio>
#include <cstdlib>

namespace lcy {

namespace {

struct Rng {
  std::mt19937_64 eng;
  long bound;
  Rat rnd() { return random_rat(eng, bound); }
  Rat rnd_nonzero() { return random_nonzero_rat(eng, bound); }
  long rint(long lo, long hi) { return std::uniform_int_distribution<long>(lo, hi)(eng); }
};

Poly pvar(const std::string& v) { return Poly::variable(v); }

// random form of the given weighted degree
Poly random_form(Rng& rng, const std::vector<std::string>& vars, const std::vector<long>& weights, long degree,
                 bool nonzero = true) {
  for (int attempt = 0; attempt < 50; ++attempt) {
    Poly out;
    std::function<void(size_t, Poly, long)> rec = [&](size_t i, Poly mono, long rem) {
      if (i == vars.size()) {
        if (rem == 0) out += rng.rnd() * mono;
        return;
      }
      Poly p = mono;
      for (long k = 0; k * weights[i] <= rem; ++k) {
        rec(i + 1, p, rem - k * weights[i]);
        p *= pvar(vars[i]);
      }
    };
    rec(0, Poly(Rat(1)), degree);
    if (!nonzero || !out.is_zero()) return out;
  }
  throw std::runtime_error("random form generation failed");
}

// solve a linear system "sum_j coeffs[j] * unknowns[j] + rhs = 0" given as
// polynomial identities: returns one solution plus a seeded random kernel
// combination. The unknowns enumerate the coefficients of designated
// monomials in a template polynomial.
struct LinearPlant {
  // columns: unknown index; each equation: the identity polynomial must be 0
  std::vector<Poly> unknown_images;  // image of each unknown in the constraint space
  Poly fixed_image;                  // image of the fixed part
};

std::optional<std::vector<Rat>> solve_plant(const LinearPlant& lp, Rng& rng, int free_randomization = 1) {
  // collect all monomials of the constraint polynomials
  std::vector<std::string> vars;
  auto addvars = [&](const Poly& p) {
    std::vector<std::string> merged;
    std::set_union(vars.begin(), vars.end(), p.vars().begin(), p.vars().end(), std::back_inserter(merged));
    vars = merged;
  };
  addvars(lp.fixed_image);
  for (const auto& p : lp.unknown_images) addvars(p);
  std::map<Expo, size_t, GrlexDesc> rows;
  auto row_of = [&](const Expo& e) {
    auto it = rows.find(e);
    if (it != rows.end()) return it->second;
    size_t id = rows.size();
    rows.emplace(e, id);
    return id;
  };
  std::vector<std::vector<std::pair<size_t, Rat>>> cols(lp.unknown_images.size() + 1);
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
  for (size_t i = 0; i < lp.unknown_images.size(); ++i) embed(lp.unknown_images[i], i);
  embed(lp.fixed_image, lp.unknown_images.size());
  size_t n = lp.unknown_images.size();
  MatQ mat(rows.size(), std::vector<Rat>(n, Rat(0)));
  std::vector<Rat> rhs(rows.size(), Rat(0));
  for (size_t c = 0; c < n; ++c)
    for (auto& [r, v] : cols[c]) mat[r][c] += v;
  for (auto& [r, v] : cols[n]) rhs[r] -= v;  // move to the right side
  MatQ mat2 = mat;
  auto particular = solve(std::move(mat2), rhs);
  if (!particular) return std::nullopt;
  auto kernel = nullspace(std::move(mat));
  std::vector<Rat> sol = *particular;
  for (int r = 0; r < free_randomization; ++r)
    for (const auto& k : kernel) {
      Rat c = rng.rnd();
      for (size_t i = 0; i < n; ++i) sol[i] += c * k[i];
    }
  return sol;
}

// node conditions: all four partials of F vanish at p (linear in the
// coefficients of the unknown template)
void add_point_gradient_conditions(LinearPlant& lp, const Space& sp, const std::vector<Poly>& unknown_monos,
                                   const Poly& fixed, const Point& p) {
  auto vars = sp.all_vars();
  // encode each condition as one polynomial identity in fresh tag variables
  // cond_k: sum_j unknowns_j * d(mono_j)/dv_k (p) + d(fixed)/dv_k (p) = 0
  for (size_t k = 0; k < vars.size(); ++k) {
    Poly tag = pvar("cond_grad_" + vars[k]);
    for (size_t j = 0; j < unknown_monos.size(); ++j) {
      Rat v = evaluate_at(unknown_monos[j].derivative(vars[k]), sp, p);
      lp.unknown_images[j] += v * tag;
    }
    lp.fixed_image += evaluate_at(fixed.derivative(vars[k]), sp, p) * tag;
  }
}

Poly build_from_solution(const std::vector<Poly>& monos, const std::vector<Rat>& sol) {
  Poly out;
  for (size_t i = 0; i < monos.size(); ++i)
    if (!is_zero(sol[i])) out += sol[i] * monos[i];
  return out;
}

// smooth or nodal plane cubic in (x, y, z); nodal has a split node at (0,0,1)
Poly cone_cubic(Rng& rng, bool nodal) {
  Poly x = pvar("x"), y = pvar("y"), z = pvar("z");
  for (int attempt = 0; attempt < 200; ++attempt) {
    Poly c;
    if (nodal) {
      Poly bin = random_form(rng, {"x", "y"}, {1, 1}, 3);
      c = x * y * z + bin;
      auto v = ordinary_curve_test(c, {"x", "y", "z"});
      if (v.type == CurveType::Nodal) return c;
    } else {
      c = random_form(rng, {"x", "y", "z"}, {1, 1, 1}, 3);
      auto v = ordinary_curve_test(c, {"x", "y", "z"});
      if (v.type == CurveType::SmoothElliptic) return c;
    }
  }
  throw std::runtime_error("cone cubic generation failed");
}

FamilyInstance finish(const Space& sp, std::vector<Poly> factors, FamilyTag tag, std::vector<Witness> ws,
                      uint64_t seed, bool nodal) {
  FamilyInstance inst;
  inst.pair = make_pair(sp, std::move(factors));
  inst.tag = tag;
  inst.witnesses = std::move(ws);
  inst.provenance = "seed " + std::to_string(seed);
  inst.nodal_flavor = nodal;
  return inst;
}

Point origin_point() { return {Rat(1), Rat(0), Rat(0), Rat(0)}; }

}  // namespace

FamilyInstance sample_family(FamilyTag tag, uint64_t seed, GenOptions opt) {
  Rng rng{std::mt19937_64(seed * 0x9e3779b97f4a7c15ull + 0xc0ffee), std::max(opt.bound, 2L)};
  Space P3 = Space::P3();
  Poly t = pvar("t"), x = pvar("x"), y = pvar("y"), z = pvar("z");
  std::vector<std::string> xyz{"x", "y", "z"};
  std::vector<long> w111{1, 1, 1};

  switch (tag) {
    case FamilyTag::A1: {
      Poly a3 = cone_cubic(rng, opt.nodal);
      Poly b4 = random_form(rng, xyz, w111, 4);
      return finish(P3, {a3 * t + b4}, tag, {PointW{origin_point()}}, seed, opt.nodal);
    }

    case FamilyTag::C4: {
      Poly a3 = cone_cubic(rng, opt.nodal);
      return finish(P3, {t, a3}, tag, {PointW{origin_point()}}, seed, opt.nodal);
    }

    case FamilyTag::C3: {
      // plane t + cubic a2 t + b3, double point at (1,0,0,0) off the plane
      for (int attempt = 0; attempt < 100; ++attempt) {
        Poly b3 = cone_cubic(rng, opt.nodal);
        Poly a2 = random_form(rng, xyz, w111, 2);
        if (a2.is_zero()) continue;
        Poly cubic = a2 * t + b3;
        // the cubic must not be singular along the intersection curve: for a
        // smooth or nodal b3 the only vertex candidate is (1,0,0,0)
        auto rec = surface_singular_points(cubic, P3);
        if (rec.unresolved) continue;
        bool ok = rec.rational_points.size() == 1 && !rec.has_irrational;
        if (!ok) continue;
        return finish(P3, {t, cubic}, tag, {PointW{origin_point()}}, seed, opt.nodal);
      }
      throw std::runtime_error("C3 generation failed");
    }

    case FamilyTag::C2: {
      for (int attempt = 0; attempt < 200; ++attempt) {
        // plant p on the intersection curve, and a node of the pencil for
        // the maximal flavor
        Point p = {rng.rnd(), rng.rnd_nonzero(), rng.rnd(), Rat(1)};
        std::vector<Poly> monos;  // quadric monomials
        for (auto& m : monomial_basis(P3, 2)) monos.push_back(m);
        auto make_quadric_through = [&](const Point& pt) {
          LinearPlant lp;
          lp.unknown_images.assign(monos.size(), Poly());
          Poly tag0 = pvar("cond_val");
          for (size_t j = 0; j < monos.size(); ++j) lp.unknown_images[j] += evaluate_at(monos[j], P3, pt) * tag0;
          return lp;
        };
        LinearPlant lp1 = make_quadric_through(p);
        auto s1 = solve_plant(lp1, rng);
        if (!s1) continue;
        Poly q1 = build_from_solution(monos, *s1);
        if (q1.is_zero()) continue;
        Poly q2;
        if (!opt.nodal) {
          LinearPlant lp2 = make_quadric_through(p);
          auto s2 = solve_plant(lp2, rng);
          if (!s2) continue;
          q2 = build_from_solution(monos, *s2);
        } else {
          // plant a pencil node: gradients parallel at a second point n
          Point n = {Rat(1), rng.rnd(), rng.rnd(), rng.rnd()};
          // require q1(n) = 0 as well: regenerate q1 through p and n
          LinearPlant lp1b = make_quadric_through(p);
          {
            Poly tagn = pvar("cond_val_n");
            for (size_t j = 0; j < monos.size(); ++j) lp1b.unknown_images[j] += evaluate_at(monos[j], P3, n) * tagn;
          }
          auto s1b = solve_plant(lp1b, rng);
          if (!s1b) continue;
          q1 = build_from_solution(monos, *s1b);
          if (q1.is_zero()) continue;
          // q2 through p, n with grad q2(n) = c * grad q1(n): eliminate c by
          // cross conditions using two independent orthogonal vectors
          LinearPlant lp2 = make_quadric_through(p);
          {
            Poly tagn = pvar("cond_val_n");
            for (size_t j = 0; j < monos.size(); ++j) lp2.unknown_images[j] += evaluate_at(monos[j], P3, n) * tagn;
          }
          // gradient direction of q1 at n
          std::vector<Rat> g1;
          for (const auto& v : P3.all_vars()) g1.push_back(evaluate_at(q1.derivative(v), P3, n));
          // two vectors orthogonal-complementary: conditions grad q2(n) x g1 = 0
          // expressed as: g2[i] g1[j] - g2[j] g1[i] = 0 for chosen pairs
          int pivot = -1;
          for (size_t i = 0; i < g1.size(); ++i)
            if (!is_zero(g1[i])) pivot = int(i);
          if (pivot < 0) continue;
          auto vars4 = P3.all_vars();
          int cnt = 0;
          for (size_t i = 0; i < g1.size(); ++i) {
            if (int(i) == pivot) continue;
            Poly tagc = pvar("cond_cross_" + std::to_string(cnt++));
            for (size_t j = 0; j < monos.size(); ++j) {
              Rat vi = evaluate_at(monos[j].derivative(vars4[i]), P3, n);
              Rat vp = evaluate_at(monos[j].derivative(vars4[pivot]), P3, n);
              lp2.unknown_images[j] += (vi * g1[pivot] - vp * g1[i]) * tagc;
            }
          }
          auto s2 = solve_plant(lp2, rng);
          if (!s2) continue;
          q2 = build_from_solution(monos, *s2);
        }
        if (q2.is_zero()) continue;
        // independence and validity
        try {
          auto pair = make_pair(P3, {q1, q2});
          auto sigma = quadric_pencil_curve_type(q1, q2, P3);
          if (!opt.nodal && sigma.type != CurveType::SmoothElliptic) continue;
          if (opt.nodal && sigma.type != CurveType::Nodal) continue;
          // conic witness: a random plane section of q1 through the point p?
          // the conic must lie on D1 and p must be general on Sigma
          Poly h;
          for (int hat = 0; hat < 40; ++hat) {
            h = random_form(rng, {"t", "x", "y", "z"}, {1, 1, 1, 1}, 1);
            if (h.is_zero()) continue;
            if (!is_zero(evaluate_at(h, P3, p))) break;
          }
          return finish(P3, {q1, q2}, tag,
                        {ConicOnSurfaceW{h, q1, p}, PointW{p}}, seed, opt.nodal);
        } catch (const std::exception&) {
          continue;
        }
      }
      throw std::runtime_error("C2 generation failed");
    }

    case FamilyTag::C1: {
      // plane t and a smooth cubic through the standard four-line
      // configuration on the quadric tz - xy, plus a marked rational point
      // on the intersection curve
      CurveParam l1, l2, l3, l0;
      auto ruling_a = [&](long a, long b) {
        // (t, x, y, z) = (a c, a d, b c, b d)
        Poly s = pvar("s"), u = pvar("u");
        CurveParam c;
        c.components = {Rat(a) * s, Rat(a) * u, Rat(b) * s, Rat(b) * u};
        return c;
      };
      auto ruling_b = [&](long c0, long d0) {
        Poly s = pvar("s"), u = pvar("u");
        CurveParam c;
        c.components = {Rat(c0) * s, Rat(d0) * s, Rat(c0) * u, Rat(d0) * u};
        return c;
      };
      l1 = ruling_a(1, 1);
      l2 = ruling_a(1, 2);
      l3 = ruling_a(1, 3);
      l0 = ruling_b(1, 1);
      for (int attempt = 0; attempt < 200; ++attempt) {
        auto monos = monomial_basis(P3, 3);
        LinearPlant lp;
        lp.unknown_images.assign(monos.size(), Poly());
        auto vanish_on = [&](const CurveParam& line, const std::string& tagname) {
          std::map<std::string, Poly> a;
          auto vars = P3.all_vars();
          for (size_t i = 0; i < vars.size(); ++i) a[vars[i]] = line.components[i];
          for (size_t j = 0; j < monos.size(); ++j) {
            Poly r = monos[j].substitute_poly(a);
            // expand in s,u against tag variables
            for (int ds = 0; ds <= r.degree_in("s"); ++ds)
              for (int du = 0; du <= r.degree_in("u"); ++du) {
                Poly c = r.coeff_of("s", ds).coeff_of("u", du);
                if (c.is_zero()) continue;
                lp.unknown_images[j] +=
                    c.constant_value() * pvar("cond_" + tagname + "_" + std::to_string(ds) + "_" + std::to_string(du));
              }
          }
        };
        vanish_on(l1, "l1");
        vanish_on(l2, "l2");
        vanish_on(l3, "l3");
        vanish_on(l0, "l0");
        // marked rational point on the intersection curve: on the plane t=0
        Point sp_pt = {Rat(0), Rat(1), rng.rnd(), rng.rnd()};
        {
          Poly tagp = pvar("cond_sigma_point");
          for (size_t j = 0; j < monos.size(); ++j) lp.unknown_images[j] += evaluate_at(monos[j], P3, sp_pt) * tagp;
        }
        if (opt.nodal) {
          // plant a node of the intersection curve Sigma at a plane point
          Point nu = {Rat(0), rng.rnd(), rng.rnd(), Rat(1)};
          // restriction of the cubic to the plane t=0 must be singular at nu:
          // partial derivatives in x, y, z of the restriction vanish
          for (const auto& v : xyz) {
            Poly tagn = pvar("cond_signode_" + v);
            for (size_t j = 0; j < monos.size(); ++j) {
              Poly restricted = monos[j].set_var("t", Rat(0));
              lp.unknown_images[j] += evaluate_at(restricted.derivative(v), P3, nu) * tagn;
            }
          }
        }
        auto sol = solve_plant(lp, rng);
        if (!sol) continue;
        Poly cubic = build_from_solution(monos, *sol);
        if (cubic.is_zero()) continue;
        try {
          auto rep = surface_singular_points(cubic, P3);
          if (!rep.smooth) continue;  // C1 needs a smooth cubic
          Poly sigma = cubic.set_var("t", Rat(0));
          auto cv = ordinary_curve_test(sigma, xyz);
          if (!opt.nodal && cv.type != CurveType::SmoothElliptic) continue;
          if (opt.nodal && cv.type != CurveType::Nodal) continue;
          SkewLineTripleW skew{{l1, l2, l3}};
          LineOnSurfaceW trans{Poly(), Poly()};
          // transversal line as two forms
          auto forms = line_forms(P3, l0);
          trans.f1 = forms[0];
          trans.f2 = forms[1];
          return finish(P3, {t, cubic}, tag, {skew, trans, PointW{sp_pt}}, seed, opt.nodal);
        } catch (const std::exception&) {
          continue;
        }
      }
      throw std::runtime_error("C1 generation failed");
    }

    case FamilyTag::A2: {
      // F = a0 t^2 z^2 + b2 t z + c4 with a planted branch quartic, a planted
      // line on the degree-two model for the follow-up link, and a planted
      // node riding to the plane-cubic stage
      for (int attempt = 0; attempt < 300; ++attempt) {
        Rat a0 = rng.rnd_nonzero();
        Poly b2 = random_form(rng, xyz, w111, 2);
        // line data on the degree-two member: z = l(x,y), u = q(x,y)
        Poly l = random_form(rng, {"x", "y"}, {1, 1}, 1);
        Poly q = random_form(rng, {"x", "y"}, {1, 1}, 2);
        if (l.is_zero()) continue;
        // branch quartic g4(x,y) with a value pinned so the line condition is
        // solvable; nodal flavor: exactly one double root
        // line condition target: G4(x, y, l, q) = a0 q^2 + b2(x,y,l) q + c4(x,y,l) = 0
        // c4 = [g4 + b2(x,y,0)^2/(4 a0)] + z * c3free
        // required: l | t0 where t0 = -a0 q^2 - b2(x,y,l) q - g4 - b2(x,y,0)^2/(4a0)
        Poly b2l = b2.set_var("z", Rat(0));  // b2(x,y,0)
        std::map<std::string, Poly> subl{{"z", l}};
        Poly b2_on_l = b2.substitute_poly(subl);
        // choose a root of l: l = lx * x + ly * y; root (x,y) = (-ly, lx)
        Rat lx = l.coeff_of("x", 1).is_zero() ? Rat(0) : l.coeff_of("x", 1).constant_value();
        Rat ly = l.coeff_of("y", 1).is_zero() ? Rat(0) : l.coeff_of("y", 1).constant_value();
        std::map<std::string, Rat> lroot{{"x", -ly}, {"y", lx}};
        auto ev2 = [&](const Poly& p) {
          std::map<std::string, Rat> a = lroot;
          for (const auto& v : p.vars())
            if (!a.count(v)) a[v] = Rat(0);
          return p.is_zero() ? Rat(0) : p.evaluate<Rat>(a);
        };
        Rat need = -a0 * ev2(q) * ev2(q) - ev2(b2_on_l) * ev2(q) - ev2(b2l * b2l) / (4 * a0);
        // build g4 with g4(lroot) = need
        Poly g4;
        bool got = false;
        for (int attempt2 = 0; attempt2 < 60 && !got; ++attempt2) {
          if (opt.nodal) {
            Rat r = rng.rnd(), s = rng.rnd(), u = rng.rnd();
            if (r == s || r == u || s == u) continue;
            Poly form = (x - r * y) * (x - r * y) * (x - s * y) * (x - u * y);
            Rat val = ev2(form);
            if (is_zero(val)) continue;
            g4 = (need / val) * form;
            if (is_zero(need)) continue;  // scale cannot vanish
            got = true;
          } else {
            g4 = random_form(rng, {"x", "y"}, {1, 1}, 4);
            Rat val = ev2(g4);
            // adjust a pure-power coefficient to hit the target value
            Poly adj = is_zero(ev2(y.pow(4))) ? x.pow(4) : y.pow(4);
            Rat a4v = ev2(adj);
            if (is_zero(a4v)) continue;
            g4 += ((need - val) / a4v) * adj;
            BinForm bf = binform_of(g4, "x", "y", 4);
            if (!binform_squarefree(bf)) continue;
            got = true;
          }
        }
        if (!got) { if (getenv("LCY_DEBUG")) fprintf(stderr, "A2: no g4\n"); continue; }
        // c4 binary part
        Poly c4bin = g4 + (b2l * b2l) / (4 * a0);
        // c4 = c4bin + z * c3free; line condition: c4(x,y,l) = -a0 q^2 - b2(.,l) q
        // i.e. l * c3free(x, y, l) = t0 with l | t0 now guaranteed
        Poly t0 = -a0 * q * q - b2_on_l * q - c4bin;
        auto quot = Poly::exact_divide(t0, l);
        if (!quot) { if (getenv("LCY_DEBUG")) fprintf(stderr, "A2: t0 not divisible\n"); continue; }
        // c3free(x, y, l) must equal quot: choose c3free = quot0(x,y) + (z - l)*c2free
        Poly c3free = *quot + (z - l) * random_form(rng, xyz, w111, 2);
        Poly c4 = c4bin + z * c3free;
        Poly F = a0 * t.pow(2) * z.pow(2) + b2 * (t * z) + c4;
        // planted general node for the plane-cubic stage
        {
          // impose the node by a final correction supported away from the
          // structures above: perturb with z^2 * (quadric) vanishing suitably
          Point nu = {Rat(1), rng.rnd_nonzero(), rng.rnd(), rng.rnd_nonzero()};
          // F_nu := F + t z^2 * lin + z^2 * quad correction keeps the shape
          // (t z^2 lin lives in b2 t z? no: t z^2 lin = (z lin) t z so it is a
          // b2 adjustment; z^2 quad is a c4 adjustment) -> 4 gradient
          // conditions, unknowns: lin (3) + quad (6 in x,y,z) = 9
          std::vector<Poly> umonos;
          umonos.push_back(t * z * (z - l));  // b2 += const * z (z - l)
          for (auto& m : monomial_basis(Space::P2(), 2)) umonos.push_back(z * (z - l) * m);
          LinearPlant lp;
          lp.unknown_images.assign(umonos.size(), Poly());
          add_point_gradient_conditions(lp, P3, umonos, F, nu);
          auto sol = solve_plant(lp, rng);
          if (!sol) { if (getenv("LCY_DEBUG")) fprintf(stderr, "A2: node solve failed\n"); continue; }
          Poly corr = build_from_solution(umonos, *sol);
          F += corr;
          // witnesses: the elliptic point, the line on the degree-two model,
          // the riding node
          try {
            auto inst = finish(P3, {F}, tag,
                               {PointW{origin_point()},
                                LineOnSurfaceW{z - l, pvar("u") - q},
                                PointW{nu}},
                               seed, opt.nodal);
            // sanity: the planted point is still an E7-kind point
            auto st = classify_at_point(F, P3, origin_point());
            if (getenv("LCY_DEBUG")) fprintf(stderr, "A2: main %s\n", st.str().c_str());
            if (opt.nodal && st.tag != SingTag::Cusp) continue;
            if (!opt.nodal && st.tag != SingTag::SimpleElliptic) continue;
            auto stn = classify_at_point(F, P3, nu);
            if (getenv("LCY_DEBUG")) fprintf(stderr, "A2: node %s\n", stn.str().c_str());
            if (stn.tag != SingTag::DuVal) continue;
            return inst;
          } catch (const std::exception&) {
            continue;
          }
        }
      }
      throw std::runtime_error("A2 generation failed");
    }

    case FamilyTag::A3: {
      // coefficients (a0, b0, c1, d2, e0, f2, g3, h4) with a planted line on
      // the sextic model, a planted line on the follow-up quartic model, a
      // planted riding node, and the elliptic-or-cusp flavor
      Poly u = pvar("u"), v = pvar("v");
      std::vector<std::string> yz{"y", "z"};
      std::vector<long> w11{1, 1};
      for (int attempt = 0; attempt < 400; ++attempt) {
        // unknown coefficient template
        // F4 = a0 t^2 z^2 + b0 t y^3 + c1 t x z + d2 t z + e0 x^3 z + f2 x^2 + g3 x + h4
        // unknowns: a0, b0, c10, c11, d2(3), e0, f2(3), g3(4), h4(5) = 19? a0,b0,e0 scalars
        std::vector<Poly> umonos;
        auto push_forms = [&](const Poly& carrier, long deg) {
          // carrier * (each monomial of degree deg in y,z)
          for (long k = 0; k <= deg; ++k) umonos.push_back(carrier * y.pow(uint32_t(deg - k)) * z.pow(uint32_t(k)));
        };
        umonos.push_back(t * t * z * z);           // a0
        umonos.push_back(t * y.pow(3));            // b0
        push_forms(t * x * z, 1);                  // c1
        push_forms(t * z, 2);                      // d2
        umonos.push_back(x.pow(3) * z);            // e0
        push_forms(x * x, 2);                      // f2
        push_forms(x, 3);                          // g3
        push_forms(Poly(Rat(1)), 4);               // h4
        size_t NU = umonos.size();
        // index helpers
        size_t idx_a0 = 0, idx_b0 = 1, idx_c10 = 2, idx_e0 = 7, idx_f20 = 8;
        LinearPlant lp;
        lp.unknown_images.assign(NU, Poly());
        // (1) line on the sextic model: G6(y,z,q2,c3) = 0; the sextic is the
        // monomial transport of F4
        Poly q2 = random_form(rng, yz, w11, 2);
        Poly c3 = random_form(rng, yz, w11, 3);
        auto transport = [&](const Poly& mono) -> std::optional<Poly> {
          // t^a x^b y^c z^d -> v^a u^b y^c z^(d + 2 - 2a - b)
          Poly out;
          for (const auto& [e, cc] : mono.terms()) {
            uint32_t ea = 0, eb = 0, ec = 0, ed = 0;
            for (size_t i = 0; i < mono.vars().size(); ++i) {
              const std::string& vn = mono.vars()[i];
              if (vn == "t") ea = e[i];
              else if (vn == "x") eb = e[i];
              else if (vn == "y") ec = e[i];
              else if (vn == "z") ed = e[i];
            }
            long zexp = long(ed) + 2 - 2 * long(ea) - long(eb);
            if (zexp < 0) return std::nullopt;
            out += Poly::monomial({"u", "v", "y", "z"},
                                  Expo{eb, ea, ec, uint32_t(zexp)}, cc);
          }
          return out;
        };
        {
          std::map<std::string, Poly> sub{{"u", q2}, {"v", c3}};
          for (size_t j = 0; j < NU; ++j) {
            auto tr = transport(umonos[j]);
            if (!tr) throw std::logic_error("A3 template transport failed");
            Poly r = tr->substitute_poly(sub);
            for (int dy = 0; dy <= r.degree_in("y"); ++dy)
              for (int dz = 0; dz <= r.degree_in("z"); ++dz) {
                Poly c = r.coeff_of("y", dy).coeff_of("z", dz);
                if (c.is_zero()) continue;
                lp.unknown_images[j] +=
                    c.constant_value() * pvar("cond_lineA_" + std::to_string(dy) + "_" + std::to_string(dz));
              }
          }
        }
        // (2) line on the follow-up quartic model: after shifting u,v by
        // (q2, c3) the sextic G6' = G6(y,z,u+q2,v+c3) decomposes as
        // a4(z,y,u) u + b3(z,y,u) v + c0 v^2 -- require G4-line:
        // G4(T, X, l1(T,X), q2'(T,X)) = 0 where G4(T,X,U,V2) =
        // a4(T,X,V2-as-y?) ... the quartic model is
        // G4 = a4 + b3 * znew + c0 * znew^2 * unew with renames
        // (z->T, y->X, u->U); line: {(T : X : l1 : qq)}
        Poly l1 = random_form(rng, {"z", "x"}, w11, 1);
        Poly qq = random_form(rng, {"z", "x"}, w11, 2);
        {
          std::map<std::string, Poly> shift{{"u", u + q2}, {"v", v + c3}};
          // the degree-two model: G4(x,y,z,u) = a4(z,x,u) + b3(z,x,u) y + c0 y^2 u
          // where a4, b3, c0 are extracted from G6' via (z,y,u) -> (z,x,u);
          // line: {(z : x : l1(z,x) : qq(z,x))} with forms y - l1, u - qq
          std::map<std::string, Poly> ren{{"y", pvar("x")}};
          std::map<std::string, Poly> lineimg{{"y", l1}, {"u", qq}};
          for (size_t j = 0; j < NU; ++j) {
            auto tr = transport(umonos[j]);
            Poly g6p = tr->substitute_poly(shift);
            Poly c0p = g6p.coeff_of("v", 2);
            Poly b3p = g6p.coeff_of("v", 1);
            Poly rest = g6p.coeff_of("v", 0);
            Poly pure = rest.set_var("u", Rat(0));
            Poly divisible = rest - pure;
            auto a4p = Poly::exact_divide(divisible, u);
            if (!a4p) throw std::logic_error("A3 template division failed");
            if (!pure.is_zero()) {
              // the assembled pure part vanishes by the line-A conditions;
              // fold it in for consistency
              for (int dy = 0; dy <= pure.degree_in("y"); ++dy)
                for (int dz = 0; dz <= pure.degree_in("z"); ++dz) {
                  Poly c = pure.coeff_of("y", dy).coeff_of("z", dz);
                  if (c.is_zero()) continue;
                  lp.unknown_images[j] +=
                      c.constant_value() * pvar("cond_lineA_" + std::to_string(dy) + "_" + std::to_string(dz));
                }
            }
            Poly G4j = a4p->substitute_poly(ren) + b3p.substitute_poly(ren) * pvar("y") +
                       c0p.substitute_poly(ren) * pvar("y") * pvar("y") * pvar("u");
            Poly r = G4j.substitute_poly(lineimg);
            for (int dz = 0; dz <= r.degree_in("z"); ++dz)
              for (int dx = 0; dx <= r.degree_in("x"); ++dx) {
                Poly c = r.coeff_of("z", dz).coeff_of("x", dx);
                if (c.is_zero()) continue;
                lp.unknown_images[j] +=
                    c.constant_value() * pvar("cond_lineB_" + std::to_string(dz) + "_" + std::to_string(dx));
              }
          }
        }
        // (3) riding node at a general rational point
        Point nu = {Rat(1), rng.rnd_nonzero(), rng.rnd_nonzero(), rng.rnd_nonzero()};
        add_point_gradient_conditions(lp, P3, umonos, Poly(), nu);
        // (4) nodal flavor: e0 = 0 forces the nodal cone; smooth needs e0 != 0
        if (opt.nodal) {
          lp.unknown_images[idx_e0] += pvar("cond_e0");
        }
        auto sol = solve_plant(lp, rng, 2);
        if (!sol) { if (getenv("LCY_DEBUG")) fprintf(stderr, "A3: solve failed\n"); continue; }
        // normalize: need a0, b0 nonzero; smooth flavor needs e0 != 0
        if (is_zero((*sol)[idx_a0]) || is_zero((*sol)[idx_b0])) { if (getenv("LCY_DEBUG")) fprintf(stderr, "A3: a0/b0 zero\n"); continue; }
        if (!opt.nodal && is_zero((*sol)[idx_e0])) { if (getenv("LCY_DEBUG")) fprintf(stderr, "A3: e0 zero\n"); continue; }
        Poly F = build_from_solution(umonos, *sol);
        if (F.is_zero()) continue;
        (void)idx_c10;
        (void)idx_f20;
        try {
          auto st = classify_at_point(F, P3, origin_point());
          if (getenv("LCY_DEBUG")) fprintf(stderr, "A3: main %s\n", st.str().c_str());
          if (!opt.nodal && !(st.tag == SingTag::SimpleElliptic && st.elliptic == EllipticKind::E8)) continue;
          if (opt.nodal && !(st.tag == SingTag::Cusp && st.elliptic == EllipticKind::E8)) continue;
          auto stn = classify_at_point(F, P3, nu);
          if (getenv("LCY_DEBUG")) fprintf(stderr, "A3: node %s\n", stn.str().c_str());
          if (stn.tag != SingTag::DuVal) continue;
          return finish(P3, {F}, tag,
                        {PointW{origin_point()},
                         LineOnSurfaceW{u - q2, v - c3},
                         LineOnSurfaceW{pvar("y") - l1, pvar("u") - qq},
                         PointW{nu}},
                        seed, opt.nodal);
        } catch (const std::exception& e) {
          if (getenv("LCY_DEBUG")) fprintf(stderr, "A3: exception %s\n", e.what());
          continue;
        }
      }
      throw std::runtime_error("A3 generation failed");
    }

    case FamilyTag::A4: {
      std::vector<std::string> yz{"y", "z"};
      std::vector<long> w11{1, 1};
      for (int attempt = 0; attempt < 400; ++attempt) {
        Rat a10 = rng.rnd(), a11 = rng.rnd();
        Poly a1 = a10 * y + a11 * z;
        // flavor-controlled cone cubic coefficients
        Rat c20, c21, c22;
        if (opt.nodal) {
          c20 = rng.rnd();  // p free
          if (is_zero(c20 - a10 * a10)) continue;
          c21 = 2 * a10 * a11;
          c22 = a11 * a11;
        } else {
          c20 = rng.rnd();
          c21 = rng.rnd();
          c22 = rng.rnd();
        }
        Poly c2 = c20 * y * y + c21 * y * z + c22 * z * z;
        Rat lambda = rng.rnd();
        Rat alpha = rng.rnd_nonzero();
        auto evl = [&](const Poly& p) {
          std::map<std::string, Rat> a{{"y", lambda}, {"z", Rat(1)}};
          for (const auto& vv : p.vars())
            if (!a.count(vv)) a[vv] = Rat(0);
          return p.is_zero() ? Rat(0) : p.evaluate<Rat>(a);
        };
        Rat gamma = (evl(c2) - lambda * lambda * lambda) / alpha;
        Rat beta = rng.rnd(), delta = rng.rnd();
        // b2(lambda,1) = beta + delta - lambda^3
        Poly b2 = random_form(rng, yz, w11, 2);
        b2 += (beta + delta - lambda * lambda * lambda - evl(b2)) * z * z;
        // d3(lambda,1) = alpha delta + beta gamma
        Poly d3 = random_form(rng, yz, w11, 3);
        d3 += (alpha * delta + beta * gamma - evl(d3)) * z.pow(3);
        // e4(lambda,1) = beta delta
        Poly e4 = random_form(rng, yz, w11, 4);
        e4 += (beta * delta - evl(e4)) * z.pow(4);
        Poly s = t * z + x * x;
        Poly F = s * s + t * y.pow(3) + (Rat(2) * (a1 * x) + b2) * s + c2 * x * x + d3 * x + e4;
        // riding node: correct with b2/d3/e4-compatible monomials keeping the
        // evaluations at (lambda, 1) fixed: corrections vanish at y = lambda z
        Point nu = {Rat(1), rng.rnd_nonzero(), rng.rnd_nonzero(), rng.rnd_nonzero()};
        {
          Poly ylz = y - lambda * z;
          std::vector<Poly> umonos;
          // b2-corrections: (y - lambda z) * linear -> multiplies s
          for (const auto& vv : yz) umonos.push_back(ylz * pvar(vv) * s);
          // d3-corrections: (y - lambda z) * quadratic -> multiplies x
          for (long k = 0; k <= 2; ++k) umonos.push_back(ylz * y.pow(uint32_t(2 - k)) * z.pow(uint32_t(k)) * x);
          // e4-corrections: (y - lambda z) * cubic
          for (long k = 0; k <= 3; ++k) umonos.push_back(ylz * y.pow(uint32_t(3 - k)) * z.pow(uint32_t(k)));
          LinearPlant lp;
          lp.unknown_images.assign(umonos.size(), Poly());
          add_point_gradient_conditions(lp, P3, umonos, F, nu);
          auto sol = solve_plant(lp, rng);
          if (!sol) continue;
          F += build_from_solution(umonos, *sol);
        }
        try {
          auto st = classify_at_point(F, P3, origin_point());
          if (!opt.nodal && !(st.tag == SingTag::SimpleElliptic && st.elliptic == EllipticKind::E8)) continue;
          if (opt.nodal && !(st.tag == SingTag::Cusp && st.elliptic == EllipticKind::E8)) continue;
          auto stn = classify_at_point(F, P3, nu);
          if (stn.tag != SingTag::DuVal) continue;
          LambdaRootW lw;
          lw.rational = true;
          lw.lambda = lambda;
          lw.alpha = alpha;
          lw.beta = beta;
          lw.gamma = gamma;
          lw.delta = delta;
          return finish(P3, {F}, tag, {PointW{origin_point()}, lw, PointW{nu}}, seed, opt.nodal);
        } catch (const std::exception&) {
          continue;
        }
      }
      throw std::runtime_error("A4 generation failed");
    }

    case FamilyTag::B1: {
      // variant 0: three rational reducible fibres (+ planted node, smooth
      //            double curve)
      // variant 1: an off-line singular point (quadratic cone shape)
      // variant 2: degenerate-cusp reroute shape (a2 = z^2, b2 = b1 z)
      // nodal flavor: a planted triple point on the line (reroutes to the
      //               triple-point family)
      std::vector<std::string> txv{"t", "x"};
      std::vector<long> w11{1, 1};
      if (opt.nodal) {
        // triple point at (t, x) = (r, 1) on the line: A, B, C all vanish
        for (int attempt = 0; attempt < 200; ++attempt) {
          Rat r = rng.rnd();
          Poly lt = t - r * x;
          Poly A = lt * random_form(rng, txv, w11, 1);
          Poly B = lt * random_form(rng, txv, w11, 1);
          Poly C = lt * random_form(rng, txv, w11, 1);
          Poly F = A * y * y + B * y * z + C * z * z;
          try {
            auto inst = finish(P3, {F}, tag,
                               {LineOnSurfaceW{y, z}, PointW{{r, Rat(1), Rat(0), Rat(0)}}}, seed, true);
            // must really be a triple point with ordinary cone
            auto st = classify_at_point(F, P3, {r, Rat(1), Rat(0), Rat(0)});
            if (st.multiplicity < 3) continue;
            if (!(st.tag == SingTag::Cusp || st.tag == SingTag::DegenerateCusp)) continue;
            return inst;
          } catch (const std::exception&) {
            continue;
          }
        }
        throw std::runtime_error("B1 nodal generation failed");
      }
      if (opt.variant == 1) {
        for (int attempt = 0; attempt < 200; ++attempt) {
          std::vector<std::string> txy{"t", "x", "y"};
          std::vector<long> w3{1, 1, 1};
          Poly g2 = random_form(rng, txy, w3, 2);
          Poly h2 = random_form(rng, txy, w3, 2);
          Poly i2 = random_form(rng, txy, w3, 2);
          Poly F = g2 * y * y + h2 * y * z + i2 * z * z;
          try {
            auto scan = pinch_and_cusp_scan(F, P3);
            if (scan.double_curve.type != CurveType::SmoothElliptic) continue;
            auto st = classify_at_point(F, P3, {Rat(0), Rat(0), Rat(0), Rat(1)});
            if (st.tag != SingTag::DuVal) continue;
            return finish(P3, {F}, tag,
                          {LineOnSurfaceW{y, z}, PointW{{Rat(0), Rat(0), Rat(0), Rat(1)}}}, seed, false);
          } catch (const std::exception&) {
            continue;
          }
        }
        throw std::runtime_error("B1 variant-1 generation failed");
      }
      if (opt.variant == 2) {
        for (int attempt = 0; attempt < 100; ++attempt) {
          Poly b1 = random_form(rng, {"y", "z"}, w11, 1);
          Poly c2 = random_form(rng, {"y", "z"}, w11, 2);
          Poly d3 = random_form(rng, {"y", "z"}, w11, 3);
          Poly e3 = random_form(rng, {"y", "z"}, w11, 3);
          Poly f4 = random_form(rng, {"y", "z"}, w11, 4);
          Poly F = z * z * t * t + (b1 * z) * t * x + c2 * x * x + d3 * t + e3 * x + f4;
          try {
            make_pair(P3, {F});
          } catch (const std::exception&) {
            continue;
          }
          return finish(P3, {F}, tag, {LineOnSurfaceW{y, z}}, seed, true);
        }
        throw std::runtime_error("B1 variant-2 generation failed");
      }
      // variant 0
      for (int attempt = 0; attempt < 300; ++attempt) {
        // three planes y = m_i z with planted lines, plus a riding node
        std::vector<Rat> ms;
        while (ms.size() < 3) {
          Rat m = rng.rnd();
          bool dup = false;
          for (auto& q : ms) dup = dup || q == m;
          if (!dup) ms.push_back(m);
        }
        // lines: span{(u_i : v_i : 0 : 0), (a_i, b_i, m_i, 1)}
        std::vector<CurveParam> lines;
        std::vector<Rat> l0pts;
        bool bad = false;
        for (int i = 0; i < 3; ++i) {
          Rat ui = rng.rnd();
          bool dup = false;
          for (auto& q : l0pts) dup = dup || q == ui;
          if (dup) {
            bad = true;
            break;
          }
          l0pts.push_back(ui);
          Point p1 = {ui, Rat(1), Rat(0), Rat(0)};
          Point p2 = {rng.rnd(), rng.rnd(), ms[size_t(i)], Rat(1)};
          lines.push_back(line_through(p1, p2));
        }
        if (bad) continue;
        // coefficient template: a2..f4
        std::vector<Poly> umonos;
        auto push_yz = [&](const Poly& carrier, long deg) {
          for (long k = 0; k <= deg; ++k) umonos.push_back(carrier * y.pow(uint32_t(deg - k)) * z.pow(uint32_t(k)));
        };
        push_yz(t * t, 2);
        push_yz(t * x, 2);
        push_yz(x * x, 2);
        push_yz(t, 3);
        push_yz(x, 3);
        push_yz(Poly(Rat(1)), 4);
        LinearPlant lp;
        lp.unknown_images.assign(umonos.size(), Poly());
        auto vars4 = P3.all_vars();
        for (int i = 0; i < 3; ++i) {
          std::map<std::string, Poly> a;
          for (size_t k = 0; k < vars4.size(); ++k) a[vars4[k]] = lines[size_t(i)].components[k];
          for (size_t j = 0; j < umonos.size(); ++j) {
            Poly r = umonos[j].substitute_poly(a);
            for (int ds = 0; ds <= r.degree_in("s"); ++ds)
              for (int du = 0; du <= r.degree_in("u"); ++du) {
                Poly c = r.coeff_of("s", ds).coeff_of("u", du);
                if (c.is_zero()) continue;
                lp.unknown_images[j] += c.constant_value() * pvar("cond_fib" + std::to_string(i) + "_" +
                                                                  std::to_string(ds) + "_" + std::to_string(du));
              }
          }
        }
        // riding node off the line
        Point nu = {rng.rnd(), rng.rnd(), Rat(1), rng.rnd_nonzero()};
        add_point_gradient_conditions(lp, P3, umonos, Poly(), nu);
        auto sol = solve_plant(lp, rng, 2);
        if (!sol) continue;
        Poly F = build_from_solution(umonos, *sol);
        if (F.is_zero()) continue;
        try {
          make_pair(P3, {F});
          auto scan = pinch_and_cusp_scan(F, P3);
          if (scan.double_curve.type != CurveType::SmoothElliptic) continue;
          auto stn = classify_at_point(F, P3, nu);
          if (stn.tag != SingTag::DuVal) continue;
          SkewLineTripleW skew{{lines[0], lines[1], lines[2]}};
          return finish(P3, {F}, tag, {LineOnSurfaceW{y, z}, skew, PointW{nu}}, seed, false);
        } catch (const std::exception&) {
          continue;
        }
      }
      throw std::runtime_error("B1 generation failed");
    }

    case FamilyTag::B2: {
      Poly q2 = x * z - y * y;
      for (int attempt = 0; attempt < 300; ++attempt) {
        Poly a1 = random_form(rng, {"t", "x", "y", "z"}, {1, 1, 1, 1}, 1);
        // witness point on the degree-four model curve: conic point (1, th, th^2)
        Rat th = rng.rnd();
        Rat u0 = rng.rnd_nonzero();
        Point cpt = {Rat(0), Rat(1), th, th * th};
        // b2 with constraints: value at the witness; flavor via the branch
        // quartic delta(th') = a1(0,1,s,s^2)^2 - 4 b2(0,1,s,s^2)
        std::vector<Poly> umonos = monomial_basis(P3, 2);
        LinearPlant lp;
        lp.unknown_images.assign(umonos.size(), Poly());
        {
          Poly tagv = pvar("cond_witness");
          for (size_t j = 0; j < umonos.size(); ++j) lp.unknown_images[j] += evaluate_at(umonos[j], P3, cpt) * tagv;
          Rat a1v = evaluate_at(a1, P3, cpt);
          lp.fixed_image += (u0 * u0 + a1v * u0) * tagv;
        }
        if (opt.nodal) {
          // plant a double root of the branch quartic at s = s0
          Rat s0 = rng.rnd();
          Poly sv = pvar("s");
          std::map<std::string, Poly> par{{"t", Poly()}, {"x", Poly(Rat(1))}, {"y", sv}, {"z", sv * sv}};
          Poly a1c = a1.substitute_poly(par);  // affine chart of the parameterization
          for (int order = 0; order < 2; ++order) {
            Poly tagd = pvar("cond_branch_" + std::to_string(order));
            for (size_t j = 0; j < umonos.size(); ++j) {
              Poly bj = umonos[j].substitute_poly(par);
              Poly expr = Rat(-4) * bj;
              if (order == 1) expr = expr.derivative("s");
              lp.unknown_images[j] += expr.set_var("s", s0).constant_value() * tagd;
            }
            Poly fexpr = a1c * a1c;
            if (order == 1) fexpr = fexpr.derivative("s");
            Poly val = fexpr.set_var("s", s0);
            lp.fixed_image += (val.is_zero() ? Rat(0) : val.constant_value()) * tagd;
          }
        }
        // riding node off the conic
        Point nu = {Rat(1), rng.rnd_nonzero(), rng.rnd(), rng.rnd_nonzero()};
        {
          // conditions on F = q2^2 + a1 t q2 + b2 t^2: gradient at nu; the
          // unknowns enter through b2 t^2
          std::vector<Poly> nmonos;
          for (auto& m : umonos) nmonos.push_back(m * t * t);
          Poly fixedF = q2 * q2 + a1 * t * q2;
          LinearPlant lp2;
          lp2.unknown_images.assign(nmonos.size(), Poly());
          add_point_gradient_conditions(lp2, P3, nmonos, fixedF, nu);
          // merge lp2 into lp (same unknown order)
          for (size_t j = 0; j < umonos.size(); ++j) lp.unknown_images[j] += lp2.unknown_images[j];
          lp.fixed_image += lp2.fixed_image;
        }
        auto sol = solve_plant(lp, rng);
        if (!sol) continue;
        Poly b2 = build_from_solution(umonos, *sol);
        Poly F = q2 * q2 + a1 * t * q2 + b2 * t * t;
        try {
          make_pair(P3, {F});
          // verify flavor via the branch quartic
          Poly sv = pvar("s"), uv = pvar("u");
          std::map<std::string, Poly> par{
              {"t", Poly()}, {"x", uv * uv}, {"y", sv * uv}, {"z", sv * sv}};
          Poly delta = (a1 * a1 - Rat(4) * b2).substitute_poly(par);
          if (delta.is_zero()) continue;
          BinForm bf = binform_of(delta, "s", "u", 4);
          auto verdict = double_cover_curve_type(bf);
          if (!opt.nodal && verdict.type != CurveType::SmoothElliptic) continue;
          if (opt.nodal && verdict.type != CurveType::Nodal) continue;
          auto stn = classify_at_point(F, P3, nu);
          if (stn.tag != SingTag::DuVal) continue;
          return finish(P3, {F}, tag,
                        {ConicOnSurfaceW{t, q2, cpt}, PointW{cpt}, PointW{nu}, PointW{{Rat(0), Rat(1), th, th * th}}},
                        seed, opt.nodal);
        } catch (const std::exception&) {
          continue;
        }
      }
      throw std::runtime_error("B2 generation failed");
    }

    case FamilyTag::B3: {
      auto frame = TwistedCubicFrame::standard();
      for (int attempt = 0; attempt < 400; ++attempt) {
        // three gamma points with split secants: c = (1, th1+th2, th1*th2)
        std::vector<std::array<Rat, 3>> cs;
        std::vector<Rat> used;
        bool bad = false;
        for (int i = 0; i < 3 && !bad; ++i) {
          Rat t1 = rng.rnd(), t2 = rng.rnd();
          if (t1 == t2) {
            bad = true;
            break;
          }
          for (auto& q : used) bad = bad || q == t1 || q == t2;
          used.push_back(t1);
          used.push_back(t2);
          cs.push_back({Rat(1), t1 + t2, t1 * t2});
        }
        if (bad) continue;
        // non-collinearity in frame space
        {
          MatQ m;
          for (auto& c : cs) m.push_back({c[0], c[1], c[2]});
          if (rank(std::move(m)) < 3) continue;
        }
        // coefficients a1..a6 with the conic through the three points
        std::vector<Poly> gens = {frame.xi1 * frame.xi1, frame.xi1 * frame.xi2, frame.xi1 * frame.xi3,
                                  frame.xi2 * frame.xi2, frame.xi2 * frame.xi3, frame.xi3 * frame.xi3};
        LinearPlant lp;
        lp.unknown_images.assign(6, Poly());
        auto conic_val = [&](const std::array<Rat, 3>& c, size_t j) {
          // value of the j-th frame monomial at the frame point
          static const int I[6] = {0, 0, 0, 1, 1, 2};
          static const int J[6] = {0, 1, 2, 1, 2, 2};
          return c[size_t(I[j])] * c[size_t(J[j])];
        };
        for (int i = 0; i < 3; ++i) {
          Poly tagp = pvar("cond_gamma" + std::to_string(i));
          for (size_t j = 0; j < 6; ++j) lp.unknown_images[j] += conic_val(cs[size_t(i)], j) * tagp;
        }
        if (opt.nodal) {
          // tangency to the secant-degeneracy conic c2^2 = 4 c1 c3 at a
          // rational point tau = (1, 2 sg, sg^2)
          Rat sg = rng.rnd();
          std::array<Rat, 3> tau{Rat(1), 2 * sg, sg * sg};
          Poly tagp = pvar("cond_tau");
          for (size_t j = 0; j < 6; ++j) lp.unknown_images[j] += conic_val(tau, j) * tagp;
          // gradient of Gamma at tau parallel to gradient of the degeneracy
          // conic: (-4 c3, 2 c2, -4 c1)(tau) = (-4 sg^2, 4 sg, -4)
          std::array<Rat, 3> gd{-4 * sg * sg, 4 * sg, Rat(-4)};
          // dGamma/dc at tau: for monomial c_i c_j: derivative vector
          auto dmono = [&](size_t j, int k) {
            static const int I[6] = {0, 0, 0, 1, 1, 2};
            static const int J[6] = {0, 1, 2, 1, 2, 2};
            Rat v(0);
            if (I[j] == k) v += tau[size_t(J[j])];
            if (J[j] == k) v += tau[size_t(I[j])];
            return v;
          };
          int pivot = 2;  // gd[2] = -4 nonzero
          int cnt = 0;
          for (int k = 0; k < 3; ++k) {
            if (k == pivot) continue;
            Poly tagc = pvar("cond_tang" + std::to_string(cnt++));
            for (size_t j = 0; j < 6; ++j)
              lp.unknown_images[j] += (dmono(j, k) * gd[size_t(pivot)] - dmono(j, pivot) * gd[size_t(k)]) * tagc;
          }
        }
        auto sol = solve_plant(lp, rng);
        if (!sol) continue;
        Poly F;
        for (size_t j = 0; j < 6; ++j) F += (*sol)[j] * gens[j];
        if (F.is_zero()) continue;
        try {
          make_pair(P3, {F});
          // gamma conic must be irreducible: 3x3 symmetric determinant
          MatQ g(3, std::vector<Rat>(3, Rat(0)));
          g[0][0] = (*sol)[0];
          g[0][1] = g[1][0] = (*sol)[1] / 2;
          g[0][2] = g[2][0] = (*sol)[2] / 2;
          g[1][1] = (*sol)[3];
          g[1][2] = g[2][1] = (*sol)[4] / 2;
          g[2][2] = (*sol)[5];
          if (is_zero(det(g))) continue;
          // flavor verification via the tangency branch form
          Space fr = Space::weighted("frame", {"c1", "c2", "c3"}, {1, 1, 1});
          Poly c1 = pvar("c1"), c2 = pvar("c2"), c3 = pvar("c3");
          Poly gamma = (*sol)[0] * c1 * c1 + (*sol)[1] * c1 * c2 + (*sol)[2] * c1 * c3 + (*sol)[3] * c2 * c2 +
                       (*sol)[4] * c2 * c3 + (*sol)[5] * c3 * c3;
          Point base = {cs[0][0], cs[0][1], cs[0][2]};
          auto par = conic_param(fr, Poly(), gamma, base, seed ^ 0x5a5a);
          if (!par) continue;
          Poly disc = c2 * c2 - Rat(4) * (c1 * c3);
          std::map<std::string, Poly> sub{{"c1", par->components[0]}, {"c2", par->components[1]}, {"c3", par->components[2]}};
          Poly branch = disc.substitute_poly(sub);
          if (branch.is_zero()) continue;
          BinForm bf = binform_of(branch, "s", "u", branch.degree());
          auto verdict = double_cover_curve_type(bf);
          if (!opt.nodal && verdict.type != CurveType::SmoothElliptic) continue;
          if (opt.nodal && verdict.type != CurveType::Nodal) continue;
          SecantLineTripleW sec{{Point{cs[0][0], cs[0][1], cs[0][2]}, Point{cs[1][0], cs[1][1], cs[1][2]},
                                 Point{cs[2][0], cs[2][1], cs[2][2]}}};
          return finish(P3, {F}, tag, {TwistedCubicFrameW{frame.xi1, frame.xi2, frame.xi3}, sec}, seed, opt.nodal);
        } catch (const std::exception&) {
          continue;
        }
      }
      throw std::runtime_error("B3 generation failed");
    }

    case FamilyTag::D1: {
      Space W = Space::weighted("P(1,1,2,3)", {"t", "x", "y", "z"}, {1, 1, 2, 3});
      Poly tt = pvar("t"), xx = pvar("x"), yy = pvar("y"), zz = pvar("z");
      for (int attempt = 0; attempt < 50; ++attempt) {
        Poly a4 = random_form(rng, {"t", "x", "y"}, {1, 1, 2}, 4);
        Poly b3 = random_form(rng, {"t", "x", "y"}, {1, 1, 2}, 3);
        Rat c0 = rng.rnd_nonzero();
        Poly F6 = a4 * yy + b3 * zz + c0 * zz * zz;
        try {
          auto pair = make_pair(W, {tt, F6});
          return finish(W, {tt, F6}, tag, {LineOnSurfaceW{yy, zz}}, seed, opt.nodal);
        } catch (const std::exception&) {
          continue;
        }
      }
      throw std::runtime_error("D1 generation failed");
    }

    case FamilyTag::D2: {
      Space W = Space::weighted("P(1,1,1,2)", {"t", "x", "y", "z"}, {1, 1, 1, 2});
      Poly tt = pvar("t"), xx = pvar("x"), yy = pvar("y"), zz = pvar("z");
      for (int attempt = 0; attempt < 50; ++attempt) {
        Poly a3 = random_form(rng, {"t", "x", "y"}, {1, 1, 1}, 3);
        Poly b2 = random_form(rng, {"t", "x", "y"}, {1, 1, 1}, 2);
        Rat c0 = rng.rnd_nonzero();
        Poly F4 = a3 * yy + b2 * zz + c0 * zz * zz;
        try {
          auto pair = make_pair(W, {tt, F4});
          return finish(W, {tt, F4}, tag, {LineOnSurfaceW{yy, zz}}, seed, opt.nodal);
        } catch (const std::exception&) {
          continue;
        }
      }
      throw std::runtime_error("D2 generation failed");
    }

    case FamilyTag::B4: {
      // three concurrent double lines: the union structure has a triple
      // point at the concurrence; rerouted to the triple-point family
      for (int attempt = 0; attempt < 100; ++attempt) {
        // double along V(y,z), V(x,z), V(x,y): quartics in the square of the
        // intersection ideal of the three lines through (1,0,0,0)
        // span: monomials of degree 4 in x,y,z lying in (xy, xz, yz)^2
        std::vector<Poly> gens = {x * x * y * y, x * x * z * z, y * y * z * z, x * y * z * x,
                                  x * y * z * y, x * y * z * z, x * x * y * z, x * y * y * z, x * y * z * z};
        Poly F;
        for (auto& g : gens) F += rng.rnd() * g;
        // include t-terms so the surface is a quartic through the structure
        F += t * x * y * z;
        try {
          make_pair(P3, {F});
          auto st = classify_at_point(F, P3, origin_point());
          if (st.multiplicity < 3) continue;
          return finish(P3, {F}, tag,
                        {LineOnSurfaceW{y, z}, LineOnSurfaceW{x, z}, LineOnSurfaceW{x, y}, PointW{origin_point()}},
                        seed, opt.nodal);
        } catch (const std::exception&) {
          continue;
        }
      }
      throw std::runtime_error("B4 generation failed");
    }

    default:
      throw std::invalid_argument("no generator for this family tag");
  }
}

}  // namespace lcy
