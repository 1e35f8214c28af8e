#ifndef LCY_LINSYS_HPP
#define LCY_LINSYS_HPP

#include "lcy/geom.hpp"

namespace lcy {

// Rational point, aligned with space.all_vars().
using Point = std::vector<Rat>;

std::map<std::string, Rat> point_assignment(const Space& sp, const Point& p);
Rat evaluate_at(const Poly& f, const Space& sp, const Point& p);
bool vanishes_at(const Poly& f, const Space& sp, const Point& p);

// A rational curve given by a parameterization in the binary parameters
// (s, u): one component per space variable, homogeneous in (s, u).
struct CurveParam {
  std::vector<Poly> components;
  Point at(const Rat& s, const Rat& u) const;
};

// Line through two points of an unweighted projective space.
CurveParam line_through(const Point& p, const Point& q);

// The pencil of linear forms vanishing on a line (two independent forms).
std::vector<Poly> line_forms(const Space& sp, const CurveParam& line);

// Line as intersection of two linear forms.
CurveParam line_from_forms(const Space& sp, const Poly& f1, const Poly& f2);

// Linear form in P3 through three points; error if collinear.
Poly plane_through(const Space& sp, const Point& a, const Point& b, const Point& c);

// Two lines in P3: meet (share a point) or are skew.
bool lines_meet(const Space& sp, const CurveParam& a, const CurveParam& b);

// second intersection of the line p + s*dir with the quadric Q; requires
// Q(p) = 0 and returns nullopt when the line lies on Q or misses rationally
std::optional<Point> second_quadric_point(const Poly& q, const Space& sp, const Point& p, const Point& dir);

// A supply of rational points on a quadric through a known rational point.
std::vector<Point> quadric_points(const Poly& q, const Space& sp, const Point& p, size_t count, uint64_t seed);

// Conic inside the plane V(plane_form): rational parameterization from a
// known rational point on it (stereographic projection inside the plane).
std::optional<CurveParam> conic_param(const Space& sp, const Poly& plane_form, const Poly& quadric,
                                      const Point& base_point, uint64_t seed);

// Conditions a linear system can impose.
struct LinCondition {
  enum Kind { VanishOnCurve, DoubleOnCurve, ThroughPoint, DoublePoint } kind;
  CurveParam curve;  // for the curve kinds
  Point point;       // for the point kinds
  static LinCondition vanish_on(CurveParam c) { return {VanishOnCurve, std::move(c), {}}; }
  static LinCondition double_on(CurveParam c) { return {DoubleOnCurve, std::move(c), {}}; }
  static LinCondition through(Point p) { return {ThroughPoint, {}, std::move(p)}; }
  static LinCondition double_at(Point p) { return {DoublePoint, {}, std::move(p)}; }
};

// Basis of the space of degree-d forms satisfying the conditions, in
// deterministic reduced-row-echelon order.
std::vector<Poly> solve_linear_system(const Space& sp, long degree, const std::vector<LinCondition>& conds);

// The rational map defined by the system; checks the dimension equals
// dim(target) + 1 and errors with the counts otherwise.
RatMap linear_system_map(const Space& src, const Space& tgt, long degree, const std::vector<LinCondition>& conds);

// degree-d monomial basis of a single-block, weight-one space
std::vector<Poly> monomial_basis(const Space& sp, long degree);

}  // namespace lcy

#endif
