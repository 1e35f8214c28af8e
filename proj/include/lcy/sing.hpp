#ifndef LCY_SING_HPP
#define LCY_SING_HPP

#include "lcy/binform.hpp"
#include "lcy/linsys.hpp"

namespace lcy {

enum class SingTag {
  NonSingular,
  DuVal,
  SimpleElliptic,
  Cusp,
  NormalCrossing,
  PinchPoint,
  DegenerateCusp,
  WorseThanSLC,
  Unresolved
};

enum class EllipticKind { None, E6, E7, E8 };

std::string to_string(SingTag t);
std::string to_string(EllipticKind k);

// Classification verdict with the checked evidence: multiplicity, quadratic
// rank, the weight system used and the cone-curve verdict, so a verdict can
// be re-derived from its own data.
struct SingularityType {
  SingTag tag = SingTag::Unresolved;
  EllipticKind elliptic = EllipticKind::None;
  std::string detail;
  int multiplicity = 0;
  int quadratic_rank = -1;
  std::vector<long> weights_used;
  long weighted_order_found = -1;
  std::string cone_curve_verdict;
  bool strictly_lc() const {
    return tag == SingTag::SimpleElliptic || tag == SingTag::Cusp || tag == SingTag::NormalCrossing ||
           tag == SingTag::PinchPoint || tag == SingTag::DegenerateCusp;
  }
  std::string str() const;
};

enum class CurveType { SmoothElliptic, Nodal, Other, Unresolved };
std::string to_string(CurveType t);

struct CurveTypeVerdict {
  CurveType type = CurveType::Unresolved;
  std::string reason;
  int node_count = 0;  // rational + certified extension nodes
};

// order of vanishing of F at p, translated so p is the origin of a
// weight-one chart
int multiplicity_at(const Poly& F, const Space& sp, const Point& p);

// local affine equation of F at p: dehomogenized and translated so p is the
// origin; returns the polynomial and the affine variable names
std::pair<Poly, std::vector<std::string>> local_equation(const Poly& F, const Space& sp, const Point& p);

// classification of the surface germ of V(F) at p against the normal-form
// table of two-dimensional strictly semi-log-canonical hypersurface points
SingularityType classify_at_point(const Poly& F, const Space& sp, const Point& p);

// classification of an affine local equation at the origin (three local
// coordinates); the entry point for table-driven tests
SingularityType classify_local(const Poly& f, const std::vector<std::string>& vars);

// smooth-elliptic / nodal / other for a plane curve of degree <= 4,
// homogeneous in three variables (passed explicitly when g does not
// mention all three)
CurveTypeVerdict ordinary_curve_test(const Poly& g);
CurveTypeVerdict ordinary_curve_test(const Poly& g, const std::vector<std::string>& vars);

// chart-wise ordinariness of a weighted cone curve; vars carry weights,
// charts are taken at the weight-one variables
CurveTypeVerdict weighted_cone_curve_test(const Poly& cone, const std::vector<std::string>& vars,
                                          const std::vector<long>& weights);

// Membership of F in the square of a curve ideal, certified by an explicit
// decomposition that re-multiplies to F.
struct CurveSquareness {
  bool holds = false;
  // line V(v1, v2): F = A v1^2 + B v1 v2 + C v2^2
  // conic V(t, q): F = a q^2 + b t q + c t^2
  // twisted cubic: F = sum a_ij xi_i xi_j with constant coefficients
  std::vector<Poly> decomposition;
  std::vector<Rat> frame_coefficients;  // twisted-cubic case: a11 a12 a13 a22 a23 a33
};

struct LineIdeal {
  Poly v1, v2;
};
struct ConicIdeal {
  Poly plane, quadric;
};
struct TwistedCubicFrame {
  Poly xi1, xi2, xi3;
  static TwistedCubicFrame standard();
};

CurveSquareness double_along_line(const Poly& F, const LineIdeal& line);
CurveSquareness double_along_conic(const Poly& F, const ConicIdeal& conic);
CurveSquareness double_along_twisted_cubic(const Poly& F, const TwistedCubicFrame& frame);

// Scan of a quartic with a double line V(y,z): the binary discriminant of
// the normal-direction quadratic along the line, pinch points, degenerate
// cusp loci and the normalization double-curve type.
struct PinchCuspReport {
  BinForm discriminant;               // binary quartic in the line coordinates
  std::vector<Rat> pinch_points;      // simple rational roots (line parameter t/x)
  bool pinch_at_infinity = false;
  struct DegenerateLocus {
    Rat parameter;                    // multiple root (line parameter)
    bool at_infinity = false;
    int multiplicity = 1;
    bool triple_point = false;        // normal quadratic vanishes entirely here
  };
  std::vector<DegenerateLocus> degenerate_loci;
  bool identically_degenerate = false;
  CurveTypeVerdict double_curve;
  bool complete_over_Q = true;
};

PinchCuspReport pinch_and_cusp_scan(const Poly& F, const Space& sp);

// Binary-quartic branch analysis shared by the double-curve reports: the
// double cover of a rational curve branched at the roots of disc.
CurveTypeVerdict double_cover_curve_type(const BinForm& disc);

// Intersection curve of two quadric surfaces via the pencil discriminant
// det(s A + u B).
CurveTypeVerdict quadric_pencil_curve_type(const Poly& q1, const Poly& q2, const Space& sp);

// Coregularity from an inventory of singularity and curve verdicts.
struct CoregularityInput {
  std::vector<SingularityType> points;
  std::vector<CurveTypeVerdict> lc_curves;  // tangent-cone, double and intersection curves
  bool boundary_irreducible = true;
  bool has_triple_intersection_point = false;
  bool inventory_complete = true;
};

struct CoregularityResult {
  int value = -1;  // 0, 1, 2; -1 for unresolved
  std::string reason;
};

CoregularityResult coregularity(const CoregularityInput& in);

// helper: rank of the symmetric matrix of a quadratic form in given vars
int quadratic_rank(const Poly& q, const std::vector<std::string>& vars);

// the direction l with q proportional to l^2, when the rank is one
std::optional<Poly> quadratic_rank_one_direction(const Poly& q, const std::vector<std::string>& vars);

// order of vanishing at the origin and the total-degree graded part
int origin_order(const Poly& f);
Poly total_degree_part(const Poly& f, long d);

// singular points of an affine plane curve f(u, v): smooth, or the points
// with their nodality, or unresolved when root extraction fails
struct AffineCurveReport {
  bool smooth = false;
  bool unresolved = false;
  std::string reason;
  struct SingPoint {
    Rat u, v;
    bool is_node = false;
    bool extension = false;  // conjugate pair certified over a quadratic field
  };
  std::vector<SingPoint> points;
};
AffineCurveReport affine_curve_singularities(const Poly& f, const std::string& uvar, const std::string& vvar);

}  // namespace lcy

#endif
