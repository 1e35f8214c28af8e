#ifndef LCY_FAMILY_HPP
#define LCY_FAMILY_HPP

#include <variant>

#include "lcy/sing.hpp"
#include "lcy/volume.hpp"

namespace lcy {

enum class FamilyTag {
  A1, A2, A3, A4, A2star, A3star,
  B1, B2, B3, B4, B1star,
  C1, C2, C3, C4,
  D1, D2,
  Coreg2, Unresolved
};

std::string to_string(FamilyTag t);
std::optional<FamilyTag> family_tag_of(const std::string& name);

// Reroute notes for the recognized-then-redirected cases.
std::optional<FamilyTag> reroute_of(FamilyTag t);

// ---------------------------------------------------------------------------
// witnesses

struct PointW {
  Point coords;
};
struct LineOnSurfaceW {
  Poly f1, f2;  // the line V(f1, f2); weighted forms in weighted spaces
};
struct ConicOnSurfaceW {
  Poly plane, quadric;
  Point base_point;  // rational point on the conic
};
struct TwistedCubicFrameW {
  Poly xi1, xi2, xi3;
};
struct LambdaRootW {
  // root data for the double-direction family: y = lambda z plus the factor
  // constants. Either all rational or all in one quadratic/cubic/quartic
  // extension field.
  bool rational = true;
  Rat lambda, alpha, beta, gamma, delta;
  std::shared_ptr<const ExtContext> ctx;
  ExtElem elambda, ealpha, ebeta, egamma, edelta;
};
struct SkewLineTripleW {
  std::array<CurveParam, 3> lines;
};
struct SecantLineTripleW {
  std::array<Point, 3> gamma_points;  // non-collinear points on the plane conic in frame space
};

using Witness = std::variant<PointW, LineOnSurfaceW, ConicOnSurfaceW, TwistedCubicFrameW, LambdaRootW,
                             SkewLineTripleW, SecantLineTripleW>;

std::string witness_str(const Witness& w);

// containment / incidence re-validation against a pair
bool validate_witness(const LogPair& pair, const Witness& w);

// joint projective transformation of pair and witnesses (row-major matrix m
// acting on coordinates)
LogPair transform_pair(const LogPair& pair, const MatQ& m);
Witness transform_witness(const Space& sp, const Witness& w, const MatQ& m);

struct FamilyInstance {
  LogPair pair;
  FamilyTag tag = FamilyTag::Unresolved;
  std::vector<Witness> witnesses;
  std::string provenance;
  bool nodal_flavor = false;  // generated with a nodal lc-centre curve
};

// ---------------------------------------------------------------------------
// recognition

struct RecognitionResult {
  FamilyTag tag = FamilyTag::Unresolved;
  std::vector<FamilyTag> matches;      // all shape tests that passed
  std::vector<std::string> evidence;
  CoregularityResult coreg;
  std::optional<FamilyTag> reroute;
  bool has(FamilyTag t) const { return std::find(matches.begin(), matches.end(), t) != matches.end(); }
};

RecognitionResult recognize_family(const LogPair& pair, const std::vector<Witness>& witnesses);

// ---------------------------------------------------------------------------
// generation

struct GenOptions {
  long bound = 9;       // coefficient box
  bool nodal = false;   // plant a nodal lc-centre curve (maximal pair)
  int variant = 0;      // per-family sub-shape selector (see sample_family)
};

// Deterministic-from-seed instance of the family with every witness the
// reduction steps need. Variants:
//   B1: 0 = generic with three rational reducible fibres, 1 = off-line
//       singular point, 2 = degenerate cusp reroute shape
FamilyInstance sample_family(FamilyTag tag, uint64_t seed, GenOptions opt = {});

// singular points of a surface in a 3-space (elimination based)
struct SurfaceSingReport {
  bool smooth = false;
  bool unresolved = false;
  std::string reason;
  std::vector<Point> rational_points;
  bool has_irrational = false;
};
SurfaceSingReport surface_singular_points(const Poly& F, const Space& sp);

// perfect-square test for polynomials
std::optional<Poly> poly_square_root(const Poly& f);

// assemble the coregularity inventory of a pair (classification of found or
// witnessed singular points plus the lc-centre curves)
CoregularityResult pair_coregularity(const LogPair& pair, const std::vector<Witness>& witnesses);

}  // namespace lcy

#endif
