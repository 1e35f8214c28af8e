#ifndef LCY_REDUCE_HPP
#define LCY_REDUCE_HPP

#include "lcy/family.hpp"

namespace lcy {

// One certified reduction step: a chain of elementary volume-preserving
// maps (links, normalizations, coordinate moves) with per-link verdicts.
struct StepResult {
  std::string tag;  // "x", "i", ..., "endgame", "plane-quadratic", "reroute"
  std::vector<ChainStepT<Rat>> chain;
  ChainVerdictT<Rat> verdict;
  FamilyInstance source, target;
  std::optional<FamilyTag> reroute;  // set when no map is emitted
  std::vector<std::string> notes;
  bool ok() const {
    return reroute.has_value() || verdict.overall.status == VPStatus::VolumePreserving;
  }
};

// step constructors (Figure-level edges)
StepResult step_x_triple_point(const FamilyInstance& inst);
StepResult step_i(const FamilyInstance& inst);
StepResult step_ii(const FamilyInstance& inst);
StepResult step_iii(const FamilyInstance& inst);
StepResult step_iv(const FamilyInstance& inst);
StepResult step_v(const FamilyInstance& inst);
StepResult step_vi(const FamilyInstance& inst);
StepResult step_vii(const FamilyInstance& inst);
StepResult step_viii(const FamilyInstance& inst);
StepResult step_ix(const FamilyInstance& inst);
StepResult endgame_to_toric(const FamilyInstance& inst);

// the elementary links of the weighted-space tour
enum class PhiLink { Phi1, Phi2, Phi3, Phi4 };
StepResult phi_link(const FamilyInstance& inst, PhiLink which);

// two-dimensional quadratic move on a plane-cubic pair
StepResult plane_quadratic(const LogPair& pair2, const std::vector<Point>& basepoints);

// conic-bundle discriminant of the bidegree (2,4) form in (u,v,w) x (y,z)
Poly conic_discriminant(const Poly& wform);

// the W-form of the double-direction reduction, from the shape data
Poly double_direction_wform(const Poly& a1, const Poly& b2, const Poly& c2, const Poly& d3, const Poly& e4);

struct ReductionTrace {
  FamilyInstance initial;
  std::vector<StepResult> steps;
  FamilyInstance final_instance;
  Rat overall_scalar = Rat(1);
  std::string final_form;  // "toric", "coreg1", or the last family tag
  bool complete = false;
  std::vector<std::string> notes;
};

ReductionTrace run_pipeline(const FamilyInstance& inst);

}  // namespace lcy

#endif
