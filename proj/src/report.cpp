#include "lcy/report.hpp"

#include "lcy/parse.hpp"

namespace lcy {

Json pair_json(const LogPair& pair) {
  Json j;
  j["space"] = pair.space.name;
  Json vars = Json::array();
  for (const auto& b : pair.space.blocks) {
    Json blk;
    blk["variables"] = b.vars;
    blk["weights"] = b.weights;
    vars.push_back(blk);
  }
  j["grading"] = vars;
  Json bd = Json::array();
  for (const auto& f : pair.boundary) bd.push_back(render_poly(f));
  j["boundary"] = bd;
  return j;
}

Json witness_json(const Witness& w) { return Json(witness_str(w)); }

Json verdict_json(const VPVerdict& v) {
  Json j;
  switch (v.status) {
    case VPStatus::VolumePreserving:
      j["status"] = "VolumePreserving";
      j["scalar"] = to_string(v.scalar);
      break;
    case VPStatus::NotProportional: {
      j["status"] = "NotProportional";
      Json pt;
      for (const auto& [k, val] : v.witness) pt[k] = to_string(val);
      j["witness_point"] = pt;
      j["lhs"] = to_string(v.witness_lhs);
      j["rhs"] = to_string(v.witness_rhs);
      break;
    }
    default:
      j["status"] = "Indeterminate";
      j["reason"] = v.reason;
  }
  return j;
}

Json recognition_json(const RecognitionResult& r) {
  Json j;
  j["tag"] = to_string(r.tag);
  Json m = Json::array();
  for (auto t : r.matches) m.push_back(to_string(t));
  j["matches"] = m;
  j["evidence"] = r.evidence;
  if (r.reroute) j["reroute"] = to_string(*r.reroute);
  if (r.coreg.value >= 0)
    j["coregularity"] = r.coreg.value;
  else
    j["coregularity"] = std::string("unresolved: ") + r.coreg.reason;
  return j;
}

Json step_json(const StepResult& s) {
  Json j;
  j["step"] = s.tag;
  Json links = Json::array();
  for (size_t i = 0; i < s.chain.size(); ++i) {
    Json l;
    l["map"] = s.chain[i].map.str();
    l["source"] = pair_json(s.chain[i].source);
    l["target"] = pair_json(s.chain[i].target);
    if (i < s.verdict.steps.size()) l["verdict"] = verdict_json(s.verdict.steps[i]);
    links.push_back(l);
  }
  j["links"] = links;
  j["verdict"] = verdict_json(s.verdict.overall);
  if (s.reroute) j["reroute"] = to_string(*s.reroute);
  j["target_family"] = to_string(s.target.tag);
  if (!s.notes.empty()) j["notes"] = s.notes;
  return j;
}

Json trace_json(const ReductionTrace& t) {
  Json j;
  j["initial"] = instance_json(t.initial);
  Json steps = Json::array();
  for (const auto& s : t.steps) steps.push_back(step_json(s));
  j["steps"] = steps;
  j["overall_scalar"] = to_string(t.overall_scalar);
  j["final_form"] = t.final_form;
  j["final_pair"] = pair_json(t.final_instance.pair);
  j["complete"] = t.complete;
  if (!t.notes.empty()) j["notes"] = t.notes;
  return j;
}

Json check_report_json(const CheckReport& r) {
  Json j = Json::array();
  for (const auto& [name, ok] : r.checks) {
    Json c;
    c["check"] = name;
    c["pass"] = ok;
    j.push_back(c);
  }
  return j;
}

Json instance_json(const FamilyInstance& inst) {
  Json j;
  j["family"] = to_string(inst.tag);
  j["pair"] = pair_json(inst.pair);
  Json ws = Json::array();
  for (const auto& w : inst.witnesses) ws.push_back(witness_json(w));
  j["witnesses"] = ws;
  j["provenance"] = inst.provenance;
  j["nodal"] = inst.nodal_flavor;
  return j;
}

int verdict_exit_code(const VPVerdict& v) {
  switch (v.status) {
    case VPStatus::VolumePreserving: return 0;
    case VPStatus::NotProportional: return 1;
    default: return 2;
  }
}

}  // namespace lcy
