#ifndef LCY_REPORT_HPP
#define LCY_REPORT_HPP

#include <json.hpp>

#include "lcy/lattice.hpp"
#include "lcy/reduce.hpp"

namespace lcy {

using Json = nlohmann::ordered_json;

// Deterministic JSON reports: fixed key order, polynomials as grammar text,
// no timing fields unless explicitly enabled by the caller.
Json pair_json(const LogPair& pair);
Json witness_json(const Witness& w);
Json verdict_json(const VPVerdict& v);
Json recognition_json(const RecognitionResult& r);
Json step_json(const StepResult& s);
Json trace_json(const ReductionTrace& t);
Json check_report_json(const CheckReport& r);
Json instance_json(const FamilyInstance& inst);

// exit codes: 0 success, 1 verification failure, 2 unresolved, 3 input error
int verdict_exit_code(const VPVerdict& v);

}  // namespace lcy

#endif
