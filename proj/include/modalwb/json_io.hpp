#pragma once

#include <json.hpp>

#include "modalwb/chain.hpp"
#include "modalwb/kripke.hpp"
#include "modalwb/omega.hpp"
#include "modalwb/prober.hpp"

namespace modalwb {

using json = nlohmann::json;

// Finite structures: {"worlds": N, "r0": [[i,j],...], "r1": [[i,j],...]},
// models add "valuation": {"p": [0,2], ...}; Frame1 uses a single "r".
json frame1_to_json(const Frame1& f);
Frame1 frame1_from_json(const json& j);
json frame2_to_json(const Frame2& f);
Frame2 frame2_from_json(const json& j);
json model_to_json(const Model& m);
Model model_from_json(const json& j);

// Points: {"m": 3 | "omega", "k": 0 | "root"}.
json point_to_json(const Point& p);
Point point_from_json(const json& j);

// Regions as Boolean expressions {"op":"or|and|not","args":[...]} over atom
// leaves {"atom":"m_ge_c","c":2} (offset atoms use key "d"). Parsing accepts
// arbitrary nesting; serialization emits or-of-and-of-literals.
json region_to_json(const Region& r);
Region region_from_json(const json& j, const OmegaFamily& fam);

json symbolic_model_to_json(const SymbolicModel& sm);
SymbolicModel symbolic_model_from_json(const json& j);

// Report serialization (one-way).
json campaign_report_to_json(const CampaignReport& r);
json claim_report_to_json(const ClaimReport& r);
json chain_witness_to_json(const ChainWitness& w);
json certificate_to_json(const Certificate& c);
json crosscheck_report_to_json(const CrosscheckReport& r);

} // namespace modalwb
