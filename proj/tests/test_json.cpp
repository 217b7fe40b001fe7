#include <doctest.h>

#include <fstream>
#include <string>

#include "modalwb/adapters.hpp"
#include "modalwb/json_io.hpp"
#include "modalwb/rng.hpp"

using namespace modalwb;

namespace {

// Checker for the JSON-Schema subset the shipped schemas use:
// type (string or list), required, properties, items, enum.
bool type_matches(const json& value, const std::string& t) {
  if (t == "object") return value.is_object();
  if (t == "array") return value.is_array();
  if (t == "string") return value.is_string();
  if (t == "boolean") return value.is_boolean();
  if (t == "integer") return value.is_number_integer() || value.is_number_unsigned();
  if (t == "number") return value.is_number();
  if (t == "null") return value.is_null();
  return false;
}

bool conforms(const json& value, const json& schema, std::string& why) {
  if (schema.contains("type")) {
    const json& t = schema["type"];
    bool ok = false;
    if (t.is_string()) {
      ok = type_matches(value, t.get<std::string>());
    } else {
      for (const json& alt : t)
        if (type_matches(value, alt.get<std::string>())) ok = true;
    }
    if (!ok) {
      why = "type mismatch against " + t.dump() + " for " + value.dump().substr(0, 80);
      return false;
    }
  }
  if (schema.contains("enum")) {
    bool ok = false;
    for (const json& alt : schema["enum"])
      if (alt == value) ok = true;
    if (!ok) {
      why = "value " + value.dump() + " not in enum";
      return false;
    }
  }
  if (schema.contains("required")) {
    for (const json& key : schema["required"])
      if (!value.contains(key.get<std::string>())) {
        why = "missing required key " + key.dump();
        return false;
      }
  }
  if (schema.contains("properties") && value.is_object()) {
    for (const auto& [key, sub] : schema["properties"].items())
      if (value.contains(key) && !conforms(value[key], sub, why)) {
        why = "at ." + key + ": " + why;
        return false;
      }
  }
  if (schema.contains("items") && value.is_array()) {
    for (std::size_t i = 0; i < value.size(); ++i)
      if (!conforms(value[i], schema["items"], why)) {
        why = "at [" + std::to_string(i) + "]: " + why;
        return false;
      }
  }
  return true;
}

json load_schema(const std::string& name) {
  std::ifstream in(std::string(MODALWB_SCHEMA_DIR) + "/" + name + ".schema.json");
  REQUIRE(in.good());
  return json::parse(in);
}

void check_against(const json& value, const std::string& schema_name) {
  std::string why;
  bool ok = conforms(value, load_schema(schema_name), why);
  CAPTURE(schema_name);
  CAPTURE(why);
  CHECK(ok);
}

} // namespace

TEST_CASE("frame and model round-trips") {
  Frame1 f1(3, {0b010, 0b100, 0b001});
  Frame1 g1 = frame1_from_json(frame1_to_json(f1));
  CHECK(g1.world_count == 3);
  CHECK(g1.r == f1.r);

  Rng rng(0x15B);
  for (int trial = 0; trial < 200; ++trial) {
    int n = 1 + static_cast<int>(rng.below(6));
    Model m;
    m.frame.world_count = n;
    m.frame.r0.assign(static_cast<std::size_t>(n), 0);
    m.frame.r1.assign(static_cast<std::size_t>(n), 0);
    for (int x = 0; x < n; ++x) {
      m.frame.r0[static_cast<std::size_t>(x)] = rng.next() & m.frame.all_worlds();
      m.frame.r1[static_cast<std::size_t>(x)] = rng.next() & m.frame.all_worlds();
    }
    m.valuation["p"] = rng.next() & m.frame.all_worlds();
    m.valuation["q"] = rng.next() & m.frame.all_worlds();
    json j = model_to_json(m);
    check_against(j, "model");
    Model back = model_from_json(j);
    CHECK(back.frame.world_count == m.frame.world_count);
    CHECK(back.frame.r0 == m.frame.r0);
    CHECK(back.frame.r1 == m.frame.r1);
    CHECK(back.valuation == m.valuation);
  }
}

TEST_CASE("malformed structures are rejected") {
  CHECK_THROWS(frame2_from_json(json{{"worlds", 0}, {"r0", json::array()}, {"r1", json::array()}}));
  CHECK_THROWS(frame2_from_json(json{{"worlds", 2},
                                     {"r0", json::array({json::array({0, 5})})},
                                     {"r1", json::array()}}));
  CHECK_THROWS(point_from_json(json{{"m", "infinity"}, {"k", 0}}));
  CHECK_THROWS(point_from_json(json{{"m", -1}, {"k", 0}}));
}

TEST_CASE("point round-trips") {
  for (Point p : {Point::omega_root(), Point::omega(4), Point::at_root(7), Point::of(2, 9)}) {
    json j = point_to_json(p);
    check_against(j, "point");
    CHECK(point_from_json(j) == p);
  }
}

TEST_CASE("region and symbolic model round-trips preserve membership") {
  for (const std::string& name : builtin_witness_names()) {
    CAPTURE(name);
    SymbolicModel sm = builtin_witness(name);
    json j = symbolic_model_to_json(sm);
    check_against(j, "symbolic_model");
    SymbolicModel back = symbolic_model_from_json(j);
    CHECK(back.family.first == sm.family.first);
    CHECK(back.family.second == sm.family.second);
    for (const auto& [var, region] : sm.valuation) {
      for (int m = 0; m <= 6; ++m) {
        CHECK(region_member(back.valuation[var], Point::at_root(m), sm.family) ==
              region_member(region, Point::at_root(m), sm.family));
        for (int k = 0; k <= 6; ++k)
          CHECK(region_member(back.valuation[var], Point::of(m, k), sm.family) ==
                region_member(region, Point::of(m, k), sm.family));
      }
      CHECK(region_member(back.valuation[var], Point::omega_root(), sm.family) ==
            region_member(region, Point::omega_root(), sm.family));
    }
  }
}

TEST_CASE("nested region expressions parse") {
  OmegaFamily fam{FirstFam::Omega1Desc, SecondFam::OneStep};
  json expr = json{{"op", "not"},
              {"args", json::array({json{
                  {"op", "or"},
                  {"args", json::array({json{{"atom", "m_even"}},
                                        json{{"op", "and"},
                                             {"args", json::array(
                                                  {json{{"atom", "m_ge_c"}, {"c", 2}},
                                                   json{{"atom", "m_eq_k_plus"}, {"d", 1}}})}}})}}})}};
  Region r = region_from_json(expr, fam);
  CHECK(!region_member(r, Point::of(4, 3), fam));  // even
  CHECK(!region_member(r, Point::of(3, 2), fam));  // odd but m>=2 and m=k+1
  CHECK(region_member(r, Point::of(3, 5), fam));
  CHECK(region_member(r, Point::omega_root(), fam));
  CHECK_THROWS(region_from_json(json{{"op", "xor"}, {"args", json::array()}}, fam));
  CHECK_THROWS(region_from_json(json{{"atom", "m_lt_c"}, {"c", 1}}, fam));
}

TEST_CASE("reports validate against the shipped schemas") {
  FrameClassSpec cls;
  cls.conditions = {FrameCondition::weakly_connected_0, FrameCondition::lcom,
                    FrameCondition::rcom, FrameCondition::conf};
  CampaignOptions opt;
  opt.max_size = 2;
  CampaignReport camp = unsat_campaign(corpus("phi_inf"), "phi_inf", cls, opt);
  check_against(campaign_report_to_json(camp), "campaign_report");

  // a counterexample-producing campaign still validates
  CampaignReport sat = unsat_campaign(parse("true"), "top", {}, opt);
  check_against(campaign_report_to_json(sat), "campaign_report");

  ClaimReport claim = claim_test(ClaimKind::DiaSemantics, 200, 0x42, 1);
  check_against(claim_report_to_json(claim), "claim_report");

  ChainWitness chain = extract_builtin_chain("lemma_satone", ChainKind::Phi, 4);
  check_against(chain_witness_to_json(chain), "chain_witness");

  SymbolicModel sm = builtin_witness("lemma_satone");
  Formula f = tick_expand(corpus("phi_inf"));
  auto [region, cert] = eval_symbolic(sm, f);
  (void)region;
  check_against(certificate_to_json(cert), "certificate");

  check_against(crosscheck_report_to_json(crosscheck(sm, f, 8)), "crosscheck_report");
}

TEST_CASE("report serialization is deterministic") {
  ClaimReport a = claim_test(ClaimKind::Trans, 300, 0x77, 2);
  ClaimReport b = claim_test(ClaimKind::Trans, 300, 0x77, 1);
  json ja = claim_report_to_json(a), jb = claim_report_to_json(b);
  ja.erase("timing");
  jb.erase("timing");
  CHECK(ja.dump() == jb.dump());
}
