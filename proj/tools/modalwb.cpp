#include <CLI11.hpp>

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "modalwb/adapters.hpp"
#include "modalwb/json_io.hpp"
#include "modalwb/verify.hpp"

using namespace modalwb;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitCheckFailed = 1; // a mathematical check failed
constexpr int kExitUsage = 2;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

int default_jobs() {
  if (const char* env = std::getenv("MODALWB_JOBS")) {
    char* end = nullptr;
    long v = std::strtol(env, &end, 10);
    if (end && *end == '\0' && v >= 0) return static_cast<int>(v);
  }
  return 0; // all hardware threads
}

json load_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw UsageError(path + ": cannot open file");
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw UsageError(path + ": " + e.what());
  }
}

// SRC = corpus:NAME | @FILE | inline formula text
Formula load_formula(const std::string& src) {
  try {
    if (src.rfind("corpus:", 0) == 0) return corpus(src.substr(7));
    if (!src.empty() && src[0] == '@') {
      std::ifstream in(src.substr(1));
      if (!in) throw UsageError(src.substr(1) + ": cannot open file");
      std::stringstream ss;
      ss << in.rdbuf();
      return parse_extended(ss.str());
    }
    return parse_extended(src);
  } catch (const ParseError& e) {
    throw UsageError(std::string("formula: ") + e.what());
  } catch (const std::invalid_argument& e) {
    throw UsageError(std::string("formula: ") + e.what());
  }
}

std::vector<FrameCondition> parse_condition_list(const std::string& list) {
  std::vector<FrameCondition> out;
  std::stringstream ss(list);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    auto c = condition_from_name(item);
    if (!c) throw UsageError("unknown condition: " + item);
    out.push_back(*c);
  }
  if (out.empty()) throw UsageError("empty condition list");
  return out;
}

void emit(const json& report, bool text, const std::string& summary) {
  if (text)
    std::cout << summary << "\n";
  else
    std::cout << report.dump(2) << "\n";
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"bimodal Kripke workbench"};
  app.require_subcommand(1);

  bool text = false;
  app.add_flag("--text", text, "human-readable summary instead of JSON");

  std::string model_path, frame_path, formula_src, conditions, class_list, mode = "exhaustive";
  std::string witness_name, target_json, claim, kind;
  int max_size = 3, jobs = default_jobs(), window = 30, steps = 25;
  std::uint64_t samples = 10000, seed = 0;
  bool product_only = false;

  auto* c_eval = app.add_subcommand("eval", "truth set of a formula in a finite model");
  c_eval->add_option("--model", model_path, "model JSON file")->required();
  c_eval->add_option("--formula", formula_src, "formula source")->required();

  auto* c_props = app.add_subcommand("props", "frame condition verdicts");
  c_props->add_option("--frame", frame_path, "frame JSON file")->required();
  c_props->add_option("--conditions", conditions, "comma-separated condition names")->required();

  auto* c_probe = app.add_subcommand("probe", "finite unsatisfiability campaign");
  c_probe->add_option("--formula", formula_src, "formula source")->required();
  c_probe->add_option("--class", class_list, "comma-separated frame conditions")->required();
  c_probe->add_option("--max-size", max_size, "largest frame size");
  c_probe->add_flag("--product-only", product_only,
                    "sweep component pairs; --class constrains the first component");
  c_probe->add_option("--mode", mode, "exhaustive | random")
      ->check(CLI::IsMember({"exhaustive", "random"}));
  c_probe->add_option("--samples", samples, "random mode: samples per size");
  c_probe->add_option("--seed", seed, "random mode seed");
  c_probe->add_option("--jobs", jobs, "worker threads (0 = all)");

  auto* c_witness = app.add_subcommand("witness", "symbolic evaluation with certificate");
  c_witness->add_option("--name", witness_name, "built-in witness model")->required();
  c_witness->add_option("--formula", formula_src, "formula source")->required();
  c_witness->add_option("--target", target_json, "point JSON, e.g. '{\"m\":\"omega\",\"k\":0}'");

  auto* c_claims = app.add_subcommand("claims", "randomized claim test");
  c_claims->add_option("--claim", claim, "trans|wcon|comm_l|comm_r|comm_c|dia_semantics")
      ->required();
  c_claims->add_option("--samples", samples, "sample count");
  c_claims->add_option("--seed", seed, "seed");
  c_claims->add_option("--jobs", jobs, "worker threads (0 = all)");

  auto* c_extract = app.add_subcommand("extract", "inductive chain extraction");
  c_extract->add_option("--name", witness_name, "built-in witness model")->required();
  c_extract->add_option("--kind", kind, "phi | psi")
      ->required()
      ->check(CLI::IsMember({"phi", "psi"}));
  c_extract->add_option("--steps", steps, "chain length");

  auto* c_cross = app.add_subcommand("crosscheck", "region evaluator vs truncation oracle");
  c_cross->add_option("--name", witness_name, "built-in witness model")->required();
  c_cross->add_option("--formula", formula_src, "formula source")->required();
  c_cross->add_option("--window", window, "truncation window N");

  auto* c_verify = app.add_subcommand("verify-all", "run the full acceptance suite");
  c_verify->add_option("--jobs", jobs, "worker threads (0 = all)");

  for (CLI::App* sub : app.get_subcommands({})) sub->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e); // --help
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (c_eval->parsed()) {
      Model m = model_from_json(load_json_file(model_path));
      Formula f = tick_expand(load_formula(formula_src));
      WorldSet set = eval_model(m, f);
      json worlds = json::array();
      std::string list;
      for (int w = 0; w < m.frame.world_count; ++w)
        if ((set >> w) & 1) {
          worlds.push_back(w);
          list += (list.empty() ? "" : " ") + std::to_string(w);
        }
      emit(json{{"formula", render(f)}, {"truth_set", worlds}}, text,
           "true at: " + (list.empty() ? "(nowhere)" : list));
      return kExitOk;
    }

    if (c_props->parsed()) {
      Frame2 fr = frame2_from_json(load_json_file(frame_path));
      json verdicts = json::array();
      std::string summary;
      bool all = true;
      for (FrameCondition c : parse_condition_list(conditions)) {
        if (condition_is_model_relative(c))
          throw UsageError(std::string(condition_name(c)) +
                           " is model-relative; it is exercised by the claims subcommand");
        ConditionResult r = check_condition(fr, c);
        json v{{"condition", condition_name(c)}, {"holds", r.ok}};
        if (!r.ok) v["witness"] = json::array({r.witness[0], r.witness[1], r.witness[2]});
        verdicts.push_back(std::move(v));
        summary += std::string(condition_name(c)) + (r.ok ? ": holds  " : ": fails  ");
        all = all && r.ok;
      }
      emit(json{{"conditions", verdicts}}, text, summary);
      return all ? kExitOk : kExitCheckFailed;
    }

    if (c_probe->parsed()) {
      Formula f = tick_expand(load_formula(formula_src));
      FrameClassSpec spec;
      if (product_only) {
        spec.product_only = true;
        spec.first_component = parse_condition_list(class_list);
      } else {
        spec.conditions = parse_condition_list(class_list);
      }
      CampaignOptions opt;
      opt.mode = mode == "random" ? CampaignMode::Random : CampaignMode::Exhaustive;
      opt.max_size = max_size;
      opt.samples = samples;
      opt.seed = seed;
      opt.jobs = jobs;
      CampaignReport report = unsat_campaign(f, formula_src, spec, opt);
      emit(campaign_report_to_json(report), text,
           "satisfiable: " + std::to_string(report.total_satisfiable()) + " across " +
               std::to_string(report.per_size.size()) + " size records");
      return report.total_satisfiable() == 0 ? kExitOk : kExitCheckFailed;
    }

    if (c_witness->parsed()) {
      SymbolicModel sm = builtin_witness(witness_name);
      Formula f = tick_expand(load_formula(formula_src));
      auto [region, cert] = eval_symbolic(sm, f);
      bool cert_ok = certificate_valid(cert, sm);
      json out{{"name", witness_name},
               {"formula", render(f)},
               {"region", region_to_json(region)},
               {"certificate", certificate_to_json(cert)},
               {"certificate_valid", cert_ok}};
      bool ok = cert_ok;
      std::string summary = "certificate: " + std::string(cert_ok ? "valid" : "INVALID");
      if (!target_json.empty()) {
        Point target = point_from_json(json::parse(target_json));
        bool member = region_member(region, target, sm.family);
        out["target"] = point_to_json(target);
        out["member"] = member;
        summary += "  member: " + std::string(member ? "true" : "false");
        ok = ok && member;
      }
      emit(out, text, summary);
      return ok ? kExitOk : kExitCheckFailed;
    }

    if (c_claims->parsed()) {
      auto ck = claim_from_name(claim);
      if (!ck) throw UsageError("unknown claim: " + claim);
      ClaimReport rep = claim_test(*ck, samples, seed, jobs);
      emit(claim_report_to_json(rep), text,
           std::string(claim_name(*ck)) + ": " + std::to_string(rep.violations) +
               " violations in " + std::to_string(rep.samples) + " samples (" +
               std::to_string(rep.discarded) + " discarded)");
      return rep.violations == 0 ? kExitOk : kExitCheckFailed;
    }

    if (c_extract->parsed()) {
      ChainKind ck = kind == "phi" ? ChainKind::Phi : ChainKind::Psi;
      try {
        ChainWitness w = extract_builtin_chain(witness_name, ck, steps);
        emit(chain_witness_to_json(w), text,
             std::to_string(w.steps.size()) + " steps, checks " +
                 (w.all_checks_pass() ? "pass" : "FAIL"));
        return w.all_checks_pass() ? kExitOk : kExitCheckFailed;
      } catch (const ConstructionStuck& e) {
        json out{{"kind", kind}, {"construction_stuck", json{{"step", e.step},
                                                             {"missing", e.missing_witness}}}};
        emit(out, text, e.what());
        return kExitCheckFailed;
      }
    }

    if (c_cross->parsed()) {
      SymbolicModel sm = builtin_witness(witness_name);
      Formula f = tick_expand(load_formula(formula_src));
      CrosscheckReport rep = crosscheck(sm, f, window);
      emit(crosscheck_report_to_json(rep), text,
           std::to_string(rep.disagreements.size()) + " disagreements over " +
               std::to_string(rep.definite_verdicts) + " definite verdicts");
      return rep.disagreements.empty() ? kExitOk : kExitCheckFailed;
    }

    if (c_verify->parsed()) {
      VerifyResult r = verify_all(std::cout, jobs);
      return r.all_pass() ? kExitOk : kExitCheckFailed;
    }
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const json::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitCheckFailed;
  }
  return kExitUsage;
}
