// Times the OpenMP campaign kernels against their single-threaded reference
// implementations and checks that both produce identical records.

#include <chrono>
#include <cstdio>
#include <string>

#include "modalwb/prober.hpp"

using namespace modalwb;

namespace {

double seconds(const std::chrono::steady_clock::time_point& t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

bool same_records(const CampaignReport& a, const CampaignReport& b) {
  if (a.per_size.size() != b.per_size.size()) return false;
  for (std::size_t i = 0; i < a.per_size.size(); ++i) {
    const SizeRecord &x = a.per_size[i], &y = b.per_size[i];
    if (x.frames_enumerated != y.frames_enumerated || x.frames_in_class != y.frames_in_class ||
        x.satisfiable_count != y.satisfiable_count)
      return false;
  }
  return true;
}

void bench_campaign(const std::string& label, const Formula& f, const FrameClassSpec& cls,
                    CampaignOptions opt) {
  opt.jobs = 1;
  auto t0 = std::chrono::steady_clock::now();
  CampaignReport serial = unsat_campaign_serial(f, label, cls, opt);
  double t_serial = seconds(t0);

  opt.jobs = 0; // all hardware threads
  t0 = std::chrono::steady_clock::now();
  CampaignReport parallel = unsat_campaign(f, label, cls, opt);
  double t_parallel = seconds(t0);

  std::printf("%-28s serial %8.3fs   parallel %8.3fs   speedup %5.2fx   records %s\n",
              label.c_str(), t_serial, t_parallel,
              t_parallel > 0 ? t_serial / t_parallel : 0.0,
              same_records(serial, parallel) ? "match" : "DIFFER");
}

void bench_claim(ClaimKind kind, std::uint64_t samples) {
  auto t0 = std::chrono::steady_clock::now();
  ClaimReport serial = claim_test(kind, samples, 0xBE9C, 1);
  double t_serial = seconds(t0);

  t0 = std::chrono::steady_clock::now();
  ClaimReport parallel = claim_test(kind, samples, 0xBE9C, 0);
  double t_parallel = seconds(t0);

  bool match = serial.violations == parallel.violations && serial.discarded == parallel.discarded;
  std::printf("claim %-22s serial %8.3fs   parallel %8.3fs   speedup %5.2fx   records %s\n",
              claim_name(kind), t_serial, t_parallel,
              t_parallel > 0 ? t_serial / t_parallel : 0.0, match ? "match" : "DIFFER");
}

} // namespace

int main() {
  FrameClassSpec cls;
  cls.conditions = {FrameCondition::weakly_connected_0, FrameCondition::lcom,
                    FrameCondition::rcom, FrameCondition::conf};

  CampaignOptions exhaustive;
  exhaustive.mode = CampaignMode::Exhaustive;
  exhaustive.max_size = 3;
  bench_campaign("phi_inf exhaustive n<=3", corpus("phi_inf"), cls, exhaustive);

  FrameClassSpec psi_cls;
  psi_cls.conditions = {FrameCondition::weakly_connected_0, FrameCondition::pseudo_transitive_1,
                        FrameCondition::lcom};
  bench_campaign("psi_inf exhaustive n<=3", corpus("psi_inf"), psi_cls, exhaustive);

  CampaignOptions random;
  random.mode = CampaignMode::Random;
  random.max_size = 5;
  random.samples = 20000;
  random.seed = 0xBE9C;
  bench_campaign("phi_inf random 20k x n<=5", corpus("phi_inf"), cls, random);

  bench_claim(ClaimKind::Trans, 20000);
  bench_claim(ClaimKind::CommC, 20000);
  return 0;
}
