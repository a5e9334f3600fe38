#include "sched/region.hpp"

#include "sched/check.hpp"

#include <algorithm>

namespace sched {

RegionParams region_params(const Rat& epsilon) {
  SCHED_CHECK(epsilon > 0, "epsilon must be positive");
  RegionParams prm;
  prm.epsilon = epsilon;
  prm.epsilon_eff = std::min(epsilon, Rat(1));
  prm.avail_delta = prm.epsilon_eff / 2;
  prm.threshold = prm.epsilon_eff / 4;
  return prm;
}

RegionPolicy::RegionPolicy(const Instance& inst, RegionParams prm)
    : inst_(inst), prm_(std::move(prm)) {}

std::optional<int> RegionPolicy::shortest_available(const SimEngine& eng,
                                                    int machine) const {
  const Rat& tau = eng.now();
  const Rat one_plus_d = Rat(1) + prm_.avail_delta;
  std::optional<int> best;
  for (int id : eng.released_pool()) {
    const Job& j = inst_.job(id);
    const Rat* p = j.proc_on(machine);
    if (p == nullptr) continue;
    if (j.deadline - tau < one_plus_d * (*p)) continue;
    if (!best || *p < *inst_.job(*best).proc_on(machine)) best = id;
  }
  return best;
}

void RegionPolicy::on_event(SimEngine& eng, EventKind kind, int, int, std::uint64_t) {
  if (kind == EventKind::Release || kind == EventKind::AdmissionFollowUp) {
    preemption_routine(eng);
  }
}

void RegionPolicy::on_completion(SimEngine& eng, int, int) { preemption_routine(eng); }

void RegionPolicy::preemption_routine(SimEngine& eng) {
  const Rat tau = eng.now();
  bool restart = true;
  while (restart) {
    restart = false;
    for (int i = 0; i < inst_.machines && !restart; ++i) {
      const auto js = shortest_available(eng, i);
      if (!js) continue;
      const auto running = eng.running_job(i);
      if (running) {
        const Rat& pstar = *inst_.job(*js).proc_on(i);
        const Rat& prun = *inst_.job(*running).proc_on(i);
        if (!(pstar < prm_.threshold * prun)) continue;
      }
      AdmissionRecord rec;
      rec.job = *js;
      rec.machine = i;
      rec.admit_time = tau;
      log_.push_back(std::move(rec));
      eng.admit(*js, i);
      eng.schedule(EventKind::AdmissionFollowUp, tau, -1, -1, 0);
      restart = true;
    }
  }
}

AdmissionLog RegionPolicy::admission_log() const { return log_; }

OutcomeSplit outcome_split(const Instance& inst, const ScheduleTrace& trace) {
  OutcomeSplit s;
  for (const auto& [job, where] : trace.admissions) {
    auto done = trace.completions.find(job);
    SCHED_CHECK(done != trace.completions.end(), "admitted job without completion");
    const bool ok = done->second <= inst.job(job).deadline;
    (ok ? s.finished : s.late).push_back(job);
    auto& bucket = s.per_machine[where.first];
    (ok ? bucket.first : bucket.second).push_back(job);
  }
  return s;
}

RunResult run_region(const Instance& inst) {
  RegionPolicy policy(inst, region_params(inst.epsilon));
  SimEngine eng(inst, policy);
  eng.run();
  return {eng.trace(), policy.admission_log()};
}

}  // namespace sched
