#pragma once

#include "sched/blocking.hpp"  // RunResult
#include "sched/instance.hpp"
#include "sched/sim.hpp"

#include <map>
#include <vector>

namespace sched {

struct RegionParams {
  Rat epsilon;      // as given
  Rat epsilon_eff;  // min(epsilon, 1)
  Rat avail_delta;  // epsilon_eff / 2, used in the availability predicate
  Rat threshold;    // epsilon_eff / 4, preemption factor
};

RegionParams region_params(const Rat& epsilon);

// The region algorithm: no commitment, admissions on job release and job
// completion. An idle machine takes the shortest available job; a busy one
// running j takes j* only when p_ij* < (epsilon/4) p_ij, strictly.
class RegionPolicy : public Policy {
 public:
  RegionPolicy(const Instance& inst, RegionParams prm);

  bool completion_triggers() const override { return true; }
  void on_event(SimEngine& eng, EventKind kind, int machine, int job,
                std::uint64_t version) override;
  void on_completion(SimEngine& eng, int machine, int job) override;
  AdmissionLog admission_log() const override;

  const RegionParams& params() const { return prm_; }

 private:
  void preemption_routine(SimEngine& eng);
  std::optional<int> shortest_available(const SimEngine& eng, int machine) const;

  const Instance& inst_;
  RegionParams prm_;
  AdmissionLog log_;
};

struct OutcomeSplit {
  std::vector<int> finished;                              // F: C_j <= d_j
  std::vector<int> late;                                  // U
  std::map<int, std::pair<std::vector<int>, std::vector<int>>> per_machine;
};

OutcomeSplit outcome_split(const Instance& inst, const ScheduleTrace& trace);

RunResult run_region(const Instance& inst);

}  // namespace sched
