#pragma once

#include "sched/instance.hpp"

#include <map>
#include <optional>
#include <vector>

namespace sched {

struct EdfJob {
  int id = -1;
  Rat release;
  Rat deadline;
  Rat proc;
};

// Exact preemptive earliest-deadline-first run on one machine; returns each
// job's completion time. EDF is an exact feasibility certifier for
// preemptive single-machine scheduling with release dates, so
// edf_feasible == "all jobs can meet their deadlines".
std::map<int, Rat> edf_completions(std::vector<EdfJob> jobs);
bool edf_feasible(const std::vector<EdfJob>& jobs);

// The instance's jobs restricted to `machine`, as EDF inputs.
std::vector<EdfJob> edf_jobs_on_machine(const Instance& inst, int machine,
                                        const std::vector<int>& ids);

struct OracleCaps {
  int max_jobs = 14;
  int max_machines = 3;
};

struct OptResult {
  int value = 0;
  std::vector<std::vector<int>> witness;  // witness[machine] = job ids, ascending
};

// Exact maximum non-migratory throughput: the largest number of jobs that can
// be assigned to eligible machines such that each machine's set is
// EDF-feasible. Branch and bound over per-machine subsets with memoized
// feasibility. Returns nullopt when the instance exceeds the caps; callers
// then fall back to opt_upper_bound.
std::optional<OptResult> opt_throughput(const Instance& inst, const OracleCaps& caps = {});

// Cheap sound upper bound: per machine, the largest k such that the k
// smallest eligible processing times fit into the hull [min r, max d] of its
// eligible jobs; summed over machines and capped at n.
int opt_upper_bound(const Instance& inst);

// Full subset enumeration for m = 1; the independent oracle used to
// cross-check the branch and bound. Requires inst.machines == 1.
int opt_naive_single_machine(const Instance& inst);

}  // namespace sched
