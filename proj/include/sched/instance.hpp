#pragma once

#include "sched/rational.hpp"

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace sched {

// A job with release date, deadline and per-machine processing times.
// Machines absent from `proc` are not eligible (processing time infinite).
struct Job {
  int id = 0;
  Rat release;
  Rat deadline;
  std::map<int, Rat> proc;

  bool eligible(int machine) const { return proc.count(machine) != 0; }

  // nullptr when the machine is not eligible.
  const Rat* proc_on(int machine) const {
    auto it = proc.find(machine);
    return it == proc.end() ? nullptr : &it->second;
  }
};

struct Instance {
  int machines = 1;
  Rat epsilon = 1;  // slack parameter, > 0
  std::vector<Job> jobs;

  const Job& job(int id) const { return jobs.at(static_cast<std::size_t>(id)); }
  int n() const { return static_cast<int>(jobs.size()); }
};

enum class CommitmentKind { None, UponAdmission, DeltaCommitment };

struct CommitmentModel {
  CommitmentKind kind = CommitmentKind::None;
  Rat delta;  // only meaningful for DeltaCommitment, must satisfy 0 < delta < epsilon

  static CommitmentModel none() { return {CommitmentKind::None, Rat(0)}; }
  static CommitmentModel upon_admission() { return {CommitmentKind::UponAdmission, Rat(0)}; }
  static CommitmentModel delta_commitment(Rat d) {
    return {CommitmentKind::DeltaCommitment, std::move(d)};
  }
};

std::string commitment_name(const CommitmentModel& m);

struct Violation {
  int job = -1;                 // -1: instance-level problem
  std::optional<int> machine;   // set for per-machine violations
  std::string what;
};

struct ValidationReport {
  std::vector<Violation> violations;
  bool ok() const { return violations.empty(); }
  std::string describe() const;
};

// Checks all instance invariants: machine/epsilon positivity, dense unique
// job ids, nonnegative releases, d_j > r_j, at least one eligible machine,
// positive processing times, and the slack condition
// d_j - r_j >= (1 + epsilon) * p_ij on every eligible machine.
ValidationReport validate(const Instance& inst);

// Availability of `job` for `machine` at time tau under slack parameter
// `delta` (supplied by the calling algorithm): released, not yet admitted,
// and d_j - tau >= (1 + delta) * p_ij.
// Throws std::logic_error when called for a non-eligible machine.
bool available(const Job& job, int machine, const Rat& tau, const Rat& delta,
               const std::set<int>& admitted);

}  // namespace sched
