#include "sched/instance.hpp"

#include "sched/check.hpp"

#include <sstream>

namespace sched {

std::string commitment_name(const CommitmentModel& m) {
  switch (m.kind) {
    case CommitmentKind::None:
      return "none";
    case CommitmentKind::UponAdmission:
      return "admission";
    case CommitmentKind::DeltaCommitment:
      return "delta(" + to_frac(m.delta) + ")";
  }
  return "?";
}

std::string ValidationReport::describe() const {
  std::ostringstream os;
  for (const auto& v : violations) {
    if (v.job >= 0) {
      os << "job " << v.job;
      if (v.machine) os << " machine " << *v.machine;
      os << ": ";
    }
    os << v.what << "\n";
  }
  return os.str();
}

ValidationReport validate(const Instance& inst) {
  ValidationReport rep;
  auto flag = [&rep](int job, std::optional<int> machine, std::string what) {
    rep.violations.push_back({job, machine, std::move(what)});
  };

  if (inst.machines < 1) flag(-1, std::nullopt, "machine count must be positive");
  if (inst.epsilon <= 0) flag(-1, std::nullopt, "epsilon must be positive");

  std::set<int> seen;
  const Rat one_plus_eps = Rat(1) + inst.epsilon;
  for (const Job& j : inst.jobs) {
    if (j.id < 0 || j.id >= inst.n()) flag(j.id, std::nullopt, "job id out of 0..n-1");
    if (!seen.insert(j.id).second) flag(j.id, std::nullopt, "duplicate job id");
    if (j.release < 0) flag(j.id, std::nullopt, "negative release");
    if (j.deadline <= j.release) flag(j.id, std::nullopt, "deadline not after release");
    if (j.proc.empty()) flag(j.id, std::nullopt, "no eligible machine");
    for (const auto& [machine, p] : j.proc) {
      if (machine < 0 || machine >= inst.machines) {
        flag(j.id, machine, "processing time for unknown machine");
        continue;
      }
      if (p <= 0) {
        flag(j.id, machine, "non-positive processing time");
        continue;
      }
      if (j.deadline - j.release < one_plus_eps * p) {
        flag(j.id, machine, "slack violation: d - r < (1+eps)*p");
      }
    }
  }
  return rep;
}

bool available(const Job& job, int machine, const Rat& tau, const Rat& delta,
               const std::set<int>& admitted) {
  const Rat* p = job.proc_on(machine);
  SCHED_CHECK(p != nullptr, "available() queried for non-eligible machine");
  if (job.release > tau) return false;
  if (admitted.count(job.id)) return false;
  return job.deadline - tau >= (Rat(1) + delta) * (*p);
}

}  // namespace sched
