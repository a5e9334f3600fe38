#include "sched/oracle.hpp"

#include "sched/check.hpp"

#include <algorithm>
#include <set>
#include <unordered_map>

namespace sched {

std::map<int, Rat> edf_completions(std::vector<EdfJob> jobs) {
  std::map<int, Rat> done;
  if (jobs.empty()) return done;
  std::sort(jobs.begin(), jobs.end(), [](const EdfJob& a, const EdfJob& b) {
    return a.release != b.release ? a.release < b.release : a.id < b.id;
  });
  // (deadline, id) -> index; the set front is the EDF pick.
  std::set<std::pair<Rat, int>> ready;
  std::vector<Rat> rem(jobs.size());
  for (std::size_t i = 0; i < jobs.size(); ++i) rem[i] = jobs[i].proc;
  std::vector<std::size_t> by_id_index(jobs.size());
  std::map<std::pair<Rat, int>, std::size_t> key_to_index;
  for (std::size_t i = 0; i < jobs.size(); ++i) key_to_index[{jobs[i].deadline, jobs[i].id}] = i;

  Rat t = jobs.front().release;
  std::size_t next = 0;
  while (next < jobs.size() || !ready.empty()) {
    if (ready.empty()) {
      t = std::max(t, jobs[next].release);
    }
    while (next < jobs.size() && jobs[next].release <= t) {
      ready.insert({jobs[next].deadline, jobs[next].id});
      ++next;
    }
    const auto pick = *ready.begin();
    const std::size_t idx = key_to_index.at(pick);
    // Run until completion or the next release, whichever comes first.
    Rat until = t + rem[idx];
    if (next < jobs.size() && jobs[next].release < until) until = jobs[next].release;
    rem[idx] -= until - t;
    t = until;
    if (rem[idx] == 0) {
      done[jobs[idx].id] = t;
      ready.erase(pick);
    }
  }
  return done;
}

bool edf_feasible(const std::vector<EdfJob>& jobs) {
  const auto done = edf_completions(jobs);
  for (const EdfJob& j : jobs) {
    if (done.at(j.id) > j.deadline) return false;
  }
  return true;
}

std::vector<EdfJob> edf_jobs_on_machine(const Instance& inst, int machine,
                                        const std::vector<int>& ids) {
  std::vector<EdfJob> out;
  for (int id : ids) {
    const Job& j = inst.job(id);
    const Rat* p = j.proc_on(machine);
    SCHED_CHECK(p != nullptr, "job not eligible on requested machine");
    out.push_back({id, j.release, j.deadline, *p});
  }
  return out;
}

namespace {

// Incremental per-machine feasibility with memoization over job bitmasks.
class FeasibleCache {
 public:
  FeasibleCache(const Instance& inst, int machine) : inst_(inst), machine_(machine) {}

  bool feasible(std::uint32_t mask) {
    auto it = memo_.find(mask);
    if (it != memo_.end()) return it->second;
    std::vector<EdfJob> jobs;
    for (int id = 0; id < inst_.n(); ++id) {
      if (mask & (1u << id)) {
        const Job& j = inst_.job(id);
        jobs.push_back({id, j.release, j.deadline, *j.proc_on(machine_)});
      }
    }
    const bool ok = edf_feasible(jobs);
    memo_.emplace(mask, ok);
    return ok;
  }

 private:
  const Instance& inst_;
  int machine_;
  std::unordered_map<std::uint32_t, bool> memo_;
};

struct Search {
  const Instance& inst;
  std::vector<FeasibleCache> caches;
  std::vector<std::uint32_t> masks;
  int best = -1;
  std::vector<std::uint32_t> best_masks;

  explicit Search(const Instance& in) : inst(in), masks(static_cast<std::size_t>(in.machines), 0) {
    for (int i = 0; i < in.machines; ++i) caches.emplace_back(in, i);
  }

  void dfs(int k, int count) {
    const int n = inst.n();
    if (count + (n - k) <= best) return;  // cannot beat the incumbent
    if (k == n) {
      if (count > best) {
        best = count;
        best_masks = masks;
      }
      return;
    }
    const std::uint32_t bit = 1u << k;
    for (const auto& [machine, p] : inst.job(k).proc) {
      (void)p;
      auto& mask = masks[static_cast<std::size_t>(machine)];
      if (caches[static_cast<std::size_t>(machine)].feasible(mask | bit)) {
        mask |= bit;
        dfs(k + 1, count + 1);
        mask &= ~bit;
      }
    }
    dfs(k + 1, count);  // leave the job unscheduled
  }
};

}  // namespace

std::optional<OptResult> opt_throughput(const Instance& inst, const OracleCaps& caps) {
  if (inst.n() > caps.max_jobs || inst.machines > caps.max_machines) return std::nullopt;
  Search s(inst);
  s.dfs(0, 0);
  OptResult res;
  res.value = std::max(0, s.best);
  res.witness.assign(static_cast<std::size_t>(inst.machines), {});
  if (s.best >= 0) {
    for (int i = 0; i < inst.machines; ++i) {
      for (int id = 0; id < inst.n(); ++id) {
        if (s.best_masks[static_cast<std::size_t>(i)] & (1u << id)) {
          res.witness[static_cast<std::size_t>(i)].push_back(id);
        }
      }
    }
  }
  // The witness must re-validate machine-wise.
  int total = 0;
  for (int i = 0; i < inst.machines; ++i) {
    const auto& ids = res.witness[static_cast<std::size_t>(i)];
    SCHED_CHECK(edf_feasible(edf_jobs_on_machine(inst, i, ids)), "oracle witness infeasible");
    total += static_cast<int>(ids.size());
  }
  SCHED_CHECK(total == res.value, "oracle witness size mismatch");
  return res;
}

int opt_upper_bound(const Instance& inst) {
  if (inst.jobs.empty()) return 0;
  int total = 0;
  for (int i = 0; i < inst.machines; ++i) {
    std::vector<Rat> procs;
    std::optional<Rat> lo, hi;
    for (const Job& j : inst.jobs) {
      const Rat* p = j.proc_on(i);
      if (!p) continue;
      procs.push_back(*p);
      if (!lo || j.release < *lo) lo = j.release;
      if (!hi || j.deadline > *hi) hi = j.deadline;
    }
    if (procs.empty()) continue;
    std::sort(procs.begin(), procs.end());
    Rat budget = *hi - *lo;
    int count = 0;
    for (const Rat& p : procs) {
      if (p > budget) break;
      budget -= p;
      ++count;
    }
    total += count;
  }
  return std::min(total, inst.n());
}

int opt_naive_single_machine(const Instance& inst) {
  SCHED_CHECK(inst.machines == 1, "naive oracle is single-machine only");
  SCHED_CHECK(inst.n() <= 20, "naive oracle capped at 20 jobs");
  const int n = inst.n();
  int best = 0;
  for (std::uint32_t mask = 0; mask < (1u << n); ++mask) {
    const int size = __builtin_popcount(mask);
    if (size <= best) continue;
    std::vector<EdfJob> jobs;
    for (int id = 0; id < n; ++id) {
      if (mask & (1u << id)) {
        const Job& j = inst.job(id);
        const Rat* p = j.proc_on(0);
        if (!p) {
          jobs.clear();
          break;
        }
        jobs.push_back({id, j.release, j.deadline, *p});
      }
    }
    if (static_cast<int>(jobs.size()) == size && edf_feasible(jobs)) best = size;
  }
  return best;
}

}  // namespace sched
