#include "sched/verify.hpp"

#include "sched/check.hpp"

#include <algorithm>
#include <functional>
#include <set>
#include <sstream>

namespace sched {

std::string policy_name(PolicyKind k) {
  return k == PolicyKind::Blocking ? "blocking" : "region";
}

VerifyParams VerifyParams::blocking(const BlockingParams& p) {
  return {PolicyKind::Blocking, p.epsilon_eff, p.delta, p.gamma, p.beta};
}

VerifyParams VerifyParams::region(const RegionParams& p) {
  return {PolicyKind::Region, p.epsilon_eff, p.avail_delta, Rat(0), Rat(0)};
}

std::optional<Rat> MachineTimeline::value_at(const Rat& tau) const {
  const auto idx = static_cast<std::size_t>(
      std::upper_bound(breakpoints.begin(), breakpoints.end(), tau) - breakpoints.begin());
  return values.at(idx);
}

namespace {

std::string frac_or_inf(const std::optional<Rat>& v) { return v ? to_frac(*v) : "inf"; }

MachineTimeline build_timeline(std::vector<Rat> candidates,
                               const std::function<std::optional<Rat>(const Rat&)>& eval) {
  std::sort(candidates.begin(), candidates.end());
  candidates.erase(std::unique(candidates.begin(), candidates.end()), candidates.end());
  MachineTimeline tl;
  tl.values.push_back(std::nullopt);  // (-inf, first candidate)
  for (const Rat& c : candidates) {
    tl.breakpoints.push_back(c);
    tl.values.push_back(eval(c));
  }
  // Coalesce adjacent equal segments into maximal intervals.
  MachineTimeline out;
  out.values.push_back(tl.values.front());
  for (std::size_t k = 0; k < tl.breakpoints.size(); ++k) {
    if (tl.values[k + 1] == out.values.back()) continue;
    out.breakpoints.push_back(tl.breakpoints[k]);
    out.values.push_back(tl.values[k + 1]);
  }
  return out;
}

struct LogView {
  std::vector<const AdmissionRecord*> by_machine;  // filtered records
};

std::vector<const AdmissionRecord*> records_on(const AdmissionLog& log, int machine) {
  std::vector<const AdmissionRecord*> out;
  for (const auto& r : log) {
    if (r.machine == machine) out.push_back(&r);
  }
  return out;
}

}  // namespace

ThresholdTimeline extract_threshold(const Instance& inst, const AdmissionLog& log,
                                    const ScheduleTrace& trace, const VerifyParams& vp) {
  ThresholdTimeline tl;
  for (int i = 0; i < inst.machines; ++i) {
    if (vp.kind == PolicyKind::Blocking) {
      const auto recs = records_on(log, i);
      std::vector<Rat> cand;
      for (const auto* r : recs) {
        SCHED_CHECK(r->interval_end.has_value(), "blocking record without interval end");
        cand.push_back(r->admit_time);
        cand.push_back(*r->interval_end);
        for (const auto& [s, f] : r->blocking) {
          cand.push_back(s);
          cand.push_back(f);
        }
      }
      auto eval = [&recs, &inst, &vp, i](const Rat& tau) -> std::optional<Rat> {
        std::optional<Rat> block_val;
        for (const auto* r : recs) {
          if (blocking_contains(r->blocking, tau)) {
            SCHED_CHECK(!block_val, "overlapping blocking periods at " + to_frac(tau));
            block_val = *inst.job(r->job).proc_on(i) / 2;
          }
        }
        if (block_val) return block_val;
        std::optional<Rat> chain_min;
        for (const auto* r : recs) {
          if (r->admit_time <= tau && tau < *r->interval_end) {
            const Rat& p = *inst.job(r->job).proc_on(i);
            if (!chain_min || p < *chain_min) chain_min = p;
          }
        }
        if (chain_min) return vp.gamma * (*chain_min);
        return std::nullopt;
      };
      tl.machines.push_back(build_timeline(std::move(cand), eval));
    } else {
      std::vector<Segment> segs;
      for (const Segment& s : trace.segments) {
        if (s.machine == i) segs.push_back(s);
      }
      std::sort(segs.begin(), segs.end(),
                [](const Segment& a, const Segment& b) { return a.start < b.start; });
      std::vector<Rat> cand;
      for (const Segment& s : segs) {
        cand.push_back(s.start);
        cand.push_back(s.end);
      }
      auto eval = [&segs, &inst, &vp, i](const Rat& tau) -> std::optional<Rat> {
        for (const Segment& s : segs) {
          if (s.start <= tau && tau < s.end) {
            return vp.epsilon_eff / 4 * (*inst.job(s.job).proc_on(i));
          }
        }
        return std::nullopt;
      };
      tl.machines.push_back(build_timeline(std::move(cand), eval));
    }
  }
  return tl;
}

CheckResult check_p1_p2(const Instance& inst, const AdmissionLog& log,
                        const ThresholdTimeline& tl, const VerifyParams& vp) {
  CheckResult res;
  const Rat one_plus_d = Rat(1) + vp.avail_delta;

  std::map<int, const AdmissionRecord*> admitted;
  for (const auto& r : log) {
    if (!admitted.emplace(r.job, &r).second) {
      res.fail("P1: job " + std::to_string(r.job) + " admitted twice");
      continue;
    }
    const Job& j = inst.job(r.job);
    const Rat* p = j.proc_on(r.machine);
    if (p == nullptr) {
      res.fail("P1: job " + std::to_string(r.job) + " admitted to non-eligible machine");
      continue;
    }
    if (j.release > r.admit_time) {
      res.fail("P1: job " + std::to_string(r.job) + " admitted before release");
    }
    if (j.deadline - r.admit_time < one_plus_d * (*p)) {
      res.fail("P1: job " + std::to_string(r.job) + " admitted with too little slack at " +
               to_frac(r.admit_time));
    }
  }

  for (int i = 0; i < inst.machines; ++i) {
    const MachineTimeline& mt = tl.machines.at(static_cast<std::size_t>(i));
    std::vector<Rat> grid = mt.breakpoints;
    for (const Job& j : inst.jobs) {
      if (j.eligible(i)) grid.push_back(j.release);
    }
    std::sort(grid.begin(), grid.end());
    grid.erase(std::unique(grid.begin(), grid.end()), grid.end());
    for (const Rat& tau : grid) {
      const std::optional<Rat> u = mt.value_at(tau);
      for (const Job& j : inst.jobs) {
        const Rat* p = j.proc_on(i);
        if (p == nullptr) continue;
        if (j.release > tau) continue;
        auto it = admitted.find(j.id);
        if (it != admitted.end() && it->second->admit_time <= tau) continue;
        if (j.deadline - tau < one_plus_d * (*p)) continue;
        // j is available for machine i at tau and was not admitted there.
        if (!u || *p < *u) {
          res.fail("P2: job " + std::to_string(j.id) + " available on machine " +
                   std::to_string(i) + " at " + to_frac(tau) + " with p=" + to_frac(*p) +
                   " below threshold " + frac_or_inf(u));
        }
      }
    }
  }
  return res;
}

CheckResult check_volume_lemma(const Instance& inst, const AdmissionLog& log,
                               const ThresholdTimeline& tl, const VerifyParams& vp,
                               const OptResult& witness) {
  CheckResult res;
  std::set<int> admitted;
  for (const auto& r : log) admitted.insert(r.job);
  const Rat coef = vp.epsilon_eff / (vp.epsilon_eff - vp.avail_delta);

  for (int i = 0; i < inst.machines; ++i) {
    const auto& wit = witness.witness.at(static_cast<std::size_t>(i));
    if (wit.empty()) continue;
    const auto comps = edf_completions(edf_jobs_on_machine(inst, i, wit));
    std::vector<int> xs;
    for (int id : wit) {
      if (!admitted.count(id)) xs.push_back(id);
    }
    std::sort(xs.begin(), xs.end(), [&comps](int a, int b) {
      return comps.at(a) != comps.at(b) ? comps.at(a) < comps.at(b) : a < b;
    });
    const MachineTimeline& mt = tl.machines.at(static_cast<std::size_t>(i));

    for (int x : xs) {
      const Job& jx = inst.job(x);
      const Rat& px = *jx.proc_on(i);
      // Prefixes of the completion order among witness-not-admitted jobs
      // finishing no later than x.
      std::vector<int> pool;
      for (int y : xs) {
        if (y != x && comps.at(y) <= comps.at(x)) pool.push_back(y);
      }
      for (std::size_t k = 0; k <= pool.size(); ++k) {
        Rat sum_p = 0;
        Rat min_rel = jx.release;
        for (std::size_t t = 0; t < k; ++t) {
          const Job& jy = inst.job(pool[t]);
          sum_p += *jy.proc_on(i);
          min_rel = std::min(min_rel, jy.release);
        }
        std::vector<Rat> t1s;
        t1s.push_back(min_rel);
        for (const Rat& bp : mt.breakpoints) {
          if (bp <= min_rel) t1s.push_back(bp);
        }
        for (const Rat& t1 : t1s) {
          std::vector<Rat> t2s;
          if (t1 >= jx.release) t2s.push_back(t1);
          for (const Rat& bp : mt.breakpoints) {
            if (bp >= t1 && bp >= jx.release) t2s.push_back(bp);
          }
          std::sort(t2s.begin(), t2s.end());
          for (const Rat& t2 : t2s) {
            if (coef * (t2 - t1) > sum_p) break;  // hypothesis (P) fails from here on
            const std::optional<Rat> u = mt.value_at(t2);
            if (!u || px < *u) {
              std::ostringstream os;
              os << "volume lemma: x=" << x << " machine " << i << " p=" << to_frac(px)
                 << " |Y|=" << k << " theta1=" << to_frac(t1) << " theta2=" << to_frac(t2)
                 << " u=" << frac_or_inf(u);
              res.fail(os.str());
              return res;
            }
          }
        }
      }
    }
  }
  return res;
}

BoundReport check_bounds(const Instance& inst, const VerifyParams& vp,
                         const AdmissionLog& log, const ScheduleTrace& trace, int opt) {
  (void)inst;
  BoundReport rep;
  rep.kind = vp.kind;
  rep.admitted = static_cast<int>(log.size());
  rep.on_time = trace.on_time_count();
  rep.opt = opt;
  if (vp.kind == PolicyKind::Blocking) {
    const Rat coef = vp.epsilon_eff / (vp.epsilon_eff - vp.avail_delta);
    const Rat alpha = coef * (2 * vp.beta + (Rat(1) + 2 * vp.avail_delta) / vp.gamma);
    rep.factor = alpha + 5;
    rep.completion_ok = rep.on_time == rep.admitted;
  } else {
    rep.factor = Rat(8) / vp.epsilon_eff + 4;
    rep.completion_ok = 2 * rep.on_time >= rep.admitted;
  }
  rep.bound = rep.factor * rep.admitted;
  rep.opt_within_bound = Rat(opt) <= rep.bound;
  if (rep.on_time > 0) rep.ratio = Rat(opt) / rep.on_time;
  return rep;
}

namespace {

// Sorted list of all S and B intervals of the given records, for sibling
// disjointness checks.
std::vector<std::pair<Rat, Rat>> family_intervals(const Instance& inst,
                                                  const std::vector<const AdmissionRecord*>& recs) {
  (void)inst;
  std::vector<std::pair<Rat, Rat>> spans;
  for (const auto* r : recs) {
    spans.push_back({r->admit_time, *r->interval_end});
    for (const auto& piece : r->blocking) spans.push_back(piece);
  }
  std::sort(spans.begin(), spans.end());
  return spans;
}

}  // namespace

CheckResult check_interval_structure(const Instance& inst, const BlockingParams& prm,
                                     const AdmissionLog& log) {
  CheckResult res;
  std::map<int, const AdmissionRecord*> by_job;
  for (const auto& r : log) by_job[r.job] = &r;

  std::map<int, std::vector<const AdmissionRecord*>> children;  // parent -> records
  for (const auto& r : log) {
    const std::string tag = "record " + std::to_string(r.job) + ": ";
    if (!r.interval_end) {
      res.fail(tag + "missing interval end");
      continue;
    }
    const Job& j = inst.job(r.job);
    const Rat* p = j.proc_on(r.machine);
    if (!p) {
      res.fail(tag + "not eligible on its machine");
      continue;
    }
    const Rat span = *r.interval_end - r.admit_time;
    if (span < (Rat(1) + prm.delta) * (*p)) {
      res.fail(tag + "interval shorter than (1+delta')p");
    }
    if (span > (Rat(1) + 2 * prm.delta) * (*p)) {
      res.fail(tag + "interval longer than (1+2delta')p");
    }
    if (j.release > r.admit_time) res.fail(tag + "admitted before release");
    if (r.admit_time > j.deadline - (Rat(1) + prm.delta) * (*p)) {
      res.fail(tag + "admitted past the commitment-feasible point");
    }
    if (!r.commit_time || *r.commit_time != r.admit_time) {
      res.fail(tag + "commit time must equal admission time");
    }

    Rat total = 0;
    Rat prev_end = *r.interval_end;
    bool first = true;
    for (const auto& [s, f] : r.blocking) {
      if (f <= s) {
        res.fail(tag + "empty or inverted blocking piece");
        continue;
      }
      if (s < *r.interval_end) res.fail(tag + "blocking piece starts inside S(j)");
      if (!first && s < prev_end) res.fail(tag + "blocking pieces overlap or unordered");
      prev_end = f;
      first = false;
      total += f - s;
    }
    if (total > prm.beta * (*p)) res.fail(tag + "blocking size exceeds beta*p");

    if (r.parent) {
      auto pit = by_job.find(*r.parent);
      if (pit == by_job.end()) {
        res.fail(tag + "parent not in log");
        continue;
      }
      const AdmissionRecord& par = *pit->second;
      children[*r.parent].push_back(&r);
      if (par.machine != r.machine) res.fail(tag + "parent on different machine");
      const Rat* pp = inst.job(par.job).proc_on(par.machine);
      if (pp && !(*p < prm.gamma * (*pp))) {
        res.fail(tag + "child size rule violated: p >= gamma * p_parent");
      }
      // Containment of S(j) and B(j) in the parent's final interval.
      if (r.admit_time < par.admit_time || *r.interval_end > *par.interval_end) {
        res.fail(tag + "scheduling interval not contained in parent's");
      }
      for (const auto& [s, f] : r.blocking) {
        if (s < par.admit_time || f > *par.interval_end) {
          res.fail(tag + "blocking piece not contained in parent's interval");
        }
      }
    } else if (!r.blocking.empty()) {
      res.fail(tag + "root with non-empty blocking period");
    }
  }

  for (const auto& [parent, recs] : children) {
    const auto spans = family_intervals(inst, recs);
    for (std::size_t k = 1; k < spans.size(); ++k) {
      if (spans[k].first < spans[k - 1].second) {
        res.fail("children of " + std::to_string(parent) +
                 " have overlapping S/B intervals near " + to_frac(spans[k].first));
      }
    }
  }
  return res;
}

CheckResult check_log_consistency(const Instance& inst, const BlockingParams& prm,
                                  const AdmissionLog& log) {
  CheckResult res;
  IntervalState st(inst.machines);
  try {
    for (const auto& r : log) {
      apply_admission(st, inst, prm, r.job, r.machine, r.parent, r.admit_time, nullptr);
    }
  } catch (const std::exception& e) {
    res.fail(std::string("log replay failed: ") + e.what());
    return res;
  }
  for (const auto& r : log) {
    auto it = st.records.find(r.job);
    if (it == st.records.end()) {
      res.fail("replay lost record " + std::to_string(r.job));
      continue;
    }
    const IntervalRecord& g = it->second;
    if (!r.interval_end || *r.interval_end != g.end) {
      res.fail("record " + std::to_string(r.job) + ": interval end " +
               (r.interval_end ? to_frac(*r.interval_end) : std::string("none")) +
               " differs from derived " + to_frac(g.end));
    }
    if (r.blocking != g.blocking) {
      res.fail("record " + std::to_string(r.job) + ": blocking pieces differ from derivation");
    }
  }
  return res;
}

CheckResult check_trace(const Instance& inst, const ScheduleTrace& trace) {
  CheckResult res;
  std::map<int, std::vector<const Segment*>> per_machine;
  std::map<int, Rat> work;
  for (const Segment& s : trace.segments) {
    if (s.end <= s.start) res.fail("segment with non-positive length");
    per_machine[s.machine].push_back(&s);
    auto it = trace.admissions.find(s.job);
    if (it == trace.admissions.end()) {
      res.fail("segment of non-admitted job " + std::to_string(s.job));
    } else if (it->second.first != s.machine) {
      res.fail("job " + std::to_string(s.job) + " ran on a machine it was not admitted to");
    }
    work[s.job] += s.end - s.start;
  }
  for (auto& [machine, segs] : per_machine) {
    for (std::size_t k = 1; k < segs.size(); ++k) {
      if (segs[k]->start < segs[k - 1]->end) {
        res.fail("overlapping segments on machine " + std::to_string(machine));
      }
    }
  }
  for (const auto& [job, where] : trace.admissions) {
    auto done = trace.completions.find(job);
    if (done == trace.completions.end()) {
      res.fail("admitted job " + std::to_string(job) + " has no completion");
      continue;
    }
    const Rat& p = *inst.job(job).proc_on(where.first);
    if (work[job] != p) {
      res.fail("job " + std::to_string(job) + " executed " + to_frac(work[job]) +
               " != p = " + to_frac(p));
    }
    Rat last = 0;
    bool found = false;
    for (const Segment& s : trace.segments) {
      if (s.job == job && (!found || s.end > last)) {
        last = s.end;
        found = true;
      }
    }
    if (!found || last != done->second) {
      res.fail("completion of job " + std::to_string(job) + " not at last segment end");
    }
    const bool on_time = done->second <= inst.job(job).deadline;
    if (on_time != (trace.on_time.count(job) != 0)) {
      res.fail("on-time flag wrong for job " + std::to_string(job));
    }
  }
  return res;
}

CheckResult check_log_trace_agreement(const AdmissionLog& log, const ScheduleTrace& trace) {
  CheckResult res;
  if (log.size() != trace.admissions.size()) {
    res.fail("log has " + std::to_string(log.size()) + " records but trace admitted " +
             std::to_string(trace.admissions.size()));
  }
  for (const auto& r : log) {
    auto it = trace.admissions.find(r.job);
    if (it == trace.admissions.end()) {
      res.fail("job " + std::to_string(r.job) + " in log but not in trace");
      continue;
    }
    if (it->second.first != r.machine || it->second.second != r.admit_time) {
      res.fail("job " + std::to_string(r.job) +
               ": log and trace disagree on admission machine or time");
    }
  }
  return res;
}

CheckResult check_segment_counts(const Instance& inst, const AdmissionLog& log,
                                 const ThresholdTimeline& tl, const VerifyParams& vp) {
  CheckResult res;
  for (int i = 0; i < inst.machines; ++i) {
    std::size_t ji = 0;
    for (const auto& r : log) {
      if (r.machine == i) ++ji;
    }
    const std::size_t limit =
        (vp.kind == PolicyKind::Blocking ? 3 * ji + 1 : 2 * ji + 1);
    const std::size_t got = tl.machines.at(static_cast<std::size_t>(i)).segment_count();
    if (got > limit) {
      res.fail("machine " + std::to_string(i) + ": " + std::to_string(got) +
               " threshold segments exceed limit " + std::to_string(limit) + " (|J_i|=" +
               std::to_string(ji) + ")");
    }
  }
  return res;
}

}  // namespace sched
