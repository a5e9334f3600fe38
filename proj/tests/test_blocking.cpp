#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "sched/blocking.hpp"
#include "sched/generator.hpp"
#include "sched/instance.hpp"

using namespace sched;

namespace {

Job make_job(int id, Rat r, Rat d, Rat p) {
  Job j;
  j.id = id;
  j.release = std::move(r);
  j.deadline = std::move(d);
  j.proc[0] = std::move(p);
  return j;
}

const AdmissionRecord& record_of(const AdmissionLog& log, int job) {
  for (const auto& r : log) {
    if (r.job == job) return r;
  }
  REQUIRE(false);
  return log.front();
}

}  // namespace

TEST_CASE("derive_params: standard choices and the clamp") {
  const auto p = derive_params(1, CommitmentModel::upon_admission());
  CHECK(p.delta == Rat(1, 2));
  CHECK(p.gamma == Rat(1, 32));
  CHECK(p.beta == 32);
  CHECK(p.eq1_value == Rat(11, 9));  // (16/18)*(3/2 - 1/8)
  CHECK(p.eq1_value >= 1);

  // delta <= eps/2 is raised to eps/2
  const auto q = derive_params(1, CommitmentModel::delta_commitment(Rat(3, 10)));
  CHECK(q.delta == Rat(1, 2));
  CHECK(*q.delta_input == Rat(3, 10));

  // delta above eps/2 is kept
  const auto r = derive_params(1, CommitmentModel::delta_commitment(Rat(3, 4)));
  CHECK(r.delta == Rat(3, 4));
  CHECK(r.gamma == Rat(3, 64));
  CHECK(r.beta == Rat(64, 3));

  // eps > 1 runs as eps = 1
  const auto s = derive_params(3, CommitmentModel::upon_admission());
  CHECK(s.epsilon_eff == 1);
  CHECK(s.delta == Rat(1, 2));
}

TEST_CASE("derive_params rejects undefined models") {
  CHECK_THROWS_AS(derive_params(1, CommitmentModel::delta_commitment(1)),
                  std::invalid_argument);  // delta >= eps
  CHECK_THROWS_AS(derive_params(1, CommitmentModel::delta_commitment(2)),
                  std::invalid_argument);
  CHECK_THROWS_AS(derive_params(1, CommitmentModel::delta_commitment(0)),
                  std::invalid_argument);
  // delta' = 3/2 still satisfies the completion condition (value exactly 1)
  const auto p = derive_params(2, CommitmentModel::delta_commitment(Rat(3, 2)));
  CHECK(p.eq1_value == 1);
  // beyond 3/2 the standard gamma/beta cannot guarantee completion
  CHECK_THROWS_AS(derive_params(4, CommitmentModel::delta_commitment(2)),
                  std::invalid_argument);
}

TEST_CASE("root admission on an idle machine") {
  Instance inst;
  inst.machines = 1;
  inst.epsilon = 1;
  inst.jobs = {make_job(0, 0, 2, 1)};
  const auto res = run_blocking(inst, CommitmentModel::upon_admission());
  REQUIRE(res.log.size() == 1);
  const auto& r = res.log[0];
  CHECK(r.admit_time == 0);
  CHECK(*r.interval_end == Rat(3, 2));  // (1+1/2)*1
  CHECK(!r.parent);
  CHECK(r.blocking.empty());
  CHECK(res.trace.completions.at(0) == 1);
}

TEST_CASE("admission scheme: gamma threshold, blocking period, late root") {
  // Parent p=16 gets S=[0,24). A p=1/2 job exactly at the gamma threshold is
  // rejected; a p=2/5 job below it is admitted with B=[e, e + beta p).
  Instance inst;
  inst.machines = 1;
  inst.epsilon = 1;
  inst.jobs = {make_job(0, 0, 48, 16), make_job(1, 1, 26, Rat(1, 2)),
               make_job(2, 2, 40, Rat(2, 5))};
  const auto res = run_blocking(inst, CommitmentModel::upon_admission());

  const auto& root = record_of(res.log, 0);
  CHECK(root.admit_time == 0);
  CHECK(*root.interval_end == 24);

  const auto& child = record_of(res.log, 2);
  CHECK(child.admit_time == 2);
  CHECK(*child.parent == 0);
  CHECK(*child.interval_end == Rat(13, 5));  // 2 + 1.5*0.4
  REQUIRE(child.blocking.size() == 1);
  CHECK(child.blocking[0].first == Rat(13, 5));
  // e + beta*p = 2.6 + 12.8 = 15.4 < 24, so no clipping
  CHECK(child.blocking[0].second == Rat(77, 5));

  // p=1/2 fails 1/2 < gamma*16 = 1/2 at tau=1 and every later chain time; it
  // is finally admitted as a fresh root when the parent's interval ends.
  const auto& late = record_of(res.log, 1);
  CHECK(late.admit_time == 24);
  CHECK(!late.parent);
  CHECK(late.blocking.empty());

  // Theorem guarantee on this run: all three complete on time.
  for (const auto& r : res.log) {
    const Rat c = res.trace.completions.at(r.job);
    CHECK(c <= inst.job(r.job).deadline);
    CHECK(c <= r.admit_time + Rat(3, 2) * (*inst.job(r.job).proc_on(0)));
  }
}

TEST_CASE("blocking period boundary: p_ik <= 2 p_ij* blocks inclusively") {
  // Child k (p=2/5) admitted at 2 blocks [2.6, 15.4). A job with p = 1/5
  // (so p_ik == 2 p exactly) released at 3 must wait for the period end.
  Instance inst;
  inst.machines = 1;
  inst.epsilon = 1;
  inst.jobs = {make_job(0, 0, 48, 16), make_job(1, 2, 40, Rat(2, 5)),
               make_job(2, 3, 100, Rat(1, 5))};
  const auto res = run_blocking(inst, CommitmentModel::upon_admission());
  const auto& r = record_of(res.log, 2);
  CHECK(r.admit_time == Rat(77, 5));  // end of k's blocking period
  CHECK(*r.parent == 0);
  REQUIRE(r.blocking.size() == 1);
  CHECK(r.blocking[0].first == Rat(77, 5) + Rat(3, 10));
  CHECK(r.blocking[0].second == r.blocking[0].first + 32 * Rat(1, 5));
}

TEST_CASE("blocking period is clipped at the parent's interval end") {
  // Child admitted late in the parent interval: e + beta*p > e_parent.
  Instance inst;
  inst.machines = 1;
  inst.epsilon = 1;
  inst.jobs = {make_job(0, 0, 48, 16), make_job(1, 20, 60, Rat(2, 5))};
  const auto res = run_blocking(inst, CommitmentModel::upon_admission());
  const auto& r = record_of(res.log, 1);
  CHECK(r.admit_time == 20);
  CHECK(*r.interval_end == Rat(103, 5));  // 20.6
  REQUIRE(r.blocking.size() == 1);
  CHECK(r.blocking[0].second == 24);  // min(24, 20.6 + 12.8 = 33.4)
}

TEST_CASE("interval extension: child ending past the root extends it") {
  Instance inst;
  inst.machines = 1;
  inst.epsilon = 1;
  inst.jobs = {make_job(0, 0, 48, 16), make_job(1, Rat(239, 10), 30, Rat(1, 5))};
  const auto res = run_blocking(inst, CommitmentModel::upon_admission());
  const auto& root = record_of(res.log, 0);
  const auto& child = record_of(res.log, 1);
  CHECK(child.admit_time == Rat(239, 10));
  CHECK(*child.parent == 0);
  // e_j* = 23.9 + 0.3 = 24.2 > 24, so the root is extended to 24.2.
  CHECK(*child.interval_end == Rat(121, 5));
  CHECK(*root.interval_end == Rat(121, 5));
  CHECK(root.blocking.empty());   // roots never get a blocking period
  CHECK(child.blocking.empty());  // no blocking period in the special case
  // Lemma bound still holds: |S(root)| <= (1+2 delta) p.
  CHECK(*root.interval_end - root.admit_time <= Rat(2) * 16);
}

TEST_CASE("extension through a chain empties all but the largest blocking period") {
  Instance inst;
  inst.machines = 1;
  inst.epsilon = 1;
  inst.jobs = {make_job(0, 0, 48, 16),
               make_job(1, 2, 40, Rat(2, 5)),
               make_job(2, Rat(129, 50), 40, Rat(1, 250)),
               make_job(3, Rat(25859, 10000), 40, Rat(1, 10000)),
               make_job(4, Rat(2586049, 1000000), 3, Rat(1, 1000000))};
  const auto res = run_blocking(inst, CommitmentModel::upon_admission());

  const auto& j2 = record_of(res.log, 2);
  const auto& j3 = record_of(res.log, 3);
  const auto& j4 = record_of(res.log, 4);
  CHECK(*j3.parent == 2);
  CHECK(*j4.parent == 3);

  // J3's admission extended J2 to 2.58605; J4's admission extended J2 and J3
  // together to 2.5860505.
  const Rat final_end = Rat(2586049, 1000000) + Rat(3, 2) * Rat(1, 1000000);
  CHECK(*j4.interval_end == final_end);
  CHECK(*j3.interval_end == final_end);
  CHECK(*j2.interval_end == final_end);

  // Of the two extended jobs, only the largest (J2) keeps a blocking period.
  CHECK(j4.blocking.empty());
  CHECK(j3.blocking.empty());
  REQUIRE(j2.blocking.size() == 1);
  CHECK(j2.blocking[0].first == final_end);
  CHECK(j2.blocking[0].second == Rat(13, 5));  // clipped at e_parent = e_J1

  // Everything still completes on time.
  for (const auto& r : res.log) {
    CHECK(res.trace.completions.at(r.job) <= inst.job(r.job).deadline);
  }
}

TEST_CASE("a second admission splits an interrupted blocking period") {
  Instance inst;
  inst.machines = 1;
  inst.epsilon = 1;
  inst.jobs = {make_job(0, 0, 4000, 1000),
               make_job(1, 700, 4000, 20),
               make_job(2, 750, 4000, 8)};
  const auto res = run_blocking(inst, CommitmentModel::upon_admission());
  // Root S = [0, 1500). k2: S=[700,730), B=[730, 1370).
  const auto& k2 = record_of(res.log, 1);
  const auto& js = record_of(res.log, 2);
  CHECK(js.admit_time == 750);  // inside B(k2); allowed since p_k2 = 20 > 2*8
  CHECK(*js.interval_end == 762);
  REQUIRE(js.blocking.size() == 1);
  CHECK(js.blocking[0] == std::pair<Rat, Rat>(Rat(762), Rat(1018)));
  // B(k2) = [730, 750) u [750 + (1+1/2+32)*8 = 1018, min(1500, 1370+268))
  REQUIRE(k2.blocking.size() == 2);
  CHECK(k2.blocking[0] == std::pair<Rat, Rat>(Rat(730), Rat(750)));
  CHECK(k2.blocking[1] == std::pair<Rat, Rat>(Rat(1018), Rat(1500)));
}

TEST_CASE("commit_check validates a finished run and flags violations") {
  Instance inst;
  inst.machines = 1;
  inst.epsilon = 1;
  inst.jobs = {make_job(0, 0, 48, 16), make_job(1, 2, 40, Rat(2, 5))};
  const auto prm = derive_params(inst.epsilon, CommitmentModel::upon_admission());
  auto res = run_blocking(inst, CommitmentModel::upon_admission());
  CHECK(commit_check(inst, prm, CommitmentModel::upon_admission(), res.log, res.trace)
            .empty());

  // Tampered completion: past the deadline.
  auto broken = res.trace;
  broken.completions[1] = 100;
  CHECK(!commit_check(inst, prm, CommitmentModel::upon_admission(), res.log, broken)
             .empty());
}

TEST_CASE("delta-commitment boundary admission is accepted") {
  // Synthetic record admitted exactly at d - (1+delta_input)p.
  Instance inst;
  inst.machines = 1;
  inst.epsilon = 1;
  inst.jobs = {make_job(0, 0, 4, 2)};
  const auto model = CommitmentModel::delta_commitment(Rat(3, 10));
  const auto prm = derive_params(inst.epsilon, model);
  AdmissionLog log(1);
  log[0].job = 0;
  log[0].machine = 0;
  log[0].admit_time = Rat(4) - Rat(13, 10) * 2;  // = 7/5
  log[0].interval_end = log[0].admit_time + Rat(3, 2) * 2;
  log[0].commit_time = log[0].admit_time;
  ScheduleTrace trace;
  trace.admissions[0] = {0, log[0].admit_time};
  trace.completions[0] = 4;
  trace.on_time.insert(0);
  CHECK(commit_check(inst, prm, model, log, trace).empty());
  // One tick later violates the cutoff.
  log[0].admit_time += Rat(1, 1000);
  log[0].commit_time = log[0].admit_time;
  CHECK(!commit_check(inst, prm, model, log, trace).empty());
}

TEST_CASE("every admitted job completes on time across random instances") {
  int checked = 0;
  for (std::uint64_t seed = 1; seed <= 24; ++seed) {
    const Profile prof = static_cast<Profile>(seed % 4);
    const Rat eps = (seed % 3 == 0) ? Rat(1, 4) : (seed % 3 == 1 ? Rat(1, 2) : Rat(1));
    const Instance inst = generate(seed, 14, 1 + static_cast<int>(seed % 3), eps, prof);
    const auto model = (seed % 2 == 0)
                           ? CommitmentModel::upon_admission()
                           : CommitmentModel::delta_commitment(eps * Rat(3, 4));
    const auto prm = derive_params(inst.epsilon, model);
    const auto res = run_blocking(inst, model);
    CHECK(commit_check(inst, prm, model, res.log, res.trace).empty());
    checked += static_cast<int>(res.log.size());
  }
  CHECK(checked > 50);  // the suite actually admitted a fair number of jobs
}
