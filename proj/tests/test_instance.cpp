#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "sched/generator.hpp"
#include "sched/instance.hpp"
#include "sched/io.hpp"

#include <cstdio>
#include <filesystem>

using namespace sched;

namespace {

Instance one_job(const Rat& r, const Rat& d, const Rat& p, const Rat& eps) {
  Instance inst;
  inst.machines = 1;
  inst.epsilon = eps;
  Job j;
  j.id = 0;
  j.release = r;
  j.deadline = d;
  j.proc[0] = p;
  inst.jobs.push_back(j);
  return inst;
}

}  // namespace

TEST_CASE("validate accepts the slack boundary") {
  // 2 >= (1+1)*1 holds with equality
  CHECK(validate(one_job(0, 2, 1, 1)).ok());
}

TEST_CASE("validate flags slack violations with the machine") {
  const auto rep = validate(one_job(0, Rat(19, 10), 1, 1));
  REQUIRE(!rep.ok());
  CHECK(rep.violations.front().job == 0);
  REQUIRE(rep.violations.front().machine.has_value());
  CHECK(*rep.violations.front().machine == 0);
}

TEST_CASE("validate flags jobs with no eligible machine") {
  Instance inst = one_job(0, 2, 1, 1);
  inst.jobs[0].proc.clear();
  const auto rep = validate(inst);
  REQUIRE(!rep.ok());
  CHECK(rep.violations.front().what == "no eligible machine");
}

TEST_CASE("validate flags structural problems") {
  Instance inst = one_job(0, 2, 1, 1);
  inst.jobs[0].deadline = 0;  // d <= r
  CHECK(!validate(inst).ok());

  inst = one_job(0, 2, 1, 1);
  Job dup = inst.jobs[0];
  inst.jobs.push_back(dup);  // duplicate id 0, and ids not dense
  CHECK(!validate(inst).ok());
}

TEST_CASE("availability predicate") {
  const Instance inst = one_job(0, 3, 2, 1);
  const Job& j = inst.jobs[0];
  std::set<int> admitted;
  // d - tau >= (1+delta)p: 3 >= 3
  CHECK(available(j, 0, Rat(0), Rat(1, 2), admitted));
  // 2.9 < 3
  CHECK(!available(j, 0, Rat(1, 10), Rat(1, 2), admitted));
  admitted.insert(0);
  CHECK(!available(j, 0, Rat(0), Rat(1, 2), admitted));
  admitted.clear();
  CHECK_THROWS_AS(available(j, 3, Rat(0), Rat(1, 2), admitted), std::logic_error);
}

TEST_CASE("availability never recovers once the deadline test fails") {
  const Instance inst = one_job(0, 3, 2, 1);
  const Job& j = inst.jobs[0];
  std::set<int> admitted;
  bool seen_false = false;
  for (int k = 0; k <= 40; ++k) {
    const bool now = available(j, 0, Rat(k, 10), Rat(1, 2), admitted);
    if (seen_false) CHECK(!now);
    if (!now) seen_false = true;
  }
  CHECK(seen_false);
}

TEST_CASE("generator is deterministic and always valid") {
  for (Profile prof : {Profile::Uniform, Profile::Bursty, Profile::Nested, Profile::TightSlack}) {
    const Instance a = generate(1, 12, 3, Rat(1, 4), prof);
    const Instance b = generate(1, 12, 3, Rat(1, 4), prof);
    CHECK(instance_to_json(a) == instance_to_json(b));
    CHECK(validate(a).ok());
    CHECK(a.n() == 12);
  }
  CHECK(validate(generate(1, 1, 1, 1, Profile::Uniform)).ok());
  CHECK(validate(generate(7, 20, 3, Rat(1, 4), Profile::Nested)).ok());
}

TEST_CASE("generated processing times have bounded denominators") {
  const Instance inst = generate(11, 25, 4, Rat(1, 8), Profile::Nested);
  for (const Job& j : inst.jobs) {
    for (const auto& [m, p] : j.proc) {
      (void)m;
      CHECK(denominator(p) <= 10000);
    }
  }
}

TEST_CASE("instance JSON round trip is canonical") {
  const Instance inst = generate(3, 9, 2, Rat(1, 2), Profile::Bursty);
  const std::string text = instance_to_json(inst);
  const Instance back = instance_from_json(text);
  CHECK(instance_to_json(back) == text);
}

TEST_CASE("file save and load round trip") {
  namespace fs = std::filesystem;
  const fs::path path = fs::temp_directory_path() / "sched_test_instance.json";
  const Instance inst = generate(5, 6, 2, 1, Profile::Uniform);
  save_instance(inst, path);
  const Instance back = load_instance(path);
  CHECK(instance_to_json(back) == instance_to_json(inst));
  fs::remove(path);
}

TEST_CASE("rational strings are parsed exactly") {
  const std::string text = R"({
    "machines": 1,
    "epsilon": "1",
    "jobs": [{"id": 0, "release": "0", "deadline": "4", "proc": {"0": "3/2"}}]
  })";
  const Instance inst = instance_from_json(text);
  CHECK(inst.jobs[0].proc.at(0) == Rat(3, 2));
}

TEST_CASE("load rejects bad instances with context") {
  // d <= r
  CHECK_THROWS_AS(instance_from_json(R"({"machines":1,"epsilon":"1",
    "jobs":[{"id":0,"release":"2","deadline":"1","proc":{"0":"1"}}]})"),
                  ParseError);
  // slack violation
  CHECK_THROWS_AS(instance_from_json(R"({"machines":1,"epsilon":"1",
    "jobs":[{"id":0,"release":"0","deadline":"3/2","proc":{"0":"1"}}]})"),
                  ParseError);
  // floats are not exact
  CHECK_THROWS_AS(instance_from_json(R"({"machines":1,"epsilon":"1",
    "jobs":[{"id":0,"release":"0","deadline":2.5,"proc":{"0":"1"}}]})"),
                  ParseError);
  // garbage
  CHECK_THROWS_AS(instance_from_json("not json"), ParseError);
}
