#pragma once

#include "sched/instance.hpp"

#include <cstdint>
#include <string>

namespace sched {

enum class Profile { Uniform, Bursty, Nested, TightSlack };

std::string profile_name(Profile p);

// Accepts "uniform", "bursty", "nested", "tight-slack"; throws
// std::invalid_argument otherwise.
Profile parse_profile(const std::string& s);

// Deterministic instance generator. The output always passes validate().
// Processing times are multiples of 1/960 so that denominators stay small
// and the exhaustive oracle remains fast.
Instance generate(std::uint64_t seed, int n, int m, const Rat& epsilon, Profile profile);

}  // namespace sched
