#pragma once

#include <cstdint>
#include <random>
#include <string>

namespace splitlab::lang {

// Random well-formed-ish expression over the full grammar (may still be ill-typed).
std::string random_expression(std::mt19937_64& rng, int depth);
// Up to two random character edits.
std::string mutate_expression(std::mt19937_64& rng, std::string s);

struct FuzzStats {
  int cases = 0;
  int accepted = 0;
  int rejected = 0;              // LangError
  int unstructured = 0;          // any other exception
  int round_trip_failures = 0;   // accepted, but print -> parse -> lower differs
  std::string first_failure;
};
// Alternates massive and massless rings; accepted scalar results are printed and re-lowered.
FuzzStats fuzz(std::uint64_t seed, int cases);

struct RoundTripStats {
  int expressions = 0;
  int identical = 0;
  std::string first_failure;
};
// Every side of every catalog identity on both rings: print, parse, lower, compare structurally.
RoundTripStats catalog_round_trip();

}  // namespace splitlab::lang
