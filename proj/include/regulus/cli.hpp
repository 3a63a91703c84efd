#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "regulus/io.hpp"

namespace regulus::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitFailed = 1;  // ran, but a hard postcondition did not hold
inline constexpr int kExitError = 2;   // bad input or configuration

/// Each point of each V_e lands in E_e independently with probability `density`.
Instance random_instance(const HypergraphSystem& sys, double density, std::uint64_t seed);

/// Each residue mod N lands in S independently with probability `density`.
std::vector<Index> random_residues(Index N, double density, std::uint64_t seed);

/// "exact" or "heuristic:N"; the heuristic needs a seed.
Oracle parse_oracle(const std::string& text, const std::uint64_t* seed);

/// Runs one command. Output with path "-" goes to `out`, error records to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace regulus::cli
