#pragma once

// Seeded property checks shared by the property suite and the acceptance
// binary. Each returns an empty string on success, otherwise a description
// of the first counterexample.

#include <cstdint>
#include <string>

namespace oracle {

std::string check_axis_grid_coverage(unsigned seed, int cases);
std::string check_model_matches_walk(unsigned seed, int cases);
std::string check_model_matches_trace(unsigned seed, int cases);
std::string check_mapping_injective(unsigned seed, int cases);
std::string check_search_monotone_in_buffers(unsigned seed, int cases);
std::string check_search_monotone_in_steps(unsigned seed, int cases);
std::string check_simulator_deterministic(unsigned seed, int cases);
std::string check_halo_and_spill_bounds(unsigned seed, int cases);
std::string check_priority_permutation(unsigned seed, int cases);

}  // namespace oracle
