#pragma once

#include <string>
#include <vector>

#include "timeseries.hpp"

namespace tsagg {

enum class ProfileKind { solar_like, temperature_like, wind_like, household_load_like, regional_load_like };

const char* to_string(ProfileKind k);
ProfileKind parse_profile_kind(const std::string& s);
std::vector<ProfileKind> all_profile_kinds();

// One attribute named after the kind. The shapes are made-up stand-ins for
// measured data; none of the constants come from observations.
Attribute generate(ProfileKind kind, unsigned long long seed, int n_steps, double step_length_hours);

// Several kinds side by side; each kind gets its own stream derived from
// `seed`, so adding a kind leaves the others unchanged.
RawSeriesSet generate_set(const std::vector<ProfileKind>& kinds, unsigned long long seed, int n_steps,
                          double step_length_hours);

}  // namespace tsagg
