#pragma once

#include <iosfwd>
#include <map>
#include <string>

#include "roofwire/reconstruction.hpp"
#include "roofwire/synthbench.hpp"

namespace roofwire {

// Flat "key = value" text; '#' starts a comment. Duplicate keys keep the last value.
std::map<std::string, std::string> read_key_values(std::istream& in);

// Applies recognised keys (ReconstructionParams and PerturbSpec field names) and
// throws ParseError on unknown keys or malformed values. `perturb` may be null,
// in which case perturbation keys are rejected.
void apply_config(const std::map<std::string, std::string>& values, ReconstructionParams& params,
                  PerturbSpec* perturb = nullptr);

void load_config_file(const std::string& path, ReconstructionParams& params, PerturbSpec* perturb = nullptr);

void write_params(const ReconstructionParams& params, std::ostream& out);

}  // namespace roofwire
