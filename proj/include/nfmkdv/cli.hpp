#pragma once

// Command-line front end: argument parsing, run manifests and result files.
//
// Exit codes: 0 success, 2 invalid input (bad flag, value or file),
// 3 numerical failure (non-finite values, non-convergence, failed identity).

#include <string>
#include <vector>

#include "nfmkdv/estimate_lab.hpp"
#include "nfmkdv/io.hpp"

namespace nfmkdv {

inline constexpr const char* kVersion = "0.1.0";

int dispatch(int argc, const char* const* argv);
// argv[0] excluded.
int dispatch(const std::vector<std::string>& args);

// Flat JSON forms of the lab specs, field names as in the structs. Missing
// fields keep defaults, unknown fields are rejected.
Json lemma_spec_to_json(const LemmaCheckSpec& spec);
LemmaCheckSpec lemma_spec_from_json(const Json& j);
Json multiplier_spec_to_json(const MultiplierSpec& spec);
MultiplierSpec multiplier_spec_from_json(const Json& j);

}  // namespace nfmkdv
