#pragma once

#include <string>

#include "gwldp/kernel.hpp"
#include "gwldp/sampler.hpp"

namespace gwldp {

/**
 * A kernel specification document: alphabet, root law and offspring kernel,
 * ingested from JSON.
 *
 * {
 *   "alphabet": ["a","b"],
 *   "root_law": {"a": 0.5, "b": 0.5},
 *   "kernel": {
 *     "form": "factored",
 *     "offspring_law": {"kind": "geometric", "q": 0.5},
 *     "transition": [[0.75, 0.25], [0.25, 0.75]]
 *   }
 * }
 *
 * or, for the explicit form,
 *
 *   "kernel": {
 *     "form": "explicit",
 *     "laws": {
 *       "a": [{"children": [], "p": 0.5}, {"children": ["a","a"], "p": 0.5}],
 *       "b": [{"children": [], "p": 1.0}]
 *     }
 *   }
 *
 * offspring_law kinds: "table" (field "p": array of probabilities),
 * "geometric" (field "q"), "poisson" (field "lambda").
 */
struct KernelSpec {
  Alphabet alphabet;
  RootLaw root_law;
  OffspringKernel kernel;
};

// Both throw std::invalid_argument with a message naming the offending field.
KernelSpec parse_kernel_spec(const std::string& json_text);
KernelSpec load_kernel_spec(const std::string& path);

// Parses "geometric:0.5", "poisson:1.0" or "table:0.5,0,0.5" into a count law.
CountLaw parse_count_law(const std::string& spec);

}  // namespace gwldp
