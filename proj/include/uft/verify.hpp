#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "uft/measures.hpp"
#include "uft/synth.hpp"

namespace uft {

struct VerifyOptions {
    int n = 6;            ///< assignment instance size (<= 8)
    int trials = 100;     ///< assignment agreement trials
    std::uint64_t seed = 42;
    int threads = 1;
    bool inject_fault = false;  ///< test hook: corrupt solver output
};

struct CheckResult {
    std::string name;
    bool passed = false;
    std::string detail;
};

/// Random cost matrix with entries in [0, 2), drawn from the given stream.
CostMatrix random_cost(SplitMix64& rng, int nx, int nz);

/// Seeded oracle cross-check suite: assignment agreement, UOT vs
/// projected-gradient objectives, analytic-vs-finite-difference gradients,
/// and dual monotonicity.
std::vector<CheckResult> run_verification(const VerifyOptions& opts);

}  // namespace uft
