#pragma once

#include <cstdint>
#include <vector>

#include "uft/alignment.hpp"
#include "uft/measures.hpp"

namespace uft {

/// Counter-based splitmix64: sample i is a fixed mix of seed + i * gamma,
/// so streams are reproducible across platforms and never depend on call
/// interleaving history beyond the draw counter.
class SplitMix64 {
  public:
    explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next_u64();
    double next_uniform();              ///< (0, 1]
    double next_symmetric();            ///< [-1, 1)
    double next_normal();               ///< standard normal via Box-Muller

  private:
    std::uint64_t state_;
};

struct SynthSpec {
    int n = 32;                 ///< points per side
    int d = 8;                  ///< feature dimension
    int k = 3;                  ///< cluster count
    double outlier_frac = 0.0;  ///< in [0, 1)
    double spread = 0.1;        ///< within-cluster standard deviation
    std::uint64_t seed = 0;
};

struct ClusteredPair {
    FeatureSet X;
    FeatureSet Z;
    std::vector<int> labels_x;
    std::vector<int> labels_z;
    std::vector<bool> outlier_mask_z;  ///< true for rows drawn from the extra center
};

/// Unit-norm samples around k shared cluster centers; floor(outlier_frac * n)
/// rows of Z are replaced by samples around a (k+1)-th center absent from X
/// (label k) and flagged in the mask. Bit-identical output per seed.
ClusteredPair gen_clustered_pair(const SynthSpec& spec);

/// Pyramid fixture: level 0 is `base` reshaped to a square grid; each finer
/// level replicates pixels 2x2 and adds seeded uniform perturbation in
/// [-perturb_magnitude, perturb_magnitude).
FeaturePyramid gen_pyramid_from_image_grid(const FeatureSet& base, int levels,
                                           double perturb_magnitude = 0.0,
                                           std::uint64_t seed = 0);

}  // namespace uft
