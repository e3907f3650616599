#pragma once

#include <cstdint>
#include <vector>

#include "docwm/image.hpp"
#include "docwm/watermark.hpp"

namespace docwm {

/// Per-user marks with low pairwise correlation (rejection-sampled).
struct FingerprintSet {
  std::vector<WatermarkBits> marks;
  std::uint64_t seed = 0;
  double max_abs_corr = 0.15;  // enforced pairwise |r| bound
};

FingerprintSet generate_fingerprints(int k, int side, std::uint64_t seed,
                                     double max_abs_corr = 0.15);

/// Per-pixel arithmetic mean of equally sized pages, rounded.
PageImage collude_average(const std::vector<PageImage>& copies);

/// Document-wise collusion: element i of each inner vector is page i.
std::vector<PageImage> collude_average_docs(const std::vector<std::vector<PageImage>>& docs);

struct CollusionDetection {
  std::vector<int> flagged;          // user indices above threshold, ascending
  std::vector<double> per_user_nc;   // NC_overall per user
  double threshold = 0.25;
};

/// Extract with every user's side info and flag users whose NC_overall
/// against their own fingerprint exceeds the threshold.
CollusionDetection detect_colluders(const std::vector<PageImage>& colluded_pages,
                                    const std::vector<SideInfo>& sides,
                                    const FingerprintSet& fps, double threshold = 0.25);

/// One fingerprinted copy of the document per user.
struct FingerprintedCopies {
  FingerprintSet fps;
  std::vector<EmbedResult> copies;  // index = user
};

FingerprintedCopies embed_fingerprints(const std::vector<PageImage>& original,
                                       const PipelineConfig& cfg, int users,
                                       std::uint64_t seed);

}  // namespace docwm
