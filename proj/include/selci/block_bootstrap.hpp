#pragma once

#include "selci/rng.hpp"
#include "selci/types.hpp"

namespace selci {

/// Block sizes of the two-level bootstrap for a series of length n.
struct BlockPlan {
  Index n = 0;
  Index l = 0;        ///< first-level block length, floor(n^{1/3})
  Index n_prime = 0;  ///< number of overlapping first-level blocks, n + l - 1
  Index a = 0;        ///< first-level blocks drawn, floor(n / l)
  Index k = 0;        ///< second-level block length, floor(l / 2)
  Index l_prime = 0;  ///< sub-blocks per first-level segment, l - k + 1
  Index c = 0;        ///< second-level blocks drawn, floor(n / k)
};

/// Largest integer r with r^3 <= n (exact, no floating-point rounding).
[[nodiscard]] Index integer_cbrt(Index n);

/// Throws InvalidConfig for n < 8, where l would be 1 and k would be 0.
[[nodiscard]] BlockPlan make_block_plan(Index n);

struct BootstrapDiagnostics {
  bool iid_fallback = false;
  Index appended_blocks = 0;  ///< extra sub-blocks drawn because c k < n
};

/// Double block bootstrap of a dependent series. First level: a overlapping
/// blocks of length l drawn with replacement (indices past the end wrap to the
/// start) and concatenated. Second level: c sub-blocks of length k drawn with
/// replacement from all overlapping sub-blocks inside the first-level segments.
/// The result is cut, or extended by one more sub-block and cut, to length n.
/// Series shorter than 8 are resampled iid with replacement.
[[nodiscard]] Vector double_block_bootstrap(const Vector& eps, Rng& rng,
                                            BootstrapDiagnostics* diag = nullptr);

}  // namespace selci
