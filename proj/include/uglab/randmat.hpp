// Reproducible sampling of Ginibre matrices (E|g_ij|^2 = 1/d) and Haar
// unitaries (QR of a Ginibre draw with the R-diagonal phase correction).
#pragma once

#include "uglab/matcore.hpp"
#include "uglab/mc.hpp"
#include "uglab/rng.hpp"

namespace uglab::randmat {

matcore::CMatrix gaussian_matrix(int d, SeededRng& rng);

matcore::UnitaryMatrix haar_unitary(int d, SeededRng& rng);

// Monte Carlo estimate of E||g_d|| over n_samples independent draws.
McEstimate op_norm_estimate(int d, long n_samples, const SeededRng& base, int threads = 1);

}  // namespace uglab::randmat
