#pragma once

#include "pam/chaos.hpp"

namespace pam::detail {

MomentEstimate spectral_mc_white(const ChaosMomentRequest& req);
MomentEstimate temporal_mc_colored(const ChaosMomentRequest& req);

/// One-gap chain value int exp(-u eta^2/2) |eta|^{1-2H} d eta.
double g_single(double u, double hk);

}  // namespace pam::detail
