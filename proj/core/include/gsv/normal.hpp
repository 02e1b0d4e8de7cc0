#pragma once

namespace gsv {

/// Standard normal density.
double normal_pdf(double z);

/// Standard normal CDF, N(z).
double normal_cdf(double z);

/// Complementary CDF, 1 - N(z), evaluated without cancellation for large z.
double normal_sf(double z);

/// log(1 - N(z)); finite far into the tail where normal_sf underflows.
double log_normal_sf(double z);

}  // namespace gsv
