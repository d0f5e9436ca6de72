#pragma once

// Pass thresholds shared by the CLI and the acceptance binary.
namespace homoeoid::tools::limits
{
inline constexpr double identity_residual = 1e-9;
inline constexpr double cauchy_binet_residual = 1e-10;
inline constexpr double det_homogeneity = 1e-6;
inline constexpr double det_n2 = 1e-6;
inline constexpr double det_floor = 0.01;
inline constexpr double nondeg_drift = 2;
inline constexpr double volume_drift = 4;
inline constexpr double band_constant = 8;
inline constexpr double band_sigmas = 3;
inline constexpr int cluster_count = 16;
inline constexpr double cluster_constant = 8;
inline constexpr double cluster_drift = 2;
inline constexpr double fibre_drift = 4;
inline constexpr double fibre_calibration = 1e-6;
inline constexpr double multiplicity_drift = 4;
inline constexpr double multiplicity_sigmas = 3;
inline constexpr double knapp_tolerance_p2 = 0.05;
inline constexpr double knapp_tolerance = 0.1;
inline constexpr double divergence_slope = 0.25;
inline constexpr double divergence_tolerance = 0.05;
inline constexpr double glp_relative = 0.01;
inline constexpr double growth_slope = 0.15;
}  // namespace homoeoid::tools::limits
