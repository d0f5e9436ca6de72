#pragma once

#include <initializer_list>
#include <string>
#include <vector>

#include "homoeoid_tools/experiments.hpp"

namespace homoeoid::tools::detail
{
//! 2^{-first}, ..., 2^{-last}
std::vector<double> dyadic(int first, int last);

//! cfg.deltas if given, else fallback; every value must lie in (0, 1/2].
std::vector<double> deltas_or(RunConfig const& cfg, std::vector<double> fallback);

void require_n(RunConfig const& cfg, int lo, int hi);
void allow_overrides(RunConfig const& cfg, std::initializer_list<char const*> keys);
void reject_p(RunConfig const& cfg);

char const* verdict(bool ok);
double drift(std::vector<double> const& values);

ExperimentResult identities(RunConfig const& cfg);
ExperimentResult nondeg(RunConfig const& cfg);
ExperimentResult volume_bound(RunConfig const& cfg);
ExperimentResult bands(RunConfig const& cfg);
ExperimentResult clusters(RunConfig const& cfg);
ExperimentResult fibre(RunConfig const& cfg);
ExperimentResult multiplicity(RunConfig const& cfg);
ExperimentResult explore_unrefined(RunConfig const& cfg);
ExperimentResult l2_growth(RunConfig const& cfg);
ExperimentResult domination(RunConfig const& cfg);
ExperimentResult knapp_exponent(RunConfig const& cfg);
ExperimentResult divergence(RunConfig const& cfg);
ExperimentResult glpnorm(RunConfig const& cfg);

}  // namespace homoeoid::tools::detail
