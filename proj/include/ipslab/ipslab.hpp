#pragma once

#include "ipslab/error.hpp"
#include "ipslab/rng.hpp"
#include "ipslab/graph.hpp"
#include "ipslab/graphgen.hpp"
#include "ipslab/graph_io.hpp"
#include "ipslab/model.hpp"
#include "ipslab/obsstats.hpp"
#include "ipslab/graphical.hpp"
#include "ipslab/dynamics.hpp"
#include "ipslab/dual.hpp"
#include "ipslab/annealed.hpp"
#include "ipslab/analytics/curie_weiss.hpp"
#include "ipslab/analytics/cw_chain.hpp"
#include "ipslab/analytics/cm_bounds.hpp"
#include "ipslab/analytics/voter_profile.hpp"
#include "ipslab/analytics/birth_death.hpp"
#include "ipslab/analytics/fisher_wright.hpp"
#include "ipslab/analytics/contact.hpp"
#include "ipslab/harness/parallel.hpp"
#include "ipslab/harness/csv.hpp"
#include "ipslab/harness/config.hpp"
#include "ipslab/harness/predict.hpp"
#include "ipslab/harness/experiments.hpp"
