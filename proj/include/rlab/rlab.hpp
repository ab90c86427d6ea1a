#pragma once

// Umbrella header for the library. The command-line front end lives in
// rlab/cli.hpp and additionally needs CLI11.

#include "rlab/error.hpp"
#include "rlab/exchangeability.hpp"
#include "rlab/experiments.hpp"
#include "rlab/graph.hpp"
#include "rlab/graph_io.hpp"
#include "rlab/green_tree.hpp"
#include "rlab/identities.hpp"
#include "rlab/lanczos.hpp"
#include "rlab/laws.hpp"
#include "rlab/local_law.hpp"
#include "rlab/parallel.hpp"
#include "rlab/quadrature.hpp"
#include "rlab/report.hpp"
#include "rlab/resampling.hpp"
#include "rlab/rng.hpp"
#include "rlab/sampler.hpp"
#include "rlab/spectral.hpp"
#include "rlab/stats.hpp"
#include "rlab/tw1.hpp"
