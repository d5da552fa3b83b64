#pragma once

// Umbrella header.

#include "archlab/convolution.hpp"
#include "archlab/distribution.hpp"
#include "archlab/error.hpp"
#include "archlab/figures.hpp"
#include "archlab/format.hpp"
#include "archlab/grid.hpp"
#include "archlab/monte_carlo.hpp"
#include "archlab/parallel.hpp"
#include "archlab/quadrature.hpp"
#include "archlab/recall.hpp"
#include "archlab/rng.hpp"
#include "archlab/serial.hpp"
#include "archlab/stats.hpp"
#include "archlab/weibull_fit.hpp"
