#pragma once

#include "cloudrank/aggregate.hpp"
#include "cloudrank/cloud.hpp"
#include "cloudrank/experiment.hpp"
#include "cloudrank/io.hpp"
#include "cloudrank/numeric.hpp"
#include "cloudrank/rng.hpp"
#include "cloudrank/simplex.hpp"
#include "cloudrank/stats.hpp"
#include "cloudrank/topsis.hpp"
#include "cloudrank/weights.hpp"
