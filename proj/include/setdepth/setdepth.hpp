#pragma once

// Statistical depths, DD-plots and two-sample tests for planar random sets
// represented as binary rasters.

#include "setdepth/raster.hpp"
#include "setdepth/distance.hpp"
#include "setdepth/minkowski.hpp"
#include "setdepth/components.hpp"
#include "setdepth/sample.hpp"
#include "setdepth/rng.hpp"
#include "setdepth/parallel.hpp"
#include "setdepth/io.hpp"
#include "setdepth/simulate.hpp"
#include "setdepth/depth.hpp"
#include "setdepth/decompose.hpp"
#include "setdepth/ddplot.hpp"
#include "setdepth/regression.hpp"
#include "setdepth/envelope.hpp"
