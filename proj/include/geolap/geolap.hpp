#pragma once

#include "geolap/angle.hpp"
#include "geolap/assumption_audit.hpp"
#include "geolap/bias_expansion.hpp"
#include "geolap/graph_laplacian.hpp"
#include "geolap/induced_metric.hpp"
#include "geolap/limiting_operator.hpp"
#include "geolap/metric_oracles.hpp"
#include "geolap/point_set.hpp"
#include "geolap/raster.hpp"
#include "geolap/spectral.hpp"
