#pragma once

#include "gil/analytic.hpp"
#include "gil/errors.hpp"
#include "gil/fit.hpp"
#include "gil/frames.hpp"
#include "gil/grid.hpp"
#include "gil/instability.hpp"
#include "gil/io.hpp"
#include "gil/numeric.hpp"
#include "gil/parallel.hpp"
#include "gil/signals.hpp"
#include "gil/version.hpp"
