#pragma once

#include "msel/calibration.hpp"
#include "msel/holdout.hpp"
#include "msel/modulus.hpp"
#include "msel/parallel.hpp"
#include "msel/problems.hpp"
#include "msel/rng.hpp"
#include "msel/segmentation.hpp"
#include "msel/selection.hpp"
#include "msel/stats.hpp"
#include "msel/version.hpp"
