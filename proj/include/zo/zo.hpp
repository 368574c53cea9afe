#pragma once

#include "zo/errors.hpp"
#include "zo/estimators.hpp"
#include "zo/geometry.hpp"
#include "zo/harness/analysis.hpp"
#include "zo/harness/config.hpp"
#include "zo/harness/diagnostics.hpp"
#include "zo/harness/plots.hpp"
#include "zo/harness/sweep.hpp"
#include "zo/optimizer.hpp"
#include "zo/problems.hpp"
#include "zo/rng.hpp"
#include "zo/smoothing.hpp"
#include "zo/vec.hpp"
