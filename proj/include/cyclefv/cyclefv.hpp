#pragma once

#include "chebyshev.hpp"
#include "circulant.hpp"
#include "conditioned_walk.hpp"
#include "core_model.hpp"
#include "dynamics.hpp"
#include "io.hpp"
#include "linalg.hpp"
#include "particle_system.hpp"
#include "rng.hpp"
#include "stationary_covariance.hpp"
#include "verification.hpp"
