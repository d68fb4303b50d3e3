#pragma once
/// @file rwos.hpp
/// @brief Umbrella header for the reflected walk-on-spheres library.

#include "rwos/analytic.hpp"
#include "rwos/conformal.hpp"
#include "rwos/domain.hpp"
#include "rwos/domain_io.hpp"
#include "rwos/errors.hpp"
#include "rwos/estimator.hpp"
#include "rwos/geometry2d.hpp"
#include "rwos/output.hpp"
#include "rwos/reflection.hpp"
#include "rwos/rng.hpp"
#include "rwos/shapes.hpp"
#include "rwos/walker.hpp"
#include "rwos/wos3d.hpp"
