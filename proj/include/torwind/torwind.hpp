#pragma once

// Umbrella header: winding indices of plane vector fields along closed
// curves, the explicit annulus uniformization of constant torus fields,
// and constructive first integrals.

#include "torwind/errors.hpp"
#include "torwind/expr.hpp"
#include "torwind/field.hpp"
#include "torwind/first_integral.hpp"
#include "torwind/geometry.hpp"
#include "torwind/index.hpp"
#include "torwind/jsonout.hpp"
#include "torwind/registry.hpp"
#include "torwind/svg.hpp"
#include "torwind/uniformization.hpp"
