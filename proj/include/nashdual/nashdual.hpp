#pragma once

// Umbrella header: radial quadrature and Newton potentials, the radial
// eigenvalue problems on the unit ball, the infimal-convolution functional of
// the dual Nash inequality, its extremal profiles and sharp constants, and
// the verification batteries.

#include "nashdual/errors.hpp"
#include "nashdual/radial_grid.hpp"
#include "nashdual/radial_profile.hpp"
#include "nashdual/potential.hpp"
#include "nashdual/roots.hpp"
#include "nashdual/bessel.hpp"
#include "nashdual/eigen.hpp"
#include "nashdual/infconv.hpp"
#include "nashdual/sharp.hpp"
#include "nashdual/families.hpp"
#include "nashdual/verify.hpp"
#include "nashdual/serialize.hpp"
