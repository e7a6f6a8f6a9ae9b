#pragma once

// Umbrella header for the library. io.hpp (JSON specs and reports) is
// separate because it pulls in nlohmann/json.

#include "prodgeom/autodiff.hpp"
#include "prodgeom/classify.hpp"
#include "prodgeom/elasticity.hpp"
#include "prodgeom/errors.hpp"
#include "prodgeom/geometry.hpp"
#include "prodgeom/prodfun.hpp"
#include "prodgeom/sampling.hpp"
#include "prodgeom/scalar_fn.hpp"
#include "prodgeom/scan.hpp"
