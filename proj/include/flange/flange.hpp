// Umbrella header: duality, hulls, covers, resolutions, and I/O for
// finitely determined multiparameter persistence modules.
#pragma once

#include "flange/degree.hpp"
#include "flange/error.hpp"
#include "flange/field.hpp"
#include "flange/functors.hpp"
#include "flange/grid_io.hpp"
#include "flange/grid_module.hpp"
#include "flange/grid_morphism.hpp"
#include "flange/matrix.hpp"
#include "flange/oracle.hpp"
#include "flange/presentation.hpp"
#include "flange/resolve.hpp"
