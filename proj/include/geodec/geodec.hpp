#pragma once

/// \file geodec.hpp
/// Umbrella header.

#include "bernstein.hpp"
#include "decomp.hpp"
#include "dof.hpp"
#include "errors.hpp"
#include "json_io.hpp"
#include "lattice.hpp"
#include "linalg.hpp"
#include "mesh.hpp"
#include "meshglobal.hpp"
#include "rational.hpp"
#include "svg.hpp"
