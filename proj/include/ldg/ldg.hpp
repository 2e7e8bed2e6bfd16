#pragma once

#include "ldg/basis.hpp"
#include "ldg/errors.hpp"
#include "ldg/field.hpp"
#include "ldg/fluxes.hpp"
#include "ldg/harness.hpp"
#include "ldg/mesh.hpp"
#include "ldg/problems.hpp"
#include "ldg/projections.hpp"
#include "ldg/semidiscrete.hpp"
#include "ldg/smalleig.hpp"
#include "ldg/timestep.hpp"
#include "ldg/types.hpp"
