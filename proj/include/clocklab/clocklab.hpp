#pragma once

#include "clocklab/core/error.hpp"
#include "clocklab/core/field.hpp"
#include "clocklab/core/grid.hpp"
#include "clocklab/core/quadrature.hpp"
#include "clocklab/core/spectral.hpp"
#include "clocklab/core/units.hpp"
#include "clocklab/gedanken.hpp"
#include "clocklab/classical/brackets.hpp"
#include "clocklab/classical/hamiltonian.hpp"
#include "clocklab/classical/integrator.hpp"
#include "clocklab/classical/metric.hpp"
#include "clocklab/classical/phase_space.hpp"
#include "clocklab/classical/residuals.hpp"
#include "clocklab/quantum/clock.hpp"
#include "clocklab/quantum/operators.hpp"
#include "clocklab/quantum/optimize.hpp"
#include "clocklab/quantum/state.hpp"
