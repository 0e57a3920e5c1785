#pragma once

#include "travwave/common.hpp"

#include "travwave/basis/field.hpp"
#include "travwave/basis/radial.hpp"
#include "travwave/basis/sphere.hpp"
#include "travwave/basis/torus.hpp"

#include "travwave/ops/harmonic_poly.hpp"
#include "travwave/ops/killing.hpp"
#include "travwave/ops/operators.hpp"
#include "travwave/ops/spectrum.hpp"

#include "travwave/min/minimizer.hpp"
#include "travwave/min/problem.hpp"

#include "travwave/exp/perturbation.hpp"
#include "travwave/exp/plane.hpp"
#include "travwave/exp/scaling.hpp"
#include "travwave/exp/two_nonlinearity.hpp"

#include "travwave/radial/noncompact.hpp"

#include "travwave/io/commands.hpp"
#include "travwave/io/config.hpp"
#include "travwave/io/output.hpp"
