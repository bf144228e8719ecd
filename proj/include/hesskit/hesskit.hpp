#pragma once

#include "hesskit/dynamics.hpp"
#include "hesskit/errors.hpp"
#include "hesskit/fd.hpp"
#include "hesskit/graph.hpp"
#include "hesskit/hessian.hpp"
#include "hesskit/kinematics.hpp"
#include "hesskit/potentials.hpp"
#include "hesskit/spec_io.hpp"
