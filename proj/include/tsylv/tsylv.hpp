#pragma once

// Umbrella header for the library (everything except the CLI front end).

#include "tsylv/error.hpp"
#include "tsylv/generate.hpp"
#include "tsylv/instance_io.hpp"
#include "tsylv/matrix.hpp"
#include "tsylv/matrix_core.hpp"
#include "tsylv/solvers.hpp"
#include "tsylv/spectra.hpp"
#include "tsylv/tensor_kit.hpp"
#include "tsylv/transforms.hpp"
