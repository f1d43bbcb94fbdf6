// Umbrella header.

#pragma once

#include "spectra/boundary.hpp"
#include "spectra/construction.hpp"
#include "spectra/eigen_sym.hpp"
#include "spectra/estimate.hpp"
#include "spectra/expectations.hpp"
#include "spectra/goe.hpp"
#include "spectra/json_io.hpp"
#include "spectra/parallel.hpp"
#include "spectra/pencil.hpp"
#include "spectra/quadrature.hpp"
#include "spectra/rng.hpp"
#include "spectra/singular.hpp"
#include "spectra/special_functions.hpp"
#include "spectra/sym_matrix.hpp"
#include "spectra/volume.hpp"
