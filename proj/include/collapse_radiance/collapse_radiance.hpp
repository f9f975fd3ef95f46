#pragma once

// Umbrella header: the whole library.

#include "collapse_radiance/atom.hpp"
#include "collapse_radiance/atom_io.hpp"
#include "collapse_radiance/constants.hpp"
#include "collapse_radiance/csl.hpp"
#include "collapse_radiance/dp.hpp"
#include "collapse_radiance/errors.hpp"
#include "collapse_radiance/inference.hpp"
#include "collapse_radiance/inference_io.hpp"
#include "collapse_radiance/quadrature.hpp"
#include "collapse_radiance/rng.hpp"
#include "collapse_radiance/spectrum.hpp"
#include "collapse_radiance/spectrum_io.hpp"
#include "collapse_radiance/version.hpp"
