#pragma once

#include "lle/errors.hpp"
#include "lle/format.hpp"
#include "lle/levy_driver.hpp"
#include "lle/moment_recurrence.hpp"
#include "lle/multifractal.hpp"
#include "lle/rational.hpp"
#include "lle/rng.hpp"
#include "lle/slit_maps.hpp"
#include "lle/spectra.hpp"
