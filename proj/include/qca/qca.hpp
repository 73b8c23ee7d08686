#pragma once

#include "qca/asymptotics.hpp"
#include "qca/dirac1d.hpp"
#include "qca/dirac2d.hpp"
#include "qca/error.hpp"
#include "qca/fourier.hpp"
#include "qca/lattice.hpp"
#include "qca/planck_units.hpp"
#include "qca/spectral.hpp"
#include "qca/wavepacket.hpp"
