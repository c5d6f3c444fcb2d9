// aclab.hpp — Umbrella header

#pragma once

#include "aclab/dynamics.hpp"
#include "aclab/effective.hpp"
#include "aclab/fock.hpp"
#include "aclab/io.hpp"
#include "aclab/models.hpp"
#include "aclab/spectra.hpp"
