#pragma once

#include "alrh/errors.hpp"
#include "alrh/lattice.hpp"
#include "alrh/scattering.hpp"
#include "alrh/special.hpp"
#include "alrh/cauchy.hpp"
#include "alrh/asymptotics.hpp"
#include "alrh/rh.hpp"
#include "alrh/io.hpp"
#include "alrh/harness.hpp"
