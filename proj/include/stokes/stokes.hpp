#pragma once

#include "stokes/errors.hpp"
#include "stokes/rational.hpp"
#include "stokes/exppoly.hpp"
#include "stokes/bigfloat.hpp"
#include "stokes/angle.hpp"
#include "stokes/power_series.hpp"
#include "stokes/adjoined_root.hpp"
#include "stokes/puiseux.hpp"
#include "stokes/region.hpp"
#include "stokes/growth.hpp"
#include "stokes/matrix.hpp"
#include "stokes/models.hpp"
#include "stokes/oracle.hpp"
#include "stokes/json_io.hpp"
#include "stokes/cli.hpp"
