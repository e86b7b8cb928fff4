#pragma once

#include "landau/error.hpp"
#include "landau/domain.hpp"
#include "landau/fourier.hpp"
#include "landau/kernels.hpp"
#include "landau/precompute.hpp"
#include "landau/table_io.hpp"
#include "landau/operator.hpp"
#include "landau/integrator.hpp"
#include "landau/diagnostics.hpp"
#include "landau/testproblems.hpp"
