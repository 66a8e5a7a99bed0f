#pragma once

// Umbrella header for the reservoir temporal-kernel library.

#include "numerics.hpp"
#include "random.hpp"
#include "coupling.hpp"
#include "temporal_kernel.hpp"
#include "motifs.hpp"
#include "richness.hpp"
#include "io.hpp"
#include "verification.hpp"
