#pragma once

// Umbrella header for the whole simulator.

#include "config_io.hpp" // IWYU pragma: export
#include "connection.hpp" // IWYU pragma: export
#include "energy.hpp" // IWYU pragma: export
#include "engine.hpp" // IWYU pragma: export
#include "geometry.hpp" // IWYU pragma: export
#include "mme.hpp" // IWYU pragma: export
#include "mobility.hpp" // IWYU pragma: export
#include "nodes.hpp" // IWYU pragma: export
#include "power.hpp" // IWYU pragma: export
#include "report.hpp" // IWYU pragma: export
#include "rng.hpp" // IWYU pragma: export
#include "scenario.hpp" // IWYU pragma: export
#include "time.hpp" // IWYU pragma: export
#include "traffic.hpp" // IWYU pragma: export
#include "world.hpp" // IWYU pragma: export
