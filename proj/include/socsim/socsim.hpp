#pragma once

// Convenience umbrella: the whole toolkit in one include.

#include "socsim/dynamics.hpp"
#include "socsim/errors.hpp"
#include "socsim/firm_network.hpp"
#include "socsim/generators.hpp"
#include "socsim/io_table.hpp"
#include "socsim/network_io.hpp"
#include "socsim/rng.hpp"
#include "socsim/simulation.hpp"
#include "socsim/stats.hpp"
#include "socsim/summary_io.hpp"
#include "socsim/version.hpp"
