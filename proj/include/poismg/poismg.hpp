// Umbrella header.

#pragma once

#include "poismg/benchmark.hpp"
#include "poismg/boundary.hpp"
#include "poismg/cases.hpp"
#include "poismg/config.hpp"
#include "poismg/coordinate_map.hpp"
#include "poismg/field.hpp"
#include "poismg/gridgen.hpp"
#include "poismg/io.hpp"
#include "poismg/material.hpp"
#include "poismg/multigrid.hpp"
#include "poismg/norms.hpp"
#include "poismg/operator.hpp"
#include "poismg/relax.hpp"
#include "poismg/runner.hpp"
#include "poismg/transfer.hpp"
