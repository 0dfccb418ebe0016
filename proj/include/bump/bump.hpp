#pragma once

#include "bump/analysis.hpp"
#include "bump/config.hpp"
#include "bump/csv_io.hpp"
#include "bump/engine.hpp"
#include "bump/error.hpp"
#include "bump/json_io.hpp"
#include "bump/neuron.hpp"
#include "bump/record.hpp"
#include "bump/run_config.hpp"
#include "bump/stimulus.hpp"
#include "bump/svg.hpp"
#include "bump/sweep.hpp"
#include "bump/topology.hpp"
