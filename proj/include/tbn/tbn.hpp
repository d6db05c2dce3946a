#pragma once

#include "model.hpp"
#include "canonical.hpp"
#include "io.hpp"
#include "partition.hpp"
#include "solver.hpp"
#include "constructions.hpp"
#include "atam.hpp"
