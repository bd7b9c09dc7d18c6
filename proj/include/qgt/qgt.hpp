#pragma once

#include "qgt/grid.hpp"
#include "qgt/weights.hpp"
#include "qgt/fourier.hpp"
#include "qgt/greedy.hpp"
#include "qgt/report.hpp"
#include "qgt/experiments.hpp"
