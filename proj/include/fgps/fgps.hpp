#pragma once

#include "fgps/collocation.hpp"
#include "fgps/csv_io.hpp"
#include "fgps/dense.hpp"
#include "fgps/error.hpp"
#include "fgps/fourier.hpp"
#include "fgps/frac_diff.hpp"
#include "fgps/gegenbauer.hpp"
#include "fgps/problem_spec.hpp"
#include "fgps/problems.hpp"
