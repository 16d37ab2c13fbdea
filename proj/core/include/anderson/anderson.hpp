#pragma once

#include "anderson/accelerators.hpp"
#include "anderson/analysis.hpp"
#include "anderson/augmented_map.hpp"
#include "anderson/error.hpp"
#include "anderson/linalg.hpp"
#include "anderson/parallel.hpp"
#include "anderson/problems.hpp"
