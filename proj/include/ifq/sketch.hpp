#pragma once

// Umbrella header: interval-frequency sketches over sliding windows.

#include "config.hpp"
#include "errors.hpp"
#include "exact_oracle.hpp"
#include "item.hpp"
#include "space_saving.hpp"
#include "fixed_window.hpp"
#include "raw.hpp"
#include "block_solver.hpp"
#include "acc.hpp"
#include "hit.hpp"
#include "reduction.hpp"
