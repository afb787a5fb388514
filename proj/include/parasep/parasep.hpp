#pragma once

#include "errors.hpp"
#include "scalar.hpp"
#include "sample_grid.hpp"
#include "eim.hpp"
#include "functions.hpp"
#include "term_layout.hpp"
#include "snapshot_model.hpp"
#include "oracles.hpp"
#include "linalg.hpp"
#include "reduced_basis.hpp"
#include "serialization.hpp"
#include "gallery/fem1d.hpp"
#include "gallery/kernel_family.hpp"
