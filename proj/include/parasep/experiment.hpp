#pragma once

#include "experiment/config.hpp"
#include "experiment/problems.hpp"
#include "experiment/report.hpp"
#include "experiment/study.hpp"
