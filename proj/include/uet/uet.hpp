#pragma once

// Umbrella header: evolution operators, projection families, compatibility
// and inequality checkers, envelope estimation, family transforms, and the
// scenario/report surface.

#include "uet/cli.hpp"
#include "uet/constants.hpp"
#include "uet/envelope.hpp"
#include "uet/errors.hpp"
#include "uet/evolution.hpp"
#include "uet/linalg.hpp"
#include "uet/projection.hpp"
#include "uet/report.hpp"
#include "uet/report_json.hpp"
#include "uet/sampling.hpp"
#include "uet/scalar_function.hpp"
#include "uet/scenario.hpp"
#include "uet/transforms.hpp"
#include "uet/verify.hpp"
#include "uet/version.hpp"
