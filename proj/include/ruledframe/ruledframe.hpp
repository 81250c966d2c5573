#pragma once

#include "error.hpp"
#include "numeric.hpp"
#include "frames.hpp"
#include "curve.hpp"
#include "framing.hpp"
#include "surface_kind.hpp"
#include "closedform.hpp"
#include "smarandache.hpp"
#include "geometry.hpp"
#include "verification.hpp"
#include "curve_spec.hpp"
#include "export.hpp"
#include "cli.hpp"
