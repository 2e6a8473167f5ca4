#pragma once

#include "relgeo4/errors.hpp"
#include "relgeo4/jet.hpp"
#include "relgeo4/expr.hpp"
#include "relgeo4/linalg.hpp"
#include "relgeo4/cubic.hpp"
#include "relgeo4/relative_frame.hpp"
#include "relgeo4/parallel.hpp"
#include "relgeo4/bonnet.hpp"
#include "relgeo4/surface.hpp"
#include "relgeo4/report.hpp"
#include "relgeo4/commands.hpp"
