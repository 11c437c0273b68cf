#pragma once

#include "errors.hpp"
#include "partitions.hpp"
#include "support_enum.hpp"
#include "entropy.hpp"
#include "rays.hpp"
#include "parallel.hpp"
#include "optimizer.hpp"
#include "lp.hpp"
#include "geometry.hpp"
#include "info_geometry.hpp"
#include "io.hpp"
