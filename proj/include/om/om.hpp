#pragma once

#include "om/core.hpp"
#include "om/exact.hpp"
#include "om/chirotope.hpp"
#include "om/hyperline.hpp"
#include "om/faces.hpp"
#include "om/io.hpp"
