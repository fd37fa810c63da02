#pragma once

#include "torusmagic/construct.hpp"
#include "torusmagic/error.hpp"
#include "torusmagic/grid.hpp"
#include "torusmagic/io.hpp"
#include "torusmagic/labeling.hpp"
#include "torusmagic/render.hpp"
#include "torusmagic/search.hpp"
#include "torusmagic/verify.hpp"
