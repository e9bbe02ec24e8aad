#pragma once

// Umbrella header.

#include "cstrict/core.hpp"
#include "cstrict/category.hpp"
#include "cstrict/presheaf.hpp"
#include "cstrict/kan.hpp"
#include "cstrict/csystem.hpp"
#include "cstrict/image.hpp"
#include "cstrict/universe.hpp"
#include "cstrict/strictify.hpp"
