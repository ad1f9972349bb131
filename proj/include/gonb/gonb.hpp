#pragma once

// Umbrella header.
#include "gonb/error.hpp"
#include "gonb/linalg.hpp"
#include "gonb/parallel.hpp"
#include "gonb/polytope.hpp"
#include "gonb/hull.hpp"
#include "gonb/fourier.hpp"
#include "gonb/gabor.hpp"
#include "gonb/io.hpp"
#include "gonb/workbench.hpp"
