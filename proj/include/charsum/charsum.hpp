#pragma once
// Umbrella header.

#include "charsum/arith.hpp"
#include "charsum/characters.hpp"
#include "charsum/checksum.hpp"
#include "charsum/dickman.hpp"
#include "charsum/distribution.hpp"
#include "charsum/fft.hpp"
#include "charsum/io.hpp"
#include "charsum/lfun.hpp"
#include "charsum/model.hpp"
#include "charsum/scan.hpp"
#include "charsum/small_characters.hpp"
#include "charsum/smooth.hpp"
#include "charsum/stats.hpp"
#include "charsum/summation.hpp"
#include "charsum/verify.hpp"
