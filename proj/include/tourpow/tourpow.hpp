#pragma once

// Everything at once.

#include "tourpow/absorber.hpp"
#include "tourpow/bitset.hpp"
#include "tourpow/construct.hpp"
#include "tourpow/errors.hpp"
#include "tourpow/extremal.hpp"
#include "tourpow/io.hpp"
#include "tourpow/median.hpp"
#include "tourpow/mode.hpp"
#include "tourpow/oracle.hpp"
#include "tourpow/ordering.hpp"
#include "tourpow/pipeline.hpp"
#include "tourpow/random.hpp"
#include "tourpow/rational.hpp"
#include "tourpow/sequencing.hpp"
#include "tourpow/tournament.hpp"
#include "tourpow/verify.hpp"
