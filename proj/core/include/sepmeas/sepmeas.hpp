#pragma once

#include "sepmeas/cone.hpp"
#include "sepmeas/errors.hpp"
#include "sepmeas/instance.hpp"
#include "sepmeas/io.hpp"
#include "sepmeas/numerics.hpp"
#include "sepmeas/simulator.hpp"
#include "sepmeas/usd.hpp"
