#pragma once

#include "abp/error.hpp"
#include "abp/divisor.hpp"
#include "abp/numerics.hpp"
#include "abp/blaschke.hpp"
#include "abp/annulus.hpp"
#include "abp/harmonic.hpp"
#include "abp/model_space.hpp"
#include "abp/scheme.hpp"
#include "abp/dynamics.hpp"
