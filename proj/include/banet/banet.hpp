#pragma once

#include <banet/attractor.hpp>
#include <banet/dynamics.hpp>
#include <banet/error.hpp>
#include <banet/formula.hpp>
#include <banet/network.hpp>
#include <banet/network_file.hpp>
#include <banet/schedule.hpp>
#include <banet/sensitivity.hpp>
#include <banet/state.hpp>
