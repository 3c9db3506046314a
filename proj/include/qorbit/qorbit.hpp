#pragma once

#include "qorbit/errors.hpp"
#include "qorbit/scalar.hpp"
#include "qorbit/poly.hpp"
#include "qorbit/linalg.hpp"
#include "qorbit/hecke.hpp"
#include "qorbit/hecke_io.hpp"
#include "qorbit/symfun.hpp"
#include "qorbit/ncpoly.hpp"
#include "qorbit/rea.hpp"
#include "qorbit/orbit.hpp"
#include "qorbit/koszul.hpp"
#include "qorbit/report.hpp"
