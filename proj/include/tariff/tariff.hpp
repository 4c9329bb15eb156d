#pragma once

#include "tariff/catalog.hpp"
#include "tariff/errors.hpp"
#include "tariff/fitting.hpp"
#include "tariff/money.hpp"
#include "tariff/pareto.hpp"
#include "tariff/plans.hpp"
#include "tariff/pricing.hpp"
