#pragma once

#include "arith.hpp"
#include "basedigits.hpp"
#include "bound.hpp"
#include "core.hpp"
#include "expsum.hpp"
#include "primesum.hpp"
#include "report.hpp"
#include "revcount.hpp"
#include "seeds.hpp"
#include "verify.hpp"
