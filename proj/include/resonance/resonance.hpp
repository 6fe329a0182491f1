#pragma once

#include "resonance/bench.hpp"
#include "resonance/core_types.hpp"
#include "resonance/error.hpp"
#include "resonance/io.hpp"
#include "resonance/kernel.hpp"
#include "resonance/mapping.hpp"
#include "resonance/operators.hpp"
#include "resonance/query.hpp"
#include "resonance/store.hpp"
#include "resonance/verify.hpp"
