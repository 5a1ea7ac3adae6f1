/*
 * Copyright 2026 The swapsim Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 * http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#ifndef SWAPSIM_SWAPSIM_HPP
#define SWAPSIM_SWAPSIM_HPP

#include "swapsim/blkio.hpp"
#include "swapsim/completion.hpp"
#include "swapsim/compress.hpp"
#include "swapsim/config.hpp"
#include "swapsim/core.hpp"
#include "swapsim/device.hpp"
#include "swapsim/energy.hpp"
#include "swapsim/metrics.hpp"
#include "swapsim/sim.hpp"
#include "swapsim/swapcache.hpp"
#include "swapsim/system.hpp"
#include "swapsim/vmm.hpp"
#include "swapsim/workload.hpp"

#endif  // SWAPSIM_SWAPSIM_HPP
