// SPDX-License-Identifier: Apache-2.0
//
// otatrp - over-the-air total radiated power assessment toolkit
// Copyright (C) 2026 The otatrp authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#ifndef OTATRP_OTATRP_HPP
#define OTATRP_OTATRP_HPP

#include "otatrp/sphmath.hpp"
#include "otatrp/special.hpp"
#include "otatrp/swe.hpp"
#include "otatrp/sources.hpp"
#include "otatrp/sampling.hpp"
#include "otatrp/nearfield.hpp"
#include "otatrp/montecarlo.hpp"

#endif
