// SPDX-License-Identifier: Apache-2.0
//
// nfrsma: hybrid beamfocusing for rate-splitting near-field downlinks
// Copyright (C) 2026 The nfrsma authors
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

#ifndef NFRSMA_NFRSMA_HPP
#define NFRSMA_NFRSMA_HPP

#include "types.hpp"
#include "model.hpp"
#include "rates.hpp"
#include "surrogate.hpp"
#include "subproblem.hpp"
#include "pbcd.hpp"
#include "twostage.hpp"
#include "bench.hpp"
#include "config.hpp"
#include "io.hpp"

#endif
