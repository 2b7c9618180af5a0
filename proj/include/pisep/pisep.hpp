// Copyright 2026 The pisep developers
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef PISEP_PISEP_HPP_
#define PISEP_PISEP_HPP_

#include "pisep/concurrence.hpp"
#include "pisep/local_basis.hpp"
#include "pisep/measurement.hpp"
#include "pisep/pauli.hpp"
#include "pisep/pi_coefficients.hpp"
#include "pisep/pi_projection.hpp"
#include "pisep/rng.hpp"
#include "pisep/separability.hpp"
#include "pisep/states.hpp"
#include "pisep/types.hpp"

#endif  // PISEP_PISEP_HPP_
