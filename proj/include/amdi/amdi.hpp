// Copyright 2026 The amdi-rate Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include "amdi/channel.hpp"
#include "amdi/closed_form.hpp"
#include "amdi/combinatorics.hpp"
#include "amdi/error.hpp"
#include "amdi/fock.hpp"
#include "amdi/oracle.hpp"
#include "amdi/probabilities.hpp"
#include "amdi/rate.hpp"
#include "amdi/sources.hpp"
#include "amdi/sweep.hpp"
