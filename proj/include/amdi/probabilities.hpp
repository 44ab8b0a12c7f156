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

namespace amdi {

/// Which BSM (or local X) outcome a probability refers to.
enum class Outcome { Correct, NonCorrect };

/// The five post-selected probabilities that enter the key rate.
template <typename Scalar = double> struct Probabilities {
  Scalar p_qnd = Scalar(0);
  Scalar p_c_z = Scalar(0);
  Scalar p_nc_z = Scalar(0);
  Scalar p_c_x = Scalar(0);
  Scalar p_nc_x = Scalar(0);
};

} // namespace amdi
