// Copyright 2026 The modchsh Authors
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

#pragma once

// Random test ensembles for audits: Haar pure states (normalized complex
// Gaussian vectors), Haar unitaries (phase-corrected QR of a Ginibre matrix)
// and observables with spectra drawn uniformly from [-1, 1] or from {-1, 1}.

#include <random>

#include "modchsh/chsh_core.hpp"

namespace modchsh::chsh {

Vector haar_random_state(Eigen::Index dim, std::mt19937_64& rng);
Matrix haar_random_unitary(Eigen::Index dim, std::mt19937_64& rng);
Observable random_observable(Eigen::Index dim, std::mt19937_64& rng);
/// U diag(±1) U† with both signs present when dim >= 2.
Observable random_projective_observable(Eigen::Index dim, std::mt19937_64& rng);

}  // namespace modchsh::chsh
