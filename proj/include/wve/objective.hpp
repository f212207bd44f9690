// Copyright 2026 The WVE Authors. All Rights Reserved.
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//     http://www.apache.org/licenses/LICENSE-2.0
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

namespace wve {

// First and second derivative of a loss with respect to the raw score.
struct GradHess {
  double g = 0.0;
  double h = 0.0;
};

// Minimizer of G*w + (H + lambda)*w^2/2. Throws SingularLeaf when
// H + lambda == 0.
double LeafWeight(double sum_g, double sum_h, double lambda);

// Objective reduction from splitting a leaf into (L, R), minus the
// per-leaf penalty gamma.
double SplitGain(double g_left, double h_left, double g_right, double h_right,
                 double lambda, double gamma);

}  // namespace wve
