// Copyright 2026 The Authors.
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


// Convenience header pulling in the whole library.

#ifndef NBV_NBV_HPP_
#define NBV_NBV_HPP_

#include "nbv/acceptance.hpp"
#include "nbv/angles.hpp"
#include "nbv/camera.hpp"
#include "nbv/errors.hpp"
#include "nbv/evaluation.hpp"
#include "nbv/geometry.hpp"
#include "nbv/gp.hpp"
#include "nbv/harness.hpp"
#include "nbv/kernels.hpp"
#include "nbv/objectives.hpp"
#include "nbv/planner.hpp"
#include "nbv/spectral.hpp"
#include "nbv/world.hpp"

#endif  // NBV_NBV_HPP_
