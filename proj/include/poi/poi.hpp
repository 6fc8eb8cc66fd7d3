// Copyright 2026 The poi-phoneme Authors.
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

#include "poi/categories.hpp"
#include "poi/distance.hpp"
#include "poi/dsp.hpp"
#include "poi/error.hpp"
#include "poi/evaluation.hpp"
#include "poi/io.hpp"
#include "poi/manifest.hpp"
#include "poi/metrics.hpp"
#include "poi/paf.hpp"
#include "poi/profile.hpp"
#include "poi/scoring.hpp"
#include "poi/wav.hpp"
