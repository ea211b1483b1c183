// Copyright 2026 The superpose Authors
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

#include "superpose/error.hpp"
#include "superpose/matrix.hpp"
#include "superpose/linalg.hpp"
#include "superpose/basis.hpp"
#include "superpose/state.hpp"
#include "superpose/kraus.hpp"
#include "superpose/sdp.hpp"
#include "superpose/measures.hpp"
#include "superpose/transform.hpp"
#include "superpose/qubit.hpp"
#include "superpose/game.hpp"
#include "superpose/entangle.hpp"
