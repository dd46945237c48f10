// Copyright 2026 The icnl Authors
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

#include "icnl/analysis.hpp"
#include "icnl/circuit.hpp"
#include "icnl/decompose.hpp"
#include "icnl/dsl.hpp"
#include "icnl/effective.hpp"
#include "icnl/experiments.hpp"
#include "icnl/expr.hpp"
#include "icnl/fock_oracle.hpp"
#include "icnl/gates.hpp"
#include "icnl/perturb.hpp"
#include "icnl/report.hpp"
