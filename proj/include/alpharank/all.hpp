// Copyright 2026 The alpharank Authors
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

#include "alpharank/alpharank.hpp"
#include "alpharank/error.hpp"
#include "alpharank/evodyn.hpp"
#include "alpharank/games.hpp"
#include "alpharank/graph.hpp"
#include "alpharank/io.hpp"
#include "alpharank/mcc.hpp"
#include "alpharank/metagame.hpp"
#include "alpharank/replicator.hpp"
#include "alpharank/report.hpp"
#include "alpharank/simulator.hpp"
#include "alpharank/stationary.hpp"
#include "alpharank/validate.hpp"
