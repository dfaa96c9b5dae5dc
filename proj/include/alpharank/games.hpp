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

#include "alpharank/metagame.hpp"

// Some small sample games.

namespace alpharank::games {

inline MetaGame rock_paper_scissors() {
  return MetaGame::create(2, {{"R", "P", "S"}},
                          {{0, -1, 1,
                            1, 0, -1,
                            -1, 1, 0}},
                          true);
}

inline MetaGame biased_rock_paper_scissors() {
  return MetaGame::create(2, {{"R", "P", "S"}},
                          {{0.0, -0.5, 1.0,
                            0.5, 0.0, -0.1,
                            -1.0, 0.1, 0.0}},
                          true);
}

// O = opera, M = movies.
inline MetaGame battle_of_the_sexes() {
  return MetaGame::create(2, {{"O", "M"}, {"O", "M"}},
                          {{3, 0, 0, 2}, {2, 0, 0, 3}}, false);
}

// Partnership game evaluated with two populations.
inline MetaGame coordination() {
  return MetaGame::create(2, {{"A", "B"}, {"A", "B"}},
                          {{1, -1, -1, 1}, {1, -1, -1, 1}}, false);
}

// Same payoffs, declared symmetric (single population).
inline MetaGame symmetric_coordination() {
  return MetaGame::create(2, {{"A", "B"}}, {{1, -1, -1, 1}}, true);
}

inline MetaGame matching_pennies() {
  return MetaGame::create(2, {{"H", "T"}, {"H", "T"}},
                          {{1, -1, -1, 1}, {-1, 1, 1, -1}}, false);
}

}  // namespace alpharank::games
