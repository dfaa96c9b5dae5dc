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

#include <cerrno>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "alpharank/metagame.hpp"
#include "json.hpp"

// Game file formats.
//
// JSON:
//   {"players": K, "symmetric": bool,
//    "strategies": [[labels of player 0], ...],
//    "payoffs": [tensor of player 0, ...]}
// Each payoff tensor is a K-deep nested array, outermost axis = player 0's
// strategy. Symmetric games list one strategy set and one tensor.
//
// CSV win rates: a header row of N labels followed by N rows of N numbers.

namespace alpharank::io {

namespace detail {

inline void flatten_tensor(const nlohmann::json& node,
                           const std::vector<std::size_t>& shape,
                           std::size_t depth, std::vector<double>& out) {
  if (depth == shape.size()) {
    if (!node.is_number()) {
      throw Error(ErrorCode::kParseError, "payoff entry is not a number");
    }
    out.push_back(node.get<double>());
    return;
  }
  if (!node.is_array() || node.size() != shape[depth]) {
    throw Error(ErrorCode::kShapeMismatch,
                "payoff tensor axis " + std::to_string(depth) +
                    " should have length " + std::to_string(shape[depth]));
  }
  for (const auto& child : node) flatten_tensor(child, shape, depth + 1, out);
}

inline nlohmann::json nest_tensor(const std::vector<double>& flat,
                                  const std::vector<std::size_t>& shape,
                                  std::size_t depth, std::size_t& cursor) {
  if (depth == shape.size()) return flat[cursor++];
  nlohmann::json arr = nlohmann::json::array();
  for (std::size_t i = 0; i < shape[depth]; ++i) {
    arr.push_back(nest_tensor(flat, shape, depth + 1, cursor));
  }
  return arr;
}

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIoError, "cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> cells;
  std::string cell;
  std::istringstream ss(line);
  while (std::getline(ss, cell, ',')) {
    const auto b = cell.find_first_not_of(" \t\r");
    const auto e = cell.find_last_not_of(" \t\r");
    cells.push_back(b == std::string::npos ? "" : cell.substr(b, e - b + 1));
  }
  return cells;
}

}  // namespace detail

inline MetaGame game_from_json(const nlohmann::json& j) {
  try {
    const auto players = j.at("players").get<std::size_t>();
    const bool symmetric = j.value("symmetric", false);
    auto labels =
        j.at("strategies").get<std::vector<std::vector<std::string>>>();
    const auto& tensors = j.at("payoffs");
    if (!tensors.is_array()) {
      throw Error(ErrorCode::kParseError, "\"payoffs\" must be an array");
    }
    if (labels.empty()) {
      throw Error(ErrorCode::kShapeMismatch, "no strategy sets given");
    }
    std::vector<std::size_t> shape;
    if (symmetric) {
      shape.assign(players, labels.front().size());
    } else {
      if (labels.size() != players) {
        throw Error(ErrorCode::kShapeMismatch,
                    "expected one strategy set per player");
      }
      for (const auto& l : labels) shape.push_back(l.size());
    }
    std::vector<std::vector<double>> payoffs;
    for (const auto& t : tensors) {
      payoffs.emplace_back();
      detail::flatten_tensor(t, shape, 0, payoffs.back());
    }
    return MetaGame::create(players, std::move(labels), std::move(payoffs),
                            symmetric);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kParseError, e.what());
  }
}

// Canonical form: stored labels and tensors only, fixed key order.
inline nlohmann::json game_to_json(const MetaGame& game) {
  nlohmann::json j;
  j["players"] = game.num_players();
  j["symmetric"] = game.symmetric();
  j["strategies"] = game.stored_labels();
  nlohmann::json tensors = nlohmann::json::array();
  for (const auto& flat : game.stored_payoffs()) {
    std::size_t cursor = 0;
    tensors.push_back(detail::nest_tensor(flat, game.game_shape(), 0, cursor));
  }
  j["payoffs"] = std::move(tensors);
  return j;
}

inline std::string serialize_game(const MetaGame& game) {
  return game_to_json(game).dump(2) + "\n";
}

inline MetaGame parse_game(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kParseError, e.what());
  }
  return game_from_json(j);
}

inline MetaGame load_game(const std::string& path) {
  return parse_game(detail::read_file(path));
}

inline MetaGame parse_winrates_csv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  std::vector<std::string> labels;
  std::vector<std::vector<double>> rows;
  bool header = true;
  while (std::getline(in, line)) {
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    auto cells = detail::split_csv_line(line);
    if (header) {
      labels = std::move(cells);
      header = false;
      continue;
    }
    std::vector<double> row;
    for (const auto& c : cells) {
      char* end = nullptr;
      errno = 0;
      const double v = std::strtod(c.c_str(), &end);
      if (c.empty() || end != c.c_str() + c.size() || errno == ERANGE) {
        throw Error(ErrorCode::kParseError, "bad win-rate entry '" + c + "'");
      }
      row.push_back(v);
    }
    rows.push_back(std::move(row));
  }
  if (labels.empty()) throw Error(ErrorCode::kParseError, "missing header row");
  if (rows.size() != labels.size()) {
    throw Error(ErrorCode::kNotSquare,
                std::to_string(labels.size()) + " labels but " +
                    std::to_string(rows.size()) + " rows");
  }
  return from_winrate_matrix(std::move(labels), rows);
}

inline MetaGame load_winrates(const std::string& path) {
  return parse_winrates_csv(detail::read_file(path));
}

}  // namespace alpharank::io
