// Copyright (c) 2026 The homsum Authors. All Rights Reserved.
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

#include "homsum/kernel_io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <vector>

#include <json.hpp>

namespace homsum::io {

namespace {

using nlohmann::json;

int require_int(const json& j, const char* field) {
  if (!j.contains(field) || !j[field].is_number_integer()) {
    throw ParseError(std::string("field '") + field + "' must be an integer");
  }
  return j[field].get<int>();
}

std::string fmt17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

KernelFile parse_kernel_text(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("invalid JSON: ") + e.what());
  }
  if (!j.is_object()) throw ParseError("kernel file must be a JSON object");

  const int q = require_int(j, "q");
  const int N = require_int(j, "N");

  std::vector<double> lambda;
  if (j.contains("lambda")) {
    if (!j["lambda"].is_array()) throw ParseError("field 'lambda' must be an array");
    for (const auto& v : j["lambda"]) {
      if (!v.is_number()) throw ParseError("field 'lambda' must hold numbers");
      lambda.push_back(v.get<double>());
    }
    if (static_cast<int>(lambda.size()) != N) {
      throw ParseError("field 'lambda' must have exactly N entries");
    }
  } else {
    lambda.assign(static_cast<std::size_t>(N > 0 ? N : 0), 1.0);
  }

  std::vector<std::pair<Tuple, double>> entries;
  if (!j.contains("entries") || !j["entries"].is_array()) {
    throw ParseError("field 'entries' must be an array");
  }
  std::size_t line = 0;
  for (const auto& e : j["entries"]) {
    ++line;
    const std::string where = "entries[" + std::to_string(line - 1) + "]";
    if (!e.is_object() || !e.contains("idx") || !e.contains("val")) {
      throw ParseError(where + " must be an object with 'idx' and 'val'");
    }
    if (!e["idx"].is_array()) throw ParseError(where + ".idx must be an array");
    Tuple idx;
    for (const auto& v : e["idx"]) {
      if (!v.is_number_integer()) throw ParseError(where + ".idx must hold integers");
      idx.push_back(v.get<int>());
    }
    if (!e["val"].is_number()) throw ParseError(where + ".val must be a number");
    entries.emplace_back(std::move(idx), e["val"].get<double>());
  }

  return KernelFile{build_symmetric(q, N, entries), WeightVector(std::move(lambda))};
}

KernelFile load_kernel_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open kernel file '" + path + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_kernel_text(buffer.str());
}

std::string serialize_kernel(const SymmetricKernel& kernel, const WeightVector& weights) {
  if (kernel.size() != weights.size()) {
    throw SizeMismatchError("kernel and weight vector sizes differ");
  }
  std::ostringstream out;
  out << "{\"q\": " << kernel.order() << ", \"N\": " << kernel.size() << ", \"lambda\": [";
  for (int i = 1; i <= weights.size(); ++i) {
    if (i > 1) out << ", ";
    out << fmt17(weights.lambda(i));
  }
  out << "], \"entries\": [";
  bool first = true;
  for (const auto& [tuple, val] : kernel.entries()) {
    if (!first) out << ", ";
    first = false;
    out << "{\"idx\": [";
    for (std::size_t i = 0; i < tuple.size(); ++i) {
      if (i > 0) out << ", ";
      out << tuple[i];
    }
    out << "], \"val\": " << fmt17(val) << "}";
  }
  out << "]}\n";
  return out.str();
}

}  // namespace homsum::io
