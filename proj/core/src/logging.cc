// Copyright 2026 The FairCap Authors.
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

#include "faircap/logging.h"

#include <cstdlib>
#include <string>

#include "log.h"
#include "spdlog/sinks/stdout_color_sinks.h"

namespace faircap {
namespace internal {

spdlog::logger& Log() {
  static const std::shared_ptr<spdlog::logger> logger = [] {
    auto l = spdlog::stderr_color_mt("faircap");
    l->set_level(spdlog::level::warn);
    return l;
  }();
  return *logger;
}

}  // namespace internal

void ConfigureLogging() {
  spdlog::level::level_enum level = spdlog::level::warn;
  if (const char* env = std::getenv("FAIRCAP_LOG")) {
    const auto parsed = spdlog::level::from_str(env);
    // from_str maps unknown names to off.
    if (parsed != spdlog::level::off || std::string(env) == "off") {
      level = parsed;
    }
  }
  internal::Log().set_level(level);
}

}  // namespace faircap
