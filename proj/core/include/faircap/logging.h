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

#ifndef FAIRCAP_LOGGING_H_
#define FAIRCAP_LOGGING_H_

namespace faircap {

// Sends library logs to stderr at the level named by the FAIRCAP_LOG
// environment variable (trace, debug, info, warn, error, off; default
// warn). Unknown names keep the default.
void ConfigureLogging();

}  // namespace faircap

#endif  // FAIRCAP_LOGGING_H_
