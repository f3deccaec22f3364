// Copyright 2026 The Scenetext Authors.
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

#ifndef SCENETEXT_CLI_H_
#define SCENETEXT_CLI_H_

#include <iosfwd>

namespace scenetext {

inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;
inline constexpr int kExitUsage = 2;

// Commands: validate, stats, build-pretrain, build-finetune, subsample,
// evaluate. Human-readable summaries go to `err`; with --json a single
// JSON document goes to `out`.
int RunCli(int argc, const char* const* argv, std::ostream& out,
           std::ostream& err);

}  // namespace scenetext

#endif  // SCENETEXT_CLI_H_
