// Copyright 2026 The PhosForge Authors. All Rights Reserved.
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


// Command-line front end.
//
//   phosforge generate-data | clean | analyze | train | evaluate | predict |
//             metallurgy | serve
//
// Exit status is 0 on success, 1 on runtime errors and 2 on usage errors.

#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace phosforge::app {

/// `args` excludes the program name.
int cli_run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace phosforge::app
