/*
   Copyright 2026 gmsim authors

   Licensed under the Apache License, Version 2.0 (the "License");
   you may not use this file except in compliance with the License.
   You may obtain a copy of the License at

       http://www.apache.org/licenses/LICENSE-2.0

   Unless required by applicable law or agreed to in writing, software
   distributed under the License is distributed on an "AS IS" BASIS,
   WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
   See the License for the specific language governing permissions and
   limitations under the License.
*/

#ifndef GMSIM_ERRORS_HPP
#define GMSIM_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace gmsim {

/// Bad user input: malformed edge masks, unknown distribution ids, invalid
/// configuration fields. Maps to exit code 2 at the CLI.
class ValidationError : public std::runtime_error {
  public:
    explicit ValidationError(const std::string& msg) : std::runtime_error(msg) {}
};

/// A request exceeds what a backend can do (e.g. exact diagonalization
/// beyond the dense-spectrum limit).
class CapabilityError : public std::runtime_error {
  public:
    explicit CapabilityError(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace gmsim

#endif
