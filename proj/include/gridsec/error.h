// Copyright 2026 The gridsec Authors.
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

#ifndef GRIDSEC_ERROR_H_
#define GRIDSEC_ERROR_H_

#include <stdexcept>
#include <string>

namespace gridsec {

// Bad input: malformed fixture, unknown bus, dimension mismatch. The CLI
// maps this to exit code 1.
class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A numerical stage failed: singular matrix, infeasible or unbounded LP.
// The CLI maps this to exit code 2.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace gridsec

#endif  // GRIDSEC_ERROR_H_
