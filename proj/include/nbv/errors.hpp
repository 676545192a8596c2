// Copyright 2026 The Authors.
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

#ifndef NBV_ERRORS_HPP_
#define NBV_ERRORS_HPP_

#include <stdexcept>
#include <string>

namespace nbv {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Invalid parameters, malformed inputs, unknown names.
class ConfigError : public Error {
 public:
  using Error::Error;
};

// A query outside the domain where a function is defined.
class DomainError : public Error {
 public:
  using Error::Error;
};

// Factorisation failures and similar numerical breakdowns.
class NumericalError : public Error {
 public:
  using Error::Error;
};

namespace detail {

inline void require(bool ok, const std::string& what) {
  if (!ok) throw ConfigError(what);
}

}  // namespace detail
}  // namespace nbv

#endif  // NBV_ERRORS_HPP_
