// Copyright 2026 The covert-irs Authors
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

#ifndef COVERT_IRS_ERRORS_HPP
#define COVERT_IRS_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace covert_irs {

/// Raised when a model is valid by type but ill-posed for the requested
/// operation (e.g. threshold optimization with deterministic noise).
class ModelError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Raised on configuration validation failure. `key()` names the offending
/// entry using a dotted path such as "scenario.xi".
class ConfigError : public std::runtime_error {
 public:
  ConfigError(std::string key, const std::string& message)
      : std::runtime_error(key + ": " + message), key_(std::move(key)) {}

  const std::string& key() const noexcept { return key_; }

 private:
  std::string key_;
};

}  // namespace covert_irs

#endif  // COVERT_IRS_ERRORS_HPP
