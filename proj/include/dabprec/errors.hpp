// SPDX-License-Identifier: Apache-2.0
//
// dabprec - distortion-aware precoding for nonlinearly amplified MISO downlinks
// Copyright (C) 2026 dabprec contributors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#ifndef DABPREC_ERRORS_HPP
#define DABPREC_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace dabprec {

// Non-finite, empty, or otherwise malformed numeric input.
class InvalidInputError : public std::invalid_argument {
  public:
    explicit InvalidInputError(const std::string &msg) : std::invalid_argument(msg) {}
};

// A channel vector is zero (or numerically zero), so direction-based
// constructions such as conjugate beamforming are undefined.
class DegenerateChannelError : public std::invalid_argument {
  public:
    explicit DegenerateChannelError(const std::string &msg) : std::invalid_argument(msg) {}
};

// The stacked channel matrix cannot be inverted for interference nulling
// (more users than antennas, or condition number above threshold).
class SingularChannelError : public std::runtime_error {
  public:
    explicit SingularChannelError(const std::string &msg) : std::runtime_error(msg) {}
};

// The output-power equation has no root inside the search bracket, i.e. the
// requested power cannot be reached within the validity region of the
// amplifier model.
class ProjectionInfeasibleError : public std::runtime_error {
  public:
    explicit ProjectionInfeasibleError(const std::string &msg) : std::runtime_error(msg) {}
};

// Malformed, incomplete, or unrecognized configuration content.
class ConfigError : public std::runtime_error {
  public:
    explicit ConfigError(const std::string &msg) : std::runtime_error(msg) {}
};

} // namespace dabprec

#endif
