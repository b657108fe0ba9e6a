/*
 * Copyright 2026 The coded-shuffle Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#pragma once

#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace cdc {

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Malformed or out-of-domain input (bad parameters, bad dimensions).
class InvalidArgument : public Error {
public:
    using Error::Error;
};

/// A rate pair or configuration that the scheme cannot operate with.
class InfeasibleError : public Error {
public:
    InfeasibleError(const std::string& what, std::vector<std::string> violated)
        : Error(what), violated_(std::move(violated)) {}

    const std::vector<std::string>& violated() const noexcept { return violated_; }

private:
    std::vector<std::string> violated_;
};

/// Sizes that do not split evenly into blocks, reduce sets or multicast parts.
class DivisibilityError : public Error {
public:
    DivisibilityError(const std::string& what, std::string m_multiplier, std::string n_multiplier)
        : Error(what), m_multiplier_(std::move(m_multiplier)), n_multiplier_(std::move(n_multiplier)) {}

    const std::string& m_multiplier() const noexcept { return m_multiplier_; }
    const std::string& n_multiplier() const noexcept { return n_multiplier_; }

private:
    std::string m_multiplier_;
    std::string n_multiplier_;
};

/// Erasure decoding or side-information cancellation could not proceed.
class DecodeError : public Error {
public:
    using Error::Error;
};

/// Inconsistency between a shuffle plan, the placement and the IV stores.
class PlanError : public Error {
public:
    using Error::Error;
};

}  // namespace cdc
