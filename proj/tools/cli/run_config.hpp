// Copyright (C) 2026 licsctl authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"
#include "lics/lics.h"

namespace licsctl {

/// Malformed or physically invalid configuration. Maps to exit code 2.
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A library call that returned a non-OK status.
class LibraryError : public std::runtime_error {
public:
    LibraryError(lics_status status, const std::string& what)
        : std::runtime_error(what), status_(status) {}
    lics_status status() const { return status_; }

private:
    lics_status status_;
};

/// Throws LibraryError carrying lics_last_error() unless `s` is LICS_OK.
void check(lics_status s, const std::string& context);

struct AxisBlock {
    std::string path;
    double min = 0.0;
    double max = 0.0;
    std::size_t count = 0;
    friend bool operator==(const AxisBlock&, const AxisBlock&) = default;
};

struct SimulateBlock {
    /// Uniform grid over the window; when absent `times` is used, and an empty
    /// `times` list means final state only.
    std::optional<std::size_t> samples;
    std::vector<double> times;
    friend bool operator==(const SimulateBlock&, const SimulateBlock&) = default;
};

struct SweepBlock {
    AxisBlock axis1;
    std::optional<AxisBlock> axis2;
    std::vector<std::string> observables;
    bool permit_partial = false;
    friend bool operator==(const SweepBlock&, const SweepBlock&) = default;
};

struct TargetBlock {
    std::string observable;
    double value = 0.0;
    double weight = 1.0;
    friend bool operator==(const TargetBlock&, const TargetBlock&) = default;
};

struct FreeBlock {
    std::string path;
    double min = 0.0;
    double max = 0.0;
    friend bool operator==(const FreeBlock&, const FreeBlock&) = default;
};

struct OptimizeBlock {
    std::vector<TargetBlock> targets;
    std::vector<FreeBlock> free;
    std::size_t budget = 200;
    std::uint64_t seed = 1;
    std::optional<std::vector<double>> initial;
    friend bool operator==(const OptimizeBlock&, const OptimizeBlock&) = default;
};

struct OutputBlock {
    std::string directory = "licsctl-out";
    std::vector<std::string> formats{"csv"};
    friend bool operator==(const OutputBlock&, const OutputBlock&) = default;
};

struct RunConfig {
    /// Preset form: name plus parameter-path overrides and integrator fields.
    std::optional<std::string> preset;
    std::map<std::string, double> overrides;
    std::map<std::string, double> integrator;
    /// The scenario after presets and overrides are applied. In explicit form
    /// this is the whole source of truth.
    lics_scenario scenario{};

    std::optional<SimulateBlock> simulate;
    std::optional<SweepBlock> sweep;
    std::optional<OptimizeBlock> optimize;
    OutputBlock output;
};

bool operator==(const RunConfig& a, const RunConfig& b);

/// Strict parse: unknown or duplicate keys, wrong types and failed physical
/// validation all raise ConfigError. Syntax errors report line and column.
RunConfig parse_config(const std::string& text);
RunConfig load_config(const std::string& path);

nlohmann::json to_json(const RunConfig& cfg);
nlohmann::json scenario_to_json(const lics_scenario& s);
std::string dump(const nlohmann::json& j);

/// Builds the library objects once so every inner validation runs at parse time.
void validate(const RunConfig& cfg);

}  // namespace licsctl
