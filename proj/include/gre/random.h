// Copyright 2026 The gre Authors
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

#ifndef GRE_RANDOM_H_
#define GRE_RANDOM_H_

#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <random>
#include <span>
#include <string_view>
#include <vector>

namespace gre {

/// Mixes `parts` into `base`. Every seed used anywhere in the project is
/// produced by this function from the single global seed.
std::uint64_t DeriveSeed(std::uint64_t base,
                         std::initializer_list<std::uint64_t> parts);

/// 64-bit FNV-1a. Used for string-keyed seed derivation and fingerprints.
std::uint64_t HashString(std::string_view text);

/// Source of raw 64-bit draws. Simulator code consumes randomness only
/// through this interface so that a recorded trace can be replayed.
class DrawSource {
 public:
  virtual ~DrawSource() = default;
  virtual std::uint64_t Next() = 0;

  /// Uniform in [0, 1) with 53 bits of precision; platform independent.
  double Uniform() { return static_cast<double>(Next() >> 11) * 0x1.0p-53; }

  /// Uniform index in [0, n). Requires n > 0.
  std::size_t Below(std::size_t n);
};

/// mt19937_64 stream that records every draw it hands out.
class RecordingSource : public DrawSource {
 public:
  explicit RecordingSource(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t Next() override;

  std::vector<std::uint64_t> const& trace() const { return trace_; }
  std::vector<std::uint64_t> TakeTrace() { return std::move(trace_); }

 private:
  std::mt19937_64 engine_;
  std::vector<std::uint64_t> trace_;
};

/// Replays a previously recorded trace; throws kInvalidArgument when the
/// trace runs out.
class ReplaySource : public DrawSource {
 public:
  explicit ReplaySource(std::span<std::uint64_t const> trace)
      : trace_(trace) {}

  std::uint64_t Next() override;
  std::size_t consumed() const { return position_; }

 private:
  std::span<std::uint64_t const> trace_;
  std::size_t position_ = 0;
};

/// Plain seeded stream for callers that do not need a trace.
class SeededSource : public DrawSource {
 public:
  explicit SeededSource(std::uint64_t seed) : engine_(seed) {}
  std::uint64_t Next() override { return engine_(); }

 private:
  std::mt19937_64 engine_;
};

}  // namespace gre

#endif  // GRE_RANDOM_H_
