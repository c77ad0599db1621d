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

#include "gre/random.h"

#include "gre/error.h"

namespace gre {
namespace {

std::uint64_t Mix(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

}  // namespace

std::uint64_t DeriveSeed(std::uint64_t base,
                         std::initializer_list<std::uint64_t> parts) {
  std::uint64_t state = Mix(base + 0x9e3779b97f4a7c15ULL);
  for (auto part : parts) {
    state = Mix(state ^ Mix(part + 0x9e3779b97f4a7c15ULL));
  }
  return state;
}

std::uint64_t HashString(std::string_view text) {
  std::uint64_t hash = 0xcbf29ce484222325ULL;
  for (unsigned char c : text) {
    hash ^= c;
    hash *= 0x100000001b3ULL;
  }
  return hash;
}

std::size_t DrawSource::Below(std::size_t n) {
  if (n == 0) throw Error(ErrorCode::kInvalidArgument, "Below(0)");
  auto index = static_cast<std::size_t>(Uniform() * static_cast<double>(n));
  return index < n ? index : n - 1;
}

std::uint64_t RecordingSource::Next() {
  auto value = engine_();
  trace_.push_back(value);
  return value;
}

std::uint64_t ReplaySource::Next() {
  if (position_ >= trace_.size()) {
    throw Error(ErrorCode::kInvalidArgument, "seed trace exhausted");
  }
  return trace_[position_++];
}

}  // namespace gre
