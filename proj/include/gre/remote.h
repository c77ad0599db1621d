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

#ifndef GRE_REMOTE_H_
#define GRE_REMOTE_H_

#include <chrono>
#include <cstdint>
#include <deque>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "gre/backends.h"

namespace gre {

struct BackendEndpoint {
  std::string base_url;
  std::chrono::milliseconds timeout{30000};
  int max_retries = 3;
  // Delay before retry i is retry_backoff[min(i, size - 1)].
  std::vector<std::chrono::milliseconds> retry_backoff{
      std::chrono::milliseconds(200), std::chrono::milliseconds(400),
      std::chrono::milliseconds(800)};
  nlohmann::json passthrough_params = nlohmann::json::object();
  std::string bearer_token;

  void Validate() const;
};

nlohmann::json ToJson(BackendEndpoint const& endpoint);
BackendEndpoint BackendEndpointFromJson(nlohmann::json const& j,
                                        BackendEndpoint base = {});

struct TransportRequest {
  std::string path;
  std::string body;
  std::chrono::milliseconds timeout{0};
  std::string bearer_token;
};

struct TransportResponse {
  int status = 200;
  std::string body;
};

/// Throws Error(kTimeout) on timeouts and Error(kBackendFailure) when the
/// service cannot be reached.
class Transport {
 public:
  virtual ~Transport() = default;
  virtual TransportResponse Post(TransportRequest const& request) = 0;
};

class HttpTransport : public Transport {
 public:
  explicit HttpTransport(std::string base_url);
  TransportResponse Post(TransportRequest const& request) override;

 private:
  std::string base_url_;
};

/// Replays a fixed script of outcomes and records every request.
/// Fixture format: [{"fault": "timeout"|"unreachable"} | {"status": 503,
/// "body": "..."} | {"body": {...}}, ...].
class ScriptedTransport : public Transport {
 public:
  struct Step {
    enum class Kind { kRespond, kTimeout, kUnreachable };
    Kind kind = Kind::kRespond;
    TransportResponse response;
  };

  explicit ScriptedTransport(std::vector<Step> steps);
  static std::shared_ptr<ScriptedTransport> FromJson(nlohmann::json const& j);

  TransportResponse Post(TransportRequest const& request) override;
  std::vector<TransportRequest> requests() const;
  std::size_t remaining() const;

 private:
  mutable std::mutex mu_;
  std::deque<Step> steps_;
  std::vector<TransportRequest> requests_;
};

/// Wraps a transport and fails a seed-determined subset of calls before
/// they reach it.
class FaultInjectingTransport : public Transport {
 public:
  FaultInjectingTransport(std::shared_ptr<Transport> inner,
                          double failure_rate, std::uint64_t seed);
  TransportResponse Post(TransportRequest const& request) override;
  int injected() const;

 private:
  std::shared_ptr<Transport> inner_;
  double failure_rate_;
  std::uint64_t seed_;
  mutable std::mutex mu_;
  std::map<std::string, int> attempts_;
  int injected_ = 0;
};

using Sleeper = std::function<void(std::chrono::milliseconds)>;
Sleeper RealSleeper();

/// JSON request/response with retries. Correlation ids are derived from
/// the request, never from the clock.
class RemoteClient {
 public:
  struct Result {
    nlohmann::json body;
    int retries = 0;
  };

  RemoteClient(BackendEndpoint endpoint, std::shared_ptr<Transport> transport,
               Sleeper sleeper = RealSleeper());

  /// Transient failures (timeouts, unreachable, 5xx) are retried; 4xx and
  /// non-JSON bodies are not. Throws kRetriesExhausted once the budget is
  /// spent (the original error when max_retries is 0) and
  /// kMalformedResponse for unreadable bodies.
  Result Call(std::string_view path, nlohmann::json payload,
              std::uint64_t seed) const;

  BackendEndpoint const& endpoint() const { return endpoint_; }

 private:
  BackendEndpoint endpoint_;
  std::shared_ptr<Transport> transport_;
  Sleeper sleeper_;
};

/// Content of the last \boxed{...} in `text`, honoring nested braces.
std::optional<std::string> LastBoxed(std::string_view text);

struct ParsedCount {
  int satisfied = 0;
  bool clamped = false;
};

/// Last boxed integer, clamped to [0, total]. Throws kUnparseableVerdict.
ParsedCount ParseBoxedCount(std::string_view text, int total);

/// Last boxed edit prompt. Throws kUnparseableResponse.
std::string ParseBoxedPrompt(std::string_view text);

std::string RenderCheckerPrompt(RequirementSet const& reqs);
std::string RenderActorPrompt(RequirementSet const& reqs,
                              CheckerVerdict const& verdict);

class RemoteGenerator : public Generator {
 public:
  explicit RemoteGenerator(std::shared_ptr<RemoteClient const> client);
  Observation Generate(RequirementSet const& reqs,
                       std::uint64_t seed) const override;

 private:
  std::shared_ptr<RemoteClient const> client_;
};

class RemoteEditor : public Editor {
 public:
  explicit RemoteEditor(std::shared_ptr<RemoteClient const> client);
  Observation Edit(Observation const& current, EditPayload const& payload,
                   std::uint64_t seed) const override;

 private:
  std::shared_ptr<RemoteClient const> client_;
};

class RemoteChecker : public Checker {
 public:
  using Warn = std::function<void(std::string const&)>;
  explicit RemoteChecker(std::shared_ptr<RemoteClient const> client,
                         Warn warn = {});
  CheckerVerdict Check(Observation const& current,
                       RequirementSet const& reqs) const override;

 private:
  std::shared_ptr<RemoteClient const> client_;
  Warn warn_;
};

class RemoteActor : public Actor {
 public:
  explicit RemoteActor(std::shared_ptr<RemoteClient const> client);
  EditPayload Propose(Observation const& current, RequirementSet const& reqs,
                      CheckerVerdict const& verdict,
                      std::uint64_t seed) const override;

 private:
  std::shared_ptr<RemoteClient const> client_;
};

struct RemoteEndpoints {
  BackendEndpoint generator, editor, checker, actor;
};

Backends MakeRemoteBackends(RemoteEndpoints const& endpoints,
                            std::shared_ptr<Transport> const& transport = {},
                            Sleeper sleeper = RealSleeper());

/// Serves the four endpoints from the simulator, so the remote clients can
/// be exercised end to end. Artifacts are kept in memory.
class SimService {
 public:
  SimService(GenSpec spec, EditorModel editor, ActorPolicy actor);

  /// Returns the HTTP status and JSON body for one request.
  TransportResponse Handle(std::string_view path, std::string_view body);

 private:
  Observation Lookup(std::string const& artifact) const;
  nlohmann::json Publish(Observation const& obs);

  Backends sim_;
  mutable std::mutex mu_;
  std::map<std::string, WorldState> artifacts_;
};

/// Transport that hands requests straight to a SimService.
class LoopbackTransport : public Transport {
 public:
  explicit LoopbackTransport(std::shared_ptr<SimService> service);
  TransportResponse Post(TransportRequest const& request) override;

 private:
  std::shared_ptr<SimService> service_;
};

}  // namespace gre

#endif  // GRE_REMOTE_H_
