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

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <thread>

#include <httplib.h>

#include "gre/error.h"
#include "gre/extraction.h"
#include "gre/random.h"
#include "gre/remote.h"

namespace gre {
namespace {

using nlohmann::json;
using std::chrono::milliseconds;

bool Transient(ErrorCode code) {
  return code == ErrorCode::kTimeout || code == ErrorCode::kBackendFailure;
}

std::string Hex16(std::uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

json ClauseList(RequirementSet const& reqs) {
  json out = json::array();
  for (auto const& r : reqs.items) out.push_back(r.Text());
  return out;
}

Observation ObservationFromResponse(json const& body, int retries) {
  if (!body.is_object() || !body.contains("artifact") ||
      !body["artifact"].is_string() || !body.contains("extraction")) {
    throw Error(ErrorCode::kMalformedResponse,
                "response lacks artifact or extraction");
  }
  Observation obs;
  obs.artifact = body["artifact"].get<std::string>();
  try {
    obs.graph = ParseExtractionDocument(body["extraction"]);
  } catch (Error const& e) {
    throw Error(ErrorCode::kMalformedResponse, e.what());
  }
  obs.retries = retries;
  return obs;
}

std::string ResponseText(json const& body) {
  if (!body.is_object() || !body.contains("response") ||
      !body["response"].is_string()) {
    throw Error(ErrorCode::kMalformedResponse, "response lacks text");
  }
  return body["response"].get<std::string>();
}

}  // namespace

void BackendEndpoint::Validate() const {
  if (timeout.count() <= 0) {
    throw Error(ErrorCode::kInvalidConfig, "endpoint timeout must be > 0");
  }
  if (max_retries < 0) {
    throw Error(ErrorCode::kInvalidConfig, "max_retries must be >= 0");
  }
  if (!passthrough_params.is_object()) {
    throw Error(ErrorCode::kInvalidConfig, "passthrough_params must be a map");
  }
}

json ToJson(BackendEndpoint const& e) {
  json backoff = json::array();
  for (auto d : e.retry_backoff) backoff.push_back(d.count());
  return {{"base_url", e.base_url},
          {"timeout_ms", e.timeout.count()},
          {"max_retries", e.max_retries},
          {"retry_backoff_ms", backoff},
          {"passthrough_params", e.passthrough_params},
          {"bearer_token", e.bearer_token}};
}

BackendEndpoint BackendEndpointFromJson(json const& j, BackendEndpoint e) {
  try {
    e.base_url = j.value("base_url", e.base_url);
    e.timeout = milliseconds(j.value("timeout_ms", e.timeout.count()));
    e.max_retries = j.value("max_retries", e.max_retries);
    if (j.contains("retry_backoff_ms")) {
      e.retry_backoff.clear();
      for (auto const& d : j["retry_backoff_ms"]) {
        e.retry_backoff.emplace_back(d.get<long long>());
      }
    }
    if (j.contains("passthrough_params")) {
      e.passthrough_params = j["passthrough_params"];
    }
    e.bearer_token = j.value("bearer_token", e.bearer_token);
  } catch (json::exception const& ex) {
    throw Error(ErrorCode::kInvalidConfig, std::string("endpoint: ") + ex.what());
  }
  e.Validate();
  return e;
}

HttpTransport::HttpTransport(std::string base_url)
    : base_url_(std::move(base_url)) {}

TransportResponse HttpTransport::Post(TransportRequest const& request) {
  // One client per call: httplib clients are not safe to share.
  httplib::Client client(base_url_);
  client.set_connection_timeout(request.timeout);
  client.set_read_timeout(request.timeout);
  client.set_write_timeout(request.timeout);
  if (!request.bearer_token.empty()) {
    client.set_bearer_token_auth(request.bearer_token);
  }
  auto res = client.Post(request.path, request.body, "application/json");
  if (!res) {
    auto err = res.error();
    if (err == httplib::Error::ConnectionTimeout ||
        err == httplib::Error::Read || err == httplib::Error::Write) {
      throw Error(ErrorCode::kTimeout, "request to " + request.path +
                                           " timed out (" +
                                           httplib::to_string(err) + ")");
    }
    throw Error(ErrorCode::kBackendFailure,
                request.path + ": " + httplib::to_string(err));
  }
  return {res->status, res->body};
}

ScriptedTransport::ScriptedTransport(std::vector<Step> steps)
    : steps_(steps.begin(), steps.end()) {}

std::shared_ptr<ScriptedTransport> ScriptedTransport::FromJson(json const& j) {
  if (!j.is_array()) {
    throw Error(ErrorCode::kMalformedDocument, "fault script must be a list");
  }
  std::vector<Step> steps;
  for (auto const& s : j) {
    Step step;
    std::string fault = s.value("fault", "");
    if (fault == "timeout") {
      step.kind = Step::Kind::kTimeout;
    } else if (fault == "unreachable") {
      step.kind = Step::Kind::kUnreachable;
    } else if (!fault.empty()) {
      throw Error(ErrorCode::kMalformedDocument, "unknown fault '" + fault + "'");
    } else {
      step.response.status = s.value("status", 200);
      if (s.contains("body")) {
        step.response.body = s["body"].is_string()
                                 ? s["body"].get<std::string>()
                                 : s["body"].dump();
      }
    }
    steps.push_back(std::move(step));
  }
  return std::make_shared<ScriptedTransport>(std::move(steps));
}

TransportResponse ScriptedTransport::Post(TransportRequest const& request) {
  std::lock_guard lock(mu_);
  requests_.push_back(request);
  if (steps_.empty()) {
    throw Error(ErrorCode::kBackendFailure, "fault script exhausted");
  }
  Step step = steps_.front();
  steps_.pop_front();
  switch (step.kind) {
    case Step::Kind::kTimeout:
      throw Error(ErrorCode::kTimeout, "scripted timeout on " + request.path);
    case Step::Kind::kUnreachable:
      throw Error(ErrorCode::kBackendFailure,
                  "scripted connection failure on " + request.path);
    case Step::Kind::kRespond:
      break;
  }
  return step.response;
}

std::vector<TransportRequest> ScriptedTransport::requests() const {
  std::lock_guard lock(mu_);
  return requests_;
}

std::size_t ScriptedTransport::remaining() const {
  std::lock_guard lock(mu_);
  return steps_.size();
}

FaultInjectingTransport::FaultInjectingTransport(
    std::shared_ptr<Transport> inner, double failure_rate, std::uint64_t seed)
    : inner_(std::move(inner)), failure_rate_(failure_rate), seed_(seed) {}

TransportResponse FaultInjectingTransport::Post(
    TransportRequest const& request) {
  // The decision depends only on (seed, request, attempt number), so the
  // schedule is independent of thread interleaving.
  int attempt;
  {
    std::lock_guard lock(mu_);
    attempt = attempts_[request.path + request.body]++;
  }
  SeededSource draw(DeriveSeed(seed_, {HashString(request.path),
                                       HashString(request.body),
                                       static_cast<std::uint64_t>(attempt)}));
  if (draw.Uniform() < failure_rate_) {
    {
      std::lock_guard lock(mu_);
      ++injected_;
    }
    throw Error(ErrorCode::kTimeout, "injected fault on " + request.path);
  }
  return inner_->Post(request);
}

int FaultInjectingTransport::injected() const {
  std::lock_guard lock(mu_);
  return injected_;
}

Sleeper RealSleeper() {
  return [](milliseconds d) { std::this_thread::sleep_for(d); };
}

RemoteClient::RemoteClient(BackendEndpoint endpoint,
                           std::shared_ptr<Transport> transport,
                           Sleeper sleeper)
    : endpoint_(std::move(endpoint)),
      transport_(std::move(transport)),
      sleeper_(std::move(sleeper)) {
  endpoint_.Validate();
  if (!transport_) transport_ = std::make_shared<HttpTransport>(endpoint_.base_url);
}

RemoteClient::Result RemoteClient::Call(std::string_view path, json payload,
                                        std::uint64_t seed) const {
  payload["seed"] = seed;
  payload["params"] = endpoint_.passthrough_params;
  std::string const fingerprint = payload.dump();
  payload["correlation_id"] =
      std::string(path.substr(path.starts_with('/') ? 1 : 0)) + "-" +
      Hex16(DeriveSeed(seed, {HashString(path), HashString(fingerprint)}));

  TransportRequest request{std::string(path), payload.dump(),
                           endpoint_.timeout, endpoint_.bearer_token};
  for (int attempt = 0;; ++attempt) {
    std::optional<Error> failure;
    std::optional<TransportResponse> response;
    try {
      response = transport_->Post(request);
    } catch (Error const& e) {
      if (!Transient(e.code())) throw;
      failure.emplace(e);
    }
    if (response && response->status >= 500) {
      failure.emplace(ErrorCode::kBackendFailure,
                      std::string(path) + " returned status " +
                          std::to_string(response->status));
    } else if (response && response->status >= 400) {
      throw Error(ErrorCode::kBackendFailure,
                  std::string(path) + " rejected the request with status " +
                      std::to_string(response->status));
    } else if (response) {
      auto body = json::parse(response->body, nullptr, false);
      if (body.is_discarded()) {
        throw Error(ErrorCode::kMalformedResponse,
                    std::string(path) + " returned a non-JSON body");
      }
      return {std::move(body), attempt};
    }
    if (attempt >= endpoint_.max_retries) {
      if (endpoint_.max_retries == 0) throw *failure;
      throw Error(ErrorCode::kRetriesExhausted,
                  std::string(path) + ": gave up after " +
                      std::to_string(attempt + 1) +
                      " attempts; last error: " + failure->what());
    }
    if (!endpoint_.retry_backoff.empty()) {
      auto i = std::min<std::size_t>(static_cast<std::size_t>(attempt),
                                     endpoint_.retry_backoff.size() - 1);
      sleeper_(endpoint_.retry_backoff[i]);
    }
  }
}

std::optional<std::string> LastBoxed(std::string_view text) {
  constexpr std::string_view kOpen = "\\boxed{";
  auto pos = text.rfind(kOpen);
  // rfind may land inside an unterminated box; walk back until a closed one.
  while (pos != std::string_view::npos) {
    std::size_t i = pos + kOpen.size();
    int depth = 1;
    for (; i < text.size(); ++i) {
      if (text[i] == '{') ++depth;
      if (text[i] == '}' && --depth == 0) break;
    }
    if (depth == 0) {
      return std::string(text.substr(pos + kOpen.size(),
                                     i - pos - kOpen.size()));
    }
    if (pos == 0) break;
    pos = text.rfind(kOpen, pos - 1);
  }
  return std::nullopt;
}

ParsedCount ParseBoxedCount(std::string_view text, int total) {
  auto boxed = LastBoxed(text);
  if (!boxed) {
    throw Error(ErrorCode::kUnparseableVerdict, "no \\boxed{} count in verdict");
  }
  std::string s = NormalizeText(*boxed);
  long long value = 0;
  auto const* begin = s.data();
  if (!s.empty() && s.front() == '+') ++begin;
  auto [end, ec] = std::from_chars(begin, s.data() + s.size(), value);
  if (s.empty() || ec != std::errc() || end != s.data() + s.size()) {
    throw Error(ErrorCode::kUnparseableVerdict,
                "boxed verdict '" + *boxed + "' is not an integer");
  }
  ParsedCount out;
  long long const clamped = std::clamp<long long>(value, 0, total);
  out.clamped = clamped != value;
  out.satisfied = static_cast<int>(clamped);
  return out;
}

std::string ParseBoxedPrompt(std::string_view text) {
  auto boxed = LastBoxed(text);
  if (!boxed || NormalizeText(*boxed).empty()) {
    throw Error(ErrorCode::kUnparseableResponse,
                "no \\boxed{} edit prompt in actor response");
  }
  return std::string(NormalizeText(*boxed));
}

std::string RenderCheckerPrompt(RequirementSet const& reqs) {
  std::string out =
      "Compare the image against each numbered description below and decide "
      "whether the image shows it.\n";
  for (std::size_t i = 0; i < reqs.size(); ++i) {
    out += std::to_string(i + 1) + ". " + reqs.items[i].Text() + "\n";
  }
  out +=
      "Reason briefly about each item, then report how many descriptions "
      "hold as a single integer inside \\boxed{}.";
  return out;
}

std::string RenderActorPrompt(RequirementSet const& reqs,
                              CheckerVerdict const& verdict) {
  std::string out = "Requested content: " + RenderPrompt(reqs) + "\n";
  if (verdict.per_requirement.size() == reqs.size()) {
    out += "Missing from the image:\n";
    for (std::size_t i = 0; i < reqs.size(); ++i) {
      if (!verdict.per_requirement[i]) {
        out += "- " + reqs.items[i].Text() + "\n";
      }
    }
  } else {
    out += "The reviewer found " + std::to_string(verdict.satisfied_count) +
           " of " + std::to_string(verdict.total) +
           " descriptions present.\n";
  }
  out +=
      "Write an editing instruction as short comma-separated phrases that "
      "would bring the image in line with the request. Give the final "
      "instruction inside \\boxed{}.";
  return out;
}

RemoteGenerator::RemoteGenerator(std::shared_ptr<RemoteClient const> client)
    : client_(std::move(client)) {}

Observation RemoteGenerator::Generate(RequirementSet const& reqs,
                                      std::uint64_t seed) const {
  json payload = {{"prompt", RenderPrompt(reqs)},
                  {"requirements", ClauseList(reqs)}};
  auto result = client_->Call("/generate", std::move(payload), seed);
  return ObservationFromResponse(result.body, result.retries);
}

RemoteEditor::RemoteEditor(std::shared_ptr<RemoteClient const> client)
    : client_(std::move(client)) {}

Observation RemoteEditor::Edit(Observation const& current,
                               EditPayload const& payload,
                               std::uint64_t seed) const {
  std::string text = payload.text;
  if (text.empty() && payload.action) text = payload.action->Text();
  if (text.empty()) {
    std::vector<std::string> clauses;
    for (auto const& r : payload.mentioned) clauses.push_back(r.Text());
    for (auto const& c : clauses) text += (text.empty() ? "" : ", ") + c;
  }
  if (NormalizeText(text).empty()) {
    throw Error(ErrorCode::kInvalidArgument, "empty edit payload");
  }
  json body = {{"artifact", current.artifact}, {"edit_prompt", text}};
  auto result = client_->Call("/edit", std::move(body), seed);
  return ObservationFromResponse(result.body, result.retries);
}

RemoteChecker::RemoteChecker(std::shared_ptr<RemoteClient const> client,
                             Warn warn)
    : client_(std::move(client)), warn_(std::move(warn)) {}

CheckerVerdict RemoteChecker::Check(Observation const& current,
                                    RequirementSet const& reqs) const {
  if (reqs.items.empty()) {
    throw Error(ErrorCode::kEmptyRequirements, "no requirements to check");
  }
  json body = {{"artifact", current.artifact},
               {"prompt", RenderCheckerPrompt(reqs)},
               {"requirements", ClauseList(reqs)}};
  auto result = client_->Call("/check", std::move(body),
                              HashString(current.artifact));
  CheckerVerdict verdict;
  verdict.total = static_cast<int>(reqs.size());
  verdict.raw_response = ResponseText(result.body);
  verdict.retries = result.retries;
  auto count = ParseBoxedCount(verdict.raw_response, verdict.total);
  verdict.satisfied_count = count.satisfied;
  verdict.clamped = count.clamped;
  if (count.clamped && warn_) {
    warn_("checker count outside [0, " + std::to_string(verdict.total) +
          "]; clamped to " + std::to_string(count.satisfied));
  }
  return verdict;
}

RemoteActor::RemoteActor(std::shared_ptr<RemoteClient const> client)
    : client_(std::move(client)) {}

EditPayload RemoteActor::Propose(Observation const& current,
                                 RequirementSet const& reqs,
                                 CheckerVerdict const& verdict,
                                 std::uint64_t seed) const {
  json body = {{"artifact", current.artifact},
               {"prompt", RenderActorPrompt(reqs, verdict)},
               {"requirements", ClauseList(reqs)}};
  auto result = client_->Call("/actor", std::move(body), seed);
  EditPayload payload;
  payload.text = ParseBoxedPrompt(ResponseText(result.body));
  payload.retries = result.retries;
  return payload;
}

Backends MakeRemoteBackends(RemoteEndpoints const& endpoints,
                            std::shared_ptr<Transport> const& transport,
                            Sleeper sleeper) {
  auto client = [&](BackendEndpoint const& e) {
    return std::make_shared<RemoteClient const>(e, transport, sleeper);
  };
  return {std::make_shared<RemoteGenerator>(client(endpoints.generator)),
          std::make_shared<RemoteEditor>(client(endpoints.editor)),
          std::make_shared<RemoteChecker>(client(endpoints.checker)),
          std::make_shared<RemoteActor>(client(endpoints.actor))};
}

SimService::SimService(GenSpec spec, EditorModel editor, ActorPolicy actor)
    : sim_(MakeSimBackends(spec, editor, actor)) {}

Observation SimService::Lookup(std::string const& artifact) const {
  std::lock_guard lock(mu_);
  auto it = artifacts_.find(artifact);
  if (it == artifacts_.end()) {
    throw Error(ErrorCode::kInvalidArgument, "unknown artifact " + artifact);
  }
  return ObserveWorld(it->second);
}

json SimService::Publish(Observation const& obs) {
  {
    std::lock_guard lock(mu_);
    artifacts_.emplace(obs.artifact, *obs.world);
  }
  return {{"artifact", obs.artifact}, {"extraction", ExtractionJson(obs.graph)}};
}

TransportResponse SimService::Handle(std::string_view path,
                                     std::string_view body) {
  auto request = json::parse(body, nullptr, false);
  if (request.is_discarded() || !request.is_object()) {
    return {400, json{{"error", "request is not JSON"}}.dump()};
  }
  try {
    std::uint64_t const seed = request.value("seed", std::uint64_t{0});
    auto reqs_from = [&] {
      RequirementSet reqs;
      for (auto const& c : request.at("requirements")) {
        reqs.items.push_back(ParseClause(c.get<std::string>()));
      }
      reqs.source_prompt = RenderPrompt(reqs);
      return reqs;
    };
    json reply;
    if (path == "/generate") {
      reply = Publish(sim_.generator->Generate(reqs_from(), seed));
    } else if (path == "/edit") {
      auto current = Lookup(request.at("artifact").get<std::string>());
      EditPayload payload;
      payload.text = request.at("edit_prompt").get<std::string>();
      reply = Publish(sim_.editor->Edit(current, payload, seed));
    } else if (path == "/check") {
      auto current = Lookup(request.at("artifact").get<std::string>());
      auto verdict = sim_.checker->Check(current, reqs_from());
      reply = {{"response", "Counted the descriptions present: \\boxed{" +
                                std::to_string(verdict.satisfied_count) +
                                "}"}};
    } else if (path == "/actor") {
      auto current = Lookup(request.at("artifact").get<std::string>());
      auto reqs = reqs_from();
      auto verdict = sim_.checker->Check(current, reqs);
      auto payload = sim_.actor->Propose(current, reqs, verdict, seed);
      reply = {{"response", "Proposed edit: \\boxed{" + payload.text + "}"}};
    } else {
      return {404, json{{"error", "no such endpoint"}}.dump()};
    }
    return {200, reply.dump()};
  } catch (json::exception const& e) {
    return {400, json{{"error", e.what()}}.dump()};
  } catch (Error const& e) {
    return {400, json{{"error", e.what()}}.dump()};
  }
}

LoopbackTransport::LoopbackTransport(std::shared_ptr<SimService> service)
    : service_(std::move(service)) {}

TransportResponse LoopbackTransport::Post(TransportRequest const& request) {
  return service_->Handle(request.path, request.body);
}

}  // namespace gre
