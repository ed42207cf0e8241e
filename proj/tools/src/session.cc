// Copyright 2026 The asrec Authors.
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

#include "session.h"

#include <atomic>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <iterator>
#include <sstream>
#include <thread>
#include <unordered_map>

#include <fmt/format.h>
#include <openssl/evp.h>
#include <openssl/opensslv.h>

#include "asrec/error.h"
#include "asrec/http_scorer.h"
#include "asrec/toy_scorer.h"

namespace asrec::cli {

std::string Sha256Hex(std::string_view data) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(data.data(), data.size(), digest, &len, EVP_sha256(), nullptr) != 1) {
    throw Error("SHA-256 digest failed");
  }
  std::string hex;
  hex.reserve(2 * len);
  for (unsigned int i = 0; i < len; ++i) hex += fmt::format("{:02x}", digest[i]);
  return hex;
}

std::string Session::ReadInput(const std::string& path) {
  std::string content;
  if (path == "-") {
    content.assign(std::istreambuf_iterator<char>(std::cin), {});
  } else {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError(fmt::format("cannot open '{}'", path));
    content.assign(std::istreambuf_iterator<char>(in), {});
  }
  inputs_.push_back({{"path", path}, {"sha256", Sha256Hex(content)}, {"bytes", content.size()}});
  return content;
}

void Session::NoteInput(const std::string& path) { ReadInput(path); }

Dataset Session::LoadData(const std::string& path, const LoadOptions& options) {
  std::istringstream in(ReadInput(path));
  Dataset data;
  try {
    data = ParseDataset(in, options);
  } catch (const DataError& ex) {
    throw DataError(fmt::format("{}: {}", path, ex.what()));
  }
  for (const auto& w : data.warnings) std::cerr << "warning: " << path << ": " << w << "\n";
  Record("warnings:" + path, data.warnings);
  return data;
}

void Session::WriteOutput(const std::string& path, const std::string& content) {
  if (path.empty() || path == "-") {
    std::cout << content;
    std::cout.flush();
    return;
  }
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw DataError(fmt::format("cannot write '{}'", path));
  out << content;
  if (!out) throw DataError(fmt::format("write to '{}' failed", path));
  outputs_.push_back(path);
  run_["output_sha256"][path] = Sha256Hex(content);
}

void Session::Record(const std::string& key, nlohmann::json value) {
  run_[key] = std::move(value);
}

void Session::WatchClient(std::string role, std::function<HttpStats()> stats) {
  clients_.emplace_back(std::move(role), std::move(stats));
}

nlohmann::json Session::Manifest(int exit_code, const std::string& error) const {
  nlohmann::json clients = nlohmann::json::object();
  for (const auto& [role, stats] : clients_) {
    const HttpStats s = stats();
    clients[role] = {{"requests", s.requests},
                     {"attempts", s.attempts},
                     {"retries", s.retries},
                     {"failures", s.failures}};
  }
  nlohmann::json m = {
      {"tool", "asrec"},
      {"command", command},
      {"config", config_snapshot},
      {"seed", seed},
      {"jobs", jobs},
      {"versions",
       {{"asrec", ASREC_VERSION},
        {"nlohmann_json", fmt::format("{}.{}.{}", NLOHMANN_JSON_VERSION_MAJOR,
                                      NLOHMANN_JSON_VERSION_MINOR,
                                      NLOHMANN_JSON_VERSION_PATCH)},
        {"fmt", FMT_VERSION},
        {"openssl", OPENSSL_VERSION_TEXT},
        {"cli11", CLI11_VERSION}}},
      {"inputs", inputs_},
      {"outputs", outputs_},
      {"run", run_},
      {"endpoints", clients},
      {"exit_code", exit_code},
  };
  if (!error.empty()) m["error"] = error;
  return m;
}

void Session::WriteManifest(int exit_code, const std::string& error) const {
  const std::string path = manifest_path.empty() ? "asrec.manifest.json" : manifest_path;
  std::ofstream out(path, std::ios::trunc);
  if (!out) {
    std::cerr << "warning: cannot write manifest '" << path << "'\n";
    return;
  }
  out << Manifest(exit_code, error).dump(2) << "\n";
}

void EndpointFlags::Add(CLI::App* app) {
  app->add_option("--max-attempts", max_attempts, "Attempts per request, retries included")
      ->check(CLI::PositiveNumber);
  app->add_option("--timeout-ms", timeout_ms, "Per-request timeout")->check(CLI::PositiveNumber);
  app->add_option("--backoff-ms", initial_backoff_ms, "First retry delay")
      ->check(CLI::NonNegativeNumber);
  app->add_option("--max-in-flight", max_in_flight, "Concurrent requests")
      ->check(CLI::PositiveNumber);
}

HttpClientOptions EndpointFlags::Options(const std::string& url, uint64_t seed) const {
  HttpClientOptions o;
  o.base_url = url;
  o.retry.max_attempts = max_attempts;
  o.retry.initial_backoff = std::chrono::milliseconds(initial_backoff_ms);
  o.retry.seed = seed;
  o.timeout = std::chrono::milliseconds(timeout_ms);
  o.max_in_flight = max_in_flight;
  return o;
}

std::unique_ptr<Scorer> MakeScorer(const std::string& url, const EndpointFlags& flags,
                                   Session& session) {
  if (url.empty()) {
    session.Record("scorer", {{"backend", "toy"}, {"name", ToyScorer().Info().name}});
    return std::make_unique<ToyScorer>();
  }
  auto scorer = std::make_unique<HttpScorer>(flags.Options(url, session.seed));
  auto* raw = scorer.get();
  session.WatchClient("scorer", [raw] { return raw->stats(); });
  session.Record("scorer", {{"backend", "http"}, {"url", url}});
  return scorer;
}

std::unique_ptr<HttpChatClient> MakeChatClient(const std::string& url,
                                               const EndpointFlags& flags,
                                               Session& session) {
  HttpClientOptions o = flags.Options(url, session.seed);
  if (const char* key = std::getenv("ASREC_API_KEY")) o.bearer_token = key;
  auto client = std::make_unique<HttpChatClient>(std::move(o));
  auto* raw = client.get();
  session.WatchClient("chat", [raw] { return raw->stats(); });
  session.Record("chat_endpoint", url);
  return client;
}

void ParallelFor(size_t n, int jobs, const std::function<void(size_t)>& fn) {
  const size_t workers = std::min<size_t>(n, static_cast<size_t>(std::max(jobs, 1)));
  std::vector<std::exception_ptr> errors(n);
  if (workers <= 1) {
    for (size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<size_t> next{0};
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (size_t i = next++; i < n; i = next++) {
        try {
          fn(i);
        } catch (...) {
          errors[i] = std::current_exception();
        }
      }
    });
  }
  for (auto& t : pool) t.join();
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

std::vector<HypLine> ParseHypFile(const std::string& content) {
  std::vector<HypLine> lines;
  std::istringstream in(content);
  int lineno = 0;
  bool json_mode = false;
  for (std::string line; std::getline(in, line);) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    const auto first = line.find_first_not_of(" \t");
    if (lineno == 1) {
      json_mode = first != std::string::npos && line[first] == '{';
    }
    if (!json_mode) {
      lines.push_back({std::nullopt, line});
      continue;
    }
    if (first == std::string::npos) continue;
    try {
      const auto j = nlohmann::json::parse(line);
      lines.push_back({j.at("id").get<std::string>(), j.at("text").get<std::string>()});
    } catch (const nlohmann::json::exception& ex) {
      throw DataError(fmt::format("line {}: {}", lineno, ex.what()));
    }
  }
  return lines;
}

std::vector<std::string> MatchHyps(const std::vector<HypLine>& lines,
                                   const std::vector<Utterance>& utts) {
  std::vector<std::string> texts;
  texts.reserve(utts.size());
  const bool by_id = !lines.empty() && lines.front().id.has_value();
  if (!by_id) {
    if (lines.size() != utts.size()) {
      throw DataError(fmt::format("{} hypotheses for {} utterances", lines.size(), utts.size()));
    }
    for (const auto& l : lines) texts.push_back(l.text);
    return texts;
  }
  std::unordered_map<std::string, const std::string*> index;
  for (const auto& l : lines) {
    if (!index.emplace(*l.id, &l.text).second) {
      throw DataError(fmt::format("duplicate hypothesis id '{}'", *l.id));
    }
  }
  for (const auto& u : utts) {
    auto it = index.find(u.id);
    if (it == index.end()) throw DataError(fmt::format("no hypothesis for '{}'", u.id));
    texts.push_back(*it->second);
  }
  return texts;
}

std::string ToJsonl(const std::vector<nlohmann::json>& records) {
  std::string out;
  for (const auto& r : records) {
    out += r.dump();
    out += '\n';
  }
  return out;
}

nlohmann::json CountsJson(const AlignmentCounts& c) {
  return {{"cor", c.cor}, {"sub", c.sub}, {"del", c.del}, {"ins", c.ins}, {"ref_len", c.ref_len}};
}

double Pct2(double value) { return RoundHalfAway(value, 2); }

}  // namespace asrec::cli
