// Copyright 2026 The fairscore Authors
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

#pragma once

#include <chrono>
#include <condition_variable>
#include <cstddef>
#include <deque>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <set>
#include <string>
#include <thread>
#include <unordered_map>
#include <vector>

#include "fairscore/io.hpp"

namespace fairscore {

struct HttpRequest {
  std::string method;  // GET, POST, OPTIONS
  std::string path;
  std::string body;
  std::string content_type;
  std::multimap<std::string, std::string> query;
};

struct HttpResponse {
  int status = 200;
  std::string body;
  std::string content_type = "application/json";
  std::map<std::string, std::string> headers;
};

struct ServiceOptions {
  using Clock = std::chrono::steady_clock;

  std::chrono::seconds ttl{3600};             // idle lifetime of a session
  std::size_t workers = 2;                    // concurrent estimator jobs
  std::size_t max_pending = 64;               // queued jobs before 503
  std::size_t threads_per_job = 1;            // sampling threads inside one job
  std::chrono::milliseconds async_after{1000};  // longer jobs answer 202 + job id
  std::string cors_origin = "*";
  std::function<Clock::time_point()> clock = [] { return Clock::now(); };
};

// In-memory session store plus the JSON endpoints. Transport-independent:
// handle() is what the HTTP server calls for every request.
class Service {
 public:
  explicit Service(ServiceOptions options = {});
  ~Service();
  Service(const Service&) = delete;
  Service& operator=(const Service&) = delete;

  HttpResponse handle(const HttpRequest& request);

  // Drops idle sessions; their ids keep answering 410.
  void purge_expired();
  std::size_t session_count() const;

 private:
  using Clock = ServiceOptions::Clock;

  struct Session {
    std::shared_ptr<const Dataset> dataset;
    Clock::time_point created;
    Clock::time_point last_used;
  };

  struct Job;

  HttpResponse create_session(const HttpRequest& request);
  HttpResponse progress(const std::string& session_id, const std::string& job_id);
  HttpResponse run_job(const std::string& session_id, const std::string& kind,
                       std::shared_ptr<const Dataset> dataset, Json body);
  // Looks the session up and refreshes its idle timer; fills `error` on failure.
  std::shared_ptr<const Dataset> touch(const std::string& id, HttpResponse& error);
  void worker_loop();

  ServiceOptions options_;

  mutable std::mutex sessions_mutex_;
  std::unordered_map<std::string, Session> sessions_;
  std::set<std::string> expired_;

  std::mutex jobs_mutex_;
  std::condition_variable jobs_cv_;
  std::deque<std::shared_ptr<Job>> queue_;
  std::unordered_map<std::string, std::shared_ptr<Job>> jobs_;
  std::deque<std::string> finished_;
  std::size_t next_job_ = 1;
  bool stopping_ = false;
  std::vector<std::thread> workers_;
};

// Serves `service` over HTTP until the process is stopped. Throws kIoError when
// the address cannot be bound.
void serve(Service& service, const std::string& host, int port);

}  // namespace fairscore
