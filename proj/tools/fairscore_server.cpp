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

#include <CLI11.hpp>

#include <iostream>

#include "fairscore/error.hpp"
#include "fairscore/service.hpp"

int main(int argc, char** argv) {
  CLI::App app("HTTP service for the fairscore estimators", "fairscore-server");
  std::string host = "127.0.0.1";
  int port = 8080;
  long ttl = 3600;
  fairscore::ServiceOptions options;
  app.add_option("--host", host, "Bind address")->capture_default_str();
  app.add_option("--port", port, "Bind port")->capture_default_str()->check(CLI::Range(1, 65535));
  app.add_option("--ttl", ttl, "Idle session lifetime in seconds")
      ->capture_default_str()
      ->check(CLI::PositiveNumber);
  app.add_option("--workers", options.workers, "Concurrent estimator jobs")->capture_default_str();
  app.add_option("--job-threads", options.threads_per_job, "Sampling threads per job")
      ->capture_default_str();
  app.add_option("--cors-origin", options.cors_origin, "Access-Control-Allow-Origin value")
      ->capture_default_str();
  CLI11_PARSE(app, argc, argv);
  options.ttl = std::chrono::seconds(ttl);

  try {
    fairscore::Service service(options);
    std::cerr << "listening on http://" << host << ":" << port << "\n";
    fairscore::serve(service, host, port);
  } catch (const fairscore::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
