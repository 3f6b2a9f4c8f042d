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

#include "fairscore/service.hpp"

#include <httplib.h>

#include <atomic>
#include <random>
#include <sstream>

#include "fairscore/error.hpp"

namespace fairscore {

namespace {

// Malformed request bodies (400); fairscore::Error covers the semantic cases.
struct BadRequest : std::runtime_error {
  using std::runtime_error::runtime_error;
};

HttpResponse json_response(int status, const Json& body) {
  HttpResponse r;
  r.status = status;
  r.body = body.dump(2) + "\n";
  return r;
}

HttpResponse error_response(int status, std::string_view code, const std::string& message) {
  return json_response(status, {{"schema_version", kSchemaVersion},
                                {"error", {{"code", code}, {"message", message}}}});
}

HttpResponse report_response(int status, const std::string& kind, Json payload, Json metadata) {
  HttpResponse r;
  r.status = status;
  r.body = export_report({kind, std::move(payload), std::move(metadata)}, ReportFormat::kJson);
  return r;
}

std::vector<std::string> split_path(const std::string& path) {
  std::vector<std::string> parts;
  std::string current;
  for (const char c : path) {
    if (c == '/') {
      if (!current.empty()) parts.push_back(std::move(current));
      current.clear();
    } else {
      current += c;
    }
  }
  if (!current.empty()) parts.push_back(std::move(current));
  return parts;
}

std::vector<std::string> split_list(const std::string& text) {
  std::vector<std::string> out;
  std::stringstream in(text);
  std::string item;
  while (std::getline(in, item, ',')) {
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

// ---- body field access ----------------------------------------------------

const Json* field(const Json& body, const char* name) {
  const auto it = body.find(name);
  return it == body.end() || it->is_null() ? nullptr : &*it;
}

double number(const Json& body, const char* name, double fallback) {
  const Json* v = field(body, name);
  if (v == nullptr) return fallback;
  if (!v->is_number()) throw BadRequest(std::string("'") + name + "' must be a number");
  return v->get<double>();
}

std::uint64_t count(const Json& body, const char* name, std::uint64_t fallback) {
  const Json* v = field(body, name);
  if (v == nullptr) return fallback;
  if (!v->is_number_unsigned()) {
    throw BadRequest(std::string("'") + name + "' must be a non-negative integer");
  }
  return v->get<std::uint64_t>();
}

std::string text(const Json& body, const char* name, const std::string& fallback) {
  const Json* v = field(body, name);
  if (v == nullptr) return fallback;
  if (!v->is_string()) throw BadRequest(std::string("'") + name + "' must be a string");
  return v->get<std::string>();
}

std::vector<std::string> strings(const Json& body, const char* name) {
  const Json* v = field(body, name);
  if (v == nullptr) return {};
  if (v->is_string()) return split_list(v->get<std::string>());
  if (!v->is_array()) throw BadRequest(std::string("'") + name + "' must be a list of strings");
  std::vector<std::string> out;
  for (const Json& item : *v) {
    if (!item.is_string()) throw BadRequest(std::string("'") + name + "' must be a list of strings");
    out.push_back(item.get<std::string>());
  }
  return out;
}

Vector weights(const Json& body) {
  const Json* v = field(body, "weights");
  if (v == nullptr || !v->is_array() || v->empty()) {
    throw BadRequest("'weights' must be a non-empty array of numbers");
  }
  Vector w;
  for (const Json& x : *v) {
    if (!x.is_number()) throw BadRequest("'weights' must be a non-empty array of numbers");
    w.push_back(x.get<double>());
  }
  return w;
}

RegionOfInterest region(const Json& body, const Vector& w) {
  const Json* theta = field(body, "theta");
  const Json* cos_sim = field(body, "cos_sim");
  if ((theta == nullptr) == (cos_sim == nullptr)) {
    throw BadRequest("exactly one of 'theta' or 'cos_sim' is required");
  }
  if (theta != nullptr) return RegionOfInterest::around(w, number(body, "theta", 0.0));
  return RegionOfInterest::from_cosine_similarity(w, number(body, "cos_sim", 0.0));
}

std::vector<FairnessConstraint> constraints(const Json& body) {
  const Json* v = field(body, "constraints");
  if (v == nullptr) return {};
  if (!v->is_array()) throw BadRequest("'constraints' must be an array");
  std::vector<FairnessConstraint> out;
  for (const Json& c : *v) {
    if (c.is_string()) {
      out.push_back(parse_constraint(c.get<std::string>()));
    } else if (c.is_object()) {
      FairnessConstraint fc;
      fc.group = text(c, "group", "");
      if (fc.group.empty()) throw BadRequest("constraint objects need a 'group'");
      fc.k = count(c, "k", 0);
      fc.min_count = count(c, "min", 0);
      fc.max_count = count(c, "max", fc.k);
      fc.validate();
      out.push_back(std::move(fc));
    } else {
      throw BadRequest("constraints are 'GROUP:K:MIN[:MAX]' strings or objects");
    }
  }
  return out;
}

RankingScope scope(const Json& body) {
  const Json* v = field(body, "scope");
  std::string kind = "full";
  std::uint64_t k = count(body, "k", 0);
  bool as_set = true;
  if (v != nullptr && v->is_object()) {
    kind = text(*v, "kind", "full");
    k = count(*v, "k", k);
    const Json* set = field(*v, "as_set");
    if (set != nullptr) {
      if (!set->is_boolean()) throw BadRequest("'scope.as_set' must be a boolean");
      as_set = set->get<bool>();
    }
  } else if (v != nullptr) {
    kind = text(body, "scope", "full");
  }
  if (kind == "full") return RankingScope::full();
  if (kind == "topk-order") as_set = false;
  if (kind != "topk" && kind != "topk-set" && kind != "topk-order") {
    throw BadRequest("unknown scope '" + kind + "'");
  }
  if (k == 0) throw BadRequest("top-k scope needs k >= 1");
  return RankingScope::top_k(k, as_set);
}

// The body parsed, but its content does not make sense for this dataset.
constexpr int kUnprocessable = 422;

std::string new_session_id() {
  static std::mutex mutex;
  static std::mt19937_64 engine{std::random_device{}()};
  const std::lock_guard lock(mutex);
  std::ostringstream s;
  s << std::hex;
  for (int i = 0; i < 2; ++i) {
    s.width(16);
    s.fill('0');
    s << engine();
  }
  return s.str();
}

}  // namespace

struct Service::Job {
  enum class Status { kQueued, kRunning, kDone, kFailed };

  std::string id;
  std::string session;
  std::function<HttpResponse(const RunOptions&)> work;
  std::atomic<std::size_t> done{0};
  std::atomic<std::size_t> total{0};
  Status status = Status::kQueued;  // guarded by jobs_mutex_
  HttpResponse result;              // guarded by jobs_mutex_
  std::condition_variable finished;

  double fraction() const {
    const std::size_t t = total.load();
    return t == 0 ? 0.0 : static_cast<double>(done.load()) / static_cast<double>(t);
  }
};

Service::Service(ServiceOptions options) : options_(std::move(options)) {
  if (options_.workers == 0) options_.workers = 1;
  if (options_.threads_per_job == 0) options_.threads_per_job = 1;
  for (std::size_t i = 0; i < options_.workers; ++i) {
    workers_.emplace_back([this] { worker_loop(); });
  }
}

Service::~Service() {
  {
    const std::lock_guard lock(jobs_mutex_);
    stopping_ = true;
  }
  jobs_cv_.notify_all();
  for (std::thread& t : workers_) t.join();
}

void Service::worker_loop() {
  for (;;) {
    std::shared_ptr<Job> job;
    {
      std::unique_lock lock(jobs_mutex_);
      jobs_cv_.wait(lock, [this] { return stopping_ || !queue_.empty(); });
      if (stopping_) return;
      job = std::move(queue_.front());
      queue_.pop_front();
      job->status = Job::Status::kRunning;
    }
    RunOptions run;
    run.threads = options_.threads_per_job;
    run.progress = [job](std::size_t done, std::size_t total) {
      job->total = total;
      job->done = done;
    };
    HttpResponse result;
    bool ok = true;
    try {
      result = job->work(run);
    } catch (const Error& e) {
      result = error_response(kUnprocessable, to_string(e.code()), e.what());
      ok = false;
    } catch (const std::exception& e) {
      result = error_response(500, "Internal", e.what());
      ok = false;
    }
    {
      const std::lock_guard lock(jobs_mutex_);
      job->result = std::move(result);
      job->status = ok ? Job::Status::kDone : Job::Status::kFailed;
      finished_.push_back(job->id);
      // Keep a bounded history of finished jobs for polling.
      while (finished_.size() > 1024) {
        jobs_.erase(finished_.front());
        finished_.pop_front();
      }
    }
    job->finished.notify_all();
  }
}

std::size_t Service::session_count() const {
  const std::lock_guard lock(sessions_mutex_);
  return sessions_.size();
}

void Service::purge_expired() {
  const auto now = options_.clock();
  const std::lock_guard lock(sessions_mutex_);
  for (auto it = sessions_.begin(); it != sessions_.end();) {
    if (now - it->second.last_used > options_.ttl) {
      expired_.insert(it->first);
      it = sessions_.erase(it);
    } else {
      ++it;
    }
  }
}

std::shared_ptr<const Dataset> Service::touch(const std::string& id, HttpResponse& error) {
  const auto now = options_.clock();
  const std::lock_guard lock(sessions_mutex_);
  const auto it = sessions_.find(id);
  if (it != sessions_.end() && now - it->second.last_used > options_.ttl) {
    expired_.insert(id);
    sessions_.erase(it);
  } else if (it != sessions_.end()) {
    it->second.last_used = now;
    return it->second.dataset;
  }
  if (expired_.count(id) > 0) {
    error = error_response(410, "SessionExpired", "session '" + id + "' has expired");
  } else {
    error = error_response(404, "UnknownSession", "no session '" + id + "'");
  }
  return nullptr;
}

HttpResponse Service::handle(const HttpRequest& request) {
  HttpResponse response;
  if (request.method == "OPTIONS") {
    response.status = 204;
    response.content_type.clear();
    response.headers["Access-Control-Allow-Methods"] = "GET, POST, OPTIONS";
    response.headers["Access-Control-Allow-Headers"] = "Content-Type";
    response.headers["Access-Control-Max-Age"] = "600";
  } else {
    const std::vector<std::string> parts = split_path(request.path);
    auto not_allowed = [] { return error_response(405, "MethodNotAllowed", "method not allowed"); };
    try {
      if (parts.size() == 1 && parts[0] == "datasets") {
        response = request.method == "POST" ? create_session(request) : not_allowed();
      } else if (parts.size() == 2 && parts[0] == "sessions") {
        if (request.method != "GET") {
          response = not_allowed();
        } else if (auto data = touch(parts[1], response)) {
          Json info = dataset_json(*data);
          info["session_id"] = parts[1];
          info["schema_version"] = kSchemaVersion;
          response = json_response(200, info);
        }
      } else if (parts.size() == 4 && parts[0] == "sessions" && parts[2] == "progress") {
        response = request.method == "GET" ? progress(parts[1], parts[3]) : not_allowed();
      } else if (parts.size() == 3 && parts[0] == "sessions") {
        static const std::set<std::string> kOps = {"rank", "up", "suggest", "audit", "stable"};
        if (kOps.count(parts[2]) == 0) {
          response = error_response(404, "NotFound", "no endpoint " + request.path);
        } else if (request.method != "POST") {
          response = not_allowed();
        } else if (auto data = touch(parts[1], response)) {
          Json body;
          try {
            body = request.body.empty() ? Json::object() : Json::parse(request.body);
          } catch (const Json::exception& e) {
            throw BadRequest(std::string("body is not valid JSON: ") + e.what());
          }
          if (!body.is_object()) throw BadRequest("body must be a JSON object");
          response = run_job(parts[1], parts[2], std::move(data), std::move(body));
        }
      } else {
        response = error_response(404, "NotFound", "no endpoint " + request.path);
      }
    } catch (const BadRequest& e) {
      response = error_response(400, "BadRequest", e.what());
    } catch (const Error& e) {
      response = error_response(kUnprocessable, to_string(e.code()), e.what());
    } catch (const std::exception& e) {
      response = error_response(500, "Internal", e.what());
    }
  }
  response.headers["Access-Control-Allow-Origin"] = options_.cors_origin;
  return response;
}

HttpResponse Service::create_session(const HttpRequest& request) {
  IngestConfig config;
  std::string csv;
  const bool json_body = request.content_type.find("json") != std::string::npos;
  if (json_body) {
    Json body;
    try {
      body = Json::parse(request.body);
    } catch (const Json::exception& e) {
      throw BadRequest(std::string("body is not valid JSON: ") + e.what());
    }
    if (!body.is_object()) throw BadRequest("body must be a JSON object");
    csv = text(body, "csv", "");
    const Json* cfg = field(body, "config");
    const Json& c = cfg != nullptr ? *cfg : body;
    if (!c.is_object()) throw BadRequest("'config' must be an object");
    config.scoring_columns = strings(c, "scoring_columns");
    if (const std::string id = text(c, "id_column", ""); !id.empty()) config.id_column = id;
    if (const std::string s = text(c, "sensitive_column", ""); !s.empty()) config.sensitive_column = s;
    config.declared_groups = strings(c, "declared_groups");
    const std::string norm = text(c, "normalization", "none");
    if (norm != "none" && norm != "minmax" && norm != "min-max") {
      throw BadRequest("unknown normalization '" + norm + "'");
    }
    config.normalization = parse_normalization(norm);
  } else {
    csv = request.body;
    auto one = [&](const char* key) -> std::string {
      const auto it = request.query.find(key);
      return it == request.query.end() ? std::string() : it->second;
    };
    config.scoring_columns = split_list(one("scoring_cols"));
    if (const std::string id = one("id_col"); !id.empty()) config.id_column = id;
    if (const std::string s = one("sensitive"); !s.empty()) config.sensitive_column = s;
    const auto [lo, hi] = request.query.equal_range("declare_group");
    for (auto it = lo; it != hi; ++it) {
      for (std::string& g : split_list(it->second)) config.declared_groups.push_back(std::move(g));
    }
    const std::string norm = one("normalize").empty() ? "none" : one("normalize");
    if (norm != "none" && norm != "minmax" && norm != "min-max") {
      throw BadRequest("unknown normalization '" + norm + "'");
    }
    config.normalization = parse_normalization(norm);
  }

  std::shared_ptr<const Dataset> data;
  try {
    data = std::make_shared<const Dataset>(parse_csv(csv, config));
  } catch (const Error& e) {
    // A dataset that cannot be read is a malformed upload.
    return error_response(is_data_error(e.code()) ? 400 : 422, to_string(e.code()), e.what());
  }

  const auto now = options_.clock();
  const std::string id = new_session_id();
  {
    const std::lock_guard lock(sessions_mutex_);
    sessions_[id] = Session{data, now, now};
  }
  Json out = dataset_json(*data);
  out["session_id"] = id;
  out["schema_version"] = kSchemaVersion;
  if (const auto& info = data->normalization(); info) {
    out["constant_columns"] = info->constant_columns;
  }
  return json_response(201, out);
}

HttpResponse Service::run_job(const std::string& session_id, const std::string& kind,
                              std::shared_ptr<const Dataset> dataset, Json body) {
  const Dataset& data = *dataset;
  Json metadata = {{"session_id", session_id}, {"endpoint", kind}, {"request", body},
                   {"dataset", dataset_json(data)}};
  const Vector w = weights(body);

  if (kind == "rank") {
    const auto rules = constraints(body);
    const Ranking r = rank(data, w);
    Json payload = ranking_json(r, data);
    std::size_t k = count(body, "k", 0);
    for (const FairnessConstraint& c : rules) k = std::max(k, c.k);
    if (k == 0) k = data.size();
    payload["weights"] = w;
    payload["k"] = k;
    payload["group_counts"] = group_counts(r, data, k);
    if (!rules.empty()) payload["fair"] = check_fairness(r, data, rules);
    return report_response(200, "ranking", std::move(payload), std::move(metadata));
  }

  // Validate everything that does not need sampling before queueing.
  const RegionOfInterest roi = region(body, w);
  const std::uint64_t seed = count(body, "seed", 0);
  const std::size_t gamma = count(body, "gamma", kDefaultGamma);
  metadata["roi"] = region_json(roi);
  metadata["seed"] = seed;
  std::function<HttpResponse(const RunOptions&)> work;

  if (kind == "up") {
    auto rules = constraints(body);
    const std::size_t s = count(body, "samples", 10000);
    const double alpha = number(body, "alpha", 0.05);
    work = [=](const RunOptions& run) {
      RngStream rng(seed);
      RunOptions o = run;
      o.gamma = gamma;
      return report_response(200, "up", to_json(estimate_up(data, rules, roi, s, alpha, rng, o)),
                             metadata);
    };
  } else if (kind == "suggest") {
    auto rules = constraints(body);
    const std::size_t budget = count(body, "budget", count(body, "samples", 10000));
    const std::string mode_name = text(body, "mode", "closest");
    if (mode_name != "closest" && mode_name != "first-hit") {
      throw BadRequest("unknown mode '" + mode_name + "'");
    }
    const SuggestMode mode = mode_name == "closest" ? SuggestMode::kClosest : SuggestMode::kFirstHit;
    work = [=](const RunOptions& run) {
      RngStream rng(seed);
      RunOptions o = run;
      o.gamma = gamma;
      Json payload = to_json(suggest_fair(data, rules, roi, budget, rng, mode, o), data);
      payload["mode"] = mode_name;
      return report_response(200, "suggestion", std::move(payload), metadata);
    };
  } else if (kind == "audit") {
    const std::size_t s = count(body, "samples", 10000);
    const double alpha = number(body, "alpha", 0.05);
    const RankingScope sc = scope(body);
    work = [=](const RunOptions& run) {
      RngStream rng(seed);
      RunOptions o = run;
      o.gamma = gamma;
      return report_response(
          200, "audit", to_json(audit_reference(data, w, roi, s, alpha, rng, sc, o), data), metadata);
    };
  } else {  // stable
    const std::size_t s = count(body, "samples", 10000);
    const std::size_t top = count(body, "top", 10);
    const double alpha = number(body, "alpha", 0.05);
    const RankingScope sc = scope(body);
    work = [=](const RunOptions& run) {
      RngStream rng(seed);
      RunOptions o = run;
      o.gamma = gamma;
      return report_response(
          200, "stability", to_json(stable_rankings(data, roi, s, top, sc, rng, alpha, o), data),
          metadata);
    };
  }

  auto job = std::make_shared<Job>();
  // The closure keeps the dataset alive even if the session expires mid-run.
  job->work = [dataset, work = std::move(work)](const RunOptions& run) { return work(run); };
  job->session = session_id;
  std::unique_lock lock(jobs_mutex_);
  if (queue_.size() >= options_.max_pending) {
    return error_response(503, "Busy", "too many pending jobs; retry later");
  }
  job->id = "j" + std::to_string(next_job_++);
  jobs_[job->id] = job;
  queue_.push_back(job);
  jobs_cv_.notify_one();
  const bool finished = job->finished.wait_for(lock, options_.async_after, [&] {
    return job->status == Job::Status::kDone || job->status == Job::Status::kFailed;
  });
  if (finished) return job->result;
  return json_response(202, {{"schema_version", kSchemaVersion},
                             {"job", job->id},
                             {"status", job->status == Job::Status::kQueued ? "queued" : "running"},
                             {"done_fraction", job->fraction()},
                             {"progress", "/sessions/" + session_id + "/progress/" + job->id}});
}

HttpResponse Service::progress(const std::string& session_id, const std::string& job_id) {
  std::shared_ptr<Job> job;
  {
    const std::lock_guard lock(jobs_mutex_);
    const auto it = jobs_.find(job_id);
    if (it != jobs_.end() && it->second->session == session_id) job = it->second;
  }
  if (job == nullptr) {
    HttpResponse missing;
    // An expired session answers 410 even for its old jobs.
    if (touch(session_id, missing) == nullptr) return missing;
    return error_response(404, "UnknownJob", "no job '" + job_id + "' in this session");
  }
  const std::lock_guard lock(jobs_mutex_);
  Json out = {{"schema_version", kSchemaVersion}, {"job", job->id}};
  switch (job->status) {
    case Job::Status::kQueued:
      out["status"] = "queued";
      out["done_fraction"] = 0.0;
      break;
    case Job::Status::kRunning:
      out["status"] = "running";
      out["done_fraction"] = job->fraction();
      break;
    case Job::Status::kDone:
      out["status"] = "done";
      out["done_fraction"] = 1.0;
      out["result"] = Json::parse(job->result.body);
      break;
    case Job::Status::kFailed:
      out["status"] = "failed";
      out["done_fraction"] = job->fraction();
      out["http_status"] = job->result.status;
      out["error"] = Json::parse(job->result.body).at("error");
      break;
  }
  return json_response(200, out);
}

void serve(Service& service, const std::string& host, int port) {
  httplib::Server server;
  auto bridge = [&service](const httplib::Request& req, httplib::Response& res) {
    HttpRequest request;
    request.method = req.method;
    request.path = req.path;
    request.body = req.body;
    request.content_type = req.get_header_value("Content-Type");
    for (const auto& [key, value] : req.params) request.query.emplace(key, value);
    const HttpResponse response = service.handle(request);
    res.status = response.status;
    for (const auto& [key, value] : response.headers) res.set_header(key, value);
    if (!response.content_type.empty()) res.set_content(response.body, response.content_type);
  };
  server.Get(".*", bridge);
  server.Post(".*", bridge);
  server.Options(".*", bridge);
  if (!server.bind_to_port(host, port)) {
    throw Error(ErrorCode::kIoError, "cannot bind " + host + ":" + std::to_string(port));
  }
  server.listen_after_bind();
}

}  // namespace fairscore
