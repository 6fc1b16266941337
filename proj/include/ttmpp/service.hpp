// Copyright 2026 The ttmpp Authors
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

// HTTP JSON API over a ScenarioStore, with solves run as background jobs.
//
//   GET    /healthz
//   GET    /api/instances
//   POST   /api/instances                    instance document -> {"id"}
//   GET    /api/instances/{id}
//   GET    /api/instances/{id}/schedule      obsolete schedule as triples
//   GET    /api/instances/{id}/scenarios
//   POST   /api/instances/{id}/scenarios     scenario -> {"id"}
//   GET    /api/scenarios/{id}
//   DELETE /api/scenarios/{id}
//   POST   /api/scenarios/{id}/solve         option overrides -> {"id"} (202)
//   GET    /api/jobs/{id}
//
// Errors are {"code", "message", "details"}. No authentication.

#ifndef TTMPP_SERVICE_HPP_
#define TTMPP_SERVICE_HPP_

#include <httplib.h>

#include <algorithm>
#include <chrono>
#include <condition_variable>
#include <deque>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "ttmpp/io.hpp"
#include "ttmpp/model.hpp"
#include "ttmpp/report.hpp"
#include "ttmpp/solver.hpp"
#include "ttmpp/store.hpp"

namespace ttmpp {

enum class JobState { kQueued, kRunning, kDone, kFailed };

inline const char* to_string(JobState s) {
  switch (s) {
    case JobState::kQueued: return "Queued";
    case JobState::kRunning: return "Running";
    case JobState::kDone: return "Done";
    case JobState::kFailed: return "Failed";
  }
  return "?";
}

struct SolveJob {
  std::string id;
  std::string scenario_id;
  SolveOptions options;
  JobState state = JobState::kQueued;
  std::optional<Solution> solution;  // set when Done
  std::optional<SwapReport> report;  // set when Done with an incumbent
  std::string error;                 // set when Failed
};

inline std::size_t default_worker_count() {
  const unsigned hw = std::thread::hardware_concurrency();
  return std::clamp<std::size_t>(hw, 1, 4);
}

// Runs one job to completion. Infeasible is a result, not a failure.
inline void run_solve_job(const Instance& inst, SolveJob& job) {
  Solution sol = solve(build_model(inst), job.options);
  if (sol.status == SolveStatus::kError) {
    job.state = JobState::kFailed;
    job.error = sol.message.empty() ? "solver error" : sol.message;
    return;
  }
  if (sol.has_incumbent) job.report = diff_schedules(inst, sol);
  job.solution = std::move(sol);
  job.state = JobState::kDone;
}

// In-memory job table with a fixed pool of worker threads.
class JobQueue {
 public:
  explicit JobQueue(std::size_t workers = default_worker_count()) {
    workers = std::max<std::size_t>(workers, 1);
    for (std::size_t k = 0; k < workers; ++k) {
      threads_.emplace_back([this] { work(); });
    }
  }
  ~JobQueue() {
    {
      std::lock_guard lock(mutex_);
      stopping_ = true;
    }
    wake_.notify_all();
    for (auto& t : threads_) t.join();
  }
  JobQueue(const JobQueue&) = delete;
  JobQueue& operator=(const JobQueue&) = delete;

  std::size_t worker_count() const { return threads_.size(); }

  std::string submit(std::string scenario_id, Instance inst,
                     SolveOptions options) {
    check_options(options);
    options.on_node = nullptr;
    std::string id;
    {
      std::lock_guard lock(mutex_);
      id = "job-" + std::to_string(next_id_++);
      auto& entry = jobs_[id];
      entry.job.id = id;
      entry.job.scenario_id = std::move(scenario_id);
      entry.job.options = std::move(options);
      entry.instance = std::make_shared<const Instance>(std::move(inst));
      pending_.push_back(id);
    }
    wake_.notify_one();
    return id;
  }

  // Snapshot of the job, or nullopt for an unknown id.
  std::optional<SolveJob> get(const std::string& id) const {
    std::lock_guard lock(mutex_);
    auto it = jobs_.find(id);
    if (it == jobs_.end()) return std::nullopt;
    return it->second.job;
  }

  // Blocks until the job is Done or Failed, or the timeout passes.
  std::optional<SolveJob> wait(const std::string& id,
                               std::chrono::milliseconds timeout) const {
    std::unique_lock lock(mutex_);
    auto finished = [&] {
      auto it = jobs_.find(id);
      return it == jobs_.end() || it->second.job.state == JobState::kDone ||
             it->second.job.state == JobState::kFailed;
    };
    done_.wait_for(lock, timeout, finished);
    auto it = jobs_.find(id);
    if (it == jobs_.end()) return std::nullopt;
    return it->second.job;
  }

 private:
  struct Entry {
    SolveJob job;
    std::shared_ptr<const Instance> instance;
  };

  void work() {
    for (;;) {
      std::string id;
      std::shared_ptr<const Instance> inst;
      SolveJob job;
      {
        std::unique_lock lock(mutex_);
        wake_.wait(lock, [&] { return stopping_ || !pending_.empty(); });
        if (stopping_) return;
        id = pending_.front();
        pending_.pop_front();
        auto& entry = jobs_.at(id);
        entry.job.state = JobState::kRunning;
        job = entry.job;
        inst = std::move(entry.instance);
      }
      try {
        run_solve_job(*inst, job);
      } catch (const std::exception& e) {
        job.state = JobState::kFailed;
        job.error = e.what();
      }
      {
        std::lock_guard lock(mutex_);
        jobs_.at(id).job = std::move(job);
      }
      done_.notify_all();
    }
  }

  mutable std::mutex mutex_;
  std::condition_variable wake_;
  mutable std::condition_variable done_;
  std::map<std::string, Entry> jobs_;
  std::deque<std::string> pending_;
  long next_id_ = 1;
  bool stopping_ = false;
  std::vector<std::thread> threads_;
};

// ---------------------------------------------------------------------------
// JSON views

inline json job_to_json(const SolveJob& job) {
  json j = {{"id", job.id},
            {"scenario_id", job.scenario_id},
            {"state", to_string(job.state)},
            {"options", options_to_json(job.options)}};
  j["result"] = nullptr;
  if (job.solution) {
    j["result"] = {{"status", to_string(job.solution->status)},
                   {"solution", solution_to_json(*job.solution)},
                   {"report", job.report ? report_to_json(*job.report)
                                         : json(nullptr)}};
  }
  j["error"] = job.state == JobState::kFailed ? json(job.error) : json(nullptr);
  return j;
}

inline json schedule_to_json(const std::string& id, const Instance& inst) {
  auto entities = [](const auto& items) {
    json out = json::array();
    for (const auto& e : items) out.push_back({{"id", e.id}, {"label", e.label}});
    return out;
  };
  json triples = json::array();
  const auto& x = inst.obsolete_schedule;
  for (std::size_t i = 0; i < x.dim0(); ++i) {
    for (std::size_t j = 0; j < x.dim1(); ++j) {
      for (std::size_t t = 0; t < x.dim2(); ++t) {
        if (!x(i, j, t)) continue;
        triples.push_back({{"course", inst.courses[i].id},
                           {"faculty", inst.faculty[j].id},
                           {"slot", inst.slots[t].id}});
      }
    }
  }
  return {{"instance_id", id},
          {"courses", entities(inst.courses)},
          {"faculty", entities(inst.faculty)},
          {"slots", entities(inst.slots)},
          {"triples", triples}};
}

// ---------------------------------------------------------------------------
// Server

class ApiError : public std::runtime_error {
 public:
  ApiError(int status, std::string code, const std::string& message,
           json details = nullptr)
      : std::runtime_error(message),
        status_(status),
        code_(std::move(code)),
        details_(std::move(details)) {}
  int status() const { return status_; }
  const std::string& code() const { return code_; }
  const json& details() const { return details_; }

 private:
  int status_;
  std::string code_;
  json details_;
};

class Service {
 public:
  explicit Service(ScenarioStore& store,
                   std::size_t workers = default_worker_count())
      : store_(store), jobs_(workers) {
    routes();
  }
  Service(const Service&) = delete;
  Service& operator=(const Service&) = delete;

  httplib::Server& server() { return server_; }
  JobQueue& jobs() { return jobs_; }

  bool listen(const std::string& host, int port) {
    return server_.listen(host, port);
  }
  // Binds an ephemeral port; serve with listen_after_bind().
  int bind_to_any_port(const std::string& host) {
    return server_.bind_to_any_port(host);
  }
  bool listen_after_bind() { return server_.listen_after_bind(); }
  void stop() { server_.stop(); }
  bool is_running() const { return server_.is_running(); }

 private:
  using Request = httplib::Request;
  using Response = httplib::Response;

  static void send(Response& res, int status, const json& body) {
    res.status = status;
    res.set_content(body.dump(2) + "\n", "application/json");
  }

  static void send_error(Response& res, const ApiError& e) {
    send(res, e.status(),
         {{"code", e.code()}, {"message", e.what()}, {"details", e.details()}});
  }

  static json io_details(const IoError& e) {
    return {{"file", e.file()}, {"row", e.row()}, {"column", e.column()}};
  }

  static json violation_details(const ValidationReport& report) {
    json out = json::array();
    for (const auto& v : report) {
      out.push_back({{"kind", to_string(v.kind)},
                     {"message", v.message},
                     {"indices", v.indices}});
    }
    return {{"violations", out}};
  }

  // Maps library exceptions onto the error envelope.
  template <typename F>
  static void guarded(Response& res, F&& f) {
    try {
      f();
    } catch (const ApiError& e) {
      send_error(res, e);
    } catch (const NotFoundError& e) {
      send_error(res, ApiError(404, "not_found", e.what(),
                               {{"kind", e.kind()}, {"id", e.id()}}));
    } catch (const StoreError& e) {
      send_error(res, ApiError(500, "store_error", e.what()));
    } catch (const InvalidInstanceError& e) {
      send_error(res, ApiError(400, "invalid_instance", e.what(),
                               violation_details(e.report())));
    } catch (const IoError& e) {
      send_error(res, ApiError(400, "invalid_document", e.what(),
                               io_details(e)));
    } catch (const ScenarioError& e) {
      send_error(res, ApiError(400, "invalid_scenario", e.what()));
    } catch (const std::invalid_argument& e) {
      send_error(res, ApiError(400, "invalid_options", e.what()));
    } catch (const std::exception& e) {
      send_error(res, ApiError(500, "internal_error", e.what()));
    }
  }

  static json body_json(const Request& req, const std::string& source,
                        bool allow_empty = false) {
    if (allow_empty &&
        req.body.find_first_not_of(" \t\r\n") == std::string::npos) {
      return nullptr;
    }
    return parse_json_text(req.body, source);
  }

  void routes() {
    server_.Get("/healthz", [](const Request&, Response& res) {
      send(res, 200, {{"status", "ok"}});
    });

    server_.Get("/api/instances", [this](const Request&, Response& res) {
      guarded(res, [&] {
        send(res, 200, {{"instances", store_.list_instances()}});
      });
    });

    server_.Post("/api/instances", [this](const Request& req, Response& res) {
      guarded(res, [&] {
        auto doc = instance_document_from_json(body_json(req, "request body"),
                                               "request body");
        if (doc.metadata.created.empty()) doc.metadata.created = utc_timestamp();
        send(res, 201, {{"id", store_.put_instance(doc)}});
      });
    });

    server_.Get(R"(/api/instances/([^/]+))",
                [this](const Request& req, Response& res) {
                  guarded(res, [&] {
                    const auto doc = store_.get_instance(req.matches[1]);
                    send(res, 200, instance_to_json(doc.instance, doc.metadata));
                  });
                });

    server_.Get(R"(/api/instances/([^/]+)/schedule)",
                [this](const Request& req, Response& res) {
                  guarded(res, [&] {
                    const std::string id = req.matches[1];
                    send(res, 200,
                         schedule_to_json(id, store_.get_instance(id).instance));
                  });
                });

    server_.Get(R"(/api/instances/([^/]+)/scenarios)",
                [this](const Request& req, Response& res) {
                  guarded(res, [&] {
                    const std::string id = req.matches[1];
                    store_.get_instance(id);
                    send(res, 200, {{"scenarios", store_.list_scenarios(id)}});
                  });
                });

    server_.Post(R"(/api/instances/([^/]+)/scenarios)",
                 [this](const Request& req, Response& res) {
                   guarded(res, [&] { post_scenario(req, res); });
                 });

    server_.Get(R"(/api/scenarios/([^/]+))",
                [this](const Request& req, Response& res) {
                  guarded(res, [&] {
                    send(res, 200,
                         scenario_to_json(store_.get_scenario(req.matches[1])));
                  });
                });

    server_.Delete(R"(/api/scenarios/([^/]+))",
                   [this](const Request& req, Response& res) {
                     guarded(res, [&] {
                       store_.delete_scenario(req.matches[1]);
                       res.status = 204;
                     });
                   });

    server_.Post(R"(/api/scenarios/([^/]+)/solve)",
                 [this](const Request& req, Response& res) {
                   guarded(res, [&] { post_solve(req, res); });
                 });

    server_.Get(R"(/api/jobs/([^/]+))",
                [this](const Request& req, Response& res) {
                  guarded(res, [&] {
                    const std::string id = req.matches[1];
                    const auto job = jobs_.get(id);
                    if (!job) {
                      throw ApiError(404, "not_found", "unknown job '" + id + "'",
                                     {{"kind", "job"}, {"id", id}});
                    }
                    send(res, 200, job_to_json(*job));
                  });
                });

    server_.set_error_handler([](const Request& req, Response& res) {
      if (!res.body.empty()) return;
      if (res.status == 404) {
        send_error(res, ApiError(404, "not_found", "no route for " + req.method +
                                                       " " + req.path));
      }
    });
  }

  void post_scenario(const Request& req, Response& res) {
    const std::string base = req.matches[1];
    auto sc = scenario_from_json(body_json(req, "request body"), "request body");
    if (!sc.base_instance.empty() && sc.base_instance != base) {
      throw ApiError(400, "invalid_scenario",
                     "scenario names base instance '" + sc.base_instance +
                         "' but was posted to '" + base + "'");
    }
    sc.base_instance = base;
    const auto edited = apply_scenario(store_.get_instance(base).instance, sc);
    require_valid(edited, "scenario");
    send(res, 201, {{"id", store_.put_scenario(sc)}});
  }

  void post_solve(const Request& req, Response& res) {
    const std::string id = req.matches[1];
    SolveOptions options;
    try {
      options = options_from_json(body_json(req, "request body", true),
                                  SolveOptions{}, "request body");
    } catch (const IoError& e) {
      throw ApiError(400, "invalid_options", e.what(), io_details(e));
    }
    check_options(options);
    const auto sc = store_.get_scenario(id);
    auto inst = apply_scenario(store_.get_instance(sc.base_instance).instance,
                               sc);
    const auto job = jobs_.submit(id, std::move(inst), options);
    res.set_header("Location", "/api/jobs/" + job);
    send(res, 202, {{"id", job}, {"state", to_string(JobState::kQueued)}});
  }

  ScenarioStore& store_;
  JobQueue jobs_;
  httplib::Server server_;
};

}  // namespace ttmpp

#endif  // TTMPP_SERVICE_HPP_
