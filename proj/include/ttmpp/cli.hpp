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

// Command-line front end. run() never calls exit() and writes only to the
// streams it is given, so it can be driven in-process.
//
// Exit codes:
//   0   success, or an Optimal solve
//   1   the instance fails validation
//   2   Infeasible
//   3   LimitReached
//   64  bad arguments or malformed input documents
//   70  solver or internal error
//   74  a file or socket could not be opened, read or written

#ifndef TTMPP_CLI_HPP_
#define TTMPP_CLI_HPP_

#include <CLI11.hpp>
#include <pthread.h>

#include <csignal>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "ttmpp/generator.hpp"
#include "ttmpp/io.hpp"
#include "ttmpp/lp_writer.hpp"
#include "ttmpp/report.hpp"
#include "ttmpp/service.hpp"
#include "ttmpp/solver.hpp"
#include "ttmpp/store.hpp"

namespace ttmpp::cli {

enum ExitCode : int {
  kExitOk = 0,
  kExitInvalidInstance = 1,
  kExitInfeasible = 2,
  kExitLimitReached = 3,
  kExitUsage = 64,
  kExitSoftware = 70,
  kExitIo = 74,
};

inline int exit_code(SolveStatus s) {
  switch (s) {
    case SolveStatus::kOptimal: return kExitOk;
    case SolveStatus::kInfeasible: return kExitInfeasible;
    case SolveStatus::kLimitReached: return kExitLimitReached;
    case SolveStatus::kError: return kExitSoftware;
  }
  return kExitSoftware;
}

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// course@slot[:count], count defaulting to 1. The count suffix is only
// split off when it is all digits, so slot ids may contain ':'.
inline DemandDelta parse_delta_spec(const std::string& spec, int sign) {
  const auto at = spec.rfind('@');
  if (at == std::string::npos || at == 0 || at + 1 == spec.size()) {
    throw UsageError("expected course@slot[:count], got '" + spec + "'");
  }
  std::string course = spec.substr(0, at);
  std::string slot = spec.substr(at + 1);
  int count = 1;
  const auto colon = slot.rfind(':');
  if (colon != std::string::npos) {
    const std::string tail = slot.substr(colon + 1);
    const bool digits =
        !tail.empty() && tail.find_first_not_of("0123456789") == std::string::npos;
    if (digits) {
      if (tail.size() > 6 || std::stoi(tail) == 0) {
        throw UsageError("section count in '" + spec +
                         "' must be between 1 and 999999");
      }
      count = std::stoi(tail);
      slot = slot.substr(0, colon);
    }
  }
  if (slot.empty()) throw UsageError("missing slot in '" + spec + "'");
  return {course, slot, sign * count};
}

struct ListenAddress {
  std::string host;
  int port = 0;
};

// host:port, :port or port; the host defaults to 127.0.0.1.
inline ListenAddress parse_listen_address(const std::string& text) {
  ListenAddress a{"127.0.0.1", 0};
  std::string port = text;
  const auto colon = text.rfind(':');
  if (colon != std::string::npos) {
    if (colon > 0) a.host = text.substr(0, colon);
    port = text.substr(colon + 1);
  }
  if (a.host.size() > 2 && a.host.front() == '[' && a.host.back() == ']') {
    a.host = a.host.substr(1, a.host.size() - 2);
  }
  if (port.empty() || port.size() > 5 ||
      port.find_first_not_of("0123456789") != std::string::npos ||
      std::stoi(port) < 1 || std::stoi(port) > 65535) {
    throw UsageError("invalid listen address '" + text +
                     "' (expected host:port with port 1-65535)");
  }
  a.port = std::stoi(port);
  return a;
}

namespace detail {

inline void emit(const std::string& text, const std::string& path,
                 std::ostream& out) {
  if (path.empty() || path == "-") {
    out << text;
  } else {
    write_text_file(path, text);
  }
}

inline void print_violations(const ValidationReport& report,
                             const std::string& source, std::ostream& err) {
  for (const auto& v : report) {
    err << source << ": " << to_string(v.kind) << ": " << v.message << "\n";
  }
}

struct SolveArgs {
  std::string instance;
  std::string scenario;
  bool no_min_change = false;
  std::optional<double> time_limit;
  std::optional<std::size_t> node_limit;
  std::string report = "plain";
  std::string out;
  std::string solution_out;
};

inline int run_solve(const SolveArgs& a, bool verbose, std::ostream& out,
                     std::ostream& err) {
  Instance inst = load_instance(a.instance);
  if (!a.scenario.empty()) {
    const auto sc = parse_scenario_json(read_text_file(a.scenario), a.scenario);
    inst = apply_scenario(inst, sc);
    require_valid(inst, a.scenario);
  }
  SolveOptions options;
  options.min_change_phase = !a.no_min_change;
  options.time_limit_seconds = a.time_limit;
  options.node_limit = a.node_limit;
  const auto model = build_model(inst);
  const auto sol = solve(model, options);
  if (verbose) {
    err << "variables: " << model.variables.size()
        << "  constraints: " << model.constraints.size() << "\n"
        << "status: " << to_string(sol.status) << "  nodes: " << sol.stats.nodes
        << "  lp iterations: " << sol.stats.lp_iterations
        << "  seconds: " << sol.stats.wall_seconds << "\n";
  }
  if (!a.solution_out.empty()) {
    write_text_file(a.solution_out, solution_to_json(sol).dump(2) + "\n");
  }
  if (sol.has_incumbent &&
      (sol.status == SolveStatus::kOptimal ||
       sol.status == SolveStatus::kLimitReached)) {
    const auto format =
        a.report == "json" ? ReportFormat::kJson : ReportFormat::kPlainTable;
    emit(render_report(diff_schedules(inst, sol), format), a.out, out);
  } else {
    err << "no schedule: " << to_string(sol.status);
    if (!sol.message.empty()) err << " (" << sol.message << ")";
    err << "\n";
  }
  return exit_code(sol.status);
}

}  // namespace detail

// Parses and runs one command line. args[0] is the program name.
inline int run(const std::vector<std::string>& args, std::ostream& out,
               std::ostream& err) {
  CLI::App app{"Minimal-change course timetable repair", "ttmpp"};
  app.require_subcommand(1);
  app.set_version_flag("--version", "ttmpp 1.0.0");
  bool verbose = false;
  bool quiet = false;
  auto* v_flag = app.add_flag("-v,--verbose", verbose, "Print solver statistics");
  app.add_flag("-q,--quiet", quiet, "Suppress informational messages")
      ->excludes(v_flag);

  std::string validate_path;
  auto* validate = app.add_subcommand(
      "validate", "Check an instance; violations go to standard error");
  validate->add_option("instance", validate_path, "Instance JSON or CSV directory")
      ->required();

  detail::SolveArgs sa;
  auto* solve_cmd = app.add_subcommand("solve", "Repair a schedule and report swaps");
  solve_cmd->add_option("instance", sa.instance, "Instance JSON or CSV directory")
      ->required();
  solve_cmd->add_option("--scenario", sa.scenario, "Scenario JSON applied first");
  solve_cmd->add_flag("--no-min-change", sa.no_min_change,
                      "Skip the fewest-changes second phase");
  solve_cmd->add_option("--time-limit", sa.time_limit, "Wall-clock limit in seconds")
      ->check(CLI::PositiveNumber);
  solve_cmd->add_option("--node-limit", sa.node_limit, "Branch-and-bound node limit")
      ->check(CLI::PositiveNumber);
  solve_cmd->add_option("--report", sa.report, "Report format")
      ->check(CLI::IsMember({"plain", "json"}));
  solve_cmd->add_option("--out", sa.out, "Write the report here instead of stdout");
  solve_cmd->add_option("--solution", sa.solution_out, "Also write the raw solution JSON");

  std::string perturb_path, perturb_out, perturb_name;
  std::vector<std::string> cancels, adds;
  auto* perturb = app.add_subcommand("perturb", "Write a scenario from demand edits");
  perturb->add_option("instance", perturb_path, "Instance the scenario applies to")
      ->required();
  auto* cancel_opt = perturb->add_option(
      "--cancel", cancels, "Remove sections: course@slot[:count]");
  auto* add_opt =
      perturb->add_option("--add", adds, "Add sections: course@slot[:count]");
  perturb->add_option("--name", perturb_name, "Scenario name");
  perturb->add_option("--out", perturb_out, "Write the scenario here instead of stdout");

  std::string lp_path, lp_out, lp_scenario;
  auto* export_lp = app.add_subcommand("export-lp", "Write the model in LP format");
  export_lp->add_option("instance", lp_path, "Instance JSON or CSV directory")
      ->required();
  export_lp->add_option("--scenario", lp_scenario, "Scenario JSON applied first");
  export_lp->add_option("--out", lp_out, "Output LP file")->required();

  std::uint64_t seed = 1;
  std::string gen_out, gen_format = "json", gen_scenarios;
  auto* gen = app.add_subcommand("gen-paper-instance",
                                 "Generate a synthetic 17-course department");
  gen->add_option("--seed", seed, "Random seed");
  gen->add_option("--out", gen_out,
                  "Output file (json) or directory (csv); stdout if omitted");
  gen->add_option("--format", gen_format, "Output format")
      ->check(CLI::IsMember({"json", "csv"}));
  gen->add_option("--scenario-dir", gen_scenarios,
                  "Also write the three reference cancellation scenarios here");

  std::string store_dir, listen = "127.0.0.1:8080";
  std::size_t workers = default_worker_count();
  auto* serve = app.add_subcommand("serve", "Run the HTTP JSON API");
  serve->add_option("--store", store_dir, "Store directory")
      ->envname("TTMPP_STORE")
      ->required();
  serve->add_option("--listen", listen, "host:port to listen on");
  serve->add_option("--workers", workers, "Concurrent solve jobs")
      ->check(CLI::Range(1, 64));

  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  if (argv.empty()) argv.push_back("ttmpp");
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (validate->parsed()) {
      try {
        load_instance(validate_path);
      } catch (const InvalidInstanceError& e) {
        detail::print_violations(e.report(), validate_path, err);
        return kExitInvalidInstance;
      }
      return kExitOk;
    }

    if (solve_cmd->parsed()) return detail::run_solve(sa, verbose, out, err);

    if (perturb->parsed()) {
      if (cancel_opt->count() == 0 && add_opt->count() == 0) {
        throw UsageError("perturb needs at least one --cancel or --add");
      }
      Scenario sc;
      for (const auto& c : cancels) sc.demand_deltas.push_back(parse_delta_spec(c, -1));
      for (const auto& c : adds) sc.demand_deltas.push_back(parse_delta_spec(c, +1));
      sc.name = perturb_name;
      if (sc.name.empty()) {
        for (const auto& d : sc.demand_deltas) {
          if (!sc.name.empty()) sc.name += ", ";
          sc.name += (d.delta < 0 ? "cancel " : "add ") + d.course + "@" +
                     d.slot + ":" + std::to_string(std::abs(d.delta));
        }
      }
      require_valid(apply_scenario(load_instance(perturb_path), sc), "scenario");
      detail::emit(serialize_scenario_json(sc), perturb_out, out);
      return kExitOk;
    }

    if (export_lp->parsed()) {
      Instance inst = load_instance(lp_path);
      if (!lp_scenario.empty()) {
        inst = apply_scenario(
            inst, parse_scenario_json(read_text_file(lp_scenario), lp_scenario));
        require_valid(inst, lp_scenario);
      }
      write_text_file(lp_out, to_lp_string(build_model(inst)));
      return kExitOk;
    }

    if (gen->parsed()) {
      const auto inst = generate_paper_instance(seed);
      InstanceMetadata meta{"paper-shaped department, seed " + std::to_string(seed),
                            "synthetic: 17 courses, 57 sections, 22 faculty, 24 slots",
                            utc_timestamp()};
      if (gen_format == "csv") {
        if (gen_out.empty()) throw UsageError("--format csv needs --out <directory>");
        write_csv_bundle(inst, gen_out);
      } else {
        detail::emit(serialize_instance_json(inst, meta), gen_out, out);
      }
      if (!gen_scenarios.empty()) {
        std::error_code ec;
        std::filesystem::create_directories(gen_scenarios, ec);
        if (ec) throw FileError(gen_scenarios, "cannot create directory");
        const auto sc = paper_scenarios(inst);
        const std::filesystem::path dir = gen_scenarios;
        write_text_file(dir / "cancel_part_time.json",
                        serialize_scenario_json(sc.cancel_part_time));
        write_text_file(dir / "cancel_full_time.json",
                        serialize_scenario_json(sc.cancel_full_time));
        write_text_file(dir / "cancel_flagship.json",
                        serialize_scenario_json(sc.cancel_flagship));
      }
      return kExitOk;
    }

    if (serve->parsed()) {
      const auto addr = parse_listen_address(listen);
      // SIGINT and SIGTERM are taken by a sigwait thread that stops the
      // server; the mask must be set before any other thread starts.
      sigset_t stop_signals;
      sigemptyset(&stop_signals);
      sigaddset(&stop_signals, SIGINT);
      sigaddset(&stop_signals, SIGTERM);
      pthread_sigmask(SIG_BLOCK, &stop_signals, nullptr);
      ScenarioStore store(store_dir);
      Service service(store, workers);
      if (!service.server().bind_to_port(addr.host, addr.port)) {
        err << "ttmpp: cannot listen on " << listen << "\n";
        return kExitIo;
      }
      if (!quiet) {
        out << "serving " << store_dir << " on http://" << addr.host << ":"
            << addr.port << " (" << workers
            << (workers == 1 ? " worker)" : " workers)") << std::endl;
      }
      std::thread waiter([&] {
        int sig = 0;
        sigwait(&stop_signals, &sig);
        service.stop();
      });
      const bool ok = service.listen_after_bind();
      if (waiter.joinable()) {
        pthread_kill(waiter.native_handle(), SIGTERM);
        waiter.join();
      }
      if (!quiet) out << "stopped" << std::endl;
      return ok ? kExitOk : kExitIo;
    }
  } catch (const UsageError& e) {
    err << "ttmpp: " << e.what() << "\n";
    return kExitUsage;
  } catch (const InvalidInstanceError& e) {
    err << "ttmpp: " << e.what() << "\n";
    detail::print_violations(e.report(), e.file(), err);
    return kExitInvalidInstance;
  } catch (const FileError& e) {
    err << "ttmpp: " << e.what() << "\n";
    return kExitIo;
  } catch (const IoError& e) {
    err << "ttmpp: " << e.what() << "\n";
    return kExitUsage;
  } catch (const ScenarioError& e) {
    err << "ttmpp: " << e.what() << "\n";
    return kExitUsage;
  } catch (const StoreError& e) {
    err << "ttmpp: " << e.what() << "\n";
    return kExitIo;
  } catch (const std::exception& e) {
    err << "ttmpp: internal error: " << e.what() << "\n";
    return kExitSoftware;
  }
  return kExitUsage;
}

}  // namespace ttmpp::cli

#endif  // TTMPP_CLI_HPP_
