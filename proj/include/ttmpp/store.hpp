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

// Flat-directory store of instances and scenarios.
//
//   <root>/index.json              {"next_id", "instances", "scenarios"}
//   <root>/instances/<id>.json     instance documents
//   <root>/scenarios/<id>.json     scenario documents
//   <root>/.lock                   flock target
//
// Ids come from one counter per store and are never reused. Writers hold
// the store mutex and an exclusive flock; readers take both shared. Every
// file is written to a temporary name, synced and renamed into place.

#ifndef TTMPP_STORE_HPP_
#define TTMPP_STORE_HPP_

#include <fcntl.h>
#include <sys/file.h>
#include <unistd.h>

#include <cerrno>
#include <cstring>
#include <algorithm>
#include <filesystem>
#include <map>
#include <mutex>
#include <shared_mutex>
#include <string>
#include <vector>

#include "ttmpp/io.hpp"

namespace ttmpp {

class StoreError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class NotFoundError : public StoreError {
 public:
  NotFoundError(const std::string& kind, const std::string& id)
      : StoreError("unknown " + kind + " '" + id + "'"), kind_(kind), id_(id) {}
  const std::string& kind() const { return kind_; }
  const std::string& id() const { return id_; }

 private:
  std::string kind_;
  std::string id_;
};

namespace detail {

inline void sync_fd(int fd, const std::string& what) {
  if (::fsync(fd) != 0) {
    throw StoreError("fsync failed for " + what + ": " + std::strerror(errno));
  }
}

inline void write_atomic(const std::filesystem::path& path,
                         const std::string& text) {
  const auto tmp = path.string() + ".tmp";
  const int fd = ::open(tmp.c_str(), O_WRONLY | O_CREAT | O_TRUNC, 0644);
  if (fd < 0) {
    throw StoreError("cannot write " + tmp + ": " + std::strerror(errno));
  }
  std::size_t done = 0;
  while (done < text.size()) {
    const auto n = ::write(fd, text.data() + done, text.size() - done);
    if (n < 0) {
      if (errno == EINTR) continue;
      const std::string err = std::strerror(errno);
      ::close(fd);
      throw StoreError("write failed for " + tmp + ": " + err);
    }
    done += static_cast<std::size_t>(n);
  }
  sync_fd(fd, tmp);
  ::close(fd);
  if (std::rename(tmp.c_str(), path.c_str()) != 0) {
    throw StoreError("rename failed for " + path.string() + ": " +
                     std::strerror(errno));
  }
  const int dir = ::open(path.parent_path().c_str(), O_RDONLY | O_DIRECTORY);
  if (dir >= 0) {
    ::fsync(dir);
    ::close(dir);
  }
}

// Opens its own descriptor: flock state belongs to the open file, so
// sharing one descriptor between threads would let one unlock the other.
class FileLock {
 public:
  FileLock(const std::filesystem::path& path, bool exclusive) {
    fd_ = ::open(path.c_str(), O_RDWR | O_CREAT | O_CLOEXEC, 0644);
    if (fd_ < 0) {
      throw StoreError("cannot open " + path.string() + ": " +
                       std::strerror(errno));
    }
    while (::flock(fd_, exclusive ? LOCK_EX : LOCK_SH) != 0) {
      if (errno != EINTR) {
        const std::string err = std::strerror(errno);
        ::close(fd_);
        throw StoreError("flock failed: " + err);
      }
    }
  }
  ~FileLock() {
    ::flock(fd_, LOCK_UN);
    ::close(fd_);
  }
  FileLock(const FileLock&) = delete;
  FileLock& operator=(const FileLock&) = delete;

 private:
  int fd_;
};

}  // namespace detail

class ScenarioStore {
 public:
  explicit ScenarioStore(std::filesystem::path root) : root_(std::move(root)) {
    std::error_code ec;
    std::filesystem::create_directories(root_ / "instances", ec);
    std::filesystem::create_directories(root_ / "scenarios", ec);
    if (ec) {
      throw StoreError("cannot create store at " + root_.string() + ": " +
                       ec.message());
    }
    std::unique_lock guard(mutex_);
    detail::FileLock lock(lock_path(), true);
    if (!std::filesystem::exists(index_path())) {
      write_index({});
    } else {
      sweep(read_index());
    }
  }
  ScenarioStore(const ScenarioStore&) = delete;
  ScenarioStore& operator=(const ScenarioStore&) = delete;

  const std::filesystem::path& root() const { return root_; }

  std::string put_instance(const InstanceDocument& doc) {
    require_valid(doc.instance, "instance");
    std::unique_lock guard(mutex_);
    detail::FileLock lock(lock_path(), true);
    auto index = read_index();
    const std::string id = "instance-" + std::to_string(index.next_id++);
    detail::write_atomic(instance_path(id),
                         serialize_instance_json(doc.instance, doc.metadata));
    index.instances.push_back(id);
    write_index(index);
    return id;
  }

  InstanceDocument get_instance(const std::string& id) const {
    std::shared_lock guard(mutex_);
    detail::FileLock lock(lock_path(), false);
    const auto index = read_index();
    if (!contains(index.instances, id)) throw NotFoundError("instance", id);
    return parse_instance_document(read_text(instance_path(id)), id);
  }

  std::vector<std::string> list_instances() const {
    std::shared_lock guard(mutex_);
    detail::FileLock lock(lock_path(), false);
    return read_index().instances;
  }

  // Scenarios must name an existing base instance.
  std::string put_scenario(const Scenario& sc) {
    std::unique_lock guard(mutex_);
    detail::FileLock lock(lock_path(), true);
    auto index = read_index();
    if (!contains(index.instances, sc.base_instance)) {
      throw NotFoundError("instance", sc.base_instance);
    }
    const std::string id = "scenario-" + std::to_string(index.next_id++);
    detail::write_atomic(scenario_path(id), serialize_scenario_json(sc));
    index.scenarios[id] = sc.base_instance;
    write_index(index);
    return id;
  }

  Scenario get_scenario(const std::string& id) const {
    std::shared_lock guard(mutex_);
    detail::FileLock lock(lock_path(), false);
    const auto index = read_index();
    if (!index.scenarios.count(id)) throw NotFoundError("scenario", id);
    return parse_scenario_json(read_text(scenario_path(id)), id);
  }

  // All scenarios, or only those built on `instance_id` when it is given.
  std::vector<std::string> list_scenarios(
      const std::string& instance_id = "") const {
    std::shared_lock guard(mutex_);
    detail::FileLock lock(lock_path(), false);
    std::vector<std::string> out;
    for (const auto& [id, base] : read_index().scenarios) {
      if (instance_id.empty() || base == instance_id) out.push_back(id);
    }
    return out;
  }

  void delete_scenario(const std::string& id) {
    std::unique_lock guard(mutex_);
    detail::FileLock lock(lock_path(), true);
    auto index = read_index();
    if (!index.scenarios.erase(id)) throw NotFoundError("scenario", id);
    write_index(index);
    std::error_code ec;
    std::filesystem::remove(scenario_path(id), ec);
  }

 private:
  struct Index {
    long next_id = 1;
    std::vector<std::string> instances;
    std::map<std::string, std::string> scenarios;  // id -> base instance
  };

  static bool contains(const std::vector<std::string>& v,
                       const std::string& s) {
    return std::find(v.begin(), v.end(), s) != v.end();
  }

  std::filesystem::path index_path() const { return root_ / "index.json"; }
  std::filesystem::path lock_path() const { return root_ / ".lock"; }
  std::filesystem::path instance_path(const std::string& id) const {
    return root_ / "instances" / (id + ".json");
  }
  std::filesystem::path scenario_path(const std::string& id) const {
    return root_ / "scenarios" / (id + ".json");
  }

  static std::string read_text(const std::filesystem::path& p) {
    try {
      return read_text_file(p);
    } catch (const IoError& e) {
      throw StoreError(e.what());
    }
  }

  Index read_index() const {
    Index index;
    try {
      const auto j = json::parse(read_text(index_path()));
      index.next_id = j.at("next_id").get<long>();
      index.instances = j.at("instances").get<std::vector<std::string>>();
      index.scenarios =
          j.at("scenarios").get<std::map<std::string, std::string>>();
    } catch (const json::exception& e) {
      throw StoreError("corrupt store index " + index_path().string() + ": " +
                       e.what());
    }
    return index;
  }

  void write_index(const Index& index) const {
    const json j = {{"next_id", index.next_id},
                    {"instances", index.instances},
                    {"scenarios", index.scenarios}};
    detail::write_atomic(index_path(), j.dump(2) + "\n");
  }

  // Removes files a crash left behind without an index entry.
  void sweep(const Index& index) const {
    auto clean = [&](const char* sub, auto known) {
      for (const auto& entry :
           std::filesystem::directory_iterator(root_ / sub)) {
        const auto name = entry.path().filename().string();
        const bool tmp = name.size() > 4 &&
                         name.compare(name.size() - 4, 4, ".tmp") == 0;
        if (tmp || !known(entry.path().stem().string())) {
          std::error_code ec;
          std::filesystem::remove(entry.path(), ec);
        }
      }
    };
    clean("instances",
          [&](const std::string& id) { return contains(index.instances, id); });
    clean("scenarios",
          [&](const std::string& id) { return index.scenarios.count(id) > 0; });
  }

  std::filesystem::path root_;
  mutable std::shared_mutex mutex_;
};

}  // namespace ttmpp

#endif  // TTMPP_STORE_HPP_
