#pragma once

#include <filesystem>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "spdf/workspace.hpp"

namespace httplib {
class Server;
}

namespace spdf::service {

/// Workspaces keyed by project id. New projects are created under `root`; extra
/// workspaces may be mounted from elsewhere.
class ProjectStore {
 public:
  explicit ProjectStore(std::optional<std::filesystem::path> root,
                        std::map<std::string, std::filesystem::path> mounts = {});

  std::vector<std::string> ids() const;
  Workspace& get(const std::string& id);
  Workspace& create(const std::string& id, corpus::Project project);

 private:
  std::optional<std::filesystem::path> root_;
  std::map<std::string, std::unique_ptr<Workspace>> workspaces_;
  mutable std::mutex mutex_;
};

struct ServiceConfig {
  std::string host = "127.0.0.1";
  int port = 8080;
};

/// HTTP+JSON API over a ProjectStore.
class Service {
 public:
  explicit Service(ProjectStore& store);
  ~Service();

  Service(const Service&) = delete;
  Service& operator=(const Service&) = delete;

  /// Binds to the configured address; returns the bound port (useful with port 0).
  int bind(const ServiceConfig& config);
  /// Blocks until stop() is called.
  void run();
  void stop();

 private:
  void routes();

  ProjectStore& store_;
  std::unique_ptr<httplib::Server> server_;
};

}  // namespace spdf::service
