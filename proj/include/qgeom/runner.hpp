#ifndef QGEOM_RUNNER_HPP
#define QGEOM_RUNNER_HPP

#include <map>
#include <string>
#include <vector>

#include "qgeom/model.hpp"

namespace qgeom::runner {

struct TaskStatus {
    std::string name;
    std::string status; // "ok" | "error"
    std::string error_code;
    std::string error_message;
    double wall_ms = 0;
    std::vector<std::string> artifacts;
};

struct RunManifest {
    std::string scenario_hash;
    std::vector<TaskStatus> tasks;
    bool all_ok() const {
        for (const auto& t : tasks)
            if (t.status != "ok") return false;
        return true;
    }
};

struct TaskDoc {
    std::string name;
    std::string description;
    std::vector<std::pair<std::string, std::string>> params; // key, doc
};

// Stable catalog of the registered tasks, sorted by name.
std::vector<TaskDoc> list_tasks();

struct RunOptions {
    std::string out_dir; // empty: $QGEOM_OUT or "./out"
    int jobs = 1;
    std::map<std::string, double> tolerance_overrides;
};

// Executes the scenario file: builds the model, runs every task in
// declaration order (optionally in parallel), writes one JSON report per
// task plus an aggregate CSV and the manifest. Task failures are isolated.
RunManifest run(const std::string& scenario_path, const RunOptions& opts);

// Model construction from the scenario's model document (exposed for tests).
Model model_from_document(const std::string& json_text);

} // namespace qgeom::runner

#endif
