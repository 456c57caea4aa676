#pragma once

// Helpers shared by the CLI tests and the acceptance binary: an isolated
// scratch directory, in-process CLI invocation, and scripted replay files
// standing in for a chat model.

#include <filesystem>
#include <fstream>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "flakyfix/cli.hpp"
#include "flakyfix/corpus.hpp"
#include "flakyfix/repair.hpp"

namespace pipeline {

namespace fs = std::filesystem;

struct Scratch {
  fs::path dir;
  explicit Scratch(const std::string& name) : dir(fs::temp_directory_path() / name) {
    fs::remove_all(dir);
    fs::create_directories(dir);
  }
  ~Scratch() { fs::remove_all(dir); }
  Scratch(const Scratch&) = delete;
  Scratch& operator=(const Scratch&) = delete;
  std::string path(const std::string& name) const { return (dir / name).string(); }
};

struct CliRun {
  int code = -1;
  std::string out, err;
};

inline CliRun cli(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  CliRun r;
  r.code = flakyfix::run(args, out, err);
  r.out = out.str();
  r.err = err.str();
  return r;
}

inline std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// Writes one replay file per record: whatever `respond` returns for the
// prompt the CLI will send for that record and prompt kind.
inline void script_replies(const flakyfix::Corpus& corpus, flakyfix::PromptKind kind, const std::string& dir,
                           const std::function<std::string(const flakyfix::TestRecord&)>& respond,
                           const std::string& model = "gpt-3.5-turbo", double temperature = 0.0) {
  fs::create_directories(dir);
  for (const auto& job : flakyfix::make_jobs(corpus, kind, nullptr)) {
    const auto& rec = *std::find_if(corpus.begin(), corpus.end(), [&](const auto& r) { return r.id == job.record_id; });
    const flakyfix::ChatRequest req{model, temperature, flakyfix::build_prompt(job.spec)};
    std::ofstream(fs::path(dir) / (flakyfix::replay_key(req) + ".json")) << nlohmann::json{{"raw_response", respond(rec)}}.dump();
  }
}

inline std::string fenced(const std::string& code) { return "Here is the fixed test:\n```java\n" + code + "\n```\n"; }

}  // namespace pipeline
