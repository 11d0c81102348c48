#pragma once

// JSON file formats shared with external tools (see docs/formats.md). Every
// document carries "format" and "version" fields; keys are written in sorted
// order and doubles in shortest round-trip form, so equal data gives equal
// bytes. Writers refuse data that breaks the documented invariants and write
// through a temporary file followed by a rename.

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "mrta/core.hpp"
#include "mrta/exact_solver.hpp"
#include "mrta/generator.hpp"
#include "mrta/matching.hpp"
#include "mrta/rewards.hpp"

namespace mrta {

// Bad input data of any kind. The message names
// the source and the location (line/column for syntax, JSON pointer for schema).
class DataError : public Error {
 public:
  using Error::Error;
};

inline constexpr int kFormatVersion = 1;

std::string instance_to_text(const ProblemInstance& instance);
ProblemInstance instance_from_text(const std::string& text, const std::string& source = "<text>");
void write_instance(const std::filesystem::path& path, const ProblemInstance& instance);
ProblemInstance read_instance(const std::filesystem::path& path);

std::string schedule_to_text(const Schedule& schedule);
Schedule schedule_from_text(const std::string& text, const std::string& source = "<text>");
void write_schedule(const std::filesystem::path& path, const Schedule& schedule);
Schedule read_schedule(const std::filesystem::path& path);

struct DecisionTensorSet {
  std::string instance_id;
  double gamma = kDefaultGamma;
  std::size_t n_robots = 0;
  std::size_t n_tasks = 0;
  std::vector<DecisionPoint> points;

  friend bool operator==(const DecisionTensorSet&, const DecisionTensorSet&) = default;
};

// Rejects: decision times not strictly increasing, shapes other than
// N x (M+1), targets outside [0, 1], non-zero targets where the mask is zero,
// non-finite values.
std::string decision_tensors_to_text(const DecisionTensorSet& set);
DecisionTensorSet decision_tensors_from_text(const std::string& text,
                                             const std::string& source = "<text>",
                                             const ProblemInstance* instance = nullptr);
void write_decision_tensors(const std::filesystem::path& path, const DecisionTensorSet& set);
// With `instance`, shapes are also checked against it.
DecisionTensorSet read_decision_tensors(const std::filesystem::path& path,
                                        const ProblemInstance* instance = nullptr);

struct RewardMatrixFile {
  std::string instance_id;
  std::size_t decision_index = 0;
  RewardMatrix rewards;

  friend bool operator==(const RewardMatrixFile&, const RewardMatrixFile&) = default;
};

std::string reward_matrix_to_text(const RewardMatrixFile& file);
RewardMatrixFile reward_matrix_from_text(const std::string& text,
                                         const std::string& source = "<text>",
                                         const ProblemInstance* instance = nullptr);
void write_reward_matrix(const std::filesystem::path& path, const RewardMatrixFile& file);
// Checks the shape against `instance` when given; the error names the expected N x (M+1).
RewardMatrixFile read_reward_matrix(const std::filesystem::path& path,
                                    const ProblemInstance* instance = nullptr);

struct ManifestRecord {
  std::string id;
  std::uint64_t seed = 0;
  std::string instance_file;
  std::string schedule_file;  // empty when the solver found nothing
  std::string tensor_file;    // empty unless included
  SolverStatus status = SolverStatus::kInfeasible;
  double makespan = 0.0;
  std::uint64_t explored_nodes = 0;
  std::size_t decision_points = 0;
  // Only optimally solved instances enter the training set.
  bool included = false;

  friend bool operator==(const ManifestRecord&, const ManifestRecord&) = default;
};

struct DatasetManifest {
  GeneratorConfig generator;
  std::uint64_t seed_start = 0;
  std::size_t count = 0;
  double gamma = kDefaultGamma;
  double time_limit = 60.0;
  std::vector<ManifestRecord> records;

  friend bool operator==(const DatasetManifest&, const DatasetManifest&) = default;
};

std::string manifest_to_text(const DatasetManifest& manifest);
DatasetManifest manifest_from_text(const std::string& text, const std::string& source = "<text>");
void write_manifest(const std::filesystem::path& path, const DatasetManifest& manifest);
DatasetManifest read_manifest(const std::filesystem::path& path);

std::string generator_config_to_text(const GeneratorConfig& config);
GeneratorConfig generator_config_from_text(const std::string& text,
                                           const std::string& source = "<text>");

// Writes `text` to `path` atomically (temporary sibling file, then rename).
void write_text_atomic(const std::filesystem::path& path, const std::string& text);
std::string read_text(const std::filesystem::path& path);

}  // namespace mrta
